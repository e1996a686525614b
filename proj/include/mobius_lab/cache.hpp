#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "mobius_lab/sieve.hpp"

namespace mobius_lab {

// Segment cache layout, all integers little-endian:
//   "MSPF" | u32 version | u64 lo | u64 hi | (u64 spf, i8 mu, u8 omega) per n in [lo, hi)
inline constexpr std::array<char, 4> kCacheMagic{'M', 'S', 'P', 'F'};
inline constexpr std::uint32_t kCacheVersion = 1;
inline constexpr std::size_t kCacheHeaderBytes = 4 + 4 + 8 + 8;
inline constexpr std::size_t kCacheRecordBytes = 8 + 1 + 1;

std::string encode_segment(const FactorTable& table, std::uint32_t version = kCacheVersion);

// Throws ErrorKind::CacheInvalid on bad magic, version mismatch, or a length
// that does not match the header. The result has no gpf column.
FactorTable decode_segment(std::string_view bytes, std::uint32_t expected_version = kCacheVersion);

// Written to a temporary sibling and renamed into place.
void write_segment_cache(const FactorTable& table, const std::filesystem::path& path);
FactorTable read_segment_cache(const std::filesystem::path& path);

std::filesystem::path segment_cache_path(const std::filesystem::path& dir, std::uint64_t lo,
                                         std::uint64_t hi);

// Reads [lo, hi) from `dir` when a valid cache file exists, otherwise sieves it
// and writes the cache. `from_cache` (optional) reports which path was taken.
FactorTable load_or_build_segment(std::uint64_t lo, std::uint64_t hi,
                                  std::span<const std::uint64_t> base_primes,
                                  const std::filesystem::path& dir,
                                  std::uint64_t capacity = kDefaultSegmentCapacity,
                                  bool* from_cache = nullptr);

}  // namespace mobius_lab

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mobius_lab/cache.hpp"
#include "mobius_lab/error.hpp"

using namespace mobius_lab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const char* name) {
    const auto dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ErrorKind decode_error(std::string_view bytes, std::uint32_t version = kCacheVersion) {
    try {
        decode_segment(bytes, version);
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Config;
}

}  // namespace

TEST_SUITE("cache") {

TEST_CASE("layout") {
    const auto table = build_segment(1, 11);
    const auto bytes = encode_segment(table);
    REQUIRE(bytes.size() == kCacheHeaderBytes + 10 * kCacheRecordBytes);
    CHECK(bytes.substr(0, 4) == "MSPF");
    CHECK(static_cast<unsigned char>(bytes[4]) == 1);  // version, little-endian
    CHECK(bytes[5] == 0);
    CHECK(static_cast<unsigned char>(bytes[8]) == 1);   // lo
    CHECK(static_cast<unsigned char>(bytes[16]) == 11);  // hi
    // n = 1: sentinel spf, mu = 1, omega = 0
    for (int i = 0; i < 8; ++i) CHECK(static_cast<unsigned char>(bytes[24 + i]) == 0xFF);
    CHECK(bytes[32] == 1);
    CHECK(bytes[33] == 0);
    // n = 2
    CHECK(bytes[34] == 2);
    CHECK(static_cast<signed char>(bytes[42]) == -1);
    CHECK(bytes[43] == 1);
}

TEST_CASE("round trip is byte-identical") {
    const auto dir = fresh_dir("mobius_lab_cache_rt");
    const auto table = build_segment(1000, 50'000);
    const auto path = segment_cache_path(dir, 1000, 50'000);
    CHECK(path.filename() == "seg_1000_50000.mspf");
    write_segment_cache(table, path);
    const auto first = slurp(path);
    const auto back = read_segment_cache(path);
    CHECK_FALSE(back.has_gpf());
    CHECK(back.lo() == 1000);
    for (std::uint64_t n = 1000; n < 50'000; ++n) {
        REQUIRE(back.spf(n) == table.spf(n));
        REQUIRE(back.mu(n) == table.mu(n));
        REQUIRE(back.omega(n) == table.omega(n));
    }
    write_segment_cache(back, path);
    CHECK(slurp(path) == first);
    CHECK_FALSE(fs::exists(fs::path(path.string() + ".tmp")));
    fs::remove_all(dir);
}

TEST_CASE("invalid caches") {
    const auto bytes = encode_segment(build_segment(1, 101));
    CHECK(decode_error(bytes.substr(0, bytes.size() - 3)) == ErrorKind::CacheInvalid);
    CHECK(decode_error(bytes.substr(0, 10)) == ErrorKind::CacheInvalid);
    CHECK(decode_error(bytes + "x") == ErrorKind::CacheInvalid);
    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    CHECK(decode_error(bad_magic) == ErrorKind::CacheInvalid);
    CHECK(decode_error(bytes, kCacheVersion + 1) == ErrorKind::CacheInvalid);
    CHECK(decode_error(encode_segment(build_segment(1, 101), kCacheVersion + 1)) == ErrorKind::CacheInvalid);
    CHECK_THROWS_AS(read_segment_cache("/nonexistent/seg.mspf"), Error);
}

TEST_CASE("stale caches are rebuilt") {
    const auto dir = fresh_dir("mobius_lab_cache_stale");
    const std::vector<std::uint64_t> base{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
    bool hit = true;
    const auto built = load_or_build_segment(1, 1000, base, dir, kDefaultSegmentCapacity, &hit);
    CHECK_FALSE(hit);
    const auto path = segment_cache_path(dir, 1, 1000);
    const auto good = slurp(path);
    load_or_build_segment(1, 1000, base, dir, kDefaultSegmentCapacity, &hit);
    CHECK(hit);

    // version bump
    std::ofstream(path, std::ios::binary) << encode_segment(built, kCacheVersion + 1);
    load_or_build_segment(1, 1000, base, dir, kDefaultSegmentCapacity, &hit);
    CHECK_FALSE(hit);
    CHECK(slurp(path) == good);

    // truncation
    std::ofstream(path, std::ios::binary) << good.substr(0, good.size() / 2);
    const auto rebuilt = load_or_build_segment(1, 1000, base, dir, kDefaultSegmentCapacity, &hit);
    CHECK_FALSE(hit);
    CHECK(rebuilt == built);
    CHECK(slurp(path) == good);
    fs::remove_all(dir);
}

}

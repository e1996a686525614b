#include "mobius_lab/cache.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "mobius_lab/error.hpp"

namespace mobius_lab {

namespace {

template <class U>
void put_le(std::string& out, U v) {
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        out.push_back(static_cast<char>(static_cast<std::uint64_t>(v) >> (8 * i) & 0xff));
    }
}

template <class U>
U get_le(std::string_view bytes, std::size_t at) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[at + i])) << (8 * i);
    }
    return static_cast<U>(v);
}

}  // namespace

std::string encode_segment(const FactorTable& table, std::uint32_t version) {
    std::string out;
    out.reserve(kCacheHeaderBytes + table.size() * kCacheRecordBytes);
    out.append(kCacheMagic.data(), kCacheMagic.size());
    put_le(out, version);
    put_le(out, table.lo());
    put_le(out, table.hi());
    const auto spf = table.spf_column();
    const auto mu = table.mu_column();
    const auto omega = table.omega_column();
    for (std::size_t i = 0; i < table.size(); ++i) {
        put_le(out, spf[i]);
        out.push_back(static_cast<char>(mu[i]));
        out.push_back(static_cast<char>(omega[i]));
    }
    return out;
}

FactorTable decode_segment(std::string_view bytes, std::uint32_t expected_version) {
    if (bytes.size() < kCacheHeaderBytes ||
        bytes.substr(0, 4) != std::string_view(kCacheMagic.data(), kCacheMagic.size())) {
        fail(ErrorKind::CacheInvalid, "segment cache: bad magic or truncated header");
    }
    const auto version = get_le<std::uint32_t>(bytes, 4);
    if (version != expected_version) {
        fail(ErrorKind::CacheInvalid, "segment cache: version " + std::to_string(version) +
                                          ", expected " + std::to_string(expected_version));
    }
    const auto lo = get_le<std::uint64_t>(bytes, 8);
    const auto hi = get_le<std::uint64_t>(bytes, 16);
    if (lo < 1 || hi <= lo ||
        (bytes.size() - kCacheHeaderBytes) / kCacheRecordBytes != hi - lo ||
        (bytes.size() - kCacheHeaderBytes) % kCacheRecordBytes != 0) {
        fail(ErrorKind::CacheInvalid, "segment cache: length does not match [lo, hi)");
    }
    const auto n = static_cast<std::size_t>(hi - lo);
    std::vector<std::uint64_t> spf(n);
    std::vector<std::int8_t> mu(n);
    std::vector<std::uint8_t> omega(n);
    std::size_t at = kCacheHeaderBytes;
    for (std::size_t i = 0; i < n; ++i, at += kCacheRecordBytes) {
        spf[i] = get_le<std::uint64_t>(bytes, at);
        mu[i] = static_cast<std::int8_t>(bytes[at + 8]);
        omega[i] = static_cast<std::uint8_t>(bytes[at + 9]);
    }
    return FactorTable(lo, hi, std::move(spf), {}, std::move(mu), std::move(omega));
}

void write_segment_cache(const FactorTable& table, const std::filesystem::path& path) {
    const std::string bytes = encode_segment(table);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::Config, "cannot write segment cache " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) fail(ErrorKind::Config, "short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) fail(ErrorKind::Config, "cannot move segment cache into place: " + ec.message());
}

FactorTable read_segment_cache(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::CacheInvalid, "segment cache missing: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return decode_segment(buf.str());
}

std::filesystem::path segment_cache_path(const std::filesystem::path& dir, std::uint64_t lo,
                                         std::uint64_t hi) {
    return dir / ("seg_" + std::to_string(lo) + "_" + std::to_string(hi) + ".mspf");
}

FactorTable load_or_build_segment(std::uint64_t lo, std::uint64_t hi,
                                  std::span<const std::uint64_t> base_primes,
                                  const std::filesystem::path& dir, std::uint64_t capacity,
                                  bool* from_cache) {
    const auto path = segment_cache_path(dir, lo, hi);
    if (std::filesystem::exists(path)) {
        try {
            auto table = read_segment_cache(path);
            if (table.lo() == lo && table.hi() == hi) {
                if (from_cache) *from_cache = true;
                return table;
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::CacheInvalid) throw;
        }
    }
    auto table = build_segment(lo, hi, base_primes, capacity);
    std::filesystem::create_directories(dir);
    write_segment_cache(table, path);
    if (from_cache) *from_cache = false;
    return table;
}

}  // namespace mobius_lab

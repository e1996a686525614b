#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace mobius_lab {

// Stored as P^-(1): no prime-set membership test can accept it.
inline constexpr std::uint64_t kInfinitySentinel = std::numeric_limits<std::uint64_t>::max();

inline constexpr std::uint64_t kDefaultSegmentLength = std::uint64_t{1} << 22;
inline constexpr std::uint64_t kDefaultSegmentCapacity = std::uint64_t{1} << 28;

// Smallest/largest prime factor, Moebius value and number of distinct prime
// factors for every n in [lo, hi). Immutable once built.
//
// Tables restored from a segment cache carry no gpf column (the on-disk format
// stores spf, mu and omega only); has_gpf() reports which kind this is.
class FactorTable {
public:
    FactorTable() = default;
    FactorTable(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t> spf,
                std::vector<std::uint64_t> gpf, std::vector<std::int8_t> mu,
                std::vector<std::uint8_t> omega);

    std::uint64_t lo() const noexcept { return lo_; }
    std::uint64_t hi() const noexcept { return hi_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(hi_ - lo_); }
    bool has_gpf() const noexcept { return !gpf_.empty(); }
    bool covers(std::uint64_t n) const noexcept { return n >= lo_ && n < hi_; }

    std::uint64_t spf(std::uint64_t n) const { return spf_[n - lo_]; }
    std::uint64_t gpf(std::uint64_t n) const { return gpf_[n - lo_]; }
    int mu(std::uint64_t n) const { return mu_[n - lo_]; }
    unsigned omega(std::uint64_t n) const { return omega_[n - lo_]; }

    std::span<const std::uint64_t> spf_column() const noexcept { return spf_; }
    std::span<const std::uint64_t> gpf_column() const noexcept { return gpf_; }
    std::span<const std::int8_t> mu_column() const noexcept { return mu_; }
    std::span<const std::uint8_t> omega_column() const noexcept { return omega_; }

    // Test hook: overwrite a Moebius value (used to check that verification
    // harnesses notice corrupted input).
    void corrupt_mu_for_testing(std::uint64_t n, int value);

    friend bool operator==(const FactorTable&, const FactorTable&) = default;

private:
    std::uint64_t lo_ = 1;
    std::uint64_t hi_ = 1;
    std::vector<std::uint64_t> spf_;
    std::vector<std::uint64_t> gpf_;
    std::vector<std::int8_t> mu_;
    std::vector<std::uint8_t> omega_;
};

struct PointFactors {
    std::uint64_t spf;
    std::uint64_t gpf;
    int mu;
    unsigned omega;

    friend bool operator==(const PointFactors&, const PointFactors&) = default;
};

struct PrimePower {
    std::uint64_t prime;
    unsigned exponent;
};

std::uint64_t isqrt(std::uint64_t n) noexcept;

// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(std::uint64_t n) noexcept;

// Smallest prime strictly greater than n.
std::uint64_t next_prime(std::uint64_t n);

// Segmented sieve of Eratosthenes. Primes in [lo, hi), ascending.
std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi);

// Streams the primes in [lo, hi) in ascending order without materialising them.
void for_each_prime(std::uint64_t lo, std::uint64_t hi,
                    const std::function<void(std::uint64_t)>& visit);

// `base_primes` must list every prime up to floor(sqrt(hi - 1)) in ascending order.
FactorTable build_segment(std::uint64_t lo, std::uint64_t hi,
                          std::span<const std::uint64_t> base_primes,
                          std::uint64_t capacity = kDefaultSegmentCapacity);

// Convenience overload that sieves its own base primes.
FactorTable build_segment(std::uint64_t lo, std::uint64_t hi);

// Trial division. Independent of build_segment; used as its oracle.
PointFactors point_factor(std::uint64_t n);

// Full factorisation by trial division, primes ascending.
std::vector<PrimePower> factorize(std::uint64_t n);

}  // namespace mobius_lab

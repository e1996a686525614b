#include "mobius_lab/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mobius_lab/error.hpp"

namespace mobius_lab {

namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1;
    base %= m;
    while (exp) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

// Plain sieve of Eratosthenes on [0, limit].
std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
    std::vector<std::uint64_t> primes;
    if (limit < 2) return primes;
    std::vector<char> composite(limit + 1, 0);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
    }
    return primes;
}

constexpr std::uint64_t kPrimeSieveBlock = std::uint64_t{1} << 20;

}  // namespace

FactorTable::FactorTable(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t> spf,
                         std::vector<std::uint64_t> gpf, std::vector<std::int8_t> mu,
                         std::vector<std::uint8_t> omega)
    : lo_(lo), hi_(hi), spf_(std::move(spf)), gpf_(std::move(gpf)), mu_(std::move(mu)),
      omega_(std::move(omega)) {
    const auto n = size();
    if (hi < lo || spf_.size() != n || mu_.size() != n || omega_.size() != n ||
        (!gpf_.empty() && gpf_.size() != n)) {
        fail(ErrorKind::Precondition, "FactorTable columns do not match [lo, hi)");
    }
}

void FactorTable::corrupt_mu_for_testing(std::uint64_t n, int value) {
    mu_.at(n - lo_) = static_cast<std::int8_t>(value);
}

std::uint64_t isqrt(std::uint64_t n) noexcept {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

std::uint64_t next_prime(std::uint64_t n) {
    if (n < 2) return 2;
    std::uint64_t c = n + 1;
    while (!is_prime(c)) {
        if (c == kInfinitySentinel) fail(ErrorKind::Domain, "next_prime: overflow");
        ++c;
    }
    return c;
}

void for_each_prime(std::uint64_t lo, std::uint64_t hi,
                    const std::function<void(std::uint64_t)>& visit) {
    if (hi <= lo) return;
    lo = std::max<std::uint64_t>(lo, 2);
    if (hi <= lo) return;
    const auto base = small_primes(isqrt(hi - 1));
    std::vector<char> composite;
    for (std::uint64_t block_lo = lo; block_lo < hi;) {
        const std::uint64_t block_hi = std::min(hi, block_lo + kPrimeSieveBlock);
        composite.assign(block_hi - block_lo, 0);
        for (std::uint64_t p : base) {
            if (p * p >= block_hi) break;
            std::uint64_t start = std::max(p * p, (block_lo + p - 1) / p * p);
            for (std::uint64_t m = start; m < block_hi; m += p) composite[m - block_lo] = 1;
        }
        for (std::uint64_t n = block_lo; n < block_hi; ++n) {
            if (!composite[n - block_lo]) visit(n);
        }
        block_lo = block_hi;
    }
}

std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) {
    if (lo < 1 || lo >= hi) {
        fail(ErrorKind::Precondition, "primes_in requires 1 <= lo < hi");
    }
    std::vector<std::uint64_t> out;
    for_each_prime(lo, hi, [&](std::uint64_t p) { out.push_back(p); });
    return out;
}

FactorTable build_segment(std::uint64_t lo, std::uint64_t hi,
                          std::span<const std::uint64_t> base_primes, std::uint64_t capacity) {
    if (lo < 1 || lo >= hi) {
        fail(ErrorKind::Precondition, "build_segment requires 1 <= lo < hi");
    }
    if (hi - lo > capacity) {
        fail(ErrorKind::Capacity, "segment length " + std::to_string(hi - lo) +
                                      " exceeds capacity " + std::to_string(capacity));
    }
    const std::uint64_t root = isqrt(hi - 1);
    if (!std::is_sorted(base_primes.begin(), base_primes.end())) {
        fail(ErrorKind::Precondition, "base primes must be ascending");
    }
    const auto expected = small_primes(root);
    const auto used_end = std::upper_bound(base_primes.begin(), base_primes.end(), root);
    if (!std::equal(base_primes.begin(), used_end, expected.begin(), expected.end())) {
        fail(ErrorKind::Precondition,
             "base primes are not complete up to sqrt(hi - 1) = " + std::to_string(root));
    }

    const auto len = static_cast<std::size_t>(hi - lo);
    std::vector<std::uint64_t> spf(len, 0);
    std::vector<std::uint64_t> gpf(len, 1);
    std::vector<std::int8_t> mu(len, 1);
    std::vector<std::uint8_t> omega(len, 0);
    // Product of the prime powers found so far; the leftover cofactor n / prod
    // is 1 or a single prime above sqrt(hi - 1).
    std::vector<std::uint64_t> found(len, 1);

    for (std::uint64_t p : std::span(base_primes.begin(), used_end)) {
        for (std::uint64_t m = (lo + p - 1) / p * p; m < hi; m += p) {
            const auto i = static_cast<std::size_t>(m - lo);
            if (spf[i] == 0) spf[i] = p;
            gpf[i] = p;
            ++omega[i];
            mu[i] = static_cast<std::int8_t>(-mu[i]);
            found[i] *= p;
        }
        for (std::uint64_t pk = p * p; pk < hi;) {
            for (std::uint64_t m = (lo + pk - 1) / pk * pk; m < hi; m += pk) {
                const auto i = static_cast<std::size_t>(m - lo);
                mu[i] = 0;
                found[i] *= p;
            }
            if (pk > (hi - 1) / p) break;
            pk *= p;
        }
    }

    for (std::size_t i = 0; i < len; ++i) {
        const std::uint64_t n = lo + i;
        if (n == 1) {
            spf[i] = kInfinitySentinel;
            continue;
        }
        if (found[i] != n) {
            const std::uint64_t cofactor = n / found[i];
            gpf[i] = cofactor;
            ++omega[i];
            mu[i] = static_cast<std::int8_t>(-mu[i]);
            if (spf[i] == 0) spf[i] = cofactor;
        }
    }
    return FactorTable(lo, hi, std::move(spf), std::move(gpf), std::move(mu), std::move(omega));
}

FactorTable build_segment(std::uint64_t lo, std::uint64_t hi) {
    if (lo < 1 || lo >= hi) {
        fail(ErrorKind::Precondition, "build_segment requires 1 <= lo < hi");
    }
    const auto base = small_primes(isqrt(hi - 1));
    return build_segment(lo, hi, base, std::max(kDefaultSegmentCapacity, hi - lo));
}

std::vector<PrimePower> factorize(std::uint64_t n) {
    if (n == 0) fail(ErrorKind::Domain, "factorize: n must be positive");
    std::vector<PrimePower> out;
    auto strip = [&](std::uint64_t p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.push_back({p, e});
    };
    strip(2);
    for (std::uint64_t p = 3; p <= n / p; p += 2) strip(p);
    if (n > 1) out.push_back({n, 1});
    return out;
}

PointFactors point_factor(std::uint64_t n) {
    if (n == 0) fail(ErrorKind::Domain, "point_factor: n must be positive");
    if (n == 1) return {kInfinitySentinel, 1, 1, 0};
    const auto factors = factorize(n);
    int mu = (factors.size() % 2 == 0) ? 1 : -1;
    for (const auto& f : factors) {
        if (f.exponent > 1) mu = 0;
    }
    return {factors.front().prime, factors.back().prime, mu,
            static_cast<unsigned>(factors.size())};
}

}  // namespace mobius_lab

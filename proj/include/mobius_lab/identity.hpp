#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mobius_lab/prime_sets.hpp"
#include "mobius_lab/sieve.hpp"

namespace mobius_lab {

// Exact checks of the decomposition
//     chi_{P_y}(n) mu(n) omega(n) = (g_y * mu)(n),
//     g_y(n) = sum_{m | n} chi_{P_y}(m) mu(m) omega(m),
// where P_y is the set intersected with [2, y] and chi_{P_y}(m) = 1 iff P^-(m) is in P_y.

inline constexpr std::uint64_t kDivisorBudget = 10'000'000;

// Two readings of the closed form for g_y. Both count factorisations n = r m
// with m a prime power q^k, P^+(r) in P_y and P^+(r) < q; `BoundedByY`
// additionally demands q <= y.
enum class ExplicitReading { Unbounded, BoundedByY };

// The reading that agrees with the divisor-sum definition for every n; see
// run_identity_suite, which re-derives it on each run.
inline constexpr ExplicitReading kAdoptedReading = ExplicitReading::Unbounded;

std::string to_string(ExplicitReading reading);

// 1_{P_y}(P^+(n)) with P^+(1) = 1.
bool in_prime_set_up_to(const PrimeSetSpec& spec, double y, std::uint64_t p);

int g_y_explicit(std::uint64_t n, double y, const PrimeSetSpec& spec,
                 ExplicitReading reading = kAdoptedReading);

// Full divisor enumeration; n above kDivisorBudget is a budget error.
int g_y_divisor(std::uint64_t n, double y, const PrimeSetSpec& spec);

struct IdentityCase {
    std::uint64_t n;
    double y;
    std::string spec;
    std::int64_t lhs;
    std::int64_t rhs;

    bool holds() const noexcept { return lhs == rhs; }
    std::string to_json_line() const;
};

IdentityCase check_convolution(std::uint64_t n, double y, const PrimeSetSpec& spec);

// sum_{t | m} mu(t) omega(t); equals -1 exactly when omega(m) = 1.
int mu_omega_divisor_sum(std::uint64_t m);

// sum_{t | b} mu(t); equals 1 exactly when b = 1.
int mu_divisor_sum(std::uint64_t b);

struct BoundScan {
    int max_abs;                 // max |g_y(d)| over d <= D
    std::int64_t abs_sum;        // sum of |g_y(d)| over d <= D
    double reference;            // D log y / log D
    double ratio() const { return static_cast<double>(abs_sum) / reference; }
};

BoundScan g_y_bound_scan(std::uint64_t D, double y, const PrimeSetSpec& spec);

struct SuiteResult {
    std::uint64_t n_max = 0;
    double y = 0;
    std::string spec;
    std::uint64_t convolution_failures = 0;
    std::uint64_t unbounded_mismatches = 0;  // explicit (Unbounded) vs divisor definition
    std::uint64_t bounded_mismatches = 0;    // explicit (BoundedByY) vs divisor definition
    ExplicitReading adopted = kAdoptedReading;
    std::vector<IdentityCase> failures;      // convolution failures, capped

    bool passed() const noexcept {
        return convolution_failures == 0 &&
               (adopted == ExplicitReading::Unbounded ? unbounded_mismatches : bounded_mismatches) == 0;
    }
};

// Batch check of every n in [1, table.hi()) using a table that starts at 1 and
// has a gpf column. Dirichlet convolutions are done by multiple-sieving, so the
// cost is O(N log N) per (y, spec).
// Batch check of sum_{t|m} mu(t) omega(t) = -[omega(m) = 1] and sum_{t|b} mu(t) = [b = 1]
// over every m covered by a table that starts at 1.
struct LemmaScan {
    std::uint64_t n_max = 0;
    std::uint64_t mu_omega_failures = 0;
    std::uint64_t mu_failures = 0;
};

LemmaScan run_divisor_lemmas(const FactorTable& table);

SuiteResult run_identity_suite(const FactorTable& table, double y, const PrimeSetSpec& spec,
                               std::size_t max_failures = 32);

}  // namespace mobius_lab

#include "mobius_lab/identity.hpp"

#include <cmath>
#include <functional>

#include <json.hpp>

#include "mobius_lab/error.hpp"

namespace mobius_lab {

namespace {

void check_budget(std::uint64_t n) {
    if (n > kDivisorBudget) {
        fail(ErrorKind::Budget, "divisor enumeration budget is n <= " +
                                    std::to_string(kDivisorBudget) + ", got " + std::to_string(n));
    }
}

struct DivisorInfo {
    std::uint64_t value;
    std::uint64_t smallest_prime;  // kInfinitySentinel for 1
    int mu;
    unsigned omega;
};

// Every divisor of the factored number, with its own mu, omega and P^-.
std::vector<DivisorInfo> divisors_of(const std::vector<PrimePower>& factors) {
    std::vector<DivisorInfo> out{{1, kInfinitySentinel, 1, 0}};
    // factors are ascending, so walking them in reverse lets each new prime
    // become the smallest prime of the divisors it multiplies
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
        const std::size_t existing = out.size();
        std::uint64_t pk = 1;
        for (unsigned k = 1; k <= it->exponent; ++k) {
            pk *= it->prime;
            for (std::size_t i = 0; i < existing; ++i) {
                const auto& d = out[i];
                out.push_back({d.value * pk, it->prime, k == 1 ? -d.mu : 0, d.omega + 1});
            }
        }
    }
    return out;
}

int mu_of(const std::vector<PrimePower>& factors) {
    int mu = factors.size() % 2 == 0 ? 1 : -1;
    for (const auto& f : factors) {
        if (f.exponent > 1) return 0;
    }
    return mu;
}

std::uint64_t largest_prime(std::uint64_t n) {
    return n == 1 ? 1 : factorize(n).back().prime;
}

struct ExplicitPair {
    int unbounded;
    int bounded;
};

// Closed form for g_y given P^+ of n and the exponent structure. `gpf_of`
// returns P^+(r) for any r dividing n.
template <class PrimesOf, class GpfOf>
ExplicitPair explicit_terms(std::uint64_t n, double y, const PrimeSetSpec& spec,
                            PrimesOf primes_of, GpfOf gpf_of) {
    if (n == 1) return {0, 0};
    const int indicator = in_prime_set_up_to(spec, y, gpf_of(n)) ? 1 : 0;
    int unbounded = 0;
    int bounded = 0;
    primes_of(n, [&](std::uint64_t q, unsigned exponent) {
        std::uint64_t m = 1;
        for (unsigned j = 1; j <= exponent; ++j) {
            m *= q;
            const std::uint64_t top_of_r = gpf_of(n / m);
            if (in_prime_set_up_to(spec, y, top_of_r) && top_of_r < q) {
                ++unbounded;
                if (static_cast<double>(q) <= y) ++bounded;
            }
        }
    });
    return {unbounded - indicator, bounded - indicator};
}

}  // namespace

std::string to_string(ExplicitReading reading) {
    return reading == ExplicitReading::Unbounded ? "unbounded" : "bounded-by-y";
}

bool in_prime_set_up_to(const PrimeSetSpec& spec, double y, std::uint64_t p) {
    return p >= 2 && p != kInfinitySentinel && static_cast<double>(p) <= y && spec.admits(p);
}

int g_y_explicit(std::uint64_t n, double y, const PrimeSetSpec& spec, ExplicitReading reading) {
    if (n == 0) fail(ErrorKind::Domain, "g_y is defined for n >= 1");
    const auto factors = factorize(n);
    const auto terms = explicit_terms(
        n, y, spec,
        [&](std::uint64_t, const auto& visit) {
            for (const auto& f : factors) visit(f.prime, f.exponent);
        },
        largest_prime);
    return reading == ExplicitReading::Unbounded ? terms.unbounded : terms.bounded;
}

int g_y_divisor(std::uint64_t n, double y, const PrimeSetSpec& spec) {
    if (n == 0) fail(ErrorKind::Domain, "g_y is defined for n >= 1");
    check_budget(n);
    int total = 0;
    for (const auto& d : divisors_of(factorize(n))) {
        if (in_prime_set_up_to(spec, y, d.smallest_prime)) total += d.mu * static_cast<int>(d.omega);
    }
    return total;
}

std::string IdentityCase::to_json_line() const {
    nlohmann::json j{{"n", n}, {"y", y}, {"spec", spec}, {"lhs", lhs}, {"rhs", rhs}};
    return j.dump();
}

IdentityCase check_convolution(std::uint64_t n, double y, const PrimeSetSpec& spec) {
    if (n == 0) fail(ErrorKind::Domain, "convolution identity is defined for n >= 1");
    check_budget(n);
    const auto factors = factorize(n);
    std::int64_t lhs = 0;
    if (n > 1 && in_prime_set_up_to(spec, y, factors.front().prime)) {
        lhs = mu_of(factors) * static_cast<std::int64_t>(factors.size());
    }
    std::int64_t rhs = 0;
    for (const auto& d : divisors_of(factors)) {
        // mu(n / d) from the complementary exponents
        const std::uint64_t cofactor = n / d.value;
        const int mu_cofactor = cofactor == 1 ? 1 : mu_of(factorize(cofactor));
        if (mu_cofactor != 0) rhs += g_y_explicit(d.value, y, spec) * mu_cofactor;
    }
    return {n, y, spec.describe(), lhs, rhs};
}

int mu_omega_divisor_sum(std::uint64_t m) {
    if (m == 0) fail(ErrorKind::Domain, "divisor sums are defined for m >= 1");
    check_budget(m);
    int total = 0;
    for (const auto& d : divisors_of(factorize(m))) total += d.mu * static_cast<int>(d.omega);
    return total;
}

int mu_divisor_sum(std::uint64_t b) {
    if (b == 0) fail(ErrorKind::Domain, "divisor sums are defined for b >= 1");
    check_budget(b);
    int total = 0;
    for (const auto& d : divisors_of(factorize(b))) total += d.mu;
    return total;
}

namespace {

struct BatchValues {
    std::vector<std::int32_t> divisor;    // g_y by its divisor-sum definition
    std::vector<std::int32_t> unbounded;  // closed form, Unbounded reading
    std::vector<std::int32_t> bounded;    // closed form, BoundedByY reading
    std::vector<std::int32_t> lhs;        // chi_{P_y} mu omega
};

BatchValues batch_values(const FactorTable& table, double y, const PrimeSetSpec& spec) {
    if (table.lo() != 1 || !table.has_gpf()) {
        fail(ErrorKind::Precondition, "identity batches need a table starting at 1 with a gpf column");
    }
    const std::uint64_t N = table.hi() - 1;
    BatchValues v;
    v.divisor.assign(N + 1, 0);
    v.unbounded.assign(N + 1, 0);
    v.bounded.assign(N + 1, 0);
    v.lhs.assign(N + 1, 0);
    for (std::uint64_t m = 2; m <= N; ++m) {
        if (table.mu(m) != 0 && in_prime_set_up_to(spec, y, table.spf(m))) {
            v.lhs[m] = table.mu(m) * static_cast<int>(table.omega(m));
        }
    }
    for (std::uint64_t m = 2; m <= N; ++m) {
        if (v.lhs[m] == 0) continue;
        for (std::uint64_t k = m; k <= N; k += m) v.divisor[k] += v.lhs[m];
    }
    auto primes_of = [&](std::uint64_t n, const auto& visit) {
        for (std::uint64_t cur = n; cur > 1;) {
            const std::uint64_t q = table.spf(cur);
            unsigned a = 0;
            while (cur % q == 0) {
                cur /= q;
                ++a;
            }
            visit(q, a);
        }
    };
    auto gpf_of = [&](std::uint64_t r) { return table.gpf(r); };
    for (std::uint64_t n = 1; n <= N; ++n) {
        const auto t = explicit_terms(n, y, spec, primes_of, gpf_of);
        v.unbounded[n] = t.unbounded;
        v.bounded[n] = t.bounded;
    }
    return v;
}

}  // namespace

BoundScan g_y_bound_scan(std::uint64_t D, double y, const PrimeSetSpec& spec) {
    check_budget(D);
    if (!(y >= 2.0) || !(y <= std::sqrt(static_cast<double>(D)))) {
        fail(ErrorKind::Precondition, "g_y_bound_scan requires 2 <= y <= sqrt(D)");
    }
    const auto table = build_segment(1, D + 1);
    const auto v = batch_values(table, y, spec);
    const auto& g = kAdoptedReading == ExplicitReading::Unbounded ? v.unbounded : v.bounded;
    BoundScan scan{0, 0, static_cast<double>(D) * std::log(y) / std::log(static_cast<double>(D))};
    for (std::uint64_t d = 1; d <= D; ++d) {
        scan.max_abs = std::max(scan.max_abs, std::abs(g[d]));
        scan.abs_sum += std::abs(g[d]);
    }
    return scan;
}

SuiteResult run_identity_suite(const FactorTable& table, double y, const PrimeSetSpec& spec,
                               std::size_t max_failures) {
    const auto v = batch_values(table, y, spec);
    const std::uint64_t N = table.hi() - 1;
    SuiteResult result;
    result.n_max = N;
    result.y = y;
    result.spec = spec.describe();
    for (std::uint64_t n = 1; n <= N; ++n) {
        if (v.unbounded[n] != v.divisor[n]) ++result.unbounded_mismatches;
        if (v.bounded[n] != v.divisor[n]) ++result.bounded_mismatches;
    }
    if (result.unbounded_mismatches == 0) {
        result.adopted = ExplicitReading::Unbounded;
    } else if (result.bounded_mismatches == 0) {
        result.adopted = ExplicitReading::BoundedByY;
    }
    const auto& g = result.adopted == ExplicitReading::Unbounded ? v.unbounded : v.bounded;

    std::vector<std::int64_t> rhs(N + 1, 0);
    for (std::uint64_t d = 1; d <= N; ++d) {
        if (g[d] == 0) continue;
        for (std::uint64_t k = 1, n = d; n <= N; ++k, n += d) {
            const int mu = table.mu(k);
            if (mu != 0) rhs[n] += static_cast<std::int64_t>(g[d]) * mu;
        }
    }
    for (std::uint64_t n = 1; n <= N; ++n) {
        if (rhs[n] == v.lhs[n]) continue;
        ++result.convolution_failures;
        if (result.failures.size() < max_failures) {
            result.failures.push_back({n, y, result.spec, v.lhs[n], rhs[n]});
        }
    }
    return result;
}

LemmaScan run_divisor_lemmas(const FactorTable& table) {
    if (table.lo() != 1) fail(ErrorKind::Precondition, "divisor lemma scan needs a table starting at 1");
    const std::uint64_t N = table.hi() - 1;
    std::vector<std::int64_t> mu_omega(N + 1, 0), mu_sum(N + 1, 0);
    for (std::uint64_t t = 1; t <= N; ++t) {
        const int mu = table.mu(t);
        if (mu == 0) continue;
        const int w = mu * static_cast<int>(table.omega(t));
        for (std::uint64_t m = t; m <= N; m += t) {
            mu_omega[m] += w;
            mu_sum[m] += mu;
        }
    }
    LemmaScan scan;
    scan.n_max = N;
    for (std::uint64_t m = 1; m <= N; ++m) {
        if (mu_omega[m] != (table.omega(m) == 1 ? -1 : 0)) ++scan.mu_omega_failures;
        if (mu_sum[m] != (m == 1 ? 1 : 0)) ++scan.mu_failures;
    }
    return scan;
}

}  // namespace mobius_lab

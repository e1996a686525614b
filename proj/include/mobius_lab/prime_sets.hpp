#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mobius_lab {

struct AllPrimes {
    friend bool operator==(const AllPrimes&, const AllPrimes&) = default;
};

// Primes p with p = residue (mod modulus), gcd(modulus, residue) = 1.
struct Progression {
    std::uint64_t modulus;
    std::uint64_t residue;
    friend bool operator==(const Progression&, const Progression&) = default;
};

struct Singleton {
    std::uint64_t prime;
    friend bool operator==(const Singleton&, const Singleton&) = default;
};

// Half-open real interval ]lo, hi].
struct Interval {
    double lo;
    double hi;
    friend bool operator==(const Interval&, const Interval&) = default;
};

struct IntervalUnion {
    std::vector<Interval> intervals;  // ascending, pairwise disjoint
    friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;
};

// A set of primes together with its log-weighted density delta.
class PrimeSetSpec {
public:
    using Variant = std::variant<AllPrimes, Progression, Singleton, IntervalUnion>;

    static PrimeSetSpec all_primes();
    static PrimeSetSpec progression(std::uint64_t modulus, std::uint64_t residue);
    static PrimeSetSpec singleton(std::uint64_t prime);
    static PrimeSetSpec interval_union(std::vector<Interval> intervals);

    // Grammar: "all" | "progression:K:L" | "singleton:P" | "intervals:FILE.json"
    //        | "adversarial:X1,X2,...".
    static PrimeSetSpec parse(const std::string& text);

    // JSON document {"intervals": [[lo, hi], ...], "delta": 0}.
    static PrimeSetSpec from_json_text(const std::string& text);
    static PrimeSetSpec from_json_file(const std::filesystem::path& path);

    const Variant& variant() const noexcept { return variant_; }
    double delta() const noexcept { return delta_; }

    // Membership without the primality check; `p` must already be known prime.
    bool admits(std::uint64_t p) const noexcept;

    std::string describe() const;

    friend bool operator==(const PrimeSetSpec&, const PrimeSetSpec&) = default;

private:
    PrimeSetSpec(Variant v, double delta) : variant_(std::move(v)), delta_(delta) {}

    Variant variant_;
    double delta_;
};

// Throws a domain error when p is not prime.
bool contains(const PrimeSetSpec& spec, std::uint64_t p);

struct DensityStats {
    double t;
    double theta;    // sum of log p over members p <= t
    double epsilon;  // theta / t - delta
};

// `primes` must contain every prime <= t (entries above t are ignored).
DensityStats epsilon_at(const PrimeSetSpec& spec, double t, std::span<const std::uint64_t> primes);
DensityStats epsilon_at(const PrimeSetSpec& spec, double t);

// sup |epsilon(t)| over t in (y, t_max]: the jump points of theta plus both
// endpoints. A finite-window lower bound on the supremum over all t > y.
double epsilon_star(const PrimeSetSpec& spec, double y, double t_max,
                    std::span<const std::uint64_t> primes);
double epsilon_star(const PrimeSetSpec& spec, double y, double t_max);

// Member primes up to t_max with prefix theta and suffix maxima of |epsilon|
// at the jumps. Answers epsilon_star(y) over the fixed window (y, t_max] in
// O(log n) per query.
class DensityProfile {
public:
    DensityProfile(const PrimeSetSpec& spec, double t_max);

    double t_max() const noexcept { return t_max_; }
    double delta() const noexcept { return delta_; }
    double theta(double t) const;
    double epsilon_star(double y) const;

private:
    double delta_;
    double t_max_;
    std::vector<std::uint64_t> members_;
    std::vector<double> theta_;       // theta at members_[i], inclusive
    std::vector<double> suffix_max_;  // max jump value over members_[i..]
};

// P := primes in the union of ]sqrt(x_j), x_j].
PrimeSetSpec adversarial_set(std::span<const double> x_seq);

}  // namespace mobius_lab

#include "mobius_lab/prime_sets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "mobius_lab/compensated.hpp"
#include "mobius_lab/error.hpp"
#include "mobius_lab/sieve.hpp"

namespace mobius_lab {

namespace {

std::uint64_t euler_phi(std::uint64_t k) {
    std::uint64_t result = 1;
    for (const auto& f : factorize(k)) {
        result *= f.prime - 1;
        for (unsigned e = 1; e < f.exponent; ++e) result *= f.prime;
    }
    return result;
}

void validate_intervals(const std::vector<Interval>& intervals) {
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        const auto& iv = intervals[i];
        if (!(iv.lo < iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
            fail(ErrorKind::Precondition, "interval ]lo, hi] requires lo < hi");
        }
        if (i > 0 && intervals[i - 1].hi > iv.lo) {
            fail(ErrorKind::Precondition, "intervals must be ascending and pairwise disjoint");
        }
    }
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        fail(ErrorKind::Config, "cannot parse " + what + " from '" + s + "'");
    }
    if (used != s.size()) fail(ErrorKind::Config, "cannot parse " + what + " from '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) parts.push_back(item);
    return parts;
}

}  // namespace

PrimeSetSpec PrimeSetSpec::all_primes() { return PrimeSetSpec(AllPrimes{}, 1.0); }

PrimeSetSpec PrimeSetSpec::progression(std::uint64_t modulus, std::uint64_t residue) {
    if (modulus == 0) fail(ErrorKind::Precondition, "progression modulus must be positive");
    residue %= modulus;
    if (std::gcd(modulus, residue) != 1) {
        fail(ErrorKind::Precondition, "progression requires gcd(modulus, residue) = 1");
    }
    return PrimeSetSpec(Progression{modulus, residue},
                        1.0 / static_cast<double>(euler_phi(modulus)));
}

PrimeSetSpec PrimeSetSpec::singleton(std::uint64_t prime) {
    if (!is_prime(prime)) {
        fail(ErrorKind::Domain, "singleton element " + std::to_string(prime) + " is not prime");
    }
    return PrimeSetSpec(Singleton{prime}, 0.0);
}

PrimeSetSpec PrimeSetSpec::interval_union(std::vector<Interval> intervals) {
    validate_intervals(intervals);
    return PrimeSetSpec(IntervalUnion{std::move(intervals)}, 0.0);
}

PrimeSetSpec PrimeSetSpec::from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Config, std::string("interval set JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("intervals") || !doc["intervals"].is_array()) {
        fail(ErrorKind::Config, "interval set JSON needs an \"intervals\" array");
    }
    std::vector<Interval> intervals;
    for (const auto& pair : doc["intervals"]) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
            fail(ErrorKind::Config, "each interval must be a [lo, hi] pair of numbers");
        }
        intervals.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    const double delta = doc.value("delta", 0.0);
    if (delta != 0.0) {
        fail(ErrorKind::Config, "interval unions carry density 0; got delta = " + std::to_string(delta));
    }
    return interval_union(std::move(intervals));
}

PrimeSetSpec PrimeSetSpec::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Config, "cannot open interval set file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

PrimeSetSpec PrimeSetSpec::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "all" && rest.empty()) return all_primes();
    if (head == "progression") {
        const auto parts = split(rest, ':');
        if (parts.size() != 2) fail(ErrorKind::Config, "expected progression:K:L");
        return progression(parse_u64(parts[0], "modulus"), parse_u64(parts[1], "residue"));
    }
    if (head == "singleton") return singleton(parse_u64(rest, "prime"));
    if (head == "intervals") return from_json_file(rest);
    if (head == "adversarial") {
        std::vector<double> xs;
        for (const auto& item : split(rest, ',')) {
            try {
                xs.push_back(std::stod(item));
            } catch (const std::exception&) {
                fail(ErrorKind::Config, "cannot parse adversarial scale '" + item + "'");
            }
        }
        return adversarial_set(xs);
    }
    fail(ErrorKind::Config, "unknown prime set '" + text + "'");
}

bool PrimeSetSpec::admits(std::uint64_t p) const noexcept {
    return std::visit(
        [p](const auto& v) -> bool {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, AllPrimes>) {
                return true;
            } else if constexpr (std::is_same_v<V, Progression>) {
                return p % v.modulus == v.residue;
            } else if constexpr (std::is_same_v<V, Singleton>) {
                return p == v.prime;
            } else {
                const double x = static_cast<double>(p);
                // first interval whose right end is >= x
                auto it = std::lower_bound(v.intervals.begin(), v.intervals.end(), x,
                                           [](const Interval& iv, double t) { return iv.hi < t; });
                return it != v.intervals.end() && it->lo < x;
            }
        },
        variant_);
}

std::string PrimeSetSpec::describe() const {
    return std::visit(
        [](const auto& v) -> std::string {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, AllPrimes>) {
                return "all";
            } else if constexpr (std::is_same_v<V, Progression>) {
                return "progression:" + std::to_string(v.modulus) + ":" + std::to_string(v.residue);
            } else if constexpr (std::is_same_v<V, Singleton>) {
                return "singleton:" + std::to_string(v.prime);
            } else {
                std::ostringstream out;
                out.precision(17);
                out << "intervals:";
                for (std::size_t i = 0; i < v.intervals.size(); ++i) {
                    out << (i ? "," : "") << "]" << v.intervals[i].lo << "," << v.intervals[i].hi
                        << "]";
                }
                return out.str();
            }
        },
        variant_);
}

bool contains(const PrimeSetSpec& spec, std::uint64_t p) {
    if (!is_prime(p)) fail(ErrorKind::Domain, std::to_string(p) + " is not prime");
    return spec.admits(p);
}

DensityStats epsilon_at(const PrimeSetSpec& spec, double t, std::span<const std::uint64_t> primes) {
    if (!(t >= 2.0)) fail(ErrorKind::Domain, "epsilon_at requires t >= 2");
    CompensatedSum<double> theta;
    for (std::uint64_t p : primes) {
        if (static_cast<double>(p) > t) break;
        if (spec.admits(p)) theta.add(std::log(static_cast<double>(p)));
    }
    const double th = theta.value();
    return {t, th, th / t - spec.delta()};
}

DensityStats epsilon_at(const PrimeSetSpec& spec, double t) {
    if (!(t >= 2.0)) fail(ErrorKind::Domain, "epsilon_at requires t >= 2");
    const auto primes = primes_in(1, static_cast<std::uint64_t>(std::floor(t)) + 1);
    return epsilon_at(spec, t, primes);
}

double epsilon_star(const PrimeSetSpec& spec, double y, double t_max,
                    std::span<const std::uint64_t> primes) {
    if (!(y >= 2.0) || !(y < t_max)) {
        fail(ErrorKind::Domain, "epsilon_star requires 2 <= y < t_max (non-empty window)");
    }
    const double delta = spec.delta();
    CompensatedSum<double> theta;
    auto it = primes.begin();
    for (; it != primes.end() && static_cast<double>(*it) <= y; ++it) {
        if (spec.admits(*it)) theta.add(std::log(static_cast<double>(*it)));
    }
    double best = std::abs(theta.value() / y - delta);
    for (; it != primes.end() && static_cast<double>(*it) <= t_max; ++it) {
        if (!spec.admits(*it)) continue;
        const double p = static_cast<double>(*it);
        best = std::max(best, std::abs(theta.value() / p - delta));  // left limit
        theta.add(std::log(p));
        best = std::max(best, std::abs(theta.value() / p - delta));
    }
    return std::max(best, std::abs(theta.value() / t_max - delta));
}

double epsilon_star(const PrimeSetSpec& spec, double y, double t_max) {
    if (!(y >= 2.0) || !(y < t_max)) {
        fail(ErrorKind::Domain, "epsilon_star requires 2 <= y < t_max (non-empty window)");
    }
    const auto primes = primes_in(1, static_cast<std::uint64_t>(std::floor(t_max)) + 1);
    return epsilon_star(spec, y, t_max, primes);
}

DensityProfile::DensityProfile(const PrimeSetSpec& spec, double t_max)
    : delta_(spec.delta()), t_max_(t_max) {
    if (!(t_max >= 2.0)) fail(ErrorKind::Domain, "DensityProfile requires t_max >= 2");
    CompensatedSum<double> theta;
    std::vector<double> jump;
    for_each_prime(2, static_cast<std::uint64_t>(std::floor(t_max)) + 1, [&](std::uint64_t q) {
        if (!spec.admits(q)) return;
        const double p = static_cast<double>(q);
        const double before = std::abs(theta.value() / p - delta_);
        theta.add(std::log(p));
        members_.push_back(q);
        theta_.push_back(theta.value());
        jump.push_back(std::max(before, std::abs(theta.value() / p - delta_)));
    });
    suffix_max_.resize(jump.size());
    double running = 0.0;
    for (std::size_t i = jump.size(); i-- > 0;) {
        running = std::max(running, jump[i]);
        suffix_max_[i] = running;
    }
}

double DensityProfile::theta(double t) const {
    const auto it = std::upper_bound(members_.begin(), members_.end(), t,
                                     [](double v, std::uint64_t m) { return v < static_cast<double>(m); });
    const auto k = static_cast<std::size_t>(it - members_.begin());
    return k == 0 ? 0.0 : theta_[k - 1];
}

double DensityProfile::epsilon_star(double y) const {
    if (!(y >= 2.0) || !(y < t_max_)) {
        fail(ErrorKind::Domain, "epsilon_star requires 2 <= y < t_max (non-empty window)");
    }
    const auto it = std::upper_bound(members_.begin(), members_.end(), y,
                                     [](double v, std::uint64_t m) { return v < static_cast<double>(m); });
    const auto k = static_cast<std::size_t>(it - members_.begin());
    double best = std::abs((k == 0 ? 0.0 : theta_[k - 1]) / y - delta_);
    if (k < members_.size()) best = std::max(best, suffix_max_[k]);
    return std::max(best, std::abs(theta(t_max_) / t_max_ - delta_));
}

PrimeSetSpec adversarial_set(std::span<const double> x_seq) {
    std::vector<Interval> intervals;
    for (std::size_t j = 0; j < x_seq.size(); ++j) {
        const double x = x_seq[j];
        if (!(x > 1.0) || !std::isfinite(x)) {
            fail(ErrorKind::Precondition, "adversarial scales must be finite and > 1");
        }
        const double lo = std::sqrt(x);
        if (j > 0 && lo < x_seq[j - 1]) {
            fail(ErrorKind::Precondition, "adversarial scales overlap: sqrt(x_j) < x_{j-1}");
        }
        intervals.push_back({lo, x});
    }
    return PrimeSetSpec::interval_union(std::move(intervals));
}

}  // namespace mobius_lab

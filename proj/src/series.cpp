#include "mobius_lab/series.hpp"

#include <array>
#include <cmath>

#include "mobius_lab/cache.hpp"
#include "mobius_lab/error.hpp"

namespace mobius_lab {

namespace {

double parse_real(const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        fail(ErrorKind::Config, "cannot parse number '" + s + "'");
    }
    if (used != s.size()) fail(ErrorKind::Config, "cannot parse number '" + s + "'");
    return v;
}

}  // namespace

ZParam ZParam::parse(const std::string& text) {
    if (text.empty()) fail(ErrorKind::Config, "empty z value");
    if (text.back() != 'i') return {parse_real(text), 0.0};
    const std::string body = text.substr(0, text.size() - 1);
    // split at the last sign that is not a leading sign or an exponent sign
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            const std::string im = body.substr(k);
            return {parse_real(body.substr(0, k)), im.size() == 1 ? (im == "-" ? -1.0 : 1.0)
                                                                   : parse_real(im)};
        }
    }
    if (body.empty() || body == "+") return {0.0, 1.0};
    if (body == "-") return {0.0, -1.0};
    return {0.0, parse_real(body)};
}

std::vector<std::uint64_t> geometric_grid(std::uint64_t x_max, double ratio, std::uint64_t start) {
    if (!(ratio > 1.0)) fail(ErrorKind::Precondition, "checkpoint ratio must exceed 1");
    if (start == 0) fail(ErrorKind::Precondition, "grid start must be positive");
    std::vector<std::uint64_t> grid;
    for (int k = 0;; ++k) {
        const double v = static_cast<double>(start) * std::pow(ratio, k);
        const double r = std::round(v);
        const double point = std::abs(v - r) <= 1e-9 * v ? r : std::floor(v);
        if (point > static_cast<double>(x_max)) break;
        const auto p = static_cast<std::uint64_t>(point);
        if (grid.empty() || grid.back() != p) grid.push_back(p);
    }
    if (grid.empty() || grid.back() != x_max) grid.push_back(x_max);
    return grid;
}

namespace detail {

std::vector<std::uint64_t> normalized_grid(std::uint64_t x, std::span<const std::uint64_t> grid) {
    if (x < 1) fail(ErrorKind::Precondition, "series length x must be >= 1");
    if (grid.empty()) return {x};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 1 || grid[i] > x || (i > 0 && grid[i] <= grid[i - 1])) {
            fail(ErrorKind::Precondition, "checkpoint grid must be strictly ascending within [1, x]");
        }
    }
    return {grid.begin(), grid.end()};
}

std::vector<std::uint64_t> base_primes_up_to(std::uint64_t hi) {
    const std::uint64_t root = isqrt(hi > 0 ? hi - 1 : 0);
    if (root < 2) return {};
    return primes_in(1, root + 1);
}

FactorTable obtain_segment(std::uint64_t lo, std::uint64_t hi,
                           std::span<const std::uint64_t> base_primes, const SeriesOptions& opts) {
    const std::uint64_t capacity = std::max(kDefaultSegmentCapacity, opts.segment_len);
    if (opts.cache_dir) return load_or_build_segment(lo, hi, base_primes, *opts.cache_dir, capacity);
    return build_segment(lo, hi, base_primes, capacity);
}

void check_budget(std::chrono::steady_clock::time_point start, const SeriesOptions& opts,
                  std::uint64_t reached) {
    if (!opts.time_budget_seconds) return;
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    if (elapsed.count() > *opts.time_budget_seconds) {
        fail(ErrorKind::Budget, "time budget of " + std::to_string(*opts.time_budget_seconds) +
                                    " s exhausted after n = " + std::to_string(reached));
    }
}

}  // namespace detail

std::vector<SeriesCheckpoint> sum_restricted(std::uint64_t x, const PrimeSetSpec& spec,
                                             std::span<const std::uint64_t> grid,
                                             const SeriesOptions& opts) {
    return accumulate<double>(x, grid, opts,
                              [&spec](std::uint64_t n, std::uint64_t spf, int mu, unsigned omega) {
                                  if (!spf_in(spec, spf)) return 0.0;
                                  return static_cast<double>(mu * static_cast<int>(omega)) /
                                         static_cast<double>(n);
                              });
}

std::complex<double> sum_z_weighted(std::uint64_t x, double y, const PrimeSetSpec& spec, ZParam z,
                                    const SeriesOptions& opts) {
    // y in [1, 2) admits every member, so the z = 1 specialisation can cover the
    // whole set; y > x leaves the sum empty.
    if (!(y >= 1.0) || !std::isfinite(y)) {
        fail(ErrorKind::Precondition, "sum_z_weighted requires finite y >= 1");
    }
    std::array<std::complex<double>, 64> zpow{};
    zpow[0] = 1.0;
    for (std::size_t k = 1; k < zpow.size(); ++k) zpow[k] = zpow[k - 1] * z.value();
    using C = std::complex<double>;
    const std::uint64_t grid[] = {x};
    const auto out = accumulate<C>(
        x, grid, opts, [&](std::uint64_t n, std::uint64_t spf, int mu, unsigned omega) -> C {
            if (!spf_in(spec, spf) || static_cast<double>(spf) <= y) return C{};
            return static_cast<double>(mu) * zpow[omega] / static_cast<double>(n);
        });
    return out.back().value;
}

std::vector<SeriesCheckpoint> sum_v1(std::uint64_t x, std::span<const std::uint64_t> grid,
                                     const SeriesOptions& opts) {
    return sum_restricted(x, PrimeSetSpec::all_primes(), grid, opts);
}

std::vector<SeriesCheckpoint> sum_vp(std::uint64_t x, std::uint64_t p,
                                     std::span<const std::uint64_t> grid,
                                     const SeriesOptions& opts) {
    if (!is_prime(p)) fail(ErrorKind::Domain, std::to_string(p) + " is not prime");
    return accumulate<double>(x, grid, opts,
                              [p](std::uint64_t n, std::uint64_t spf, int mu, unsigned omega) {
                                  if (spf != p) return 0.0;
                                  return static_cast<double>(mu * static_cast<int>(omega)) /
                                         static_cast<double>(n);
                              });
}

std::vector<SeriesCheckpoint> sum_mu_log(std::uint64_t x, std::optional<std::uint64_t> p,
                                         std::span<const std::uint64_t> grid,
                                         const SeriesOptions& opts) {
    if (p && !is_prime(*p)) fail(ErrorKind::Domain, std::to_string(*p) + " is not prime");
    return accumulate<double>(x, grid, opts,
                              [p](std::uint64_t n, std::uint64_t spf, int mu, unsigned) {
                                  if (p && spf != *p) return 0.0;
                                  const double dn = static_cast<double>(n);
                                  return mu * std::log(dn) / dn;
                              });
}

double sum_mu_log(std::uint64_t x, std::optional<std::uint64_t> p, const SeriesOptions& opts) {
    const std::uint64_t grid[] = {x};
    return sum_mu_log(x, p, grid, opts).back().value;
}

}  // namespace mobius_lab

#pragma once

#include <algorithm>
#include <chrono>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <future>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mobius_lab/compensated.hpp"
#include "mobius_lab/prime_sets.hpp"
#include "mobius_lab/sieve.hpp"

namespace mobius_lab {

template <class T>
struct Checkpoint {
    std::uint64_t x = 0;
    T value{};         // compensated partial sum
    T compensation{};  // residual carried by the compensated accumulator
    std::uint64_t terms = 0;  // nonzero contributions so far

    friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

using SeriesCheckpoint = Checkpoint<double>;
using ComplexCheckpoint = Checkpoint<std::complex<double>>;

// The weight z in z^omega(n). Unrestricted for direct summation; analytic
// comparisons use the disk |z - 1| <= 1/5.
struct ZParam {
    double re = 1.0;
    double im = 0.0;

    std::complex<double> value() const { return {re, im}; }
    bool in_analytic_disk() const { return std::abs(value() - 1.0) <= 0.2 + 1e-15; }

    // "0.9", "1+0.1i", "0.95-0.05i"
    static ZParam parse(const std::string& text);

    friend bool operator==(const ZParam&, const ZParam&) = default;
};

struct SeriesOptions {
    std::uint64_t segment_len = kDefaultSegmentLength;
    unsigned workers = 1;
    std::optional<std::filesystem::path> cache_dir;
    std::optional<double> time_budget_seconds;
};

// floor(start * ratio^k) for k = 0, 1, ... up to x_max, deduplicated, with
// x_max appended when the progression does not land on it.
std::vector<std::uint64_t> geometric_grid(std::uint64_t x_max, double ratio,
                                          std::uint64_t start = 10);

inline bool spf_in(const PrimeSetSpec& spec, std::uint64_t spf) {
    return spf != kInfinitySentinel && spec.admits(spf);
}

namespace detail {

std::vector<std::uint64_t> normalized_grid(std::uint64_t x, std::span<const std::uint64_t> grid);
std::vector<std::uint64_t> base_primes_up_to(std::uint64_t hi);
FactorTable obtain_segment(std::uint64_t lo, std::uint64_t hi,
                           std::span<const std::uint64_t> base_primes, const SeriesOptions& opts);
void check_budget(std::chrono::steady_clock::time_point start, const SeriesOptions& opts,
                  std::uint64_t reached);

template <class T>
struct Piece {
    CompensatedSum<T> sum;
    std::uint64_t terms = 0;
    std::optional<std::uint64_t> checkpoint;  // set when the piece ends at a grid point
};

// Partial sums of one segment, cut at every grid point inside it.
template <class T, class Term>
std::vector<Piece<T>> segment_pieces(const FactorTable& table,
                                     std::span<const std::uint64_t> grid, Term& term) {
    std::vector<Piece<T>> pieces(1);
    auto next = std::lower_bound(grid.begin(), grid.end(), table.lo());
    const auto spf = table.spf_column();
    const auto mu = table.mu_column();
    const auto omega = table.omega_column();
    for (std::size_t i = 0; i < table.size(); ++i) {
        const std::uint64_t n = table.lo() + i;
        if (mu[i] != 0) {
            const T t = term(n, spf[i], static_cast<int>(mu[i]), static_cast<unsigned>(omega[i]));
            if (t != T{}) {
                pieces.back().sum.add(t);
                ++pieces.back().terms;
            }
        }
        if (next != grid.end() && *next == n) {
            pieces.back().checkpoint = n;
            pieces.emplace_back();
            ++next;
        }
    }
    return pieces;
}

}  // namespace detail

// Sums term(n, spf, mu, omega) over squarefree n in [1, max(grid)], reporting
// the running total at each grid point through `on_checkpoint`. Segments are
// evaluated `workers` at a time and reduced strictly in ascending order, so the
// result does not depend on the worker count.
template <class T, class Term, class OnCheckpoint>
void accumulate_stream(std::uint64_t x, std::span<const std::uint64_t> grid,
                       const SeriesOptions& opts, Term term, OnCheckpoint on_checkpoint) {
    const auto points = detail::normalized_grid(x, grid);
    const std::uint64_t top = points.back();
    const std::uint64_t seg = opts.segment_len == 0 ? kDefaultSegmentLength : opts.segment_len;
    const unsigned workers = opts.workers == 0 ? 1 : opts.workers;
    const auto base = detail::base_primes_up_to(top + 1);
    const auto start = std::chrono::steady_clock::now();

    auto run = [&](std::uint64_t lo) {
        const std::uint64_t hi = std::min(top + 1, lo + seg);
        const auto table = detail::obtain_segment(lo, hi, base, opts);
        Term local = term;
        return detail::segment_pieces<T>(table, points, local);
    };

    CompensatedSum<T> total;
    std::uint64_t terms = 0;
    auto reduce = [&](const std::vector<detail::Piece<T>>& pieces) {
        for (const auto& piece : pieces) {
            total.add(piece.sum);
            terms += piece.terms;
            if (piece.checkpoint) {
                on_checkpoint(Checkpoint<T>{*piece.checkpoint, total.value(), total.residual(), terms});
            }
        }
    };

    for (std::uint64_t lo = 1; lo <= top;) {
        detail::check_budget(start, opts, lo - 1);
        if (workers == 1) {
            reduce(run(lo));
            lo = std::min(top + 1, lo + seg);
            continue;
        }
        std::vector<std::future<std::vector<detail::Piece<T>>>> wave;
        for (unsigned w = 0; w < workers && lo <= top; ++w) {
            wave.push_back(std::async(std::launch::async, run, lo));
            lo = std::min(top + 1, lo + seg);
        }
        for (auto& f : wave) reduce(f.get());
    }
}

template <class T, class Term>
std::vector<Checkpoint<T>> accumulate(std::uint64_t x, std::span<const std::uint64_t> grid,
                                      const SeriesOptions& opts, Term term) {
    std::vector<Checkpoint<T>> out;
    accumulate_stream<T>(x, grid, opts, std::move(term),
                         [&](const Checkpoint<T>& c) { out.push_back(c); });
    return out;
}

// Sum of mu(n) omega(n) / n over n <= X with P^-(n) in the set, at each grid point X.
// An empty grid means {x}.
std::vector<SeriesCheckpoint> sum_restricted(std::uint64_t x, const PrimeSetSpec& spec,
                                             std::span<const std::uint64_t> grid = {},
                                             const SeriesOptions& opts = {});

// A(x, y; z): sum of mu(n) z^omega(n) / n over n <= x with P^-(n) in the set and P^-(n) > y.
std::complex<double> sum_z_weighted(std::uint64_t x, double y, const PrimeSetSpec& spec,
                                    ZParam z, const SeriesOptions& opts = {});

std::vector<SeriesCheckpoint> sum_v1(std::uint64_t x, std::span<const std::uint64_t> grid = {},
                                     const SeriesOptions& opts = {});

// Restricted to P^-(n) = p exactly.
std::vector<SeriesCheckpoint> sum_vp(std::uint64_t x, std::uint64_t p,
                                     std::span<const std::uint64_t> grid = {},
                                     const SeriesOptions& opts = {});

// Partial sums of mu(n) log(n) / n, optionally restricted to P^-(n) = p.
std::vector<SeriesCheckpoint> sum_mu_log(std::uint64_t x, std::optional<std::uint64_t> p,
                                         std::span<const std::uint64_t> grid,
                                         const SeriesOptions& opts = {});
double sum_mu_log(std::uint64_t x, std::optional<std::uint64_t> p = std::nullopt,
                  const SeriesOptions& opts = {});

}  // namespace mobius_lab

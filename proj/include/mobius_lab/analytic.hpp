#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mobius_lab/series.hpp"

namespace mobius_lab {

using Complex = std::complex<double>;

inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

struct ContourSettings {
    double left_end = -0.5;  // the Hankel loop wraps the cut [left_end, 1/u]
    unsigned max_depth = 18;  // bisection depth per contour piece (node budget)
};

struct AnalyticSettings {
    double v_max = 30.0;       // Dickman table covers [0, v_max]
    double ode_step = 1e-3;    // must divide 1
    double quad_abs_tol = 1e-12;
    double quad_rel_tol = 1e-12;
    std::uint64_t product_cutoff = 10'000'000;  // Euler products run over q <= Q
    ContourSettings contour;
};

// Precomputed Dickman function plus the numerical tolerances every kernel
// shares. Immutable after construction; safe to share between threads.
//
// rho is integrated unit interval by unit interval from v rho'(v) = -rho(v - 1)
// with a fixed-step fourth-order scheme whose knots include every integer; the
// half-step values of rho(v - 1) come from cubic Hermite interpolation, which
// uses the exact derivative the delay equation supplies.
class AnalyticContext {
public:
    explicit AnalyticContext(AnalyticSettings settings = {});

    const AnalyticSettings& settings() const noexcept { return settings_; }
    double v_max() const noexcept { return settings_.v_max; }

    double rho(double v) const;
    double rho_derivative(double v) const;  // right derivative at v = 1

private:
    AnalyticSettings settings_;
    std::size_t steps_per_unit_;
    std::vector<double> rho_;
    std::vector<double> deriv_;
};

// Shared default context (built on first use).
const AnalyticContext& default_context();

Complex complex_gamma(Complex z);
// 1/Gamma, exactly zero at the poles 0, -1, -2, ...
Complex reciprocal_gamma(Complex z);

double dickman_rho(const AnalyticContext& ctx, double v);

struct LaplaceValue {
    Complex value;
    double tail_bound;  // bound on the integral beyond v_max
};

// Laplace transform of rho. Requires Re s >= -1/2.
LaplaceValue rho_hat_detailed(const AnalyticContext& ctx, Complex s);
Complex rho_hat(const AnalyticContext& ctx, Complex s);

// J(s) = int_0^inf e^{-s-t} dt / (s + t), i.e. E1(s). Requires Re s > 0.
Complex j_of(const AnalyticContext& ctx, Complex s);

// e^{-z J(s)}: through J when Re s > 0, through (s rho_hat(s))^z otherwise.
// Points on the cut (s real, s <= 0) are rejected.
Complex exp_minus_zj(const AnalyticContext& ctx, Complex s, Complex z);

// max |e^{-J(s)} - s rho_hat(s)| over the grid; 0 for an empty grid.
double check_laplace_identity(const AnalyticContext& ctx, std::span<const Complex> s_grid);

struct RatioRange {
    double min;
    double max;
};

// Extremes of |e^{-zJ(s)}| / min(|s|^{Re z}, 1).
RatioRange check_min_bound(const AnalyticContext& ctx, std::span<const Complex> s_grid,
                           std::span<const Complex> z_grid);

struct EulerProduct {
    Complex truncated;    // prod_{p < q <= Q} (1 - z / q^s)
    double tail_estimate; // |z| E1((Re s - 1) log Q), about |z| sum_{q > Q} q^{-Re s}
    Complex completed;    // truncated * exp(-z E1((s - 1) log Q))
};

// F(s; p, z) = prod_{q > p} (1 - z / q^s) for Re s > 1.
EulerProduct f_euler_truncated(const AnalyticContext& ctx, Complex s, std::uint64_t p, ZParam z,
                               std::uint64_t Q);
EulerProduct f_euler_truncated(const AnalyticContext& ctx, Complex s, std::uint64_t p, ZParam z,
                               std::uint64_t Q, std::span<const std::uint64_t> primes);

// |F(s + 1; p, z) / e^{-z J(s log p)} - 1| with F tail-completed at the
// context's product cutoff.
double check_f_approx(const AnalyticContext& ctx, std::uint64_t p, Complex s, ZParam z);

struct MainTermParams {
    double x;
    double y;
    ZParam z;
    double delta;

    double u() const;
    // e^{(log log x)^c} <= y <= sqrt(x)
    bool in_admissible_range(double c = 2.0) const;
};

// delta - delta e^{gamma z} / (Gamma(1 - z) (log x)^z); exactly delta at z = 1.
Complex main_term(const MainTermParams& params);

// delta e^gamma / log x.
double main_term_dz_at_1(double x, double delta);

// delta - delta / (2 pi i (log y)^z) * int_H w^{z-1} e^{uw} rho_hat(w)^z dw over
// the truncated Hankel loop: lower edge of the cut, circle |w| = 1/u, upper edge.
Complex hankel_main_term(const AnalyticContext& ctx, const MainTermParams& params);

struct ZetaOneP {
    boost::multiprecision::cpp_int numerator;
    boost::multiprecision::cpp_int denominator;
    double value;
};

// prod_{q <= p} (1 - 1/q)^{-1}, exactly.
ZetaOneP zeta_one_p(std::uint64_t p);

struct TruncatedProduct {
    Complex value;
    double tail_bound;  // bound on |log(full product) - log(truncated)|
};

// G_1(1, z) = prod_q (1 - z/q)(1 - 1/q)^{-z}, over q <= Q.
TruncatedProduct g1_product(ZParam z, std::uint64_t Q, double tail_tolerance = 1e-4);

// G_p(1, z) = prod_{q <= p} (1 - 1/q)^{-z} * prod_{p < q <= Q} (1 - z/q)(1 - 1/q)^{-z}.
TruncatedProduct gp_product(std::uint64_t p, ZParam z, std::uint64_t Q, double tail_tolerance = 1e-4);

// prod_{q <= p} (1 - z/q)^{-1} * G_1(1, z).
Complex gp_by_composition(std::uint64_t p, ZParam z, std::uint64_t Q);

}  // namespace mobius_lab

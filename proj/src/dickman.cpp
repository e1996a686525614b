#include <cmath>
#include <numbers>

#include "mobius_lab/analytic.hpp"
#include "mobius_lab/error.hpp"

namespace mobius_lab {

namespace {

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr double kLanczosCoeffs[] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Gamma(z) for Re z >= 1/2.
Complex lanczos_gamma(Complex z) {
    z -= 1.0;
    Complex series = kLanczosCoeffs[0];
    for (int i = 1; i < 9; ++i) series += kLanczosCoeffs[i] / (z + static_cast<double>(i));
    const Complex t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * series;
}

}  // namespace

Complex complex_gamma(Complex z) {
    if (z.real() < 0.5) {
        const Complex s = std::sin(std::numbers::pi * z);
        if (s == Complex{}) fail(ErrorKind::Domain, "Gamma has a pole here");
        return std::numbers::pi / (s * lanczos_gamma(1.0 - z));
    }
    return lanczos_gamma(z);
}

Complex reciprocal_gamma(Complex z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) return 0.0;
    if (z.real() < 0.5) {
        return std::sin(std::numbers::pi * z) * lanczos_gamma(1.0 - z) / std::numbers::pi;
    }
    return 1.0 / lanczos_gamma(z);
}

AnalyticContext::AnalyticContext(AnalyticSettings settings) : settings_(settings) {
    if (!(settings_.v_max >= 10.0)) fail(ErrorKind::Precondition, "v_max must be at least 10");
    const double per_unit = 1.0 / settings_.ode_step;
    steps_per_unit_ = static_cast<std::size_t>(std::llround(per_unit));
    if (steps_per_unit_ < 4 || std::abs(per_unit - static_cast<double>(steps_per_unit_)) > 1e-9) {
        fail(ErrorKind::Precondition, "ode_step must divide 1 into at least 4 steps");
    }
    const std::size_t K = steps_per_unit_;
    const auto units = static_cast<std::size_t>(std::ceil(settings_.v_max));
    settings_.v_max = static_cast<double>(units);
    const std::size_t M = units * K;
    const double h = 1.0 / static_cast<double>(K);
    rho_.assign(M + 1, 1.0);
    deriv_.assign(M + 1, 0.0);
    deriv_[K] = -1.0;

    // rho at grid point j plus a fraction of a step, for j + frac <= i (known part)
    auto lagged = [&](std::size_t j, double frac) {
        if (j < K || (j == K && frac == 0.0)) return 1.0;
        if (frac == 0.0) return rho_[j];
        // cubic Hermite on [j, j + 1]
        const double y0 = rho_[j], y1 = rho_[j + 1];
        const double d0 = deriv_[j] * h, d1 = deriv_[j + 1] * h;
        const double t = frac, t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * y1 +
               (t3 - t2) * d1;
    };

    for (std::size_t i = K; i < M; ++i) {
        const double v0 = static_cast<double>(i) * h;
        const double vm = v0 + 0.5 * h;
        const double v1 = static_cast<double>(i + 1) * h;
        // rho'(v) = -rho(v - 1) / v does not involve rho(v), so the four RK
        // stages collapse onto the three nodes below.
        const double k1 = -lagged(i - K, 0.0) / v0;
        const double k23 = -lagged(i - K, 0.5) / vm;
        const double k4 = -lagged(i + 1 - K, 0.0) / v1;
        rho_[i + 1] = rho_[i] + h / 6.0 * (k1 + 4.0 * k23 + k4);
        deriv_[i + 1] = -rho_[i + 1 - K] / v1;
    }
}

double AnalyticContext::rho(double v) const {
    if (!(v >= 0.0)) fail(ErrorKind::Domain, "rho is defined for v >= 0");
    if (v > settings_.v_max) {
        fail(ErrorKind::Range, "rho(" + std::to_string(v) + ") is beyond the table end " +
                                   std::to_string(settings_.v_max));
    }
    if (v <= 1.0) return 1.0;
    const double pos = v * static_cast<double>(steps_per_unit_);
    auto j = static_cast<std::size_t>(pos);
    if (j >= rho_.size() - 1) j = rho_.size() - 2;
    const double t = pos - static_cast<double>(j);
    const double h = 1.0 / static_cast<double>(steps_per_unit_);
    const double y0 = rho_[j], y1 = rho_[j + 1];
    const double d0 = deriv_[j] * h, d1 = deriv_[j + 1] * h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * d1;
}

double AnalyticContext::rho_derivative(double v) const {
    if (v < 1.0) return 0.0;
    return -rho(v - 1.0) / v;
}

const AnalyticContext& default_context() {
    static const AnalyticContext ctx;
    return ctx;
}

double dickman_rho(const AnalyticContext& ctx, double v) { return ctx.rho(v); }

}  // namespace mobius_lab

#include "mobius_lab/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "mobius_lab/compensated.hpp"
#include "mobius_lab/error.hpp"
#include "mobius_lab/sieve.hpp"

namespace mobius_lab {

namespace {

using GaussKronrod = boost::math::quadrature::gauss_kronrod<double, 15>;

constexpr double kPi = std::numbers::pi;

// log(1 + w), accurate for small |w|.
Complex clog1p(Complex w) {
    const Complex u = 1.0 + w;
    if (u == 1.0) return w;
    return std::log(u) * w / (u - 1.0);
}

template <class F>
Complex integrate(F f, double a, double b, unsigned max_depth, double rel_tol, double* error) {
    double err = 0;
    const Complex value = GaussKronrod::integrate(f, a, b, max_depth, rel_tol, &err);
    if (error) *error += err;
    return value;
}

}  // namespace

LaplaceValue rho_hat_detailed(const AnalyticContext& ctx, Complex s) {
    if (!(s.real() >= -0.5)) fail(ErrorKind::Domain, "rho_hat requires Re s >= -1/2");
    const auto& set = ctx.settings();
    const double V = ctx.v_max();
    const double sigma = s.real();
    // rho(v) <= 1/Gamma(v + 1) and Gamma grows by at least V + 1 per unit step
    const double ratio = std::exp(-sigma) / (V + 1.0);
    const double tail = std::exp(-sigma * V - std::lgamma(V + 1.0)) / (1.0 - ratio);
    if (!(ratio < 1.0) || tail > set.quad_abs_tol) {
        fail(ErrorKind::Accuracy, "rho_hat tail beyond v_max exceeds the absolute tolerance");
    }
    CompensatedSum<Complex> total;
    double error = 0;
    // [0, 1] in closed form: rho = 1 there
    total.add(std::abs(s) < 1e-8 ? Complex(1.0) - s / 2.0 : (1.0 - std::exp(-s)) / s);
    for (int k = 1; k < static_cast<int>(V); ++k) {
        total.add(integrate([&](double v) { return ctx.rho(v) * std::exp(-s * v); },
                            static_cast<double>(k), static_cast<double>(k + 1),
                            set.contour.max_depth, set.quad_rel_tol, &error));
    }
    if (error > std::max(set.quad_abs_tol, set.quad_rel_tol * std::abs(total.value())) * 10.0) {
        fail(ErrorKind::Accuracy, "rho_hat quadrature did not converge");
    }
    return {total.value(), tail};
}

Complex rho_hat(const AnalyticContext& ctx, Complex s) { return rho_hat_detailed(ctx, s).value; }

Complex j_of(const AnalyticContext& ctx, Complex s) {
    if (!(s.real() > 0.0)) {
        fail(ErrorKind::Domain, "J(s) is evaluated directly only for Re s > 0");
    }
    const auto& set = ctx.settings();
    constexpr double kCut = 60.0;  // tail below e^{-60 - Re s} / |s + 60|
    CompensatedSum<Complex> total;
    double error = 0;
    const double first = std::min(std::abs(s), 1.0);
    auto f = [&](double t) { return std::exp(-s - t) / (s + t); };
    double a = 0.0;
    for (double b = first; a < kCut; b = std::min(2.0 * b, kCut)) {
        total.add(integrate(f, a, b, set.contour.max_depth, set.quad_rel_tol, &error));
        a = b;
    }
    if (error > std::max(set.quad_abs_tol, set.quad_rel_tol * std::abs(total.value())) * 10.0) {
        fail(ErrorKind::Accuracy, "J quadrature did not converge");
    }
    return total.value();
}

Complex exp_minus_zj(const AnalyticContext& ctx, Complex s, Complex z) {
    if (s.real() > 0.0) return std::exp(-z * j_of(ctx, s));
    if (s.imag() == 0.0) {
        fail(ErrorKind::Precondition, "e^{-zJ(s)} is not defined on the cut s <= 0");
    }
    const Complex rh = rho_hat(ctx, s);
    if (std::abs(std::arg(rh)) > kPi / 2) {
        fail(ErrorKind::Precondition, "branch of rho_hat(s)^z is ambiguous at this s");
    }
    return std::exp(z * (std::log(s) + std::log(rh)));
}

double check_laplace_identity(const AnalyticContext& ctx, std::span<const Complex> s_grid) {
    double worst = 0.0;
    for (const Complex s : s_grid) {
        const Complex lhs = std::exp(-j_of(ctx, s));
        const Complex rhs = s * rho_hat(ctx, s);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

RatioRange check_min_bound(const AnalyticContext& ctx, std::span<const Complex> s_grid,
                           std::span<const Complex> z_grid) {
    RatioRange range{INFINITY, 0.0};
    if (s_grid.empty() || z_grid.empty()) return {0.0, 0.0};
    for (const Complex z : z_grid) {
        if (!(z.real() > 0.0) || std::abs(z - 1.0) > 0.2 + 1e-15) {
            fail(ErrorKind::Precondition, "check_min_bound needs Re z > 0 and |z - 1| <= 1/5");
        }
        for (const Complex s : s_grid) {
            if (s.real() < -0.25) fail(ErrorKind::Precondition, "check_min_bound needs Re s >= -1/4");
            const double ratio =
                std::abs(exp_minus_zj(ctx, s, z)) / std::min(std::pow(std::abs(s), z.real()), 1.0);
            range.min = std::min(range.min, ratio);
            range.max = std::max(range.max, ratio);
        }
    }
    return range;
}

EulerProduct f_euler_truncated(const AnalyticContext& ctx, Complex s, std::uint64_t p, ZParam z,
                               std::uint64_t Q, std::span<const std::uint64_t> primes) {
    if (!(s.real() > 1.0)) {
        fail(ErrorKind::Accuracy, "Euler product tail diverges for Re s <= 1");
    }
    const Complex zv = z.value();
    CompensatedSum<Complex> log_sum;
    for (std::uint64_t q : primes) {
        if (q <= p) continue;
        if (q > Q) break;
        log_sum.add(clog1p(-zv * std::exp(-s * std::log(static_cast<double>(q)))));
    }
    const double logQ = std::log(static_cast<double>(std::max<std::uint64_t>(Q, 2)));
    const double tail = std::abs(zv) * j_of(ctx, Complex((s.real() - 1.0) * logQ, 0.0)).real();
    const Complex truncated = std::exp(log_sum.value());
    const Complex completion = std::exp(-zv * j_of(ctx, (s - 1.0) * logQ));
    return {truncated, tail, truncated * completion};
}

EulerProduct f_euler_truncated(const AnalyticContext& ctx, Complex s, std::uint64_t p, ZParam z,
                               std::uint64_t Q) {
    if (p >= Q) return f_euler_truncated(ctx, s, p, z, Q, std::span<const std::uint64_t>{});
    const auto primes = primes_in(p + 1, Q + 1);
    return f_euler_truncated(ctx, s, p, z, Q, primes);
}

double check_f_approx(const AnalyticContext& ctx, std::uint64_t p, Complex s, ZParam z) {
    if (!is_prime(p)) fail(ErrorKind::Domain, std::to_string(p) + " is not prime");
    if (!(s.real() > 0.0)) fail(ErrorKind::Domain, "check_f_approx requires Re s > 0");
    const auto F = f_euler_truncated(ctx, s + 1.0, p, z, ctx.settings().product_cutoff);
    const Complex reference =
        std::exp(-z.value() * j_of(ctx, s * std::log(static_cast<double>(p))));
    return std::abs(F.completed / reference - 1.0);
}

double MainTermParams::u() const { return std::log(x) / std::log(y); }

bool MainTermParams::in_admissible_range(double c) const {
    if (!(x > std::exp(1.0))) return false;
    const double lower = std::exp(std::pow(std::log(std::log(x)), c));
    return y >= lower && y <= std::sqrt(x);
}

Complex main_term(const MainTermParams& params) {
    if (!(params.x > 1.0)) fail(ErrorKind::Domain, "main_term requires x > 1");
    const Complex z = params.z.value();
    if (params.delta == 0.0) return 0.0;
    if (z == 1.0) return params.delta;
    const double log_x = std::log(params.x);
    return params.delta - params.delta * std::exp(kEulerGamma * z) * reciprocal_gamma(1.0 - z) *
                              std::exp(-z * std::log(log_x));
}

double main_term_dz_at_1(double x, double delta) {
    if (!(x > std::exp(1.0))) fail(ErrorKind::Domain, "main_term_dz_at_1 requires x > e");
    return delta * std::exp(kEulerGamma) / std::log(x);
}

Complex hankel_main_term(const AnalyticContext& ctx, const MainTermParams& params) {
    if (!(params.x > 1.0) || !(params.y > 1.0)) {
        fail(ErrorKind::Domain, "hankel_main_term requires x, y > 1");
    }
    const double u = params.u();
    if (!(u >= 3.0)) fail(ErrorKind::Precondition, "hankel_main_term requires u >= 3");
    if (!params.z.in_analytic_disk()) {
        fail(ErrorKind::Precondition, "hankel_main_term requires |z - 1| <= 1/5");
    }
    if (params.delta == 0.0) return 0.0;
    const Complex z = params.z.value();
    const auto& set = ctx.settings();
    const double r = 1.0 / u;
    const double L = -set.contour.left_end;
    if (!(L > r)) fail(ErrorKind::Precondition, "Hankel loop radius must stay inside the cut");

    auto rho_hat_pow = [&](Complex w) { return std::exp(z * std::log(rho_hat(ctx, w))); };
    // w = t e^{-i pi} (lower edge) and w = t e^{+i pi} (upper edge)
    auto edge = [&](double t, double side) {
        const Complex w_pow = std::exp((z - 1.0) * Complex(std::log(t), side * kPi));
        return w_pow * std::exp(-u * t) * rho_hat_pow(Complex(-t, 0.0));
    };
    auto circle = [&](double theta) {
        const Complex w = std::polar(r, theta);
        const Complex w_pow = std::exp((z - 1.0) * Complex(std::log(r), theta));
        return w_pow * std::exp(u * w) * rho_hat_pow(w) * Complex(0.0, 1.0) * w;
    };

    double error = 0;
    const unsigned depth = set.contour.max_depth;
    const double tol = set.quad_rel_tol;
    // lower edge runs from -L to -r (dw = -dt, t from L down to r), upper edge back out
    const Complex lower = integrate([&](double t) { return edge(t, -1.0); }, r, L, depth, tol, &error);
    const Complex upper = -integrate([&](double t) { return edge(t, 1.0); }, r, L, depth, tol, &error);
    const Complex loop = integrate(circle, -kPi, kPi, depth, tol, &error);
    const Complex total = lower + loop + upper;
    if (error > std::max(1e-10, 1e-8 * std::abs(total))) {
        fail(ErrorKind::Accuracy, "Hankel contour node budget exhausted before tolerance");
    }
    const Complex log_y_pow = std::exp(z * std::log(std::log(params.y)));
    return params.delta - params.delta * total / (Complex(0.0, 2.0 * kPi) * log_y_pow);
}

ZetaOneP zeta_one_p(std::uint64_t p) {
    using boost::multiprecision::cpp_int;
    using boost::multiprecision::cpp_rational;
    if (!is_prime(p)) fail(ErrorKind::Domain, std::to_string(p) + " is not prime");
    cpp_rational product = 1;
    for (std::uint64_t q : primes_in(1, p + 1)) product *= cpp_rational(cpp_int(q), cpp_int(q - 1));
    ZetaOneP out{boost::multiprecision::numerator(product),
                 boost::multiprecision::denominator(product), 0.0};
    out.value = product.convert_to<double>();
    return out;
}

namespace {

void check_product_args(ZParam z, std::uint64_t Q) {
    if (std::abs(z.value()) > 1.5 + 1e-15) fail(ErrorKind::Precondition, "G products need |z| <= 3/2");
    if (Q < 1000) fail(ErrorKind::Precondition, "G products need Q >= 1000");
}

// Each factor (1 - z/q)(1 - 1/q)^{-z} has log -sum_{k>=2} (z^k - z)/(k q^k);
// summing the crude majorant over all integers n > Q gives this bound.
double g_tail_bound(ZParam z, std::uint64_t Q) {
    const double a = std::abs(z.value());
    const double q = static_cast<double>(Q);
    return (a * a + a) / (2.0 * q * (1.0 - a / q));
}

Complex g_factor_log(Complex z, std::uint64_t q) {
    const double inv = 1.0 / static_cast<double>(q);
    return clog1p(-z * inv) - z * clog1p(Complex(-inv, 0.0));
}

}  // namespace

TruncatedProduct g1_product(ZParam z, std::uint64_t Q, double tail_tolerance) {
    check_product_args(z, Q);
    const double tail = g_tail_bound(z, Q);
    if (tail > tail_tolerance) fail(ErrorKind::Accuracy, "G_1 truncation tail exceeds tolerance");
    CompensatedSum<Complex> log_sum;
    for_each_prime(2, Q + 1, [&](std::uint64_t q) { log_sum.add(g_factor_log(z.value(), q)); });
    return {std::exp(log_sum.value()), tail};
}

TruncatedProduct gp_product(std::uint64_t p, ZParam z, std::uint64_t Q, double tail_tolerance) {
    check_product_args(z, Q);
    if (!is_prime(p)) fail(ErrorKind::Domain, std::to_string(p) + " is not prime");
    const double tail = g_tail_bound(z, Q);
    if (tail > tail_tolerance) fail(ErrorKind::Accuracy, "G_p truncation tail exceeds tolerance");
    const Complex zv = z.value();
    CompensatedSum<Complex> log_sum;
    for_each_prime(2, Q + 1, [&](std::uint64_t q) {
        if (q <= p) {
            log_sum.add(-zv * clog1p(Complex(-1.0 / static_cast<double>(q), 0.0)));
        } else {
            log_sum.add(g_factor_log(zv, q));
        }
    });
    return {std::exp(log_sum.value()), tail};
}

Complex gp_by_composition(std::uint64_t p, ZParam z, std::uint64_t Q) {
    if (!is_prime(p)) fail(ErrorKind::Domain, std::to_string(p) + " is not prime");
    Complex head = 1.0;
    for (std::uint64_t q : primes_in(1, p + 1)) head /= 1.0 - z.value() / static_cast<double>(q);
    return head * g1_product(z, Q).value;
}

}  // namespace mobius_lab

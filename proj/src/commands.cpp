#include "mobius_lab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mobius_lab/cache.hpp"
#include "mobius_lab/error.hpp"

namespace mobius_lab {

namespace {

using nlohmann::json;

double parse_number(const std::string& text, const char* what) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) fail(ErrorKind::Config, std::string("bad ") + what + ": '" + text + "'");
    return v;
}

std::int64_t as_int(std::uint64_t v) { return static_cast<std::int64_t>(v); }

YRegime default_regime(const PrimeSetSpec& spec) {
    const auto& v = spec.variant();
    if (std::holds_alternative<AllPrimes>(v) || std::holds_alternative<Progression>(v)) return YRegime::Expo;
    return YRegime::Power;
}

}  // namespace

std::string to_string(YRegime regime) {
    switch (regime) {
        case YRegime::LogLog: return "loglog";
        case YRegime::Power: return "power";
        case YRegime::Expo: return "expo";
    }
    return "?";
}

double reference_rate(YRegime regime, double x) {
    const double l1 = std::log(x);
    const double l2 = l1 > 0 ? std::log(l1) : std::nan("");
    if (!(l2 > 0)) return std::nan("");
    switch (regime) {
        case YRegime::LogLog: {
            const double l3 = std::log(l2);
            return l3 > 0 ? l3 / l2 : std::nan("");
        }
        case YRegime::Power: return std::sqrt(l2 / l1);
        case YRegime::Expo: return l2 * l2 / l1;
    }
    return std::nan("");
}

YChoice YChoice::parse(const std::string& text) {
    YChoice c;
    if (text.rfind("auto", 0) == 0) {
        const std::string rest = text.substr(4);
        if (rest.empty()) return c;
        if (rest == ":loglog") c.regime = YRegime::LogLog;
        else if (rest == ":power") c.regime = YRegime::Power;
        else if (rest == ":expo") c.regime = YRegime::Expo;
        else fail(ErrorKind::Config, "unknown y regime '" + text + "'");
        return c;
    }
    c.fixed = parse_number(text, "y");
    return c;
}

std::string YChoice::describe() const {
    if (fixed) return format_real(*fixed);
    return regime ? "auto:" + to_string(*regime) : "auto";
}

OutputFormat parse_output_format(const std::string& text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    fail(ErrorKind::Config, "output format must be csv or json, got '" + text + "'");
}

std::string render(const Table& table, OutputFormat format) {
    return format == OutputFormat::Csv ? table.to_csv() : table.to_json();
}

void RunConfig::validate() const {
    if (x_max < 10) fail(ErrorKind::Config, "x_max must be >= 10");
    if (!(checkpoint_ratio > 1.0)) fail(ErrorKind::Config, "checkpoint_ratio must exceed 1");
    if (workers < 1) fail(ErrorKind::Config, "workers must be >= 1");
    if (segment_len < 1) fail(ErrorKind::Config, "segment_len must be >= 1");
    if (y && y->fixed && !(*y->fixed >= 2.0 && *y->fixed < static_cast<double>(x_max))) {
        fail(ErrorKind::Config, "y must lie in [2, x_max)");
    }
    if (time_budget_seconds && !(*time_budget_seconds > 0)) {
        fail(ErrorKind::Config, "time budget must be positive");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 1 || grid[i] > x_max || (i && grid[i] <= grid[i - 1])) {
            fail(ErrorKind::Config, "grid must be strictly ascending within [1, x_max]");
        }
    }
}

SeriesOptions RunConfig::series_options() const {
    SeriesOptions o;
    o.segment_len = segment_len;
    o.workers = workers;
    o.cache_dir = cache_dir;
    o.time_budget_seconds = time_budget_seconds;
    return o;
}

std::vector<std::uint64_t> RunConfig::checkpoints() const {
    if (!grid.empty()) {
        auto g = grid;
        if (g.back() != x_max) g.push_back(x_max);
        return g;
    }
    return geometric_grid(x_max, checkpoint_ratio);
}

RunConfig RunConfig::from_json_text(const std::string& text, RunConfig c) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) fail(ErrorKind::Config, "config must be a JSON object");
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "x_max") c.x_max = v.get<std::uint64_t>();
            else if (key == "segment_len") c.segment_len = v.get<std::uint64_t>();
            else if (key == "set_spec" || key == "set") c.set_spec = v.get<std::string>();
            else if (key == "y") c.y = v.is_number() ? YChoice{v.get<double>(), std::nullopt} : YChoice::parse(v.get<std::string>());
            else if (key == "z") c.z = v.is_number() ? ZParam{v.get<double>(), 0.0} : ZParam::parse(v.get<std::string>());
            else if (key == "checkpoint_ratio") c.checkpoint_ratio = v.get<double>();
            else if (key == "workers") c.workers = v.get<unsigned>();
            else if (key == "cache_dir") c.cache_dir = v.get<std::string>();
            else if (key == "output_format") c.output_format = parse_output_format(v.get<std::string>());
            else if (key == "grid") c.grid = v.get<std::vector<std::uint64_t>>();
            else if (key == "time_budget_seconds") c.time_budget_seconds = v.get<double>();
            else fail(ErrorKind::Config, "unknown config key '" + key + "'");
        }
    } catch (const json::exception& e) {
        fail(ErrorKind::Config, std::string("config field has the wrong type: ") + e.what());
    }
    return c;
}

RunConfig RunConfig::from_json_file(const std::filesystem::path& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Config, "cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str(), std::move(base));
}

RunConfig RunConfig::from_json_text(const std::string& text) { return from_json_text(text, RunConfig{}); }

RunConfig RunConfig::from_json_file(const std::filesystem::path& path) {
    return from_json_file(path, RunConfig{});
}

double bound_rhs(double eps_star, double u) { return eps_star * std::log(u) + 1.0 / u; }

double balanced_y(const DensityProfile& profile, double x) {
    const double log_x = std::log(x);
    double lo = std::log(2.0);
    double hi = 0.5 * log_x;
    if (!(hi > lo)) return 2.0;
    auto f = [&](double l) {
        const double u = log_x / l;
        return profile.epsilon_star(std::exp(l)) * std::log(u) - 1.0 / u;
    };
    if (f(lo) <= 0) return 2.0;
    if (f(hi) >= 0) return std::exp(hi);
    for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0 ? lo : hi) = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

Table ConvergenceReport::table() const {
    Table t;
    t.columns = {"x", "S", "compensation", "prediction", "y", "u", "eps_star_window", "bound_rhs",
                 "ratio", "admissible"};
    if (with_above_y) t.columns.push_back("S_above_y");
    if (with_reference) t.columns.push_back("reference_rate");
    if (with_z) {
        t.columns.push_back("main_term_re");
        t.columns.push_back("main_term_im");
    }
    for (const auto& r : rows) {
        std::vector<Cell> row{as_int(r.x), r.s, r.compensation, r.prediction, r.y, r.u,
                              r.eps_star, r.bound_rhs, r.ratio, r.admissible};
        if (with_above_y) row.emplace_back(r.s_above_y.value_or(std::nan("")));
        if (with_reference) row.emplace_back(r.reference);
        if (with_z) {
            const Complex m = r.main_term_z.value_or(Complex(std::nan(""), std::nan("")));
            row.emplace_back(m.real());
            row.emplace_back(m.imag());
        }
        t.add_row(std::move(row));
    }
    return t;
}

ConvergenceReport cmd_converge(const RunConfig& config) {
    config.validate();
    const auto spec = PrimeSetSpec::parse(config.set_spec);
    const auto grid = config.checkpoints();
    const DensityProfile profile(spec, static_cast<double>(config.x_max));

    ConvergenceReport report;
    report.spec = spec.describe();
    report.delta = spec.delta();
    report.with_z = config.z.has_value();
    const YChoice ychoice = config.y.value_or(YChoice{});
    const YRegime regime = ychoice.regime.value_or(default_regime(spec));
    report.with_reference = !ychoice.fixed;
    report.with_above_y = ychoice.fixed.has_value();
    const double fixed_eps = ychoice.fixed ? profile.epsilon_star(*ychoice.fixed) : 0.0;

    std::size_t outside = 0;
    auto add_row = [&](std::uint64_t xi, double value, double compensation, std::optional<double> above) {
        ConvergenceRow r{};
        const double x = static_cast<double>(xi);
        r.x = xi;
        r.s = value;
        r.compensation = compensation;
        r.s_above_y = above;
        r.prediction = x > 1 ? spec.delta() * std::exp(kEulerGamma) / std::log(x) : std::nan("");
        r.y = ychoice.fixed ? *ychoice.fixed : balanced_y(profile, std::max(x, 4.0));
        r.eps_star = ychoice.fixed ? fixed_eps : profile.epsilon_star(r.y);
        r.u = std::log(x) / std::log(r.y);
        r.bound_rhs = bound_rhs(r.eps_star, r.u);
        r.ratio = std::abs(r.s) / r.bound_rhs;
        r.reference = ychoice.fixed ? std::nan("") : reference_rate(regime, x);
        const MainTermParams params{x, r.y, config.z.value_or(ZParam{}), spec.delta()};
        r.admissible = params.in_admissible_range(2.0);
        if (!r.admissible) ++outside;
        if (config.z && x > 1) r.main_term_z = main_term(params);
        report.rows.push_back(r);
    };

    try {
        if (ychoice.fixed) {
            // real part: S; imaginary part: the members above y only
            const double y = *ychoice.fixed;
            accumulate_stream<Complex>(
                config.x_max, grid, config.series_options(),
                [&spec, y](std::uint64_t n, std::uint64_t spf, int mu, unsigned omega) {
                    if (!spf_in(spec, spf)) return Complex{};
                    const double t = mu * static_cast<double>(omega) / static_cast<double>(n);
                    return Complex(t, static_cast<double>(spf) > y ? t : 0.0);
                },
                [&](const ComplexCheckpoint& c) { add_row(c.x, c.value.real(), c.compensation.real(), c.value.imag()); });
        } else {
            accumulate_stream<double>(
                config.x_max, grid, config.series_options(),
                [&spec](std::uint64_t n, std::uint64_t spf, int mu, unsigned omega) {
                    return spf_in(spec, spf) ? mu * static_cast<double>(omega) / static_cast<double>(n) : 0.0;
                },
                [&](const SeriesCheckpoint& c) { add_row(c.x, c.value, c.compensation, std::nullopt); });
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Budget) throw;
        report.complete = false;
        report.note = e.what();
    }
    if (outside) {
        report.warnings.push_back(std::to_string(outside) + " of " + std::to_string(report.rows.size()) +
                                  " rows use y outside [exp((log2 x)^2), sqrt x]");
    }
    return report;
}

Table AdversarialReport::table() const {
    Table t;
    t.columns = {"x", "S", "dominant", "other", "target", "S_minus_target", "dominant_minus_target"};
    for (const auto& r : rows) {
        t.add_row({as_int(r.x), r.s, r.dominant, r.other, kMinusLog2, r.s - kMinusLog2,
                   r.dominant - kMinusLog2});
    }
    return t;
}

AdversarialReport cmd_adversarial(const std::vector<double>& x_seq, std::uint64_t x_eval,
                                  const SeriesOptions& opts) {
    const auto spec = adversarial_set(x_seq);
    if (x_eval < 1) fail(ErrorKind::Precondition, "evaluation point must be >= 1");
    std::vector<std::uint64_t> points;
    for (double x : x_seq) {
        if (x <= static_cast<double>(x_eval)) points.push_back(static_cast<std::uint64_t>(std::floor(x)));
    }
    points.push_back(x_eval);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    const auto totals = sum_restricted(x_eval, spec, points, opts);
    const auto composite = accumulate<double>(
        x_eval, points, opts, [&spec](std::uint64_t n, std::uint64_t spf, int mu, unsigned omega) {
            return spf_in(spec, spf) && spf != n ? mu * static_cast<double>(omega) / static_cast<double>(n) : 0.0;
        });

    std::vector<std::uint64_t> members;
    for_each_prime(2, x_eval + 1, [&](std::uint64_t p) {
        if (spec.admits(p)) members.push_back(p);
    });

    AdversarialReport report;
    report.x_seq = x_seq;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const double X = static_cast<double>(points[k]);
        const double root = std::sqrt(X);
        CompensatedSum<double> dominant, small;
        for (std::uint64_t p : members) {
            if (p > points[k]) break;
            (static_cast<double>(p) > root ? dominant : small).add(-1.0 / static_cast<double>(p));
        }
        CompensatedSum<double> other;
        other.add(composite[k].value);
        other.add(small);
        report.rows.push_back({points[k], totals[k].value, dominant.value(), other.value()});
    }
    return report;
}

bool IdentityReport::passed() const {
    if (lemmas.mu_omega_failures || lemmas.mu_failures) return false;
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
}

Table IdentityReport::table() const {
    Table t;
    t.columns = {"check", "spec", "y", "n_max", "convolution_failures", "unbounded_mismatches",
                 "bounded_mismatches", "adopted_reading", "passed"};
    for (const auto& s : suites) {
        t.add_row({std::string("convolution"), s.spec, s.y, as_int(s.n_max), as_int(s.convolution_failures),
                   as_int(s.unbounded_mismatches), as_int(s.bounded_mismatches), to_string(s.adopted),
                   s.passed()});
    }
    t.add_row({std::string("mu_omega_divisor_sum"), std::string("-"), std::nan(""), as_int(lemmas.n_max),
               as_int(lemmas.mu_omega_failures), std::int64_t{0}, std::int64_t{0}, std::string("-"),
               lemmas.mu_omega_failures == 0});
    t.add_row({std::string("mu_divisor_sum"), std::string("-"), std::nan(""), as_int(lemmas.n_max),
               as_int(lemmas.mu_failures), std::int64_t{0}, std::int64_t{0}, std::string("-"),
               lemmas.mu_failures == 0});
    return t;
}

std::string IdentityReport::failure_lines() const {
    std::string out;
    for (const auto& c : failures) out += c.to_json_line() + "\n";
    return out;
}

IdentityReport cmd_identity(std::uint64_t n_max, const std::vector<double>& y_list,
                            const std::vector<PrimeSetSpec>& specs, std::uint64_t corrupt_at) {
    if (n_max < 1) fail(ErrorKind::Config, "n_max must be >= 1");
    if (n_max > kIdentityBudget) {
        fail(ErrorKind::Budget, "identity suite budget is n_max <= " + std::to_string(kIdentityBudget));
    }
    if (corrupt_at > n_max) fail(ErrorKind::Config, "corruption index lies outside [1, n_max]");
    auto table = build_segment(1, n_max + 1);
    if (corrupt_at) table.corrupt_mu_for_testing(corrupt_at, table.mu(corrupt_at) == 0 ? 1 : -table.mu(corrupt_at));

    IdentityReport report;
    report.lemmas = run_divisor_lemmas(table);
    for (const auto& spec : specs) {
        for (double y : y_list) {
            auto suite = run_identity_suite(table, y, spec);
            report.failures.insert(report.failures.end(), suite.failures.begin(), suite.failures.end());
            report.suites.push_back(std::move(suite));
        }
    }
    return report;
}

AnalyticReport cmd_analytic(const AnalyticContext& ctx, const AnalyticGrid& grid) {
    AnalyticReport rep;
    rep.table.columns = {"check", "parameter", "value", "reference", "discrepancy", "tolerance", "pass"};
    auto row = [&](const std::string& check, const std::string& param, double value, double reference,
                   double discrepancy, double tol, bool pass) {
        rep.passed = rep.passed && pass;
        rep.table.add_row({check, param, value, reference, discrepancy, tol, pass});
    };
    auto cstr = [](Complex s) {
        return s.imag() == 0 ? format_real(s.real()) : format_real(s.real()) + (s.imag() < 0 ? "" : "+") +
                                                           format_real(s.imag()) + "i";
    };
    auto guarded = [&](const std::string& check, const std::string& param, auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Accuracy && e.kind() != ErrorKind::Budget) throw;
            row(check + " (" + e.what() + ")", param, std::nan(""), std::nan(""), std::nan(""), std::nan(""), false);
        }
    };

    for (Complex s : grid.laplace_s) {
        guarded("laplace_identity", cstr(s), [&] {
            const Complex lhs = exp_minus_zj(ctx, s, 1.0);
            const Complex rhs = s * rho_hat(ctx, s);
            const double d = std::abs(lhs - rhs);
            row("laplace_identity", cstr(s), lhs.real(), rhs.real(), d, 1e-6, d < 1e-6);
        });
    }
    {
        const double r2 = dickman_rho(ctx, 2.0);
        const double ref = 1.0 - std::log(2.0);
        row("rho", "2", r2, ref, std::abs(r2 - ref), 1e-9, std::abs(r2 - ref) < 1e-9);
        const double h0 = rho_hat(ctx, 0.0).real();
        const double eg = std::exp(kEulerGamma);
        row("rho_hat", "0", h0, eg, std::abs(h0 - eg), 1e-6, std::abs(h0 - eg) < 1e-6);
    }
    guarded("min_bound_ratio", "grid", [&] {
        const auto range = check_min_bound(ctx, grid.bound_s, grid.bound_z);
        row("min_bound_ratio_min", "grid", range.min, 0.5, std::nan(""), std::nan(""), range.min > 0.5);
        row("min_bound_ratio_max", "grid", range.max, 3.0, std::nan(""), std::nan(""), range.max < 3.0);
    });

    const Complex s_f = 1.0 / grid.f_log_x;
    double previous = std::numeric_limits<double>::infinity();
    for (std::uint64_t p : grid.f_primes) {
        guarded("f_approx", std::to_string(p), [&] {
            const double d = check_f_approx(ctx, p, s_f, ZParam{});
            row("f_approx", std::to_string(p), d, std::nan(""), d, std::nan(""), d < previous);
            previous = d;
        });
    }

    const double y = std::exp(grid.hankel_log_y);
    previous = std::numeric_limits<double>::infinity();
    for (double u : grid.hankel_u) {
        const std::string param = "u=" + format_real(u);
        guarded("hankel_vs_main_term", param, [&] {
            const MainTermParams params{std::exp(u * grid.hankel_log_y), y, grid.hankel_z, 1.0};
            const Complex h = hankel_main_term(ctx, params);
            const Complex m = main_term(params);
            const double d = std::abs(h - m);
            row("hankel_vs_main_term", param, h.real(), m.real(), d, std::nan(""), d < previous);
            previous = d;
        });
    }
    guarded("hankel_z1", "u=20", [&] {
        const MainTermParams params{std::exp(20 * grid.hankel_log_y), y, ZParam{}, 1.0};
        const double h = hankel_main_term(ctx, params).real();
        row("hankel_z1", "u=20", h, 1.0, std::abs(h - 1.0), 1e-8, std::abs(h - 1.0) < 1e-8);
    });
    {
        const double x = 1e10;
        const Complex m1 = main_term({x, std::sqrt(x), ZParam{}, 1.0});
        row("main_term_z1", "x=1e10", m1.real(), 1.0, std::abs(m1 - 1.0), 0.0, m1 == Complex(1.0));
        const double h = 1e-4;
        const double fd = (main_term({x, std::sqrt(x), ZParam{1.0 + h, 0}, 1.0}).real() -
                           main_term({x, std::sqrt(x), ZParam{1.0 - h, 0}, 1.0}).real()) / (2 * h);
        const double d = main_term_dz_at_1(x, 1.0);
        const double rel = std::abs(d - fd) / std::abs(d);
        row("main_term_dz_at_1", "x=1e10", d, fd, rel, 1e-6, rel < 1e-6);
    }
    return rep;
}

Table cmd_special(std::uint64_t x_max, const std::vector<std::uint64_t>& p_list,
                  const std::vector<std::uint64_t>& grid, const SeriesOptions& opts) {
    const auto points = detail::normalized_grid(x_max, grid);
    Table t;
    t.columns = {"x", "V1", "V1_log_x", "mu_log", "mu_log_plus_1"};
    for (auto p : p_list) {
        if (!is_prime(p)) fail(ErrorKind::Domain, "special report primes must be prime");
        const auto s = std::to_string(p);
        for (const char* c : {"V", "V_norm", "mu_log", "mu_log_minus_target"}) {
            t.columns.push_back(std::string(c) + "_p" + s);
        }
    }
    const auto v1 = sum_v1(x_max, points, opts);
    const auto ml = sum_mu_log(x_max, std::nullopt, points, opts);
    std::vector<std::vector<SeriesCheckpoint>> vp, mlp;
    std::vector<double> zeta;
    for (auto p : p_list) {
        vp.push_back(sum_vp(x_max, p, points, opts));
        mlp.push_back(sum_mu_log(x_max, p, points, opts));
        zeta.push_back(zeta_one_p(p).value);
    }
    for (std::size_t k = 0; k < points.size(); ++k) {
        const double lx = std::log(static_cast<double>(points[k]));
        const bool trivial = points[k] == 1;
        std::vector<Cell> row{as_int(points[k]), v1[k].value, v1[k].value * lx, ml[k].value,
                              trivial ? 0.0 : ml[k].value + 1.0};
        for (std::size_t i = 0; i < p_list.size(); ++i) {
            const double p = static_cast<double>(p_list[i]);
            row.emplace_back(vp[i][k].value);
            row.emplace_back(vp[i][k].value * p * lx / zeta[i]);
            row.emplace_back(mlp[i][k].value);
            row.emplace_back(trivial ? 0.0 : mlp[i][k].value - zeta[i] / p);
        }
        t.add_row(std::move(row));
    }
    return t;
}

Table cmd_sieve_cache(std::uint64_t x_max, std::uint64_t segment_len, const std::filesystem::path& dir) {
    if (x_max < 1 || segment_len < 1) fail(ErrorKind::Config, "x_max and segment_len must be >= 1");
    std::filesystem::create_directories(dir);
    const auto base = detail::base_primes_up_to(x_max + 1);
    Table t;
    t.columns = {"lo", "hi", "path", "status"};
    for (std::uint64_t lo = 1; lo <= x_max; lo += segment_len) {
        const std::uint64_t hi = std::min(x_max + 1, lo + segment_len);
        bool from_cache = false;
        load_or_build_segment(lo, hi, base, dir, std::max(kDefaultSegmentCapacity, segment_len), &from_cache);
        t.add_row({as_int(lo), as_int(hi), segment_cache_path(dir, lo, hi).string(),
                   std::string(from_cache ? "valid" : "written")});
    }
    return t;
}

}  // namespace mobius_lab

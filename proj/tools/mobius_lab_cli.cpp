#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mobius_lab/commands.hpp"
#include "mobius_lab/error.hpp"

using namespace mobius_lab;

namespace {

enum Exit { kPass = 0, kAssertion = 1, kConfig = 2, kBudget = 3 };

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Budget:
        case ErrorKind::Accuracy:
        case ErrorKind::Capacity:
        case ErrorKind::CacheInvalid: return kBudget;
        default: return kConfig;
    }
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, sep);) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_reals(const std::vector<std::string>& items) {
    std::vector<double> out;
    for (const auto& s : items) {
        for (const auto& part : split(s, ',')) {
            std::size_t used = 0;
            double v = 0;
            try {
                v = std::stod(part, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != part.size() || used == 0) fail(ErrorKind::Config, "bad number '" + part + "'");
            out.push_back(v);
        }
    }
    return out;
}

std::vector<std::uint64_t> parse_integers(const std::vector<std::string>& items) {
    std::vector<std::uint64_t> out;
    for (double v : parse_reals(items)) {
        if (!(v >= 0) || v != std::floor(v) || v > 1.8e19) fail(ErrorKind::Config, "expected a non-negative integer");
        out.push_back(static_cast<std::uint64_t>(v));
    }
    return out;
}

// Flags shared by every subcommand; values override the --config file.
struct Common {
    std::string config_path;
    std::string format;
    std::string output;
    std::optional<unsigned> workers;
    std::optional<std::uint64_t> segment_len;
    std::string cache_dir;
    std::optional<double> time_budget;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
        app->add_option("--format", format, "csv or json");
        app->add_option("--output,-o", output, "write the report here instead of stdout");
        app->add_option("--workers", workers, "parallel sieve workers");
        app->add_option("--segment-len", segment_len, "sieve segment length");
        app->add_option("--cache-dir", cache_dir, "segment cache directory");
        app->add_option("--time-budget", time_budget, "wall-clock budget in seconds");
    }

    RunConfig base() const {
        RunConfig c = config_path.empty() ? RunConfig{} : RunConfig::from_json_file(config_path);
        if (!format.empty()) c.output_format = parse_output_format(format);
        if (workers) c.workers = *workers;
        if (segment_len) c.segment_len = *segment_len;
        if (!cache_dir.empty()) c.cache_dir = cache_dir;
        if (time_budget) c.time_budget_seconds = *time_budget;
        return c;
    }

    void emit(const std::string& text) const {
        if (output.empty()) {
            std::fwrite(text.data(), 1, text.size(), stdout);
            std::fflush(stdout);
            return;
        }
        std::ofstream out(output, std::ios::binary);
        if (!out) fail(ErrorKind::Config, "cannot write " + output);
        out << text;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Restricted Moebius series laboratory", "mobius-lab"};
    app.require_subcommand(1);

    Common common;

    auto* converge = app.add_subcommand("converge", "partial sums S(x) against the bound and main term");
    common.attach(converge);
    std::optional<std::uint64_t> x_max;
    std::string set_spec, y_text, z_text;
    std::optional<double> ratio;
    std::vector<std::string> grid_text;
    converge->add_option("--x-max", x_max, "largest x");
    converge->add_option("--set", set_spec, "all | progression:K:L | singleton:P | intervals:FILE | adversarial:X1,X2");
    converge->add_option("--y", y_text, "number or auto[:loglog|power|expo]");
    converge->add_option("--z", z_text, "complex z for the main-term columns, e.g. 0.9 or 1+0.1i");
    converge->add_option("--checkpoint-ratio", ratio, "geometric checkpoint ratio (> 1)");
    converge->add_option("--grid", grid_text, "explicit checkpoints (comma separated)");

    auto* adversarial = app.add_subcommand("adversarial", "the liminf -log 2 construction");
    common.attach(adversarial);
    std::vector<std::string> x_seq_text;
    std::optional<std::uint64_t> x_eval;
    adversarial->add_option("--x-seq", x_seq_text, "scales x_1 < x_2 < ...")->required();
    adversarial->add_option("--x-eval", x_eval, "evaluation point (default: last scale)");

    auto* identity = app.add_subcommand("identity", "exact Dirichlet identity suites");
    common.attach(identity);
    std::uint64_t n_max = 10000;
    std::vector<std::string> y_list_text{"2,5,31,101,997"};
    std::vector<std::string> spec_list{"all"};
    std::string failures_path;
    std::uint64_t corrupt_at = 0;
    identity->add_option("--n-max", n_max, "largest n checked")->capture_default_str();
    identity->add_option("--y", y_list_text, "y values (comma separated)");
    identity->add_option("--spec", spec_list, "prime set specs (repeatable)");
    identity->add_option("--failures", failures_path, "write failing cases as JSON lines");
    identity->add_option("--inject-corruption", corrupt_at, "flip mu(N) before the run (harness test)");

    auto* analytic = app.add_subcommand("analytic", "analytic identity discrepancy table");
    common.attach(analytic);
    AnalyticSettings settings;
    analytic->add_option("--v-max", settings.v_max, "Dickman table range")->capture_default_str();
    analytic->add_option("--ode-step", settings.ode_step, "Dickman integration step")->capture_default_str();
    analytic->add_option("--product-cutoff", settings.product_cutoff, "Euler product cutoff Q")->capture_default_str();

    auto* special = app.add_subcommand("special", "V_1, V_p and log-weighted sums");
    common.attach(special);
    std::vector<std::string> p_text{"2,3,5"};
    special->add_option("--x-max", x_max, "largest x");
    special->add_option("--p", p_text, "primes p (comma separated)");
    special->add_option("--checkpoint-ratio", ratio, "geometric checkpoint ratio (> 1)");
    special->add_option("--grid", grid_text, "explicit checkpoints (comma separated)");

    auto* cache = app.add_subcommand("sieve-cache", "build or validate segment cache files");
    common.attach(cache);
    cache->add_option("--x-max", x_max, "largest n covered");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kPass : kConfig;
    }

    try {
        RunConfig config = common.base();
        if (x_max) config.x_max = *x_max;
        if (ratio) config.checkpoint_ratio = *ratio;
        if (!grid_text.empty()) config.grid = parse_integers(grid_text);

        if (converge->parsed()) {
            if (!set_spec.empty()) config.set_spec = set_spec;
            if (!y_text.empty()) config.y = YChoice::parse(y_text);
            if (!z_text.empty()) config.z = ZParam::parse(z_text);
            const auto report = cmd_converge(config);
            for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
            common.emit(render(report.table(), config.output_format));
            if (!report.complete) {
                std::cerr << "error: partial report: " << report.note << "\n";
                return kBudget;
            }
            return kPass;
        }
        if (adversarial->parsed()) {
            const auto xs = parse_reals(x_seq_text);
            if (xs.empty()) fail(ErrorKind::Config, "--x-seq needs at least one scale");
            const std::uint64_t at = x_eval ? *x_eval : static_cast<std::uint64_t>(std::floor(xs.back()));
            const auto report = cmd_adversarial(xs, at, config.series_options());
            common.emit(render(report.table(), config.output_format));
            return kPass;
        }
        if (identity->parsed()) {
            std::vector<PrimeSetSpec> specs;
            for (const auto& s : spec_list) specs.push_back(PrimeSetSpec::parse(s));
            const auto report = cmd_identity(n_max, parse_reals(y_list_text), specs, corrupt_at);
            common.emit(render(report.table(), config.output_format));
            const std::string lines = report.failure_lines();
            if (!failures_path.empty()) {
                std::ofstream out(failures_path);
                if (!out) fail(ErrorKind::Config, "cannot write " + failures_path);
                out << lines;
            } else if (!lines.empty()) {
                std::cerr << lines;
            }
            return report.passed() ? kPass : kAssertion;
        }
        if (analytic->parsed()) {
            const AnalyticContext ctx(settings);
            const auto report = cmd_analytic(ctx);
            common.emit(render(report.table, config.output_format));
            return report.passed ? kPass : kAssertion;
        }
        if (special->parsed()) {
            std::vector<std::uint64_t> points = config.grid;
            if (points.empty()) points = geometric_grid(config.x_max, config.checkpoint_ratio);
            else if (points.back() != config.x_max) points.push_back(config.x_max);
            const auto table = cmd_special(config.x_max, parse_integers(p_text), points, config.series_options());
            common.emit(render(table, config.output_format));
            return kPass;
        }
        if (cache->parsed()) {
            if (!config.cache_dir) fail(ErrorKind::Config, "sieve-cache needs --cache-dir");
            const auto table = cmd_sieve_cache(config.x_max, config.segment_len, *config.cache_dir);
            common.emit(render(table, config.output_format));
            return kPass;
        }
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    }
    return kConfig;
}

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mobius_lab/analytic.hpp"
#include "mobius_lab/identity.hpp"
#include "mobius_lab/report.hpp"
#include "mobius_lab/series.hpp"

namespace mobius_lab {

enum class OutputFormat { Csv, Json };

// Decay shapes for the quasi-optimal y (sigma = 1, tau = 1/2, no constants):
//   loglog  log3 x / log2 x
//   power   sqrt(log2 x / log x)
//   expo    (log2 x)^2 / log x
enum class YRegime { LogLog, Power, Expo };

std::string to_string(YRegime regime);
double reference_rate(YRegime regime, double x);  // NaN where the shape is undefined

struct YChoice {
    std::optional<double> fixed;  // empty means auto
    std::optional<YRegime> regime;

    // "7.5", "auto", "auto:loglog", "auto:power", "auto:expo"
    static YChoice parse(const std::string& text);
    std::string describe() const;
};

struct RunConfig {
    std::uint64_t x_max = 1'000'000;
    std::uint64_t segment_len = kDefaultSegmentLength;
    std::string set_spec = "all";
    std::optional<YChoice> y;
    std::optional<ZParam> z;
    double checkpoint_ratio = 10.0;
    unsigned workers = 1;
    std::optional<std::filesystem::path> cache_dir;
    OutputFormat output_format = OutputFormat::Csv;
    std::vector<std::uint64_t> grid;  // explicit checkpoints; overrides checkpoint_ratio
    std::optional<double> time_budget_seconds;

    void validate() const;
    SeriesOptions series_options() const;
    std::vector<std::uint64_t> checkpoints() const;

    // Keys mirror the field names; "y" may be a number or an auto string, "z" a
    // number or a string accepted by ZParam::parse.
    static RunConfig from_json_text(const std::string& text, RunConfig base);
    static RunConfig from_json_file(const std::filesystem::path& path, RunConfig base);
    static RunConfig from_json_text(const std::string& text);
    static RunConfig from_json_file(const std::filesystem::path& path);
};

OutputFormat parse_output_format(const std::string& text);
std::string render(const Table& table, OutputFormat format);

struct ConvergenceRow {
    std::uint64_t x;
    double y;
    double u;
    double s;
    double compensation;
    std::optional<double> s_above_y;  // restricted to members > y (fixed y only)
    double prediction;   // delta e^gamma / log x
    double eps_star;     // window (y, x_max]
    double bound_rhs;    // eps_star log u + 1/u
    double ratio;        // |S| / bound_rhs
    double reference;    // regime shape, NaN when not applicable
    bool admissible;
    std::optional<Complex> main_term_z;
};

double bound_rhs(double eps_star, double u);

// Balances eps*(y) log u against 1/u by bisection on log y over [log 2, log sqrt x].
double balanced_y(const DensityProfile& profile, double x);

struct ConvergenceReport {
    std::string spec;
    double delta = 0;
    std::vector<ConvergenceRow> rows;
    bool complete = true;
    std::string note;  // reason the report is partial
    std::vector<std::string> warnings;
    bool with_z = false;
    bool with_reference = false;
    bool with_above_y = false;

    Table table() const;
};

ConvergenceReport cmd_converge(const RunConfig& config);

struct AdversarialRow {
    std::uint64_t x;
    double s;
    double dominant;  // -(sum of 1/p over members p in (sqrt x, x])
    double other;     // every other n <= x
};

struct AdversarialReport {
    std::vector<double> x_seq;
    std::vector<AdversarialRow> rows;
    Table table() const;
};

inline constexpr double kMinusLog2 = -0.69314718055994530942;

AdversarialReport cmd_adversarial(const std::vector<double>& x_seq, std::uint64_t x_eval,
                                  const SeriesOptions& opts = {});

struct IdentityReport {
    std::vector<SuiteResult> suites;
    LemmaScan lemmas;
    std::vector<IdentityCase> failures;
    bool passed() const;
    Table table() const;
    std::string failure_lines() const;  // one JSON object per line
};

inline constexpr std::uint64_t kIdentityBudget = 10'000'000;

// corrupt_at > 0 flips mu(corrupt_at) in the shared table (harness self-test).
IdentityReport cmd_identity(std::uint64_t n_max, const std::vector<double>& y_list,
                            const std::vector<PrimeSetSpec>& specs, std::uint64_t corrupt_at = 0);

struct AnalyticGrid {
    std::vector<Complex> laplace_s{0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    std::vector<Complex> bound_s{0.01, 0.1, {0.5, 0.5}, 1.0, {2.0, 3.0}, 10.0,
                                 {-0.2, 0.5}, {-0.25, -1.0}, {0.05, 2.0}};
    std::vector<Complex> bound_z{0.8, 1.0, 1.2, {1.0, 0.2}, {0.9, -0.1}};
    std::vector<std::uint64_t> f_primes{1009, 10007, 100003};
    double f_log_x = 10.0 * 2.302585092994045684;  // s = 1 / log(10^10)
    std::vector<double> hankel_u{8.0, 16.0};
    double hankel_log_y = 10.0;
    ZParam hankel_z{0.95, 0.0};
};

struct AnalyticReport {
    Table table;
    bool passed = true;
};

AnalyticReport cmd_analytic(const AnalyticContext& ctx, const AnalyticGrid& grid = {});

Table cmd_special(std::uint64_t x_max, const std::vector<std::uint64_t>& p_list,
                  const std::vector<std::uint64_t>& grid, const SeriesOptions& opts = {});

Table cmd_sieve_cache(std::uint64_t x_max, std::uint64_t segment_len,
                      const std::filesystem::path& dir);

}  // namespace mobius_lab

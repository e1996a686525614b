#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "mobius_lab/commands.hpp"
#include "mobius_lab/error.hpp"

using namespace mobius_lab;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    for (std::string line; std::getline(ss, line);) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_SUITE("commands") {

TEST_CASE("table emitters") {
    Table t;
    t.columns = {"x", "v", "name", "ok"};
    t.add_row({std::int64_t{10}, 0.1, std::string("a,b"), true});
    t.add_row({std::int64_t{20}, std::nan(""), std::string("c"), false});
    CHECK(t.to_csv() == "x,v,name,ok\n10,0.10000000000000001,\"a,b\",true\n20,nan,c,false\n");
    const auto j = nlohmann::json::parse(t.to_json());
    CHECK(j[0]["v"].get<double>() == 0.1);
    CHECK(j[1]["v"].is_null());
    CHECK(j[0]["name"] == "a,b");
    CHECK_THROWS_AS(t.add_row({1.0}), Error);
    CHECK(Table{{"a"}, {}}.to_json() == "[]\n");
}

TEST_CASE("run config") {
    RunConfig c;
    CHECK_NOTHROW(c.validate());
    c.x_max = 9;
    CHECK_THROWS_AS(c.validate(), Error);
    c = RunConfig{};
    c.checkpoint_ratio = 1.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = RunConfig{};
    c.workers = 0;
    CHECK_THROWS_AS(c.validate(), Error);

    const auto j = RunConfig::from_json_text(
        R"({"x_max": 5000, "set_spec": "singleton:2", "y": "auto:power", "z": "1+0.1i",
            "checkpoint_ratio": 10, "workers": 3, "output_format": "json", "grid": [10, 100]})");
    CHECK(j.x_max == 5000);
    CHECK(j.set_spec == "singleton:2");
    CHECK(j.y->regime == YRegime::Power);
    CHECK(j.z == ZParam{1, 0.1});
    CHECK(j.workers == 3);
    CHECK(j.output_format == OutputFormat::Json);
    CHECK(j.checkpoints() == std::vector<std::uint64_t>{10, 100, 5000});
    CHECK(RunConfig::from_json_text(R"({"y": 7.5})").y->fixed == 7.5);
    try {
        RunConfig::from_json_text(R"({"x_maxx": 5})");
        FAIL("unknown key accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Config);
    }
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"x_max": "big"})"), Error);
    CHECK_THROWS_AS(YChoice::parse("auto:fast"), Error);
    CHECK(YChoice::parse("auto").describe() == "auto");
    CHECK_THROWS_AS(parse_output_format("xml"), Error);
}

TEST_CASE("converge rows") {
    RunConfig c;
    c.x_max = 1000;
    c.y = YChoice::parse("5");
    const auto report = cmd_converge(c);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.rows[0].x == 10);
    CHECK(report.rows[1].x == 100);
    CHECK(report.rows[2].x == 1000);
    CHECK(std::abs(report.rows[0].s - (-9.0 / 14)) < 1e-15);
    CHECK(report.rows[2].prediction == std::exp(kEulerGamma) / std::log(1000.0));
    // bound_rhs recomputed independently from its inputs
    const double eps = epsilon_star(PrimeSetSpec::all_primes(), 5, 1000);
    for (const auto& r : report.rows) {
        CHECK(r.eps_star == eps);
        CHECK(r.u == std::log(static_cast<double>(r.x)) / std::log(5.0));
        CHECK(r.bound_rhs == eps * std::log(r.u) + 1.0 / r.u);
        CHECK(r.ratio == std::abs(r.s) / r.bound_rhs);
    }
    // S restricted to members above y: n in {7}
    CHECK(std::abs(*report.rows[0].s_above_y - (-1.0 / 7)) < 1e-15);
}

TEST_CASE("converge with a zero-density set") {
    RunConfig c;
    c.x_max = 10'000;
    c.set_spec = "singleton:2";
    const auto report = cmd_converge(c);
    for (const auto& r : report.rows) CHECK(r.prediction == 0.0);
    CHECK(std::abs(report.rows[0].s - 1.0 / 30) < 1e-15);
}

TEST_CASE("balanced y") {
    const DensityProfile profile(PrimeSetSpec::all_primes(), 1e6);
    for (double x : {1e3, 1e4, 1e6}) {
        const double y = balanced_y(profile, x);
        CHECK(y >= 2.0);
        CHECK(y <= std::sqrt(x) * (1 + 1e-12));
    }
    for (auto r : {YRegime::LogLog, YRegime::Power, YRegime::Expo}) {
        CHECK(reference_rate(r, 1e10) > 0);
    }
    CHECK(std::isnan(reference_rate(YRegime::LogLog, 10)));
}

TEST_CASE("converge partial report on budget") {
    RunConfig c;
    c.x_max = 50'000'000;
    c.segment_len = 1'000'000;
    c.checkpoint_ratio = 10;
    c.time_budget_seconds = 0.05;
    const auto report = cmd_converge(c);
    CHECK_FALSE(report.complete);
    CHECK_FALSE(report.note.empty());
    CHECK(report.rows.size() < 7);
}

TEST_CASE("determinism of the converge CSV") {
    RunConfig c;
    c.x_max = 300'000;
    c.segment_len = 20'000;
    c.checkpoint_ratio = 1.5;
    const auto one = cmd_converge(c).table().to_csv();
    c.workers = 8;
    CHECK(cmd_converge(c).table().to_csv() == one);
}

TEST_CASE("CSV and JSON carry identical numbers") {
    RunConfig c;
    c.x_max = 20'000;
    c.z = ZParam{0.9, 0.1};
    const auto table = cmd_converge(c).table();
    const auto csv = parse_csv(table.to_csv());
    const auto json = nlohmann::json::parse(table.to_json());
    REQUIRE(csv.size() == json.size() + 1);
    for (std::size_t r = 0; r < json.size(); ++r) {
        for (std::size_t k = 0; k < table.columns.size(); ++k) {
            const auto& cell = json[r][table.columns[k]];
            const std::string& text = csv[r + 1][k];
            if (cell.is_number_float()) {
                CHECK(cell.get<double>() == std::stod(text));
            } else if (cell.is_number_integer()) {
                CHECK(std::to_string(cell.get<std::int64_t>()) == text);
            } else if (cell.is_boolean()) {
                CHECK((cell.get<bool>() ? "true" : "false") == text);
            } else if (cell.is_null()) {
                CHECK(text == "nan");
            }
        }
    }
}

TEST_CASE("adversarial decomposition") {
    const auto one = cmd_adversarial({1e6}, 1'000'000);
    REQUIRE(one.rows.size() == 1);
    CHECK(one.rows[0].other == 0.0);
    CHECK(one.rows[0].s == doctest::Approx(-0.6892479723925852).epsilon(1e-13));
    CHECK(one.rows[0].dominant == one.rows[0].s);

    const auto two = cmd_adversarial({100, 1e6}, 1'000'000);
    for (const auto& r : two.rows) CHECK(std::abs(r.s - (r.dominant + r.other)) < 1e-13);
    CHECK(two.table().columns.size() == 7);
    CHECK_THROWS_AS(cmd_adversarial({100, 9000}, 9000), Error);
}

TEST_CASE("identity command") {
    const auto all = PrimeSetSpec::all_primes();
    const auto ok = cmd_identity(10'000, {5, 31}, {all});
    CHECK(ok.passed());
    CHECK(ok.failures.empty());
    CHECK(ok.table().rows.size() == 4);
    CHECK(cmd_identity(100, {2}, {PrimeSetSpec::singleton(3)}).passed());

    const auto bad = cmd_identity(1000, {31}, {all}, 30);
    CHECK_FALSE(bad.passed());
    REQUIRE_FALSE(bad.failures.empty());
    const auto first = bad.failure_lines().substr(0, bad.failure_lines().find('\n'));
    const auto j = nlohmann::json::parse(first);
    CHECK(j.contains("n"));
    CHECK(j["lhs"] != j["rhs"]);

    try {
        cmd_identity(kIdentityBudget + 1, {5}, {all});
        FAIL("budget not enforced");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Budget);
    }
}

TEST_CASE("analytic command") {
    const auto rep = cmd_analytic(default_context());
    CHECK(rep.passed);
    CHECK(rep.table.rows.size() >= 15);
}

TEST_CASE("special report") {
    const std::vector<std::uint64_t> grid{1, 3, 10};
    const std::vector<std::uint64_t> primes{2};
    const auto t = cmd_special(10, primes, grid);
    REQUIRE(t.rows.size() == 3);
    for (const auto& cell : t.rows[0]) {
        if (std::holds_alternative<double>(cell)) CHECK(std::get<double>(cell) == 0.0);
    }
    const auto col = [&](const std::string& name) {
        return static_cast<std::size_t>(std::find(t.columns.begin(), t.columns.end(), name) - t.columns.begin());
    };
    CHECK(std::get<double>(t.rows[1][col("mu_log")]) == doctest::Approx(-0.7127776865026759));
    CHECK(std::get<double>(t.rows[2][col("V_p2")]) == doctest::Approx(1.0 / 30));
    CHECK(std::get<double>(t.rows[2][col("V_norm_p2")]) == doctest::Approx(std::log(10.0) / 30));
    CHECK(std::get<double>(t.rows[2][col("V1_log_x")]) == doctest::Approx(-9.0 / 14 * std::log(10.0)));
    CHECK_THROWS_AS(cmd_special(10, std::vector<std::uint64_t>{4}, grid), Error);
}

TEST_CASE("sieve-cache command") {
    const auto dir = std::filesystem::temp_directory_path() / "mobius_lab_cmd_cache";
    std::filesystem::remove_all(dir);
    const auto first = cmd_sieve_cache(25'000, 10'000, dir);
    REQUIRE(first.rows.size() == 3);
    CHECK(std::get<std::string>(first.rows[0][3]) == "written");
    const auto second = cmd_sieve_cache(25'000, 10'000, dir);
    CHECK(std::get<std::string>(second.rows[2][3]) == "valid");
    CHECK(std::get<std::int64_t>(second.rows[2][1]) == 25'001);
    std::filesystem::remove_all(dir);
}

}

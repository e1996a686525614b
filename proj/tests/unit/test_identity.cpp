#include <doctest.h>

#include <cmath>

#include "mobius_lab/error.hpp"
#include "mobius_lab/identity.hpp"

using namespace mobius_lab;

TEST_SUITE("identity") {

TEST_CASE("explicit formula examples") {
    const auto all = PrimeSetSpec::all_primes();
    CHECK(g_y_explicit(2, 3, all) == -1);
    CHECK(g_y_explicit(6, 3, all) == 0);
    CHECK(g_y_explicit(1, 3, all) == 0);
    CHECK(g_y_explicit(1, 1e6, PrimeSetSpec::singleton(2)) == 0);
    CHECK_THROWS_AS(g_y_explicit(0, 3, all), Error);
}

TEST_CASE("divisor definition examples") {
    const auto all = PrimeSetSpec::all_primes();
    CHECK(g_y_divisor(6, 3, all) == 0);
    CHECK(g_y_divisor(2, 3, all) == -1);
    CHECK(g_y_divisor(9, 2, all) == 0);
    try {
        g_y_divisor(kDivisorBudget + 1, 3, all);
        FAIL("budget not enforced");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Budget);
    }
}

TEST_CASE("the two explicit readings differ off the smooth numbers") {
    const auto all = PrimeSetSpec::all_primes();
    CHECK(g_y_divisor(10, 3, all) == 1);
    CHECK(g_y_explicit(10, 3, all, ExplicitReading::Unbounded) == 1);
    CHECK(g_y_explicit(10, 3, all, ExplicitReading::BoundedByY) == 0);
    // on y-smooth n both readings agree
    for (std::uint64_t n : {6ull, 12ull, 18ull, 72ull}) {
        CHECK(g_y_explicit(n, 3, all, ExplicitReading::Unbounded) ==
              g_y_explicit(n, 3, all, ExplicitReading::BoundedByY));
    }
}

TEST_CASE("pointwise convolution identity") {
    const auto all = PrimeSetSpec::all_primes();
    const auto c6 = check_convolution(6, 3, all);
    CHECK(c6.lhs == 2);
    CHECK(c6.rhs == 2);
    const auto c4 = check_convolution(4, 3, all);
    CHECK(c4.lhs == 0);
    CHECK(c4.holds());
    const auto c1 = check_convolution(1, 3, all);
    CHECK(c1.lhs == 0);
    CHECK(c1.rhs == 0);
    CHECK(c6.to_json_line() == R"({"lhs":2,"n":6,"rhs":2,"spec":"all","y":3.0})");
}

TEST_CASE("divisor-sum lemmas") {
    CHECK(mu_omega_divisor_sum(8) == -1);
    CHECK(mu_omega_divisor_sum(6) == 0);
    CHECK(mu_omega_divisor_sum(1) == 0);
    CHECK(mu_divisor_sum(1) == 1);
    CHECK(mu_divisor_sum(12) == 0);
    for (std::uint64_t m = 1; m <= 3000; ++m) {
        REQUIRE(mu_omega_divisor_sum(m) == (point_factor(m).omega == 1 ? -1 : 0));
    }
    const auto scan = run_divisor_lemmas(build_segment(1, 100'001));
    CHECK(scan.n_max == 100'000);
    CHECK(scan.mu_omega_failures == 0);
    CHECK(scan.mu_failures == 0);
}

TEST_CASE("bound scan") {
    const auto all = PrimeSetSpec::all_primes();
    CHECK(g_y_bound_scan(10'000, 31, all).max_abs == 1);
    const auto s = g_y_bound_scan(100, 3, all);
    CHECK(s.ratio() > 0);
    CHECK(std::isfinite(s.ratio()));
    CHECK(g_y_bound_scan(10, 3, PrimeSetSpec::singleton(7)).abs_sum == 0);
    CHECK_THROWS_AS(g_y_bound_scan(100, 11, all), Error);
}

TEST_CASE("batch suite agrees with pointwise evaluation") {
    const auto table = build_segment(1, 3001);
    for (const auto& spec : {PrimeSetSpec::all_primes(), PrimeSetSpec::progression(4, 1),
                             PrimeSetSpec::singleton(3)}) {
        for (double y : {2.0, 5.0, 31.0}) {
            const auto suite = run_identity_suite(table, y, spec);
            CHECK(suite.passed());
            CHECK(suite.adopted == ExplicitReading::Unbounded);
            CHECK(suite.unbounded_mismatches == 0);
            for (std::uint64_t n = 1; n <= 3000; n += 7) {
                REQUIRE(g_y_explicit(n, y, spec) == g_y_divisor(n, y, spec));
                REQUIRE(check_convolution(n, y, spec).holds());
            }
        }
    }
}

TEST_CASE("bounded reading fails globally") {
    const auto suite = run_identity_suite(build_segment(1, 10'001), 3, PrimeSetSpec::all_primes());
    CHECK(suite.bounded_mismatches > 0);
    CHECK(suite.unbounded_mismatches == 0);
}

TEST_CASE("corruption is detected") {
    auto table = build_segment(1, 1001);
    table.corrupt_mu_for_testing(30, 1);
    const auto suite = run_identity_suite(table, 31, PrimeSetSpec::all_primes());
    CHECK_FALSE(suite.passed());
    REQUIRE_FALSE(suite.failures.empty());
    CHECK(run_divisor_lemmas(table).mu_failures > 0);
}

TEST_CASE("empty prime set gives identically zero g") {
    const auto table = build_segment(1, 101);
    const auto suite = run_identity_suite(table, 2, PrimeSetSpec::singleton(3));
    CHECK(suite.passed());
    for (std::uint64_t n = 1; n <= 100; ++n) REQUIRE(g_y_divisor(n, 2, PrimeSetSpec::singleton(3)) == 0);
}

}

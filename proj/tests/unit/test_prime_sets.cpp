#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "mobius_lab/error.hpp"
#include "mobius_lab/prime_sets.hpp"
#include "mobius_lab/sieve.hpp"

using namespace mobius_lab;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Config;
}

}  // namespace

TEST_SUITE("prime_sets") {

TEST_CASE("densities per variant") {
    CHECK(PrimeSetSpec::all_primes().delta() == 1.0);
    CHECK(PrimeSetSpec::progression(4, 1).delta() == 0.5);
    CHECK(PrimeSetSpec::progression(5, 2).delta() == 0.25);
    CHECK(PrimeSetSpec::progression(12, 5).delta() == 0.25);
    CHECK(PrimeSetSpec::singleton(3).delta() == 0.0);
    CHECK(PrimeSetSpec::interval_union({{10, 100}}).delta() == 0.0);
}

TEST_CASE("membership") {
    const auto prog = PrimeSetSpec::progression(4, 1);
    CHECK(contains(prog, 5));
    CHECK_FALSE(contains(prog, 7));
    const auto single = PrimeSetSpec::singleton(3);
    CHECK(contains(single, 3));
    CHECK_FALSE(contains(single, 5));
    const auto iv = PrimeSetSpec::interval_union({{31.62, 1000}});
    CHECK(contains(iv, 997));
    CHECK_FALSE(contains(iv, 1009));
    CHECK_FALSE(contains(iv, 31));
    CHECK(contains(PrimeSetSpec::interval_union({{10, 97}}), 97));  // closed on the right
    CHECK_FALSE(contains(PrimeSetSpec::interval_union({{97, 200}}), 97));  // open on the left
    CHECK(kind_of([&] { contains(prog, 9); }) == ErrorKind::Domain);
    CHECK(kind_of([&] { contains(prog, 1); }) == ErrorKind::Domain);
}

TEST_CASE("constructor validation") {
    CHECK(kind_of([] { PrimeSetSpec::progression(4, 2); }) == ErrorKind::Precondition);
    CHECK(kind_of([] { PrimeSetSpec::singleton(4); }) == ErrorKind::Domain);
    CHECK(kind_of([] { PrimeSetSpec::interval_union({{10, 100}, {50, 200}}); }) == ErrorKind::Precondition);
    CHECK_NOTHROW(PrimeSetSpec::interval_union({{10, 100}, {100, 200}}));
}

TEST_CASE("parse and describe") {
    CHECK(PrimeSetSpec::parse("all") == PrimeSetSpec::all_primes());
    CHECK(PrimeSetSpec::parse("progression:4:1") == PrimeSetSpec::progression(4, 1));
    CHECK(PrimeSetSpec::parse("singleton:2") == PrimeSetSpec::singleton(2));
    CHECK(PrimeSetSpec::parse("adversarial:100,1e6") == adversarial_set(std::vector<double>{100, 1e6}));
    CHECK_THROWS_AS(PrimeSetSpec::parse("bogus"), Error);
    CHECK_THROWS_AS(PrimeSetSpec::parse("progression:4"), Error);
    for (const char* s : {"all", "progression:4:1", "singleton:2"}) {
        CHECK(PrimeSetSpec::parse(PrimeSetSpec::parse(s).describe()) == PrimeSetSpec::parse(s));
    }
}

TEST_CASE("interval JSON files") {
    const auto dir = std::filesystem::temp_directory_path() / "mobius_lab_sets";
    std::filesystem::create_directories(dir);
    const auto path = dir / "iv.json";
    std::ofstream(path) << R"({"intervals": [[10, 100], [1000, 1000000]], "delta": 0})";
    const auto spec = PrimeSetSpec::from_json_file(path);
    CHECK(spec == adversarial_set(std::vector<double>{100, 1e6}));
    CHECK(PrimeSetSpec::parse("intervals:" + path.string()) == spec);
    CHECK(kind_of([] { PrimeSetSpec::from_json_text(R"({"intervals": [[1, 2]], "delta": 0.5})"); }) ==
          ErrorKind::Config);
    CHECK(kind_of([] { PrimeSetSpec::from_json_text("[1, 2"); }) == ErrorKind::Config);
}

TEST_CASE("epsilon_at") {
    const auto all = epsilon_at(PrimeSetSpec::all_primes(), 10);
    CHECK(all.theta == doctest::Approx(std::log(210.0)).epsilon(1e-15));
    CHECK(all.epsilon == doctest::Approx(-0.465289247).epsilon(1e-9));
    const auto s9 = epsilon_at(PrimeSetSpec::singleton(3), 9);
    CHECK(s9.theta == doctest::Approx(std::log(3.0)));
    CHECK(s9.epsilon == doctest::Approx(std::log(3.0) / 9));
    const auto s2 = epsilon_at(PrimeSetSpec::singleton(3), 2);
    CHECK(s2.theta == 0.0);
    CHECK(s2.epsilon == 0.0);
    CHECK(kind_of([] { epsilon_at(PrimeSetSpec::all_primes(), 1.5); }) == ErrorKind::Domain);
}

TEST_CASE("progressions at desk scale") {
    const auto primes = primes_in(1, 1'000'001);
    const double expected[] = {-0.000892, -0.001667, -0.000424};
    int i = 0;
    for (std::uint64_t k : {3, 4, 5}) {
        const auto st = epsilon_at(PrimeSetSpec::progression(k, 1), 1e6, primes);
        CHECK(std::abs(st.epsilon) < 0.01);
        CHECK(st.epsilon == doctest::Approx(expected[i++]).epsilon(2e-3));
    }
}

TEST_CASE("epsilon_star") {
    CHECK(epsilon_star(PrimeSetSpec::singleton(3), 5, 100) == doctest::Approx(std::log(3.0) / 5));
    const double all = epsilon_star(PrimeSetSpec::all_primes(), 1e3, 1e6);
    CHECK(all < 0.12);
    CHECK(all == doctest::Approx(0.05441867397764555).epsilon(1e-12));
    CHECK(epsilon_star(PrimeSetSpec::interval_union({{1000, 2000}}), 24, 28) == 0.0);
    CHECK(kind_of([] { epsilon_star(PrimeSetSpec::all_primes(), 10, 10); }) == ErrorKind::Domain);
    CHECK(kind_of([] { epsilon_star(PrimeSetSpec::all_primes(), 1, 10); }) == ErrorKind::Domain);
}

TEST_CASE("epsilon_star is non-increasing in y and matches the profile") {
    for (const auto& spec : {PrimeSetSpec::all_primes(), PrimeSetSpec::progression(4, 3),
                             PrimeSetSpec::singleton(2), adversarial_set(std::vector<double>{50, 1e5})}) {
        const DensityProfile profile(spec, 1e5);
        double previous = INFINITY;
        for (double y = 2; y < 1e5; y *= 1.37) {
            const double e = profile.epsilon_star(y);
            CHECK(e <= previous);
            CHECK(e == doctest::Approx(epsilon_star(spec, y, 1e5)).epsilon(1e-14));
            previous = e;
        }
    }
}

TEST_CASE("adversarial sets") {
    const auto one = adversarial_set(std::vector<double>{100});
    CHECK(one == PrimeSetSpec::interval_union({{10, 100}}));
    const auto two = adversarial_set(std::vector<double>{100, 1e6});
    CHECK(two == PrimeSetSpec::interval_union({{10, 100}, {1000, 1e6}}));
    CHECK_NOTHROW(adversarial_set(std::vector<double>{100, 1e4}));
    CHECK(kind_of([] { adversarial_set(std::vector<double>{100, 9000}); }) == ErrorKind::Precondition);
    CHECK(kind_of([] { adversarial_set(std::vector<double>{1}); }) == ErrorKind::Precondition);
}

}

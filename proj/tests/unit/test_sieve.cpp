#include <doctest.h>

#include <random>

#include "mobius_lab/error.hpp"
#include "mobius_lab/sieve.hpp"

using namespace mobius_lab;

TEST_SUITE("sieve") {

TEST_CASE("small segment values") {
    const std::vector<std::uint64_t> base{2, 3};
    const auto t = build_segment(1, 11, base);
    CHECK(t.spf(1) == kInfinitySentinel);
    CHECK(t.gpf(1) == 1);
    CHECK(t.spf(2) == 2);
    CHECK(t.spf(9) == 3);
    CHECK(t.spf(10) == 2);
    const std::vector<int> mu{1, -1, -1, 0, -1, 1, -1, 0, 0, 1};
    for (std::uint64_t n = 1; n <= 10; ++n) CHECK(t.mu(n) == mu[n - 1]);
}

TEST_CASE("segment away from the origin") {
    const auto t = build_segment(77, 78, std::vector<std::uint64_t>{2, 3, 5, 7});
    CHECK(t.spf(77) == 7);
    CHECK(t.gpf(77) == 11);
    CHECK(t.omega(77) == 2);
    CHECK(t.mu(77) == 1);
}

TEST_CASE("point_factor") {
    CHECK(point_factor(1) == PointFactors{kInfinitySentinel, 1, 1, 0});
    CHECK(point_factor(30) == PointFactors{2, 5, -1, 3});
    CHECK(point_factor(12) == PointFactors{2, 3, 0, 2});
    CHECK_THROWS_AS(point_factor(0), Error);
}

TEST_CASE("primes_in") {
    CHECK(primes_in(1, 11) == std::vector<std::uint64_t>{2, 3, 5, 7});
    CHECK(primes_in(90, 100) == std::vector<std::uint64_t>{97});
    CHECK(primes_in(24, 29).empty());
    CHECK(primes_in(24, 30) == std::vector<std::uint64_t>{29});
    CHECK_THROWS_AS(primes_in(5, 5), Error);
    CHECK_THROWS_AS(primes_in(0, 5), Error);
    std::vector<std::uint64_t> streamed;
    for_each_prime(1, 3'000'000, [&](std::uint64_t p) { streamed.push_back(p); });
    CHECK(streamed == primes_in(1, 3'000'000));
    CHECK(streamed.size() == 216816);
}

TEST_CASE("precondition and capacity errors") {
    CHECK_THROWS_AS(build_segment(10, 10), Error);
    try {
        build_segment(1, 200, std::vector<std::uint64_t>{2, 3, 5, 7, 11});  // 13 missing
        FAIL("incomplete base primes accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Precondition);
    }
    try {
        build_segment(1, 1001, primes_in(1, 32), 999);
        FAIL("capacity not enforced");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Capacity);
    }
}

TEST_CASE("oracle equivalence up to 1e5") {
    const auto t = build_segment(1, 100'001);
    std::size_t mismatches = 0;
    for (std::uint64_t n = 1; n <= 100'000; ++n) {
        const auto p = point_factor(n);
        if (p != PointFactors{t.spf(n), t.gpf(n), t.mu(n), t.omega(n)}) ++mismatches;
    }
    CHECK(mismatches == 0);
}

TEST_CASE("oracle equivalence on a high window") {
    const std::uint64_t lo = 100'000'000, hi = lo + 1'000'001;
    const auto t = build_segment(lo, hi);
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<std::uint64_t> pick(lo, hi - 1);
    std::size_t mismatches = 0;
    for (int i = 0; i < 2000; ++i) {
        const auto n = pick(rng);
        const auto p = point_factor(n);
        if (p != PointFactors{t.spf(n), t.gpf(n), t.mu(n), t.omega(n)}) ++mismatches;
    }
    CHECK(mismatches == 0);
}

TEST_CASE("table invariants") {
    const auto t = build_segment(1, 1'000'001);
    std::size_t squarefree = 0;
    bool ok = true;
    for (std::uint64_t n = 2; n <= 1'000'000; ++n) {
        const int mu = t.mu(n);
        if (mu != 0) {
            ++squarefree;
            ok = ok && mu == (t.omega(n) % 2 ? -1 : 1);
        }
        ok = ok && t.spf(n) <= t.gpf(n) && t.omega(n) <= 9;
        if (t.spf(n) == n) ok = ok && t.gpf(n) == n && mu == -1 && t.omega(n) == 1;
    }
    CHECK(ok);
    const double density = (squarefree + 1) / 1e6;
    CHECK(density > 0.58);
    CHECK(density < 0.64);
    CHECK(density == doctest::Approx(0.607926).epsilon(1e-6));
}

TEST_CASE("segmentation invariance") {
    const std::uint64_t N = 50'000;
    const auto whole = build_segment(1, N);
    for (std::uint64_t m : {2ull, 7ull, 1000ull, 32'768ull, 49'999ull}) {
        const auto a = build_segment(1, m);
        const auto b = build_segment(m, N);
        bool same = true;
        for (std::uint64_t n = 1; n < N; ++n) {
            const auto& part = n < m ? a : b;
            same = same && part.spf(n) == whole.spf(n) && part.gpf(n) == whole.gpf(n) &&
                   part.mu(n) == whole.mu(n) && part.omega(n) == whole.omega(n);
        }
        CHECK_MESSAGE(same, "split at " << m);
    }
}

TEST_CASE("is_prime and factorize") {
    CHECK(is_prime(2));
    CHECK_FALSE(is_prime(1));
    CHECK(is_prime(1'000'000'007));
    CHECK_FALSE(is_prime(3'215'031'751ull));  // strong pseudoprime to bases 2, 3, 5, 7
    CHECK(is_prime(18'446'744'073'709'551'557ull));
    CHECK(next_prime(1000) == 1009);
    const auto f = factorize(360);
    REQUIRE(f.size() == 3);
    CHECK(f[0].prime == 2);
    CHECK(f[0].exponent == 3);
    CHECK(f[2].prime == 5);
}

}

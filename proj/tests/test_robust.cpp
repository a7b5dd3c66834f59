#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "svarsoft/error.hpp"
#include "svarsoft/rng.hpp"

using namespace svarsoft;

TEST_SUITE("robust") {

TEST_CASE("identified-set bounds") {
    const std::vector<double> v{0.3, -1.0, 2.5, 0.0};
    const auto b = identified_set_bounds(v);
    CHECK(b.lower == -1.0);
    CHECK(b.upper == 2.5);
    CHECK_THROWS_AS(identified_set_bounds(std::vector<double>{}), Error);
}

TEST_CASE("robust credible interval equals brute force on random records") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        RngStream rng(seed);
        std::vector<Bounds> b(200);
        for (auto& x : b) {
            const double c = rng.normal(), w = std::abs(rng.normal()) * 0.5;
            x = {c - w, c + w};
        }
        for (double alpha : {0.5, 0.68, 0.9, 1.0}) {
            const auto fast = robust_credible_interval(b, alpha);
            const auto slow = oracle::brute_force_rci(b, alpha);
            CHECK(fast.lo == slow.lo);
            CHECK(fast.hi == slow.hi);
        }
    }
}

TEST_CASE("robust credible interval: point records and ties") {
    // Degenerate bounds reduce to the shortest interval holding ceil(alpha N) points.
    std::vector<Bounds> pts;
    for (double x : {0.0, 1.0, 2.0, 3.0, 10.0}) pts.push_back({x, x});
    const auto r = robust_credible_interval(pts, 0.6);
    CHECK(r.lo == 0.0);
    CHECK(r.hi == 2.0);
    const auto all = robust_credible_interval(pts, 1.0);
    CHECK(all.lo == 0.0);
    CHECK(all.hi == 10.0);
    CHECK_THROWS_AS(robust_credible_interval(pts, 0.0), Error);
    CHECK_THROWS_AS(robust_credible_interval(std::vector<Bounds>{{0, 1}}, 0.5), Error);
}

TEST_CASE("standard interval, posterior medians and informativeness") {
    std::vector<double> v;
    for (int i = 0; i <= 100; ++i) v.push_back(i);
    const auto s = standard_credible_interval(v, 0.9);
    CHECK(s.lo == doctest::Approx(5.0));
    CHECK(s.hi == doctest::Approx(95.0));

    const std::vector<Bounds> b{{0, 4}, {1, 5}, {2, 9}};
    const auto med = set_of_posterior_medians(b);
    CHECK(med.lo == 1.0);
    CHECK(med.hi == 5.0);

    CHECK(prior_informativeness({1, 2}, {0, 4}) == doctest::Approx(0.75));
    CHECK(prior_informativeness({0, 5}, {0, 4}) == 0.0);
    CHECK(prior_informativeness({0, 0}, {1, 1}) == 0.0);
}

TEST_CASE("required draws and the iso-draw curve") {
    CHECK(required_draws(1, 0.5, 0.5) == 6);
    // min{2d ln(2d/delta), e (2d + ln(1/delta))} / eps = 20713.0755..., whose ceiling is 20714.
    CHECK(required_draws(189, 0.05, 0.05) == 20714);
    const double eps = iso_draw_epsilon(189, 20714, 0.05);
    CHECK(eps <= 0.05);
    CHECK(eps > 0.0499);
    CHECK(gross_up_draws(1000, 80.0) == 1250);
    CHECK(gross_up_draws(1000, 100.0) == 1000);
    CHECK_THROWS_AS(required_draws(0, 0.1, 0.1), Error);
    CHECK_THROWS_AS(gross_up_draws(10, 0.0), Error);
}

}  // TEST_SUITE

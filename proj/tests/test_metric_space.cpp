#include <doctest.h>

#include <cmath>

#include "chainbound/metric_space.hpp"

using namespace chainbound;

namespace {

MetricSpace line5() {
    return MetricSpace::point_cloud({{0.0}, {0.25}, {0.5}, {0.75}, {1.0}});
}

}  // namespace

TEST_CASE("cycle graph metric") {
    const auto c6 = MetricSpace::cycle(6);
    CHECK(c6.size() == 6);
    CHECK(c6.dist(0, 3) == 3.0);
    CHECK(c6.dist(0, 5) == 1.0);
    CHECK(c6.diameter() == 3.0);
    CHECK(c6.min_positive_distance() == 1.0);
    CHECK(c6.breakpoints() == std::vector<double>{0.0, 1.0, 2.0, 3.0});
    CHECK(c6.validate().ok());
}

TEST_CASE("grid generator") {
    const auto g = MetricSpace::grid(1, 64);
    CHECK(g.size() == 64);
    CHECK(g.diameter() == doctest::Approx(1.0));
    CHECK(g.dist(0, 1) == doctest::Approx(1.0 / 63));
    CHECK(g.validate().ok());

    const auto g2 = MetricSpace::grid(2, 4);
    CHECK(g2.size() == 16);
    CHECK(g2.diameter() == doctest::Approx(std::sqrt(2.0)));

    CHECK_THROWS_AS(MetricSpace::grid(1, 8, 0.0), ParameterError);
    CHECK_THROWS_AS(MetricSpace::grid(1, 8, 1.5), ParameterError);

    // snowflaked grids stay metric for alpha in (0,1]
    const auto gs = MetricSpace::grid(1, 8, 0.5);
    CHECK(gs.validate().ok());
}

TEST_CASE("validation catches broken axioms") {
    auto rep = MetricSpace::from_matrix({{0.0, 1.0}, {2.0, 0.0}}, {}, true).validate();
    CHECK_FALSE(rep.ok());
    CHECK(rep.violations.front().axiom == "symmetry");

    rep = MetricSpace::from_matrix({{0.0, -1.0}, {-1.0, 0.0}}, {}, true).validate();
    CHECK_FALSE(rep.ok());
    CHECK(rep.violations.front().axiom == "nonnegative");

    rep = MetricSpace::from_matrix({{0.5, 1.0}, {1.0, 0.0}}, {}, true).validate();
    CHECK_FALSE(rep.ok());
    CHECK(rep.violations.front().axiom == "zero_diagonal");

    // 3-point triangle violation: d(0,2) > d(0,1) + d(1,2)
    rep = MetricSpace::from_matrix(
              {{0.0, 1.0, 5.0}, {1.0, 0.0, 1.0}, {5.0, 1.0, 0.0}}, {}, true)
              .validate();
    CHECK_FALSE(rep.ok());
    CHECK(rep.violations.front().axiom == "triangle");
}

TEST_CASE("chebyshev center of the 5-point line") {
    const auto l5 = line5();
    const auto [idx, radius] = l5.chebyshev_center();
    CHECK(idx == 2);
    CHECK(radius == doctest::Approx(0.5));
}

TEST_CASE("balls are closed") {
    const auto l5 = line5();
    CHECK(l5.ball(0, 0.25) == std::vector<int>{0, 1});
    CHECK(l5.ball_size(2, 0.5) == 5);
    CHECK(l5.ball_size(2, 0.0) == 1);
    CHECK(l5.ball_mask(0, 0.25) == 0b00011);
}

TEST_CASE("subspace keeps distances") {
    const auto l5 = line5();
    const auto sub = l5.subspace({0, 2, 4});
    CHECK(sub.size() == 3);
    CHECK(sub.dist(0, 1) == l5.dist(0, 2));
    CHECK(sub.dist(0, 2) == l5.dist(0, 4));
}

TEST_CASE("breakpoints bracket zero and the diameter") {
    const auto l5 = line5();
    const auto& b = l5.breakpoints();
    CHECK(b.front() == 0.0);
    CHECK(b.back() == l5.diameter());
    CHECK(l5.positive_breakpoints() == std::vector<double>{0.25, 0.5, 0.75, 1.0});
}

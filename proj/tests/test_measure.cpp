#include <doctest.h>

#include <cmath>
#include <memory>

#include "chainbound/measure.hpp"

using namespace chainbound;

namespace {

std::shared_ptr<const MetricSpace> line5() {
    return std::make_shared<MetricSpace>(
        MetricSpace::point_cloud({{0.0}, {0.25}, {0.5}, {0.75}, {1.0}}));
}

std::shared_ptr<const MetricSpace> cycle6() {
    return std::make_shared<MetricSpace>(MetricSpace::cycle(6));
}

}  // namespace

TEST_CASE("measure validation") {
    auto s = line5();
    CHECK_THROWS_AS(DiscreteMeasure(s, {0.5, 0.5, 0.5, 0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(DiscreteMeasure(s, {1.5, -0.5, 0.0, 0.0, 0.0}), ValidationError);
    const auto u = DiscreteMeasure::uniform(s);
    CHECK(u.weight(0) == doctest::Approx(0.2));
    CHECK(u.full_support());
    CHECK_FALSE(DiscreteMeasure::point_mass(s, 2).full_support());
}

TEST_CASE("ball masses") {
    const auto u = DiscreteMeasure::uniform(line5());
    CHECK(u.ball_mass_at(0, 0.0) == doctest::Approx(0.2));
    CHECK(u.ball_mass_at(0, 0.25) == doctest::Approx(0.4));
    CHECK(u.ball_mass_at(2, 0.5) == doctest::Approx(1.0));
    const auto [lo, hi] = u.ball_mass(0.25);
    CHECK(lo == doctest::Approx(0.4));  // endpoints see 2 points
    CHECK(hi == doctest::Approx(0.6));  // interior points see 3
}

TEST_CASE("net measure on the 6-cycle") {
    const auto nu = nu_eps(cycle6(), 1.0, SolveMode::Exact);
    CHECK(nu.weight(0) == doctest::Approx(0.5));
    CHECK(nu.weight(3) == doctest::Approx(0.5));
    CHECK(nu.weight(1) == doctest::Approx(0.0));
}

TEST_CASE("wasserstein distance") {
    auto s = line5();
    const auto a = DiscreteMeasure::point_mass(s, 0);
    const auto b = DiscreteMeasure::point_mass(s, 4);
    CHECK(wasserstein1(a, b) == doctest::Approx(1.0));
    CHECK(wasserstein1(a, a) == doctest::Approx(0.0));

    // split mass: half moves 0.25, half moves 0.5
    const auto c = DiscreteMeasure(s, {0.0, 0.5, 0.0, 0.5, 0.0});
    const auto d = DiscreteMeasure(s, {0.0, 0.0, 1.0, 0.0, 0.0});
    CHECK(wasserstein1(c, d) == doctest::Approx(0.25));

    const auto u = DiscreteMeasure::uniform(s);
    CHECK(wasserstein1(u, a) == doctest::Approx((0.25 + 0.5 + 0.75 + 1.0) / 5.0));
    // symmetry and triangle inequality
    CHECK(wasserstein1(u, a) == doctest::Approx(wasserstein1(a, u)));
    CHECK(wasserstein1(a, b) <= wasserstein1(a, u) + wasserstein1(u, b) + 1e-12);
}

TEST_CASE("uniform measure stabilizes to counting measure") {
    auto s = cycle6();
    const auto res = uniform_measure(s, {3.0, 2.0, 1.0, 0.5}, SolveMode::Exact);
    CHECK(res.stabilized);
    for (int i = 0; i < 6; ++i)
        CHECK(res.measure.weight(i) == doctest::Approx(1.0 / 6));
    CHECK(res.wasserstein_gaps.size() == 3);
    CHECK_THROWS_AS(uniform_measure(s, {1.0, 2.0}, SolveMode::Exact), ParameterError);
}

TEST_CASE("weak homogeneity of the 6-cycle is 1") {
    const auto rep = weak_homogeneity(cycle6(), SolveMode::Exact);
    CHECK(rep.c_minus == doctest::Approx(1.0));
    CHECK_FALSE(rep.witnesses.empty());
}

TEST_CASE("weak homogeneity matches a brute-force oracle on the line") {
    auto s = line5();
    const auto rep = weak_homogeneity(s, SolveMode::Exact);
    // independent oracle: minimum over breakpoint pairs of N_-(r,eps) N(r) / N(eps)
    double oracle = 1.0;
    for (double r : s->positive_breakpoints())
        for (double eps : s->positive_breakpoints()) {
            if (eps > r) continue;
            int n_minus = s->size() + 1;
            for (int x = 0; x < s->size(); ++x)
                n_minus = std::min(n_minus,
                                   local_cover_number(*s, x, r, eps, SolveMode::Exact));
            const double v = static_cast<double>(n_minus) *
                             cover_number(*s, r, SolveMode::Exact) /
                             cover_number(*s, eps, SolveMode::Exact);
            oracle = std::min(oracle, v);
        }
    CHECK(rep.c_minus == doctest::Approx(oracle));
    CHECK(rep.c_minus > 0.0);
    CHECK(rep.c_minus <= 1.0);
}

TEST_CASE("ball-mass lower bound from the homogeneity constant") {
    for (auto s : {cycle6(), line5()}) {
        const auto rep = weak_homogeneity(s, SolveMode::Exact);
        const auto mu = DiscreteMeasure::uniform(s);
        const auto rows = check_thm21(mu, rep.c_minus, SolveMode::Exact);
        CHECK_FALSE(rows.empty());
        for (const auto& row : rows) {
            CHECK(row.pass);
            CHECK(row.h_minus >= row.lower * (1.0 - 1e-12) - 1e-15);
        }
    }
}

TEST_CASE("packing sandwich through ball masses") {
    for (auto s : {cycle6(), line5()}) {
        const auto mu = DiscreteMeasure::uniform(s);
        for (double eps : s->positive_breakpoints()) {
            const auto sw = packing_sandwich(mu, eps, SolveMode::Exact);
            CHECK(sw.pass);
            CHECK(sw.lower <= sw.capacity * (1.0 + 1e-12));
            CHECK(sw.capacity <= sw.upper * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("net measure ball masses on symmetric spaces") {
    // h_-(nu_eps, r) = N_-(r, eps) / N(eps) on the 6-cycle
    auto s = cycle6();
    const double eps = 1.0;
    const auto nu = nu_eps(s, eps, SolveMode::Exact);
    const int Neps = cover_number(*s, eps, SolveMode::Exact);
    for (double r : s->positive_breakpoints()) {
        int n_minus = s->size() + 1;
        for (int x = 0; x < s->size(); ++x)
            n_minus = std::min(n_minus, local_cover_number(*s, x, r, eps, SolveMode::Exact));
        const double h = nu.ball_mass(r).first;
        CHECK(h >= static_cast<double>(n_minus) / Neps / 2.0 - 1e-12);
    }
}

#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "chainbound/measure.hpp"
#include "chainbound/orlicz.hpp"

using namespace chainbound;

namespace {

std::vector<double> standard_normals(std::uint64_t seed, int count) {
    std::mt19937_64 eng(seed);
    std::vector<double> out;
    out.reserve(count);
    while (static_cast<int>(out.size()) < count) {
        const double u1 = (static_cast<double>(eng() >> 11) + 1.0) * 0x1p-53;
        const double u2 = static_cast<double>(eng() >> 11) * 0x1p-53;
        const double mag = std::sqrt(-2.0 * std::log(u1));
        constexpr double two_pi = 6.283185307179586;
        out.push_back(mag * std::cos(two_pi * u2));
        if (static_cast<int>(out.size()) < count)
            out.push_back(mag * std::sin(two_pi * u2));
    }
    return out;
}

}  // namespace

TEST_CASE("exponential-quadratic inverse, analytic vs generic bisection") {
    const auto analytic = YoungFunction::exp_quadratic();
    // same function through the conjugate route, which uses the generic inverse
    const auto generic = YoungFunction::exp_conjugate(MGFunction::quadratic(1.0));
    for (int k = 0; k < 1000; ++k) {
        const double w = 1e-3 + k * 0.05;
        const double za = std::sqrt(2.0 * std::log1p(w));
        CHECK(analytic.inverse(w) == doctest::Approx(za).epsilon(1e-12));
        CHECK(generic.inverse(w) == doctest::Approx(za).epsilon(1e-10));
        CHECK(generic.value(za) == doctest::Approx(w).epsilon(1e-10));
    }
}

TEST_CASE("young-fenchel conjugate of the quadratic") {
    const auto phi = MGFunction::quadratic(1.0);
    for (double u : {0.1, 0.5, 1.0, 2.0, 5.0})
        CHECK(phi.conjugate(u) == doctest::Approx(u * u / 2.0).epsilon(1e-8));
    const auto pair = young_fenchel(phi, {1.0, 2.0, 3.0});
    CHECK(pair.star_values[2] == doctest::Approx(4.5));
    // power conjugate: Hoelder-dual exponents
    const auto p3 = MGFunction::power(3.0, 1.0);
    for (double u : {0.5, 1.0, 4.0}) {
        const double lstar = std::sqrt(u / 3.0);
        CHECK(p3.conjugate(u) == doctest::Approx(lstar * u - std::pow(lstar, 3.0)));
    }
}

TEST_CASE("biconjugation round trip") {
    const auto phi = MGFunction::quadratic(1.0);
    // tabulate phi* and conjugate again: should recover phi
    std::vector<double> us, vals;
    for (int k = 0; k <= 400; ++k) {
        const double u = 1e-3 * std::pow(1e7, k / 400.0);
        us.push_back(u);
        vals.push_back(phi.conjugate(u));
    }
    const auto star = MGFunction::tabulated(us, vals);
    for (double lam : {0.05, 0.3, 1.0, 3.0, 20.0})
        CHECK(star.conjugate(lam) ==
              doctest::Approx(phi.value(lam)).epsilon(1e-6));
}

TEST_CASE("luxemburg norm closed forms and homogeneity") {
    const auto p2 = YoungFunction::power(2.0);
    std::vector<double> s{1.0, 2.0, 3.0, 4.0};
    double rms = 0.0;
    for (double v : s) rms += v * v;
    rms = std::sqrt(rms / s.size());
    CHECK(luxemburg_norm(s, p2) == doctest::Approx(rms).epsilon(1e-14));

    // homogeneity ||c s|| = c ||s|| across all evaluation paths
    for (const auto& Phi :
         {p2, YoungFunction::exp_quadratic(),
          YoungFunction::exp_conjugate(MGFunction::power(3.0, 0.7))}) {
        const double base = luxemburg_norm(s, Phi);
        std::vector<double> scaled;
        for (double v : s) scaled.push_back(2.5 * v);
        CHECK(luxemburg_norm(scaled, Phi) == doctest::Approx(2.5 * base).epsilon(1e-9));
    }

    std::vector<double> zeros{0.0, 0.0};
    CHECK(luxemburg_norm(zeros, p2) == 0.0);
}

TEST_CASE("gaussian exponential-quadratic norm") {
    // E exp(Delta^2/(2 tau^2)) = 2 for Delta ~ N(0, sigma^2) gives
    // tau = sigma sqrt(4/3)
    const auto samples = standard_normals(42, 100000);
    const double tau = luxemburg_norm(samples, YoungFunction::exp_quadratic());
    CHECK(tau == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(0.02));
}

TEST_CASE("moment gauge and its functional inverse") {
    // rho = |x - y| on two points at distance 1, uniform measure:
    // psi(p) = (1/2)^{1/p}
    auto s = std::make_shared<MetricSpace>(MetricSpace::point_cloud({{0.0}, {1.0}}));
    const auto m = DiscreteMeasure::uniform(s);
    const auto psi = psi_from_moments(s->flat(), m, {1.0, 2.0, 4.0});
    CHECK(psi.values[0] == doctest::Approx(0.5));
    CHECK(psi.values[1] == doctest::Approx(std::sqrt(0.5)));

    // psi(p) = sqrt(p/2) corresponds to phi(lambda) = lambda^2/2;
    // log-log interpolation is exact on power laws
    SampledFunction gauge;
    for (int k = 0; k <= 40; ++k) {
        const double p = 1.0 + k * 0.5;
        gauge.grid.push_back(p);
        gauge.values.push_back(std::sqrt(p / 2.0));
    }
    const auto phi = phi_from_psi(gauge);
    for (double lam : {1.5, 2.0, 4.0, 6.0})
        CHECK(phi.value(lam) == doctest::Approx(lam * lam / 2.0).epsilon(1e-10));
    CHECK(phi.psi(4.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));

    // non-monotone p/psi(p) must be rejected with the offending pair named
    SampledFunction bad;
    bad.grid = {1.0, 2.0, 3.0};
    bad.values = {1.0, 4.0, 9.0};  // p/psi = 1, 0.5, 1/3 decreasing
    CHECK_THROWS_WITH_AS(phi_from_psi(bad),
                         doctest::Contains("not strictly increasing"), ValidationError);
}

TEST_CASE("exponential moment norm estimate") {
    const auto phi = MGFunction::quadratic(1.0);
    std::vector<double> constant(500, 3.0);
    CHECK(bphi_norm_estimate(constant, phi, default_p_grid()) == doctest::Approx(3.0));

    const auto samples = standard_normals(7, 100000);
    const double k = bphi_norm_estimate(samples, phi, default_p_grid());
    CHECK(k >= 0.9);
    CHECK(k <= 1.2);
}

TEST_CASE("structural condition scans") {
    const auto rep2 = check_conditions(YoungFunction::exp_quadratic());
    CHECK(rep2.delta2_finite);
    CHECK(rep2.integral_finite);
    CHECK(rep2.integral_50 > 0.0);

    // power(1): the inverse of 1/x integrates to infinity
    const auto rep1 = check_conditions(YoungFunction::power(1.0));
    CHECK_FALSE(rep1.integral_finite);
    CHECK_FALSE(rep1.delta2_finite);
}

TEST_CASE("tabulated young function interpolation is monotone") {
    std::vector<double> z, w;
    for (int k = 0; k <= 16; ++k) {
        z.push_back(k * 0.5);
        w.push_back(std::expm1(0.5 * (k * 0.5) * (k * 0.5)));
    }
    const auto tab = YoungFunction::tabulated(z, w);
    double prev = -1.0;
    for (double x = 0.0; x <= 9.0; x += 0.01) {
        const double v = tab.value(x);
        CHECK(v >= prev);
        prev = v;
    }
    // close to the generating function between nodes
    CHECK(tab.value(1.25) ==
          doctest::Approx(std::expm1(0.5 * 1.25 * 1.25)).epsilon(0.05));
    CHECK(tab.inverse(tab.value(2.3)) == doctest::Approx(2.3).epsilon(1e-9));
}

TEST_CASE("moment generating descriptors") {
    const auto q = MGFunction::quadratic(2.0);
    CHECK(q.value(3.0) == doctest::Approx(9.0));
    CHECK(q.inverse(q.value(1.7)) == doctest::Approx(1.7));
    CHECK(q.psi(2.0) == doctest::Approx(2.0 / q.inverse(2.0)));
    CHECK_THROWS_AS(MGFunction::quadratic(0.0), ParameterError);
    CHECK_THROWS_AS(MGFunction::power(1.0), ParameterError);
    CHECK_THROWS_AS(MGFunction::tabulated({1.0, 2.0}, {4.0, 1.0}), ValidationError);
}

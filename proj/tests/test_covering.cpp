#include <doctest.h>

#include <cstdint>
#include <random>
#include <vector>

#include "chainbound/covering.hpp"

using namespace chainbound;

namespace {

// brute-force covering number by subset enumeration, independent of the solver
int brute_cover(const MetricSpace& s, double eps) {
    const int n = s.size();
    const std::uint32_t all = (n >= 32) ? ~0u : ((1u << n) - 1);
    for (int k = 1; k <= n; ++k) {
        for (std::uint32_t centers = 0; centers <= all; ++centers) {
            if (__builtin_popcount(centers) != k) continue;
            std::uint32_t covered = 0;
            for (int c = 0; c < n; ++c)
                if (centers & (1u << c))
                    for (int p = 0; p < n; ++p)
                        if (s.dist(c, p) <= eps) covered |= 1u << p;
            if (covered == all) return k;
        }
    }
    return n;
}

int brute_pack(const MetricSpace& s, double eps) {
    const int n = s.size();
    const std::uint32_t all = (n >= 32) ? ~0u : ((1u << n) - 1);
    int best = 0;
    for (std::uint32_t centers = 1; centers <= all; ++centers) {
        bool ok = true;
        for (int a = 0; a < n && ok; ++a)
            for (int b = a + 1; b < n && ok; ++b)
                if ((centers & (1u << a)) && (centers & (1u << b)))
                    for (int p = 0; p < n; ++p)
                        if (s.dist(a, p) <= eps && s.dist(b, p) <= eps) {
                            ok = false;
                            break;
                        }
        if (ok) best = std::max(best, __builtin_popcount(centers));
    }
    return best;
}

MetricSpace random_cloud(std::uint64_t seed, int n, int dims) {
    std::mt19937_64 eng(seed);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < n; ++i) {
        std::vector<double> p(dims);
        for (double& c : p) c = (eng() >> 11) * 0x1p-53;
        pts.push_back(std::move(p));
    }
    return MetricSpace::point_cloud(pts);
}

}  // namespace

TEST_CASE("6-cycle covering and packing profile") {
    const auto c6 = MetricSpace::cycle(6);
    const auto prof = cover_profile(c6, SolveMode::Exact);
    REQUIRE(prof.entries.size() == 3);
    CHECK(prof.entries[0].r == 1.0);
    CHECK(prof.entries[0].N == 2);
    CHECK(prof.entries[0].M == 2);
    // a radius-2 ball holds 5 of 6 vertices, so two are needed
    CHECK(prof.entries[1].N == 2);
    CHECK(prof.entries[1].M == 1);
    CHECK(prof.entries[2].N == 1);
    CHECK(prof.entries[2].M == 1);
}

TEST_CASE("exact solvers match brute force on random clouds") {
    for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u}) {
        const auto s = random_cloud(seed, 7, 2);
        for (double eps : s.positive_breakpoints()) {
            CHECK(cover_number(s, eps, SolveMode::Exact) == brute_cover(s, eps));
            CHECK(pack_number(s, eps, SolveMode::Exact) == brute_pack(s, eps));
        }
    }
}

TEST_CASE("greedy cover upper-bounds the exact one") {
    for (std::uint64_t seed : {3u, 4u, 5u}) {
        const auto s = random_cloud(seed, 10, 2);
        for (double eps : s.positive_breakpoints()) {
            const int exact = cover_number(s, eps, SolveMode::Exact);
            const int greedy = cover_number(s, eps, SolveMode::Greedy);
            CHECK(greedy >= exact);
            const auto net = greedy_net(s, eps);
            CHECK(static_cast<int>(net.centers.size()) == greedy);
            for (size_t p = 0; p < net.assignment.size(); ++p)
                CHECK(s.dist(static_cast<int>(p), net.assignment[p]) <= eps);
        }
    }
}

TEST_CASE("optimal net is lexicographically smallest") {
    const auto c6 = MetricSpace::cycle(6);
    const auto net = optimal_net(c6, 1.0);
    CHECK(net.exact);
    CHECK(net.centers == std::vector<int>{0, 3});
    // deterministic: same call, same result
    CHECK(optimal_net(c6, 1.0).centers == net.centers);
}

TEST_CASE("radius zero groups identical points") {
    const auto s = MetricSpace::from_matrix(
        {{0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}, {1.0, 1.0, 0.0}}, {}, true);
    CHECK(cover_number(s, 0.0, SolveMode::Exact) == 2);
}

TEST_CASE("local covering numbers") {
    const auto c6 = MetricSpace::cycle(6);
    // eps >= delta: the ball covers itself
    CHECK(local_cover_number(c6, 0, 1.0, 1.0, SolveMode::Exact) == 1);
    CHECK(local_cover_number(c6, 0, 1.0, 2.0, SolveMode::Exact) == 1);
    // B(0,2) has 5 consecutive vertices, spread 4; 1-balls of 3 cover it with 2
    CHECK(local_cover_number(c6, 0, 2.0, 1.0, SolveMode::Exact) == 2);
    CHECK(local_cover_number(c6, 0, 3.0, 1.0, SolveMode::Exact) == 2);

    const auto ext = local_extremes(c6, 2.0, 1.0, SolveMode::Exact);
    CHECK(ext.n_minus == 2);
    CHECK(ext.n_plus == 2);
    CHECK(local_pack_number(c6, 0, 2.0, 1.0, SolveMode::Exact) >= 1);
}

TEST_CASE("kolmogorov sandwich on random spaces") {
    for (std::uint64_t seed : {21u, 22u, 23u, 24u}) {
        const auto s = random_cloud(seed, 9, 3);
        for (double eps : s.positive_breakpoints()) {
            const int m = pack_number(s, eps, SolveMode::Exact);
            CHECK(cover_number(s, 2.0 * eps, SolveMode::Exact) <= m);
            CHECK(m <= cover_number(s, eps, SolveMode::Exact));
        }
    }
}

TEST_CASE("exact solver refuses oversized spaces") {
    const auto s = random_cloud(99, 10, 2);
    CoverOptions opts;
    opts.exact_limit = 8;
    CHECK_THROWS_AS(cover_number(s, 0.1, SolveMode::Exact, opts), CapabilityError);
    CHECK_NOTHROW(cover_number(s, 0.1, SolveMode::Greedy, opts));
}

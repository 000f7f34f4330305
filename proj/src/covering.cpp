#include "chainbound/covering.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace chainbound {
namespace {

void require_positive_eps(double epsilon) {
    // radius 0 is legal: balls degenerate to classes of identical points
    if (!(epsilon >= 0.0)) throw ParameterError("epsilon must be nonnegative");
}

uint64_t full_mask(int n) {
    return (n >= 64) ? ~uint64_t{0} : ((uint64_t{1} << n) - 1);
}

std::vector<uint64_t> ball_masks(const MetricSpace& space, double epsilon) {
    std::vector<uint64_t> masks(space.size());
    for (int i = 0; i < space.size(); ++i) masks[i] = space.ball_mask(i, epsilon);
    return masks;
}

// Greedy set cover over the ball columns, lowest index first; used as the
// branch-and-bound incumbent.
int greedy_cover_size(const std::vector<uint64_t>& masks, uint64_t full) {
    uint64_t covered = 0;
    int count = 0;
    while (covered != full) {
        int best = -1, best_gain = -1;
        for (size_t i = 0; i < masks.size(); ++i) {
            const int gain = std::popcount(masks[i] & ~covered);
            if (gain > best_gain) {
                best_gain = gain;
                best = static_cast<int>(i);
            }
        }
        covered |= masks[best];
        ++count;
    }
    return count;
}

struct CoverSolver {
    const std::vector<uint64_t>& masks;
    uint64_t full;
    int best;
    int max_ball;

    CoverSolver(const std::vector<uint64_t>& m, uint64_t f, int incumbent)
        : masks(m), full(f), best(incumbent) {
        max_ball = 1;
        for (uint64_t b : m) max_ball = std::max(max_ball, std::popcount(b));
    }

    void search(uint64_t covered, int chosen) {
        if (covered == full) {
            best = std::min(best, chosen);
            return;
        }
        const int uncovered = std::popcount(full & ~covered);
        if (chosen + (uncovered + max_ball - 1) / max_ball >= best) return;
        // branch on the uncovered point with fewest covering balls
        int pivot = -1, pivot_deg = std::numeric_limits<int>::max();
        uint64_t rest = full & ~covered;
        while (rest) {
            const int p = std::countr_zero(rest);
            rest &= rest - 1;
            int deg = 0;
            for (uint64_t b : masks)
                if (b & (uint64_t{1} << p)) ++deg;
            if (deg < pivot_deg) {
                pivot_deg = deg;
                pivot = p;
            }
        }
        for (size_t i = 0; i < masks.size(); ++i)
            if (masks[i] & (uint64_t{1} << pivot)) search(covered | masks[i], chosen + 1);
    }
};

int exact_cover_size(const std::vector<uint64_t>& masks, uint64_t full) {
    CoverSolver solver(masks, full, greedy_cover_size(masks, full));
    solver.search(0, 0);
    return solver.best;
}

// First complete cover found by include-lowest-index-first DFS with budget k is
// the lexicographically smallest optimal center set.
struct LexCoverSolver {
    const std::vector<uint64_t>& masks;
    const std::vector<uint64_t>& suffix_union;  // union of masks[i..n)
    uint64_t full;
    int budget;
    std::vector<int> chosen;
    std::vector<int> result;

    bool dfs(int idx, uint64_t covered) {
        if (covered == full) {
            result = chosen;
            return true;
        }
        if (static_cast<int>(chosen.size()) == budget) return false;
        if (idx >= static_cast<int>(masks.size())) return false;
        if ((covered | suffix_union[idx]) != full) return false;
        chosen.push_back(idx);
        if (dfs(idx + 1, covered | masks[idx])) return true;
        chosen.pop_back();
        return dfs(idx + 1, covered);
    }
};

std::vector<int> lex_smallest_cover(const std::vector<uint64_t>& masks, uint64_t full,
                                    int opt_size) {
    std::vector<uint64_t> suffix(masks.size() + 1, 0);
    for (int i = static_cast<int>(masks.size()) - 1; i >= 0; --i)
        suffix[i] = suffix[i + 1] | masks[i];
    LexCoverSolver solver{masks, suffix, full, opt_size, {}, {}};
    solver.dfs(0, 0);
    return solver.result;
}

struct PackSolver {
    const std::vector<uint64_t>& masks;
    int best = 0;

    void search(int idx, uint64_t used, int chosen) {
        const int n = static_cast<int>(masks.size());
        if (chosen + (n - idx) <= best) return;
        if (idx == n) {
            best = std::max(best, chosen);
            return;
        }
        if ((masks[idx] & used) == 0) search(idx + 1, used | masks[idx], chosen + 1);
        search(idx + 1, used, chosen);
        best = std::max(best, chosen);
    }
};

void check_exact_capability(const MetricSpace& space, const CoverOptions& opts) {
    if (space.size() > opts.exact_limit || space.size() > 64)
        throw CapabilityError("exact solver limited to n <= " +
                              std::to_string(std::min(opts.exact_limit, 64)) +
                              " points, got " + std::to_string(space.size()));
}

}  // namespace

NetResult greedy_net(const MetricSpace& space, double epsilon) {
    require_positive_eps(epsilon);
    const int n = space.size();
    NetResult out;
    out.epsilon = epsilon;
    std::vector<double> dist_to_centers(n, std::numeric_limits<double>::infinity());
    int next = 0;
    while (true) {
        out.centers.push_back(next);
        for (int j = 0; j < n; ++j)
            dist_to_centers[j] = std::min(dist_to_centers[j], space.dist(next, j));
        int far = -1;
        double far_d = -1.0;
        for (int j = 0; j < n; ++j)
            if (dist_to_centers[j] > far_d) {
                far_d = dist_to_centers[j];
                far = j;
            }
        if (far_d <= epsilon) break;
        next = far;
    }
    out.assignment.assign(n, -1);
    for (int j = 0; j < n; ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (int c : out.centers)
            if (space.dist(c, j) <= epsilon && space.dist(c, j) < best) {
                best = space.dist(c, j);
                out.assignment[j] = c;
            }
    }
    out.exact = (out.centers.size() == 1);
    return out;
}

NetResult optimal_net(const MetricSpace& space, double epsilon, const CoverOptions& opts) {
    require_positive_eps(epsilon);
    check_exact_capability(space, opts);
    const auto masks = ball_masks(space, epsilon);
    const uint64_t full = full_mask(space.size());
    const int opt = exact_cover_size(masks, full);
    NetResult out;
    out.epsilon = epsilon;
    out.centers = lex_smallest_cover(masks, full, opt);
    out.exact = true;
    out.assignment.assign(space.size(), -1);
    for (int j = 0; j < space.size(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (int c : out.centers)
            if (space.dist(c, j) <= epsilon && space.dist(c, j) < best) {
                best = space.dist(c, j);
                out.assignment[j] = c;
            }
    }
    return out;
}

int cover_number(const MetricSpace& space, double epsilon, SolveMode mode,
                 const CoverOptions& opts) {
    require_positive_eps(epsilon);
    if (mode == SolveMode::Greedy)
        return static_cast<int>(greedy_net(space, epsilon).centers.size());
    check_exact_capability(space, opts);
    return exact_cover_size(ball_masks(space, epsilon), full_mask(space.size()));
}

int pack_number(const MetricSpace& space, double epsilon, SolveMode mode,
                const CoverOptions& opts) {
    require_positive_eps(epsilon);
    if (mode == SolveMode::Greedy) {
        // greedy disjoint selection by lowest index
        const int n = space.size();
        std::vector<uint64_t> chosen;
        int count = 0;
        if (n <= 64) {
            uint64_t used = 0;
            for (int i = 0; i < n; ++i) {
                const uint64_t b = space.ball_mask(i, epsilon);
                if ((b & used) == 0) {
                    used |= b;
                    ++count;
                }
            }
        } else {
            std::vector<char> used(n, 0);
            for (int i = 0; i < n; ++i) {
                const auto b = space.ball(i, epsilon);
                bool free = true;
                for (int p : b)
                    if (used[p]) {
                        free = false;
                        break;
                    }
                if (free) {
                    for (int p : b) used[p] = 1;
                    ++count;
                }
            }
        }
        return count;
    }
    check_exact_capability(space, opts);
    const auto masks = ball_masks(space, epsilon);
    PackSolver solver{masks};
    solver.search(0, 0, 0);
    return solver.best;
}

int local_cover_number(const MetricSpace& space, int x, double delta, double epsilon,
                       SolveMode mode, const CoverOptions& opts) {
    if (x < 0 || x >= space.size()) throw ParameterError("center index out of range");
    if (!(delta > 0.0)) throw ParameterError("delta must be positive");
    require_positive_eps(epsilon);
    if (epsilon >= delta) return 1;
    return cover_number(space.subspace(space.ball(x, delta)), epsilon, mode, opts);
}

int local_pack_number(const MetricSpace& space, int x, double delta, double epsilon,
                      SolveMode mode, const CoverOptions& opts) {
    if (x < 0 || x >= space.size()) throw ParameterError("center index out of range");
    if (!(delta > 0.0)) throw ParameterError("delta must be positive");
    require_positive_eps(epsilon);
    return pack_number(space.subspace(space.ball(x, delta)), epsilon, mode, opts);
}

LocalExtremes local_extremes(const MetricSpace& space, double delta, double epsilon,
                             SolveMode mode, const CoverOptions& opts) {
    LocalExtremes out;
    out.n_minus = out.m_minus = std::numeric_limits<int>::max();
    for (int x = 0; x < space.size(); ++x) {
        const int ncov = local_cover_number(space, x, delta, epsilon, mode, opts);
        const int npack = local_pack_number(space, x, delta, epsilon, mode, opts);
        out.n_minus = std::min(out.n_minus, ncov);
        out.n_plus = std::max(out.n_plus, ncov);
        out.m_minus = std::min(out.m_minus, npack);
        out.m_plus = std::max(out.m_plus, npack);
    }
    return out;
}

CoverProfile cover_profile(const MetricSpace& space, SolveMode mode,
                           const CoverOptions& opts) {
    CoverProfile prof;
    for (double r : space.positive_breakpoints()) {
        CoverProfileEntry e;
        e.r = r;
        e.N = cover_number(space, r, mode, opts);
        e.M = pack_number(space, r, mode, opts);
        e.exact = (mode == SolveMode::Exact);
        prof.entries.push_back(e);
    }
    return prof;
}

}  // namespace chainbound

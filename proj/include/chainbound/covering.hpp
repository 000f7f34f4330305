#pragma once

#include <vector>

#include "chainbound/metric_space.hpp"

namespace chainbound {

enum class SolveMode { Exact, Greedy };

struct CoverOptions {
    int exact_limit = 24;  // exact solvers refuse spaces larger than this
};

struct NetResult {
    double epsilon = 0.0;
    std::vector<int> centers;
    std::vector<int> assignment;  // point -> covering center index
    bool exact = false;           // true iff cardinality is provably minimal
};

struct CoverProfileEntry {
    double r = 0.0;
    int N = 0;
    int M = 0;
    bool exact = false;
};

struct CoverProfile {
    std::vector<CoverProfileEntry> entries;  // one per positive breakpoint
};

struct LocalExtremes {
    int n_minus = 0, n_plus = 0;
    int m_minus = 0, m_plus = 0;
};

// Farthest-point traversal seeded at index 0; valid cover, cardinality upper-bounds N(eps).
NetResult greedy_net(const MetricSpace& space, double epsilon);

// Lexicographically smallest optimal eps-net (exact set cover by branch and bound).
NetResult optimal_net(const MetricSpace& space, double epsilon,
                      const CoverOptions& opts = {});

int cover_number(const MetricSpace& space, double epsilon, SolveMode mode,
                 const CoverOptions& opts = {});
int pack_number(const MetricSpace& space, double epsilon, SolveMode mode,
                const CoverOptions& opts = {});

// N(x; delta, eps): covering number of the induced subspace B(x, delta).
int local_cover_number(const MetricSpace& space, int x, double delta, double epsilon,
                       SolveMode mode, const CoverOptions& opts = {});
int local_pack_number(const MetricSpace& space, int x, double delta, double epsilon,
                      SolveMode mode, const CoverOptions& opts = {});

// (N_-, N_+, M_-, M_+) over all centers x.
LocalExtremes local_extremes(const MetricSpace& space, double delta, double epsilon,
                             SolveMode mode, const CoverOptions& opts = {});

CoverProfile cover_profile(const MetricSpace& space, SolveMode mode,
                           const CoverOptions& opts = {});

}  // namespace chainbound

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "chainbound/errors.hpp"

namespace chainbound {

struct AxiomViolation {
    std::string axiom;  // "nonnegative" | "zero_diagonal" | "symmetry" | "triangle" | "finite"
    int i = -1, j = -1, k = -1;
    double value = 0.0;
};

struct ValidationReport {
    std::vector<AxiomViolation> violations;
    bool ok() const { return violations.empty(); }
};

// Finite (semi-)metric space stored as a dense symmetric distance matrix.
// Immutable after construction; diameter and breakpoints are precomputed.
class MetricSpace {
public:
    static MetricSpace from_matrix(std::vector<std::vector<double>> dist,
                                   std::vector<std::string> labels = {},
                                   bool semimetric = false);
    static MetricSpace from_flat(int n, std::vector<double> dist,
                                 std::vector<std::string> labels = {},
                                 bool semimetric = false);
    // Uniform grid on [0,1]^dims, points_per_axis per axis, metric scale*|x-y|^alpha,
    // row-major point ordering.
    static MetricSpace grid(int dims, int points_per_axis, double alpha = 1.0,
                            double scale = 1.0);
    // Cycle graph Z_n with graph distance.
    static MetricSpace cycle(int n);
    // Point cloud in R^l with Euclidean distance.
    static MetricSpace point_cloud(const std::vector<std::vector<double>>& pts,
                                   std::vector<std::string> labels = {});

    int size() const { return n_; }
    double dist(int i, int j) const { return d_[static_cast<size_t>(i) * n_ + j]; }
    const std::vector<double>& flat() const { return d_; }
    const std::vector<std::string>& labels() const { return labels_; }
    bool semimetric() const { return semimetric_; }

    ValidationReport validate(double tol = 1e-9, bool check_triangle = true) const;

    double diameter() const;
    // Point minimizing max distance to the space, ties by lowest index; returns
    // (index, radius). The radius is not asserted to be <= D/2.
    std::pair<int, double> chebyshev_center() const;
    double min_positive_distance() const;  // +inf if none

    // Sorted distinct off-diagonal distances, bracketed by 0 and the diameter.
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    std::vector<double> positive_breakpoints() const;

    // Closed ball membership uses <= with no tolerance.
    std::vector<int> ball(int x, double r) const;
    int ball_size(int x, double r) const;
    uint64_t ball_mask(int x, double r) const;  // requires n <= 64

    MetricSpace subspace(const std::vector<int>& indices) const;

private:
    MetricSpace(int n, std::vector<double> d, std::vector<std::string> labels,
                bool semimetric);
    int n_ = 0;
    std::vector<double> d_;  // row-major n*n
    std::vector<std::string> labels_;
    bool semimetric_ = false;
    double diameter_ = 0.0;
    std::vector<double> breakpoints_;
};

}  // namespace chainbound

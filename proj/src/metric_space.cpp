#include "chainbound/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chainbound {

MetricSpace::MetricSpace(int n, std::vector<double> d, std::vector<std::string> labels,
                         bool semimetric)
    : n_(n), d_(std::move(d)), labels_(std::move(labels)), semimetric_(semimetric) {
    if (n_ < 1) throw ParameterError("metric space must have at least one point");
    if (labels_.empty()) {
        labels_.reserve(n_);
        for (int i = 0; i < n_; ++i) labels_.push_back("p" + std::to_string(i));
    }
    if (static_cast<int>(labels_.size()) != n_)
        throw ValidationError("label count does not match point count");

    diameter_ = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            diameter_ = std::max(diameter_, dist(i, j));

    std::vector<double> vals;
    vals.reserve(static_cast<size_t>(n_) * (n_ - 1) / 2);
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) vals.push_back(dist(i, j));
    vals.push_back(0.0);
    vals.push_back(diameter_);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    breakpoints_ = std::move(vals);
}

MetricSpace MetricSpace::from_matrix(std::vector<std::vector<double>> dist,
                                     std::vector<std::string> labels, bool semimetric) {
    const int n = static_cast<int>(dist.size());
    if (n == 0) throw ValidationError("empty distance matrix");
    std::vector<double> flat;
    flat.reserve(static_cast<size_t>(n) * n);
    for (const auto& row : dist) {
        if (static_cast<int>(row.size()) != n)
            throw ValidationError("distance matrix is not square");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return MetricSpace(n, std::move(flat), std::move(labels), semimetric);
}

MetricSpace MetricSpace::from_flat(int n, std::vector<double> dist,
                                   std::vector<std::string> labels, bool semimetric) {
    if (static_cast<size_t>(n) * n != dist.size())
        throw ValidationError("distance matrix is not square");
    return MetricSpace(n, std::move(dist), std::move(labels), semimetric);
}

MetricSpace MetricSpace::grid(int dims, int points_per_axis, double alpha, double scale) {
    if (dims < 1) throw ParameterError("grid dims must be >= 1");
    if (points_per_axis < 1) throw ParameterError("grid needs at least one point per axis");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in (0,1]");
    if (!(scale > 0.0)) throw ParameterError("metric scale must be positive");

    std::vector<std::vector<double>> pts;
    const int k = points_per_axis;
    long long n = 1;
    for (int d = 0; d < dims; ++d) n *= k;
    if (n > 100000) throw ParameterError("grid generator limited to 1e5 points");
    pts.reserve(static_cast<size_t>(n));
    for (long long idx = 0; idx < n; ++idx) {
        std::vector<double> p(dims);
        long long rem = idx;
        for (int d = dims - 1; d >= 0; --d) {
            const long long c = rem % k;
            rem /= k;
            p[d] = (k == 1) ? 0.0 : static_cast<double>(c) / (k - 1);
        }
        pts.push_back(std::move(p));
    }
    const int np = static_cast<int>(n);
    std::vector<double> flat(static_cast<size_t>(np) * np, 0.0);
    for (int i = 0; i < np; ++i)
        for (int j = i + 1; j < np; ++j) {
            double s2 = 0.0;
            for (int d = 0; d < dims; ++d) {
                const double diff = pts[i][d] - pts[j][d];
                s2 += diff * diff;
            }
            const double v = scale * std::pow(std::sqrt(s2), alpha);
            flat[static_cast<size_t>(i) * np + j] = v;
            flat[static_cast<size_t>(j) * np + i] = v;
        }
    return MetricSpace(np, std::move(flat), {}, false);
}

MetricSpace MetricSpace::cycle(int n) {
    if (n < 1) throw ParameterError("cycle needs n >= 1");
    std::vector<double> flat(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int diff = std::abs(i - j);
            flat[static_cast<size_t>(i) * n + j] = std::min(diff, n - diff);
        }
    return MetricSpace(n, std::move(flat), {}, false);
}

MetricSpace MetricSpace::point_cloud(const std::vector<std::vector<double>>& pts,
                                     std::vector<std::string> labels) {
    const int n = static_cast<int>(pts.size());
    if (n == 0) throw ValidationError("empty point cloud");
    const size_t dims = pts.front().size();
    std::vector<double> flat(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (pts[i].size() != dims) throw ValidationError("ragged point cloud");
        for (int j = i + 1; j < n; ++j) {
            double s2 = 0.0;
            for (size_t d = 0; d < dims; ++d) {
                const double diff = pts[i][d] - pts[j][d];
                s2 += diff * diff;
            }
            const double v = std::sqrt(s2);
            flat[static_cast<size_t>(i) * n + j] = v;
            flat[static_cast<size_t>(j) * n + i] = v;
        }
    }
    return MetricSpace(n, std::move(flat), std::move(labels), false);
}

ValidationReport MetricSpace::validate(double tol, bool check_triangle) const {
    if (tol < 0.0) throw ParameterError("validation tolerance must be nonnegative");
    ValidationReport rep;
    for (int i = 0; i < n_; ++i) {
        if (dist(i, i) != 0.0)
            rep.violations.push_back({"zero_diagonal", i, i, -1, dist(i, i)});
        for (int j = 0; j < n_; ++j) {
            const double v = dist(i, j);
            if (std::isnan(v) || std::isinf(v)) {
                rep.violations.push_back({"finite", i, j, -1, v});
                continue;
            }
            if (v < 0.0) rep.violations.push_back({"nonnegative", i, j, -1, v});
            if (j > i && v != dist(j, i))
                rep.violations.push_back({"symmetry", i, j, -1, v - dist(j, i)});
        }
    }
    if (check_triangle && rep.ok()) {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                for (int k = 0; k < n_; ++k)
                    if (dist(i, k) > dist(i, j) + dist(j, k) + tol) {
                        rep.violations.push_back(
                            {"triangle", i, j, k, dist(i, k) - dist(i, j) - dist(j, k)});
                    }
    }
    return rep;
}

double MetricSpace::diameter() const { return diameter_; }

std::pair<int, double> MetricSpace::chebyshev_center() const {
    int best = 0;
    double best_r = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; ++i) {
        double ecc = 0.0;
        for (int j = 0; j < n_; ++j) ecc = std::max(ecc, dist(i, j));
        if (ecc < best_r) {
            best_r = ecc;
            best = i;
        }
    }
    return {best, best_r};
}

double MetricSpace::min_positive_distance() const {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            if (dist(i, j) > 0.0) m = std::min(m, dist(i, j));
    return m;
}

std::vector<double> MetricSpace::positive_breakpoints() const {
    std::vector<double> out;
    for (double b : breakpoints_)
        if (b > 0.0) out.push_back(b);
    return out;
}

std::vector<int> MetricSpace::ball(int x, double r) const {
    std::vector<int> out;
    for (int j = 0; j < n_; ++j)
        if (dist(x, j) <= r) out.push_back(j);
    return out;
}

int MetricSpace::ball_size(int x, double r) const {
    int c = 0;
    for (int j = 0; j < n_; ++j)
        if (dist(x, j) <= r) ++c;
    return c;
}

uint64_t MetricSpace::ball_mask(int x, double r) const {
    if (n_ > 64) throw CapabilityError("ball_mask requires n <= 64");
    uint64_t m = 0;
    for (int j = 0; j < n_; ++j)
        if (dist(x, j) <= r) m |= (uint64_t{1} << j);
    return m;
}

MetricSpace MetricSpace::subspace(const std::vector<int>& indices) const {
    const int k = static_cast<int>(indices.size());
    if (k == 0) throw ParameterError("empty subspace");
    std::vector<double> flat(static_cast<size_t>(k) * k, 0.0);
    std::vector<std::string> labs(k);
    for (int a = 0; a < k; ++a) {
        labs[a] = labels_[indices[a]];
        for (int b = 0; b < k; ++b)
            flat[static_cast<size_t>(a) * k + b] = dist(indices[a], indices[b]);
    }
    return MetricSpace(k, std::move(flat), std::move(labs), semimetric_);
}

}  // namespace chainbound

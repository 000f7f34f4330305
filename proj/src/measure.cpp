#include "chainbound/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chainbound {
namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

DiscreteMeasure::DiscreteMeasure(std::shared_ptr<const MetricSpace> space,
                                 std::vector<double> weights)
    : space_(std::move(space)), w_(std::move(weights)) {
    if (!space_) throw ParameterError("measure needs a space");
    if (static_cast<int>(w_.size()) != space_->size())
        throw ValidationError("weight count does not match space size");
    double total = 0.0;
    for (double w : w_) {
        if (w < 0.0 || std::isnan(w)) throw ValidationError("negative or NaN weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ValidationError("weights must sum to 1 within 1e-12");
}

DiscreteMeasure DiscreteMeasure::uniform(std::shared_ptr<const MetricSpace> space) {
    const int n = space->size();
    return DiscreteMeasure(std::move(space), std::vector<double>(n, 1.0 / n));
}

DiscreteMeasure DiscreteMeasure::point_mass(std::shared_ptr<const MetricSpace> space, int at) {
    std::vector<double> w(space->size(), 0.0);
    if (at < 0 || at >= space->size()) throw ParameterError("point mass index out of range");
    w[at] = 1.0;
    return DiscreteMeasure(std::move(space), std::move(w));
}

bool DiscreteMeasure::full_support() const {
    for (double w : w_)
        if (w <= 0.0) return false;
    return true;
}

double DiscreteMeasure::ball_mass_at(int x, double r) const {
    double s = 0.0;
    for (int j = 0; j < space_->size(); ++j)
        if (space_->dist(x, j) <= r) s += w_[j];
    return s;
}

std::pair<double, double> DiscreteMeasure::ball_mass(double r) const {
    double lo = kInf, hi = -kInf;
    for (int x = 0; x < space_->size(); ++x) {
        const double m = ball_mass_at(x, r);
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    return {lo, hi};
}

DiscreteMeasure nu_eps(std::shared_ptr<const MetricSpace> space, double epsilon,
                       SolveMode mode, const CoverOptions& opts) {
    const NetResult net = (mode == SolveMode::Exact) ? optimal_net(*space, epsilon, opts)
                                                     : greedy_net(*space, epsilon);
    std::vector<double> w(space->size(), 0.0);
    const double share = 1.0 / static_cast<double>(net.centers.size());
    for (int c : net.centers) w[c] = share;
    // renormalize away accumulated rounding when N does not divide 1 exactly
    double total = 0.0;
    for (double v : w) total += v;
    for (double& v : w) v /= total;
    return DiscreteMeasure(std::move(space), std::move(w));
}

// Exact transportation problem on the bipartite support graph, solved by
// successive shortest augmenting paths over the residual network.
double wasserstein1(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    if (a.space().size() != b.space().size())
        throw ParameterError("wasserstein1 requires measures on the same space");
    const MetricSpace& X = a.space();
    std::vector<int> src, dst;
    std::vector<double> supply, demand;
    for (int i = 0; i < X.size(); ++i) {
        const double diff = a.weight(i) - b.weight(i);
        if (diff > 0.0) {
            src.push_back(i);
            supply.push_back(diff);
        } else if (diff < 0.0) {
            dst.push_back(i);
            demand.push_back(-diff);
        }
    }
    if (src.empty()) return 0.0;
    const int S = static_cast<int>(src.size()), T = static_cast<int>(dst.size());
    auto edge_cost = [&](int s, int t) { return X.dist(src[s], dst[t]); };
    std::vector<std::vector<double>> flow(S, std::vector<double>(T, 0.0));
    std::vector<double> pot_s(S, 0.0), pot_t(T, 0.0);
    double remaining = 0.0;
    for (double v : supply) remaining += v;

    while (remaining > 1e-15) {
        int s0 = -1;
        for (int s = 0; s < S; ++s)
            if (supply[s] > 1e-15) {
                s0 = s;
                break;
            }
        if (s0 < 0) break;
        // Dijkstra on reduced costs; forward arcs s->t, residual arcs t->s
        // wherever flow is positive.
        std::vector<double> dist_s(S, kInf), dist_t(T, kInf);
        std::vector<int> prev_t(T, -1), prev_s(S, -1);
        std::vector<char> done_s(S, 0), done_t(T, 0);
        dist_s[s0] = 0.0;
        while (true) {
            double best = kInf;
            int bs = -1, bt = -1;
            for (int s = 0; s < S; ++s)
                if (!done_s[s] && dist_s[s] < best) best = dist_s[s], bs = s, bt = -1;
            for (int t = 0; t < T; ++t)
                if (!done_t[t] && dist_t[t] < best) best = dist_t[t], bt = t, bs = -1;
            if (bs < 0 && bt < 0) break;
            if (bs >= 0) {
                done_s[bs] = 1;
                for (int t = 0; t < T; ++t) {
                    const double rc = edge_cost(bs, t) - pot_s[bs] + pot_t[t];
                    if (!done_t[t] && dist_s[bs] + rc < dist_t[t]) {
                        dist_t[t] = dist_s[bs] + rc;
                        prev_t[t] = bs;
                    }
                }
            } else {
                done_t[bt] = 1;
                for (int s = 0; s < S; ++s)
                    if (flow[s][bt] > 1e-18) {
                        const double rc = -(edge_cost(s, bt) - pot_s[s] + pot_t[bt]);
                        if (!done_s[s] && dist_t[bt] + rc < dist_s[s]) {
                            dist_s[s] = dist_t[bt] + rc;
                            prev_s[s] = bt;
                        }
                    }
            }
        }
        int tbest = -1;
        double dbest = kInf;
        for (int t = 0; t < T; ++t)
            if (demand[t] > 1e-15 && dist_t[t] < dbest) {
                dbest = dist_t[t];
                tbest = t;
            }
        if (tbest < 0) break;
        double push = std::min(supply[s0], demand[tbest]);
        for (int t = tbest; t >= 0;) {
            const int s = prev_t[t];
            const int tp = prev_s[s];
            if (tp >= 0) push = std::min(push, flow[s][tp]);
            t = tp;
        }
        for (int t = tbest; t >= 0;) {
            const int s = prev_t[t];
            flow[s][t] += push;
            const int tp = prev_s[s];
            if (tp >= 0) flow[s][tp] -= push;
            t = tp;
        }
        supply[s0] -= push;
        demand[tbest] -= push;
        remaining -= push;
        for (int s = 0; s < S; ++s)
            if (dist_s[s] < kInf) pot_s[s] -= dist_s[s];
        for (int t = 0; t < T; ++t)
            if (dist_t[t] < kInf) pot_t[t] -= dist_t[t];
    }
    double cost = 0.0;
    for (int s = 0; s < S; ++s)
        for (int t = 0; t < T; ++t) cost += flow[s][t] * edge_cost(s, t);
    return cost;
}

UniformMeasureResult uniform_measure(std::shared_ptr<const MetricSpace> space,
                                     const std::vector<double>& eps_schedule,
                                     SolveMode mode, const CoverOptions& opts) {
    if (eps_schedule.empty()) throw ParameterError("epsilon schedule must be nonempty");
    for (size_t i = 1; i < eps_schedule.size(); ++i)
        if (!(eps_schedule[i] < eps_schedule[i - 1]))
            throw ParameterError("epsilon schedule must be strictly decreasing");

    std::vector<DiscreteMeasure> nus;
    for (double eps : eps_schedule) nus.push_back(nu_eps(space, eps, mode, opts));
    std::vector<double> gaps;
    for (size_t i = 1; i < nus.size(); ++i) gaps.push_back(wasserstein1(nus[i - 1], nus[i]));
    const bool stabilized = eps_schedule.back() < space->min_positive_distance();
    return {nus.back(), std::move(gaps), stabilized};
}

HomogeneityReport weak_homogeneity(std::shared_ptr<const MetricSpace> space, SolveMode mode,
                                   const CoverOptions& opts,
                                   const DiscreteMeasure* quasi_measure) {
    HomogeneityReport rep;
    const auto bps = space->positive_breakpoints();
    double inf_val = kInf;
    for (double r : bps) {
        const int nr = cover_number(*space, r, mode, opts);
        for (double eps : bps) {
            if (eps > r) continue;
            const int ne = cover_number(*space, eps, mode, opts);
            int n_minus = std::numeric_limits<int>::max();
            int argmin = -1;
            for (int x = 0; x < space->size(); ++x) {
                const int loc = local_cover_number(*space, x, r, eps, mode, opts);
                if (loc < n_minus) {
                    n_minus = loc;
                    argmin = x;
                }
            }
            const double val =
                static_cast<double>(n_minus) * static_cast<double>(nr) / ne;
            if (val < inf_val - 1e-15) {
                inf_val = val;
                rep.witnesses.clear();
            }
            if (val <= inf_val + 1e-15)
                rep.witnesses.push_back({r, eps, argmin, val});
        }
    }
    rep.c_minus = bps.empty() ? 1.0 : std::min(1.0, inf_val);

    if (quasi_measure) {
        double ratio = 1.0;
        for (double r : space->breakpoints()) {
            const auto [lo, hi] = quasi_measure->ball_mass(r);
            if (lo <= 0.0) {
                ratio = (hi > 0.0) ? kInf : ratio;
            } else {
                ratio = std::max(ratio, hi / lo);
            }
        }
        rep.quasi_ratio = ratio;
    } else {
        const auto uni = DiscreteMeasure::uniform(space);
        double ratio = 1.0;
        for (double r : space->breakpoints()) {
            const auto [lo, hi] = uni.ball_mass(r);
            ratio = std::max(ratio, hi / lo);
        }
        rep.quasi_ratio = ratio;
    }
    return rep;
}

std::vector<Thm21Row> check_thm21(const DiscreteMeasure& mu, double c_minus, SolveMode mode,
                                  const CoverOptions& opts) {
    std::vector<Thm21Row> rows;
    const MetricSpace& X = mu.space();
    for (double r : X.positive_breakpoints()) {
        Thm21Row row;
        row.r = r;
        row.h_minus = mu.ball_mass(r).first;
        row.lower = c_minus / cover_number(X, r, mode, opts);
        row.pass = row.h_minus >= row.lower * (1.0 - 1e-12) - 1e-15;
        rows.push_back(row);
    }
    return rows;
}

SandwichResult packing_sandwich(const DiscreteMeasure& mu, double epsilon, SolveMode mode,
                                const CoverOptions& opts) {
    SandwichResult out;
    const double h_plus_2e = mu.ball_mass(2.0 * epsilon).second;
    const double h_minus_e = mu.ball_mass(epsilon).first;
    out.lower = (h_plus_2e > 0.0) ? 1.0 / h_plus_2e : kInf;
    out.upper = (h_minus_e > 0.0) ? 1.0 / h_minus_e : kInf;
    out.capacity = pack_number(mu.space(), epsilon, mode, opts);
    // ball masses carry accumulation error of order n ulps, so compare with slack
    out.pass = out.lower <= out.capacity * (1.0 + 1e-12) &&
               static_cast<double>(out.capacity) <= out.upper * (1.0 + 1e-12) + 1e-15;
    return out;
}

}  // namespace chainbound

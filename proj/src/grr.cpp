#include "chainbound/grr.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace chainbound {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Integrals of step functions of r: sum over breakpoint segments of [lo_limit, d]
// with the integrand frozen at each segment's left endpoint.
double segment_sum(const std::vector<double>& bps, double lo_limit, double d,
                   const std::function<double(double)>& integrand) {
    double acc = 0.0;
    for (size_t k = 0; k + 1 < bps.size(); ++k) {
        const double lo = std::max(bps[k], lo_limit);
        const double hi = std::min(bps[k + 1], d);
        if (hi <= lo) continue;
        const double v = integrand(lo);
        if (std::isinf(v)) return kInf;
        acc += (hi - lo) * v;
    }
    return acc;
}

}  // namespace

std::vector<double> rho_from_scalar(const std::vector<double>& f) {
    const size_t n = f.size();
    std::vector<double> rho(n * n, 0.0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) rho[i * n + j] = std::abs(f[i] - f[j]);
    return rho;
}

double compute_V(const MetricSpace& space, const std::vector<double>& rho_flat,
                 const DiscreteMeasure& m, const YoungFunction& Phi) {
    const int n = space.size();
    if (static_cast<int>(rho_flat.size()) != n * n)
        throw ParameterError("rho matrix size mismatch");
    double V = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double rho = rho_flat[static_cast<size_t>(i) * n + j];
            if (rho <= 0.0) continue;
            const double d = space.dist(i, j);
            if (d <= 0.0) return kInf;
            V += m.weight(i) * m.weight(j) * Phi.value(rho / d);
        }
    return V;
}

ModulusContext make_context(std::shared_ptr<const MetricSpace> space,
                            std::vector<double> rho_flat, DiscreteMeasure m,
                            YoungFunction Phi) {
    ModulusContext ctx{space, std::move(rho_flat), std::move(m), std::move(Phi), 0.0};
    ctx.V = compute_V(*space, ctx.rho_flat, ctx.m, ctx.Phi);
    return ctx;
}

double w_distance(const ModulusContext& ctx, int x1, int x2) {
    if (x1 == x2) return 0.0;
    const double d = ctx.space->dist(x1, x2);
    if (d <= 0.0) return 0.0;
    if (std::isinf(ctx.V)) return kInf;
    const double acc = segment_sum(ctx.space->breakpoints(), 0.0, d, [&](double r) {
        double total = 0.0;
        for (int x : {x1, x2}) {
            const double mb = ctx.m.ball_mass_at(x, r);
            if (mb <= 0.0) return kInf;
            total += ctx.Phi.inverse(4.0 * ctx.V / (mb * mb));
        }
        return total;
    });
    return 6.0 * acc;
}

double w_bar_to(const ModulusContext& ctx, double d) {
    if (d <= 0.0) return 0.0;
    if (std::isinf(ctx.V)) return kInf;
    const double acc = segment_sum(ctx.space->breakpoints(), 0.0, d, [&](double r) {
        const double h = ctx.m.ball_mass(r).first;
        if (h <= 0.0) return kInf;
        return ctx.Phi.inverse(4.0 * ctx.V / (h * h));
    });
    return 12.0 * acc;
}

double w_bar_distance(const ModulusContext& ctx, int x1, int x2) {
    if (x1 == x2) return 0.0;
    return w_bar_to(ctx, ctx.space->dist(x1, x2));
}

NetBoundResult w_bound_net(const ModulusContext& ctx, int x1, int x2, double eps,
                           SolveMode mode, CoverOptions opts) {
    const MetricSpace& X = *ctx.space;
    const double d = (x1 == x2) ? 0.0 : X.dist(x1, x2);
    auto bound_at = [&](double e) {
        if (d <= e) return 0.0;
        const int N = cover_number(X, e, mode, opts);
        const double scale = 4.0 * ctx.V / (static_cast<double>(N) * N);
        const double acc = segment_sum(X.breakpoints(), e, d, [&](double r) {
            double total = 0.0;
            for (int x : {x1, x2}) {
                const int Nl = local_cover_number(X, x, r, e, mode, opts);
                total += ctx.Phi.inverse(scale * static_cast<double>(Nl) * Nl);
            }
            return total;
        });
        return 6.0 * acc;
    };

    NetBoundResult res;
    res.at_eps = bound_at(eps);
    res.inf_over_eps = kInf;
    const auto grid = X.positive_breakpoints();
    double liminf = kInf;
    int taken = 0;
    for (double e : grid) {
        if (e >= X.diameter()) break;
        const double v = bound_at(e);
        if (v < res.inf_over_eps) {
            res.inf_over_eps = v;
            res.eps_star = e;
        }
        if (taken < 3) {
            liminf = std::min(liminf, v);
            ++taken;
        }
    }
    if (std::isinf(res.inf_over_eps)) {
        res.inf_over_eps = res.at_eps;
        res.eps_star = eps;
    }
    res.liminf_surrogate = std::isinf(liminf) ? res.at_eps : liminf;
    return res;
}

double w_bound_wh(const ModulusContext& ctx, int x1, int x2, double c_minus,
                  SolveMode mode, CoverOptions opts) {
    if (!(c_minus > 0.0)) throw ParameterError("w_bound_wh needs C_minus > 0");
    if (x1 == x2) return 0.0;
    const MetricSpace& X = *ctx.space;
    const double d = X.dist(x1, x2);
    if (d <= 0.0) return 0.0;
    const double acc = segment_sum(X.breakpoints(), 0.0, d, [&](double r) {
        const int N = cover_number(X, r, mode, opts);
        return ctx.Phi.inverse(4.0 * ctx.V * N * static_cast<double>(N) /
                               (c_minus * c_minus));
    });
    return 12.0 * acc;
}

ModulusReport check_arnold_imkeller(const ModulusContext& ctx) {
    const int n = ctx.space->size();
    ModulusReport rep;
    rep.V = ctx.V;
    rep.minorizing = std::isfinite(ctx.V);
    rep.pass = true;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            ModulusPairRow row;
            row.i = i;
            row.j = j;
            row.rho = ctx.rho_flat[static_cast<size_t>(i) * n + j];
            row.w = w_distance(ctx, i, j);
            row.pass = row.rho <= row.w * (1.0 + 1e-12) + 1e-12;
            if (!row.pass) rep.pass = false;
            if (row.rho > 0.0) {
                const double ratio = (row.w > 0.0) ? row.rho / row.w : kInf;
                rep.worst_ratio = std::max(rep.worst_ratio, ratio);
            }
            rep.rows.push_back(row);
        }
    return rep;
}

}  // namespace chainbound

#include "chainbound/fields.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <limits>
#include <random>
#include <unordered_map>

namespace chainbound {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// breakpoint segments of [0, upper] with left endpoints
struct Segment {
    double left, len;
};

std::vector<Segment> segments_to(const std::vector<double>& bps, double upper) {
    std::vector<Segment> segs;
    for (size_t k = 0; k + 1 < bps.size(); ++k) {
        const double lo = bps[k];
        const double hi = std::min(bps[k + 1], upper);
        if (hi > lo) segs.push_back({lo, hi - lo});
    }
    return segs;
}

std::vector<double> default_Y_grid() {
    std::vector<double> g(121);
    const double llo = std::log(1e-6), lhi = std::log(1e6);
    for (int i = 0; i < 121; ++i) g[i] = std::exp(llo + (lhi - llo) * i / 120.0);
    return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// models and sampling

double RandomFieldModel::max_variance() const {
    const int n = size();
    double v = 0.0;
    for (int i = 0; i < n; ++i) v = std::max(v, cov[static_cast<size_t>(i) * n + i]);
    return v;
}

std::vector<double> cov_ou(const std::vector<double>& t) {
    const size_t n = t.size();
    std::vector<double> c(n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) c[i * n + j] = std::exp(-std::abs(t[i] - t[j]));
    return c;
}

std::vector<double> cov_fbm(const std::vector<double>& t, double hurst) {
    if (!(hurst > 0.0 && hurst <= 1.0))
        throw ParameterError("fbm needs Hurst index in (0, 1]");
    const size_t n = t.size();
    const double h2 = 2.0 * hurst;
    std::vector<double> c(n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            c[i * n + j] = 0.5 * (std::pow(std::abs(t[i]), h2) + std::pow(std::abs(t[j]), h2) -
                                  std::pow(std::abs(t[i] - t[j]), h2));
    return c;
}

std::vector<double> cov_iid(int n) {
    std::vector<double> c(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) c[static_cast<size_t>(i) * n + i] = 1.0;
    return c;
}

RandomFieldModel gaussian_model(std::shared_ptr<const MetricSpace> space,
                                std::vector<double> cov, std::uint64_t seed,
                                std::vector<double> mean) {
    const int n = space->size();
    if (static_cast<int>(cov.size()) != n * n)
        throw ParameterError("covariance size mismatch");
    if (!mean.empty() && static_cast<int>(mean.size()) != n)
        throw ParameterError("mean size mismatch");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (std::abs(cov[static_cast<size_t>(i) * n + j] -
                         cov[static_cast<size_t>(j) * n + i]) > 1e-12)
                throw ValidationError("covariance must be symmetric");
    return RandomFieldModel{std::move(space), std::move(mean), std::move(cov), seed};
}

SampleMatrix sample(const RandomFieldModel& model, int R) {
    if (R < 1) throw ParameterError("sample needs R >= 1");
    const int n = model.size();
    Eigen::MatrixXd C = Eigen::Map<const Eigen::MatrixXd>(model.cov.data(), n, n);
    const double scale = std::max(1.0, C.trace() / n);
    Eigen::MatrixXd L;
    bool ok = false;
    for (double jitter : {0.0, 1e-14, 1e-12, 1e-10}) {
        Eigen::LLT<Eigen::MatrixXd> llt(C + jitter * scale *
                                                Eigen::MatrixXd::Identity(n, n));
        if (llt.info() == Eigen::Success) {
            L = llt.matrixL();
            ok = true;
            break;
        }
    }
    if (!ok) throw ValidationError("covariance factorization failed (not PSD)");

    SampleMatrix out;
    out.R = R;
    out.n = n;
    out.seed = model.seed;
    out.values.resize(static_cast<size_t>(R) * n);
    Eigen::VectorXd z(n), x(n);
    for (int r = 0; r < R; ++r) {
        // explicit Box-Muller over mt19937_64 keyed on (seed, replication):
        // bit-reproducible regardless of the library's normal_distribution
        std::mt19937_64 eng(splitmix64(model.seed ^ (0x9E3779B97F4A7C15ULL *
                                                     (static_cast<std::uint64_t>(r) + 1))));
        for (int i = 0; i < n; i += 2) {
            const double u1 = (static_cast<double>(eng() >> 11) + 1.0) * 0x1p-53;
            const double u2 = static_cast<double>(eng() >> 11) * 0x1p-53;
            const double mag = std::sqrt(-2.0 * std::log(u1));
            z[i] = mag * std::cos(kTwoPi * u2);
            if (i + 1 < n) z[i + 1] = mag * std::sin(kTwoPi * u2);
        }
        x.noalias() = L * z;
        for (int i = 0; i < n; ++i)
            out.values[static_cast<size_t>(r) * n + i] =
                x[i] + (model.mean.empty() ? 0.0 : model.mean[i]);
    }
    return out;
}

std::vector<double> natural_distance(const SampleMatrix& samples, const YoungFunction& Phi,
                                     bool normalize) {
    const int n = samples.n, R = samples.R;
    std::vector<double> d(static_cast<size_t>(n) * n, 0.0);
    std::vector<double> diff(R);
    double dmax = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            for (int r = 0; r < R; ++r) diff[r] = samples.at(r, i) - samples.at(r, j);
            const double v = luxemburg_norm(diff, Phi);
            d[static_cast<size_t>(i) * n + j] = v;
            d[static_cast<size_t>(j) * n + i] = v;
            dmax = std::max(dmax, v);
        }
    if (normalize && dmax > 0.0)
        for (double& v : d) v /= dmax;
    return d;
}

// ---------------------------------------------------------------------------
// majorizing-measure functionals

GammaResult gamma_m(const MetricSpace& space, const DiscreteMeasure& m,
                    const YoungFunction& Phi) {
    const int n = space.size();
    const auto segs = segments_to(space.breakpoints(), space.diameter());
    GammaResult res;
    for (int x = 0; x < n; ++x) {
        double acc = 0.0;
        for (const auto& s : segs) {
            const double mb = m.ball_mass_at(x, s.left);
            if (mb <= 0.0) {
                acc = kInf;
                break;
            }
            acc += s.len * Phi.inverse(1.0 / mb);
        }
        if (acc > res.gamma || x == 0) {
            res.gamma = acc;
            res.argmax = x;
        }
    }
    res.delta_grid = space.positive_breakpoints();
    for (double delta : res.delta_grid) {
        double acc = 0.0;
        for (const auto& s : segs) {
            if (s.left >= delta) break;
            const double mb = m.ball_mass_at(res.argmax, s.left);
            if (mb <= 0.0) {
                acc = kInf;
                break;
            }
            acc += std::min(s.len, delta - s.left) * Phi.inverse(1.0 / mb);
        }
        res.truncated.push_back(acc);
    }
    return res;
}

ChainBounds bound_chain(const MetricSpace& space, const DiscreteMeasure& m,
                        const YoungFunction& Phi, double c_minus, SolveMode mode,
                        CoverOptions opts) {
    if (!(c_minus > 0.0)) throw ParameterError("bound_chain needs C_minus > 0");
    const double D = space.diameter();
    const auto segs = segments_to(space.breakpoints(), D);
    ChainBounds res;
    res.gamma = gamma_m(space, m, Phi).gamma;

    for (const auto& s : segs) {
        const double h = m.ball_mass(s.left).first;
        res.bound_57 += s.len * (h > 0.0 ? Phi.inverse(1.0 / h) : kInf);
    }

    auto bound_58_at = [&](double eps) {
        const int Ne = cover_number(space, eps, mode, opts);
        double acc = 0.0;
        for (const auto& s : segs) {
            const double lo = std::max(s.left, eps);
            const double hi = s.left + s.len;
            if (hi <= lo) continue;
            int nsup = 1;
            for (int x = 0; x < space.size(); ++x)
                nsup = std::max(nsup, local_cover_number(space, x, lo, eps, mode, opts));
            acc += (hi - lo) * Phi.inverse(static_cast<double>(nsup) / Ne);
        }
        return acc;
    };
    res.eps_grid = space.positive_breakpoints();
    while (!res.eps_grid.empty() && res.eps_grid.back() >= D) res.eps_grid.pop_back();
    res.bound_58_inf = kInf;
    res.bound_58_liminf = kInf;
    for (size_t k = 0; k < res.eps_grid.size(); ++k) {
        const double v = bound_58_at(res.eps_grid[k]);
        res.bound_58.push_back(v);
        if (v < res.bound_58_inf) {
            res.bound_58_inf = v;
            res.eps_star = res.eps_grid[k];
        }
        if (k < 3) res.bound_58_liminf = std::min(res.bound_58_liminf, v);
    }
    if (res.eps_grid.empty()) {
        res.bound_58_inf = 0.0;
        res.bound_58_liminf = 0.0;
    }

    for (const auto& s : segs) {
        const int N = cover_number(space, s.left, mode, opts);
        res.bound_59 += s.len * Phi.inverse(N / c_minus);
    }
    return res;
}

double entropy_integral(const MetricSpace& space, const YoungFunction& Phi,
                        SolveMode mode, CoverOptions opts) {
    const auto& bps = space.breakpoints();
    double acc = 0.0;
    for (size_t k = 0; k + 1 < bps.size(); ++k) {
        const double len = bps[k + 1] - bps[k];
        if (len <= 0.0) continue;
        acc += len * Phi.inverse(cover_number(space, bps[k], mode, opts));
    }
    return acc;
}

QuasiHomogeneity quasi_homogeneity(const DiscreteMeasure& m) {
    QuasiHomogeneity res;
    res.ratio = 1.0;
    for (double r : m.space().breakpoints()) {
        const auto [lo, hi] = m.ball_mass(r);
        double ratio;
        if (lo > 0.0)
            ratio = hi / lo;
        else if (hi > 0.0)
            ratio = kInf;
        else
            continue;
        if (ratio > res.ratio) {
            res.ratio = ratio;
            res.argmax_r = r;
        }
    }
    res.finite = std::isfinite(res.ratio);
    return res;
}

// ---------------------------------------------------------------------------
// the Z / theta / zeta / K construction

ZThetaResult build_z_theta(const SampleMatrix& samples, const std::vector<double>& v_flat,
                           const DiscreteMeasure& m, const YoungFunction& Phi) {
    const int n = samples.n, R = samples.R;
    if (static_cast<int>(v_flat.size()) != n * n)
        throw ParameterError("distance matrix size mismatch");
    if (m.space().size() != n) throw ParameterError("measure size mismatch");

    struct Pair {
        int i, j;
        double wt, inv_v;
    };
    std::vector<Pair> kept;
    double kept_mass = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = v_flat[static_cast<size_t>(i) * n + j];
            const double wt = 2.0 * m.weight(i) * m.weight(j);
            if (v > 0.0) {
                kept.push_back({i, j, wt, 1.0 / v});
                kept_mass += wt;
            } else {
                for (int r = 0; r < R; ++r)
                    if (samples.at(r, i) != samples.at(r, j))
                        throw ValidationError(
                            "zero natural distance with non-degenerate increment at pair " +
                            std::to_string(i) + "," + std::to_string(j));
            }
        }

    ZThetaResult res;
    res.Z.assign(R, 0.0);
    res.theta.assign(R, 0.0);
    if (kept.empty() || kept_mass <= 0.0) {
        res.degenerate = true;
        return res;
    }

    for (int r = 0; r < R; ++r) {
        const double* row = samples.values.data() + static_cast<size_t>(r) * n;
        double acc = 0.0;
        for (const auto& p : kept)
            acc += p.wt * Phi.value(std::abs(row[p.i] - row[p.j]) * p.inv_v);
        res.Z[r] = acc / kept_mass;
    }

    // theta = w_bar at the diameter with V = Z; precompute the segment table
    const MetricSpace& X = m.space();
    const auto segs = segments_to(X.breakpoints(), X.diameter());
    std::vector<double> inv_h2(segs.size());
    for (size_t k = 0; k < segs.size(); ++k) {
        const double h = m.ball_mass(segs[k].left).first;
        inv_h2[k] = (h > 0.0) ? 1.0 / (h * h) : kInf;
    }
    if (Phi.is_power()) {
        const double p = Phi.power_exponent();
        double coeff = 0.0;
        for (size_t k = 0; k < segs.size(); ++k)
            coeff += segs[k].len * std::pow(4.0 * inv_h2[k], 1.0 / p);
        coeff *= 12.0;
        for (int r = 0; r < R; ++r)
            res.theta[r] = coeff * std::pow(res.Z[r], 1.0 / p);
    } else {
        for (int r = 0; r < R; ++r) {
            double acc = 0.0;
            for (size_t k = 0; k < segs.size(); ++k)
                acc += segs[k].len * Phi.inverse(4.0 * res.Z[r] * inv_h2[k]);
            res.theta[r] = 12.0 * acc;
        }
    }

    double mean = 0.0;
    for (double z : res.Z) mean += z;
    mean /= R;
    double var = 0.0;
    for (double z : res.Z) var += (z - mean) * (z - mean);
    res.mean_Z = mean;
    res.se_Z = (R > 1) ? std::sqrt(var / (R - 1) / R) : 0.0;
    return res;
}

ZetaResult zeta_distance(const MetricSpace& space, const DiscreteMeasure& m,
                         const YoungFunction& Phi, std::vector<double> Y_grid) {
    const int n = space.size();
    if (Y_grid.empty()) Y_grid = default_Y_grid();
    const double D = space.diameter();
    ZetaResult res;
    res.Y_grid = Y_grid;
    res.zeta_flat.assign(static_cast<size_t>(n) * n, 0.0);
    if (D <= 0.0) {
        res.degenerate = true;
        res.gamma_Y.assign(Y_grid.size(), 0.0);
        return res;
    }

    const auto segs = segments_to(space.breakpoints(), D);
    std::vector<double> inv_h2(segs.size());
    for (size_t k = 0; k < segs.size(); ++k) {
        const double h = m.ball_mass(segs[k].left).first;
        inv_h2[k] = (h > 0.0) ? 1.0 / (h * h) : kInf;
    }
    // prefix(d; Y) / prefix(D; Y), both as sums over the same segment table
    auto ratio_at = [&](double d, double Y) {
        double part = 0.0, total = 0.0;
        for (size_t k = 0; k < segs.size(); ++k) {
            const double a = Phi.inverse(4.0 * Y * inv_h2[k]);
            total += segs[k].len * a;
            if (segs[k].left < d) part += std::min(segs[k].len, d - segs[k].left) * a;
        }
        return (total > 0.0) ? part / total : 0.0;
    };

    for (double Y : Y_grid) {
        double acc = 0.0;
        for (size_t k = 0; k < segs.size(); ++k)
            acc += segs[k].len * Phi.inverse(4.0 * Y * inv_h2[k]);
        res.gamma_Y.push_back(12.0 * acc);
    }

    // zeta depends on a pair only through its distance; one sup per breakpoint
    std::unordered_map<double, double> by_distance;
    for (double d : space.positive_breakpoints()) {
        double best = 0.0;
        size_t best_i = 0;
        for (size_t i = 0; i < Y_grid.size(); ++i) {
            const double v = ratio_at(d, Y_grid[i]);
            if (v > best) {
                best = v;
                best_i = i;
            }
        }
        // golden refinement in log Y around the grid argmax
        double llo = std::log(Y_grid[best_i > 0 ? best_i - 1 : 0]);
        double lhi = std::log(Y_grid[std::min(best_i + 1, Y_grid.size() - 1)]);
        const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = lhi - invphi * (lhi - llo), g = llo + invphi * (lhi - llo);
        double fc = ratio_at(d, std::exp(c)), fg = ratio_at(d, std::exp(g));
        for (int it = 0; it < 60 && lhi - llo > 1e-12; ++it) {
            if (fc >= fg) {
                lhi = g;
                g = c;
                fg = fc;
                c = lhi - invphi * (lhi - llo);
                fc = ratio_at(d, std::exp(c));
            } else {
                llo = c;
                c = g;
                fc = fg;
                g = llo + invphi * (lhi - llo);
                fg = ratio_at(d, std::exp(g));
            }
        }
        by_distance[d] = std::min(1.0, std::max({best, fc, fg}));
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double d = space.dist(i, j);
            if (d > 0.0) res.zeta_flat[static_cast<size_t>(i) * n + j] = by_distance.at(d);
        }
    return res;
}

double estimate_K(const std::vector<double>& theta, const MGFunction& phi,
                  const std::vector<double>& p_grid) {
    if (theta.empty()) throw ParameterError("estimate_K needs theta samples");
    return bphi_norm_estimate(theta, phi, p_grid);
}

// ---------------------------------------------------------------------------
// tail bounds

TailBoundReport tail_bound(const MetricSpace& zeta_space, double K, const MGFunction& phi,
                           const std::vector<double>& u_grid, SolveMode mode,
                           CoverOptions opts) {
    if (!(K > 0.0)) throw ParameterError("tail_bound needs K > 0");
    TailBoundReport rep;
    rep.K = K;
    rep.D_zeta = zeta_space.diameter();
    rep.u_grid = u_grid;

    // delta -> 0+ limit plus each breakpoint below the zeta diameter; between
    // breakpoints N is constant and the exponent factor grows with delta, so
    // left endpoints are exact optimizers
    std::vector<std::pair<double, int>> candidates;
    candidates.emplace_back(0.0, cover_number(zeta_space, 0.0, mode, opts));
    for (double b : zeta_space.positive_breakpoints())
        if (b < rep.D_zeta) candidates.emplace_back(b, cover_number(zeta_space, b, mode, opts));

    for (double u : u_grid) {
        double best = kInf, best_delta = 0.0;
        for (const auto& [delta, N] : candidates) {
            const double v = N * std::exp(-phi.conjugate(u / (1.0 + K * delta)));
            if (v < best) {
                best = v;
                best_delta = delta;
            }
        }
        rep.bound_raw.push_back(best);
        rep.bound.push_back(std::min(1.0, best));
        rep.bound_abs.push_back(2.0 * std::min(1.0, best));
        rep.delta_star.push_back(best_delta);
    }
    return rep;
}

ClosedFormCurve closed_form_611(const YoungFunction& Phi, double gamma, double c1,
                                double c2, const MetricSpace& zeta_space,
                                const std::vector<double>& u_grid, SolveMode mode,
                                CoverOptions opts) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("gamma must lie in (0,1)");
    if (!(c1 > 0.0 && c2 > 0.0)) throw ParameterError("constants must be positive");
    for (double u : u_grid) {
        const double h = 1e-3 * u;
        const double d2 = std::log(Phi.value(u + h)) + std::log(Phi.value(u - h)) -
                          2.0 * std::log(Phi.value(u));
        if (!(d2 > -1e-9)) throw ParameterError("Phi is not logarithmically convex");
    }
    const double D = zeta_space.diameter();
    ClosedFormCurve out;
    for (double u : u_grid) {
        const double lder = Phi.log_derivative(u);
        const double d0 = c1 * gamma / (u * lder);
        const int N = cover_number(zeta_space, c2 * gamma / (u * lder), mode, opts);
        out.values.push_back(N / ((1.0 - gamma) * Phi.value(u)));
        out.delta0.push_back(d0);
        out.valid.push_back(d0 < D ? 1 : 0);
    }
    return out;
}

ClosedFormCurve closed_form_613(double kappa, double c2, double c3, double d_zeta,
                                const std::vector<double>& u_grid) {
    if (!(kappa > 0.0 && c2 > 0.0 && c3 > 0.0))
        throw ParameterError("613 needs positive kappa, C2, C3");
    // evaluated through logs: the factors overflow separately for large kappa
    const double log_coeff = std::log(c3) - kappa * std::log(c2) - kappa * std::log(kappa) +
                             (kappa + 1.0) * std::log(kappa + 1.0);
    ClosedFormCurve out;
    for (double u : u_grid) {
        out.values.push_back(
            std::exp(log_coeff + 2.0 * kappa * std::log(u) - 0.5 * u * u));
        const double d0 = c2 * kappa / ((kappa + 1.0) * u * u);
        out.delta0.push_back(d0);
        out.valid.push_back(d0 <= d_zeta ? 1 : 0);
    }
    return out;
}

ClosedFormCurve closed_form_615(double beta, double c6, double c7,
                                const std::vector<double>& u_grid) {
    if (!(beta > 0.0)) throw ParameterError("615 needs beta > 0");
    ClosedFormCurve out;
    const double expo = 2.0 * beta / (beta + 1.0);
    for (double u : u_grid) {
        out.values.push_back(std::exp(-0.5 * u * u + c6 * std::pow(u, expo)));
        out.delta0.push_back(0.0);
        out.valid.push_back(u >= c7 ? 1 : 0);
    }
    return out;
}

McVerifyResult mc_verify(const RandomFieldModel& model, const YoungFunction& Phi,
                         const std::vector<double>& u_grid, int R, SolveMode mode,
                         CoverOptions opts) {
    for (double mu : model.mean)
        if (mu != 0.0) throw ParameterError("mc_verify requires a centered model");
    const auto samples = sample(model, R);
    const auto v = natural_distance(samples, Phi);
    auto vspace = std::make_shared<MetricSpace>(
        MetricSpace::from_flat(samples.n, v, {}, true));
    const auto m = DiscreteMeasure::uniform(vspace);

    McVerifyResult res;
    const auto zt = build_z_theta(samples, v, m, Phi);
    res.mean_Z = zt.mean_Z;
    res.se_Z = zt.se_Z;
    const auto phi = MGFunction::quadratic(model.max_variance());
    res.K = estimate_K(zt.theta, phi);

    if (zt.degenerate || !(res.K > 0.0)) {
        // field without separated points: a single chain link, N = 1
        res.report.K = res.K;
        res.report.u_grid = u_grid;
        for (double u : u_grid) {
            const double raw = std::exp(-phi.conjugate(u));
            res.report.bound_raw.push_back(raw);
            res.report.bound.push_back(std::min(1.0, raw));
            res.report.bound_abs.push_back(2.0 * std::min(1.0, raw));
            res.report.delta_star.push_back(0.0);
        }
    } else {
        const auto zr = zeta_distance(*vspace, m, Phi);
        const auto zspace = MetricSpace::from_flat(samples.n, zr.zeta_flat, {}, true);
        const SolveMode eff_mode =
            (samples.n > opts.exact_limit) ? SolveMode::Greedy : mode;
        res.report = tail_bound(zspace, res.K, phi, u_grid, eff_mode, opts);
    }

    std::vector<double> maxima(R, -kInf);
    for (int r = 0; r < R; ++r)
        for (int i = 0; i < samples.n; ++i)
            maxima[r] = std::max(maxima[r], samples.at(r, i));
    res.all_dominated = true;
    for (size_t k = 0; k < u_grid.size(); ++k) {
        int count = 0;
        for (double mx : maxima)
            if (mx > u_grid[k]) ++count;
        const double q = static_cast<double>(count) / R;
        const double se = std::sqrt(q * (1.0 - q) / R);
        res.report.empirical.push_back(q);
        res.report.empirical_se.push_back(se);
        const bool dom = res.report.bound[k] >= q - 3.0 * se;
        res.report.dominated.push_back(dom ? 1 : 0);
        if (!dom) res.all_dominated = false;
    }
    return res;
}

}  // namespace chainbound

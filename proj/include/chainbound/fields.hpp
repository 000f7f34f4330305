#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "chainbound/covering.hpp"
#include "chainbound/measure.hpp"
#include "chainbound/orlicz.hpp"

namespace chainbound {

// Centered (or mean-shifted) Gaussian field indexed by the points of a finite
// metric space.
struct RandomFieldModel {
    std::shared_ptr<const MetricSpace> space;
    std::vector<double> mean;  // n entries; empty means zero
    std::vector<double> cov;   // n x n row-major, symmetric PSD
    std::uint64_t seed = 0;

    int size() const { return space ? space->size() : 0; }
    double max_variance() const;
};

// covariance builders over scalar index positions
std::vector<double> cov_ou(const std::vector<double>& t);   // exp(-|s-t|)
std::vector<double> cov_fbm(const std::vector<double>& t, double hurst);
std::vector<double> cov_iid(int n);

RandomFieldModel gaussian_model(std::shared_ptr<const MetricSpace> space,
                                std::vector<double> cov, std::uint64_t seed,
                                std::vector<double> mean = {});

struct SampleMatrix {
    int R = 0, n = 0;
    std::uint64_t seed = 0;
    std::vector<double> values;  // R x n row-major

    double at(int r, int i) const { return values[static_cast<size_t>(r) * n + i]; }
};

// R independent draws; deterministic given (seed, replication index) so results
// are byte-identical across runs and platforms.
SampleMatrix sample(const RandomFieldModel& model, int R);

// Pairwise Luxemburg norms of the coordinate differences; optionally rescaled
// to sup-norm 1.
std::vector<double> natural_distance(const SampleMatrix& samples, const YoungFunction& Phi,
                                     bool normalize = false);

struct GammaResult {
    double gamma = 0.0;
    int argmax = 0;                    // center attaining the sup
    std::vector<double> delta_grid;    // positive breakpoints
    std::vector<double> truncated;     // int_0^delta at the attaining center
};

// gamma_m = sup_x int_0^D Phi^{-1}(1 / m(B(x,r))) dr, exact breakpoint sum.
GammaResult gamma_m(const MetricSpace& space, const DiscreteMeasure& m,
                    const YoungFunction& Phi);

struct ChainBounds {
    double gamma = 0.0;
    double bound_57 = 0.0;  // int_0^D Phi^{-1}(1/h_minus(r)) dr
    std::vector<double> eps_grid;
    std::vector<double> bound_58;  // int_eps^D Phi^{-1}(N_sup(r,eps)/N(eps)) dr
    double bound_58_inf = 0.0;
    double eps_star = 0.0;
    double bound_58_liminf = 0.0;  // min over the three smallest positive breakpoints
    double bound_59 = 0.0;         // int_0^D Phi^{-1}(N(r)/C_minus) dr
};

ChainBounds bound_chain(const MetricSpace& space, const DiscreteMeasure& m,
                        const YoungFunction& Phi, double c_minus,
                        SolveMode mode = SolveMode::Exact, CoverOptions opts = {});

// int_0^D Phi^{-1}(N(r)) dr as the exact sum over breakpoint segments; N is
// constant on [b_k, b_{k+1}) so freezing it at each left endpoint is exact.
double entropy_integral(const MetricSpace& space, const YoungFunction& Phi,
                        SolveMode mode = SolveMode::Exact, CoverOptions opts = {});

struct QuasiHomogeneity {
    double ratio = 0.0;  // sup_r h_plus / h_minus
    double argmax_r = 0.0;
    bool finite = true;
};

QuasiHomogeneity quasi_homogeneity(const DiscreteMeasure& m);

struct ZThetaResult {
    std::vector<double> Z;      // per replication
    std::vector<double> theta;  // per replication, w_bar at the diameter with V = Z
    double mean_Z = 0.0;
    double se_Z = 0.0;
    bool degenerate = false;  // no pair carries positive distance
};

// Z = (renormalized) double integral of Phi(|xi(x1)-xi(x2)| / v(x1,x2)) over
// m x m restricted to pairs with v > 0; theta = sup over pairs of
// w_bar(x1,x2; Z), attained at the diameter.
ZThetaResult build_z_theta(const SampleMatrix& samples, const std::vector<double>& v_flat,
                           const DiscreteMeasure& m, const YoungFunction& Phi);

struct ZetaResult {
    std::vector<double> zeta_flat;  // n x n in [0,1]
    std::vector<double> Y_grid;
    std::vector<double> gamma_Y;  // gamma(Y) = sup over pairs of w_bar(.,.;Y)
    bool degenerate = false;
};

// zeta(x1,x2) = sup_{Y>0} w_bar(x1,x2;Y) / gamma(Y), log grid plus golden
// refinement around each argmax.
ZetaResult zeta_distance(const MetricSpace& space, const DiscreteMeasure& m,
                         const YoungFunction& Phi, std::vector<double> Y_grid = {});

double estimate_K(const std::vector<double>& theta, const MGFunction& phi,
                  const std::vector<double>& p_grid = default_p_grid());

struct TailBoundReport {
    std::vector<double> u_grid;
    std::vector<double> bound;       // capped at 1
    std::vector<double> bound_raw;   // before the probability cap
    std::vector<double> bound_abs;   // 2 x bound
    std::vector<double> delta_star;  // optimizing delta per level
    std::vector<double> empirical;   // filled by mc_verify
    std::vector<double> empirical_se;
    std::vector<int> dominated;
    double K = 0.0;
    double D_zeta = 0.0;
};

// Q(u) <= inf_delta N(X,zeta,delta) exp(-phi*(u/(1+K delta))), optimized over
// delta -> 0+ and the zeta breakpoints.
TailBoundReport tail_bound(const MetricSpace& zeta_space, double K, const MGFunction& phi,
                           const std::vector<double>& u_grid,
                           SolveMode mode = SolveMode::Exact, CoverOptions opts = {});

// closed-form curves; each throws ParameterError outside its stated ranges
struct ClosedFormCurve {
    std::vector<double> values;
    std::vector<double> delta0;  // per-u substitution scale
    std::vector<int> valid;      // delta0 <= D_zeta
};

ClosedFormCurve closed_form_611(const YoungFunction& Phi, double gamma, double c1,
                                double c2, const MetricSpace& zeta_space,
                                const std::vector<double>& u_grid,
                                SolveMode mode = SolveMode::Exact, CoverOptions opts = {});
ClosedFormCurve closed_form_613(double kappa, double c2, double c3, double d_zeta,
                                const std::vector<double>& u_grid);
ClosedFormCurve closed_form_615(double beta, double c6, double c7,
                                const std::vector<double>& u_grid);

struct McVerifyResult {
    TailBoundReport report;
    double mean_Z = 0.0;
    double se_Z = 0.0;
    double K = 0.0;
    bool all_dominated = false;
};

// Full pipeline: sample -> natural distance -> uniform measure -> Z/theta ->
// K -> zeta -> tail bound, then the empirical exceedance rates per level.
McVerifyResult mc_verify(const RandomFieldModel& model, const YoungFunction& Phi,
                         const std::vector<double>& u_grid, int R,
                         SolveMode mode = SolveMode::Exact, CoverOptions opts = {});

}  // namespace chainbound

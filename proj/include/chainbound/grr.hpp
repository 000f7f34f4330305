#pragma once

#include <memory>
#include <vector>

#include "chainbound/covering.hpp"
#include "chainbound/measure.hpp"
#include "chainbound/orlicz.hpp"

namespace chainbound {

// Everything needed to evaluate the modulus-of-continuity machinery for one
// deterministic function f on a finite space: the pairwise target distances
// rho(f(x_i), f(x_j)), the reference measure, the Young function, and the
// cached energy functional V.
struct ModulusContext {
    std::shared_ptr<const MetricSpace> space;
    std::vector<double> rho_flat;  // n x n, row-major
    DiscreteMeasure m;
    YoungFunction Phi;
    double V = 0.0;
};

// V = sum_{i,j} m_i m_j Phi(rho_ij / d_ij); pairs with rho = 0 contribute 0,
// d = 0 with rho > 0 makes V = +inf (not minorizing).
double compute_V(const MetricSpace& space, const std::vector<double>& rho_flat,
                 const DiscreteMeasure& m, const YoungFunction& Phi);

ModulusContext make_context(std::shared_ptr<const MetricSpace> space,
                            std::vector<double> rho_flat, DiscreteMeasure m,
                            YoungFunction Phi);

// helper: rho from scalar samples, rho_ij = |f_i - f_j|
std::vector<double> rho_from_scalar(const std::vector<double>& f);

// w(x1,x2) = 6 int_0^{d} [Phi^{-1}(4V/m(B(r,x1))^2) + Phi^{-1}(4V/m(B(r,x2))^2)] dr
double w_distance(const ModulusContext& ctx, int x1, int x2);

// w_bar(x1,x2) = 12 int_0^{d} Phi^{-1}(4V / h_minus(m,r)^2) dr; w <= w_bar
double w_bar_distance(const ModulusContext& ctx, int x1, int x2);
// same integral with an arbitrary upper limit (used by the chain machinery)
double w_bar_to(const ModulusContext& ctx, double d);

struct NetBoundResult {
    double at_eps = 0.0;            // bound at the requested epsilon
    double inf_over_eps = 0.0;      // infimum over the positive breakpoint grid
    double eps_star = 0.0;          // argmin of the infimum
    double liminf_surrogate = 0.0;  // min over the three smallest positive breakpoints
};

// Net-measure bound: 6 * int_eps^{d} [Phi^{-1}((4V/N^2(eps)) N^2(x1,r,eps)) +
// Phi^{-1}((4V/N^2(eps)) N^2(x2,r,eps))] dr, with the grid infimum and the
// small-eps surrogate evaluated alongside.
NetBoundResult w_bound_net(const ModulusContext& ctx, int x1, int x2, double eps,
                           SolveMode mode = SolveMode::Exact, CoverOptions opts = {});

// Weak-homogeneity bound: 12 int_0^{d} Phi^{-1}(4V N^2(r) / C_minus^2) dr
double w_bound_wh(const ModulusContext& ctx, int x1, int x2, double c_minus,
                  SolveMode mode = SolveMode::Exact, CoverOptions opts = {});

struct ModulusPairRow {
    int i = 0, j = 0;
    double rho = 0.0;
    double w = 0.0;
    bool pass = false;
};

struct ModulusReport {
    std::vector<ModulusPairRow> rows;
    double worst_ratio = 0.0;  // max rho/w over pairs with rho > 0
    bool pass = false;
    double V = 0.0;
    bool minorizing = false;  // V finite
};

// Checks rho(f(x1),f(x2)) <= w(x1,x2) for every pair.
ModulusReport check_arnold_imkeller(const ModulusContext& ctx);

}  // namespace chainbound

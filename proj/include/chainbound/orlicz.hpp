#pragma once

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "chainbound/errors.hpp"

namespace chainbound {

class DiscreteMeasure;

// Even convex moment generating exponent phi(lambda) on (-lambda0, lambda0),
// phi(0) = 0. Built-in analytic forms plus a tabulated form with log-log
// interpolation (exact on power laws).
class MGFunction {
public:
    // phi(l) = sigma2 * l^2 / 2
    static MGFunction quadratic(double sigma2 = 1.0);
    // phi(l) = c * |l|^q, q > 1
    static MGFunction power(double q, double c = 1.0);
    // samples (lambda_i, phi_i), strictly increasing in both coordinates
    static MGFunction tabulated(std::vector<double> lambdas, std::vector<double> values,
                                double lambda0 = std::numeric_limits<double>::infinity());

    double value(double lambda) const;
    double inverse(double p) const;    // functional inverse on [0, inf)
    double conjugate(double u) const;  // phi*(u) = sup_{l >= 0} (l u - phi(l))
    double lambda0() const { return lambda0_; }
    std::string describe() const;

    // psi(p) = p / phi^{-1}(p), the moment-growth gauge of the G_psi space
    double psi(double p) const;

private:
    enum class Kind { Quadratic, Power, Table };
    Kind kind_ = Kind::Quadratic;
    double sigma2_ = 1.0;
    double q_ = 2.0, c_ = 1.0;
    std::vector<double> tl_, tv_;  // log(lambda), log(value)
    double lambda0_ = std::numeric_limits<double>::infinity();
};

// Strictly increasing continuous Young-Orlicz function Phi with Phi(0) = 0 and
// Phi(inf) = inf, with numeric inverse in the sup convention
// Phi^{-1}(w) = sup { z >= 0 : Phi(z) <= w }.
class YoungFunction {
public:
    static YoungFunction power(double p);
    static YoungFunction exp_quadratic();  // exp(z^2/2) - 1
    static YoungFunction exp_conjugate(MGFunction phi);  // exp(phi*(z)) - 1
    // >= 8 strictly increasing samples, monotone piecewise-cubic interpolation
    static YoungFunction tabulated(std::vector<double> z, std::vector<double> values);

    double value(double z) const;
    double inverse(double w) const;
    std::string describe() const;
    bool is_power() const { return kind_ == Kind::Power; }
    double power_exponent() const { return p_; }
    bool is_exp_quadratic() const { return kind_ == Kind::ExpQuadratic; }
    // derivative of log Phi, analytic for built-ins, central differences otherwise
    double log_derivative(double u) const;

private:
    enum class Kind { Power, ExpQuadratic, ExpConjugate, Table };
    Kind kind_ = Kind::Power;
    double p_ = 2.0;
    std::shared_ptr<const MGFunction> phi_;
    std::vector<double> tz_, tw_, slopes_;  // tabulated samples + pchip slopes
};

struct ConjugatePair {
    MGFunction phi;
    std::vector<double> u_grid;
    std::vector<double> star_values;  // phi*(u) at the grid
    double star(double u) const { return phi.conjugate(u); }
};

ConjugatePair young_fenchel(const MGFunction& phi, const std::vector<double>& u_grid);

struct SampledFunction {
    std::vector<double> grid;
    std::vector<double> values;
};

// psi(p) = [ sum_{i,j} m_i m_j rho_ij^p ]^{1/p} over the product measure.
SampledFunction psi_from_moments(const std::vector<double>& rho_flat,
                                 const DiscreteMeasure& m,
                                 const std::vector<double>& p_grid);

// phi as the functional inverse of p -> p/psi(p); throws ValidationError naming
// the violating grid pair when that map is not strictly increasing.
MGFunction phi_from_psi(const SampledFunction& psi);

// Luxemburg gauge: inf { tau > 0 : mean Phi(|s|/tau) <= 1 }.
double luxemburg_norm(std::span<const double> samples, const YoungFunction& Phi);

// Empirical B(phi) norm through the equivalent G_psi norm
// sup_p |eta|_p / psi(p); non-centered input handled as
// sqrt(||eta - E eta||^2 + (E eta)^2).
double bphi_norm_estimate(std::span<const double> samples, const MGFunction& phi,
                          const std::vector<double>& p_grid);

std::vector<double> default_p_grid(double p_max = 64.0, int count = 49);

struct ConditionReport {
    double delta2_sup = 0.0;  // sup Phi^{-1}(xy) / (Phi^{-1}(x) + Phi^{-1}(y))
    bool delta2_finite = false;
    double ledoux_c = 0.0;  // same functional, the Ledoux-Talagrand constant C
    bool ledoux_finite = false;
    double integral_50 = 0.0;  // int_0^1 Phi^{-1}(1/x) dx
    bool integral_finite = false;
};

// Numeric finite/divergence verdicts on log-spaced grids with refinement;
// evidence, not proof.
ConditionReport check_conditions(const YoungFunction& Phi);

}  // namespace chainbound

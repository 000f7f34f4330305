#pragma once

#include <memory>
#include <vector>

#include "chainbound/covering.hpp"
#include "chainbound/metric_space.hpp"

namespace chainbound {

// Borelian probability measure on the points of a finite metric space.
class DiscreteMeasure {
public:
    DiscreteMeasure(std::shared_ptr<const MetricSpace> space, std::vector<double> weights);
    static DiscreteMeasure uniform(std::shared_ptr<const MetricSpace> space);
    static DiscreteMeasure point_mass(std::shared_ptr<const MetricSpace> space, int at);

    const MetricSpace& space() const { return *space_; }
    std::shared_ptr<const MetricSpace> space_ptr() const { return space_; }
    const std::vector<double>& weights() const { return w_; }
    double weight(int i) const { return w_[i]; }
    bool full_support() const;

    // mu(B(x, r)), closed ball
    double ball_mass_at(int x, double r) const;
    // (h_-, h_+): inf/sup over centers of the closed-ball mass
    std::pair<double, double> ball_mass(double r) const;

private:
    std::shared_ptr<const MetricSpace> space_;
    std::vector<double> w_;
};

// Net measure: weight 1/N(eps) on each center of the deterministic optimal
// (or greedy) eps-net.
DiscreteMeasure nu_eps(std::shared_ptr<const MetricSpace> space, double epsilon,
                       SolveMode mode, const CoverOptions& opts = {});

// Exact 1-Wasserstein transport distance between two measures on the same space.
double wasserstein1(const DiscreteMeasure& a, const DiscreteMeasure& b);

struct UniformMeasureResult {
    DiscreteMeasure measure;             // nu at the smallest epsilon of the schedule
    std::vector<double> wasserstein_gaps;  // between successive nu_eps
    bool stabilized = false;             // smallest eps below min positive distance
};

UniformMeasureResult uniform_measure(std::shared_ptr<const MetricSpace> space,
                                     const std::vector<double>& eps_schedule,
                                     SolveMode mode, const CoverOptions& opts = {});

struct HomogeneityWitness {
    double r = 0.0, epsilon = 0.0;
    int x = -1;  // center achieving N_-(r, eps)
    double value = 0.0;
};

struct HomogeneityReport {
    double c_minus = 1.0;  // inf over breakpoint pairs of N_-(r,eps) N(r)/N(eps), capped at 1
    std::vector<HomogeneityWitness> witnesses;
    double quasi_ratio = 1.0;  // sup_r h_+/h_- for the supplied measure, +inf allowed
};

HomogeneityReport weak_homogeneity(std::shared_ptr<const MetricSpace> space, SolveMode mode,
                                   const CoverOptions& opts = {},
                                   const DiscreteMeasure* quasi_measure = nullptr);

struct Thm21Row {
    double r = 0.0;
    double h_minus = 0.0;
    double lower = 0.0;  // C_- / N(r)
    bool pass = false;
};

std::vector<Thm21Row> check_thm21(const DiscreteMeasure& mu, double c_minus, SolveMode mode,
                                  const CoverOptions& opts = {});

struct SandwichResult {
    double lower = 0.0;  // 1 / h_+(mu, 2 eps), +inf when h_+ = 0
    int capacity = 0;    // M(eps)
    double upper = 0.0;  // 1 / h_-(mu, eps), +inf when h_- = 0
    bool pass = false;
};

SandwichResult packing_sandwich(const DiscreteMeasure& mu, double epsilon, SolveMode mode,
                                const CoverOptions& opts = {});

}  // namespace chainbound

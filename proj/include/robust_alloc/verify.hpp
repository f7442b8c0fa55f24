#pragma once

// Numerical check of the martingale optimality conditions: the normalized
// drift of the candidate value process under deviations in the strategy (f)
// and in the scenario (g).

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "robust_alloc/model.hpp"
#include "robust_alloc/simulation.hpp"
#include "robust_alloc/strategy.hpp"

namespace robust_alloc {

/// Candidate saddle point (strategy, scenario, value function).  By default
/// the candidate scenario is the worst case; the strategy and a0 are always
/// derived from whatever candidate scenario is installed, so a tampered
/// candidate still satisfies the martingale condition but fails the
/// submartingale one.
class DriftModel {
public:
    DriftModel(InvestorConfig config, AmbiguityBands bands, double kappa, double r_bar);
    DriftModel(InvestorConfig config, AmbiguityBands bands, double kappa, double r_bar,
               ScenarioRule candidate);

    const InvestorConfig& config() const { return config_; }
    const AmbiguityBands& bands() const { return bands_; }
    double kappa() const { return kappa_; }
    double r_bar() const { return r_bar_; }
    bool worst_case_candidate() const { return !candidate_; }

    ScenarioPoint candidate_scenario(double t) const;
    PortfolioWeights candidate_strategy(double t) const;
    /// a0'(t) taken from the integrand, no finite differencing.
    double a0_slope(double t) const;

    /// Drift of V(t, W_t, r_t) under (pi, theta) divided by
    /// exp((1-gamma)(a0 + a1 r)) W^{1-gamma}.
    double normalized_drift(double t, double r, const PortfolioWeights& pi,
                            const ScenarioPoint& theta) const;

private:
    InvestorConfig config_;
    AmbiguityBands bands_;
    double kappa_;
    double r_bar_;
    ScenarioRule candidate_;
};

/// f(t, r, pi): drift under the candidate scenario.
double drift_f(const DriftModel& model, double t, double r, const PortfolioWeights& pi);

/// g(t, r, theta): drift under the candidate strategy.  Throws when theta is
/// outside S(t).
double drift_g(const DriftModel& model, double t, double r, const ScenarioPoint& theta);

struct SaddleGridSpec {
    int t_points = 50;
    int r_points = 11;
    double r_lo = -0.05;
    double r_hi = 0.15;
    double pi_step = 0.25;
    int pi_refinements = 3;
    int theta_points = 5;
    int theta_refinements = 2;
    double tol = 1e-7;
};

struct PiSearchResult {
    double max_f = 0.0;
    PortfolioWeights argmax;
};

struct ThetaSearchResult {
    double min_g = 0.0;
    ScenarioPoint argmin;
};

/// Star search (3x3 stencil) around the candidate strategy, halving the step
/// on every refinement pass.
PiSearchResult maximize_f(const DriftModel& model, double t, double r, double step, int refinements);

/// Tensor grid over S(t) with `points` per coordinate, then `refinements`
/// passes of a grid of the same size centred on the incumbent at half spacing.
ThetaSearchResult minimize_g(const DriftModel& model, double t, double r, int points,
                             int refinements);

struct Violation {
    std::string condition;
    double t = 0.0;
    double r = 0.0;
    double value = 0.0;
};

struct SaddleReport {
    std::size_t grid_points = 0;
    double tol = 0.0;
    double max_abs_f = 0.0;             // |f(t, r, candidate pi)|
    double max_abs_g = 0.0;             // |g(t, r, candidate theta)|
    double max_f_search = 0.0;          // sup over pi search, should be <= tol
    double min_g_search = 0.0;          // inf over theta search, should be >= -tol
    double max_pi_argmax_distance = 0.0;
    std::optional<double> min_g_reference; // g along the reference trajectory
    std::vector<Violation> violations;

    bool martingale_pass() const;
    bool supermartingale_pass() const;
    bool submartingale_pass() const;
    bool passed() const;
};

SaddleReport verify_saddle(const DriftModel& model, const SaddleGridSpec& grid,
                           const std::optional<ReferenceScenario>& reference = {},
                           Execution execution = Execution::Parallel);

SaddleReport verify_saddle(const InvestorConfig& config, const AmbiguityBands& bands,
                           const ReferenceScenario& reference, double kappa, double r_bar,
                           const SaddleGridSpec& grid, Execution execution = Execution::Parallel);

struct ValueCheck {
    double value = 0.0;
    MonteCarloEstimate estimate;
    double z_score = 0.0;
    bool pass = false;
};

/// Monte Carlo estimate of E[u(W_T)] under the candidate pair against V(0, W0, r0),
/// passing within `n_se` standard errors.
ValueCheck check_value_by_simulation(const DriftModel& model, std::size_t paths,
                                     int steps_per_year, std::uint64_t seed, double n_se = 3.0);

/// Key-value text, one finding per line; a trailing `status` line.
void write_report(std::ostream& os, const SaddleReport& report,
                  const std::optional<ValueCheck>& value_check = {});

} // namespace robust_alloc

#pragma once

// Monte Carlo simulation of wealth and the short rate under a deterministic
// strategy and scenario rule.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "robust_alloc/model.hpp"
#include "robust_alloc/strategy.hpp"

namespace robust_alloc {

using StrategyRule = std::function<PortfolioWeights(double t)>;
using ScenarioRule = std::function<ScenarioPoint(double t)>;

/// Serial kernels are kept as the reference the parallel ones are tested against.
enum class Execution { Serial, Parallel };

struct SimulationSpec {
    std::size_t paths = 1;
    int steps_per_year = 252;
    std::uint64_t seed = 0;
    StrategyRule strategy;
    ScenarioRule scenario;
    /// When set, every step's scenario must lie in S(t) for these bands.
    std::optional<AmbiguityBands> admissible;
    /// Record (W, r) every `record_stride` steps (0 disables path output).
    int record_stride = 0;

    void validate() const;
};

struct SimulationResult {
    std::size_t steps = 0;
    double dt = 0.0;
    std::vector<double> terminal_wealth;
    std::vector<double> terminal_rate;
    /// Observation times and row-major (path, time) matrices when recording.
    std::vector<double> times;
    std::vector<double> wealth_paths;
    std::vector<double> rate_paths;
};

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    double std_dev = 0.0;
    std::size_t samples = 0;
};

/// Euler-Maruyama in log wealth:
///   d ln W = (r + pi'lambda - |sigma'pi|^2 / 2) dt + pi'sigma dB,
///   dr = kappa (r_bar - r) dt + sigma_r dB1.
/// Each path draws from its own engine seeded by (seed, path index), so the
/// output does not depend on the execution mode or thread count.
SimulationResult simulate_wealth(const SimulationSpec& spec, const InvestorConfig& config,
                                 double kappa, double r_bar,
                                 Execution execution = Execution::Parallel);

MonteCarloEstimate summarize(const std::vector<double>& samples);

MonteCarloEstimate expected_utility(const SimulationResult& result, double gamma);

/// Path-wise difference u(W_a) - u(W_b); valid as common random numbers only
/// when both results came from the same seed and step count.
MonteCarloEstimate paired_utility_difference(const SimulationResult& a, const SimulationResult& b,
                                             double gamma);

/// Exact expectation of u(W_T) under the discrete scheme itself (log wealth is
/// Gaussian because the rules are deterministic).  Isolates time-step bias
/// from sampling noise.
double scheme_expected_utility(const SimulationSpec& spec, const InvestorConfig& config,
                               double kappa, double r_bar);

} // namespace robust_alloc

#pragma once

// Closed-form maxmin strategy, the worst-case scenario it is optimal
// against, and the no-ambiguity benchmark.

#include <array>
#include <optional>
#include <string_view>

#include "robust_alloc/model.hpp"

namespace robust_alloc {

/// Fractions of wealth in the bond and the stock; cash holds the rest.
struct PortfolioWeights {
    double pi_B = 0.0;
    double pi_S = 0.0;

    double cash() const { return 1.0 - pi_B - pi_S; }

    friend PortfolioWeights operator+(PortfolioWeights a, PortfolioWeights b) {
        return {a.pi_B + b.pi_B, a.pi_S + b.pi_S};
    }
    friend PortfolioWeights operator-(PortfolioWeights a, PortfolioWeights b) {
        return {a.pi_B - b.pi_B, a.pi_S - b.pi_S};
    }
    friend PortfolioWeights operator*(double s, PortfolioWeights w) {
        return {s * w.pi_B, s * w.pi_S};
    }
};

/// total = (1/gamma) myopic + ((gamma-1)/gamma) hedge.  myopic and
/// ambiguity_hedge are reported before the 1/gamma weighting.
struct StrategyDecomposition {
    PortfolioWeights myopic;
    PortfolioWeights hedge;
    PortfolioWeights ambiguity_hedge;
    PortfolioWeights total;
};

enum class SpeculativeCase { BothAssets, NoBondSpeculation, NoStockInvestment };

std::string_view to_string(SpeculativeCase c);

struct WorstCaseCorrelation {
    double rho = 0.0;
    SpeculativeCase kind = SpeculativeCase::BothAssets;
    /// rho_lo, -(bond Sharpe)/(stock Sharpe), -(stock Sharpe)/(bond Sharpe)
    std::array<double, 3> candidates{};
};

WorstCaseCorrelation worst_case_correlation(const AmbiguityBands& bands, double kappa, double t);

/// Lowest premia, highest volatilities, worst-case correlation.
ScenarioPoint worst_case_scenario(const AmbiguityBands& bands, double kappa, double t);

/// Mean-variance portfolio (sigma sigma^T)^{-1} lambda for scenario `s`, with
/// bond_duration = b(T_bar - t).  Not scaled by 1/gamma.
PortfolioWeights myopic_portfolio(const ScenarioPoint& s, double bond_duration);

/// Interest-rate hedge (b(T - t) / b(T_bar - t), 0).
PortfolioWeights hedge_portfolio(const InvestorConfig& config, double kappa, double t);

/// Strategy that is optimal when the scenario is known to be `s` at time t.
StrategyDecomposition weights_for_scenario(const InvestorConfig& config, const ScenarioPoint& s,
                                           double kappa, double t);

/// Ambiguity-averse optimum.  ambiguity_hedge is filled only when a reference
/// scenario is supplied.
StrategyDecomposition optimal_weights(const InvestorConfig& config, const AmbiguityBands& bands,
                                      double kappa, double t,
                                      const std::optional<ReferenceScenario>& reference = {});

/// Optimum for an investor who only considers the constant reference scenario.
StrategyDecomposition no_ambiguity_weights(const InvestorConfig& config,
                                           const ReferenceScenario& reference, double t);

/// (1/gamma) (worst-case myopic - reference myopic).
PortfolioWeights ambiguity_hedge(const InvestorConfig& config, const AmbiguityBands& bands,
                                 const ReferenceScenario& reference, double kappa, double t);

} // namespace robust_alloc

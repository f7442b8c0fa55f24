#include "robust_alloc/strategy.hpp"

#include <stdexcept>

namespace robust_alloc {

std::string_view to_string(SpeculativeCase c) {
    switch (c) {
    case SpeculativeCase::BothAssets: return "BothAssets";
    case SpeculativeCase::NoBondSpeculation: return "NoBondSpeculation";
    case SpeculativeCase::NoStockInvestment: return "NoStockInvestment";
    }
    return "?";
}

WorstCaseCorrelation worst_case_correlation(const AmbiguityBands& bands, double kappa, double t) {
    const double bond_sharpe = bond_premium_bounds(bands, kappa, t).lower / bands.sigma_r_hi;
    const double stock_sharpe = bands.lambda_S_lo / bands.sigma_S_hi;

    WorstCaseCorrelation out;
    out.candidates = {bands.rho_lo, -bond_sharpe / stock_sharpe, -stock_sharpe / bond_sharpe};
    out.rho = out.candidates[0];
    // Strict comparison: a tie with rho_lo stays BothAssets.
    if (out.candidates[1] > out.rho) {
        out.rho = out.candidates[1];
        out.kind = SpeculativeCase::NoBondSpeculation;
    }
    if (out.candidates[2] > out.rho) {
        out.rho = out.candidates[2];
        out.kind = SpeculativeCase::NoStockInvestment;
    }
    return out;
}

ScenarioPoint worst_case_scenario(const AmbiguityBands& bands, double kappa, double t) {
    return {bond_premium_bounds(bands, kappa, t).lower, bands.lambda_S_lo, bands.sigma_r_hi,
            bands.sigma_S_hi, worst_case_correlation(bands, kappa, t).rho};
}

PortfolioWeights myopic_portfolio(const ScenarioPoint& s, double bond_duration) {
    const double bond_sharpe = s.lambda_B / s.sigma_r;
    const double stock_sharpe = s.lambda_S / s.sigma_S;
    const double scale = 1.0 / (1.0 - s.rho * s.rho);
    return {scale * (bond_sharpe + s.rho * stock_sharpe) / (bond_duration * s.sigma_r),
            scale * (stock_sharpe + s.rho * bond_sharpe) / s.sigma_S};
}

PortfolioWeights hedge_portfolio(const InvestorConfig& config, double kappa, double t) {
    return {duration(kappa, config.T - t) / duration(kappa, config.T_bar - t), 0.0};
}

StrategyDecomposition weights_for_scenario(const InvestorConfig& config, const ScenarioPoint& s,
                                           double kappa, double t) {
    if (t < 0.0 || t > config.T) throw std::domain_error("strategy: t outside [0, T]");
    StrategyDecomposition out;
    out.myopic = myopic_portfolio(s, duration(kappa, config.T_bar - t));
    out.hedge = hedge_portfolio(config, kappa, t);
    out.total = (1.0 / config.gamma) * out.myopic + ((config.gamma - 1.0) / config.gamma) * out.hedge;
    return out;
}

StrategyDecomposition optimal_weights(const InvestorConfig& config, const AmbiguityBands& bands,
                                      double kappa, double t,
                                      const std::optional<ReferenceScenario>& reference) {
    auto out = weights_for_scenario(config, worst_case_scenario(bands, kappa, t), kappa, t);
    if (reference) {
        out.ambiguity_hedge = out.myopic - no_ambiguity_weights(config, *reference, t).myopic;
    }
    return out;
}

StrategyDecomposition no_ambiguity_weights(const InvestorConfig& config,
                                           const ReferenceScenario& reference, double t) {
    const ScenarioPoint constant{reference.lambda0_B, reference.lambda_S, reference.sigma_r,
                                 reference.sigma_S, reference.rho};
    return weights_for_scenario(config, constant, reference.kappa, t);
}

PortfolioWeights ambiguity_hedge(const InvestorConfig& config, const AmbiguityBands& bands,
                                 const ReferenceScenario& reference, double kappa, double t) {
    const auto robust = optimal_weights(config, bands, kappa, t);
    const auto plain = no_ambiguity_weights(config, reference, t);
    return (1.0 / config.gamma) * (robust.myopic - plain.myopic);
}

} // namespace robust_alloc

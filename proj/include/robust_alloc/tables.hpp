#pragma once

// Plot-data tables: weights across risk aversion, weights over time, and
// the single-source ambiguity variants.  All numbers come from the library;
// the CLI only formats.

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "robust_alloc/params.hpp"
#include "robust_alloc/strategy.hpp"

namespace robust_alloc {

enum class AmbiguitySource { SigmaR, LambdaS, SigmaS, Rho };

inline constexpr std::array<AmbiguitySource, 4> kAllSources{
    AmbiguitySource::SigmaR, AmbiguitySource::LambdaS, AmbiguitySource::SigmaS, AmbiguitySource::Rho};

std::string_view to_string(AmbiguitySource source);

/// Bands where only `source` is ambiguous; every other interval collapses to
/// the reference value (a positive reference correlation is then held fixed).
AmbiguityBands single_source_bands(const ParameterSet& params, AmbiguitySource source);

struct FrontierRow {
    double gamma = 0.0;
    PortfolioWeights robust;
    PortfolioWeights neglecting;
};

/// gamma_lo..gamma_hi inclusive in steps of gamma_step.
std::vector<double> gamma_grid(double gamma_lo, double gamma_hi, double gamma_step);

std::vector<FrontierRow> frontier(const ParameterSet& params, const AmbiguityBands& bands,
                                  const std::vector<double>& gammas, double t = 0.0);

struct PathRow {
    double t = 0.0;
    StrategyDecomposition robust;
    StrategyDecomposition neglecting;
    WorstCaseCorrelation correlation;
    double gamma = 0.0;
};

/// 0..T inclusive at `points_per_year` resolution.
std::vector<double> time_grid(double T, int points_per_year);

std::vector<PathRow> weight_path(const ParameterSet& params, const AmbiguityBands& bands, double gamma,
                                 const std::vector<double>& times);

void write_frontier_csv(std::ostream& out, const std::vector<FrontierRow>& rows);
void write_path_csv(std::ostream& out, const std::vector<PathRow>& rows);

double bond_stock_ratio(const PortfolioWeights& w);

} // namespace robust_alloc

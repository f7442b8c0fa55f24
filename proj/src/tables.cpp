#include "robust_alloc/tables.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace robust_alloc {

std::string_view to_string(AmbiguitySource source) {
    switch (source) {
    case AmbiguitySource::SigmaR: return "sigma_r";
    case AmbiguitySource::LambdaS: return "lambda_S";
    case AmbiguitySource::SigmaS: return "sigma_S";
    case AmbiguitySource::Rho: return "rho";
    }
    return "?";
}

AmbiguityBands single_source_bands(const ParameterSet& params, AmbiguitySource source) {
    auto bands = AmbiguityBands::degenerate(params.reference);
    const auto& full = params.bands;
    switch (source) {
    case AmbiguitySource::SigmaR:
        bands.sigma_r_lo = full.sigma_r_lo;
        bands.sigma_r_hi = full.sigma_r_hi;
        break;
    case AmbiguitySource::LambdaS:
        bands.lambda_S_lo = full.lambda_S_lo;
        bands.lambda_S_hi = full.lambda_S_hi;
        break;
    case AmbiguitySource::SigmaS:
        bands.sigma_S_lo = full.sigma_S_lo;
        bands.sigma_S_hi = full.sigma_S_hi;
        break;
    case AmbiguitySource::Rho:
        bands.rho_lo = full.rho_lo;
        bands.rho_hi = full.rho_hi;
        break;
    }
    bands.validate();
    return bands;
}

std::vector<double> gamma_grid(double gamma_lo, double gamma_hi, double gamma_step) {
    if (gamma_lo < 1.0) throw std::invalid_argument("gamma grid: gamma must be >= 1");
    if (!(gamma_step > 0.0) || gamma_hi < gamma_lo) throw std::invalid_argument("gamma grid: bad range");
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((gamma_hi - gamma_lo) / gamma_step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(gamma_lo + gamma_step * static_cast<double>(i));
    return out;
}

std::vector<FrontierRow> frontier(const ParameterSet& params, const AmbiguityBands& bands,
                                  const std::vector<double>& gammas, double t) {
    std::vector<FrontierRow> rows;
    for (double gamma : gammas) {
        if (gamma < 1.0) throw std::invalid_argument("frontier: gamma must be >= 1");
        auto investor = params.investor;
        investor.gamma = gamma;
        rows.push_back({gamma, optimal_weights(investor, bands, params.kappa(), t).total,
                        no_ambiguity_weights(investor, params.reference, t).total});
    }
    return rows;
}

std::vector<double> time_grid(double T, int points_per_year) {
    if (points_per_year < 1) throw std::invalid_argument("time grid: need >= 1 point per year");
    const auto n = static_cast<long>(std::llround(T * points_per_year));
    std::vector<double> out;
    for (long i = 0; i <= n; ++i) out.push_back(i == n ? T : T * static_cast<double>(i) / n);
    return out;
}

std::vector<PathRow> weight_path(const ParameterSet& params, const AmbiguityBands& bands, double gamma,
                                 const std::vector<double>& times) {
    if (gamma < 1.0) throw std::invalid_argument("path: gamma must be >= 1");
    auto investor = params.investor;
    investor.gamma = gamma;
    std::vector<PathRow> rows;
    for (double t : times) {
        rows.push_back({t, optimal_weights(investor, bands, params.kappa(), t, params.reference),
                        no_ambiguity_weights(investor, params.reference, t),
                        worst_case_correlation(bands, params.kappa(), t), gamma});
    }
    return rows;
}

double bond_stock_ratio(const PortfolioWeights& w) { return w.pi_B / w.pi_S; }

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

void write_frontier_csv(std::ostream& out, const std::vector<FrontierRow>& rows) {
    out << "gamma,pi_B_robust,pi_S_robust,cash_robust,ratio_robust,"
           "pi_B_neglecting,pi_S_neglecting,cash_neglecting,ratio_neglecting\n";
    for (const auto& r : rows) {
        out << num(r.gamma) << ',' << num(r.robust.pi_B) << ',' << num(r.robust.pi_S) << ','
            << num(r.robust.cash()) << ',' << num(bond_stock_ratio(r.robust)) << ','
            << num(r.neglecting.pi_B) << ',' << num(r.neglecting.pi_S) << ','
            << num(r.neglecting.cash()) << ',' << num(bond_stock_ratio(r.neglecting)) << '\n';
    }
}

void write_path_csv(std::ostream& out, const std::vector<PathRow>& rows) {
    out << "t,pi_B_robust,pi_S_robust,cash_robust,speculative_bond_robust,hedge_bond,"
           "ratio_robust,rho_lo,rho_bond_stock,rho_stock_bond,rho_hat,case,"
           "pi_B_neglecting,pi_S_neglecting,cash_neglecting,speculative_bond_neglecting,"
           "ratio_neglecting\n";
    for (const auto& r : rows) {
        const double inv = 1.0 / r.gamma;
        const double hedge_share = (r.gamma - 1.0) / r.gamma;
        out << num(r.t) << ',' << num(r.robust.total.pi_B) << ',' << num(r.robust.total.pi_S) << ','
            << num(r.robust.total.cash()) << ',' << num(inv * r.robust.myopic.pi_B) << ','
            << num(hedge_share * r.robust.hedge.pi_B) << ',' << num(bond_stock_ratio(r.robust.total))
            << ',' << num(r.correlation.candidates[0]) << ',' << num(r.correlation.candidates[1]) << ','
            << num(r.correlation.candidates[2]) << ',' << num(r.correlation.rho) << ','
            << to_string(r.correlation.kind) << ',' << num(r.neglecting.total.pi_B) << ','
            << num(r.neglecting.total.pi_S) << ',' << num(r.neglecting.total.cash()) << ','
            << num(inv * r.neglecting.myopic.pi_B) << ',' << num(bond_stock_ratio(r.neglecting.total))
            << '\n';
    }
}

} // namespace robust_alloc

#include "robust_alloc/model.hpp"

#include <cmath>
#include <string>

namespace robust_alloc {

namespace {

void require(bool condition, const std::string& message) {
    if (!condition) throw std::invalid_argument(message);
}

bool within(double x, double lo, double hi) {
    return x >= lo - kBandTolerance && x <= hi + kBandTolerance;
}

} // namespace

void ReferenceScenario::validate() const {
    require(std::isfinite(r_bar), "reference: r_bar must be finite");
    require(kappa > 0.0, "reference: kappa must be positive");
    require(sigma_r > 0.0, "reference: sigma_r must be positive");
    require(sigma_S > 0.0, "reference: sigma_S must be positive");
    require(rho > -1.0 && rho < 1.0, "reference: rho must lie in (-1, 1)");
    require(lambda0_B > 0.0, "reference: lambda0_B must be positive");
    require(lambda_S > 0.0, "reference: lambda_S must be positive");
}

void AmbiguityBands::validate() const {
    require(lambda0_B > 0.0, "bands: lambda0_B must be positive");
    require(lambda_S_lo > 0.0 && lambda_S_lo <= lambda_S_hi,
            "bands: need 0 < lambda_S_lo <= lambda_S_hi");
    require(sigma_r_lo > 0.0 && sigma_r_lo <= sigma_r_hi,
            "bands: need 0 < sigma_r_lo <= sigma_r_hi");
    require(sigma_S_lo > 0.0 && sigma_S_lo <= sigma_S_hi,
            "bands: need 0 < sigma_S_lo <= sigma_S_hi");
    require(rho_lo > -1.0 && rho_hi < 1.0 && rho_lo <= rho_hi,
            "bands: need -1 < rho_lo <= rho_hi < 1");
    if (rho_lo != rho_hi) {
        require(rho_lo <= 0.0 && rho_hi >= 0.0, "bands: need rho_lo <= 0 <= rho_hi");
    }
}

AmbiguityBands AmbiguityBands::degenerate(const ReferenceScenario& reference) {
    AmbiguityBands bands;
    bands.lambda0_B = reference.lambda0_B;
    bands.lambda_S_lo = bands.lambda_S_hi = reference.lambda_S;
    bands.sigma_r_lo = bands.sigma_r_hi = reference.sigma_r;
    bands.sigma_S_lo = bands.sigma_S_hi = reference.sigma_S;
    bands.rho_lo = bands.rho_hi = reference.rho;
    return bands;
}

void InvestorConfig::validate() const {
    require(gamma >= 1.0, "investor: gamma must be >= 1");
    require(T > 0.0, "investor: T must be positive");
    require(T <= T_bar, "investor: T must not exceed T_bar");
    require(W0 > 0.0, "investor: W0 must be positive");
    require(std::isfinite(r0), "investor: r0 must be finite");
}

double duration(double kappa, double tau) {
    if (!(kappa > 0.0)) throw std::invalid_argument("duration: kappa must be positive");
    if (tau < 0.0) throw std::domain_error("duration: negative time to maturity");
    return -std::expm1(-kappa * tau) / kappa;
}

double duration_slope(double kappa, double tau) {
    if (tau < 0.0) throw std::domain_error("duration_slope: negative time to maturity");
    return std::exp(-kappa * tau);
}

double bond_premium_path(double lambda0_B, double sigma_r, double kappa, double t) {
    const double decay = std::exp(-2.0 * kappa * t);
    return decay * lambda0_B - sigma_r * sigma_r / (2.0 * kappa) * std::expm1(-2.0 * kappa * t);
}

PremiumBounds bond_premium_bounds(const AmbiguityBands& bands, double kappa, double t) {
    return {bond_premium_path(bands.lambda0_B, bands.sigma_r_lo, kappa, t),
            bond_premium_path(bands.lambda0_B, bands.sigma_r_hi, kappa, t)};
}

bool scenario_in_bands(const ScenarioPoint& point, const AmbiguityBands& bands, double kappa,
                       double t) {
    const auto premium = bond_premium_bounds(bands, kappa, t);
    return within(point.lambda_B, premium.lower, premium.upper) &&
           within(point.lambda_S, bands.lambda_S_lo, bands.lambda_S_hi) &&
           within(point.sigma_r, bands.sigma_r_lo, bands.sigma_r_hi) &&
           within(point.sigma_S, bands.sigma_S_lo, bands.sigma_S_hi) &&
           within(point.rho, bands.rho_lo, bands.rho_hi);
}

ScenarioPoint reference_scenario_at(const ReferenceScenario& reference, double t) {
    return {bond_premium_path(reference.lambda0_B, reference.sigma_r, reference.kappa, t),
            reference.lambda_S, reference.sigma_r, reference.sigma_S, reference.rho};
}

} // namespace robust_alloc

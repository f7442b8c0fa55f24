#pragma once

// Market primitives: Vasicek short rate, zero-coupon bond duration, the
// ambiguity space and the endogenous bounds on the bond premium.

#include <stdexcept>
#include <string>

namespace robust_alloc {

/// Absolute slack applied to every bound in a membership test.
inline constexpr double kBandTolerance = 1e-12;

/// Constant parameter combination used when ambiguity is ignored.
///
/// lambda0_B is a premium factor: the bond's excess return is
/// b(T_bar - t) * lambda_B, so it carries units of rate per unit duration.
struct ReferenceScenario {
    double kappa = 0.0;
    double r_bar = 0.0;
    double sigma_r = 0.0;
    double lambda0_B = 0.0;
    double lambda_S = 0.0;
    double sigma_S = 0.0;
    double rho = 0.0;

    void validate() const;
};

/// Extreme values of the ambiguous quantities.  Bond-premium bounds are
/// not stored; they follow from lambda0_B and the short-rate volatility band.
///
/// A correlation band must straddle zero unless it is degenerate
/// (rho_lo == rho_hi), which pins the correlation at a known value.
struct AmbiguityBands {
    double lambda0_B = 0.0;
    double lambda_S_lo = 0.0, lambda_S_hi = 0.0;
    double sigma_r_lo = 0.0, sigma_r_hi = 0.0;
    double sigma_S_lo = 0.0, sigma_S_hi = 0.0;
    double rho_lo = 0.0, rho_hi = 0.0;

    void validate() const;

    /// Bands whose every interval is the single reference value.
    static AmbiguityBands degenerate(const ReferenceScenario& reference);
};

struct InvestorConfig {
    double gamma = 2.0;  // relative risk aversion, 1 = log utility
    double T = 10.0;     // horizon
    double T_bar = 20.0; // bond maturity
    double W0 = 1.0;
    double r0 = 0.0;

    void validate() const;
};

/// One time-t realization of an ambiguity scenario.
struct ScenarioPoint {
    double lambda_B = 0.0;
    double lambda_S = 0.0;
    double sigma_r = 0.0;
    double sigma_S = 0.0;
    double rho = 0.0;
};

struct StatePoint {
    double t = 0.0;
    double W = 1.0;
    double r = 0.0;
};

struct PremiumBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// b(tau) = (1 - exp(-kappa tau)) / kappa.  Only kappa > 0 is supported.
double duration(double kappa, double tau);

/// d/dtau b(tau) = exp(-kappa tau).
double duration_slope(double kappa, double tau);

/// Bond premium factor of a single volatility trajectory:
/// exp(-2 kappa t) lambda0 + sigma^2 / (2 kappa) (1 - exp(-2 kappa t)).
double bond_premium_path(double lambda0_B, double sigma_r, double kappa, double t);

PremiumBounds bond_premium_bounds(const AmbiguityBands& bands, double kappa, double t);

/// Closed-interval membership in the time-t section of the scenario space.
bool scenario_in_bands(const ScenarioPoint& point, const AmbiguityBands& bands, double kappa,
                       double t);

/// Reference scenario with the bond premium following its own
/// volatility trajectory; always inside S(t) when the reference is inside the
/// static bands.
ScenarioPoint reference_scenario_at(const ReferenceScenario& reference, double t);

} // namespace robust_alloc

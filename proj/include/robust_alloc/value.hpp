#pragma once

// Value function V(t, W, r) = exp((1-gamma)(a0(t) + a1(t) r)) W^{1-gamma} / (1-gamma).

#include <stdexcept>
#include <vector>

#include "robust_alloc/model.hpp"

namespace robust_alloc {

/// Raised for requests outside the supported utility family (log utility).
class OutOfScopeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct ValueFunctionContext {
    InvestorConfig config;
    AmbiguityBands bands;
    double kappa = 0.0;
    double r_bar = 0.0;
    int steps_per_year = 256;
    /// Split the a0 integral at worst-case correlation regime switches.
    bool split_at_case_switches = true;

    void validate() const;
};

/// Integrand of a0 at time u for an arbitrary scenario value, i.e. -a0'(u)
/// when a0 is built on that scenario path.
double a0_integrand(const InvestorConfig& config, const ScenarioPoint& s, double kappa,
                    double r_bar, double u);

/// Integrand of a0 along the worst-case scenario.
double a0_integrand(const ValueFunctionContext& ctx, double u);

/// Times in (t0, t1) at which the worst-case correlation changes regime,
/// located by bisection to `tol` years after a scan at `steps_per_year`.
std::vector<double> case_switch_times(const AmbiguityBands& bands, double kappa, double t0,
                                      double t1, int steps_per_year, double tol = 1e-10);

double a1(const ValueFunctionContext& ctx, double t);
double a0(const ValueFunctionContext& ctx, double t);

/// Requires gamma > 1; throws OutOfScopeError for gamma == 1.
double value(const ValueFunctionContext& ctx, const StatePoint& state);

/// CRRA utility W^{1-gamma} / (1-gamma); log for gamma == 1.
double crra_utility(double W, double gamma);

} // namespace robust_alloc

#include "robust_alloc/value.hpp"

#include <algorithm>
#include <cmath>

#include "robust_alloc/quadrature.hpp"
#include "robust_alloc/strategy.hpp"

namespace robust_alloc {

namespace {

void check_time(const ValueFunctionContext& ctx, double t) {
    if (!(t >= 0.0 && t <= ctx.config.T)) throw std::domain_error("value: t outside [0, T]");
}

std::size_t panels(double length, int steps_per_year) {
    return static_cast<std::size_t>(std::ceil(length * steps_per_year));
}

} // namespace

void ValueFunctionContext::validate() const {
    config.validate();
    bands.validate();
    if (!(kappa > 0.0)) throw std::invalid_argument("value: kappa must be positive");
    if (steps_per_year < 64) throw std::invalid_argument("value: need at least 64 steps per year");
}

double a0_integrand(const InvestorConfig& config, const ScenarioPoint& s, double kappa,
                    double r_bar, double u) {
    const double gamma = config.gamma;
    const double hedge_share = (gamma - 1.0) / gamma;
    const double b = duration(kappa, config.T - u);
    const double bond_sharpe = s.lambda_B / s.sigma_r;
    const double stock_sharpe = s.lambda_S / s.sigma_S;
    const double sharpe_quad = (bond_sharpe * bond_sharpe + 2.0 * s.rho * bond_sharpe * stock_sharpe +
                                stock_sharpe * stock_sharpe) /
                               (1.0 - s.rho * s.rho);
    return 0.5 / gamma * sharpe_quad + kappa * r_bar * b + hedge_share * s.lambda_B * b -
           0.5 * hedge_share * s.sigma_r * s.sigma_r * b * b;
}

double a0_integrand(const ValueFunctionContext& ctx, double u) {
    return a0_integrand(ctx.config, worst_case_scenario(ctx.bands, ctx.kappa, u), ctx.kappa,
                        ctx.r_bar, u);
}

std::vector<double> case_switch_times(const AmbiguityBands& bands, double kappa, double t0,
                                      double t1, int steps_per_year, double tol) {
    std::vector<double> switches;
    if (!(t1 > t0)) return switches;
    const std::size_t n = std::max<std::size_t>(1, panels(t1 - t0, steps_per_year));
    const double h = (t1 - t0) / static_cast<double>(n);
    auto kind_at = [&](double t) { return worst_case_correlation(bands, kappa, t).kind; };

    auto prev = kind_at(t0);
    for (std::size_t i = 1; i <= n; ++i) {
        const double lo = t0 + h * static_cast<double>(i - 1);
        const double hi = (i == n) ? t1 : t0 + h * static_cast<double>(i);
        const auto next = kind_at(hi);
        if (next != prev) {
            const auto from = prev;
            switches.push_back(bisect_flip([&](double t) { return kind_at(t) == from; }, lo, hi, tol));
        }
        prev = next;
    }
    return switches;
}

double a1(const ValueFunctionContext& ctx, double t) {
    check_time(ctx, t);
    return duration(ctx.kappa, ctx.config.T - t);
}

double a0(const ValueFunctionContext& ctx, double t) {
    check_time(ctx, t);
    const double T = ctx.config.T;
    if (t == T) return 0.0;

    std::vector<double> knots{t};
    if (ctx.split_at_case_switches) {
        const auto inner = case_switch_times(ctx.bands, ctx.kappa, t, T, ctx.steps_per_year);
        knots.insert(knots.end(), inner.begin(), inner.end());
    }
    knots.push_back(T);

    auto integrand = [&](double u) { return a0_integrand(ctx, u); };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        total += simpson(integrand, knots[i], knots[i + 1],
                         panels(knots[i + 1] - knots[i], ctx.steps_per_year));
    }
    return total;
}

double value(const ValueFunctionContext& ctx, const StatePoint& state) {
    const double gamma = ctx.config.gamma;
    if (gamma == 1.0) throw OutOfScopeError("value: log value function out of scope");
    if (!(state.W > 0.0)) throw std::domain_error("value: wealth must be positive");
    const double exponent = (1.0 - gamma) * (a0(ctx, state.t) + a1(ctx, state.t) * state.r);
    return std::exp(exponent) * crra_utility(state.W, gamma);
}

double crra_utility(double W, double gamma) {
    if (gamma == 1.0) return std::log(W);
    return std::pow(W, 1.0 - gamma) / (1.0 - gamma);
}

} // namespace robust_alloc

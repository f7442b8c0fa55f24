#include "robust_alloc/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "robust_alloc/quadrature.hpp"
#include "robust_alloc/value.hpp"

namespace robust_alloc {

DriftModel::DriftModel(InvestorConfig config, AmbiguityBands bands, double kappa, double r_bar)
    : config_(config), bands_(bands), kappa_(kappa), r_bar_(r_bar) {}

DriftModel::DriftModel(InvestorConfig config, AmbiguityBands bands, double kappa, double r_bar,
                       ScenarioRule candidate)
    : config_(config), bands_(bands), kappa_(kappa), r_bar_(r_bar), candidate_(std::move(candidate)) {}

ScenarioPoint DriftModel::candidate_scenario(double t) const {
    return candidate_ ? candidate_(t) : worst_case_scenario(bands_, kappa_, t);
}

PortfolioWeights DriftModel::candidate_strategy(double t) const {
    return weights_for_scenario(config_, candidate_scenario(t), kappa_, t).total;
}

double DriftModel::a0_slope(double t) const {
    return -a0_integrand(config_, candidate_scenario(t), kappa_, r_bar_, t);
}

double DriftModel::normalized_drift(double t, double r, const PortfolioWeights& pi,
                                    const ScenarioPoint& theta) const {
    const double gamma = config_.gamma;
    const double b = duration(kappa_, config_.T - t);
    const double b_slope = duration_slope(kappa_, config_.T - t);
    const double bond_duration = duration(kappa_, config_.T_bar - t);

    const double premium = pi.pi_B * bond_duration * theta.lambda_B + pi.pi_S * theta.lambda_S;
    const double load_1 = -pi.pi_B * bond_duration * theta.sigma_r + pi.pi_S * theta.sigma_S * theta.rho;
    const double load_2 = pi.pi_S * theta.sigma_S * std::sqrt(1.0 - theta.rho * theta.rho);
    const double variance = load_1 * load_1 + load_2 * load_2;
    const double covariance_with_rate = load_1 * theta.sigma_r;

    return a0_slope(t) - b_slope * r + r + premium + b * kappa_ * (r_bar_ - r) -
           0.5 * gamma * variance + (1.0 - gamma) * b * covariance_with_rate +
           0.5 * (1.0 - gamma) * b * b * theta.sigma_r * theta.sigma_r;
}

double drift_f(const DriftModel& model, double t, double r, const PortfolioWeights& pi) {
    return model.normalized_drift(t, r, pi, model.candidate_scenario(t));
}

double drift_g(const DriftModel& model, double t, double r, const ScenarioPoint& theta) {
    if (!scenario_in_bands(theta, model.bands(), model.kappa(), t)) {
        throw std::domain_error("drift_g: scenario outside S(t)");
    }
    return model.normalized_drift(t, r, model.candidate_strategy(t), theta);
}

PiSearchResult maximize_f(const DriftModel& model, double t, double r, double step,
                          int refinements) {
    const auto scenario = model.candidate_scenario(t);
    PiSearchResult best{model.normalized_drift(t, r, model.candidate_strategy(t), scenario),
                        model.candidate_strategy(t)};
    for (int pass = 0; pass <= refinements; ++pass) {
        const auto centre = best.argmax;
        for (int i = -1; i <= 1; ++i) {
            for (int j = -1; j <= 1; ++j) {
                const PortfolioWeights pi{centre.pi_B + i * step, centre.pi_S + j * step};
                const double f = model.normalized_drift(t, r, pi, scenario);
                if (f > best.max_f) best = {f, pi};
            }
        }
        step *= 0.5;
    }
    return best;
}

namespace {

struct Axis {
    double lo;
    double hi;
};

// Coordinates in ScenarioPoint order.
std::array<Axis, 5> scenario_box(const AmbiguityBands& bands, double kappa, double t) {
    const auto premium = bond_premium_bounds(bands, kappa, t);
    return {{{premium.lower, premium.upper},
             {bands.lambda_S_lo, bands.lambda_S_hi},
             {bands.sigma_r_lo, bands.sigma_r_hi},
             {bands.sigma_S_lo, bands.sigma_S_hi},
             {bands.rho_lo, bands.rho_hi}}};
}

ScenarioPoint from_coords(const std::array<double, 5>& x) {
    return {x[0], x[1], x[2], x[3], x[4]};
}

std::array<double, 5> to_coords(const ScenarioPoint& s) {
    return {s.lambda_B, s.lambda_S, s.sigma_r, s.sigma_S, s.rho};
}

} // namespace

ThetaSearchResult minimize_g(const DriftModel& model, double t, double r, int points,
                             int refinements) {
    if (points < 2) throw std::invalid_argument("minimize_g: need at least 2 points per axis");
    const auto box = scenario_box(model.bands(), model.kappa(), t);
    const auto pi = model.candidate_strategy(t);

    std::array<std::vector<double>, 5> axes;
    std::array<double, 5> spacing{};
    for (std::size_t d = 0; d < 5; ++d) {
        spacing[d] = (box[d].hi - box[d].lo) / (points - 1);
        for (int k = 0; k < points; ++k) {
            axes[d].push_back(k + 1 == points ? box[d].hi : box[d].lo + k * spacing[d]);
        }
    }

    ThetaSearchResult best{std::numeric_limits<double>::infinity(), {}};
    for (int pass = 0; pass <= refinements; ++pass) {
        std::array<std::size_t, 5> idx{};
        while (true) {
            const std::array<double, 5> x{axes[0][idx[0]], axes[1][idx[1]], axes[2][idx[2]],
                                          axes[3][idx[3]], axes[4][idx[4]]};
            const auto theta = from_coords(x);
            const double g = model.normalized_drift(t, r, pi, theta);
            if (g < best.min_g) best = {g, theta};

            std::size_t d = 0;
            while (d < 5 && ++idx[d] == axes[d].size()) idx[d++] = 0;
            if (d == 5) break;
        }
        const auto centre = to_coords(best.argmin);
        const int half = points / 2;
        for (std::size_t d = 0; d < 5; ++d) {
            spacing[d] *= 0.5;
            axes[d].clear();
            for (int k = -half; k < points - half; ++k) {
                axes[d].push_back(std::clamp(centre[d] + k * spacing[d], box[d].lo, box[d].hi));
            }
        }
    }
    return best;
}

bool SaddleReport::martingale_pass() const { return max_abs_f < tol && max_abs_g < tol; }
bool SaddleReport::supermartingale_pass() const { return max_f_search <= tol; }
bool SaddleReport::submartingale_pass() const {
    return min_g_search >= -tol && (!min_g_reference || *min_g_reference >= -tol);
}
bool SaddleReport::passed() const {
    return martingale_pass() && supermartingale_pass() && submartingale_pass();
}

namespace {

struct PointResult {
    double t, r;
    double f_candidate, g_candidate;
    double f_search, g_search;
    double argmax_distance;
    std::optional<double> g_reference;
};

PointResult evaluate_point(const DriftModel& model, const SaddleGridSpec& grid,
                           const std::optional<ReferenceScenario>& reference, double t, double r) {
    PointResult p{t, r, 0, 0, 0, 0, 0, std::nullopt};
    const auto pi = model.candidate_strategy(t);
    p.f_candidate = drift_f(model, t, r, pi);
    p.g_candidate = model.normalized_drift(t, r, pi, model.candidate_scenario(t));
    const auto pi_search = maximize_f(model, t, r, grid.pi_step, grid.pi_refinements);
    p.f_search = pi_search.max_f;
    p.argmax_distance = std::hypot(pi_search.argmax.pi_B - pi.pi_B, pi_search.argmax.pi_S - pi.pi_S);
    p.g_search = minimize_g(model, t, r, grid.theta_points, grid.theta_refinements).min_g;
    if (reference) {
        const auto theta_ref = reference_scenario_at(*reference, t);
        if (scenario_in_bands(theta_ref, model.bands(), model.kappa(), t)) {
            p.g_reference = model.normalized_drift(t, r, pi, theta_ref);
        }
    }
    return p;
}

} // namespace

SaddleReport verify_saddle(const DriftModel& model, const SaddleGridSpec& grid,
                           const std::optional<ReferenceScenario>& reference, Execution execution) {
    if (grid.t_points < 1 || grid.r_points < 1) throw std::invalid_argument("verify: empty grid");
    const double T = model.config().T;
    const auto nt = static_cast<std::size_t>(grid.t_points);
    const auto nr = static_cast<std::size_t>(grid.r_points);
    std::vector<PointResult> results(nt * nr);

    auto r_at = [&](std::size_t j) {
        return nr == 1 ? grid.r_lo
                       : grid.r_lo + (grid.r_hi - grid.r_lo) * static_cast<double>(j) /
                                         static_cast<double>(nr - 1);
    };
    auto t_at = [&](std::size_t i) { return T * static_cast<double>(i) / static_cast<double>(nt); };

    const auto total = static_cast<std::int64_t>(nt * nr);
    if (execution == Execution::Serial) {
        for (std::int64_t k = 0; k < total; ++k) {
            const auto i = static_cast<std::size_t>(k) / nr, j = static_cast<std::size_t>(k) % nr;
            results[static_cast<std::size_t>(k)] = evaluate_point(model, grid, reference, t_at(i), r_at(j));
        }
    } else {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t k = 0; k < total; ++k) {
            const auto i = static_cast<std::size_t>(k) / nr, j = static_cast<std::size_t>(k) % nr;
            results[static_cast<std::size_t>(k)] = evaluate_point(model, grid, reference, t_at(i), r_at(j));
        }
    }

    SaddleReport report;
    report.grid_points = results.size();
    report.tol = grid.tol;
    report.min_g_search = std::numeric_limits<double>::infinity();
    report.max_f_search = -std::numeric_limits<double>::infinity();
    for (const auto& p : results) {
        report.max_abs_f = std::max(report.max_abs_f, std::abs(p.f_candidate));
        report.max_abs_g = std::max(report.max_abs_g, std::abs(p.g_candidate));
        report.max_f_search = std::max(report.max_f_search, p.f_search);
        report.min_g_search = std::min(report.min_g_search, p.g_search);
        report.max_pi_argmax_distance = std::max(report.max_pi_argmax_distance, p.argmax_distance);
        if (p.g_reference) {
            report.min_g_reference = std::min(report.min_g_reference.value_or(*p.g_reference), *p.g_reference);
        }
        if (std::abs(p.f_candidate) >= grid.tol) report.violations.push_back({"martingale_f", p.t, p.r, p.f_candidate});
        if (std::abs(p.g_candidate) >= grid.tol) report.violations.push_back({"martingale_g", p.t, p.r, p.g_candidate});
        if (p.f_search > grid.tol) report.violations.push_back({"supermartingale", p.t, p.r, p.f_search});
        if (p.g_search < -grid.tol) report.violations.push_back({"submartingale", p.t, p.r, p.g_search});
        if (p.g_reference && *p.g_reference < -grid.tol) {
            report.violations.push_back({"submartingale_reference", p.t, p.r, *p.g_reference});
        }
    }
    return report;
}

SaddleReport verify_saddle(const InvestorConfig& config, const AmbiguityBands& bands,
                           const ReferenceScenario& reference, double kappa, double r_bar,
                           const SaddleGridSpec& grid, Execution execution) {
    return verify_saddle(DriftModel(config, bands, kappa, r_bar), grid, reference, execution);
}

ValueCheck check_value_by_simulation(const DriftModel& model, std::size_t paths,
                                     int steps_per_year, std::uint64_t seed, double n_se) {
    const auto& config = model.config();
    ValueCheck check;

    if (model.worst_case_candidate()) {
        ValueFunctionContext ctx{config, model.bands(), model.kappa(), model.r_bar()};
        check.value = value(ctx, {0.0, config.W0, config.r0});
    } else {
        const double a0_at_0 = simpson([&](double u) { return -model.a0_slope(u); }, 0.0, config.T,
                                       static_cast<std::size_t>(std::ceil(config.T * 1024)));
        check.value = std::exp((1.0 - config.gamma) *
                               (a0_at_0 + duration(model.kappa(), config.T) * config.r0)) *
                      crra_utility(config.W0, config.gamma);
    }

    SimulationSpec spec;
    spec.paths = paths;
    spec.steps_per_year = steps_per_year;
    spec.seed = seed;
    spec.strategy = [&](double t) { return model.candidate_strategy(t); };
    spec.scenario = [&](double t) { return model.candidate_scenario(t); };
    const auto sim = simulate_wealth(spec, config, model.kappa(), model.r_bar());
    check.estimate = expected_utility(sim, config.gamma);
    check.z_score = (check.estimate.mean - check.value) / check.estimate.std_error;
    check.pass = std::abs(check.z_score) <= n_se;
    return check;
}

namespace {

void line(std::ostream& os, const char* key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10e", v);
    os << key << " = " << buf << '\n';
}

void line(std::ostream& os, const char* key, bool v) { os << key << " = " << (v ? "pass" : "fail") << '\n'; }

} // namespace

void write_report(std::ostream& os, const SaddleReport& report,
                  const std::optional<ValueCheck>& value_check) {
    os << "grid_points = " << report.grid_points << '\n';
    line(os, "tolerance", report.tol);
    line(os, "martingale.max_abs_f", report.max_abs_f);
    line(os, "martingale.max_abs_g", report.max_abs_g);
    line(os, "martingale", report.martingale_pass());
    line(os, "supermartingale.max_f_over_pi_search", report.max_f_search);
    line(os, "supermartingale.max_argmax_distance", report.max_pi_argmax_distance);
    line(os, "supermartingale", report.supermartingale_pass());
    line(os, "submartingale.min_g_over_theta_search", report.min_g_search);
    if (report.min_g_reference) line(os, "submartingale.min_g_reference", *report.min_g_reference);
    line(os, "submartingale", report.submartingale_pass());
    bool ok = report.passed();
    if (value_check) {
        line(os, "value.closed_form", value_check->value);
        line(os, "value.monte_carlo_mean", value_check->estimate.mean);
        line(os, "value.monte_carlo_std_error", value_check->estimate.std_error);
        os << "value.paths = " << value_check->estimate.samples << '\n';
        line(os, "value.z_score", value_check->z_score);
        line(os, "value", value_check->pass);
        ok = ok && value_check->pass;
    }
    os << "violations = " << report.violations.size() << '\n';
    for (const auto& v : report.violations) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "violation.%s = t=%.6f r=%.4f value=%.10e", v.condition.c_str(),
                      v.t, v.r, v.value);
        os << buf << '\n';
    }
    os << "status = " << (ok ? "pass" : "fail") << '\n';
}

} // namespace robust_alloc

// Acceptance suite: one line per criterion, non-zero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "robust_alloc/calibrate.hpp"
#include "robust_alloc/params.hpp"
#include "robust_alloc/simulation.hpp"
#include "robust_alloc/strategy.hpp"
#include "robust_alloc/tables.hpp"
#include "robust_alloc/value.hpp"
#include "robust_alloc/verify.hpp"

using namespace robust_alloc;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = FIXTURE_DIR;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, double a = 0, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c, d);
    return buf;
}

ParameterSet paper() { return read_parameters_file(kFixtures + "/published.params"); }

Outcome saddle_point() {
    const auto p = paper();
    const auto report = verify_saddle(p.investor, p.bands, p.reference, p.kappa(), p.r_bar(), SaddleGridSpec{});
    Outcome o;
    o.pass = report.passed() && report.grid_points == 550;
    o.detail = fmt("max|f|=%.2e max|g|=%.2e sup f=%.2e inf g=%.2e", report.max_abs_f, report.max_abs_g,
                   report.max_f_search, report.min_g_search);
    return o;
}

Outcome case_switch() {
    const auto p = paper();
    const auto switches = case_switch_times(p.bands, p.kappa(), 0.0, p.investor.T, 256, 1e-10);
    Outcome o;
    if (switches.size() != 1) {
        o.detail = "expected one switch, found " + std::to_string(switches.size());
        return o;
    }
    const double ts = switches[0];
    const auto before = worst_case_correlation(p.bands, p.kappa(), ts - 1e-9).kind;
    const auto after = worst_case_correlation(p.bands, p.kappa(), ts + 1e-9).kind;
    double worst = 0.0;
    for (int i = 1; i <= 2000; ++i) {
        const double t = ts + (p.investor.T - ts) * i / 2000.0;
        worst = std::max(worst, std::abs(optimal_weights(p.investor, p.bands, p.kappa(), t).myopic.pi_B));
    }
    o.pass = ts > 0.0 && ts < p.investor.T && before == SpeculativeCase::BothAssets &&
             after == SpeculativeCase::NoBondSpeculation && worst < 1e-12;
    o.detail = fmt("t*=%.10f, max |myopic bond| after t* = %.1e", ts, worst);
    return o;
}

SimulationSpec spec_for(const ParameterSet& p, StrategyRule strategy, ScenarioRule scenario) {
    SimulationSpec spec;
    spec.paths = 100000;
    spec.steps_per_year = 252;
    spec.seed = 20210607;
    spec.strategy = std::move(strategy);
    spec.scenario = std::move(scenario);
    spec.admissible = p.bands;
    return spec;
}

StrategyRule robust_rule(const ParameterSet& p) {
    return [=](double t) { return optimal_weights(p.investor, p.bands, p.kappa(), t).total; };
}

ScenarioRule worst_rule(const ParameterSet& p) {
    return [=](double t) { return worst_case_scenario(p.bands, p.kappa(), t); };
}

SimulationResult& optimal_run() {
    static SimulationResult result = [] {
        const auto p = paper();
        return simulate_wealth(spec_for(p, robust_rule(p), worst_rule(p)), p.investor, p.kappa(), p.r_bar());
    }();
    return result;
}

Outcome monte_carlo_value() {
    const auto p = paper();
    const ValueFunctionContext ctx{p.investor, p.bands, p.kappa(), p.r_bar()};
    const double v = value(ctx, {0.0, p.investor.W0, p.investor.r0});
    const auto est = expected_utility(optimal_run(), p.investor.gamma);
    const double z = (est.mean - v) / est.std_error;

    // Time-step bias of the scheme itself, free of sampling noise.
    auto bias = [&](int spy) {
        auto spec = spec_for(p, robust_rule(p), worst_rule(p));
        spec.steps_per_year = spy;
        return scheme_expected_utility(spec, p.investor, p.kappa(), p.r_bar()) - v;
    };
    const double b1 = bias(252), b2 = bias(504), b4 = bias(1008);
    const double q1 = b2 / b1, q2 = b4 / b2;
    Outcome o;
    o.pass = std::abs(z) <= 3.0 && q1 >= 0.4 && q1 <= 0.6 && q2 >= 0.4 && q2 <= 0.6;
    o.detail = fmt("V=%.6f mean=%.6f z=%.2f", v, est.mean, z) + fmt(", bias ratios %.3f / %.3f", q1, q2);
    return o;
}

Outcome maxmin_ordering() {
    const auto p = paper();
    const auto neglect = simulate_wealth(
        spec_for(p, [=](double t) { return no_ambiguity_weights(p.investor, p.reference, t).total; }, worst_rule(p)),
        p.investor, p.kappa(), p.r_bar());
    const auto reference = simulate_wealth(
        spec_for(p, robust_rule(p), [=](double t) { return reference_scenario_at(p.reference, t); }), p.investor,
        p.kappa(), p.r_bar());
    const auto d_neglect = paired_utility_difference(neglect, optimal_run(), p.investor.gamma);
    const auto d_reference = paired_utility_difference(reference, optimal_run(), p.investor.gamma);
    Outcome o;
    o.pass = d_neglect.mean <= 3.0 * d_neglect.std_error && d_reference.mean >= -3.0 * d_reference.std_error;
    o.detail = fmt("u(neglect,worst)-u(opt,worst)=%.4f (se %.1e), u(opt,ref)-u(opt,worst)=%.4f (se %.1e)",
                   d_neglect.mean, d_neglect.std_error, d_reference.mean, d_reference.std_error);
    return o;
}

Outcome no_ambiguity_reduction() {
    const auto p = paper();
    // Stationary bond premium so the degenerate band reproduces the constant premium at all t.
    ReferenceScenario ref = p.reference;
    ref.lambda0_B = ref.sigma_r * ref.sigma_r / (2.0 * ref.kappa);
    ref.rho = -0.05;
    double worst = 0.0;
    for (int i = 0; i <= 10; ++i) {
        for (int j = 0; j <= 10; ++j) {
            const double t = i * p.investor.T / 10.0;
            auto inv = p.investor;
            inv.gamma = 1.0 + 0.9 * j;
            const auto a = optimal_weights(inv, AmbiguityBands::degenerate(ref), ref.kappa, t).total;
            const auto b = no_ambiguity_weights(inv, ref, t).total;
            worst = std::max({worst, std::abs(a.pi_B - b.pi_B), std::abs(a.pi_S - b.pi_S)});
        }
    }
    // At t = 0 any reference with a non-positive correlation reduces.
    ReferenceScenario general = p.reference;
    general.rho = 0.0;
    double worst_t0 = 0.0;
    for (double g = 1.0; g <= 10.0; g += 0.25) {
        auto inv = p.investor;
        inv.gamma = g;
        const auto a = optimal_weights(inv, AmbiguityBands::degenerate(general), general.kappa, 0.0).total;
        const auto b = no_ambiguity_weights(inv, general, 0.0).total;
        worst_t0 = std::max({worst_t0, std::abs(a.pi_B - b.pi_B), std::abs(a.pi_S - b.pi_S)});
    }
    // Hedge part across unrelated band sets.
    auto other = p.bands;
    other.sigma_r_lo = 0.005;
    other.sigma_r_hi = 0.09;
    other.rho_lo = -0.8;
    other.lambda_S_lo = 0.001;
    double hedge_gap = 0.0;
    for (int i = 0; i <= 120; ++i) {
        const double t = i * p.investor.T / 120.0;
        const auto h1 = optimal_weights(p.investor, p.bands, p.kappa(), t).hedge;
        const auto h2 = optimal_weights(p.investor, other, p.kappa(), t).hedge;
        const auto h3 = optimal_weights(p.investor, AmbiguityBands::degenerate(ref), p.kappa(), t).hedge;
        const auto h4 = no_ambiguity_weights(p.investor, p.reference, t).hedge;
        hedge_gap = std::max({hedge_gap, std::abs(h1.pi_B - h2.pi_B), std::abs(h1.pi_B - h3.pi_B),
                              std::abs(h1.pi_B - h4.pi_B), std::abs(h1.pi_S) + std::abs(h2.pi_S)});
    }
    Outcome o;
    o.pass = worst <= 1e-10 && worst_t0 <= 1e-10 && hedge_gap <= 1e-12;
    o.detail = fmt("121-point grid max gap %.1e, t=0 gap %.1e, hedge gap %.1e", worst, worst_t0, hedge_gap);
    return o;
}

Outcome calibration_round_trip() {
    const auto ref = paper().reference;
    const auto series = generate_synthetic(ref, 20.0, 100000, 1.0 / 12.0, 1946);
    const auto est = estimate_reference(series, 20.0);
    const auto& e = est.reference;
    const auto& se = est.errors;
    double worst = 0.0; // |error| / tolerance
    auto check = [&](double x, double truth, double s) {
        worst = std::max(worst, std::abs(x - truth) / std::max(0.02 * std::abs(truth), 2.0 * s));
    };
    check(e.kappa, ref.kappa, se.kappa);
    check(e.r_bar, ref.r_bar, se.r_bar);
    check(e.sigma_r, ref.sigma_r, se.sigma_r);
    check(e.lambda0_B, ref.lambda0_B, se.lambda0_B);
    check(e.lambda_S, ref.lambda_S, se.lambda_S);
    check(e.sigma_S, ref.sigma_S, se.sigma_S);
    check(e.rho, ref.rho, se.rho);
    Outcome o;
    o.pass = est.valid && worst <= 1.0;
    o.detail = fmt("worst error/tolerance = %.3f (kappa %.4f, sigma_r %.5f, rho %.4f)", worst, e.kappa, e.sigma_r,
                   e.rho);
    return o;
}

std::vector<std::vector<double>> read_csv(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("robust_alloc_acceptance_" + name);
    fs::remove_all(dir);
    return dir;
}

Outcome monotonicity() {
    const auto dir = scratch("frontier");
    std::ostringstream log;
    cli::FrontierOptions opt;
    opt.params = kFixtures + "/published.params";
    opt.out = dir.string();
    Outcome o;
    if (cli::cmd_frontier(opt, log) != cli::kSuccess) {
        o.detail = "frontier command failed: " + log.str();
        return o;
    }
    const auto rows = read_csv((dir / "frontier.csv").string());
    bool ok = rows.size() == 37;
    double min_gap = 1e300;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double robust = rows[i][4], neglect = rows[i][8];
        min_gap = std::min(min_gap, robust - neglect);
        if (i > 0) ok = ok && robust >= rows[i - 1][4] && neglect >= rows[i - 1][8];
    }
    o.pass = ok && min_gap > 0.0;
    o.detail = fmt("%.0f rows, ratio robust %.3f..%.3f, neglecting %.3f..", static_cast<double>(rows.size()),
                   rows.front()[4], rows.back()[4], rows.front()[8]) +
               fmt("%.3f, min gap %.3f", rows.back()[8], min_gap);
    return o;
}

Outcome fixture_pipelines() {
    const auto p = paper();
    const auto& b = p.bands;
    const bool numbers = b.sigma_r_lo == 0.0111 && b.sigma_r_hi == 0.0455 && b.lambda_S_lo == 0.0124 &&
                         b.lambda_S_hi == 0.1254 && b.sigma_S_lo == 0.1191 && b.sigma_S_hi == 0.1651 &&
                         b.rho_lo == -0.1474 && b.rho_hi == 0.1337;
    const auto dir = scratch("pipelines");
    const std::string params = kFixtures + "/published.params";
    std::ostringstream log;
    int failures = 0;

    cli::FrontierOptions fr;
    fr.params = params;
    fr.out = dir.string();
    fr.per_source = true;
    failures += cli::cmd_frontier(fr, log) != 0;
    cli::PathOptions pa;
    pa.params = params;
    pa.out = dir.string();
    pa.per_source = true;
    failures += cli::cmd_path(pa, log) != 0;
    cli::VerifyOptions ve;
    ve.params = params;
    ve.out = dir.string();
    ve.paths = 5000;
    ve.steps_per_year = 52;
    ve.grid.t_points = 10;
    ve.grid.r_points = 3;
    failures += cli::cmd_verify(ve, log) != 0;
    cli::SimulateOptions si;
    si.params = params;
    si.out = dir.string();
    si.paths = 2000;
    failures += cli::cmd_simulate(si, log) != 0;
    cli::CalibrateOptions ca;
    ca.data = kFixtures + "/synthetic_900.csv";
    ca.out = dir.string();
    failures += cli::cmd_calibrate(ca, log) != 0;

    std::vector<std::string> expected{"frontier.csv", "path.csv", "verification_report.txt",
                                      "simulation_summary.csv", "rolling_estimates.csv",
                                      "calibration_summary.txt", "calibration.params"};
    for (const auto source : kAllSources) {
        expected.push_back("frontier_" + std::string(to_string(source)) + ".csv");
        expected.push_back("path_" + std::string(to_string(source)) + ".csv");
    }
    int missing = 0;
    for (const auto& name : expected) missing += !fs::exists(dir / name) || fs::file_size(dir / name) == 0;
    Outcome o;
    o.pass = numbers && failures == 0 && missing == 0;
    o.detail = "band numbers " + std::string(numbers ? "match" : "DIFFER") + ", " + std::to_string(failures) +
               " failed commands, " + std::to_string(missing) + " of " + std::to_string(expected.size()) +
               " outputs missing";
    return o;
}

struct Criterion {
    int id;
    const char* name;
    double time_limit; // seconds, 0 = none
    std::function<Outcome()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "saddle-point verification", 30.0, saddle_point},
        {2, "worst-case correlation case switch", 0.0, case_switch},
        {3, "Monte Carlo value agreement", 120.0, monte_carlo_value},
        {4, "maxmin ordering", 0.0, maxmin_ordering},
        {5, "reduction to no ambiguity", 0.0, no_ambiguity_reduction},
        {6, "calibration round trip", 10.0, calibration_round_trip},
        {7, "bond-stock ratio monotonicity", 0.0, monotonicity},
        {8, "fixture parameter file pipelines", 0.0, fixture_pipelines},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool timely = c.time_limit == 0.0 || secs < c.time_limit;
        const bool pass = o.pass && timely;
        failed += !pass;
        std::printf("[%s] %d %s: %s; %.1f s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                    timely ? "" : " (over time limit)");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}

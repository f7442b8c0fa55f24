#include "commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "robust_alloc/calibrate.hpp"
#include "robust_alloc/params.hpp"
#include "robust_alloc/simulation.hpp"
#include "robust_alloc/tables.hpp"
#include "robust_alloc/value.hpp"

namespace robust_alloc::cli {

namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    const auto path = fs::path(dir) / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::vector<double> parse_list(const std::string& text, char sep) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Wraps a command body: validation problems exit 1 with a diagnostic.
template <typename Body>
int guarded(std::ostream& log, Body&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kValidationError;
    }
}

} // namespace

int cmd_calibrate(const CalibrateOptions& opt, std::ostream& log) {
    return guarded(log, [&] {
        std::ifstream in(opt.data);
        if (!in) throw std::runtime_error("cannot open data file: " + opt.data);
        const auto series = read_return_series(in);
        const auto est = estimate_bands(series, opt.T_bar, opt.window);

        {
            auto out = open_output(opt.out, "rolling_estimates.csv");
            out << "end_date,sigma_r,lambda_S,sigma_S,rho\n";
            for (const auto& p : est.trajectory) {
                out << format_month(p.end_date) << ',' << num(p.sigma_r) << ',' << num(p.lambda_S)
                    << ',' << num(p.sigma_S) << ',' << num(p.rho) << '\n';
            }
        }
        {
            const auto& reg = est.full_sample.regression;
            auto out = open_output(opt.out, "calibration_summary.txt");
            out << "observations = " << series.size() << '\n'
                << "regression_rows = " << reg.sample_size << '\n'
                << "alpha = " << num(reg.alpha) << '\n'
                << "beta = " << num(reg.beta) << '\n'
                << "se_alpha = " << num(reg.se_alpha) << '\n'
                << "se_beta = " << num(reg.se_beta) << '\n'
                << "residual_sd = " << num(reg.residual_sd) << '\n'
                << "window_months = " << est.window_months << '\n'
                << "windows = " << est.trajectory.size() << '\n'
                << "skipped_windows = " << est.skipped_windows << '\n'
                << "rho_band_widened = " << (est.rho_band_widened ? "true" : "false") << '\n';
            for (const auto& f : est.full_sample.flags) out << "flag = " << f << '\n';
            for (const auto& f : est.flags) out << "flag = " << f << '\n';
        }
        if (!est.valid) {
            for (const auto& f : est.full_sample.flags) log << "error: " << f << '\n';
            for (const auto& f : est.flags) log << "error: " << f << '\n';
            return static_cast<int>(kValidationError);
        }

        ParameterSet params;
        params.reference = est.full_sample.reference;
        params.bands = est.bands;
        params.investor = {2.0, std::min(10.0, opt.T_bar), opt.T_bar, 1.0, params.reference.r_bar};
        params.validate();
        auto out = open_output(opt.out, "calibration.params");
        write_parameters(out, params);
        log << "calibrated " << series.size() << " observations, " << est.trajectory.size()
            << " windows\n";
        return static_cast<int>(kSuccess);
    });
}

namespace {

std::vector<std::pair<std::string, AmbiguityBands>> band_variants(const ParameterSet& params,
                                                                   bool per_source) {
    std::vector<std::pair<std::string, AmbiguityBands>> out{{"", params.bands}};
    if (per_source) {
        for (auto source : kAllSources) {
            out.emplace_back("_" + std::string(to_string(source)), single_source_bands(params, source));
        }
    }
    return out;
}

} // namespace

int cmd_frontier(const FrontierOptions& opt, std::ostream& log) {
    return guarded(log, [&] {
        const auto params = read_parameters_file(opt.params);
        const auto spec = parse_list(opt.gamma_grid, ':');
        if (spec.size() != 3) throw std::invalid_argument("--gamma-grid expects lo:hi:step");
        const auto gammas = gamma_grid(spec[0], spec[1], spec[2]);
        for (const auto& [suffix, bands] : band_variants(params, opt.per_source)) {
            auto out = open_output(opt.out, "frontier" + suffix + ".csv");
            write_frontier_csv(out, frontier(params, bands, gammas));
        }
        log << "frontier: " << gammas.size() << " rows\n";
        return static_cast<int>(kSuccess);
    });
}

int cmd_path(const PathOptions& opt, std::ostream& log) {
    return guarded(log, [&] {
        const auto params = read_parameters_file(opt.params);
        const auto times = time_grid(params.investor.T, opt.t_resolution);
        for (const auto& [suffix, bands] : band_variants(params, opt.per_source)) {
            auto out = open_output(opt.out, "path" + suffix + ".csv");
            write_path_csv(out, weight_path(params, bands, opt.gamma, times));
        }
        log << "path: " << times.size() << " rows\n";
        return static_cast<int>(kSuccess);
    });
}

namespace {

DriftModel candidate_model(const ParameterSet& params) {
    if (!params.rho_hat_override && !params.sigma_r_hat_override) {
        return DriftModel(params.investor, params.bands, params.kappa(), params.r_bar());
    }
    const auto bands = params.bands;
    const double kappa = params.kappa();
    const auto rho = params.rho_hat_override;
    const auto sigma_r = params.sigma_r_hat_override;
    return DriftModel(params.investor, params.bands, kappa, params.r_bar(), [=](double t) {
        auto s = worst_case_scenario(bands, kappa, t);
        if (rho) s.rho = *rho;
        if (sigma_r) s.sigma_r = *sigma_r;
        return s;
    });
}

} // namespace

int cmd_verify(const VerifyOptions& opt, std::ostream& log) {
    return guarded(log, [&] {
        const auto params = read_parameters_file(opt.params);
        const auto model = candidate_model(params);
        const auto report = verify_saddle(model, opt.grid, params.reference);
        std::optional<ValueCheck> value_check;
        if (params.investor.gamma > 1.0 && opt.paths > 0) {
            value_check = check_value_by_simulation(model, opt.paths, opt.steps_per_year, opt.seed);
        }
        auto out = open_output(opt.out, "verification_report.txt");
        write_report(out, report, value_check);
        const bool ok = report.passed() && (!value_check || value_check->pass);
        log << "verify: " << (ok ? "pass" : "fail") << '\n';
        if (!ok) {
            for (const auto& v : report.violations) {
                log << "violation: " << v.condition << " at t=" << v.t << " r=" << v.r << '\n';
                break;
            }
        }
        return static_cast<int>(ok ? kSuccess : kVerificationFailure);
    });
}

namespace {

StrategyRule strategy_rule(const std::string& choice, const ParameterSet& params,
                           const InvestorConfig& investor) {
    const auto bands = params.bands;
    const auto reference = params.reference;
    const double kappa = params.kappa();
    if (choice == "optimal") {
        return [=](double t) { return optimal_weights(investor, bands, kappa, t).total; };
    }
    if (choice == "neglecting") {
        return [=](double t) { return no_ambiguity_weights(investor, reference, t).total; };
    }
    if (choice.rfind("custom:", 0) == 0) {
        const auto w = parse_list(choice.substr(7), ',');
        if (w.size() != 2) throw std::invalid_argument("--strategy custom:pi_B,pi_S");
        const PortfolioWeights fixed{w[0], w[1]};
        return [=](double) { return fixed; };
    }
    throw std::invalid_argument("unknown strategy '" + choice + "'");
}

ScenarioRule scenario_rule(const std::string& choice, const ParameterSet& params) {
    const auto bands = params.bands;
    const auto reference = params.reference;
    const double kappa = params.kappa();
    if (choice == "worst-case") {
        return [=](double t) { return worst_case_scenario(bands, kappa, t); };
    }
    if (choice == "reference") {
        return [=](double t) { return reference_scenario_at(reference, t); };
    }
    if (choice.rfind("custom:", 0) == 0) {
        const auto v = parse_list(choice.substr(7), ',');
        if (v.size() != 5) {
            throw std::invalid_argument("--scenario custom:lambda_B,lambda_S,sigma_r,sigma_S,rho");
        }
        const ScenarioPoint fixed{v[0], v[1], v[2], v[3], v[4]};
        return [=](double) { return fixed; };
    }
    throw std::invalid_argument("unknown scenario '" + choice + "'");
}

} // namespace

int cmd_simulate(const SimulateOptions& opt, std::ostream& log) {
    return guarded(log, [&] {
        const auto params = read_parameters_file(opt.params);
        auto investor = params.investor;
        if (opt.gamma) investor.gamma = *opt.gamma;
        investor.validate();

        SimulationSpec spec;
        spec.paths = opt.paths;
        spec.steps_per_year = opt.steps_per_year;
        spec.seed = opt.seed;
        spec.strategy = strategy_rule(opt.strategy, params, investor);
        spec.scenario = scenario_rule(opt.scenario, params);
        spec.admissible = params.bands;
        const auto sim = simulate_wealth(spec, investor, params.kappa(), params.r_bar());

        const auto wealth = summarize(sim.terminal_wealth);
        const auto utility = expected_utility(sim, investor.gamma);
        auto out = open_output(opt.out, "simulation_summary.csv");
        out << "statistic,value\n"
            << "paths," << sim.terminal_wealth.size() << '\n'
            << "steps," << sim.steps << '\n'
            << "mean_W_T," << num(wealth.mean) << '\n'
            << "sd_W_T," << num(wealth.std_dev) << '\n'
            << "se_W_T," << num(wealth.std_error) << '\n'
            << "mean_u_W_T," << num(utility.mean) << '\n'
            << "sd_u_W_T," << num(utility.std_dev) << '\n'
            << "se_u_W_T," << num(utility.std_error) << '\n';
        if (investor.gamma > 1.0) {
            const ValueFunctionContext ctx{investor, params.bands, params.kappa(), params.r_bar()};
            const double v0 = value(ctx, {0.0, investor.W0, investor.r0});
            out << "value_function," << num(v0) << '\n'
                << "z_vs_value_function," << num((utility.mean - v0) / utility.std_error) << '\n';
        }
        if (opt.per_path) {
            auto paths = open_output(opt.out, "simulation_paths.csv");
            paths << "path,W_T,r_T\n";
            for (std::size_t i = 0; i < sim.terminal_wealth.size(); ++i) {
                paths << i << ',' << num(sim.terminal_wealth[i]) << ',' << num(sim.terminal_rate[i]) << '\n';
            }
        }
        log << "simulate: mean u(W_T) = " << num(utility.mean) << " (se " << num(utility.std_error)
            << ")\n";
        return static_cast<int>(kSuccess);
    });
}

int cmd_synthesize(const SynthesizeOptions& opt, std::ostream& log) {
    return guarded(log, [&] {
        const auto params = read_parameters_file(opt.params);
        const auto series = generate_synthetic(params.reference, params.investor.T_bar, opt.rows,
                                               1.0 / 12.0, opt.seed);
        const auto path = fs::path(opt.out);
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + opt.out);
        write_return_series(out, series);
        log << "synthesize: " << series.size() << " rows\n";
        return static_cast<int>(kSuccess);
    });
}

int run(int argc, char** argv) {
    CLI::App app{"Robust bond/stock/cash allocation under an ambiguous Vasicek market"};
    app.require_subcommand(1);

    CalibrateOptions cal;
    auto* calibrate = app.add_subcommand("calibrate", "Estimate reference scenario and ambiguity bands");
    calibrate->add_option("--data", cal.data, "Monthly return file (CSV)")->required();
    calibrate->add_option("--out", cal.out, "Output directory");
    calibrate->add_option("--window", cal.window, "Rolling window length in months");
    calibrate->add_option("--t-bar", cal.T_bar, "Constant bond maturity in years");

    FrontierOptions fr;
    auto* front = app.add_subcommand("frontier", "Weights at t = 0 across risk aversion");
    front->add_option("--params", fr.params, "Parameter document")->required();
    front->add_option("--out", fr.out, "Output directory");
    front->add_option("--gamma-grid", fr.gamma_grid, "lo:hi:step");
    front->add_flag("--per-source", fr.per_source, "Also write single-source variants");

    PathOptions pa;
    auto* path = app.add_subcommand("path", "Weights over time for one risk aversion");
    path->add_option("--params", pa.params, "Parameter document")->required();
    path->add_option("--out", pa.out, "Output directory");
    path->add_option("--gamma", pa.gamma, "Relative risk aversion");
    path->add_option("--t-resolution", pa.t_resolution, "Grid points per year");
    path->add_flag("--per-source", pa.per_source, "Also write single-source variants");

    VerifyOptions ve;
    auto* verify = app.add_subcommand("verify", "Check the saddle-point conditions and the value");
    verify->add_option("--params", ve.params, "Parameter document")->required();
    verify->add_option("--out", ve.out, "Output directory");
    verify->add_option("--paths", ve.paths, "Monte Carlo paths (0 skips the value check)");
    verify->add_option("--steps-per-year", ve.steps_per_year, "Euler steps per year");
    verify->add_option("--seed", ve.seed, "Random seed");

    SimulateOptions si;
    auto* simulate = app.add_subcommand("simulate", "Simulate terminal wealth");
    simulate->add_option("--params", si.params, "Parameter document")->required();
    simulate->add_option("--out", si.out, "Output directory");
    simulate->add_option("--strategy", si.strategy, "optimal | neglecting | custom:pi_B,pi_S");
    simulate->add_option("--scenario", si.scenario,
                         "worst-case | reference | custom:lambda_B,lambda_S,sigma_r,sigma_S,rho");
    simulate->add_option("--paths", si.paths, "Monte Carlo paths");
    simulate->add_option("--steps-per-year", si.steps_per_year, "Euler steps per year");
    simulate->add_option("--seed", si.seed, "Random seed");
    simulate->add_option("--gamma", si.gamma, "Override relative risk aversion");
    simulate->add_flag("--per-path", si.per_path, "Write per-path terminal values");

    SynthesizeOptions sy;
    auto* synth = app.add_subcommand("synthesize", "Generate a synthetic monthly return file");
    synth->add_option("--params", sy.params, "Parameter document (reference scenario)")->required();
    synth->add_option("--out", sy.out, "Output CSV file");
    synth->add_option("--rows", sy.rows, "Number of months");
    synth->add_option("--seed", sy.seed, "Random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(kValidationError);
    }

    if (*calibrate) return cmd_calibrate(cal, std::cerr);
    if (*front) return cmd_frontier(fr, std::cerr);
    if (*path) return cmd_path(pa, std::cerr);
    if (*verify) return cmd_verify(ve, std::cerr);
    if (*simulate) return cmd_simulate(si, std::cerr);
    if (*synth) return cmd_synthesize(sy, std::cerr);
    return static_cast<int>(kValidationError);
}

} // namespace robust_alloc::cli

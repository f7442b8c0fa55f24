#include "robust_alloc/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "robust_alloc/value.hpp"

namespace robust_alloc {

namespace {

// Per-step loadings shared by every path: excess log-drift, wealth loadings on
// the two factors, and the short-rate volatility.
struct StepLoading {
    double excess_drift;
    double load_1;
    double load_2;
    double sigma_r;
};

std::size_t step_count(const SimulationSpec& spec, const InvestorConfig& config) {
    const auto n = static_cast<std::size_t>(std::llround(config.T * spec.steps_per_year));
    return n == 0 ? 1 : n;
}

std::vector<StepLoading> build_schedule(const SimulationSpec& spec, const InvestorConfig& config,
                                        double kappa, std::size_t steps) {
    const double dt = config.T / static_cast<double>(steps);
    std::vector<StepLoading> schedule(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = dt * static_cast<double>(k);
        const auto pi = spec.strategy(t);
        const auto theta = spec.scenario(t);
        if (spec.admissible && !scenario_in_bands(theta, *spec.admissible, kappa, t)) {
            throw std::invalid_argument("simulate: scenario leaves the admissible bands at t=" +
                                        std::to_string(t));
        }
        const double bond_duration = duration(kappa, config.T_bar - t);
        const double premium = pi.pi_B * bond_duration * theta.lambda_B + pi.pi_S * theta.lambda_S;
        const double load_1 =
            -pi.pi_B * bond_duration * theta.sigma_r + pi.pi_S * theta.sigma_S * theta.rho;
        const double load_2 = pi.pi_S * theta.sigma_S * std::sqrt(1.0 - theta.rho * theta.rho);
        schedule[k] = {premium - 0.5 * (load_1 * load_1 + load_2 * load_2), load_1, load_2,
                       theta.sigma_r};
    }
    return schedule;
}

std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t path) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)};
    return std::mt19937_64(seq);
}

struct PathOutput {
    double* wealth;
    double* rate;
};

void run_path(std::size_t path, const SimulationSpec& spec, const InvestorConfig& config,
              double kappa, double r_bar, const std::vector<StepLoading>& schedule, double dt,
              SimulationResult& out, PathOutput record) {
    auto engine = path_engine(spec.seed, path);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sqrt_dt = std::sqrt(dt);

    double log_wealth = std::log(config.W0);
    double r = config.r0;
    std::size_t slot = 0;
    if (record.wealth) {
        record.wealth[slot] = config.W0;
        record.rate[slot] = r;
        ++slot;
    }
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        const auto& step = schedule[k];
        const double dB1 = sqrt_dt * normal(engine);
        const double dB2 = sqrt_dt * normal(engine);
        log_wealth += (r + step.excess_drift) * dt + step.load_1 * dB1 + step.load_2 * dB2;
        r += kappa * (r_bar - r) * dt + step.sigma_r * dB1;
        if (record.wealth && (k + 1) % static_cast<std::size_t>(spec.record_stride) == 0) {
            record.wealth[slot] = std::exp(log_wealth);
            record.rate[slot] = r;
            ++slot;
        }
    }
    const double wealth = std::exp(log_wealth);
    if (!std::isfinite(wealth) || !std::isfinite(r)) {
        throw std::runtime_error("simulate: non-finite wealth on path " + std::to_string(path));
    }
    out.terminal_wealth[path] = wealth;
    out.terminal_rate[path] = r;
}

} // namespace

void SimulationSpec::validate() const {
    if (paths < 1) throw std::invalid_argument("simulate: need at least one path");
    if (steps_per_year < 12) throw std::invalid_argument("simulate: need >= 12 steps per year");
    if (!strategy || !scenario) throw std::invalid_argument("simulate: missing strategy or scenario");
    if (record_stride < 0) throw std::invalid_argument("simulate: negative record stride");
}

SimulationResult simulate_wealth(const SimulationSpec& spec, const InvestorConfig& config,
                                 double kappa, double r_bar, Execution execution) {
    spec.validate();
    config.validate();
    const std::size_t steps = step_count(spec, config);
    const double dt = config.T / static_cast<double>(steps);
    const auto schedule = build_schedule(spec, config, kappa, steps);

    SimulationResult out;
    out.steps = steps;
    out.dt = dt;
    out.terminal_wealth.assign(spec.paths, 0.0);
    out.terminal_rate.assign(spec.paths, 0.0);

    std::size_t columns = 0;
    if (spec.record_stride > 0) {
        const auto stride = static_cast<std::size_t>(spec.record_stride);
        for (std::size_t k = 0; k <= steps; k += stride) {
            out.times.push_back(dt * static_cast<double>(k));
        }
        columns = out.times.size();
        out.wealth_paths.assign(spec.paths * columns, 0.0);
        out.rate_paths.assign(spec.paths * columns, 0.0);
    }
    auto record_for = [&](std::size_t path) -> PathOutput {
        if (columns == 0) return {nullptr, nullptr};
        return {out.wealth_paths.data() + path * columns, out.rate_paths.data() + path * columns};
    };

    const auto paths = static_cast<std::int64_t>(spec.paths);
    if (execution == Execution::Serial) {
        for (std::int64_t p = 0; p < paths; ++p) {
            const auto path = static_cast<std::size_t>(p);
            run_path(path, spec, config, kappa, r_bar, schedule, dt, out, record_for(path));
        }
        return out;
    }

    // Exceptions may not cross the parallel region; keep the lowest failing path.
    std::int64_t failed_path = paths;
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 0; p < paths; ++p) {
        const auto path = static_cast<std::size_t>(p);
        try {
            run_path(path, spec, config, kappa, r_bar, schedule, dt, out, record_for(path));
        } catch (const std::runtime_error&) {
#pragma omp critical(simulate_failure)
            failed_path = std::min(failed_path, p);
        }
    }
    if (failed_path < paths) {
        throw std::runtime_error("simulate: non-finite wealth on path " + std::to_string(failed_path));
    }
    return out;
}

MonteCarloEstimate summarize(const std::vector<double>& samples) {
    MonteCarloEstimate est;
    est.samples = samples.size();
    if (samples.empty()) return est;
    double sum = 0.0;
    for (double x : samples) sum += x;
    est.mean = sum / static_cast<double>(samples.size());
    if (samples.size() > 1) {
        double ss = 0.0;
        for (double x : samples) ss += (x - est.mean) * (x - est.mean);
        est.std_dev = std::sqrt(ss / static_cast<double>(samples.size() - 1));
        est.std_error = est.std_dev / std::sqrt(static_cast<double>(samples.size()));
    }
    return est;
}

MonteCarloEstimate expected_utility(const SimulationResult& result, double gamma) {
    std::vector<double> u(result.terminal_wealth.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = crra_utility(result.terminal_wealth[i], gamma);
    return summarize(u);
}

MonteCarloEstimate paired_utility_difference(const SimulationResult& a, const SimulationResult& b,
                                             double gamma) {
    if (a.terminal_wealth.size() != b.terminal_wealth.size() || a.steps != b.steps) {
        throw std::invalid_argument("paired difference: results are not aligned");
    }
    std::vector<double> d(a.terminal_wealth.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = crra_utility(a.terminal_wealth[i], gamma) - crra_utility(b.terminal_wealth[i], gamma);
    }
    return summarize(d);
}

double scheme_expected_utility(const SimulationSpec& spec, const InvestorConfig& config,
                               double kappa, double r_bar) {
    config.validate();
    const std::size_t steps = step_count(spec, config);
    const double dt = config.T / static_cast<double>(steps);
    const auto schedule = build_schedule(spec, config, kappa, steps);
    const double q = 1.0 - kappa * dt;

    // ln W_N = ln W0 + sum_k (r_k + excess_k) dt + sum_k (load_1 dB1_k + load_2 dB2_k),
    // with r_k linear in dB1_0 .. dB1_{k-1}.
    double mean = 0.0;
    double variance = 0.0;
    double mean_rate = config.r0;
    for (std::size_t k = 0; k < steps; ++k) {
        const auto& step = schedule[k];
        mean += (mean_rate + step.excess_drift) * dt;
        mean_rate += kappa * (r_bar - mean_rate) * dt;
        const double later_rates = (1.0 - std::pow(q, static_cast<double>(steps - 1 - k))) / kappa;
        const double total_1 = step.load_1 + step.sigma_r * later_rates;
        variance += (total_1 * total_1 + step.load_2 * step.load_2) * dt;
    }
    const double gamma = config.gamma;
    if (gamma == 1.0) return std::log(config.W0) + mean;
    const double one_minus = 1.0 - gamma;
    return crra_utility(config.W0, gamma) *
           std::exp(one_minus * mean + 0.5 * one_minus * one_minus * variance);
}

} // namespace robust_alloc

#pragma once

// Discrete-time calibration of the reference scenario and rolling-window
// estimation of the ambiguity bands from periodic return data.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "robust_alloc/model.hpp"
#include "robust_alloc/simulation.hpp"

namespace robust_alloc {

/// Month index year * 12 + (month - 1).
using MonthId = int;

MonthId parse_month(const std::string& text);
std::string format_month(MonthId id);

/// Per-period returns; rf_return[i] / delta is the annualized short rate at
/// the start of period i.
struct ReturnSeries {
    std::vector<MonthId> dates;
    std::vector<double> rf_return;
    std::vector<double> bond_excess;
    std::vector<double> stock_excess;
    double delta = 1.0 / 12.0;

    std::size_t size() const { return dates.size(); }
    double short_rate(std::size_t i) const { return rf_return[i] / delta; }
    void validate(std::size_t min_length = 24) const;
    ReturnSeries slice(std::size_t first, std::size_t count) const;
};

/// Comma-separated with header naming date, rf_return, bond_excess,
/// stock_excess (any column order).  Throws std::runtime_error naming the
/// offending column or line.
ReturnSeries read_return_series(std::istream& in);
void write_return_series(std::ostream& out, const ReturnSeries& series);

struct RegressionDiagnostics {
    double alpha = 0.0;
    double beta = 0.0;
    double se_alpha = 0.0;
    double se_beta = 0.0;
    double cov_alpha_beta = 0.0;
    double residual_sd = 0.0;
    std::size_t sample_size = 0; // regression rows, n - 1
};

/// Standard errors of the recovered parameters (delta method where needed).
struct ParameterErrors {
    double kappa = 0.0;
    double r_bar = 0.0;
    double sigma_r = 0.0;
    double lambda0_B = 0.0;
    double lambda_S = 0.0;
    double sigma_S = 0.0;
    double rho = 0.0;
};

struct CalibrationResult {
    ReferenceScenario reference;
    RegressionDiagnostics regression;
    ParameterErrors errors;
    bool valid = true;
    std::vector<std::string> flags;
};

/// OLS of the short-rate change on the per-period risk-free return over the
/// n - 1 consecutive pairs, then moment estimates of the premia, the stock
/// volatility and the residual/stock correlation.  Throws when the regressor
/// is constant; other identification failures are flags.
CalibrationResult estimate_reference(const ReturnSeries& series, double T_bar);

/// Samples the discrete system exactly: shocks (eps1, eps2) ~ N(0, Sigma)
/// with Sigma = delta [[s_r^2, s_r s_S rho], [s_r s_S rho, s_S^2]].
ReturnSeries generate_synthetic(const ReferenceScenario& reference, double T_bar, std::size_t n,
                                double delta, std::uint64_t seed, MonthId start = 1946 * 12);

struct RollingPoint {
    MonthId end_date = 0;
    double sigma_r = 0.0;
    double lambda_S = 0.0;
    double sigma_S = 0.0;
    double rho = 0.0;
};

struct BandEstimate {
    AmbiguityBands bands;
    CalibrationResult full_sample;
    std::vector<RollingPoint> trajectory;
    std::size_t window_months = 0;
    std::size_t skipped_windows = 0;
    /// The rolling correlation range did not straddle zero and was widened.
    bool rho_band_widened = false;
    bool valid = true;
    std::vector<std::string> flags;
};

/// One window per end date with a monthly stride: n - window + 1 windows.
BandEstimate estimate_bands(const ReturnSeries& series, double T_bar, std::size_t window_months = 240,
                            Execution execution = Execution::Parallel);

} // namespace robust_alloc

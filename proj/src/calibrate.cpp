#include "robust_alloc/calibrate.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace robust_alloc {

namespace {

constexpr std::array<const char*, 4> kColumns{"date", "rf_return", "bond_excess", "stock_excess"};

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_number(const std::string& text, const char* column, std::size_t line_no) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": bad value '" + text +
                                 "' in column " + column);
    }
    return value;
}

double mean_of(const std::vector<double>& v, std::size_t count) {
    double sum = 0.0;
    for (std::size_t i = 0; i < count; ++i) sum += v[i];
    return sum / static_cast<double>(count);
}

} // namespace

MonthId parse_month(const std::string& text) {
    int year = 0, month = 0;
    char dash = 0;
    std::istringstream ss(text);
    if (!(ss >> year >> dash >> month) || dash != '-' || month < 1 || month > 12) {
        throw std::runtime_error("bad month '" + text + "', expected YYYY-MM");
    }
    std::string rest;
    if (ss >> rest) throw std::runtime_error("bad month '" + text + "', expected YYYY-MM");
    return year * 12 + (month - 1);
}

std::string format_month(MonthId id) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", id / 12, id % 12 + 1);
    return buf;
}

void ReturnSeries::validate(std::size_t min_length) const {
    const std::size_t n = dates.size();
    if (rf_return.size() != n || bond_excess.size() != n || stock_excess.size() != n) {
        throw std::invalid_argument("series: column lengths differ");
    }
    if (n < min_length) {
        throw std::invalid_argument("series: need at least " + std::to_string(min_length) +
                                    " observations, got " + std::to_string(n));
    }
    if (!(delta > 0.0)) throw std::invalid_argument("series: delta must be positive");
    for (std::size_t i = 1; i < n; ++i) {
        if (dates[i] != dates[i - 1] + 1) {
            throw std::invalid_argument("series: dates must be consecutive months, break at " +
                                        format_month(dates[i]));
        }
    }
}

ReturnSeries ReturnSeries::slice(std::size_t first, std::size_t count) const {
    if (first + count > size()) throw std::out_of_range("series: slice beyond end");
    auto cut = [&](const auto& v) {
        return std::decay_t<decltype(v)>(v.begin() + static_cast<std::ptrdiff_t>(first),
                                         v.begin() + static_cast<std::ptrdiff_t>(first + count));
    };
    return {cut(dates), cut(rf_return), cut(bond_excess), cut(stock_excess), delta};
}

ReturnSeries read_return_series(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty data file");
    const auto header = split_csv(line);
    std::array<std::size_t, 4> index{};
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
        const auto it = std::find(header.begin(), header.end(), kColumns[c]);
        if (it == header.end()) throw std::runtime_error(std::string("missing column: ") + kColumns[c]);
        index[c] = static_cast<std::size_t>(it - header.begin());
    }

    ReturnSeries series;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != header.size()) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(header.size()) + " fields");
        }
        series.dates.push_back(parse_month(fields[index[0]]));
        series.rf_return.push_back(parse_number(fields[index[1]], kColumns[1], line_no));
        series.bond_excess.push_back(parse_number(fields[index[2]], kColumns[2], line_no));
        series.stock_excess.push_back(parse_number(fields[index[3]], kColumns[3], line_no));
    }
    series.delta = 1.0 / 12.0;
    series.validate(2);
    return series;
}

void write_return_series(std::ostream& out, const ReturnSeries& series) {
    out << "date,rf_return,bond_excess,stock_excess\n";
    char buf[128];
    for (std::size_t i = 0; i < series.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g\n", format_month(series.dates[i]).c_str(),
                      series.rf_return[i], series.bond_excess[i], series.stock_excess[i]);
        out << buf;
    }
}

CalibrationResult estimate_reference(const ReturnSeries& series, double T_bar) {
    series.validate();
    if (!(T_bar > 0.0)) throw std::invalid_argument("calibrate: T_bar must be positive");
    const double delta = series.delta;
    const std::size_t m = series.size() - 1;
    const double dm = static_cast<double>(m);

    // Regress the short-rate change on the per-period risk-free return.
    std::vector<double> x(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = series.rf_return[i];
        y[i] = series.short_rate(i + 1) - series.short_rate(i);
    }
    const double x_mean = mean_of(x, m);
    const double y_mean = mean_of(y, m);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (x[i] - x_mean) * (x[i] - x_mean);
        sxy += (x[i] - x_mean) * (y[i] - y_mean);
        syy += (y[i] - y_mean) * (y[i] - y_mean);
    }
    if (!(sxx > std::numeric_limits<double>::min()) ||
        sxx <= 1e-24 * std::max(1.0, x_mean * x_mean) * dm) {
        throw std::invalid_argument("calibrate: degenerate regressor (constant risk-free return)");
    }

    CalibrationResult out;
    auto& reg = out.regression;
    reg.sample_size = m;
    reg.beta = sxy / sxx;
    reg.alpha = y_mean - reg.beta * x_mean;

    std::vector<double> residual(m);
    double sse = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        residual[i] = y[i] - reg.alpha - reg.beta * x[i];
        sse += residual[i] * residual[i];
    }
    const double s2 = sse / (dm - 2.0);
    reg.residual_sd = std::sqrt(s2);
    reg.se_beta = std::sqrt(s2 / sxx);
    reg.se_alpha = std::sqrt(s2 * (1.0 / dm + x_mean * x_mean / sxx));
    reg.cov_alpha_beta = -x_mean * s2 / sxx;

    auto flag = [&](std::string why) {
        out.valid = false;
        out.flags.push_back(std::move(why));
    };

    auto& ref = out.reference;
    ref.kappa = -reg.beta;
    ref.sigma_r = reg.residual_sd / std::sqrt(delta);

    const double bond_mean = mean_of(series.bond_excess, m);
    const double stock_mean = mean_of(series.stock_excess, m);
    double stock_ss = 0.0, bond_ss = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double ds = series.stock_excess[i] - stock_mean;
        const double db = series.bond_excess[i] - bond_mean;
        stock_ss += ds * ds;
        bond_ss += db * db;
        cross += residual[i] * ds;
    }
    ref.lambda_S = stock_mean / delta;
    ref.sigma_S = std::sqrt(stock_ss / (dm - 1.0)) / std::sqrt(delta);
    ref.rho = (sse > 0.0 && stock_ss > 0.0) ? cross / std::sqrt(sse * stock_ss) : 0.0;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (ref.kappa > 0.0) {
        ref.r_bar = reg.alpha / (ref.kappa * delta);
        const double b = duration(ref.kappa, T_bar);
        ref.lambda0_B = bond_mean / (b * delta);
    } else {
        ref.r_bar = nan;
        ref.lambda0_B = nan;
        flag("kappa <= 0: mean reversion not identified");
    }

    if (reg.residual_sd <= 1e-9 * std::sqrt(syy / (dm - 1.0))) {
        flag("sigma_r = 0: short-rate changes are an exact linear function of the rate");
    }
    if (!(ref.sigma_S > 0.0)) flag("sigma_S = 0: constant stock excess return");
    if (ref.kappa > 0.0 && !(ref.lambda0_B > 0.0)) flag("lambda0_B <= 0: non-positive bond premium");
    if (!(ref.lambda_S > 0.0)) flag("lambda_S <= 0: non-positive stock premium");

    auto& se = out.errors;
    se.kappa = reg.se_beta;
    se.sigma_r = ref.sigma_r / std::sqrt(2.0 * (dm - 2.0));
    se.lambda_S = std::sqrt(stock_ss / (dm - 1.0)) / std::sqrt(dm) / delta;
    se.sigma_S = ref.sigma_S / std::sqrt(2.0 * (dm - 1.0));
    se.rho = (1.0 - ref.rho * ref.rho) / std::sqrt(dm);
    if (ref.kappa > 0.0) {
        const double da = -1.0 / (reg.beta * delta);
        const double db = reg.alpha / (reg.beta * reg.beta * delta);
        se.r_bar = std::sqrt(std::max(0.0, da * da * reg.se_alpha * reg.se_alpha +
                                               db * db * reg.se_beta * reg.se_beta +
                                               2.0 * da * db * reg.cov_alpha_beta));
        const double k = ref.kappa;
        const double b = duration(k, T_bar);
        const double db_dk = T_bar * std::exp(-k * T_bar) / k - b / k;
        const double from_mean = std::sqrt(bond_ss / (dm - 1.0)) / std::sqrt(dm) / (b * delta);
        const double from_kappa = ref.lambda0_B * std::abs(db_dk) / b * se.kappa;
        se.lambda0_B = std::hypot(from_mean, from_kappa);
    } else {
        se.r_bar = se.lambda0_B = nan;
    }
    return out;
}

ReturnSeries generate_synthetic(const ReferenceScenario& reference, double T_bar, std::size_t n,
                                double delta, std::uint64_t seed, MonthId start) {
    reference.validate();
    if (n < 2) throw std::invalid_argument("synthetic: need n >= 2");
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    const double b = duration(reference.kappa, T_bar);
    const double sqrt_delta = std::sqrt(delta);
    const double rho_perp = std::sqrt(1.0 - reference.rho * reference.rho);
    const double mu_B = b * reference.lambda0_B * delta;
    const double mu_S = reference.lambda_S * delta;

    ReturnSeries series;
    series.delta = delta;
    double r = reference.r_bar;
    for (std::size_t i = 0; i < n; ++i) {
        const double z1 = normal(engine);
        const double z2 = normal(engine);
        const double eps1 = reference.sigma_r * sqrt_delta * z1;
        const double eps2 = reference.sigma_S * sqrt_delta * (reference.rho * z1 + rho_perp * z2);
        series.dates.push_back(start + static_cast<MonthId>(i));
        series.rf_return.push_back(r * delta);
        series.bond_excess.push_back(mu_B - b * eps1);
        series.stock_excess.push_back(mu_S + eps2);
        r += reference.kappa * (reference.r_bar - r) * delta + eps1;
    }
    return series;
}

BandEstimate estimate_bands(const ReturnSeries& series, double T_bar, std::size_t window_months,
                            Execution execution) {
    if (window_months < 24) throw std::invalid_argument("bands: window must be >= 24 months");
    if (series.size() < window_months) {
        throw std::invalid_argument("bands: series shorter than the window");
    }
    BandEstimate out;
    out.window_months = window_months;
    out.full_sample = estimate_reference(series, T_bar);
    if (!out.full_sample.valid) {
        out.valid = false;
        out.flags.push_back("full-sample estimate invalid");
    }

    const std::size_t windows = series.size() - window_months + 1;
    std::vector<std::optional<RollingPoint>> points(windows);
    auto run_window = [&](std::size_t k) {
        try {
            const auto est = estimate_reference(series.slice(k, window_months), T_bar);
            if (!est.valid) return;
            points[k] = RollingPoint{series.dates[k + window_months - 1], est.reference.sigma_r,
                                     est.reference.lambda_S, est.reference.sigma_S, est.reference.rho};
        } catch (const std::invalid_argument&) {
        }
    };
    const auto count = static_cast<std::int64_t>(windows);
    if (execution == Execution::Serial) {
        for (std::int64_t k = 0; k < count; ++k) run_window(static_cast<std::size_t>(k));
    } else {
#pragma omp parallel for schedule(static)
        for (std::int64_t k = 0; k < count; ++k) run_window(static_cast<std::size_t>(k));
    }

    for (const auto& p : points) {
        if (p) {
            out.trajectory.push_back(*p);
        } else {
            ++out.skipped_windows;
        }
    }
    if (out.trajectory.empty()) {
        out.valid = false;
        out.flags.push_back("no valid estimation window");
        return out;
    }

    auto& bands = out.bands;
    const auto& first = out.trajectory.front();
    bands.lambda0_B = out.full_sample.reference.lambda0_B;
    bands.sigma_r_lo = bands.sigma_r_hi = first.sigma_r;
    bands.lambda_S_lo = bands.lambda_S_hi = first.lambda_S;
    bands.sigma_S_lo = bands.sigma_S_hi = first.sigma_S;
    bands.rho_lo = bands.rho_hi = first.rho;
    for (const auto& p : out.trajectory) {
        bands.sigma_r_lo = std::min(bands.sigma_r_lo, p.sigma_r);
        bands.sigma_r_hi = std::max(bands.sigma_r_hi, p.sigma_r);
        bands.lambda_S_lo = std::min(bands.lambda_S_lo, p.lambda_S);
        bands.lambda_S_hi = std::max(bands.lambda_S_hi, p.lambda_S);
        bands.sigma_S_lo = std::min(bands.sigma_S_lo, p.sigma_S);
        bands.sigma_S_hi = std::max(bands.sigma_S_hi, p.sigma_S);
        bands.rho_lo = std::min(bands.rho_lo, p.rho);
        bands.rho_hi = std::max(bands.rho_hi, p.rho);
    }
    // A single window gives a point; otherwise the correlation band must contain 0.
    if (out.trajectory.size() > 1 && (bands.rho_lo > 0.0 || bands.rho_hi < 0.0)) {
        bands.rho_lo = std::min(bands.rho_lo, 0.0);
        bands.rho_hi = std::max(bands.rho_hi, 0.0);
        out.rho_band_widened = true;
    }
    try {
        bands.validate();
    } catch (const std::invalid_argument& e) {
        out.valid = false;
        out.flags.push_back(e.what());
    }
    return out;
}

} // namespace robust_alloc

#include "robust_alloc/params.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <vector>

namespace robust_alloc {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

const std::vector<std::string>& required_keys() {
    static const std::vector<std::string> keys{
        "kappa",       "r_bar",       "sigma_r",    "lambda0_B",  "lambda_S",
        "sigma_S",     "rho",         "lambda_S_lo", "lambda_S_hi", "sigma_r_lo",
        "sigma_r_hi",  "sigma_S_lo",  "sigma_S_hi", "rho_lo",     "rho_hi"};
    return keys;
}

const std::set<std::string>& optional_keys() {
    static const std::set<std::string> keys{"gamma", "T",  "T_bar", "W0", "r0", "rho_hat_override",
                                            "sigma_r_hat_override"};
    return keys;
}

} // namespace

void ParameterSet::validate() const {
    reference.validate();
    bands.validate();
    investor.validate();
    if (reference.lambda0_B != bands.lambda0_B) {
        throw ParameterError("lambda0_B differs between reference and bands");
    }
}

ParameterSet read_parameters(std::istream& in) {
    std::map<std::string, double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParameterError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string text = trim(line.substr(eq + 1));
        const bool known = optional_keys().count(key) > 0 ||
                           std::find(required_keys().begin(), required_keys().end(), key) !=
                               required_keys().end();
        if (!known) throw ParameterError("unknown key: " + key);
        if (values.count(key)) throw ParameterError("duplicate key: " + key);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
            throw ParameterError("bad value for " + key + ": '" + text + "'");
        }
        values[key] = v;
    }
    for (const auto& key : required_keys()) {
        if (!values.count(key)) throw ParameterError("missing key: " + key);
    }
    auto get = [&](const std::string& key, double fallback) {
        const auto it = values.find(key);
        return it == values.end() ? fallback : it->second;
    };

    ParameterSet p;
    p.reference = {values["kappa"],     values["r_bar"],   values["sigma_r"], values["lambda0_B"],
                   values["lambda_S"],  values["sigma_S"], values["rho"]};
    p.bands.lambda0_B = values["lambda0_B"];
    p.bands.lambda_S_lo = values["lambda_S_lo"];
    p.bands.lambda_S_hi = values["lambda_S_hi"];
    p.bands.sigma_r_lo = values["sigma_r_lo"];
    p.bands.sigma_r_hi = values["sigma_r_hi"];
    p.bands.sigma_S_lo = values["sigma_S_lo"];
    p.bands.sigma_S_hi = values["sigma_S_hi"];
    p.bands.rho_lo = values["rho_lo"];
    p.bands.rho_hi = values["rho_hi"];
    p.investor = {get("gamma", 2.0), get("T", 10.0), get("T_bar", 20.0), get("W0", 1.0),
                  get("r0", p.reference.r_bar)};
    if (values.count("rho_hat_override")) p.rho_hat_override = values["rho_hat_override"];
    if (values.count("sigma_r_hat_override")) p.sigma_r_hat_override = values["sigma_r_hat_override"];
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ParameterError(e.what());
    }
    return p;
}

ParameterSet read_parameters_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open parameter file: " + path);
    return read_parameters(in);
}

void write_parameters(std::ostream& out, const ParameterSet& p) {
    auto put = [&](const char* key, double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << key << " = " << buf << '\n';
    };
    out << "# reference scenario\n";
    put("kappa", p.reference.kappa);
    put("r_bar", p.reference.r_bar);
    put("sigma_r", p.reference.sigma_r);
    put("lambda0_B", p.reference.lambda0_B);
    put("lambda_S", p.reference.lambda_S);
    put("sigma_S", p.reference.sigma_S);
    put("rho", p.reference.rho);
    out << "# ambiguity bands\n";
    put("lambda_S_lo", p.bands.lambda_S_lo);
    put("lambda_S_hi", p.bands.lambda_S_hi);
    put("sigma_r_lo", p.bands.sigma_r_lo);
    put("sigma_r_hi", p.bands.sigma_r_hi);
    put("sigma_S_lo", p.bands.sigma_S_lo);
    put("sigma_S_hi", p.bands.sigma_S_hi);
    put("rho_lo", p.bands.rho_lo);
    put("rho_hi", p.bands.rho_hi);
    out << "# investor\n";
    put("gamma", p.investor.gamma);
    put("T", p.investor.T);
    put("T_bar", p.investor.T_bar);
    put("W0", p.investor.W0);
    put("r0", p.investor.r0);
    if (p.rho_hat_override) put("rho_hat_override", *p.rho_hat_override);
    if (p.sigma_r_hat_override) put("sigma_r_hat_override", *p.sigma_r_hat_override);
}

} // namespace robust_alloc

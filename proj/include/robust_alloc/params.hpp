#pragma once

// Flat `key = value` parameter documents.  Keys are the field names of
// ReferenceScenario, AmbiguityBands and InvestorConfig; unknown or repeated
// keys are errors.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "robust_alloc/model.hpp"

namespace robust_alloc {

class ParameterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ParameterSet {
    ReferenceScenario reference;
    AmbiguityBands bands;
    InvestorConfig investor;
    /// Verification-only tampering of the candidate worst case.
    std::optional<double> rho_hat_override;
    std::optional<double> sigma_r_hat_override;

    double kappa() const { return reference.kappa; }
    double r_bar() const { return reference.r_bar; }
    void validate() const;
};

/// Reference and band keys are required.  Investor keys default to
/// gamma = 2, T = 10, T_bar = 20, W0 = 1, r0 = r_bar.
ParameterSet read_parameters(std::istream& in);
ParameterSet read_parameters_file(const std::string& path);
void write_parameters(std::ostream& out, const ParameterSet& params);

} // namespace robust_alloc

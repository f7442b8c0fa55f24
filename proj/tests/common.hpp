#pragma once

#include "robust_alloc/model.hpp"
#include "robust_alloc/params.hpp"

namespace test_data {

inline robust_alloc::ReferenceScenario reference() {
    return {0.336, 0.0381, 0.0262, 0.0086, 0.078, 0.1457, 0.0196};
}

inline robust_alloc::AmbiguityBands bands() {
    robust_alloc::AmbiguityBands b;
    b.lambda0_B = 0.0086;
    b.lambda_S_lo = 0.0124;
    b.lambda_S_hi = 0.1254;
    b.sigma_r_lo = 0.0111;
    b.sigma_r_hi = 0.0455;
    b.sigma_S_lo = 0.1191;
    b.sigma_S_hi = 0.1651;
    b.rho_lo = -0.1474;
    b.rho_hi = 0.1337;
    return b;
}

inline robust_alloc::InvestorConfig investor(double gamma = 2.0) {
    return {gamma, 10.0, 20.0, 1.0, 0.0381};
}

inline robust_alloc::ParameterSet params(double gamma = 2.0) {
    robust_alloc::ParameterSet p;
    p.reference = reference();
    p.bands = bands();
    p.investor = investor(gamma);
    return p;
}

inline constexpr double kKappa = 0.336;
inline constexpr double kRbar = 0.0381;

} // namespace test_data

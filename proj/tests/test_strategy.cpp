#include <doctest.h>

#include <cmath>
#include <random>
#include <tuple>

#include "common.hpp"
#include "robust_alloc/strategy.hpp"

using namespace robust_alloc;

namespace {

// Merton weights from the covariance matrix of the asset returns; independent
// of the closed-form expressions in the library.
PortfolioWeights merton_myopic(const ScenarioPoint& s, double Bbar) {
    const double a = Bbar * Bbar * s.sigma_r * s.sigma_r;
    const double c = -Bbar * s.sigma_r * s.sigma_S * s.rho;
    const double d = s.sigma_S * s.sigma_S;
    const double mu_B = Bbar * s.lambda_B;
    const double det = a * d - c * c;
    return {(d * mu_B - c * s.lambda_S) / det, (a * s.lambda_S - c * mu_B) / det};
}

} // namespace

TEST_CASE("worst-case correlation at the start and the horizon") {
    const auto bands = test_data::bands();
    const auto w0 = worst_case_correlation(bands, test_data::kKappa, 0.0);
    CHECK(w0.rho == -0.1474);
    CHECK(w0.kind == SpeculativeCase::BothAssets);
    CHECK(w0.candidates[1] == doctest::Approx(-2.516589861751152).epsilon(1e-12));
    CHECK(w0.candidates[2] == doctest::Approx(-0.39736312030763593).epsilon(1e-12));

    const auto w10 = worst_case_correlation(bands, test_data::kKappa, 10.0);
    CHECK(w10.rho == doctest::Approx(-0.056624215990650026).epsilon(1e-10));
    CHECK(w10.kind == SpeculativeCase::NoBondSpeculation);
}

TEST_CASE("case ties resolve to both assets") {
    auto bands = test_data::bands();
    const double bond = bands.lambda0_B / bands.sigma_r_hi;
    const double stock = bands.lambda_S_lo / bands.sigma_S_hi;
    bands.rho_lo = -stock / bond; // equals the NoStockInvestment candidate at t = 0
    const auto w = worst_case_correlation(bands, test_data::kKappa, 0.0);
    CHECK(w.kind == SpeculativeCase::BothAssets);
}

TEST_CASE("no stock investment case") {
    auto bands = test_data::bands();
    bands.lambda_S_lo = 0.001; // stock Sharpe far below bond Sharpe
    const auto w = worst_case_correlation(bands, test_data::kKappa, 0.0);
    CHECK(w.kind == SpeculativeCase::NoStockInvestment);
    auto inv = test_data::investor(1.0);
    const auto s = worst_case_scenario(bands, test_data::kKappa, 0.0);
    const auto d = weights_for_scenario(inv, s, test_data::kKappa, 0.0);
    CHECK(std::abs(d.myopic.pi_S) < 1e-12);
}

TEST_CASE("robust weights at t = 0") {
    const auto bands = test_data::bands();
    for (auto [gamma, pb, ps] : {std::tuple{1.0, 1.344827228355789, 0.2925201212882016},
                                 std::tuple{2.0, 1.1556290025371532, 0.1462600606441008},
                                 std::tuple{5.0, 1.042110067045972, 0.05850402425764032}}) {
        const auto d = optimal_weights(test_data::investor(gamma), bands, test_data::kKappa, 0.0);
        CHECK(d.total.pi_B == doctest::Approx(pb).epsilon(1e-12));
        CHECK(d.total.pi_S == doctest::Approx(ps).epsilon(1e-12));
    }
    const auto d = optimal_weights(test_data::investor(), bands, test_data::kKappa, 0.0);
    CHECK(d.hedge.pi_B == doctest::Approx(0.9664307767185175).epsilon(1e-13));
    CHECK((d.total.pi_B + d.total.pi_S + d.total.cash()) == doctest::Approx(1.0));
}

TEST_CASE("robust weights mid-horizon") {
    const auto d = optimal_weights(test_data::investor(), test_data::bands(), test_data::kKappa, 5.0);
    CHECK(d.total.pi_B == doctest::Approx(0.40946377742077317).epsilon(1e-11));
    CHECK(d.total.pi_S == doctest::Approx(0.2274560762139276).epsilon(1e-11));
    CHECK(std::abs(d.myopic.pi_B) < 1e-12);
}

TEST_CASE("weights neglecting ambiguity") {
    for (auto [gamma, pb, ps] : {std::tuple{1.0, 4.351028122434591, 3.7198929351980463},
                                 std::tuple{2.0, 2.6587294495765543, 1.8599464675990232},
                                 std::tuple{5.0, 1.6433502458617322, 0.7439785870396093}}) {
        const auto d = no_ambiguity_weights(test_data::investor(gamma), test_data::reference(), 0.0);
        CHECK(d.total.pi_B == doctest::Approx(pb).epsilon(1e-12));
        CHECK(d.total.pi_S == doctest::Approx(ps).epsilon(1e-12));
    }
}

TEST_CASE("myopic weights equal the covariance-matrix solution") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        ScenarioPoint s{0.001 + 0.01 * u(rng), 0.01 + 0.1 * u(rng), 0.005 + 0.05 * u(rng),
                        0.1 + 0.1 * u(rng), -0.9 + 1.8 * u(rng)};
        const double Bbar = 0.5 + 3.0 * u(rng);
        const auto a = myopic_portfolio(s, Bbar);
        const auto b = merton_myopic(s, Bbar);
        CHECK(a.pi_B == doctest::Approx(b.pi_B).epsilon(1e-10));
        CHECK(a.pi_S == doctest::Approx(b.pi_S).epsilon(1e-10));
    }
}

TEST_CASE("hedge part is independent of the bands and vanishes at T") {
    const auto inv = test_data::investor();
    const auto ref = test_data::reference();
    auto other = test_data::bands();
    other.sigma_r_hi = 0.08;
    other.rho_lo = -0.6;
    for (double t = 0.0; t <= 10.0; t += 0.5) {
        const auto a = optimal_weights(inv, test_data::bands(), ref.kappa, t).hedge;
        const auto b = optimal_weights(inv, other, ref.kappa, t).hedge;
        const auto c = no_ambiguity_weights(inv, ref, t).hedge;
        CHECK(a.pi_B == b.pi_B);
        CHECK(a.pi_B == c.pi_B);
        CHECK(a.pi_S == 0.0);
    }
    CHECK(optimal_weights(inv, test_data::bands(), ref.kappa, 10.0).hedge.pi_B == 0.0);
}

TEST_CASE("ambiguity makes the investor less aggressive at t = 0") {
    const auto ref = test_data::reference();
    for (double g = 1.0; g <= 10.0; g += 0.25) {
        const auto inv = test_data::investor(g);
        const auto r = optimal_weights(inv, test_data::bands(), ref.kappa, 0.0).total;
        const auto n = no_ambiguity_weights(inv, ref, 0.0).total;
        CHECK(r.pi_B <= n.pi_B);
        CHECK(r.pi_S <= n.pi_S);
        CHECK(r.cash() >= n.cash());
    }
}

TEST_CASE("decomposition with the ambiguity hedge adds up") {
    const auto inv = test_data::investor(3.0);
    const auto ref = test_data::reference();
    for (double t = 0.0; t <= 10.0; t += 1.0) {
        const auto d = optimal_weights(inv, test_data::bands(), ref.kappa, t, ref);
        const auto n = no_ambiguity_weights(inv, ref, t);
        const auto rebuilt = (1.0 / inv.gamma) * (n.myopic + d.ambiguity_hedge) +
                             ((inv.gamma - 1.0) / inv.gamma) * d.hedge;
        CHECK(rebuilt.pi_B == doctest::Approx(d.total.pi_B).epsilon(1e-12));
        CHECK(rebuilt.pi_S == doctest::Approx(d.total.pi_S).epsilon(1e-12));
        const auto ah = ambiguity_hedge(inv, test_data::bands(), ref, ref.kappa, t);
        CHECK(ah.pi_B == doctest::Approx(d.ambiguity_hedge.pi_B / inv.gamma).epsilon(1e-12));
    }
}

TEST_CASE("time outside the horizon is rejected") {
    const auto inv = test_data::investor();
    CHECK_THROWS_AS(optimal_weights(inv, test_data::bands(), 0.336, -0.1), std::domain_error);
    CHECK_THROWS_AS(optimal_weights(inv, test_data::bands(), 0.336, 10.1), std::domain_error);
}

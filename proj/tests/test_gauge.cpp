#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cdqa/gauge.hpp"
#include "cdqa/oracle.hpp"

using namespace cdqa;

TEST(PSpinCoefficients, AtLambdaZero) {
    const auto c = pspin_coefficients(0.0, 0.1, 4);
    ASSERT_TRUE(c.kappa.has_value());
    EXPECT_NEAR(*c.kappa, 31.25, 1e-12);
    EXPECT_NEAR(c.alpha, -3.125, 1e-12);
    EXPECT_EQ(c.beta, 0.0);
    // κ = 0.5·16·10 / (0.01·256), evaluated independently.
    EXPECT_NEAR(*c.kappa, 0.5 * 16.0 * 10.0 / (0.01 * 256.0), 1e-12);
}

TEST(PSpinCoefficients, AtLambdaOne) {
    for (double gam : {0.1, 0.7, 3.0}) {
        const auto c = pspin_coefficients(1.0, gam, 2);
        EXPECT_NEAR(*c.kappa, 0.5, 1e-15);
        EXPECT_EQ(c.beta, 0.0);
    }
}

TEST(PSpinCoefficients, BetaVanishesAtLambdaZero) {
    for (int n : {2, 5, 40})
        for (double gam : {0.05, 1.0}) EXPECT_EQ(pspin_coefficients(0.0, gam, n).beta, 0.0);
}

TEST(PSpinCoefficients, Invariants) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> lam(0.0, 1.0), gam(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        const double l = lam(rng), g = gam(rng);
        for (int n : {2, 3, 10, 100}) {
            const auto c = pspin_coefficients(l, g, n);
            EXPECT_GT(*c.kappa, 0.0);
            EXPECT_DOUBLE_EQ(c.alpha, -*c.kappa * g);
            EXPECT_DOUBLE_EQ(c.beta, *c.kappa * (1.0 - l) * l);
        }
    }
}

TEST(PSpinCoefficients, RejectsSmallN) {
    EXPECT_THROW(pspin_coefficients(0.5, 0.5, 1), DomainError);
    EXPECT_THROW(pspin_coefficients(0.5, 0.5, 0), DomainError);
}

TEST(PSpinCoefficients, KappaDecaysAsOneOverN) {
    const double ratio = *pspin_coefficients(0.5, 0.6, 100).kappa / *pspin_coefficients(0.5, 0.6, 50).kappa;
    EXPECT_NEAR(ratio, 0.5, 0.1);
    double prev = 0.0;
    for (int n : {200, 400, 800, 1600}) {
        const double r = *pspin_coefficients(0.5, 0.6, 2 * n).kappa / *pspin_coefficients(0.5, 0.6, n).kappa;
        EXPECT_GT(std::abs(prev - 0.5), std::abs(r - 0.5) - 1e-15);
        prev = r;
    }
    EXPECT_NEAR(prev, 0.5, 1e-3);
}

TEST(LandauZenerCoefficients, Examples) {
    auto c = lz_coefficients(0.0, 1.0, 0.1);
    EXPECT_NEAR(c.alpha, -0.05, 1e-15);
    EXPECT_EQ(c.beta, 0.0);
    EXPECT_FALSE(c.kappa.has_value());

    c = lz_coefficients(0.5, 0.5, 0.1);
    EXPECT_NEAR(c.alpha, -0.025 / 0.065, 1e-14);
    EXPECT_NEAR(c.beta, 0.0125 / 0.065, 1e-14);
    EXPECT_NEAR(c.alpha, -0.384615, 1e-6);
    EXPECT_NEAR(c.beta, 0.192308, 1e-6);

    for (double gam : {0.1, 2.0}) EXPECT_EQ(lz_coefficients(1.0, gam, 0.1).beta, 0.0);
}

TEST(LandauZenerCoefficients, DegeneratePoint) {
    EXPECT_THROW(lz_coefficients(0.0, 0.0, 0.1), DegeneratePointError);
    EXPECT_THROW(lz_coefficients(1.0, 0.7, 0.0), DegeneratePointError);
}

TEST(LandauZenerCoefficients, MinimizeTheAction) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> lam(0.0, 1.0), gam(0.05, 2.0);
    for (int i = 0; i < 10; ++i) {
        const double l = lam(rng), g = gam(rng), h = 0.1;
        const auto c = lz_coefficients(l, g, h);
        auto objective = [&](const Eigen::Vector2d& ab) { return oracle::lz_action_trace(l, g, h, ab[0], ab[1]); };
        const auto m = oracle::nelder_mead_2d(objective, Eigen::Vector2d(0.3, -0.2), 0.5);
        EXPECT_NEAR(m.x[0], c.alpha, 1e-6 * (1.0 + std::abs(c.alpha)));
        EXPECT_NEAR(m.x[1], c.beta, 1e-6 * (1.0 + std::abs(c.beta)));
    }
}

namespace {

template <class Coeff>
void expect_partials_match(Coeff&& coeff, const GaugePartials& p, double lam, double gam) {
    const double h = 1e-6;
    const auto lp = coeff(lam + h, gam), lm = coeff(lam - h, gam);
    const auto gp = coeff(lam, gam + h), gm = coeff(lam, gam - h);
    auto near = [](double fd, double an) { EXPECT_NEAR(fd, an, 1e-6 * (1.0 + std::abs(an))); };
    near((lp.alpha - lm.alpha) / (2 * h), p.alpha_lambda);
    near((lp.beta - lm.beta) / (2 * h), p.beta_lambda);
    near((gp.alpha - gm.alpha) / (2 * h), p.alpha_gamma);
    near((gp.beta - gm.beta) / (2 * h), p.beta_gamma);
}

}  // namespace

TEST(Partials, MatchFiniteDifferences) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> lam(0.01, 0.99), gam(0.05, 2.0);
    for (int i = 0; i < 50; ++i) {
        const double l = lam(rng), g = gam(rng);
        for (int n : {2, 7, 30})
            expect_partials_match([n](double a, double b) { return pspin_coefficients(a, b, n); },
                                  pspin_partials(l, g, n), l, g);
        expect_partials_match([](double a, double b) { return lz_coefficients(a, b, 0.1); }, lz_partials(l, g, 0.1),
                              l, g);
    }
}

TEST(CdDrive, VanishesAtEndpoints) {
    for (const ModelSpec model : {ModelSpec{PSpinModel{6}}, ModelSpec{LandauZenerModel{0.1}}}) {
        const GammaMode mode = std::holds_alternative<PSpinModel>(model) ? GammaMode::LinkedPSpin : GammaMode::LinkedLZ;
        const ScheduleSpec spec{3.0, mode, 0.1};
        EXPECT_EQ(cd_y_coefficient(0.0, spec, model), 0.0);
        EXPECT_EQ(cd_y_coefficient(3.0, spec, model), 0.0);
    }
}

TEST(CdDrive, ConstantGammaUsesAlphaOnly) {
    const ScheduleSpec spec{2.0, GammaMode::Constant, 0.1};
    const ModelSpec model = PSpinModel{5};
    for (double t : {0.1, 0.8, 1.5}) {
        const auto c = pspin_coefficients(lambda(t, spec), 0.1, 5);
        EXPECT_DOUBLE_EQ(cd_y_coefficient(t, spec, model), lambda_dot(t, spec) * c.alpha);
    }
}

TEST(CdDrive, AnalyticRatesMatchRichardsonDifferences) {
    std::mt19937 rng(9);
    for (const ModelSpec model : {ModelSpec{PSpinModel{4}}, ModelSpec{PSpinModel{30}}, ModelSpec{LandauZenerModel{0.1}}}) {
        const bool lz = std::holds_alternative<LandauZenerModel>(model);
        for (GammaMode mode : {GammaMode::Constant, lz ? GammaMode::LinkedLZ : GammaMode::LinkedPSpin}) {
            const ScheduleSpec spec{2.5, mode, lz ? 1.0 : 0.1};
            std::uniform_real_distribution<double> pick(0.0, 2.5);
            for (int i = 0; i < 30; ++i) {
                const double t = pick(rng);
                const auto a = cd_drive(t, spec, model);
                const auto f = cd_drive_finite_difference(t, spec, model);
                const double scale = 1.0 + std::abs(a.y_dot);
                EXPECT_NEAR(a.alpha_dot, f.alpha_dot, 1e-6 * (1.0 + std::abs(a.alpha_dot)));
                EXPECT_NEAR(a.beta_dot, f.beta_dot, 1e-6 * (1.0 + std::abs(a.beta_dot)));
                EXPECT_NEAR(a.y_dot, f.y_dot, 1e-6 * scale) << "t=" << t;
                EXPECT_EQ(a.y, f.y);
            }
            for (double t : {0.0, 2.5}) {
                const auto a = cd_drive(t, spec, model);
                const auto f = cd_drive_finite_difference(t, spec, model);
                EXPECT_NEAR(a.y_dot, f.y_dot, 1e-6 * (1.0 + std::abs(a.y_dot)));
            }
        }
    }
}

TEST(Stationarity, ClosedFormIsStationaryPointOfExplicitAction) {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> lam(0.0, 1.0), gam(0.05, 2.0);
    for (int n : {2, 3, 4}) {
        const oracle::FullSpaceOperators ops(n);
        for (int i = 0; i < 20; ++i) {
            const double l = lam(rng), g = gam(rng);
            const auto c = pspin_coefficients(l, g, n);
            const double s = oracle::action_trace(l, g, c.alpha, c.beta, ops);
            const double h = 1e-4;
            const double da = (oracle::action_trace(l, g, c.alpha + h, c.beta, ops) -
                               oracle::action_trace(l, g, c.alpha - h, c.beta, ops)) / (2 * h);
            const double db = (oracle::action_trace(l, g, c.alpha, c.beta + h, ops) -
                               oracle::action_trace(l, g, c.alpha, c.beta - h, ops)) / (2 * h);
            EXPECT_LT(std::abs(da), 1e-6 * std::abs(s)) << "N=" << n << " λ=" << l << " γ=" << g;
            EXPECT_LT(std::abs(db), 1e-6 * std::abs(s)) << "N=" << n << " λ=" << l << " γ=" << g;
        }
    }
}

#pragma once

// Oracle-backed self-checks run by `cdqa validate`.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cdqa/dynamics.hpp"
#include "cdqa/gauge.hpp"
#include "cdqa/oracle.hpp"

namespace cdqa::cli {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

using CoefficientProvider = std::function<GaugeCoefficients(double lam, double gam, int N)>;

struct ValidateOptions {
    std::vector<int> sizes{2, 3, 4};
    int random_points = 20;
    unsigned seed = 2024;
    CoefficientProvider coefficients = pspin_coefficients;
};

namespace detail {

inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct RandomPoint {
    double lam, gam;
};

inline std::vector<RandomPoint> random_points(int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> lam(0.0, 1.0), gam(0.05, 2.0);
    std::vector<RandomPoint> pts;
    for (int i = 0; i < count; ++i) {
        const double l = lam(rng);
        pts.push_back({l, gam(rng)});
    }
    return pts;
}

}  // namespace detail

/// Largest central-difference gradient of the explicit action at the
/// provided coefficients, relative to |S|.
inline double action_gradient_ratio(double lam, double gam, const GaugeCoefficients& c,
                                    const oracle::FullSpaceOperators& ops, double step = 1e-4) {
    const double s = oracle::action_trace(lam, gam, c.alpha, c.beta, ops);
    const double da = (oracle::action_trace(lam, gam, c.alpha + step, c.beta, ops) -
                       oracle::action_trace(lam, gam, c.alpha - step, c.beta, ops)) /
                      (2.0 * step);
    const double db = (oracle::action_trace(lam, gam, c.alpha, c.beta + step, ops) -
                       oracle::action_trace(lam, gam, c.alpha, c.beta - step, ops)) /
                      (2.0 * step);
    return std::max(std::abs(da), std::abs(db)) / std::abs(s);
}

inline std::vector<CheckResult> run_validation(const ValidateOptions& opt = {}) {
    std::vector<CheckResult> out;
    const auto points = detail::random_points(opt.random_points, opt.seed);
    IntegratorConfig cfg;
    cfg.method = IntegrationMethod::PiecewiseExponential;

    for (int n : opt.sizes) {
        const oracle::FullSpaceOperators full(n);
        const std::string tag = " N=" + std::to_string(n);

        {
            double worst = 0.0;
            for (Protocol p : {Protocol::TraditionalQA, Protocol::SingleParamCD, Protocol::TwoParamCD}) {
                const ProtocolSpec ps{p, Frame::Lab, PSpinModel{n}};
                const ScheduleSpec spec{1.0, default_gamma_mode(p, ps.model), 0.1};
                const auto sub = run_protocol(spec, ps, cfg);
                const auto ref = oracle::run_protocol_full(spec, ps, cfg);
                worst = std::max({worst, std::abs(sub.fidelity - ref.fidelity),
                                  std::abs(sub.residual_energy - ref.residual_energy)});
            }
            out.push_back({"subspace-equivalence" + tag, worst < 1e-8, "max |dF|,|dE| = " + detail::sci(worst)});
        }

        {
            double worst = 0.0;
            for (double tau : {1.0, 10.0}) {
                const ScheduleSpec spec{tau, GammaMode::LinkedPSpin, 0.1};
                const auto lab = run_protocol(spec, {Protocol::TwoParamCD, Frame::Lab, PSpinModel{n}}, cfg);
                const auto rot = run_protocol(spec, {Protocol::TwoParamCD, Frame::Rotated, PSpinModel{n}}, cfg);
                worst = std::max({worst, std::abs(lab.fidelity - rot.fidelity),
                                  std::abs(lab.residual_energy - rot.residual_energy)});
            }
            out.push_back({"frame-equivalence" + tag, worst < 1e-6, "max |dF|,|dE| = " + detail::sci(worst)});
        }

        {
            double worst = 0.0;
            for (const auto& pt : points)
                worst = std::max(worst, action_gradient_ratio(pt.lam, pt.gam, opt.coefficients(pt.lam, pt.gam, n), full));
            out.push_back({"action-stationarity" + tag, worst < 1e-6, "max |grad S|/|S| = " + detail::sci(worst)});
        }

        {
            double worst = 0.0;
            for (const auto& pt : points) {
                const auto c = opt.coefficients(pt.lam, pt.gam, n);
                for (auto [which, coef] : {std::pair{oracle::GaugeDirection::Lambda, c.alpha},
                                           std::pair{oracle::GaugeDirection::Gamma, c.beta}}) {
                    const auto a = oracle::hermitian_G_definition(pt.lam, pt.gam, coef, which, full);
                    const auto b = oracle::hermitian_G_expanded(pt.lam, pt.gam, coef, which, full);
                    worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
                }
            }
            out.push_back({"dual-path-G" + tag, worst < 1e-12, "max entry difference = " + detail::sci(worst)});
        }

        {
            double worst = 0.0;
            for (const auto& pt : points) {
                const auto c = opt.coefficients(pt.lam, pt.gam, n);
                const double s = oracle::action_trace(pt.lam, pt.gam, c.alpha, c.beta, full);
                const double closed = oracle::action_closed_form(pt.lam, pt.gam, c.alpha, c.beta, n);
                worst = std::max(worst, std::abs(s - closed) / std::abs(s));
            }
            out.push_back({"dual-path-action" + tag, worst < 1e-9, "max relative difference = " + detail::sci(worst)});
        }
    }

    {
        double worst = 0.0;
        for (const auto& pt : points) {
            const double h = 0.1;
            const auto c = lz_coefficients(pt.lam, pt.gam, h);
            for (auto [which, coef] : {std::pair{oracle::GaugeDirection::Lambda, c.alpha},
                                       std::pair{oracle::GaugeDirection::Gamma, c.beta}}) {
                const auto a = oracle::lz_hermitian_G_definition(pt.lam, pt.gam, h, coef, which);
                const auto b = oracle::lz_hermitian_G_expanded(pt.lam, pt.gam, h, coef, which);
                worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
            }
        }
        out.push_back({"dual-path-G landau-zener", worst < 1e-12, "max entry difference = " + detail::sci(worst)});
    }
    return out;
}

inline bool all_passed(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

inline void write_report(std::ostream& os, const std::vector<CheckResult>& checks) {
    for (const auto& c : checks) os << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  (" << c.detail << ")\n";
    int failed = 0;
    for (const auto& c : checks) failed += !c.passed;
    os << checks.size() - failed << " of " << checks.size() << " checks passed\n";
}

}  // namespace cdqa::cli

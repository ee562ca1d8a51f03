#pragma once

/// Variational gauge-potential coefficients for the uniform σʸ ansatz.
///
/// The approximate gauge potentials are A_λ = α Σσʸ and A_γ = β Σσʸ. The
/// counter-diabatic term they generate is Y(t) Σσʸ with Y = λ̇α + γ̇β.
/// Coefficients are functions of (λ, γ) only; the time dependence enters
/// through the schedule.

#include <cmath>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>

#include "cdqa/schedules.hpp"

namespace cdqa {

/// p = 3 p-spin model on N spins.
struct PSpinModel {
    int N = 4;
};

/// Single-spin Landau–Zener model with longitudinal field h.
struct LandauZenerModel {
    double h = 0.1;
};

using ModelSpec = std::variant<PSpinModel, LandauZenerModel>;

class DegeneratePointError : public DomainError {
public:
    using DomainError::DomainError;
};

struct GaugeCoefficients {
    double alpha = 0.0;
    double beta = 0.0;
    std::optional<double> kappa;  // p-spin only
};

/// ∂α/∂λ, ∂α/∂γ, ∂β/∂λ, ∂β/∂γ.
struct GaugePartials {
    double alpha_lambda = 0.0;
    double alpha_gamma = 0.0;
    double beta_lambda = 0.0;
    double beta_gamma = 0.0;
};

namespace detail {

struct PSpinTerms {
    double num;    // N²(3N−2)/2
    double a;      // N⁴
    double c;      // 27N² − 66N + 40
    double denom;  // (1−λ)²γ²N⁴ + λ²c
};

inline PSpinTerms pspin_terms(double lam, double gam, int N) {
    if (N < 2) throw DomainError("p-spin: N must be at least 2, got " + std::to_string(N));
    const double n = N;
    const double a = n * n * n * n;
    const double c = 27.0 * n * n - 66.0 * n + 40.0;
    const double om = 1.0 - lam;
    return {0.5 * n * n * (3.0 * n - 2.0), a, c, om * om * gam * gam * a + lam * lam * c};
}

inline double lz_denominator(double lam, double gam, double h) {
    const double om = 1.0 - lam;
    const double d = lam * lam * h * h + gam * gam * om * om;
    if (!(d > 0.0))
        throw DegeneratePointError("landau-zener: λ²h² + γ²(1−λ)² vanishes at λ = " +
                                   std::to_string(lam) + ", γ = " + std::to_string(gam));
    return d;
}

}  // namespace detail

inline GaugeCoefficients pspin_coefficients(double lam, double gam, int N) {
    const auto k = detail::pspin_terms(lam, gam, N);
    const double kappa = k.num / k.denom;
    return {-kappa * gam, kappa * (1.0 - lam) * lam, kappa};
}

inline GaugePartials pspin_partials(double lam, double gam, int N) {
    const auto k = detail::pspin_terms(lam, gam, N);
    const double om = 1.0 - lam;
    const double kappa = k.num / k.denom;
    const double scale = -k.num / (k.denom * k.denom);
    const double kappa_l = scale * (-2.0 * om * gam * gam * k.a + 2.0 * lam * k.c);
    const double kappa_g = scale * (2.0 * om * om * gam * k.a);
    return {-kappa_l * gam, -kappa_g * gam - kappa, kappa_l * om * lam + kappa * (1.0 - 2.0 * lam),
            kappa_g * om * lam};
}

inline GaugeCoefficients lz_coefficients(double lam, double gam, double h) {
    const double d = detail::lz_denominator(lam, gam, h);
    return {-0.5 * h * gam / d, 0.5 * (1.0 - lam) * lam * h / d, std::nullopt};
}

inline GaugePartials lz_partials(double lam, double gam, double h) {
    const double d = detail::lz_denominator(lam, gam, h);
    const double om = 1.0 - lam;
    const double d_l = 2.0 * lam * h * h - 2.0 * gam * gam * om;
    const double d_g = 2.0 * gam * om * om;
    const double d2 = 2.0 * d * d;
    return {h * gam * d_l / d2, -0.5 * h / d + h * gam * d_g / d2,
            0.5 * h * (1.0 - 2.0 * lam) / d - h * om * lam * d_l / d2, -h * om * lam * d_g / d2};
}

inline GaugeCoefficients coefficients(double lam, double gam, const ModelSpec& model) {
    return std::visit(
        [&](const auto& m) -> GaugeCoefficients {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, PSpinModel>)
                return pspin_coefficients(lam, gam, m.N);
            else
                return lz_coefficients(lam, gam, m.h);
        },
        model);
}

inline GaugePartials partials(double lam, double gam, const ModelSpec& model) {
    return std::visit(
        [&](const auto& m) -> GaugePartials {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, PSpinModel>)
                return pspin_partials(lam, gam, m.N);
            else
                return lz_partials(lam, gam, m.h);
        },
        model);
}

/// The σʸ drive Y(t) = λ̇α + γ̇β together with its time derivative.
struct CdDrive {
    double alpha = 0.0;
    double beta = 0.0;
    double alpha_dot = 0.0;
    double beta_dot = 0.0;
    double y = 0.0;
    double y_dot = 0.0;
};

inline CdDrive cd_drive(const ScheduleState& s, const ModelSpec& model) {
    const auto g = coefficients(s.lambda, s.gamma, model);
    const auto p = partials(s.lambda, s.gamma, model);
    CdDrive d;
    d.alpha = g.alpha;
    d.beta = g.beta;
    d.alpha_dot = p.alpha_lambda * s.lambda_dot + p.alpha_gamma * s.gamma_dot;
    d.beta_dot = p.beta_lambda * s.lambda_dot + p.beta_gamma * s.gamma_dot;
    d.y = s.lambda_dot * g.alpha + s.gamma_dot * g.beta;
    d.y_dot = s.lambda_ddot * g.alpha + s.lambda_dot * d.alpha_dot + s.gamma_ddot * g.beta +
              s.gamma_dot * d.beta_dot;
    return d;
}

inline CdDrive cd_drive(double t, const ScheduleSpec& spec, const ModelSpec& model) {
    return cd_drive(evaluate(t, spec), model);
}

inline double cd_y_coefficient(double t, const ScheduleSpec& spec, const ModelSpec& model) {
    const auto s = evaluate(t, spec);
    const auto g = coefficients(s.lambda, s.gamma, model);
    return s.lambda_dot * g.alpha + s.gamma_dot * g.beta;
}

/// Cross-check for the analytic rates: Richardson-extrapolated finite
/// differences of α(t), β(t) and Y(t) with steps h = 10⁻⁵τ and h/2.
/// Near the ends of [0, τ] the stencil switches to one-sided second-order
/// differences so every evaluation stays inside the schedule's domain.
inline CdDrive cd_drive_finite_difference(double t, const ScheduleSpec& spec,
                                          const ModelSpec& model) {
    const double tau = spec.total_time;
    const double h = 1e-5 * tau;
    auto sample = [&](double at) {
        const auto s = evaluate(at, spec);
        const auto g = coefficients(s.lambda, s.gamma, model);
        struct {
            double a, b, y;
        } r{g.alpha, g.beta, s.lambda_dot * g.alpha + s.gamma_dot * g.beta};
        return r;
    };
    auto diff = [&](double step) {
        struct {
            double a, b, y;
        } r;
        if (t - 2.0 * step >= 0.0 && t + 2.0 * step <= tau) {
            const auto p = sample(t + step), m = sample(t - step);
            r = {(p.a - m.a) / (2 * step), (p.b - m.b) / (2 * step), (p.y - m.y) / (2 * step)};
        } else {
            const double dir = (t - 2.0 * step < 0.0) ? 1.0 : -1.0;
            const auto f0 = sample(t), f1 = sample(t + dir * step), f2 = sample(t + 2 * dir * step);
            auto one_sided = [&](double x0, double x1, double x2) {
                return dir * (-3.0 * x0 + 4.0 * x1 - x2) / (2.0 * step);
            };
            r = {one_sided(f0.a, f1.a, f2.a), one_sided(f0.b, f1.b, f2.b),
                 one_sided(f0.y, f1.y, f2.y)};
        }
        return r;
    };
    const auto coarse = diff(h);
    const auto fine = diff(0.5 * h);
    const auto here = sample(t);
    CdDrive d;
    d.alpha = here.a;
    d.beta = here.b;
    d.y = here.y;
    d.alpha_dot = (4.0 * fine.a - coarse.a) / 3.0;
    d.beta_dot = (4.0 * fine.b - coarse.b) / 3.0;
    d.y_dot = (4.0 * fine.y - coarse.y) / 3.0;
    return d;
}

}  // namespace cdqa

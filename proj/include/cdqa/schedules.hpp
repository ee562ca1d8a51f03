#pragma once

/// Annealing schedules λ(t), γ(t) and their first and second time derivatives.
///
/// λ(t) = sin²[(π/2) sin²(πt/2τ)] runs from 0 to 1 with vanishing first and
/// second derivatives at both ends. γ(t) is either held constant or linked
/// to λ(t).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cdqa {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class GammaMode {
    Constant,     ///< γ(t) = γ_init
    LinkedPSpin,  ///< γ(t) = γ_init + λ(t)
    LinkedLZ,     ///< γ(t) = 1 − λ(t)
};

inline const char* to_string(GammaMode m) {
    switch (m) {
    case GammaMode::Constant: return "constant";
    case GammaMode::LinkedPSpin: return "linked-pspin";
    case GammaMode::LinkedLZ: return "linked-lz";
    }
    return "?";
}

struct ScheduleSpec {
    double total_time = 1.0;
    GammaMode gamma_mode = GammaMode::Constant;
    double gamma_init = 0.1;

    /// Throws DomainError when the invariants do not hold.
    void validate() const {
        if (!(total_time > 0.0) || !std::isfinite(total_time))
            throw DomainError("schedule: total time must be positive and finite");
        if (gamma_mode != GammaMode::LinkedLZ && (gamma_init == 0.0 || !std::isfinite(gamma_init)))
            throw DomainError("schedule: gamma_init must be finite and nonzero");
    }
};

namespace detail {

inline constexpr double kTimeSlack = 1e-12;

/// Clamps t into [0, τ] allowing a relative round-off slack; throws beyond it.
inline double clamp_time(double t, const ScheduleSpec& spec) {
    const double tau = spec.total_time;
    const double slack = kTimeSlack * tau;
    if (!(t >= -slack && t <= tau + slack))
        throw DomainError("schedule: t = " + std::to_string(t) + " outside [0, " +
                          std::to_string(tau) + "]");
    if (t < 0.0) return 0.0;
    if (t > tau) return tau;
    return t;
}

struct Phases {
    double v;  // πt/2τ
    double u;  // (π/2) sin²v
};

inline Phases phases(double t, double tau) {
    using std::numbers::pi;
    const double v = pi * t / (2.0 * tau);
    const double s = std::sin(v);
    return {v, 0.5 * pi * s * s};
}

// λ(s) and its derivatives for s ≤ τ/2. The schedule satisfies
// λ(τ − s) = 1 − λ(s), so the upper half is evaluated from the mirrored
// argument to keep 1 − λ, λ̇ and λ̈ accurate as t → τ.
inline double lambda_lower(double s, double tau) {
    const auto [v, u] = phases(s, tau);
    const double r = std::sin(u);
    return r * r;
}

inline double lambda_dot_lower(double s, double tau) {
    using std::numbers::pi;
    const auto [v, u] = phases(s, tau);
    return pi * pi / (4.0 * tau) * std::sin(2.0 * u) * std::sin(2.0 * v);
}

inline double lambda_ddot_lower(double s, double tau) {
    using std::numbers::pi;
    const auto [v, u] = phases(s, tau);
    const double c = pi * pi / (4.0 * tau);
    const double s2v = std::sin(2.0 * v);
    // d/dt [c sin2u sin2v] with u̇ = c sin2v and v̇ = π/2τ
    return c * (2.0 * std::cos(2.0 * u) * c * s2v * s2v +
                std::sin(2.0 * u) * std::cos(2.0 * v) * pi / tau);
}

}  // namespace detail

inline double lambda(double t, const ScheduleSpec& spec) {
    t = detail::clamp_time(t, spec);
    const double tau = spec.total_time;
    if (t == 0.0) return 0.0;
    if (t == tau) return 1.0;
    if (t <= 0.5 * tau) return detail::lambda_lower(t, tau);
    return 1.0 - detail::lambda_lower(tau - t, tau);
}

/// 1 − λ(t), accurate to full relative precision near t = τ.
inline double one_minus_lambda(double t, const ScheduleSpec& spec) {
    t = detail::clamp_time(t, spec);
    const double tau = spec.total_time;
    if (t == 0.0) return 1.0;
    if (t == tau) return 0.0;
    if (t >= 0.5 * tau) return detail::lambda_lower(tau - t, tau);
    return 1.0 - detail::lambda_lower(t, tau);
}

inline double lambda_dot(double t, const ScheduleSpec& spec) {
    t = detail::clamp_time(t, spec);
    const double tau = spec.total_time;
    if (t == 0.0 || t == tau) return 0.0;
    return detail::lambda_dot_lower(std::min(t, tau - t), tau);
}

inline double lambda_ddot(double t, const ScheduleSpec& spec) {
    t = detail::clamp_time(t, spec);
    const double tau = spec.total_time;
    if (t == 0.0 || t == tau) return 0.0;
    if (t <= 0.5 * tau) return detail::lambda_ddot_lower(t, tau);
    return -detail::lambda_ddot_lower(tau - t, tau);
}

inline double gamma(double t, const ScheduleSpec& spec) {
    switch (spec.gamma_mode) {
    case GammaMode::Constant:
        detail::clamp_time(t, spec);
        return spec.gamma_init;
    case GammaMode::LinkedPSpin: return spec.gamma_init + lambda(t, spec);
    case GammaMode::LinkedLZ: return one_minus_lambda(t, spec);
    }
    return spec.gamma_init;
}

inline double gamma_dot(double t, const ScheduleSpec& spec) {
    switch (spec.gamma_mode) {
    case GammaMode::Constant:
        detail::clamp_time(t, spec);
        return 0.0;
    case GammaMode::LinkedPSpin: return lambda_dot(t, spec);
    case GammaMode::LinkedLZ: return -lambda_dot(t, spec);
    }
    return 0.0;
}

inline double gamma_ddot(double t, const ScheduleSpec& spec) {
    switch (spec.gamma_mode) {
    case GammaMode::Constant:
        detail::clamp_time(t, spec);
        return 0.0;
    case GammaMode::LinkedPSpin: return lambda_ddot(t, spec);
    case GammaMode::LinkedLZ: return -lambda_ddot(t, spec);
    }
    return 0.0;
}

/// All schedule values at one instant.
struct ScheduleState {
    double lambda, one_minus_lambda, lambda_dot, lambda_ddot;
    double gamma, gamma_dot, gamma_ddot;
};

inline ScheduleState evaluate(double t, const ScheduleSpec& spec) {
    return {lambda(t, spec), one_minus_lambda(t, spec), lambda_dot(t, spec), lambda_ddot(t, spec),
            gamma(t, spec),  gamma_dot(t, spec),        gamma_ddot(t, spec)};
}

}  // namespace cdqa

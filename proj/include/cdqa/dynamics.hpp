#pragma once

/// Time-dependent Schrödinger evolution i∂ₜψ = H(t)ψ on a fixed time grid.
///
/// A builder is any callable t ↦ Hamiltonian where the Hamiltonian is a dense
/// or sparse Eigen matrix or a BoundHamiltonian.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "cdqa/linear_operator.hpp"
#include "cdqa/metrics.hpp"
#include "cdqa/model.hpp"
#include "cdqa/state.hpp"

namespace cdqa {

enum class IntegrationMethod {
    FixedStepRK4,
    PiecewiseExponential,  ///< exp(−i H(t + dt/2) dt) per step; exactly unitary
};

inline const char* to_string(IntegrationMethod m) {
    return m == IntegrationMethod::FixedStepRK4 ? "rk4" : "expm";
}

struct IntegratorConfig {
    IntegrationMethod method = IntegrationMethod::FixedStepRK4;
    std::optional<long> steps;  ///< unset: chosen from τ and the Hamiltonian's norm
    double norm_tolerance = 1e-6;
    bool convergence_check = false;
    double convergence_tolerance = 1e-6;
};

struct EvolveDiagnostics {
    long steps = 0;
    double norm_drift = 0.0;
    std::optional<double> convergence_delta;  ///< max population change on doubling the steps
};

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, EvolveDiagnostics d)
        : std::runtime_error(what), diagnostics(d) {}
    EvolveDiagnostics diagnostics;
};

struct EvolveResult {
    StateVector state;
    EvolveDiagnostics diagnostics;
    std::vector<StateVector> samples;  ///< states at the requested sample times
};

struct GroundState {
    double energy = 0.0;
    StateVector state;
    double gap = 0.0;
    bool degenerate = false;
};

inline constexpr double kDegenerateGap = 1e-10;

/// Lowest eigenpair with the phase fixed so the largest-magnitude amplitude
/// (first one in basis order on ties) is real and positive.
template <class Op>
GroundState ground_state(const Op& h, Basis basis) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ops::dense(h));
    if (es.info() != Eigen::Success) throw std::runtime_error("ground_state: eigensolver failed");
    GroundState g;
    g.energy = es.eigenvalues()[0];
    g.gap = es.eigenvalues().size() > 1 ? es.eigenvalues()[1] - es.eigenvalues()[0] : 0.0;
    g.degenerate = es.eigenvalues().size() > 1 && g.gap < kDegenerateGap;
    Eigen::VectorXcd v = es.eigenvectors().col(0);
    const double largest = v.cwiseAbs().maxCoeff();
    Eigen::Index pivot = 0;
    while (std::abs(v[pivot]) < largest * (1.0 - 1e-12)) ++pivot;
    v *= std::conj(v[pivot]) / std::abs(v[pivot]);
    v[pivot] = std::abs(v[pivot]);
    g.state = {basis, v.normalized()};
    return g;
}

namespace detail {

inline constexpr long kRk4MinSteps = 20000;
inline constexpr double kRk4StepsPerRadian = 50.0;
inline constexpr long kExpmMinSteps = 4000;
// Frozen-Hamiltonian steps are exact for constant H, so their count tracks the
// schedule's duration rather than ‖H‖τ.
inline constexpr double kExpmStepsPerTime = 2.0;
inline constexpr double kExpmStepsPerEnergyTime = 0.1;
inline constexpr int kNormProbeSamples = 257;

template <class Builder>
double max_norm_bound(Builder& builder, double tau) {
    double bound = 0.0;
    for (int i = 0; i < kNormProbeSamples; ++i) {
        const double t = tau * static_cast<double>(i) / (kNormProbeSamples - 1);
        bound = std::max(bound, ops::norm_bound(builder(t)));
    }
    return bound;
}

inline std::vector<double> segment_boundaries(double tau, const std::vector<double>& samples) {
    std::vector<double> b{0.0};
    for (double s : samples) {
        if (!(s >= 0.0 && s <= tau))
            throw std::invalid_argument("evolve: sample time " + std::to_string(s) + " outside [0, τ]");
        if (s > b.back()) b.push_back(s);
    }
    if (b.back() < tau) b.push_back(tau);
    return b;
}

inline void check_finite(const Eigen::VectorXcd& psi, long step) {
    if (!psi.allFinite())
        throw IntegrationError("evolve: non-finite amplitude at step " + std::to_string(step),
                               {step, std::numeric_limits<double>::infinity(), std::nullopt});
}

/// One fixed-grid pass. Returns the final state; fills `samples` in order.
template <class Builder>
Eigen::VectorXcd integrate(Builder& builder, const Eigen::VectorXcd& psi0, double tau, long steps,
                           IntegrationMethod method, const std::vector<double>& sample_times,
                           std::vector<Eigen::VectorXcd>& samples, long& steps_taken) {
    const auto bounds = segment_boundaries(tau, sample_times);
    std::vector<double> pending(sample_times);
    std::sort(pending.begin(), pending.end());
    std::size_t next_sample = 0;
    samples.assign(pending.size(), Eigen::VectorXcd());
    auto record = [&](double t, const Eigen::VectorXcd& psi) {
        while (next_sample < pending.size() && pending[next_sample] <= t) samples[next_sample++] = psi;
    };

    Eigen::VectorXcd psi = psi0;
    record(0.0, psi);
    steps_taken = 0;
    Eigen::VectorXcd k1, k2, k3, k4, tmp;
    const cplx minus_i(0.0, -1.0);
    for (std::size_t seg = 1; seg < bounds.size(); ++seg) {
        const double t0 = bounds[seg - 1];
        const double len = bounds[seg] - t0;
        const long n = std::max(1L, std::lround(static_cast<double>(steps) * len / tau));
        const double dt = len / static_cast<double>(n);
        if (method == IntegrationMethod::FixedStepRK4) {
            auto h_start = builder(t0);
            for (long j = 0; j < n; ++j) {
                const double t = t0 + static_cast<double>(j) * dt;
                const double t_end = (j + 1 == n) ? bounds[seg] : t + dt;
                const auto h_mid = builder(t + 0.5 * dt);
                auto h_end = builder(t_end);
                ops::apply(h_start, psi, k1);
                k1 *= minus_i;
                tmp = psi + (0.5 * dt) * k1;
                ops::apply(h_mid, tmp, k2);
                k2 *= minus_i;
                tmp = psi + (0.5 * dt) * k2;
                ops::apply(h_mid, tmp, k3);
                k3 *= minus_i;
                tmp = psi + dt * k3;
                ops::apply(h_end, tmp, k4);
                k4 *= minus_i;
                psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                h_start = std::move(h_end);
                if (((steps_taken + j) & 1023) == 0) check_finite(psi, steps_taken + j);
            }
        } else {
            for (long j = 0; j < n; ++j) {
                const double t = t0 + (static_cast<double>(j) + 0.5) * dt;
                ops::propagate(builder(t), dt, psi);
                if (((steps_taken + j) & 1023) == 0) check_finite(psi, steps_taken + j);
            }
        }
        steps_taken += n;
        record(bounds[seg], psi);
    }
    check_finite(psi, steps_taken);
    return psi;
}

}  // namespace detail

/// Step count used when the configuration leaves it unset. RK4 keeps ‖H‖·dt
/// at 1/50 or below; the exponential integrator scales with τ.
template <class Builder>
long auto_steps(Builder&& builder, double tau, IntegrationMethod method) {
    const double norm = detail::max_norm_bound(builder, tau);
    if (method == IntegrationMethod::FixedStepRK4)
        return std::max(detail::kRk4MinSteps,
                        static_cast<long>(std::ceil(detail::kRk4StepsPerRadian * tau * norm)));
    const double rate = detail::kExpmStepsPerTime + detail::kExpmStepsPerEnergyTime * norm;
    return std::max(detail::kExpmMinSteps, static_cast<long>(std::ceil(rate * tau)));
}

template <class Builder>
EvolveResult evolve(Builder&& builder, const StateVector& psi0, double tau, const IntegratorConfig& cfg,
                    const std::vector<double>& sample_times = {}) {
    if (!(tau > 0.0)) throw DomainError("evolve: τ must be positive");
    if (cfg.steps && *cfg.steps < 100) throw DomainError("evolve: explicit step count must be at least 100");
    if (std::abs(psi0.norm() - 1.0) > cfg.norm_tolerance)
        throw DomainError("evolve: initial state is not normalized");

    const long steps = cfg.steps ? *cfg.steps : auto_steps(builder, tau, cfg.method);

    EvolveResult result;
    std::vector<Eigen::VectorXcd> samples;
    long taken = 0;
    Eigen::VectorXcd psi =
        detail::integrate(builder, psi0.amplitudes, tau, steps, cfg.method, sample_times, samples, taken);

    if (cfg.convergence_check) {
        std::vector<Eigen::VectorXcd> fine_samples;
        long fine_taken = 0;
        Eigen::VectorXcd fine = detail::integrate(builder, psi0.amplitudes, tau, 2 * steps, cfg.method,
                                                  sample_times, fine_samples, fine_taken);
        const double delta = (fine.cwiseAbs2() - psi.cwiseAbs2()).cwiseAbs().maxCoeff();
        result.diagnostics.convergence_delta = delta;
        psi = std::move(fine);
        samples = std::move(fine_samples);
        taken = fine_taken;
    }

    result.diagnostics.steps = taken;
    double drift = std::abs(psi.norm() - 1.0);
    for (const auto& s : samples) drift = std::max(drift, std::abs(s.norm() - 1.0));
    result.diagnostics.norm_drift = drift;
    result.state = {psi0.basis, std::move(psi)};
    for (auto& s : samples) result.samples.push_back({psi0.basis, std::move(s)});

    if (drift > cfg.norm_tolerance)
        throw IntegrationError("evolve: norm drift " + std::to_string(drift) + " exceeds tolerance",
                               result.diagnostics);
    if (result.diagnostics.convergence_delta &&
        *result.diagnostics.convergence_delta > cfg.convergence_tolerance)
        throw IntegrationError("evolve: step doubling changed populations by " +
                                   std::to_string(*result.diagnostics.convergence_delta),
                               result.diagnostics);
    return result;
}

struct RunOptions {
    double success_probability = kDefaultSuccessProbability;
    int spectrum_samples = 0;  ///< 0 disables the occupation trace; otherwise ≥ 2
};

inline Basis basis_for(const ModelSpec& model) {
    if (const auto* p = std::get_if<PSpinModel>(&model)) return Basis::symmetric(p->N);
    return Basis::two_level();
}

inline std::vector<double> uniform_samples(double tau, int count) {
    std::vector<double> t(count);
    for (int i = 0; i < count; ++i)
        t[i] = (i + 1 == count) ? tau : tau * static_cast<double>(i) / (count - 1);
    return t;
}

/// Prepares the ground state of H(0), evolves to τ and scores the result
/// against the problem Hamiltonian.
template <class Ops>
RunResult run_protocol_on(const Ops& operators, Basis basis, const ScheduleSpec& spec,
                          const ProtocolSpec& protocol, const IntegratorConfig& cfg,
                          const RunOptions& options = {}) {
    protocol.validate(spec);
    if (options.spectrum_samples == 1 || options.spectrum_samples < 0)
        throw DomainError("run_protocol: spectrum needs at least two samples");
    auto builder = [&](double t) { return bind(operators, hamiltonian(t, spec, protocol)); };

    const auto initial = ground_state(builder(0.0), basis);
    const auto problem = bind(operators, problem_coefficients(protocol.model));
    const auto target = ground_state(problem, basis);

    std::vector<double> samples;
    if (options.spectrum_samples >= 2) samples = uniform_samples(spec.total_time, options.spectrum_samples);
    const auto evolved = evolve(builder, initial.state, spec.total_time, cfg, samples);

    RunResult r;
    r.fidelity = fidelity(evolved.state, target.state);
    r.residual_energy = residual_energy(evolved.state, problem, target.energy);
    r.tts = tts(spec.total_time, r.fidelity, options.success_probability);
    r.diagnostics.steps = evolved.diagnostics.steps;
    r.diagnostics.norm_drift = evolved.diagnostics.norm_drift;
    r.diagnostics.convergence_delta = evolved.diagnostics.convergence_delta;
    r.diagnostics.initial_degenerate = initial.degenerate;
    if (!samples.empty()) r.occupations = spectrum_occupations(builder, evolved.samples, samples);
    return r;
}

inline RunResult run_protocol(const ScheduleSpec& spec, const ProtocolSpec& protocol,
                              const IntegratorConfig& cfg, const RunOptions& options = {}) {
    protocol.validate(spec);
    const auto operators = operators_for(protocol.model);
    return run_protocol_on(operators, basis_for(protocol.model), spec, protocol, cfg, options);
}

}  // namespace cdqa

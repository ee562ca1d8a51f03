#pragma once

/// Figures of merit for an annealing run.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "cdqa/linear_operator.hpp"
#include "cdqa/state.hpp"

namespace cdqa {

inline constexpr double kDefaultSuccessProbability = 0.99;

/// |⟨ψ|φ⟩|².
inline double fidelity(const StateVector& psi, const StateVector& phi) {
    if (!(psi.basis == phi.basis))
        throw BasisMismatchError("fidelity: basis " + to_string(psi.basis) + " vs " +
                                 to_string(phi.basis));
    return std::norm(phi.amplitudes.dot(psi.amplitudes));
}

/// ⟨ψ|H_p|ψ⟩ − E₀.
template <class Op>
double residual_energy(const StateVector& psi, const Op& problem, double ground_energy) {
    Eigen::VectorXcd h_psi;
    ops::apply(problem, psi.amplitudes, h_psi);
    return psi.amplitudes.dot(h_psi).real() - ground_energy;
}

/// Time to reach the solution with probability p_r by repeating runs of
/// length τ that each succeed with probability F. A single run already
/// suffices once F ≥ p_r, so the result never drops below τ.
inline double tts(double tau, double fid, double p_r = kDefaultSuccessProbability) {
    if (fid >= p_r || fid >= 1.0) return tau;
    if (fid <= 0.0) return std::numeric_limits<double>::infinity();
    const double denom = std::log1p(-fid);
    if (denom == 0.0) return std::numeric_limits<double>::infinity();
    return tau * std::log1p(-p_r) / denom;
}

struct OccupationSample {
    double t = 0.0;
    Eigen::VectorXd eigenvalues;    // ascending
    Eigen::VectorXd probabilities;  // |⟨e_n(t)|ψ(t)⟩|²
};

/// Instantaneous spectrum of H(t) and the weight of ψ(t) on each eigenstate.
template <class Builder>
std::vector<OccupationSample> spectrum_occupations(Builder&& builder,
                                                   const std::vector<StateVector>& trajectory,
                                                   const std::vector<double>& sample_times) {
    if (trajectory.size() != sample_times.size())
        throw std::invalid_argument("spectrum_occupations: trajectory and sample times differ in length");
    std::vector<OccupationSample> out;
    out.reserve(sample_times.size());
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        const double t = sample_times[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ops::dense(builder(t)));
        OccupationSample s;
        s.t = t;
        s.eigenvalues = es.eigenvalues();
        s.probabilities = (es.eigenvectors().adjoint() * trajectory[i].amplitudes).cwiseAbs2();
        out.push_back(std::move(s));
    }
    return out;
}

struct RunDiagnostics {
    long steps = 0;
    double norm_drift = 0.0;
    std::optional<double> convergence_delta;
    bool initial_degenerate = false;
};

struct RunResult {
    double fidelity = 0.0;
    double residual_energy = 0.0;
    double tts = 0.0;
    std::optional<std::vector<OccupationSample>> occupations;
    RunDiagnostics diagnostics;
};

}  // namespace cdqa

#pragma once

/// Hamiltonians for traditional annealing and counter-diabatic protocols.
///
/// Every Hamiltonian handled here is a uniform Pauli sum
///
///     H = x Σσˣ + y Σσʸ + z Σσᶻ + zzz Σ_{i<j<k} σᶻσᶻσᶻ
///
/// so builders produce a SpinCoefficients value and an operator set
/// (collective, two-level, or the full 2^N space in oracle.hpp) turns it
/// into a matrix or applies it to a state.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <variant>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "cdqa/chebyshev.hpp"
#include "cdqa/gauge.hpp"
#include "cdqa/schedules.hpp"

namespace cdqa {

using cplx = std::complex<double>;

struct SpinCoefficients {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double zzz = 0.0;  // multiplies Σ_{i<j<k} σᶻᵢσᶻⱼσᶻₖ
};

/// Collective spin operators on the maximal-spin (S = N/2) sector.
///
/// Basis index k = 0..N carries Σσᶻ = N − 2k, so k = 0 is the all-up state.
/// Off-diagonal elements follow the Condon–Shortley convention, which makes
/// basis state k the normalized symmetric sum of product states with k
/// down spins.
class CollectiveOperators {
public:
    explicit CollectiveOperators(int n) : n_(n) {
        if (n < 1) throw DomainError("collective operators: N must be positive");
        const Eigen::Index d = n + 1;
        const double s = 0.5 * n;
        ladder_.resize(d - 1);
        for (Eigen::Index k = 0; k + 1 < d; ++k) {
            const double m = s - static_cast<double>(k + 1);
            ladder_[k] = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
        }
        mz_.resize(d);
        mz3_.resize(d);
        three_body_.resize(d);
        for (Eigen::Index k = 0; k < d; ++k) {
            const double m = n - 2.0 * static_cast<double>(k);
            mz_[k] = m;
            mz3_[k] = m * m * m;
            // M³ = (3N − 2) M + 6 Σ_{i<j<k} σᶻσᶻσᶻ on every σᶻ product state
            three_body_[k] = (mz3_[k] - (3.0 * n - 2.0) * m) / 6.0;
        }
    }

    int size() const { return n_; }
    Eigen::Index dim() const { return n_ + 1; }

    /// ⟨k|Σσˣ|k+1⟩.
    const Eigen::VectorXd& ladder() const { return ladder_; }
    const Eigen::VectorXd& mz_diagonal() const { return mz_; }
    const Eigen::VectorXd& mz3_diagonal() const { return mz3_; }
    const Eigen::VectorXd& three_body_diagonal() const { return three_body_; }

    Eigen::MatrixXcd mx() const { return dense({1.0, 0.0, 0.0, 0.0}); }
    Eigen::MatrixXcd my() const { return dense({0.0, 1.0, 0.0, 0.0}); }
    Eigen::MatrixXcd mz() const { return dense({0.0, 0.0, 1.0, 0.0}); }
    Eigen::MatrixXcd mz3() const { return mz3_.cast<cplx>().asDiagonal(); }
    Eigen::MatrixXcd three_body() const { return dense({0.0, 0.0, 0.0, 1.0}); }

    Eigen::MatrixXcd dense(const SpinCoefficients& c) const {
        const Eigen::Index d = dim();
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
        const cplx upper(c.x, -c.y);
        for (Eigen::Index k = 0; k + 1 < d; ++k) {
            h(k, k + 1) = upper * ladder_[k];
            h(k + 1, k) = std::conj(upper) * ladder_[k];
        }
        for (Eigen::Index k = 0; k < d; ++k) h(k, k) = c.z * mz_[k] + c.zzz * three_body_[k];
        return h;
    }

    void apply(const SpinCoefficients& c, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
        const Eigen::Index d = dim();
        out.resize(d);
        const cplx upper(c.x, -c.y);
        const cplx lower = std::conj(upper);
        for (Eigen::Index k = 0; k < d; ++k) {
            cplx acc = (c.z * mz_[k] + c.zzz * three_body_[k]) * in[k];
            if (k + 1 < d) acc += upper * ladder_[k] * in[k + 1];
            if (k > 0) acc += lower * ladder_[k - 1] * in[k - 1];
            out[k] = acc;
        }
    }

    /// Upper bound on the spectral norm.
    double norm_bound(const SpinCoefficients& c) const {
        return std::hypot(c.x, c.y) * n_ + (c.z * mz_ + c.zzz * three_body_).cwiseAbs().maxCoeff();
    }

    /// ψ ← exp(−i H dt) ψ, with the spectrum bracketed by Gershgorin discs.
    void propagate(const SpinCoefficients& c, double dt, Eigen::VectorXcd& psi) const {
        const Eigen::Index d = dim();
        const double r = std::hypot(c.x, c.y);
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (Eigen::Index k = 0; k < d; ++k) {
            double radius = 0.0;
            if (k > 0) radius += r * ladder_[k - 1];
            if (k + 1 < d) radius += r * ladder_[k];
            const double diag = c.z * mz_[k] + c.zzz * three_body_[k];
            lo = std::min(lo, diag - radius);
            hi = std::max(hi, diag + radius);
        }
        chebyshev_propagate([&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) { apply(c, in, out); },
                            lo, hi, dt, psi);
    }

private:
    int n_;
    Eigen::VectorXd ladder_, mz_, mz3_, three_body_;
};

inline CollectiveOperators build_collective_operators(int n) {
    if (n < 2 || n > 10000)
        throw DomainError("collective operators: N must lie in [2, 10000], got " + std::to_string(n));
    return CollectiveOperators(n);
}

/// Single spin-1/2: Σσ reduces to the Pauli matrices.
inline CollectiveOperators two_level_operators() { return CollectiveOperators(1); }

inline CollectiveOperators operators_for(const ModelSpec& model) {
    if (const auto* p = std::get_if<PSpinModel>(&model)) return build_collective_operators(p->N);
    return two_level_operators();
}

/// A coefficient set paired with the operators it acts through.
template <class Ops>
struct BoundHamiltonian {
    const Ops* ops;
    SpinCoefficients coefficients;

    void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
        ops->apply(coefficients, in, out);
    }
    Eigen::MatrixXcd dense() const { return ops->dense(coefficients); }
    double norm_bound() const { return ops->norm_bound(coefficients); }
    void propagate(double dt, Eigen::VectorXcd& psi) const { ops->propagate(coefficients, dt, psi); }
};

template <class Ops>
BoundHamiltonian<Ops> bind(const Ops& ops, const SpinCoefficients& c) {
    return {&ops, c};
}

enum class Protocol { TraditionalQA, SingleParamCD, TwoParamCD };
enum class Frame { Lab, Rotated };

inline const char* to_string(Protocol p) {
    switch (p) {
    case Protocol::TraditionalQA: return "qa";
    case Protocol::SingleParamCD: return "cd1";
    case Protocol::TwoParamCD: return "cd2";
    }
    return "?";
}

inline const char* to_string(Frame f) { return f == Frame::Lab ? "lab" : "rotated"; }

struct ProtocolSpec {
    Protocol protocol = Protocol::TraditionalQA;
    Frame frame = Frame::Lab;
    ModelSpec model = PSpinModel{};

    /// Traditional annealing has no σʸ term to rotate away.
    Frame effective_frame() const {
        return protocol == Protocol::TraditionalQA ? Frame::Lab : frame;
    }

    void validate(const ScheduleSpec& spec) const {
        spec.validate();
        if (const auto* p = std::get_if<PSpinModel>(&model); p && p->N < 2)
            throw DomainError("p-spin: N must be at least 2");
        if (protocol == Protocol::SingleParamCD && spec.gamma_mode != GammaMode::Constant)
            throw DomainError("single-parameter CD requires a constant transverse field");
        if (protocol == Protocol::TwoParamCD && spec.gamma_mode == GammaMode::Constant)
            throw DomainError("two-parameter CD requires a linked transverse field");
    }
};

/// The schedule mode each protocol runs with.
inline GammaMode default_gamma_mode(Protocol protocol, const ModelSpec& model) {
    if (protocol != Protocol::TwoParamCD) return GammaMode::Constant;
    return std::holds_alternative<PSpinModel>(model) ? GammaMode::LinkedPSpin : GammaMode::LinkedLZ;
}

/// Threshold on X² + Y² below which the rotation angle is undefined.
inline constexpr double kFrameDegeneracy = 1e-12;

struct FrameCoefficients {
    double x = 0.0, y = 0.0;
    double x_dot = 0.0, y_dot = 0.0;
    double theta = 0.0, theta_dot = 0.0;
    bool degenerate = false;
};

inline FrameCoefficients frame_coefficients(double t, const ScheduleSpec& spec,
                                            const ModelSpec& model) {
    const auto s = evaluate(t, spec);
    const auto drive = cd_drive(s, model);
    FrameCoefficients f;
    f.x = -s.one_minus_lambda * s.gamma;
    f.x_dot = s.lambda_dot * s.gamma - s.one_minus_lambda * s.gamma_dot;
    f.y = drive.y;
    f.y_dot = drive.y_dot;
    f.theta = std::atan2(f.y, f.x);
    const double r2 = f.x * f.x + f.y * f.y;
    f.degenerate = r2 < kFrameDegeneracy;
    // X and Y keep full relative precision down to t = τ, so the quotient is
    // only dropped where it is 0/0.
    f.theta_dot = r2 > std::numeric_limits<double>::min() ? (f.x * f.y_dot - f.y * f.x_dot) / r2 : 0.0;
    return f;
}

namespace detail {

/// λ-weighted problem-Hamiltonian part: −λ N (Σσᶻ/N)³ for the p-spin model
/// written through Σ_{i<j<k} and Σσᶻ, or −λhσᶻ for Landau–Zener.
inline SpinCoefficients problem_part(double lam, const ModelSpec& model) {
    if (const auto* p = std::get_if<PSpinModel>(&model)) {
        const double n = p->N;
        return {0.0, 0.0, -lam * (3.0 * n - 2.0) / (n * n), -6.0 * lam / (n * n)};
    }
    return {0.0, 0.0, -lam * std::get<LandauZenerModel>(model).h, 0.0};
}

}  // namespace detail

inline SpinCoefficients problem_coefficients(const ModelSpec& model) {
    return detail::problem_part(1.0, model);
}

/// Coefficients of the Hamiltonian a protocol evolves under at time t.
inline SpinCoefficients hamiltonian(double t, const ScheduleSpec& spec, const ProtocolSpec& protocol) {
    const auto s = evaluate(t, spec);
    SpinCoefficients c = detail::problem_part(s.lambda, protocol.model);
    if (protocol.protocol == Protocol::TraditionalQA) {
        c.x = -s.one_minus_lambda * s.gamma;
        return c;
    }
    if (protocol.frame == Frame::Lab) {
        c.x = -s.one_minus_lambda * s.gamma;
        c.y = cd_drive(s, protocol.model).y;
        return c;
    }
    const auto f = frame_coefficients(t, spec, protocol.model);
    c.x = std::hypot(f.x, f.y);
    c.z -= 0.5 * f.theta_dot;
    return c;
}

// Dense builders.

inline Eigen::MatrixXcd h0_pspin(double t, const ScheduleSpec& spec, const CollectiveOperators& ops) {
    const double lam = lambda(t, spec);
    const double n = ops.size();
    return -one_minus_lambda(t, spec) * gamma(t, spec) * ops.mx() - (lam / (n * n)) * ops.mz3();
}

inline Eigen::MatrixXcd h_lab_cd(double t, const ScheduleSpec& spec, const ProtocolSpec& protocol,
                                 const CollectiveOperators& ops) {
    if (protocol.protocol == Protocol::TraditionalQA)
        throw DomainError("h_lab_cd: protocol has no counter-diabatic term");
    ProtocolSpec lab = protocol;
    lab.frame = Frame::Lab;
    return ops.dense(hamiltonian(t, spec, lab));
}

inline Eigen::MatrixXcd h_rotated(double t, const ScheduleSpec& spec, const CollectiveOperators& ops) {
    const ModelSpec model = PSpinModel{ops.size()};
    const auto f = frame_coefficients(t, spec, model);
    const double lam = lambda(t, spec);
    const double n = ops.size();
    const double x_coeff = std::hypot(f.x, f.y);
    const double z_coeff = 0.5 * f.theta_dot + lam * (3.0 * n - 2.0) / (n * n);
    return x_coeff * ops.mx() - lam * (6.0 / (n * n)) * ops.three_body() - z_coeff * ops.mz();
}

/// Landau–Zener Hamiltonian in the protocol's frame.
inline Eigen::Matrix2cd h_lz(double t, const ScheduleSpec& spec, const ProtocolSpec& protocol) {
    if (!std::holds_alternative<LandauZenerModel>(protocol.model))
        throw DomainError("h_lz: protocol model is not Landau-Zener");
    static const CollectiveOperators spin_half = two_level_operators();
    return spin_half.dense(hamiltonian(t, spec, protocol));
}

}  // namespace cdqa

#pragma once

/// Brute-force reference implementations on the full 2^N spin space.
///
/// Basis state s has spin i pointing down when bit i of s is set, so s = 0
/// is the all-up state. Operators are built site by site from Pauli
/// matrices, independently of the collective-spin matrix elements.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cdqa/chebyshev.hpp"
#include "cdqa/dynamics.hpp"
#include "cdqa/gauge.hpp"
#include "cdqa/linear_operator.hpp"
#include "cdqa/metrics.hpp"
#include "cdqa/model.hpp"
#include "cdqa/schedules.hpp"
#include "cdqa/state.hpp"

namespace cdqa::oracle {

using ops::SparseMatrix;

class OracleSizeError : public DomainError {
public:
    using DomainError::DomainError;
};

inline constexpr int kMaxStaticN = 12;
inline constexpr int kMaxDynamicN = 10;
inline constexpr int kMaxActionN = 8;

inline void require_size(int n, int limit, const char* what) {
    if (n < 1 || n > limit)
        throw OracleSizeError(std::string(what) + ": N must lie in [1, " + std::to_string(limit) +
                              "], got " + std::to_string(n));
}

class FullSpaceOperators {
public:
    explicit FullSpaceOperators(int n) : n_(n) {
        require_size(n, kMaxStaticN, "full-space operators");
        const Eigen::Index d = dim();
        z_.resize(d);
        three_body_.resize(d);
        for (Eigen::Index s = 0; s < d; ++s) {
            double total = 0.0, triple = 0.0;
            for (int i = 0; i < n; ++i) total += site_z(s, i);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    for (int k = j + 1; k < n; ++k) triple += site_z(s, i) * site_z(s, j) * site_z(s, k);
            z_[s] = total;
            three_body_[s] = triple;
        }
        mx_ = SparseMatrix(d, d);
        my_ = SparseMatrix(d, d);
        for (int i = 0; i < n; ++i) {
            mx_ += sigma_x(i);
            my_ += sigma_y(i);
        }
        mz_ = diagonal(z_);
        mz3_ = mz_ * mz_ * mz_;
        t_ = diagonal(three_body_);
        norms_ = {ops::norm_bound(mx_), ops::norm_bound(my_), ops::norm_bound(mz_), ops::norm_bound(mz3_),
                  ops::norm_bound(t_)};
    }

    int size() const { return n_; }
    Eigen::Index dim() const { return Eigen::Index{1} << n_; }

    /// +1 for spin up, −1 for spin down.
    static double site_z(Eigen::Index s, int site) { return (s >> site) & 1 ? -1.0 : 1.0; }

    SparseMatrix sigma_x(int site) const { return site_operator(site, 'x'); }
    SparseMatrix sigma_y(int site) const { return site_operator(site, 'y'); }
    SparseMatrix sigma_z(int site) const { return site_operator(site, 'z'); }

    const SparseMatrix& mx() const { return mx_; }
    const SparseMatrix& my() const { return my_; }
    const SparseMatrix& mz() const { return mz_; }
    const SparseMatrix& mz3() const { return mz3_; }
    /// Σ_{i<j<k} σᶻσᶻσᶻ summed over all C(N,3) triples.
    const SparseMatrix& three_body() const { return t_; }

    double norm_mx() const { return norms_[0]; }
    double norm_my() const { return norms_[1]; }
    double norm_mz() const { return norms_[2]; }
    double norm_mz3() const { return norms_[3]; }
    double norm_three_body() const { return norms_[4]; }

    /// Σ_{i<j<k} (σˣσᶻσᶻ + σᶻσˣσᶻ + σᶻσᶻσˣ).
    SparseMatrix three_body_mixed() const {
        const Eigen::Index d = dim();
        std::vector<Eigen::Triplet<cplx>> entries;
        for (Eigen::Index s = 0; s < d; ++s)
            for (int i = 0; i < n_; ++i)
                for (int j = i + 1; j < n_; ++j)
                    for (int k = j + 1; k < n_; ++k) {
                        const int sites[3] = {i, j, k};
                        for (int flip = 0; flip < 3; ++flip) {
                            double w = 1.0;
                            for (int other = 0; other < 3; ++other)
                                if (other != flip) w *= site_z(s, sites[other]);
                            entries.emplace_back(s ^ (Eigen::Index{1} << sites[flip]), s, w);
                        }
                    }
        SparseMatrix m(d, d);
        m.setFromTriplets(entries.begin(), entries.end());
        return m;
    }

    /// Total spin S² = (Mx² + My² + Mz²)/4.
    SparseMatrix casimir() const {
        SparseMatrix c = mx_ * mx_ + my_ * my_ + mz_ * mz_;
        return 0.25 * c;
    }

    /// Columns are the symmetric states with k down spins, k = 0..N.
    Eigen::MatrixXcd dicke_isometry() const {
        const Eigen::Index d = dim();
        Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(d, n_ + 1);
        for (Eigen::Index s = 0; s < d; ++s) v(s, popcount(s)) = 1.0;
        for (int k = 0; k <= n_; ++k) v.col(k).normalize();
        return v;
    }

    // Pauli-sum interface shared with CollectiveOperators.

    void apply(const SpinCoefficients& c, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
        out.noalias() = c.x * (mx_ * in);
        out.noalias() += c.y * (my_ * in);
        out += ((c.z * z_ + c.zzz * three_body_).cast<cplx>().array() * in.array()).matrix();
    }

    Eigen::MatrixXcd dense(const SpinCoefficients& c) const {
        Eigen::MatrixXcd h = c.x * Eigen::MatrixXcd(mx_) + c.y * Eigen::MatrixXcd(my_);
        h.diagonal() += (c.z * z_ + c.zzz * three_body_).cast<cplx>();
        return h;
    }

    double norm_bound(const SpinCoefficients& c) const {
        return std::hypot(c.x, c.y) * n_ + (c.z * z_ + c.zzz * three_body_).cwiseAbs().maxCoeff();
    }

    void propagate(const SpinCoefficients& c, double dt, Eigen::VectorXcd& psi) const {
        const Eigen::VectorXd diag = c.z * z_ + c.zzz * three_body_;
        const double radius = std::hypot(c.x, c.y) * n_;
        chebyshev_propagate([&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) { apply(c, in, out); },
                            diag.minCoeff() - radius, diag.maxCoeff() + radius, dt, psi);
    }

private:
    static int popcount(Eigen::Index s) {
        int c = 0;
        for (; s; s &= s - 1) ++c;
        return c;
    }

    static SparseMatrix diagonal(const Eigen::VectorXd& values) {
        SparseMatrix m(values.size(), values.size());
        std::vector<Eigen::Triplet<cplx>> entries;
        for (Eigen::Index s = 0; s < values.size(); ++s)
            if (values[s] != 0.0) entries.emplace_back(s, s, values[s]);
        m.setFromTriplets(entries.begin(), entries.end());
        return m;
    }

    SparseMatrix site_operator(int site, char which) const {
        if (site < 0 || site >= n_) throw DomainError("site index out of range");
        const Eigen::Index d = dim();
        const Eigen::Index bit = Eigen::Index{1} << site;
        std::vector<Eigen::Triplet<cplx>> entries;
        entries.reserve(d);
        for (Eigen::Index s = 0; s < d; ++s) {
            const bool down = s & bit;
            switch (which) {
            case 'x': entries.emplace_back(s ^ bit, s, 1.0); break;
            // σʸ|↑⟩ = i|↓⟩, σʸ|↓⟩ = −i|↑⟩
            case 'y': entries.emplace_back(s ^ bit, s, down ? cplx(0.0, -1.0) : cplx(0.0, 1.0)); break;
            default: entries.emplace_back(s, s, down ? -1.0 : 1.0); break;
            }
        }
        SparseMatrix m(d, d);
        m.setFromTriplets(entries.begin(), entries.end());
        return m;
    }

    int n_;
    Eigen::VectorXd z_, three_body_;
    SparseMatrix mx_, my_, mz_, mz3_, t_;
    std::vector<double> norms_;
};

/// A real linear combination of fixed sparse matrices.
struct FullHamiltonian {
    struct Term {
        double coefficient;
        const SparseMatrix* matrix;
        double matrix_norm;
    };
    std::vector<Term> terms;
    Eigen::Index dim = 0;

    void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
        out = Eigen::VectorXcd::Zero(dim);
        for (const auto& t : terms)
            if (t.coefficient != 0.0) out.noalias() += t.coefficient * (*t.matrix * in);
    }
    Eigen::MatrixXcd dense() const {
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
        for (const auto& t : terms) h += t.coefficient * Eigen::MatrixXcd(*t.matrix);
        return h;
    }
    SparseMatrix sparse() const {
        SparseMatrix h(dim, dim);
        for (const auto& t : terms) h += t.coefficient * *t.matrix;
        return h;
    }
    double norm_bound() const {
        double b = 0.0;
        for (const auto& t : terms) b += std::abs(t.coefficient) * t.matrix_norm;
        return b;
    }
    void propagate(double dt, Eigen::VectorXcd& psi) const {
        const double b = norm_bound();
        chebyshev_propagate([&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) { apply(in, out); }, -b, b,
                            dt, psi);
    }
};

/// −(1−λ)γ Σσˣ − λ N (Σσᶻ/N)³.
inline FullHamiltonian full_h0(double t, const ScheduleSpec& spec, const FullSpaceOperators& ops) {
    const double n = ops.size();
    return {{{-one_minus_lambda(t, spec) * gamma(t, spec), &ops.mx(), ops.norm_mx()},
             {-lambda(t, spec) / (n * n), &ops.mz3(), ops.norm_mz3()}},
            ops.dim()};
}

inline FullHamiltonian full_h_lab_cd(double t, const ScheduleSpec& spec, const FullSpaceOperators& ops) {
    FullHamiltonian h = full_h0(t, spec, ops);
    h.terms.push_back({cd_y_coefficient(t, spec, PSpinModel{ops.size()}), &ops.my(), ops.norm_my()});
    return h;
}

inline FullHamiltonian full_h_rotated(double t, const ScheduleSpec& spec, const FullSpaceOperators& ops) {
    const double n = ops.size();
    const double lam = lambda(t, spec);
    const auto f = frame_coefficients(t, spec, PSpinModel{ops.size()});
    return {{{std::hypot(f.x, f.y), &ops.mx(), ops.norm_mx()},
             {-lam * 6.0 / (n * n), &ops.three_body(), ops.norm_three_body()},
             {-(0.5 * f.theta_dot + lam * (3.0 * n - 2.0) / (n * n)), &ops.mz(), ops.norm_mz()}},
            ops.dim()};
}

inline FullHamiltonian full_hamiltonian(double t, const ScheduleSpec& spec, const ProtocolSpec& protocol,
                                        const FullSpaceOperators& ops) {
    if (protocol.protocol == Protocol::TraditionalQA) return full_h0(t, spec, ops);
    return protocol.frame == Frame::Lab ? full_h_lab_cd(t, spec, ops) : full_h_rotated(t, spec, ops);
}

/// Evolution on the 2^N basis; same contract as evolve.
template <class Builder>
EvolveResult full_space_evolve(Builder&& builder, const StateVector& psi0, double tau,
                               const IntegratorConfig& cfg, const std::vector<double>& sample_times = {}) {
    if (psi0.basis.kind != BasisKind::Full) throw BasisMismatchError("full_space_evolve: state is not full-space");
    require_size(psi0.basis.N, kMaxDynamicN, "full_space_evolve");
    return evolve(builder, psi0, tau, cfg, sample_times);
}

inline RunResult run_protocol_full(const ScheduleSpec& spec, const ProtocolSpec& protocol,
                                   const IntegratorConfig& cfg, const RunOptions& options = {}) {
    protocol.validate(spec);
    const auto* model = std::get_if<PSpinModel>(&protocol.model);
    if (!model) throw DomainError("run_protocol_full: only the p-spin model has a full-space form");
    require_size(model->N, kMaxDynamicN, "run_protocol_full");
    if (options.spectrum_samples == 1 || options.spectrum_samples < 0)
        throw DomainError("run_protocol_full: spectrum needs at least two samples");

    const FullSpaceOperators operators(model->N);
    const Basis basis = Basis::full(model->N);
    auto builder = [&](double t) { return full_hamiltonian(t, spec, protocol, operators); };

    const auto initial = ground_state(builder(0.0), basis);
    const auto problem = full_h0(spec.total_time, spec, operators);
    const auto target = ground_state(problem, basis);

    std::vector<double> samples;
    if (options.spectrum_samples >= 2) samples = uniform_samples(spec.total_time, options.spectrum_samples);
    const auto evolved = full_space_evolve(builder, initial.state, spec.total_time, cfg, samples);

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

// Variational action.

enum class GaugeDirection { Lambda, Gamma };

/// G = ∂ℋ₀ + i[𝒜, ℋ₀] with 𝒜 = coefficient·Σσʸ, from explicit commutators.
inline Eigen::MatrixXcd hermitian_G_definition(double lam, double gam, double coefficient, GaugeDirection which,
                                               const FullSpaceOperators& ops) {
    require_size(ops.size(), kMaxActionN, "hermitian_G");
    const double n = ops.size();
    const Eigen::MatrixXcd mx = ops.mx();
    const Eigen::MatrixXcd mz = ops.mz();
    const Eigen::MatrixXcd mz3 = mz * mz * mz;
    const Eigen::MatrixXcd h0 = -(1.0 - lam) * gam * mx - (lam / (n * n)) * mz3;
    const Eigen::MatrixXcd derivative =
        which == GaugeDirection::Lambda ? Eigen::MatrixXcd(gam * mx - mz3 / (n * n)) : Eigen::MatrixXcd(-(1.0 - lam) * mx);
    const Eigen::MatrixXcd a = coefficient * Eigen::MatrixXcd(ops.my());
    return derivative + cplx(0.0, 1.0) * (a * h0 - h0 * a);
}

/// The same operator written out in Σσˣ, Σσᶻ, Σσᶻσᶻσᶻ and the mixed
/// three-body sum W = Σ(σˣσᶻσᶻ + σᶻσˣσᶻ + σᶻσᶻσˣ).
inline Eigen::MatrixXcd hermitian_G_expanded(double lam, double gam, double coefficient, GaugeDirection which,
                                             const FullSpaceOperators& ops) {
    require_size(ops.size(), kMaxActionN, "hermitian_G");
    const double n = ops.size();
    const double n2 = n * n;
    const double c = coefficient;
    const Eigen::MatrixXcd mx = ops.mx();
    const Eigen::MatrixXcd mz = ops.mz();
    const Eigen::MatrixXcd w = ops.three_body_mixed();
    const Eigen::MatrixXcd t = ops.three_body();
    if (which == GaugeDirection::Lambda)
        return (gam + 2.0 * c * lam * (3.0 * n - 2.0) / n2) * mx - (6.0 / n2) * t -
               ((3.0 * n - 2.0) / n2 + 2.0 * c * (1.0 - lam) * gam) * mz + (12.0 * lam * c / n2) * w;
    return (2.0 * c * lam * (3.0 * n - 2.0) / n2 - (1.0 - lam)) * mx - 2.0 * c * (1.0 - lam) * gam * mz +
           (12.0 * lam * c / n2) * w;
}

/// S = Tr G_λ² + Tr G_γ², each trace taken as a squared Frobenius norm.
inline double action_trace(double lam, double gam, double alpha, double beta, const FullSpaceOperators& ops) {
    return hermitian_G_definition(lam, gam, alpha, GaugeDirection::Lambda, ops).squaredNorm() +
           hermitian_G_definition(lam, gam, beta, GaugeDirection::Gamma, ops).squaredNorm();
}

inline double action_closed_form(double lam, double gam, double alpha, double beta, int N) {
    const double n = N;
    const double n2 = n * n;
    const double pairs = (n - 1.0) * (n - 2.0) / (n2 * n);
    const double a1 = gam + 2.0 * alpha * lam * (3.0 * n - 2.0) / n2;
    const double a2 = (3.0 * n - 2.0) / n2 + 2.0 * alpha * (1.0 - lam) * gam;
    const double b1 = 2.0 * beta * lam * (3.0 * n - 2.0) / n2 - (1.0 - lam);
    const double b2 = 2.0 * beta * (1.0 - lam) * gam;
    const double per_state = n * (a1 * a1 + a2 * a2) + 72.0 * lam * lam * alpha * alpha * pairs + 6.0 * pairs +
                             n * (b1 * b1 + b2 * b2) + 72.0 * lam * lam * beta * beta * pairs;
    return std::ldexp(per_state, N);
}

/// Landau–Zener: ℋ₀ = −(1−λ)γσˣ − λhσᶻ.
inline Eigen::Matrix2cd lz_hermitian_G_definition(double lam, double gam, double h, double coefficient,
                                                  GaugeDirection which) {
    Eigen::Matrix2cd sx, sy, sz;
    sx << 0, 1, 1, 0;
    sy << 0, cplx(0, -1), cplx(0, 1), 0;
    sz << 1, 0, 0, -1;
    const Eigen::Matrix2cd h0 = -(1.0 - lam) * gam * sx - lam * h * sz;
    const Eigen::Matrix2cd derivative =
        which == GaugeDirection::Lambda ? Eigen::Matrix2cd(gam * sx - h * sz) : Eigen::Matrix2cd(-(1.0 - lam) * sx);
    const Eigen::Matrix2cd a = coefficient * sy;
    return derivative + cplx(0.0, 1.0) * (a * h0 - h0 * a);
}

inline Eigen::Matrix2cd lz_hermitian_G_expanded(double lam, double gam, double h, double coefficient,
                                                GaugeDirection which) {
    Eigen::Matrix2cd sx, sz;
    sx << 0, 1, 1, 0;
    sz << 1, 0, 0, -1;
    const double c = coefficient;
    if (which == GaugeDirection::Lambda)
        return (gam + 2.0 * lam * h * c) * sx - (h + 2.0 * (1.0 - lam) * gam * c) * sz;
    return (2.0 * lam * h * c - (1.0 - lam)) * sx - 2.0 * (1.0 - lam) * gam * c * sz;
}

inline double lz_action_trace(double lam, double gam, double h, double alpha, double beta) {
    return lz_hermitian_G_definition(lam, gam, h, alpha, GaugeDirection::Lambda).squaredNorm() +
           lz_hermitian_G_definition(lam, gam, h, beta, GaugeDirection::Gamma).squaredNorm();
}

inline double lz_action_closed_form(double lam, double gam, double h, double alpha, double beta) {
    const double a1 = gam + 2.0 * lam * h * alpha;
    const double a2 = h + 2.0 * (1.0 - lam) * gam * alpha;
    const double b1 = 2.0 * lam * h * beta - (1.0 - lam);
    const double b2 = 2.0 * (1.0 - lam) * gam * beta;
    return 2.0 * (a1 * a1 + a2 * a2 + b1 * b1 + b2 * b2);
}

// Derivative-free minimization.

struct MinimizeResult {
    Eigen::Vector2d x = Eigen::Vector2d::Zero();
    double value = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

/// Nelder–Mead on R². Stops once the simplex diameter falls below
/// xtol·(1 + |x_best|).
template <class F>
MinimizeResult nelder_mead_2d(F&& f, const Eigen::Vector2d& start, double step, double xtol = 1e-11,
                              int max_iterations = 10000) {
    std::array<Eigen::Vector2d, 3> p{start, start + Eigen::Vector2d(step, 0.0), start + Eigen::Vector2d(0.0, step)};
    std::array<double, 3> v{f(p[0]), f(p[1]), f(p[2])};
    MinimizeResult r;
    for (r.iterations = 0; r.iterations < max_iterations; ++r.iterations) {
        std::array<int, 3> order{0, 1, 2};
        std::sort(order.begin(), order.end(), [&](int a, int b) { return v[a] < v[b]; });
        const int best = order[0], mid = order[1], worst = order[2];
        const double diameter = std::max((p[mid] - p[best]).norm(), (p[worst] - p[best]).norm());
        if (diameter < xtol * (1.0 + p[best].norm())) {
            r.converged = true;
            break;
        }
        const Eigen::Vector2d centroid = 0.5 * (p[best] + p[mid]);
        const Eigen::Vector2d reflected = centroid + (centroid - p[worst]);
        const double fr = f(reflected);
        if (fr < v[best]) {
            const Eigen::Vector2d expanded = centroid + 2.0 * (centroid - p[worst]);
            const double fe = f(expanded);
            if (fe < fr) {
                p[worst] = expanded;
                v[worst] = fe;
            } else {
                p[worst] = reflected;
                v[worst] = fr;
            }
            continue;
        }
        if (fr < v[mid]) {
            p[worst] = reflected;
            v[worst] = fr;
            continue;
        }
        const bool outside = fr < v[worst];
        const Eigen::Vector2d contracted =
            outside ? Eigen::Vector2d(centroid + 0.5 * (reflected - centroid))
                    : Eigen::Vector2d(centroid + 0.5 * (p[worst] - centroid));
        const double fc = f(contracted);
        if (fc < (outside ? fr : v[worst])) {
            p[worst] = contracted;
            v[worst] = fc;
            continue;
        }
        for (int i : {mid, worst}) {
            p[i] = p[best] + 0.5 * (p[i] - p[best]);
            v[i] = f(p[i]);
        }
    }
    const int best = static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
    r.x = p[best];
    r.value = v[best];
    return r;
}

/// Best of several Nelder–Mead runs on the explicit action over (α, β),
/// started from points drawn uniformly in [−5, 5]².
inline MinimizeResult minimize_action(double lam, double gam, const FullSpaceOperators& ops, int starts = 5,
                                      unsigned seed = 12345) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> draw(-5.0, 5.0);
    auto objective = [&](const Eigen::Vector2d& ab) { return action_trace(lam, gam, ab[0], ab[1], ops); };
    MinimizeResult best;
    for (int i = 0; i < starts; ++i) {
        const Eigen::Vector2d start(draw(rng), draw(rng));
        auto r = nelder_mead_2d(objective, start, 0.5);
        if (r.value < best.value) best = r;
    }
    return best;
}

}  // namespace cdqa::oracle

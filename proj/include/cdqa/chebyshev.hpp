#pragma once

/// ψ ← exp(−i H dt) ψ through a Chebyshev expansion that only needs H·v.

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace cdqa {

namespace detail {

/// J_0(z) … J_m(z) by Miller's downward recurrence, cut where the terms drop
/// below 1e-18. At least J_0 and J_1 are returned.
inline std::vector<double> bessel_j_sequence(double z) {
    const int needed = static_cast<int>(std::ceil(z + 12.0 * std::cbrt(z) + 20.0));
    int start = needed + 20;
    if (start % 2) ++start;
    std::vector<double> j(start + 2, 0.0);
    j[start] = 1e-280;
    for (int k = start; k >= 1; --k) {
        j[k - 1] = (2.0 * k / z) * j[k] - j[k + 1];
        if (std::abs(j[k - 1]) > 1e250)
            for (int m = k - 1; m <= start + 1; ++m) j[m] *= 1e-250;
    }
    double norm = j[0];
    for (int k = 2; k <= start; k += 2) norm += 2.0 * j[k];
    for (double& v : j) v /= norm;
    int last = std::max(1, static_cast<int>(std::ceil(z)));
    while (last + 1 <= start && std::abs(j[last + 1]) > 1e-18) ++last;
    j.resize(last + 1);
    return j;
}

}  // namespace detail

/// `apply(in, out)` must write H·in into out; [lo, hi] must contain the
/// spectrum of H.
template <class Apply>
void chebyshev_propagate(Apply&& apply, double lo, double hi, double dt, Eigen::VectorXcd& psi) {
    using cplx = std::complex<double>;
    const double center = 0.5 * (hi + lo);
    const double half = 0.5 * (hi - lo);
    const cplx phase = std::polar(1.0, -center * dt);
    const double z = half * dt;
    if (!(z > 1e-300)) {
        psi *= phase;
        return;
    }
    const auto bessel = detail::bessel_j_sequence(z);
    const double inv_half = 1.0 / half;

    Eigen::VectorXcd prev = psi, cur(psi.size()), next(psi.size());
    auto scaled = [&](const Eigen::VectorXcd& v, Eigen::VectorXcd& out) {
        apply(v, out);
        out = (out - center * v) * inv_half;
    };
    scaled(prev, cur);
    const cplx minus_i(0.0, -1.0);
    Eigen::VectorXcd sum = bessel[0] * prev + (2.0 * bessel[1]) * minus_i * cur;
    cplx weight = minus_i;
    for (std::size_t k = 2; k < bessel.size(); ++k) {
        scaled(cur, next);
        next = 2.0 * next - prev;
        weight *= minus_i;
        sum += (2.0 * bessel[k]) * weight * next;
        std::swap(prev, cur);
        std::swap(cur, next);
    }
    psi = phase * sum;
}

}  // namespace cdqa

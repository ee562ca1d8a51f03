#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cdqa {

enum class BasisKind { Symmetric, Full, TwoLevel };

/// Which Hilbert space a state's amplitudes refer to.
struct Basis {
    BasisKind kind = BasisKind::Symmetric;
    int N = 0;

    bool operator==(const Basis&) const = default;

    Eigen::Index dim() const {
        switch (kind) {
        case BasisKind::Symmetric: return N + 1;
        case BasisKind::Full: return Eigen::Index{1} << N;
        case BasisKind::TwoLevel: return 2;
        }
        return 0;
    }

    static Basis symmetric(int n) { return {BasisKind::Symmetric, n}; }
    static Basis full(int n) { return {BasisKind::Full, n}; }
    static Basis two_level() { return {BasisKind::TwoLevel, 1}; }
};

inline std::string to_string(const Basis& b) {
    switch (b.kind) {
    case BasisKind::Symmetric: return "symmetric(" + std::to_string(b.N) + ")";
    case BasisKind::Full: return "full(" + std::to_string(b.N) + ")";
    case BasisKind::TwoLevel: return "two-level";
    }
    return "?";
}

class BasisMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct StateVector {
    Basis basis;
    Eigen::VectorXcd amplitudes;

    double norm() const { return amplitudes.norm(); }
};

}  // namespace cdqa

#include "dnls/lattice_maps.hpp"

#include "dnls/errors.hpp"

#include <cmath>
#include <string>

namespace dnls {

std::string_view to_string(NumericalFailure kind) {
    switch (kind) {
        case NumericalFailure::NonHyperbolic: return "non-hyperbolic";
        case NumericalFailure::DegenerateEigenspace: return "degenerate-eigenspace";
        case NumericalFailure::ComplexSpectrum: return "complex-spectrum";
        case NumericalFailure::Resonance: return "resonance";
        case NumericalFailure::Overflow: return "overflow";
        case NumericalFailure::Divergence: return "divergence";
    }
    return "unknown";
}

void ModelParams::validate(bool needs_A) const {
    if (!std::isfinite(epsilon) || !std::isfinite(A))
        throw ConfigError("model parameters must be finite");
    if (epsilon == 0.0) throw ConfigError("epsilon must be nonzero");
    if (needs_A && A == 0.0) throw ConfigError("A must be nonzero for the 4-d map");
}

SymmetryKind kind_of(Symmetry s) {
    return (s == Symmetry::Sigma1 || s == Symmetry::Sigma4) ? SymmetryKind::Symmetry
                                                            : SymmetryKind::Reversor;
}

int dimension_of(Symmetry s) {
    switch (s) {
        case Symmetry::Sigma1:
        case Symmetry::Sigma2:
        case Symmetry::Sigma3: return 2;
        default: return 4;
    }
}

State2 map2_apply(const State2& s, const ModelParams& p) {
    const double y = s[1];
    return {y, -s[0] + 2.0 * y - y * y * y / p.epsilon};
}

State2 map2_inverse(const State2& s, const ModelParams& p) {
    const double x = s[0];
    return {2.0 * x - x * x * x / p.epsilon - s[1], x};
}

Eigen::Matrix2d map2_jacobian(const State2& s, const ModelParams& p) {
    Eigen::Matrix2d J;
    J << 0.0, 1.0, -1.0, 2.0 - 3.0 * s[1] * s[1] / p.epsilon;
    return J;
}

State4 map4_apply(const State4& s, const ModelParams& p) {
    const double x = s[0], y = s[1], z = s[2], w = s[3];
    const double A = p.A;
    return {y, z, w, -x - y / A + 2.0 * z / A - z * z * z / (p.epsilon * A) - w / A};
}

State4 map4_inverse(const State4& s, const ModelParams& p) {
    const double x = s[0], y = s[1], z = s[2], w = s[3];
    const double A = p.A;
    return {-w - x / A + 2.0 * y / A - y * y * y / (p.epsilon * A) - z / A, x, y, z};
}

Matrix4 map4_jacobian(const State4& s, const ModelParams& p) {
    const double A = p.A;
    Matrix4 J = Matrix4::Zero();
    J(0, 1) = 1.0;
    J(1, 2) = 1.0;
    J(2, 3) = 1.0;
    J(3, 0) = -1.0;
    J(3, 1) = -1.0 / A;
    J(3, 2) = 2.0 / A - 3.0 * s[2] * s[2] / (p.epsilon * A);
    J(3, 3) = -1.0 / A;
    return J;
}

Matrix4 map4_inverse_jacobian(const State4& s, const ModelParams& p) {
    const double A = p.A;
    Matrix4 J = Matrix4::Zero();
    J(0, 0) = -1.0 / A;
    J(0, 1) = 2.0 / A - 3.0 * s[1] * s[1] / (p.epsilon * A);
    J(0, 2) = -1.0 / A;
    J(0, 3) = -1.0;
    J(1, 0) = 1.0;
    J(2, 1) = 1.0;
    J(3, 2) = 1.0;
    return J;
}

State2 apply_symmetry(Symmetry id, const State2& s) {
    switch (id) {
        case Symmetry::Sigma1: return -s;
        case Symmetry::Sigma2: return {s[1], s[0]};
        case Symmetry::Sigma3: return {-s[1], -s[0]};
        default: throw ConfigError("symmetry acts on R^4, got a planar state");
    }
}

State4 apply_symmetry(Symmetry id, const State4& s) {
    switch (id) {
        case Symmetry::Sigma4: return -s;
        case Symmetry::Sigma5: return s.reverse();
        case Symmetry::Sigma6: return -s.reverse();
        default: throw ConfigError("symmetry acts on R^2, got a 4-d state");
    }
}

std::vector<State4> fixed_points(const ModelParams& p) {
    p.validate();
    std::vector<State4> out{State4::Zero()};
    const double ea = p.epsilon * p.A;
    if (ea < 0.0) {
        const double c = std::sqrt(-2.0 * ea);
        out.push_back(State4::Constant(c));
        out.push_back(State4::Constant(-c));
    }
    return out;
}

double nonwandering_bound(const ModelParams& p, int dim) {
    if (dim == 2) {
        p.validate(false);
        return 2.0 * std::sqrt(std::abs(p.epsilon));
    }
    if (dim == 4) {
        p.validate();
        const double absA = std::abs(p.A);
        return std::sqrt(std::abs(p.epsilon * p.A) * (2.0 + 4.0 / absA));
    }
    throw ConfigError("dimension must be 2 or 4, got " + std::to_string(dim));
}

namespace {

template <class State, class Step>
Orbit<State> iterate(const State& start, std::size_t n, double threshold, Step step) {
    Orbit<State> orbit;
    orbit.states.reserve(n + 1);
    orbit.states.push_back(start);
    State s = start;
    for (std::size_t k = 0; k < n; ++k) {
        s = step(s);
        orbit.states.push_back(s);
        if (!s.allFinite() || s.template lpNorm<Eigen::Infinity>() > threshold) {
            orbit.escaped = true;
            break;
        }
    }
    return orbit;
}

}  // namespace

Orbit<State2> iterate_orbit(const State2& start, const ModelParams& p, std::size_t n,
                            Direction dir, double escape_factor) {
    const double threshold = escape_factor * nonwandering_bound(p, 2);
    if (dir == Direction::Forward)
        return iterate(start, n, threshold, [&](const State2& s) { return map2_apply(s, p); });
    return iterate(start, n, threshold, [&](const State2& s) { return map2_inverse(s, p); });
}

Orbit<State4> iterate_orbit(const State4& start, const ModelParams& p, std::size_t n,
                            Direction dir, double escape_factor) {
    const double threshold = escape_factor * nonwandering_bound(p, 4);
    if (dir == Direction::Forward)
        return iterate(start, n, threshold, [&](const State4& s) { return map4_apply(s, p); });
    return iterate(start, n, threshold, [&](const State4& s) { return map4_inverse(s, p); });
}

double conjugacy_check_2d(const State2& s, const ModelParams& p) {
    p.validate(false);
    const auto psi = [](const State2& q) { return State2{q[0] + q[1], 2.0 * q[0] + q[1]}; };
    const double x = s[0], y = s[1];
    const double c = (2.0 * x + y) * (2.0 * x + y) * (2.0 * x + y) / p.epsilon;
    const State2 T{x - c, x + y + c};
    return (map2_apply(psi(s), p) - psi(T)).norm();
}

}  // namespace dnls

#pragma once

// Stationary-state recurrences of the DNLS lattice with next-nearest-neighbor
// coupling, written as polynomial maps of the plane (A = 0) and of R^4.

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace dnls {

/// Lattice parameters: coupling strength and next-nearest-neighbor weight.
struct ModelParams {
    double epsilon = 0.0;
    double A = 0.0;

    /// Throws ConfigError unless epsilon != 0 (and A != 0 when requested).
    void validate(bool needs_A = true) const;
};

/// (x, y) = (u_{n-1}, u_n)
using State2 = Eigen::Vector2d;
/// (x, y, z, w) = (u_{n-2}, u_{n-1}, u_n, u_{n+1})
using State4 = Eigen::Vector4d;
using Matrix4 = Eigen::Matrix4d;

enum class Symmetry { Sigma1, Sigma2, Sigma3, Sigma4, Sigma5, Sigma6 };

enum class SymmetryKind { Symmetry, Reversor };

/// sigma1 and sigma4 commute with the map; the others conjugate it to its inverse.
SymmetryKind kind_of(Symmetry s);
/// 2 for sigma1..sigma3, 4 for sigma4..sigma6.
int dimension_of(Symmetry s);

State2 map2_apply(const State2& s, const ModelParams& p);
State2 map2_inverse(const State2& s, const ModelParams& p);
Eigen::Matrix2d map2_jacobian(const State2& s, const ModelParams& p);

State4 map4_apply(const State4& s, const ModelParams& p);
State4 map4_inverse(const State4& s, const ModelParams& p);
/// Analytic Jacobian; companion form with a single nonlinear entry.
Matrix4 map4_jacobian(const State4& s, const ModelParams& p);
Matrix4 map4_inverse_jacobian(const State4& s, const ModelParams& p);

/// Throws ConfigError if the symmetry acts on the other dimension.
State2 apply_symmetry(Symmetry id, const State2& s);
State4 apply_symmetry(Symmetry id, const State4& s);

/// Origin first, then +c and -c (c = sqrt(-2 epsilon A)) when epsilon A < 0.
std::vector<State4> fixed_points(const ModelParams& p);

/// Half-width of the box known to contain the non-wandering set.
/// dim = 2: 2 sqrt|eps|; dim = 4: sqrt(|eps A| (2 + 4/|A|)).
double nonwandering_bound(const ModelParams& p, int dim);

enum class Direction { Forward, Backward };

template <class State>
struct Orbit {
    std::vector<State> states;  // states[0] is the start
    bool escaped = false;
};

/// Iterates until n steps or until the sup norm exceeds
/// escape_factor * nonwandering_bound (escape is a flag, not an error).
Orbit<State2> iterate_orbit(const State2& start, const ModelParams& p, std::size_t n,
                            Direction dir = Direction::Forward, double escape_factor = 10.0);
Orbit<State4> iterate_orbit(const State4& start, const ModelParams& p, std::size_t n,
                            Direction dir = Direction::Forward, double escape_factor = 10.0);

/// Residual of f0(psi(s)) - psi(T(s)) for the shear conjugacy of the planar map.
double conjugacy_check_2d(const State2& s, const ModelParams& p);

}  // namespace dnls

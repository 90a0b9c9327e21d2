#pragma once

// Stationary profiles u_n read off homoclinic orbits, and planar phase portraits.

#include "dnls/homoclinic.hpp"

#include <vector>

namespace dnls {

struct ProfileSample {
    int n;
    double u;
};

struct SolitonProfile {
    ModelParams params;
    std::vector<ProfileSample> samples;  // consecutive n, ascending
    double residual_max = 0;
    /// Geometric ratio |u_{n+1} / u_n| in the linear part of each tail
    /// (NaN when the tail is too short to estimate).
    double decay_forward = 0;
    double decay_backward = 0;
    bool floor_forward = false;
    bool floor_backward = false;

    std::vector<double> values() const;
};

struct ProfileOptions {
    double floor = 1e-14;
    int max_steps = 500;
    /// Largest accepted |f(x_k) - x_{k+1}| along the generated orbit.
    double consistency_tol = 1e-8;
};

/// Orbit of sol.point in both directions, generated through the conjugacies:
/// forward states P^s(l1^k u2, l2^k v2), backward states P^u(u1 / L1^k, v1 / L2^k).
/// With sol.point = (u_{-1}, u_0, u_1, u_2), so a point of Fix(sigma5) gives
/// u_n = u_{1-n}. Stops when the sup norm falls below the floor or after
/// max_steps; throws NumericalError(Divergence) if consecutive states are not
/// related by the map.
SolitonProfile build_profile(const HomoclinicSolution& sol, const ManifoldSeries& Pu,
                             const ManifoldSeries& Ps, const ProfileOptions& opts = {});

/// max_n |u_n^3 + eps (u_{n+1} - 2 u_n + u_{n-1} + A (u_{n+2} + u_{n-2}))| over
/// the recorded sites, with zeros beyond the window. Needs at least 5 values.
double stationary_residual(const std::vector<double>& u, const ModelParams& p);
double stationary_residual(const SolitonProfile& profile);

/// Ratio |u_end / u_start|^{1/(end-start)} across the linear regime of a tail.
double tail_decay(const std::vector<double>& tail, double peak_scale, double floor);

/// Seeds shared by all portraits, all within 0.1 of the origin: the origin,
/// (s, 0) for s = 0.01 .. 0.1 and (s, s) for s = 0.005 .. 0.07.
std::vector<State2> default_portrait_seeds();

std::vector<Orbit<State2>> portrait_2d(const ModelParams& p, const std::vector<State2>& seeds,
                                       std::size_t steps, Execution exec = Execution::Parallel);

}  // namespace dnls

#include "dnls/soliton.hpp"

#include "dnls/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dnls {

std::vector<double> SolitonProfile::values() const {
    std::vector<double> u;
    u.reserve(samples.size());
    for (const auto& s : samples) u.push_back(s.u);
    return u;
}

double stationary_residual(const std::vector<double>& u, const ModelParams& p) {
    if (u.size() < 5) throw ConfigError("stationary residual needs at least 5 sites");
    const auto n = static_cast<std::ptrdiff_t>(u.size());
    const auto at = [&](std::ptrdiff_t i) { return i < 0 || i >= n ? 0.0 : u[i]; };
    double worst = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double r = u[i] * u[i] * u[i] +
                         p.epsilon * (at(i + 1) - 2.0 * u[i] + at(i - 1) +
                                      p.A * (at(i + 2) + at(i - 2)));
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

double stationary_residual(const SolitonProfile& profile) {
    return stationary_residual(profile.values(), profile.params);
}

double tail_decay(const std::vector<double>& tail, double peak_scale, double floor) {
    const double hi = peak_scale, lo = 1e3 * floor;
    const int n = static_cast<int>(tail.size());
    int first = -1, last = -1;
    for (int i = 0; i < n; ++i) {
        const double a = std::abs(tail[i]);
        if (first < 0 && a <= hi && a >= lo) first = i;
        if (first >= 0 && a >= lo) last = i;
    }
    if (first < 0 || last - first < 3) return std::numeric_limits<double>::quiet_NaN();
    return std::pow(std::abs(tail[last] / tail[first]), 1.0 / (last - first));
}

namespace {

struct Walk {
    std::vector<State4> states;  // k = 1, 2, ...
    bool floor = false;
};

template <class Next, class Step>
Walk walk(const State4& start, Next&& next, Step&& step, const ProfileOptions& opts) {
    Walk w;
    State4 prev = start;
    for (int k = 1; k <= opts.max_steps; ++k) {
        const State4 x = next(k);
        const double gap = (step(prev) - x).template lpNorm<Eigen::Infinity>();
        if (!x.allFinite() || !(gap <= opts.consistency_tol))
            throw NumericalError(NumericalFailure::Divergence,
                                 "orbit step " + std::to_string(k) + " is off the map by " +
                                     std::to_string(gap));
        w.states.push_back(x);
        prev = x;
        if (x.lpNorm<Eigen::Infinity>() < opts.floor) {
            w.floor = true;
            break;
        }
    }
    return w;
}

}  // namespace

SolitonProfile build_profile(const HomoclinicSolution& sol, const ManifoldSeries& Pu,
                             const ManifoldSeries& Ps, const ProfileOptions& opts) {
    if (Ps.branch() != Branch::Stable || Pu.branch() != Branch::Unstable)
        throw ConfigError("build_profile expects (unstable, stable) series");
    const ModelParams& p = sol.params;
    if (Ps.params().epsilon != p.epsilon || Ps.params().A != p.A ||
        Pu.params().epsilon != p.epsilon || Pu.params().A != p.A)
        throw ConfigError("series and solution were built for different parameters");

    const auto [l1, l2] = Ps.rates();
    const auto [L1, L2] = Pu.rates();
    const Walk fwd = walk(
        sol.point,
        [&](int k) { return Ps.evaluate(std::pow(l1, k) * sol.u2, std::pow(l2, k) * sol.v2); },
        [&](const State4& x) { return map4_apply(x, p); }, opts);
    const Walk bwd = walk(
        sol.point,
        [&](int k) { return Pu.evaluate(sol.u1 / std::pow(L1, k), sol.v1 / std::pow(L2, k)); },
        [&](const State4& x) { return map4_inverse(x, p); }, opts);

    // f^j(point) = (u_{j-1}, u_j, u_{j+1}, u_{j+2})
    SolitonProfile prof;
    prof.params = p;
    prof.floor_forward = fwd.floor;
    prof.floor_backward = bwd.floor;
    const int kb = static_cast<int>(bwd.states.size());
    const int kf = static_cast<int>(fwd.states.size());
    for (int j = kb; j >= 1; --j) prof.samples.push_back({-j - 1, bwd.states[j - 1][0]});
    prof.samples.push_back({-1, sol.point[0]});
    for (int j = 1; j <= kf; ++j) prof.samples.push_back({j - 1, fwd.states[j - 1][0]});
    const State4& last = kf ? fwd.states.back() : sol.point;
    for (int i = 1; i < 4; ++i) prof.samples.push_back({kf - 1 + i, last[i]});

    prof.residual_max = stationary_residual(prof);

    const double linear_scale = 1e-3 * std::sqrt(std::abs(p.epsilon * p.A));
    std::vector<double> fwd_tail, bwd_tail;
    for (const auto& s : prof.samples) {
        if (s.n >= 0) fwd_tail.push_back(s.u);
        if (s.n <= 1) bwd_tail.push_back(s.u);
    }
    std::reverse(bwd_tail.begin(), bwd_tail.end());
    prof.decay_forward = tail_decay(fwd_tail, linear_scale, opts.floor);
    prof.decay_backward = tail_decay(bwd_tail, linear_scale, opts.floor);
    return prof;
}

std::vector<State2> default_portrait_seeds() {
    std::vector<State2> seeds{State2::Zero()};
    for (int k = 1; k <= 10; ++k) seeds.emplace_back(0.01 * k, 0.0);
    for (int k = 1; k <= 14; ++k) seeds.emplace_back(0.005 * k, 0.005 * k);
    return seeds;
}

std::vector<Orbit<State2>> portrait_2d(const ModelParams& p, const std::vector<State2>& seeds,
                                       std::size_t steps, Execution exec) {
    p.validate(false);
    const int n = static_cast<int>(seeds.size());
    std::vector<Orbit<State2>> out(n);
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int i = 0; i < n; ++i) out[i] = iterate_orbit(seeds[i], p, steps);
    } else {
        for (int i = 0; i < n; ++i) out[i] = iterate_orbit(seeds[i], p, steps);
    }
    return out;
}

}  // namespace dnls

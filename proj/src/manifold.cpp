#include "dnls/manifold.hpp"

#include "dnls/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace dnls {

double cubic_convolution(const TriangularSeries& a, int n, int m) {
    double acc = 0.0;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= m; ++j) {
            const double outer = a(n - i, m - j);
            if (outer == 0.0) continue;
            for (int k = 0; k <= i; ++k)
                for (int l = 0; l <= j; ++l) acc += outer * a(i - k, j - l) * a(k, l);
        }
    return acc;
}

ManifoldSeries::ManifoldSeries(const ModelParams& p, Branch branch, int order,
                               std::array<double, 2> rates, std::array<double, 2> scale,
                               std::array<Eigen::Vector4d, 2> base_vectors)
    : params_(p),
      branch_(branch),
      order_(order),
      rates_(rates),
      scale_(scale),
      base_(base_vectors) {
    if (order < 1) throw ConfigError("series order must be at least 1");
    for (auto& c : comp_) c = TriangularSeries(order);
}

Eigen::Vector4d ManifoldSeries::block(int n, int m) const {
    return {comp_[0](n, m), comp_[1](n, m), comp_[2](n, m), comp_[3](n, m)};
}

void ManifoldSeries::set_block(int n, int m, const Eigen::Vector4d& a) {
    for (int i = 0; i < 4; ++i) comp_[i](n, m) = a[i];
}

State4 ManifoldSeries::evaluate(double u, double v) const {
    std::vector<double> up(order_ + 1), vp(order_ + 1);
    up[0] = vp[0] = 1.0;
    for (int k = 1; k <= order_; ++k) {
        up[k] = up[k - 1] * u;
        vp[k] = vp[k - 1] * v;
    }
    std::array<double, 4> acc{};
    for (int d = order_; d >= 0; --d)
        for (int n = 0; n <= d; ++n) {
            const int m = d - n;
            const double mono = up[n] * vp[m];
            const std::size_t idx = kernels::tri_index(n, m);
            for (int i = 0; i < 4; ++i) acc[i] += comp_[i].data()[idx] * mono;
        }
    return {acc[0], acc[1], acc[2], acc[3]};
}

SeriesPoint ManifoldSeries::evaluate_with_jacobian(double u, double v) const {
    std::vector<double> up(order_ + 1), vp(order_ + 1);
    up[0] = vp[0] = 1.0;
    for (int k = 1; k <= order_; ++k) {
        up[k] = up[k - 1] * u;
        vp[k] = vp[k - 1] * v;
    }
    std::array<double, 4> val{}, du{}, dv{};
    for (int d = order_; d >= 0; --d)
        for (int n = 0; n <= d; ++n) {
            const int m = d - n;
            const std::size_t idx = kernels::tri_index(n, m);
            const double mono = up[n] * vp[m];
            const double mono_u = n > 0 ? n * up[n - 1] * vp[m] : 0.0;
            const double mono_v = m > 0 ? m * up[n] * vp[m - 1] : 0.0;
            for (int i = 0; i < 4; ++i) {
                const double c = comp_[i].data()[idx];
                val[i] += c * mono;
                du[i] += c * mono_u;
                dv[i] += c * mono_v;
            }
        }
    SeriesPoint out;
    for (int i = 0; i < 4; ++i) {
        out.value[i] = val[i];
        out.jacobian(i, 0) = du[i];
        out.jacobian(i, 1) = dv[i];
    }
    return out;
}

Eigen::Matrix<double, 4, 2> ManifoldSeries::jacobian(double u, double v) const {
    return evaluate_with_jacobian(u, v).jacobian;
}

double ManifoldSeries::max_coefficient() const {
    double best = 0.0;
    for (const auto& c : comp_)
        for (double x : c.data()) best = std::max(best, std::abs(x));
    return best;
}

BranchSpectrum branch_spectrum(const ModelParams& p, Branch branch) {
    p.validate();
    const EigenSystem es = solve_reciprocal_quartic(characteristic_poly(p, FixedPointKind::Origin));
    if (!es.hyperbolic)
        throw NumericalError(NumericalFailure::NonHyperbolic, "origin is not hyperbolic");
    if (!es.all_real())
        throw NumericalError(NumericalFailure::ComplexSpectrum,
                             "manifolds are built only for an all-real spectrum at the origin; "
                             "need A in [(-2+sqrt2)/4, 0)");
    const double l1 = es.lambda[0].real(), l2 = es.lambda[1].real();
    if (std::abs(l1 - l2) <= 1e-8 * std::abs(l2))
        throw NumericalError(NumericalFailure::DegenerateEigenspace,
                             "stable eigenvalues coincide; eigenspace is not spanned by eigenvectors");

    BranchSpectrum out;
    out.rates = branch == Branch::Stable ? std::array<double, 2>{l1, l2}
                                         : std::array<double, 2>{1.0 / l1, 1.0 / l2};
    for (int k = 0; k < 2; ++k) {
        const double l = out.rates[k];
        Eigen::Vector4d v(1.0, l, l * l, l * l * l);
        out.vectors[k] = v / v.norm();
    }
    return out;
}

Eigen::Vector4d solve_order_block(const ModelParams& p, std::array<double, 2> rates, int n, int m,
                                  double cube, double resonance_tol) {
    if (n + m == 0) return Eigen::Vector4d::Zero();
    const double R = cube / (p.epsilon * p.A);
    // Odd series: even-degree right-hand sides vanish identically, so a
    // resonance there is not an obstruction.
    if (R == 0.0) return Eigen::Vector4d::Zero();

    const double L = std::pow(rates[0], n) * std::pow(rates[1], m);
    const double invA = 1.0 / p.A;
    Eigen::Vector4d a;
    if (std::abs(L) <= 1.0) {
        const double k0 = 1.0 + L * invA - 2.0 * L * L * invA + L * L * L * invA + L * L * L * L;
        if (std::abs(k0) <= resonance_tol)
            throw NumericalError(NumericalFailure::Resonance,
                                 "resonant block at order (" + std::to_string(n) + ", " +
                                     std::to_string(m) + ")");
        a[0] = R / -k0;
        a[1] = L * a[0];
        a[2] = L * a[1];
        a[3] = L * a[2];
    } else {
        // k0(L) / L^3, to keep high-order unstable blocks in range.
        const double r = 1.0 / L;
        const double k0s = r * r * r + r * r * invA - 2.0 * r * invA + invA + L;
        if (std::abs(k0s) <= resonance_tol * std::abs(L))
            throw NumericalError(NumericalFailure::Resonance,
                                 "resonant block at order (" + std::to_string(n) + ", " +
                                     std::to_string(m) + ")");
        a[3] = R / -k0s;
        a[2] = a[3] / L;
        a[1] = a[2] / L;
        a[0] = a[1] / L;
    }
    if (!a.allFinite())
        throw NumericalError(NumericalFailure::Overflow,
                             "coefficient overflow at order (" + std::to_string(n) + ", " +
                                 std::to_string(m) + ")");
    return a;
}

Eigen::Vector4d solve_order_block(const ManifoldSeries& partial, int n, int m,
                                  double resonance_tol) {
    if (n + m == 0) return Eigen::Vector4d::Zero();
    if (n == 1 && m == 0) return partial.scale()[0] * partial.base_vectors()[0];
    if (n == 0 && m == 1) return partial.scale()[1] * partial.base_vectors()[1];
    const double cube = cubic_convolution(partial.component(2), n, m);
    return solve_order_block(partial.params(), partial.rates(), n, m, cube, resonance_tol);
}

namespace {

// Coefficients of P restricted to one parameter axis with unit-norm
// eigenvector; the axis restriction is closed under the recursion.
std::vector<Eigen::Vector4d> axis_series(const ModelParams& p, double rate,
                                         const Eigen::Vector4d& w, int order, double tol) {
    std::vector<Eigen::Vector4d> c(order + 1, Eigen::Vector4d::Zero());
    c[1] = w;
    std::vector<double> sq(order + 1, 0.0);
    for (int d = 2; d <= order; ++d) {
        double s = 0.0;
        for (int i = 1; i <= d - 2; ++i) s += c[i][2] * c[d - 1 - i][2];
        sq[d - 1] = s;
        double cube = 0.0;
        for (int i = 2; i <= d - 1; ++i) cube += sq[i] * c[d - i][2];
        c[d] = solve_order_block(p, {rate, 1.0}, d, 0, cube, tol);
    }
    return c;
}

double axis_extent(const std::vector<Eigen::Vector4d>& c, double g) {
    constexpr int kSamples = 257;
    double best = 0.0;
    for (int s = 1; s < kSamples; ++s) {
        const double t = g * s / (kSamples - 1);
        Eigen::Vector4d acc = Eigen::Vector4d::Zero();
        for (int d = static_cast<int>(c.size()) - 1; d >= 1; --d) acc = acc * t + c[d];
        acc *= t;
        const double e = acc.lpNorm<Eigen::Infinity>();
        if (!std::isfinite(e)) return e;
        best = std::max(best, e);
    }
    return best;
}

}  // namespace

std::array<double, 2> select_gauge(const ModelParams& p, Branch branch, int order,
                                   const GaugePolicy& policy, double resonance_tol) {
    switch (policy.kind) {
        case GaugePolicy::Kind::UnitEigenvectors: return {1.0, 1.0};
        case GaugePolicy::Kind::Explicit:
            if (!(policy.scale[0] > 0.0 && policy.scale[1] > 0.0))
                throw ConfigError("explicit gauge scales must be positive");
            return policy.scale;
        case GaugePolicy::Kind::AxisExtent: break;
    }
    if (!(policy.extent_factor > 0.0)) throw ConfigError("gauge extent factor must be positive");
    const BranchSpectrum spec = branch_spectrum(p, branch);
    const double target = policy.extent_factor * nonwandering_bound(p, 4);

    std::array<double, 2> g{};
    for (int k = 0; k < 2; ++k) {
        const auto c = axis_series(p, spec.rates[k], spec.vectors[k], order, resonance_tol);
        double lo = std::log(1e-12), hi = std::log(1e12);
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double e = axis_extent(c, std::exp(mid));
            if (std::isfinite(e) && e <= target)
                lo = mid;
            else
                hi = mid;
        }
        g[k] = std::exp(lo);
    }
    return g;
}

ManifoldSeries compute_manifold(const ModelParams& p, Branch branch, const ManifoldOptions& opts) {
    p.validate();
    if (opts.order < 1) throw ConfigError("series order must be at least 1");
    const BranchSpectrum spec = branch_spectrum(p, branch);
    const auto scale = select_gauge(p, branch, opts.order, opts.gauge, opts.resonance_tol);

    ManifoldSeries ms(p, branch, opts.order, spec.rates, scale, spec.vectors);
    ms.set_block(1, 0, scale[0] * spec.vectors[0]);
    ms.set_block(0, 1, scale[1] * spec.vectors[1]);

    TriangularSeries sq(opts.order), cube(opts.order);
    const auto a3 = std::as_const(ms).component(2).data();
    for (int d = 2; d <= opts.order; ++d) {
        kernels::product_degree(a3, a3, d - 1, 1, d - 2, sq.data(), opts.exec);
        kernels::product_degree(sq.data(), a3, d, 2, d - 1, cube.data(), opts.exec);
        for (int n = 0; n <= d; ++n)
            ms.set_block(n, d - n,
                         solve_order_block(p, spec.rates, n, d - n, cube(n, d - n),
                                           opts.resonance_tol));
    }
    return ms;
}

double conjugacy_residual(const ManifoldSeries& ms, const kernels::Grid& grid, Execution exec) {
    const auto& p = ms.params();
    const double L1 = ms.rates()[0], L2 = ms.rates()[1];
    if (ms.branch() == Branch::Stable) {
        return kernels::grid_max(
            grid,
            [&](double u, double v) {
                return (map4_apply(ms.evaluate(u, v), p) - ms.evaluate(L1 * u, L2 * v)).norm();
            },
            exec);
    }
    return kernels::grid_max(
        grid,
        [&](double u, double v) {
            return (map4_inverse(ms.evaluate(u, v), p) - ms.evaluate(u / L1, v / L2)).norm();
        },
        exec);
}

}  // namespace dnls

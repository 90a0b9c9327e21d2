#pragma once

// Parametrization method for the 2-d stable and unstable manifolds of the
// origin. A branch is a truncated power series P(u, v) = sum a^{nm} u^n v^m in
// R^4 solving f(P(u, v)) = P(L1 u, L2 v), with (L1, L2) the stable rates
// (lambda1, lambda2) or the unstable rates (1/lambda1, 1/lambda2).

#include "dnls/kernels.hpp"
#include "dnls/lattice_maps.hpp"
#include "dnls/spectral.hpp"

#include <Eigen/Core>

#include <array>
#include <vector>

namespace dnls {

enum class Branch { Stable, Unstable };

/// Scalar two-variable polynomial truncated at total degree `order`.
class TriangularSeries {
public:
    TriangularSeries() = default;
    explicit TriangularSeries(int order)
        : order_(order), c_(kernels::tri_size(order), 0.0) {}

    int order() const { return order_; }
    double& operator()(int n, int m) { return c_[kernels::tri_index(n, m)]; }
    double operator()(int n, int m) const { return c_[kernels::tri_index(n, m)]; }
    std::span<const double> data() const { return c_; }
    std::span<double> data() { return c_; }

private:
    int order_ = 0;
    std::vector<double> c_;
};

/// The sum over i, j, k, l of a^{n-i,m-j} a^{i-k,j-l} a^{k,l}: the (n, m)
/// coefficient of the cube, by direct quadruple summation.
double cubic_convolution(const TriangularSeries& a, int n, int m);

/// Eigenvector normalization (u, v) -> (g1 u, g2 v). Only image points in R^4
/// are comparable across gauges.
struct GaugePolicy {
    enum class Kind {
        /// g_i is the largest scale for which the image of the i-th parameter
        /// axis over [-1, 1] stays within extent_factor * nonwandering bound.
        AxisExtent,
        /// g_i = 1: unit-norm eigenvectors.
        UnitEigenvectors,
        Explicit,
    };
    Kind kind = Kind::AxisExtent;
    double extent_factor = 1000.0;
    std::array<double, 2> scale{1.0, 1.0};

    static GaugePolicy unit() { return {Kind::UnitEigenvectors, 1000.0, {1.0, 1.0}}; }
    static GaugePolicy fixed(double g1, double g2) { return {Kind::Explicit, 1000.0, {g1, g2}}; }
};

struct ManifoldOptions {
    int order = 80;
    GaugePolicy gauge{};
    /// Relative tolerance on |k0(L)| below which a block is resonant.
    double resonance_tol = 1e-8;
    Execution exec = Execution::Parallel;
};

struct SeriesPoint {
    State4 value;
    Eigen::Matrix<double, 4, 2> jacobian;  // columns d/du, d/dv
};

class ManifoldSeries {
public:
    ManifoldSeries(const ModelParams& p, Branch branch, int order, std::array<double, 2> rates,
                   std::array<double, 2> scale, std::array<Eigen::Vector4d, 2> base_vectors);

    const ModelParams& params() const { return params_; }
    Branch branch() const { return branch_; }
    int order() const { return order_; }
    const std::array<double, 2>& rates() const { return rates_; }
    const std::array<double, 2>& scale() const { return scale_; }
    /// Unit-norm eigenvectors for the two rates (first component positive).
    const std::array<Eigen::Vector4d, 2>& base_vectors() const { return base_; }

    Eigen::Vector4d block(int n, int m) const;
    void set_block(int n, int m, const Eigen::Vector4d& a);
    const TriangularSeries& component(int i) const { return comp_[i]; }
    TriangularSeries& component(int i) { return comp_[i]; }

    /// Sum of all blocks, accumulated from the highest total degree down.
    State4 evaluate(double u, double v) const;
    Eigen::Matrix<double, 4, 2> jacobian(double u, double v) const;
    SeriesPoint evaluate_with_jacobian(double u, double v) const;

    /// Largest block magnitude over all components.
    double max_coefficient() const;

private:
    ModelParams params_;
    Branch branch_;
    int order_;
    std::array<double, 2> rates_;
    std::array<double, 2> scale_;
    std::array<Eigen::Vector4d, 2> base_;
    std::array<TriangularSeries, 4> comp_;
};

/// Rates and unit-norm eigenvectors for a branch; requires an all-real
/// hyperbolic spectrum with lambda1 != lambda2.
struct BranchSpectrum {
    std::array<double, 2> rates;
    std::array<Eigen::Vector4d, 2> vectors;
};
BranchSpectrum branch_spectrum(const ModelParams& p, Branch branch);

/// Block (n, m) of the series from the lower-order blocks already stored in
/// `partial`. Orders 0 and 1 are the origin and the scaled eigenvectors.
/// Throws NumericalError on resonance or overflow.
Eigen::Vector4d solve_order_block(const ManifoldSeries& partial, int n, int m,
                                  double resonance_tol = 1e-8);

/// Same, given the already computed cube coefficient of the third component.
Eigen::Vector4d solve_order_block(const ModelParams& p, std::array<double, 2> rates, int n,
                                  int m, double cube, double resonance_tol = 1e-8);

/// Gauge scales the policy selects for this branch (before the full build).
std::array<double, 2> select_gauge(const ModelParams& p, Branch branch, int order,
                                   const GaugePolicy& policy, double resonance_tol = 1e-8);

ManifoldSeries compute_manifold(const ModelParams& p, Branch branch,
                                const ManifoldOptions& opts = {});

/// Stable branch: max |f(P(u,v)) - P(L1 u, L2 v)|.
/// Unstable branch: max |f^{-1}(P(u,v)) - P(u/L1, v/L2)|, the same identity
/// written in the direction that keeps arguments inside the grid.
double conjugacy_residual(const ManifoldSeries& ms, const kernels::Grid& grid,
                          Execution exec = Execution::Parallel);

}  // namespace dnls

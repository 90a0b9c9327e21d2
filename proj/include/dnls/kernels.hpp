#pragma once

// Data-parallel inner loops. Every kernel has a serial path that is kept as
// the reference for tests and for the benchmark; the parallel path uses
// OpenMP and must agree with it bit for bit (each output entry is computed by
// exactly one thread with the same summation order).

#include <cstddef>
#include <span>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dnls {

enum class Execution { Serial, Parallel };

namespace kernels {

/// Offset of block (n, m) in storage ordered by total degree, then by n.
constexpr std::size_t tri_index(int n, int m) {
    const auto d = static_cast<std::size_t>(n + m);
    return d * (d + 1) / 2 + static_cast<std::size_t>(n);
}

constexpr std::size_t tri_size(int order) {
    const auto N = static_cast<std::size_t>(order);
    return (N + 1) * (N + 2) / 2;
}

/// Coefficients of x*y at total degree d, written to out[tri_index(n, d-n)].
/// Only x-blocks with total degree in [x_lo, x_hi] and y-blocks of degree
/// d - deg(x) contribute; callers use this to skip blocks known to vanish.
void product_degree(std::span<const double> x, std::span<const double> y, int d, int x_lo,
                    int x_hi, std::span<double> out, Execution exec);

struct Grid {
    double half_width = 1.0;
    int points = 41;

    double node(int k) const {
        return points == 1 ? 0.0 : -half_width + 2.0 * half_width * k / (points - 1);
    }
};

/// max over the grid of f(u, v). Reduction is over per-node values so the
/// result does not depend on thread count.
template <class F>
double grid_max(const Grid& grid, F&& f, Execution exec) {
    const int n = grid.points;
    double best = 0.0;
    if (exec == Execution::Parallel) {
#pragma omp parallel for collapse(2) reduction(max : best) schedule(static)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double r = f(grid.node(i), grid.node(j));
                if (r > best) best = r;
            }
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double r = f(grid.node(i), grid.node(j));
                if (r > best) best = r;
            }
    }
    return best;
}

}  // namespace kernels
}  // namespace dnls

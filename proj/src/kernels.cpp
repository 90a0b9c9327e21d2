#include "dnls/kernels.hpp"

#include <algorithm>

namespace dnls::kernels {

namespace {

double product_entry(std::span<const double> x, std::span<const double> y, int n, int m,
                     int x_lo, int x_hi) {
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const int j_lo = std::max(0, x_lo - i);
        const int j_hi = std::min(m, x_hi - i);
        for (int j = j_lo; j <= j_hi; ++j)
            acc += x[tri_index(i, j)] * y[tri_index(n - i, m - j)];
    }
    return acc;
}

}  // namespace

void product_degree(std::span<const double> x, std::span<const double> y, int d, int x_lo,
                    int x_hi, std::span<double> out, Execution exec) {
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (int n = 0; n <= d; ++n)
            out[tri_index(n, d - n)] = product_entry(x, y, n, d - n, x_lo, x_hi);
    } else {
        for (int n = 0; n <= d; ++n)
            out[tri_index(n, d - n)] = product_entry(x, y, n, d - n, x_lo, x_hi);
    }
}

}  // namespace dnls::kernels

#pragma once

// Homoclinic points of the origin as solutions of P^u(u1, v1) = P^s(u2, v2).

#include "dnls/manifold.hpp"

#include <array>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dnls {

struct HomoclinicSolution {
    double u1 = 0, v1 = 0, u2 = 0, v2 = 0;
    /// Midpoint of P^u(u1, v1) and P^s(u2, v2).
    State4 point = State4::Zero();
    /// |P^u(u1, v1) - P^s(u2, v2)|, Euclidean.
    double residual = 0;
    double det = 0;
    ModelParams params;
    int series_order = 0;
    /// Found as a point of Fix(sigma5).
    bool symmetric = false;
};

struct SearchOptions {
    double threshold = 1e-10;
    double box = 1.0;          // parameter box [-box, box]^2 for both series
    int seeds = 21;            // seed lattice points per axis
    double min_norm = 1e-6;    // excludes the origin, which always matches
    int max_iterations = 50;
    double step_tol = 1e-13;   // relative to max(1, |q|)
    int max_halvings = 20;
    double dedup_tol = 1e-8;   // image-space distance
    Execution exec = Execution::Parallel;
};

enum class MatchStatus {
    Converged,
    Trivial,
    SingularJacobian,
    ExitedBox,
    NoConvergence,
    ResidualTooLarge,
};

std::string_view to_string(MatchStatus s);

struct MatchOutcome {
    MatchStatus status = MatchStatus::NoConvergence;
    std::array<double, 4> q{};
    State4 point = State4::Zero();
    double residual = 0;
    int iterations = 0;

    bool accepted() const { return status == MatchStatus::Converged; }
};

/// Damped Newton on G(q) = P^u(u1, v1) - P^s(u2, v2).
MatchOutcome newton_match(const ManifoldSeries& Pu, const ManifoldSeries& Ps,
                          std::array<double, 4> guess, const SearchOptions& opts = {});

/// Builds the accepted solution (residual, det, metadata) from a converged outcome.
HomoclinicSolution make_solution(const ManifoldSeries& Pu, const ManifoldSeries& Ps,
                                 const MatchOutcome& m, bool symmetric);

struct SearchStats {
    int runs = 0;
    int converged = 0;
    /// Smallest residual among nontrivial candidates that failed the threshold.
    double best_rejected = std::numeric_limits<double>::infinity();
};

/// Newton from a seeds x seeds lattice of (u2, v2) in the half box u2 >= 0,
/// with (u1, v1) = (u2, v2); sigma4 supplies the other half. Deduplicated in
/// image space and sorted by residual.
std::vector<HomoclinicSolution> multistart_search(const ManifoldSeries& Pu,
                                                  const ManifoldSeries& Ps,
                                                  const SearchOptions& opts = {},
                                                  SearchStats* stats = nullptr);

/// Roots of P^s(u, v) in Fix(sigma5) = {x = w, y = z}; each is homoclinic by
/// reversibility and is confirmed with newton_match from (u, v, u, v).
std::vector<HomoclinicSolution> symmetric_search(const ManifoldSeries& Pu,
                                                 const ManifoldSeries& Ps,
                                                 const SearchOptions& opts = {},
                                                 SearchStats* stats = nullptr);

/// Merges solution lists, dropping image-space duplicates; sorted by residual.
std::vector<HomoclinicSolution> merge_solutions(std::vector<HomoclinicSolution> a,
                                                const std::vector<HomoclinicSolution>& b,
                                                double dedup_tol);

/// det of the 4x4 matrix with rows dP^u/du1, dP^u/dv1, dP^s/du2, dP^s/dv2.
double transversality_det(const ManifoldSeries& Pu, const ManifoldSeries& Ps,
                          const HomoclinicSolution& sol);

struct ScanOptions {
    int order = 80;
    GaugePolicy gauge{};
    SearchOptions search{};
    kernels::Grid residual_grid{1.0, 41};
    Execution exec = Execution::Parallel;
};

struct ScanCell {
    double epsilon = 0, A = 0;
    bool found = false;
    double best_residual = std::numeric_limits<double>::infinity();
    std::optional<HomoclinicSolution> solution;
    std::size_t solution_count = 0;
    double conjugacy_stable = std::numeric_limits<double>::quiet_NaN();
    double conjugacy_unstable = std::numeric_limits<double>::quiet_NaN();
    /// Empty unless the cell failed (non-hyperbolic, resonance, ...).
    std::string error;
};

struct CellResult {
    ScanCell cell;
    std::vector<HomoclinicSolution> solutions;
    std::optional<ManifoldSeries> unstable, stable;
};

/// The symmetric solution with positive first coordinate if there is one,
/// otherwise the first (lowest residual).
std::optional<HomoclinicSolution> primary_solution(const std::vector<HomoclinicSolution>& sols);

/// Full procedure for one (epsilon, A): both manifolds, conjugacy check,
/// symmetric then multistart search. Failures are recorded, never thrown.
CellResult analyze_cell(double epsilon, double A, const ScanOptions& opts, Execution inner);

/// Cells in row-major order (eps outer, A inner), computed concurrently.
std::vector<ScanCell> scan_parameters(std::span<const double> eps, std::span<const double> A,
                                      const ScanOptions& opts = {});

struct PolynomialFit {
    std::vector<double> coeffs;      // ascending powers of A
    std::vector<double> real_roots;  // ascending
    double condition = 0;            // of the scaled design matrix
    bool ill_conditioned = false;

    double operator()(double x) const;
};

/// Least-squares polynomial fit of det against A, with the real roots of the fit.
PolynomialFit det_curve_fit(std::span<const double> A, std::span<const double> det, int degree);

}  // namespace dnls

#include "dnls/homoclinic.hpp"

#include "dnls/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace dnls {

std::string_view to_string(MatchStatus s) {
    switch (s) {
        case MatchStatus::Converged: return "converged";
        case MatchStatus::Trivial: return "trivial";
        case MatchStatus::SingularJacobian: return "singular-jacobian";
        case MatchStatus::ExitedBox: return "exited-box";
        case MatchStatus::NoConvergence: return "no-convergence";
        case MatchStatus::ResidualTooLarge: return "residual-too-large";
    }
    return "unknown";
}

namespace {

bool in_box(const double* q, int n, double box) {
    for (int i = 0; i < n; ++i)
        if (!(std::abs(q[i]) <= box)) return false;
    return true;
}

// Damped Newton shared by the 4x4 matching system and the 2x2 symmetric
// system. `eval(q, G, J)` fills the residual and its Jacobian.
template <int Dim, class Eval>
MatchOutcome damped_newton(std::array<double, Dim> q, const SearchOptions& opts, Eval&& eval) {
    using Vec = Eigen::Matrix<double, Dim, 1>;
    using Mat = Eigen::Matrix<double, Dim, Dim>;

    MatchOutcome out;
    Vec G;
    Mat J;
    eval(q, G, J);
    double gnorm = G.norm();
    const auto finish = [&](MatchStatus s, int it) {
        out.status = s;
        out.iterations = it;
        out.residual = gnorm;
        for (int i = 0; i < Dim; ++i) out.q[i] = q[i];
        return out;
    };

    for (int it = 0; it < opts.max_iterations; ++it) {
        if (!std::isfinite(gnorm)) return finish(MatchStatus::NoConvergence, it);
        if (gnorm == 0.0) return finish(MatchStatus::Converged, it);
        Eigen::PartialPivLU<Mat> lu(J);
        if (!(lu.rcond() > 1e-15)) return finish(MatchStatus::SingularJacobian, it);
        const Vec delta = lu.solve(-G);

        double t = 1.0;
        bool accepted = false, any_inside = false;
        std::array<double, Dim> trial{};
        Vec Gt;
        Mat Jt;
        for (int h = 0; h <= opts.max_halvings; ++h, t *= 0.5) {
            for (int i = 0; i < Dim; ++i) trial[i] = q[i] + t * delta[i];
            if (!in_box(trial.data(), Dim, opts.box)) continue;
            any_inside = true;
            eval(trial, Gt, Jt);
            if (Gt.norm() < gnorm) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (!any_inside) return finish(MatchStatus::ExitedBox, it);
            // No descent left: the residual sits at the rounding floor.
            return finish(gnorm < opts.threshold ? MatchStatus::Converged
                                                 : MatchStatus::NoConvergence,
                          it);
        }
        const double step = t * delta.norm();
        q = trial;
        G = Gt;
        J = Jt;
        gnorm = G.norm();
        double qnorm = 0.0;
        for (double x : q) qnorm += x * x;
        if (step < opts.step_tol * std::max(1.0, std::sqrt(qnorm)) && gnorm < opts.threshold)
            return finish(MatchStatus::Converged, it + 1);
    }
    return finish(gnorm < opts.threshold ? MatchStatus::Converged : MatchStatus::NoConvergence,
                  opts.max_iterations);
}

}  // namespace

MatchOutcome newton_match(const ManifoldSeries& Pu, const ManifoldSeries& Ps,
                          std::array<double, 4> guess, const SearchOptions& opts) {
    if (Pu.params().epsilon != Ps.params().epsilon || Pu.params().A != Ps.params().A)
        throw ConfigError("stable and unstable series were built for different parameters");
    if (!in_box(guess.data(), 4, opts.box)) {
        MatchOutcome out;
        out.status = MatchStatus::ExitedBox;
        out.q = guess;
        return out;
    }
    const auto eval = [&](const std::array<double, 4>& q, Eigen::Vector4d& G, Eigen::Matrix4d& J) {
        const SeriesPoint pu = Pu.evaluate_with_jacobian(q[0], q[1]);
        const SeriesPoint ps = Ps.evaluate_with_jacobian(q[2], q[3]);
        G = pu.value - ps.value;
        J.leftCols<2>() = pu.jacobian;
        J.rightCols<2>() = -ps.jacobian;
    };
    MatchOutcome out = damped_newton<4>(guess, opts, eval);
    const State4 a = Pu.evaluate(out.q[0], out.q[1]);
    const State4 b = Ps.evaluate(out.q[2], out.q[3]);
    out.point = 0.5 * (a + b);
    out.residual = (a - b).norm();
    if (out.status == MatchStatus::Converged) {
        if (out.point.norm() <= opts.min_norm)
            out.status = MatchStatus::Trivial;
        else if (!(out.residual < opts.threshold))
            out.status = MatchStatus::ResidualTooLarge;
    }
    return out;
}

double transversality_det(const ManifoldSeries& Pu, const ManifoldSeries& Ps,
                          const HomoclinicSolution& sol) {
    const auto ju = Pu.jacobian(sol.u1, sol.v1);
    const auto js = Ps.jacobian(sol.u2, sol.v2);
    Eigen::Matrix4d M;
    M.row(0) = ju.col(0).transpose();
    M.row(1) = ju.col(1).transpose();
    M.row(2) = js.col(0).transpose();
    M.row(3) = js.col(1).transpose();
    return M.determinant();
}

HomoclinicSolution make_solution(const ManifoldSeries& Pu, const ManifoldSeries& Ps,
                                 const MatchOutcome& m, bool symmetric) {
    HomoclinicSolution s;
    s.u1 = m.q[0];
    s.v1 = m.q[1];
    s.u2 = m.q[2];
    s.v2 = m.q[3];
    s.point = m.point;
    s.residual = m.residual;
    s.params = Ps.params();
    s.series_order = Ps.order();
    s.symmetric = symmetric;
    s.det = transversality_det(Pu, Ps, s);
    return s;
}

namespace {

// sigma4 image: P is odd in (u, v), so negating parameters negates the point.
HomoclinicSolution negated(const ManifoldSeries& Pu, const ManifoldSeries& Ps,
                           const HomoclinicSolution& s) {
    MatchOutcome m;
    m.q = {-s.u1, -s.v1, -s.u2, -s.v2};
    const State4 a = Pu.evaluate(m.q[0], m.q[1]);
    const State4 b = Ps.evaluate(m.q[2], m.q[3]);
    m.point = 0.5 * (a + b);
    m.residual = (a - b).norm();
    return make_solution(Pu, Ps, m, s.symmetric);
}

bool admissible(const HomoclinicSolution& s, const SearchOptions& opts, double bound) {
    return s.residual < opts.threshold && s.point.norm() > opts.min_norm &&
           s.point.lpNorm<Eigen::Infinity>() <= bound;
}

std::vector<std::array<double, 2>> half_lattice(const SearchOptions& opts) {
    const kernels::Grid g{opts.box, opts.seeds};
    std::vector<std::array<double, 2>> seeds;
    for (int i = 0; i < opts.seeds; ++i)
        for (int j = 0; j < opts.seeds; ++j) {
            const double u = g.node(i), v = g.node(j);
            if (u < 0.0 || (u == 0.0 && v < 0.0)) continue;
            seeds.push_back({u, v});
        }
    return seeds;
}

void record(SearchStats* stats, const MatchOutcome& m, const SearchOptions& opts) {
    if (!stats) return;
    ++stats->runs;
    if (m.accepted()) ++stats->converged;
    if (m.status == MatchStatus::ResidualTooLarge ||
        (m.status == MatchStatus::NoConvergence && m.point.norm() > opts.min_norm &&
         std::isfinite(m.residual)))
        stats->best_rejected = std::min(stats->best_rejected, m.residual);
}

std::vector<HomoclinicSolution> finalize(const ManifoldSeries& Pu, const ManifoldSeries& Ps,
                                         std::vector<HomoclinicSolution> found,
                                         const SearchOptions& opts) {
    const double bound = nonwandering_bound(Ps.params(), 4);
    std::vector<HomoclinicSolution> out;
    for (const auto& s : found) {
        out = merge_solutions(std::move(out), {s}, opts.dedup_tol);
        const auto n = negated(Pu, Ps, s);
        if (admissible(n, opts, bound)) out = merge_solutions(std::move(out), {n}, opts.dedup_tol);
    }
    std::erase_if(out, [&](const HomoclinicSolution& s) { return !admissible(s, opts, bound); });
    return out;
}

}  // namespace

std::vector<HomoclinicSolution> merge_solutions(std::vector<HomoclinicSolution> a,
                                                const std::vector<HomoclinicSolution>& b,
                                                double dedup_tol) {
    for (const auto& s : b) {
        auto dup = std::find_if(a.begin(), a.end(), [&](const HomoclinicSolution& t) {
            return (t.point - s.point).norm() < dedup_tol;
        });
        if (dup == a.end())
            a.push_back(s);
        else {
            const bool symmetric = s.symmetric || dup->symmetric;
            if (s.residual < dup->residual) *dup = s;
            dup->symmetric = symmetric;
        }
    }
    std::stable_sort(a.begin(), a.end(), [](const auto& x, const auto& y) {
        if (x.residual != y.residual) return x.residual < y.residual;
        return std::lexicographical_compare(x.point.data(), x.point.data() + 4, y.point.data(),
                                            y.point.data() + 4);
    });
    return a;
}

std::vector<HomoclinicSolution> multistart_search(const ManifoldSeries& Pu,
                                                  const ManifoldSeries& Ps,
                                                  const SearchOptions& opts, SearchStats* stats) {
    const auto seeds = half_lattice(opts);
    const int n = static_cast<int>(seeds.size());
    std::vector<MatchOutcome> outcomes(n);
    const auto run = [&](int k) {
        const auto [u, v] = seeds[k];
        outcomes[k] = newton_match(Pu, Ps, {u, v, u, v}, opts);
    };
    if (opts.exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int k = 0; k < n; ++k) run(k);
    } else {
        for (int k = 0; k < n; ++k) run(k);
    }

    std::vector<HomoclinicSolution> found;
    for (const auto& m : outcomes) {
        record(stats, m, opts);
        if (m.accepted()) found.push_back(make_solution(Pu, Ps, m, false));
    }
    return finalize(Pu, Ps, std::move(found), opts);
}

std::vector<HomoclinicSolution> symmetric_search(const ManifoldSeries& Pu,
                                                 const ManifoldSeries& Ps,
                                                 const SearchOptions& opts, SearchStats* stats) {
    const auto seeds = half_lattice(opts);
    const int n = static_cast<int>(seeds.size());
    std::vector<MatchOutcome> outcomes(n);

    // (x - w, y - z) vanishes exactly on Fix(sigma5).
    const auto eval = [&](const std::array<double, 2>& q, Eigen::Vector2d& H, Eigen::Matrix2d& J) {
        const SeriesPoint p = Ps.evaluate_with_jacobian(q[0], q[1]);
        H << p.value[0] - p.value[3], p.value[1] - p.value[2];
        J.row(0) = p.jacobian.row(0) - p.jacobian.row(3);
        J.row(1) = p.jacobian.row(1) - p.jacobian.row(2);
    };
    const auto run = [&](int k) {
        const MatchOutcome root = damped_newton<2>(seeds[k], opts, eval);
        MatchOutcome& m = outcomes[k];
        if (root.status != MatchStatus::Converged) {
            m = root;
            m.q = {root.q[0], root.q[1], root.q[0], root.q[1]};
            m.point = Ps.evaluate(root.q[0], root.q[1]);
            return;
        }
        const State4 p = Ps.evaluate(root.q[0], root.q[1]);
        if (p.norm() <= opts.min_norm) {
            m = root;
            m.status = MatchStatus::Trivial;
            m.point = p;
            return;
        }
        m = newton_match(Pu, Ps, {root.q[0], root.q[1], root.q[0], root.q[1]}, opts);
    };
    if (opts.exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int k = 0; k < n; ++k) run(k);
    } else {
        for (int k = 0; k < n; ++k) run(k);
    }

    std::vector<HomoclinicSolution> found;
    for (const auto& m : outcomes) {
        record(stats, m, opts);
        if (m.accepted()) found.push_back(make_solution(Pu, Ps, m, true));
    }
    return finalize(Pu, Ps, std::move(found), opts);
}

CellResult analyze_cell(double epsilon, double A, const ScanOptions& opts, Execution inner) {
    CellResult res;
    ScanCell& cell = res.cell;
    cell.epsilon = epsilon;
    cell.A = A;
    try {
        const ModelParams p{epsilon, A};
        ManifoldOptions mo;
        mo.order = opts.order;
        mo.gauge = opts.gauge;
        mo.exec = inner;
        const ManifoldSeries Ps = compute_manifold(p, Branch::Stable, mo);
        const ManifoldSeries Pu = compute_manifold(p, Branch::Unstable, mo);
        cell.conjugacy_stable = conjugacy_residual(Ps, opts.residual_grid, inner);
        cell.conjugacy_unstable = conjugacy_residual(Pu, opts.residual_grid, inner);

        SearchOptions so = opts.search;
        so.exec = inner;
        SearchStats stats;
        auto sols = symmetric_search(Pu, Ps, so, &stats);
        sols = merge_solutions(std::move(sols), multistart_search(Pu, Ps, so, &stats),
                               so.dedup_tol);
        cell.found = !sols.empty();
        cell.solution_count = sols.size();
        if (cell.found) {
            cell.solution = primary_solution(sols);
            cell.best_residual = sols.front().residual;
        } else {
            cell.best_residual = stats.best_rejected;
        }
        res.solutions = std::move(sols);
        res.unstable = Pu;
        res.stable = Ps;
    } catch (const std::exception& e) {
        cell.error = e.what();
    }
    return res;
}

std::optional<HomoclinicSolution> primary_solution(const std::vector<HomoclinicSolution>& sols) {
    for (const auto& s : sols)
        if (s.symmetric && s.point[0] > 0) return s;
    if (sols.empty()) return std::nullopt;
    return sols.front();
}

std::vector<ScanCell> scan_parameters(std::span<const double> eps, std::span<const double> A,
                                      const ScanOptions& opts) {
    if (eps.empty() || A.empty()) throw ConfigError("scan grids must be nonempty");
    const int ne = static_cast<int>(eps.size()), na = static_cast<int>(A.size());
    std::vector<ScanCell> cells(static_cast<std::size_t>(ne) * na);
    const auto run = [&](int k) { cells[k] = analyze_cell(eps[k / na], A[k % na], opts, Execution::Serial).cell; };
    if (opts.exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int k = 0; k < ne * na; ++k) run(k);
    } else {
        for (int k = 0; k < ne * na; ++k) run(k);
    }
    return cells;
}

double PolynomialFit::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

PolynomialFit det_curve_fit(std::span<const double> A, std::span<const double> det, int degree) {
    if (degree < 0) throw ConfigError("fit degree must be nonnegative");
    if (A.size() != det.size()) throw ConfigError("sample arrays differ in length");
    if (A.size() < static_cast<std::size_t>(degree) + 1)
        throw ConfigError("need at least degree + 1 samples");

    // Fit in t = (A - c) / h on [-1, 1], then expand back to powers of A.
    const auto [lo, hi] = std::minmax_element(A.begin(), A.end());
    const double c = 0.5 * (*lo + *hi);
    const double h = *hi > *lo ? 0.5 * (*hi - *lo) : 1.0;
    const int n = static_cast<int>(A.size()), k = degree + 1;
    Eigen::MatrixXd V(n, k);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        const double t = (A[i] - c) / h;
        double pw = 1.0;
        for (int j = 0; j < k; ++j, pw *= t) V(i, j) = pw;
        y[i] = det[i];
    }
    PolynomialFit fit;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(V);
    const auto& sv = svd.singularValues();
    fit.condition = sv[sv.size() - 1] > 0 ? sv[0] / sv[sv.size() - 1]
                                          : std::numeric_limits<double>::infinity();
    fit.ill_conditioned = !(fit.condition < 1e10);
    const Eigen::VectorXd b = V.colPivHouseholderQr().solve(y);

    // p(A) = sum_j b_j ((A - c)/h)^j
    fit.coeffs.assign(k, 0.0);
    for (int j = 0; j < k; ++j) {
        const double scale = b[j] / std::pow(h, j);
        double binom = 1.0;
        for (int i = 0; i <= j; ++i) {
            fit.coeffs[i] += scale * binom * std::pow(-c, j - i);
            binom = binom * (j - i) / (i + 1);
        }
    }

    // Real roots of the t-polynomial via its companion matrix.
    int top = k - 1;
    const double bmax = b.cwiseAbs().maxCoeff();
    while (top > 0 && std::abs(b[top]) <= 1e-12 * bmax) --top;
    if (top >= 1) {
        Eigen::MatrixXd C = Eigen::MatrixXd::Zero(top, top);
        for (int i = 1; i < top; ++i) C(i, i - 1) = 1.0;
        for (int i = 0; i < top; ++i) C(i, top - 1) = -b[i] / b[top];
        const Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
        for (const auto& z : es.eigenvalues()) {
            if (std::abs(z.imag()) > 1e-8 * std::max(1.0, std::abs(z))) continue;
            double t = z.real();
            for (int it = 0; it < 5; ++it) {
                double p = 0.0, dp = 0.0;
                for (int j = top; j >= 0; --j) {
                    dp = dp * t + p;
                    p = p * t + b[j];
                }
                if (dp == 0.0) break;
                t -= p / dp;
            }
            fit.real_roots.push_back(c + h * t);
        }
        std::sort(fit.real_roots.begin(), fit.real_roots.end());
    }
    return fit;
}

}  // namespace dnls

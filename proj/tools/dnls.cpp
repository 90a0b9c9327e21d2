// dnls: command-line front end. Every command reads an optional JSON config,
// applies flag overrides, and writes JSON/CSV into --out.

#include "dnls/errors.hpp"
#include "dnls/io.hpp"
#include "dnls/soliton.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace dnls;
using io::json;

namespace {

struct Flags {
    std::optional<double> epsilon, A, threshold, box, A_min, A_max;
    std::optional<int> order, seeds, workers, A_steps, degree;
    std::optional<std::size_t> steps;
    std::optional<std::vector<double>> epsilons, As;
    std::optional<std::string> out;
    std::string config_path;
};

struct RunConfig {
    std::string command;
    double epsilon = 0.0004;
    double A = -0.125;
    int order = 80;
    double threshold = 1e-10;
    double box = 1.0;
    int seeds = 21;
    int workers = 0;
    std::string out = "out";
    std::vector<double> epsilons{-0.5, -0.1, 0.0004, 0.01, 0.1, 1.0};
    std::vector<double> As{-0.145, -0.13, -0.115};
    double A_min = -0.145, A_max = -0.115;
    int A_steps = 31;
    int degree = 4;
    std::size_t steps = 10000;

    json to_json() const {
        json j{{"command", command}, {"epsilon", epsilon}, {"A", A},
               {"order", order},     {"threshold", threshold}, {"box", box},
               {"seeds", seeds},     {"workers", workers},     {"out", out}};
        if (command == "scan") {
            j["epsilons"] = epsilons;
            j["As"] = As;
        }
        if (command == "transversality") {
            j["A_min"] = A_min;
            j["A_max"] = A_max;
            j["A_steps"] = A_steps;
            j["degree"] = degree;
        }
        if (command == "portrait") j["steps"] = steps;
        return j;
    }
};

template <class T>
void merge(T& field, const std::optional<T>& flag, const json& cfg, const char* key) {
    if (flag) {
        field = *flag;
    } else if (cfg.contains(key)) {
        try {
            field = cfg.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config key '") + key + "': " + e.what());
        }
    }
}

RunConfig resolve(const std::string& command, const Flags& f, bool epsilon_default_small) {
    json cfg = json::object();
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw ConfigError("cannot read config " + f.config_path);
        try {
            cfg = json::parse(in);
        } catch (const json::exception& e) {
            throw ConfigError("config " + f.config_path + ": " + e.what());
        }
        if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
    }
    RunConfig rc;
    rc.command = command;
    if (epsilon_default_small) rc.epsilon = 0.0002;
    merge(rc.epsilon, f.epsilon, cfg, "epsilon");
    merge(rc.A, f.A, cfg, "A");
    merge(rc.order, f.order, cfg, "order");
    merge(rc.threshold, f.threshold, cfg, "threshold");
    merge(rc.box, f.box, cfg, "box");
    merge(rc.seeds, f.seeds, cfg, "seeds");
    merge(rc.workers, f.workers, cfg, "workers");
    merge(rc.out, f.out, cfg, "out");
    merge(rc.epsilons, f.epsilons, cfg, "epsilons");
    merge(rc.As, f.As, cfg, "As");
    merge(rc.A_min, f.A_min, cfg, "A_min");
    merge(rc.A_max, f.A_max, cfg, "A_max");
    merge(rc.A_steps, f.A_steps, cfg, "A_steps");
    merge(rc.degree, f.degree, cfg, "degree");
    merge(rc.steps, f.steps, cfg, "steps");

    if (rc.order < 1) throw ConfigError("order must be at least 1");
    if (!(rc.threshold > 0)) throw ConfigError("threshold must be positive");
    if (!(rc.box > 0)) throw ConfigError("box must be positive");
    if (rc.seeds < 1) throw ConfigError("seeds must be at least 1");
    if (rc.workers < 0) throw ConfigError("workers must be nonnegative");
    if (rc.epsilons.empty() || rc.As.empty()) throw ConfigError("scan grids must be nonempty");
    if (rc.A_steps < 2) throw ConfigError("A_steps must be at least 2");
    if (rc.degree < 0) throw ConfigError("degree must be nonnegative");
#ifdef _OPENMP
    if (rc.workers > 0) omp_set_num_threads(rc.workers);
#endif
    return rc;
}

void emit(const RunConfig& rc, const std::string& name, const std::string& text) {
    const std::string path = rc.out + "/" + name;
    io::write_text(path, text);
    std::cout << "wrote " << path << '\n';
}

void emit_json(const RunConfig& rc, const std::string& name, json body) {
    json doc = io::provenance(rc.to_json());
    for (auto& [k, v] : body.items()) doc[k] = v;
    emit(rc, name, doc.dump(2) + "\n");
}

// The stable and unstable branches require an all-real spectrum at the origin.
void require_all_real(const ModelParams& p) {
    p.validate();
    const SpectrumClass c = classify_eigenvalues(p.A, FixedPointKind::Origin);
    if (c != SpectrumClass::AllReal)
        throw ConfigError("A = " + io::format_double(p.A) + " gives a " +
                          std::string(to_string(c)) +
                          " spectrum at the origin; manifolds are computed only when all four "
                          "eigenvalues are real, i.e. for A in [(-2+sqrt(2))/4, 0)");
}

ScanOptions scan_options(const RunConfig& rc) {
    ScanOptions so;
    so.order = rc.order;
    so.search.threshold = rc.threshold;
    so.search.box = rc.box;
    so.search.seeds = rc.seeds;
    so.residual_grid = {rc.box, 41};
    return so;
}

int cmd_eigen(const RunConfig& rc) {
    const ModelParams p{rc.epsilon, rc.A};
    p.validate();
    json body;
    const auto q0 = characteristic_poly(p, FixedPointKind::Origin);
    EigenSystem es = solve_reciprocal_quartic(q0);
    es.classification = classify_eigenvalues(p.A, FixedPointKind::Origin);
    if (es.hyperbolic) es = eigenvectors_at_origin(p, es);
    body["origin"] = {{"characteristic_poly", {{"a", q0.a}, {"b", q0.b}}},
                      {"discriminant", discriminant(p, FixedPointKind::Origin)},
                      {"sturm", to_string(sturm_real_root_test(q0))},
                      {"spectrum", io::to_json(es)}};
    if (p.epsilon * p.A < 0) {
        const auto q1 = characteristic_poly(p, FixedPointKind::Nontrivial);
        EigenSystem e1 = solve_reciprocal_quartic(q1);
        e1.classification = classify_eigenvalues(p.A, FixedPointKind::Nontrivial);
        body["nontrivial"] = {{"characteristic_poly", {{"a", q1.a}, {"b", q1.b}}},
                              {"discriminant", discriminant(p, FixedPointKind::Nontrivial)},
                              {"sturm", to_string(sturm_real_root_test(q1))},
                              {"spectrum", io::to_json(e1)}};
    }
    std::cout << "origin spectrum: " << to_string(es.classification) << '\n';
    for (const auto& l : es.lambda) std::cout << "  " << l.real() << (l.imag() < 0 ? " - " : " + ")
                                              << std::abs(l.imag()) << "i\n";
    emit_json(rc, "eigen.json", body);
    return 0;
}

int cmd_manifold(const RunConfig& rc) {
    const ModelParams p{rc.epsilon, rc.A};
    require_all_real(p);
    if (rc.order == 1) std::cerr << "warning: order 1 gives the linear (eigenspace) approximation only\n";
    ManifoldOptions mo;
    mo.order = rc.order;
    const kernels::Grid grid{rc.box, 41};
    for (Branch b : {Branch::Stable, Branch::Unstable}) {
        const ManifoldSeries s = compute_manifold(p, b, mo);
        const double r = conjugacy_residual(s, grid);
        const std::string name = b == Branch::Stable ? "stable" : "unstable";
        std::cout << name << ": rates " << s.rates()[0] << ", " << s.rates()[1] << "; scale "
                  << s.scale()[0] << ", " << s.scale()[1] << "; conjugacy residual " << r << '\n';
        emit_json(rc, "manifold_" + name + ".json",
                  {{"conjugacy_residual", r}, {"series", io::to_json(s)}});
    }
    return 0;
}

int cmd_homoclinic(const RunConfig& rc) {
    require_all_real({rc.epsilon, rc.A});
    const CellResult r = analyze_cell(rc.epsilon, rc.A, scan_options(rc), Execution::Parallel);
    if (!r.cell.error.empty()) throw std::runtime_error(r.cell.error);
    json sols = json::array();
    for (const auto& s : r.solutions) sols.push_back(io::to_json(s));
    std::cout << r.solutions.size() << " homoclinic point(s) with residual < " << rc.threshold
              << '\n';
    for (const auto& s : r.solutions)
        std::cout << "  (" << io::format_double(s.point[0]) << ", " << io::format_double(s.point[1])
                  << ", " << io::format_double(s.point[2]) << ", "
                  << io::format_double(s.point[3]) << ") residual " << s.residual << " det "
                  << s.det << (s.symmetric ? " symmetric" : "") << '\n';
    emit_json(rc, "homoclinic.json", {{"cell", io::to_json(r.cell)}, {"solutions", sols}});
    return 0;
}

int cmd_scan(const RunConfig& rc) {
    const std::vector<ScanCell> cells = scan_parameters(rc.epsilons, rc.As, scan_options(rc));
    json arr = json::array();
    for (const auto& c : cells) {
        arr.push_back(io::to_json(c));
        std::cout << "eps " << c.epsilon << " A " << c.A << ": "
                  << (c.found ? "found" : "none") << " (best residual " << c.best_residual
                  << ")" << (c.error.empty() ? "" : " error: " + c.error) << '\n';
    }
    emit_json(rc, "scan.json", {{"cells", arr}});
    std::ostringstream csv;
    io::write_scan_csv(csv, cells);
    emit(rc, "scan.csv", csv.str());
    return 0;
}

int cmd_transversality(const RunConfig& rc) {
    if (!(rc.A_min < rc.A_max)) throw ConfigError("A_min must be below A_max");
    ScanOptions so = scan_options(rc);
    std::vector<double> As, dets, unit;
    json rows = json::array();
    for (int i = 0; i < rc.A_steps; ++i) {
        const double A = rc.A_min + (rc.A_max - rc.A_min) * i / (rc.A_steps - 1);
        require_all_real({rc.epsilon, A});
        const CellResult r = analyze_cell(rc.epsilon, A, so, Execution::Parallel);
        if (!r.cell.error.empty()) throw std::runtime_error(r.cell.error);
        const auto sol = primary_solution(r.solutions);
        if (!sol) {
            rows.push_back({{"A", A}, {"found", false}});
            std::cout << "A " << A << ": no homoclinic\n";
            continue;
        }
        // det is multilinear in the four tangent vectors, so dividing out the
        // gauge scales gives its value for unit eigenvectors.
        const double g = r.stable->scale()[0] * r.stable->scale()[1] * r.unstable->scale()[0] *
                         r.unstable->scale()[1];
        As.push_back(A);
        dets.push_back(sol->det);
        unit.push_back(sol->det / g);
        rows.push_back({{"A", A}, {"found", true}, {"det", sol->det}, {"det_unit_gauge", sol->det / g},
                        {"solution", io::to_json(*sol)}});
        std::cout << "A " << io::format_double(A) << ": det " << sol->det << '\n';
    }
    json body{{"curve", rows}};
    if (static_cast<int>(As.size()) > rc.degree) {
        const PolynomialFit fit = det_curve_fit(As, dets, rc.degree);
        body["fit"] = io::to_json(fit);
        std::cout << "fit roots:";
        for (double x : fit.real_roots) std::cout << ' ' << x;
        std::cout << (fit.ill_conditioned ? " (ill-conditioned)" : "") << '\n';
    }
    emit_json(rc, "transversality.json", body);
    std::ostringstream csv;
    io::write_curve_csv(csv, As, dets);
    emit(rc, "transversality.csv", csv.str());
    return 0;
}

int cmd_soliton(const RunConfig& rc) {
    require_all_real({rc.epsilon, rc.A});
    const CellResult r = analyze_cell(rc.epsilon, rc.A, scan_options(rc), Execution::Parallel);
    if (!r.cell.error.empty()) throw std::runtime_error(r.cell.error);
    const auto sol = primary_solution(r.solutions);
    if (!sol) {
        std::cerr << "no homoclinic point with residual < " << rc.threshold << '\n';
        return 3;
    }
    const SolitonProfile prof = build_profile(*sol, *r.unstable, *r.stable);
    std::cout << prof.samples.size() << " sites, stationary residual " << prof.residual_max
              << ", tail ratios " << prof.decay_backward << " / " << prof.decay_forward << '\n';
    emit_json(rc, "soliton.json", {{"solution", io::to_json(*sol)}, {"profile", io::to_json(prof)}});
    std::ostringstream csv;
    io::write_profile_csv(csv, prof);
    emit(rc, "soliton.csv", csv.str());
    return 0;
}

int cmd_portrait(const RunConfig& rc) {
    const ModelParams p{rc.epsilon, 0.0};
    const auto seeds = default_portrait_seeds();
    const auto orbits = portrait_2d(p, seeds, rc.steps);
    json summary = json::array();
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        summary.push_back({{"seed", {seeds[k][0], seeds[k][1]}},
                           {"escaped", orbits[k].escaped},
                           {"iterations", orbits[k].states.size() - 1}});
        std::cout << "seed (" << seeds[k][0] << ", " << seeds[k][1] << "): "
                  << (orbits[k].escaped ? "escaped" : "bounded") << " after "
                  << orbits[k].states.size() - 1 << " steps\n";
    }
    emit_json(rc, "portrait.json", {{"orbits", summary}});
    std::ostringstream csv;
    io::write_portrait_csv(csv, orbits);
    emit(rc, "portrait.csv", csv.str());
    return 0;
}

void add_common(CLI::App* sub, Flags& f, bool grids) {
    sub->add_option("--epsilon", f.epsilon, "coupling strength");
    sub->add_option("--A", f.A, "next-nearest-neighbor weight");
    sub->add_option("--order", f.order, "series order N (default 80)");
    sub->add_option("--threshold", f.threshold, "matching residual threshold (default 1e-10)");
    sub->add_option("--box", f.box, "parameter box half-width (default 1)");
    sub->add_option("--seeds", f.seeds, "seed lattice points per axis (default 21)");
    sub->add_option("--out", f.out, "output directory (default out)");
    sub->add_option("--workers", f.workers, "OpenMP threads (default: all)");
    sub->add_option("--config", f.config_path, "JSON config; flags override it");
    if (grids) {
        sub->add_option("--epsilons", f.epsilons, "scan grid for epsilon")->delimiter(',');
        sub->add_option("--As", f.As, "scan grid for A")->delimiter(',');
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stationary DNLS solitons with next-nearest-neighbor coupling"};
    app.set_version_flag("--version", io::artifact_version());
    app.require_subcommand(1);
    Flags f;

    struct Command {
        const char* name;
        const char* help;
        int (*run)(const RunConfig&);
    };
    const Command commands[] = {
        {"eigen", "spectrum and discriminants at the fixed points", cmd_eigen},
        {"manifold", "stable and unstable series with conjugacy residuals", cmd_manifold},
        {"homoclinic", "homoclinic points for one (epsilon, A)", cmd_homoclinic},
        {"scan", "homoclinic search over an (epsilon, A) grid", cmd_scan},
        {"transversality", "det curve against A at fixed epsilon", cmd_transversality},
        {"soliton", "stationary profile from the symmetric homoclinic", cmd_soliton},
        {"portrait", "orbits of the planar map", cmd_portrait},
    };
    std::vector<std::pair<CLI::App*, const Command*>> subs;
    for (const auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        add_common(sub, f, std::string(c.name) == "scan");
        if (std::string(c.name) == "transversality") {
            sub->add_option("--A-min", f.A_min, "lower end of the A range (default -0.145)");
            sub->add_option("--A-max", f.A_max, "upper end of the A range (default -0.115)");
            sub->add_option("--A-steps", f.A_steps, "number of A samples (default 31)");
            sub->add_option("--degree", f.degree, "fit degree (default 4)");
        }
        if (std::string(c.name) == "portrait")
            sub->add_option("--steps", f.steps, "iterations per seed (default 10000)");
        subs.emplace_back(sub, &c);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        for (const auto& [sub, c] : subs) {
            if (!sub->parsed()) continue;
            const std::string name = c->name;
            const RunConfig rc = resolve(name, f, name == "transversality");
            return c->run(rc);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
    return 2;
}

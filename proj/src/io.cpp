#include "dnls/io.hpp"

#include "dnls/errors.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace dnls::io {

std::string artifact_version() { return DNLS_VERSION; }

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

json provenance(const json& config) {
    return json{{"version", artifact_version()}, {"config", config}};
}

json to_json(const ModelParams& p) { return json{{"epsilon", p.epsilon}, {"A", p.A}}; }

ModelParams params_from_json(const json& j) {
    return {j.at("epsilon").get<double>(), j.at("A").get<double>()};
}

namespace {

json vec(const Eigen::Vector4d& v) { return json::array({v[0], v[1], v[2], v[3]}); }

Eigen::Vector4d vec_from(const json& j) {
    if (!j.is_array() || j.size() != 4) throw ConfigError("expected a 4-vector");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json to_json(const ManifoldSeries& s) {
    json coeffs = json::array();
    for (int d = 0; d <= s.order(); ++d)
        for (int n = 0; n <= d; ++n) {
            const Eigen::Vector4d a = s.block(n, d - n);
            coeffs.push_back(json::array({n, d - n, a[0], a[1], a[2], a[3]}));
        }
    return json{{"params", to_json(s.params())},
                {"branch", s.branch() == Branch::Stable ? "stable" : "unstable"},
                {"order", s.order()},
                {"rates", s.rates()},
                {"scale", s.scale()},
                {"base_vectors", json::array({vec(s.base_vectors()[0]), vec(s.base_vectors()[1])})},
                {"coefficients", coeffs}};
}

ManifoldSeries series_from_json(const json& j) {
    try {
        const std::string branch = j.at("branch").get<std::string>();
        if (branch != "stable" && branch != "unstable")
            throw ConfigError("unknown branch '" + branch + "'");
        const auto& bv = j.at("base_vectors");
        ManifoldSeries s(params_from_json(j.at("params")),
                         branch == "stable" ? Branch::Stable : Branch::Unstable,
                         j.at("order").get<int>(), j.at("rates").get<std::array<double, 2>>(),
                         j.at("scale").get<std::array<double, 2>>(),
                         {vec_from(bv.at(0)), vec_from(bv.at(1))});
        for (const auto& row : j.at("coefficients")) {
            const int n = row.at(0).get<int>(), m = row.at(1).get<int>();
            if (n < 0 || m < 0 || n + m > s.order())
                throw ConfigError("coefficient index out of range");
            s.set_block(n, m, {row.at(2).get<double>(), row.at(3).get<double>(),
                               row.at(4).get<double>(), row.at(5).get<double>()});
        }
        return s;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed series file: ") + e.what());
    }
}

json to_json(const HomoclinicSolution& s) {
    return json{{"params", to_json(s.params)},
                {"u1", s.u1},
                {"v1", s.v1},
                {"u2", s.u2},
                {"v2", s.v2},
                {"point", vec(s.point)},
                {"residual", s.residual},
                {"det", s.det},
                {"series_order", s.series_order},
                {"symmetric", s.symmetric}};
}

json to_json(const ScanCell& c) {
    json j{{"epsilon", c.epsilon},
           {"A", c.A},
           {"found", c.found},
           {"best_residual", number_or_null(c.best_residual)},
           {"solution_count", c.solution_count},
           {"conjugacy_stable", number_or_null(c.conjugacy_stable)},
           {"conjugacy_unstable", number_or_null(c.conjugacy_unstable)},
           {"solution", c.solution ? to_json(*c.solution) : json(nullptr)}};
    if (!c.error.empty()) j["error"] = c.error;
    return j;
}

json to_json(const EigenSystem& e) {
    json lam = json::array();
    for (const auto& l : e.lambda) lam.push_back(json::array({l.real(), l.imag()}));
    json j{{"eigenvalues", lam},
           {"hyperbolic", e.hyperbolic},
           {"classification", std::string(to_string(e.classification))}};
    if (e.has_vectors) {
        json w = json::array();
        for (const auto& v : e.w) {
            json col = json::array();
            for (int i = 0; i < 4; ++i) col.push_back(json::array({v[i].real(), v[i].imag()}));
            w.push_back(col);
        }
        j["eigenvectors"] = w;
    }
    return j;
}

json to_json(const SolitonProfile& p) {
    json n = json::array(), u = json::array();
    for (const auto& s : p.samples) {
        n.push_back(s.n);
        u.push_back(s.u);
    }
    return json{{"params", to_json(p.params)},
                {"residual_max", p.residual_max},
                {"decay_forward", number_or_null(p.decay_forward)},
                {"decay_backward", number_or_null(p.decay_backward)},
                {"floor_forward", p.floor_forward},
                {"floor_backward", p.floor_backward},
                {"n", n},
                {"u", u}};
}

json to_json(const PolynomialFit& f) {
    return json{{"coefficients", f.coeffs},
                {"real_roots", f.real_roots},
                {"condition", number_or_null(f.condition)},
                {"ill_conditioned", f.ill_conditioned}};
}

void write_scan_csv(std::ostream& os, const std::vector<ScanCell>& cells) {
    os << "epsilon,A,found,best_residual,solution_count,conjugacy_stable,conjugacy_unstable,"
          "x,y,z,w,det,error\n";
    for (const auto& c : cells) {
        os << format_double(c.epsilon) << ',' << format_double(c.A) << ','
           << (c.found ? "true" : "false") << ',' << format_double(c.best_residual) << ','
           << c.solution_count << ',' << format_double(c.conjugacy_stable) << ','
           << format_double(c.conjugacy_unstable);
        if (c.solution) {
            for (int i = 0; i < 4; ++i) os << ',' << format_double(c.solution->point[i]);
            os << ',' << format_double(c.solution->det);
        } else {
            os << ",,,,,";
        }
        std::string err = c.error;
        for (char& ch : err)
            if (ch == ',' || ch == '\n') ch = ' ';
        os << ',' << err << '\n';
    }
}

void write_profile_csv(std::ostream& os, const SolitonProfile& p) {
    os << "n,u\n";
    for (const auto& s : p.samples) os << s.n << ',' << format_double(s.u) << '\n';
}

void write_curve_csv(std::ostream& os, const std::vector<double>& A,
                     const std::vector<double>& det) {
    os << "A,det\n";
    for (std::size_t i = 0; i < A.size() && i < det.size(); ++i)
        os << format_double(A[i]) << ',' << format_double(det[i]) << '\n';
}

void write_portrait_csv(std::ostream& os, const std::vector<Orbit<State2>>& orbits) {
    os << "seed,step,x,y,escaped\n";
    for (std::size_t k = 0; k < orbits.size(); ++k) {
        const auto& o = orbits[k];
        for (std::size_t t = 0; t < o.states.size(); ++t)
            os << k << ',' << t << ',' << format_double(o.states[t][0]) << ','
               << format_double(o.states[t][1]) << ',' << (o.escaped ? 1 : 0) << '\n';
    }
}

void write_text(const std::string& path, const std::string& text) {
    const std::filesystem::path fp(path);
    std::error_code ec;
    if (fp.has_parent_path()) std::filesystem::create_directories(fp.parent_path(), ec);
    std::ofstream out(fp);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
    if (!out) throw ConfigError("write failed for " + path);
}

}  // namespace dnls::io

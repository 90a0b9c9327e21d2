#pragma once

// JSON and CSV emitters. Doubles are written in shortest round-trip form, so
// series files reload bit for bit.

#include "dnls/homoclinic.hpp"
#include "dnls/soliton.hpp"
#include "dnls/spectral.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace dnls::io {

using json = nlohmann::ordered_json;

std::string artifact_version();

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

/// {"version": ..., "config": config}
json provenance(const json& config);

json to_json(const ModelParams& p);
ModelParams params_from_json(const json& j);

json to_json(const ManifoldSeries& s);
ManifoldSeries series_from_json(const json& j);

json to_json(const HomoclinicSolution& s);
json to_json(const ScanCell& c);
json to_json(const EigenSystem& e);
json to_json(const SolitonProfile& p);
json to_json(const PolynomialFit& f);

void write_scan_csv(std::ostream& os, const std::vector<ScanCell>& cells);
void write_profile_csv(std::ostream& os, const SolitonProfile& p);
/// Columns A, det.
void write_curve_csv(std::ostream& os, const std::vector<double>& A,
                     const std::vector<double>& det);
/// Columns seed, step, x, y, escaped.
void write_portrait_csv(std::ostream& os, const std::vector<Orbit<State2>>& orbits);

/// Creates parent directories as needed; throws ConfigError on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace dnls::io

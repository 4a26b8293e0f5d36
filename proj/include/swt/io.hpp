#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "swt/depmeas.hpp"
#include "swt/harness.hpp"
#include "swt/estimators.hpp"
#include "swt/lfsm.hpp"

namespace swt {

/// Formats a double with 17 significant digits ('.' decimal, no grouping),
/// enough to round-trip exactly.
std::string format_real(double v);

nlohmann::json to_json(const DependenceReport& r);
nlohmann::json to_json(const EstimateResult& r);
nlohmann::json grid_metadata(const WaveletCoefGrid& g);

void write_path_csv(const std::string& file, const std::vector<double>& path);
std::vector<double> read_path_csv(const std::string& file);

/// Coefficients as CSV rows (j, k, d) plus a JSON metadata sidecar
/// (file + ".meta.json").
void write_grid_csv(const std::string& file, const WaveletCoefGrid& g);
WaveletCoefGrid read_grid_csv(const std::string& file);

void write_text(const std::string& file, const std::string& text);

/// Long-form per-replicate rows: (config_id, replicate, N, statistic, value).
void write_long_csv(const std::string& file, const std::vector<LongRow>& rows);

} // namespace swt

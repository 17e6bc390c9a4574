// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "shockld/monte_carlo.hpp"
#include "shockld/rate_function.hpp"

namespace shockld {

inline constexpr int kFormatVersion = 1;

/// Shortest round-trip text for a double (17 significant digits).
std::string format_double(double v);

/// Rows are time levels, columns cells; the header row is "t" followed by the
/// cell centers.
void write_path_csv(const std::string& file, const PathMatrix& path);
/// Reads a path written by write_path_csv; the shape must match `grid`.
PathMatrix read_path_csv(const std::string& file, const SpaceTimeGrid& grid, const WaveSpec& spec);

/// Header of the estimator report table.
std::string report_header();
std::string report_row(const EstimatorReport& r);
void write_reports_csv(const std::string& file, const std::vector<EstimatorReport>& reports);

/// Generic table: first line is `header`, one line per row, values in full
/// precision. A format_version column is prepended.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};
void write_table_csv(const std::string& file, const Table& table);

/// Run metadata: subcommand, seed, the config document and the code version.
void write_sidecar(const std::string& file, const std::string& subcommand, const nlohmann::json& config,
                   const nlohmann::json& extra);

std::string code_version();

}  // namespace shockld

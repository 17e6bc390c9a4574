// SPDX-License-Identifier: MIT
#include "shockld/path_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef SHOCKLD_VERSION
#define SHOCKLD_VERSION "unknown"
#endif

namespace shockld {

std::string code_version() { return SHOCKLD_VERSION; }

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    if (v == 0.0) v = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& file) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("path_io: cannot write " + file);
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

double parse_double(const std::string& s, const std::string& file) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::runtime_error("path_io: bad number \"" + s + "\" in " + file);
    }
    if (used != s.size()) throw std::runtime_error("path_io: bad number \"" + s + "\" in " + file);
    return v;
}

}  // namespace

void write_path_csv(const std::string& file, const PathMatrix& path) {
    auto out = open_out(file);
    const auto& grid = path.grid();
    out << "t";
    for (std::size_t m = 0; m < grid.M; ++m) out << ',' << format_double(grid.center(m));
    out << '\n';
    for (std::size_t n = 0; n < path.levels(); ++n) {
        out << format_double(grid.time(n));
        for (double v : path.slice(n)) out << ',' << format_double(v);
        out << '\n';
    }
}

PathMatrix read_path_csv(const std::string& file, const SpaceTimeGrid& grid, const WaveSpec& spec) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("path_io: cannot open " + file);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("path_io: empty file " + file);
    const auto header = split(line);
    if (header.size() != grid.M + 1 || header[0] != "t")
        throw std::runtime_error("path_io: header of " + file + " does not match the grid");
    PathMatrix path(grid, spec);
    std::vector<double> slice(grid.M);
    std::size_t n = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != grid.M + 1 || n > grid.N)
            throw std::runtime_error("path_io: row shape of " + file + " does not match the grid");
        for (std::size_t m = 0; m < grid.M; ++m) slice[m] = parse_double(cells[m + 1], file);
        path.set_slice(n, slice);
        ++n;
    }
    if (n != grid.N + 1) throw std::runtime_error("path_io: " + file + " has the wrong number of time levels");
    return path;
}

std::string report_header() {
    return "format_version,eps,estimator,estimate,std,ci_low,ci_high,rel_error,K,seed,saturated,hits";
}

std::string report_row(const EstimatorReport& r) {
    std::ostringstream os;
    os << kFormatVersion << ',' << format_double(r.epsilon) << ',' << r.estimator << ',' << format_double(r.estimate)
       << ',' << format_double(r.std) << ',' << format_double(r.ci_low) << ',' << format_double(r.ci_high) << ','
       << format_double(r.relative_error) << ',' << r.K << ',' << r.seed << ',' << (r.flagged_saturated ? 1 : 0)
       << ',' << r.hits;
    return os.str();
}

void write_reports_csv(const std::string& file, const std::vector<EstimatorReport>& reports) {
    auto out = open_out(file);
    out << report_header() << '\n';
    for (const auto& r : reports) out << report_row(r) << '\n';
}

void write_table_csv(const std::string& file, const Table& table) {
    auto out = open_out(file);
    out << "format_version";
    for (const auto& c : table.columns) out << ',' << c;
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) throw std::logic_error("path_io: table row width mismatch");
        out << kFormatVersion;
        for (const auto& v : row) out << ',' << v;
        out << '\n';
    }
}

void write_sidecar(const std::string& file, const std::string& subcommand, const nlohmann::json& config,
                   const nlohmann::json& extra) {
    nlohmann::json doc;
    doc["format_version"] = kFormatVersion;
    doc["code_version"] = code_version();
    doc["subcommand"] = subcommand;
    doc["config"] = config;
    doc["run"] = extra;
    auto out = open_out(file);
    out << doc.dump(2) << '\n';
}

}  // namespace shockld

#pragma once

// File-backed run artifacts.  Numbers are written in shortest-round-trip
// decimal form, so a rerun with identical configuration produces
// byte-identical data files; wall-clock information appears only in the
// echoed config, never in data files.

#include <filesystem>
#include <string>
#include <vector>

#include "toruslab/spectral.hpp"

namespace toruslab::io {

// shortest decimal string that parses back to exactly the same double
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows; // each row matches columns in size
};

std::string to_csv(const CsvTable& table);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

// one JSON header line {"M":..,"theta1":..,"theta2":..,"normalization":
// "sum-exp"} followed by a CSV body with columns m1,m2,re,im listing every
// stored mode; parse_field_snapshot inverts it exactly
std::string field_snapshot(const spectral::Field& u);
spectral::Field parse_field_snapshot(const std::string& text);

std::string timestamp_utc(); // ISO-8601 with second resolution

} // namespace toruslab::io

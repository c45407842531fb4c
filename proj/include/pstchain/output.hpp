#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pstchain/config.hpp"
#include "pstchain/dynamics.hpp"
#include "pstchain/experiments.hpp"

namespace pstchain {

/// Twelve significant digits, trailing zeros kept ("0.500000000000").
std::string format_value(double x);

std::string series_csv(const TimeSeries& series);
/// One row per point: axis columns, then mean, stderr, n_realizations.
std::string scan_csv(const ScanResult& scan);
std::string fit_csv(const FitResult& fit);

/// Reads back a scan CSV with (n, p) axes.
ScanResult parse_scan_csv(const std::string& text);

/// The full config in key=value form, followed by the code version.
std::string metadata(const RunConfig& config);

/// Standalone line chart of the named columns against tau.
std::string render_svg(const TimeSeries& series, const std::vector<std::string>& columns);

/// Writes `contents`; IoError names the path on failure.
void write_text(const std::filesystem::path& path, const std::string& contents);
std::string read_text(const std::filesystem::path& path);

/// `path` with ".meta" appended, e.g. run.csv -> run.csv.meta.
std::filesystem::path metadata_path(const std::filesystem::path& path);

}  // namespace pstchain

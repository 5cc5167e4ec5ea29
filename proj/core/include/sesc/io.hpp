#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sesc/averaged.hpp"
#include "sesc/metrics.hpp"
#include "sesc/types.hpp"

namespace sesc {

// %.17g, locale-independent; round-trips doubles and is byte-stable.
std::string format_double(double v);

// CSV with the fixed column order
//   t, theta_1..n, theta_hat_1..n, y, U_1..n, Ghat_1..n,
//   Hhat_11..Hhat_nn (row-major), eta_1..n
std::string trajectory_csv(const Trajectory& traj);

std::string averaged_csv(const AveragedRunResult& result);

// Flat "key = value" lines.
std::string summary_text(
    const std::vector<std::pair<std::string, std::string>>& entries);

// Minimal standalone SVG line chart: one polyline per series over a shared
// time axis, auto-scaled, with a small legend and axis extents.
std::string svg_line_chart(const std::string& title,
                           const std::vector<double>& t,
                           const std::vector<std::vector<double>>& series,
                           const std::vector<std::string>& labels);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace sesc

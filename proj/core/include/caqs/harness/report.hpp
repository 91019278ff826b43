#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "caqs/harness/session.hpp"

namespace caqs::harness {

struct Series {
  std::string name;
  std::size_t train_size = 0;
  std::vector<CurvePoint> points;
};

// CSV with header "series,round,manual,manual_fraction,weak,accuracy".
void write_curves(std::ostream& out, std::span<const Series> series);
std::vector<Series> read_curves(std::istream& in);

// Writes curves.csv (every series) and summary.csv (final accuracy, manual
// fraction and area under the curve per series) into `dir`.
void emit_report(const std::filesystem::path& dir, std::span<const Series> series);

// Accuracy linearly interpolated at a manual-label fraction; clamps to the
// curve's end points.
double accuracy_at(const Series& series, double manual_fraction);

// Pointwise mean of series sharing the same x grid.
Series mean_series(std::span<const Series> runs, const std::string& name);

}  // namespace caqs::harness

#pragma once

#include "trimmer/cli/csv.hpp"

#include <string>
#include <vector>

namespace trimmer::cli {

struct PlotSpec {
  std::string x_column;             // empty: first column
  std::vector<std::string> series;  // empty: every column but x
  std::string title;
};

// Self-contained SVG line chart: one polyline per series (a single row gives
// one marker per series instead), y axis pointing up.
std::string plot_csv(const CsvTable& table, const PlotSpec& spec);

}  // namespace trimmer::cli

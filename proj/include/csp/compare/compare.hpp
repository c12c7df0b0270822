#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csp/analyze/analyzer.hpp"

namespace csp {

// Outer join on round index; absent rounds stay empty (no interpolation).
struct ComparisonTable {
  std::string measure;
  std::vector<std::string> competitions;  // column order
  std::vector<int> rounds;                // ascending
  // cells[row][col]; nullopt = competition has no point at that round
  std::vector<std::vector<std::optional<double>>> cells;

  struct Summary {
    double first = 0, last = 0, min = 0, max = 0;
  };
  std::vector<Summary> summaries;  // per competition
};

ComparisonTable compare_series(
    const std::vector<std::pair<std::string, MeasureSeries>>& by_competition);

std::string table_to_csv(const ComparisonTable& table);

// Deterministic line plot, one polyline per competition, fixed-precision
// coordinates, no timestamps.
std::string table_to_svg(const ComparisonTable& table);

// Per-measure CSV + SVG plus a self-contained index.html embedding the
// plots inline.
void render_report(const std::vector<ComparisonTable>& tables,
                   const std::string& out_dir);

// Loads every series named in an analyzer manifest directory.
std::vector<MeasureSeries> load_analysis_dir(const std::string& dir);

}  // namespace csp

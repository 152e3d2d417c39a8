#pragma once

// Deterministic SVG line charts (800x500, linear axes, legend).

#include <string>
#include <vector>

#include "json.hpp"

#include "chemostat/trajectory_csv.hpp"

namespace chemostat {

enum class LineStyle { solid, dashed };

struct PlotSeries {
  std::string column;
  LineStyle style = LineStyle::solid;
};

struct PlotSpec {
  std::string csv;
  std::string x_column = "t";
  std::vector<PlotSeries> series;
  std::string xlabel;
  std::string ylabel;
  std::string out;
};

/// "column" or "column:solid" / "column:dashed".
PlotSeries parse_series(const std::string& text);

/// {"csv", "x", "y": [{"column", "style"}], "xlabel", "ylabel", "out"}.
PlotSpec plot_spec_from_json(const nlohmann::json& j);

/// Throws std::invalid_argument when the series list is empty or a column
/// is missing.
std::string render_svg(const CsvTable& table, const PlotSpec& spec);

/// Reads spec.csv, renders and writes spec.out.
void plot(const PlotSpec& spec);

}  // namespace chemostat

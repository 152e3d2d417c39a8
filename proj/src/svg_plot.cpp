#include "chemostat/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace chemostat {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 160.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 60.0;
constexpr std::size_t kMaxVertices = 4000;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo;
  double hi;
};

Range padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
    return {lo - pad, hi + pad};
  }
  return {lo, hi};
}

// Roughly five ticks at 1, 2 or 5 times a power of ten.
std::vector<double> ticks(Range r) {
  const double raw = (r.hi - r.lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    step = f * mag;
    if (step >= raw) break;
  }
  std::vector<double> out;
  for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-9 * step; v += step) {
    out.push_back(v);
  }
  return out;
}

}  // namespace

PlotSeries parse_series(const std::string& text) {
  const auto colon = text.rfind(':');
  PlotSeries s;
  s.column = colon == std::string::npos ? text : text.substr(0, colon);
  if (colon != std::string::npos) {
    const std::string style = text.substr(colon + 1);
    if (style == "solid") {
      s.style = LineStyle::solid;
    } else if (style == "dashed") {
      s.style = LineStyle::dashed;
    } else {
      throw std::invalid_argument("unknown line style '" + style + "' (solid or dashed)");
    }
  }
  if (s.column.empty()) throw std::invalid_argument("empty column name in '" + text + "'");
  return s;
}

PlotSpec plot_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("plot spec must be a JSON object");
  auto str = [&](const char* key, bool required) -> std::string {
    if (!j.contains(key)) {
      if (required) throw std::invalid_argument(std::string("plot spec lacks '") + key + "'");
      return {};
    }
    if (!j.at(key).is_string()) {
      throw std::invalid_argument(std::string("plot spec field '") + key + "' must be a string");
    }
    return j.at(key).get<std::string>();
  };
  PlotSpec spec;
  spec.csv = str("csv", true);
  spec.out = str("out", true);
  if (j.contains("x")) spec.x_column = str("x", true);
  spec.xlabel = str("xlabel", false);
  spec.ylabel = str("ylabel", false);
  if (!j.contains("y") || !j.at("y").is_array()) {
    throw std::invalid_argument("plot spec needs a 'y' array");
  }
  for (const auto& item : j.at("y")) {
    if (item.is_string()) {
      spec.series.push_back(parse_series(item.get<std::string>()));
    } else if (item.is_object() && item.contains("column") && item.at("column").is_string()) {
      PlotSeries s = parse_series(item.at("column").get<std::string>());
      if (item.contains("style")) {
        s.style = parse_series("_:" + item.at("style").get<std::string>()).style;
      }
      spec.series.push_back(s);
    } else {
      throw std::invalid_argument("plot spec 'y' entries must be strings or {column, style}");
    }
  }
  return spec;
}

std::string render_svg(const CsvTable& table, const PlotSpec& spec) {
  if (spec.series.empty()) throw std::invalid_argument("no y columns to plot");
  const auto& xs = table.at(spec.x_column);
  for (const auto& s : spec.series) (void)table.at(s.column);
  if (xs.empty()) throw std::invalid_argument("CSV has no data rows");

  double xlo = xs.front(), xhi = xs.front();
  for (double v : xs) {
    if (std::isfinite(v)) {
      xlo = std::min(xlo, v);
      xhi = std::max(xhi, v);
    }
  }
  double ylo = INFINITY, yhi = -INFINITY;
  for (const auto& s : spec.series) {
    for (double v : table.at(s.column)) {
      if (std::isfinite(v)) {
        ylo = std::min(ylo, v);
        yhi = std::max(yhi, v);
      }
    }
  }
  if (!std::isfinite(ylo)) ylo = yhi = 0.0;
  const Range xr = padded(xlo, xhi);
  Range yr = padded(ylo, yhi);
  const double ypad = 0.05 * (yr.hi - yr.lo);
  yr = {yr.lo - ypad, yr.hi + ypad};

  // Thin long series to a fixed budget of vertices.
  const std::size_t stride = std::max<std::size_t>(1, (xs.size() + kMaxVertices - 1) / kMaxVertices);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double v) { return kTop + (yr.hi - v) / (yr.hi - yr.lo) * ph; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
         "viewBox=\"0 0 800 500\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
  svg += "<g font-family=\"sans-serif\" font-size=\"12\">\n";

  for (double t : ticks(xr)) {
    const std::string x = fixed(px(t));
    svg += "<line x1=\"" + x + "\" y1=\"" + fixed(kTop) + "\" x2=\"" + x + "\" y2=\"" +
           fixed(kTop + ph) + "\" stroke=\"#e0e0e0\"/>\n";
    svg += "<text x=\"" + x + "\" y=\"" + fixed(kTop + ph + 18) +
           "\" text-anchor=\"middle\">" + tick_label(t) + "</text>\n";
  }
  for (double t : ticks(yr)) {
    const std::string y = fixed(py(t));
    svg += "<line x1=\"" + fixed(kLeft) + "\" y1=\"" + y + "\" x2=\"" + fixed(kLeft + pw) +
           "\" y2=\"" + y + "\" stroke=\"#e0e0e0\"/>\n";
    svg += "<text x=\"" + fixed(kLeft - 8) + "\" y=\"" + fixed(py(t) + 4) +
           "\" text-anchor=\"end\">" + tick_label(t) + "</text>\n";
  }
  svg += "<rect x=\"" + fixed(kLeft) + "\" y=\"" + fixed(kTop) + "\" width=\"" + fixed(pw) +
         "\" height=\"" + fixed(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  for (std::size_t i = 0; i < spec.series.size(); ++i) {
    const auto& s = spec.series[i];
    const auto& ys = table.at(s.column);
    const char* color = kColors[i % std::size(kColors)];
    std::string points;
    auto flush = [&] {
      if (points.empty()) return;
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1.5\"" +
             (s.style == LineStyle::dashed ? " stroke-dasharray=\"6 4\"" : "") +
             " points=\"" + points + "\"/>\n";
      points.clear();
    };
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (k % stride != 0 && k + 1 != xs.size()) continue;
      if (!std::isfinite(xs[k]) || !std::isfinite(ys[k])) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += fixed(px(xs[k])) + "," + fixed(py(ys[k]));
    }
    flush();

    const double ly = kTop + 10.0 + 20.0 * static_cast<double>(i);
    const double lx = kLeft + pw + 15.0;
    svg += "<line x1=\"" + fixed(lx) + "\" y1=\"" + fixed(ly) + "\" x2=\"" + fixed(lx + 30) +
           "\" y2=\"" + fixed(ly) + "\" stroke=\"" + color + "\" stroke-width=\"1.5\"" +
           (s.style == LineStyle::dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
    svg += "<text x=\"" + fixed(lx + 36) + "\" y=\"" + fixed(ly + 4) + "\">" +
           escape(s.column) + "</text>\n";
  }

  const std::string xlabel = spec.xlabel.empty() ? spec.x_column : spec.xlabel;
  svg += "<text x=\"" + fixed(kLeft + pw / 2) + "\" y=\"" + fixed(kHeight - 15) +
         "\" text-anchor=\"middle\">" + escape(xlabel) + "</text>\n";
  if (!spec.ylabel.empty()) {
    svg += "<text x=\"20.00\" y=\"" + fixed(kTop + ph / 2) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 20.00 " + fixed(kTop + ph / 2) +
           ")\">" + escape(spec.ylabel) + "</text>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

void plot(const PlotSpec& spec) {
  if (spec.series.empty()) throw std::invalid_argument("no y columns to plot");
  const CsvTable table = read_csv_table(spec.csv);
  const std::string svg = render_svg(table, spec);
  std::ofstream out(spec.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + spec.out + "'");
  out << svg;
}

}  // namespace chemostat

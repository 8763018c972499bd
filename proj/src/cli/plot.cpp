#include "trimmer/cli/plot.hpp"

#include "trimmer/errors.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

namespace trimmer::cli {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

constexpr std::array<const char*, 8> kColors = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
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
  double lo, hi;
  double map(double v, double a, double b) const {  // [lo, hi] -> [a, b]
    if (hi == lo) return (a + b) / 2.0;
    return a + (v - lo) / (hi - lo) * (b - a);
  }
};

Range range_of(const std::vector<std::vector<double>>& cols) {
  Range r{0.0, 0.0};
  bool first = true;
  for (const auto& c : cols)
    for (double v : c) {
      if (first) r = {v, v};
      r.lo = std::min(r.lo, v);
      r.hi = std::max(r.hi, v);
      first = false;
    }
  return r;
}

}  // namespace

std::string plot_csv(const CsvTable& table, const PlotSpec& spec) {
  if (table.header.empty()) throw UsageError("plot: CSV has no columns");
  const std::string x_name = spec.x_column.empty() ? table.header.front() : spec.x_column;
  std::vector<std::string> series = spec.series;
  if (series.empty())
    for (const auto& h : table.header)
      if (h != x_name) series.push_back(h);
  if (series.empty()) throw UsageError("plot: no series to draw");
  if (table.rows.empty()) throw DataError("plot: CSV has no data rows");

  const auto xs = table.numeric_column(x_name);
  std::vector<std::vector<double>> ys;
  for (const auto& s : series) ys.push_back(table.numeric_column(s));

  const Range xr = range_of({xs});
  const Range yr = range_of(ys);
  const double x0 = kLeft, x1 = kWidth - kRight;
  const double y0 = kHeight - kBottom, y1 = kTop;  // SVG y grows downward

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
      << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!spec.title.empty())
    svg << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << xml_escape(spec.title) << "</text>\n";

  svg << "<g class=\"axes\" stroke=\"black\">\n"
      << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1) << "\" y2=\"" << num(y0) << "\"/>\n"
      << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0) << "\" y2=\"" << num(y1) << "\"/>\n"
      << "</g>\n";
  svg << "<text class=\"xlabel\" x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 12)
      << "\" text-anchor=\"middle\">" << xml_escape(x_name) << "</text>\n";
  std::string y_label;
  for (std::size_t i = 0; i < series.size(); ++i) y_label += (i ? ", " : "") + series[i];
  svg << "<text class=\"ylabel\" x=\"18\" y=\"" << num((y0 + y1) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << num((y0 + y1) / 2) << ")\">" << xml_escape(y_label) << "</text>\n";
  // Tick labels at the extremes.
  svg << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(y0 + 4) << "\" text-anchor=\"end\">" << num(yr.lo) << "</text>\n"
      << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(y1 + 4) << "\" text-anchor=\"end\">" << num(yr.hi) << "</text>\n"
      << "<text x=\"" << num(x0) << "\" y=\"" << num(y0 + 16) << "\" text-anchor=\"middle\">" << num(xr.lo) << "</text>\n"
      << "<text x=\"" << num(x1) << "\" y=\"" << num(y0 + 16) << "\" text-anchor=\"middle\">" << num(xr.hi) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % kColors.size()];
    if (xs.size() == 1) {
      svg << "<circle class=\"series\" data-series=\"" << xml_escape(series[s]) << "\" cx=\"" << num(xr.map(xs[0], x0, x1))
          << "\" cy=\"" << num(yr.map(ys[s][0], y0, y1)) << "\" r=\"4\" fill=\"" << color << "\"/>\n";
    } else {
      svg << "<polyline class=\"series\" data-series=\"" << xml_escape(series[s]) << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < xs.size(); ++i)
        svg << (i ? " " : "") << num(xr.map(xs[i], x0, x1)) << ',' << num(yr.map(ys[s][i], y0, y1));
      svg << "\"/>\n";
    }
    const double ly = kTop + 18.0 * static_cast<double>(s);
    svg << "<line x1=\"" << num(x1 + 15) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(x1 + 35) << "\" y2=\"" << num(ly)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << num(x1 + 40) << "\" y=\"" << num(ly + 4) << "\">" << xml_escape(series[s]) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace trimmer::cli

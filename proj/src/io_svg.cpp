#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "mprisk/errors.hpp"
#include "mprisk/io.hpp"

namespace mprisk {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMarginX = 0.1 * kWidth;
constexpr double kMarginY = 0.1 * kHeight;
constexpr double kMarkerRadius = 3.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string tick_label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
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

struct Axis {
  double lo;
  double hi;
  bool log;

  double map(double m) const {
    const double v = log ? std::log10(m) : m;
    return kMarginX + (v - lo) / (hi - lo) * (kWidth - 2.0 * kMarginX);
  }
};

double map_y(double p) { return kHeight - kMarginY - p * (kHeight - 2.0 * kMarginY); }

}  // namespace

std::string render_mp_plot_svg(const std::vector<SweepResult>& sweeps, const PlotOptions& options) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& s : sweeps) {
    for (const auto& row : s.rows) {
      if (!row.ok() || !std::isfinite(row.m)) continue;
      if (options.log_x && !(row.m > 0.0)) continue;
      const double v = options.log_x ? std::log10(row.m) : row.m;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi >= lo)) throw InvalidArgument("plot needs at least one solved point");
  if (hi == lo) {
    const double pad = options.log_x ? 0.5 : std::max(0.5 * std::abs(lo), 0.5);
    lo -= pad;
    hi += pad;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  if (!options.log_x) lo = std::max(lo, 0.0);
  const Axis axis{lo, hi, options.log_x};

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";

  // Frame and axes.
  const double x0 = kMarginX;
  const double x1 = kWidth - kMarginX;
  const double y0 = kHeight - kMarginY;
  const double y1 = kMarginY;
  svg += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  svg += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(y0) + "\"/>\n";
  svg += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" + num(y1) + "\"/>\n";
  svg += "</g>\n";

  svg += "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double p = 0.2 * i;
    const double y = map_y(p);
    svg += "<line x1=\"" + num(x0 - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(x0) + "\" y2=\"" +
           num(y) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + num(x0 - 8) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" +
           num(p, 1) + "</text>\n";
  }
  if (options.log_x) {
    for (int e = static_cast<int>(std::ceil(lo)); e <= static_cast<int>(std::floor(hi)); ++e) {
      const double x = axis.map(std::pow(10.0, e));
      svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x) + "\" y2=\"" +
             num(y0 + 5) + "\" stroke=\"black\"/>\n";
      svg += "<text x=\"" + num(x) + "\" y=\"" + num(y0 + 20) + "\" text-anchor=\"middle\">" +
             tick_label(std::pow(10.0, e)) + "</text>\n";
    }
  } else {
    for (int i = 0; i <= 5; ++i) {
      const double m = lo + (hi - lo) * i / 5.0;
      const double x = axis.map(m);
      svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x) + "\" y2=\"" +
             num(y0 + 5) + "\" stroke=\"black\"/>\n";
      svg += "<text x=\"" + num(x) + "\" y=\"" + num(y0 + 20) + "\" text-anchor=\"middle\">" +
             tick_label(m) + "</text>\n";
    }
  }
  svg += "<text x=\"" + num(0.5 * (x0 + x1)) + "\" y=\"" + num(kHeight - 15) +
         "\" text-anchor=\"middle\">magnitude m</text>\n";
  svg += "<text x=\"20\" y=\"" + num(0.5 * (y0 + y1)) + "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
         num(0.5 * (y0 + y1)) + ")\">propensity p</text>\n";
  svg += "</g>\n";

  std::size_t color = 0;
  double legend_y = y1 + 10;
  for (const auto& s : sweeps) {
    const char* stroke = kPalette[color++ % std::size(kPalette)];
    std::vector<std::pair<double, const SweepRow*>> points;
    for (const auto& row : s.rows) {
      if (!row.ok() || !std::isfinite(row.m)) continue;
      if (options.log_x && !(row.m > 0.0)) continue;
      points.emplace_back(axis.map(row.m), &row);
    }
    if (points.empty()) continue;
    svg += "<g stroke=\"" + std::string(stroke) + "\" fill=\"none\">\n";
    if (points.size() > 1) {
      svg += "<polyline stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (i > 0) svg += ' ';
        svg += num(points[i].first) + ',' + num(map_y(points[i].second->p));
      }
      svg += "\"/>\n";
    }
    for (const auto& [x, row] : points) {
      svg += "<circle cx=\"" + num(x) + "\" cy=\"" + num(map_y(row->p)) + "\" r=\"" +
             num(kMarkerRadius, 0) + "\" fill=\"" + stroke + "\"/>\n";
    }
    svg += "</g>\n";
    if (options.labels) {
      svg += "<g font-family=\"sans-serif\" font-size=\"10\" fill=\"" + std::string(stroke) + "\">\n";
      for (const auto& [x, row] : points) {
        svg += "<text x=\"" + num(x + 5) + "\" y=\"" + num(map_y(row->p) - 5) + "\">" +
               tick_label(row->mean) + "</text>\n";
      }
      svg += "</g>\n";
    }
    std::string label = s.family_name;
    if (!s.param_name.empty()) label += " (" + s.param_name + ")";
    svg += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<line x1=\"" + num(x1 - 150) + "\" y1=\"" + num(legend_y) + "\" x2=\"" + num(x1 - 130) +
           "\" y2=\"" + num(legend_y) + "\" stroke=\"" + stroke + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + num(x1 - 125) + "\" y=\"" + num(legend_y + 4) + "\">" + escape(label) +
           "</text>\n";
    svg += "</g>\n";
    legend_y += 16;
  }
  svg += "</svg>\n";
  return svg;
}

void write_mp_plot_svg(const std::vector<SweepResult>& sweeps, const std::string& path,
                       const PlotOptions& options) {
  const std::string svg = render_mp_plot_svg(sweeps, options);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << svg;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace mprisk

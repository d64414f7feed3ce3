#include "drbench/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <stdexcept>

namespace drbench {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::string px(double v) { return fmt("%.2f", v); }

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

std::string text(double x, double y, const std::string& s, const char* anchor = "middle",
                 int size = 12, const std::string& extra = "") {
  return "<text x=\"" + px(x) + "\" y=\"" + px(y) + "\" font-size=\"" +
         std::to_string(size) + "\" text-anchor=\"" + anchor + "\"" + extra + ">" +
         escape(s) + "</text>\n";
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finalize() {
    if (!(lo <= hi)) lo = 0, hi = 1;
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

/// Linear map from data to pixels.
struct Axis {
  double d0, d1, p0, p1;
  double operator()(double v) const { return p0 + (v - d0) / (d1 - d0) * (p1 - p0); }
};

std::string svg_open(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(w) + "\" height=\"" +
         px(h) + "\" viewBox=\"0 0 " + px(w) + " " + px(h) +
         "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" "
         "fill=\"white\"/>\n";
}

}  // namespace

std::string band_panel_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<BandSeries>& series) {
  const double w = 760, h = 440, left = 80, right = 150, top = 40, bottom = 60;
  Range xr, yr;
  for (const BandSeries& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xr.add(s.x[i]);
      yr.add(s.mean[i] - s.std[i]);
      yr.add(s.mean[i] + s.std[i]);
    }
  xr.finalize();
  yr.finalize();
  const Axis ax{xr.lo, xr.hi, left, w - right};
  const Axis ay{yr.lo, yr.hi, h - bottom, top};

  std::string out = svg_open(w, h);
  out += text(w / 2, 24, title, "middle", 15);
  out += "<rect x=\"" + px(left) + "\" y=\"" + px(top) + "\" width=\"" +
         px(w - left - right) + "\" height=\"" + px(h - top - bottom) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = xr.lo + (xr.hi - xr.lo) * k / 5.0;
    const double yv = yr.lo + (yr.hi - yr.lo) * k / 5.0;
    out += text(ax(xv), h - bottom + 18, fmt("%.6g", xv));
    out += text(left - 6, ay(yv) + 4, fmt("%.4g", yv), "end");
  }
  out += text((left + w - right) / 2, h - 18, x_label);
  out += text(18, (top + h - bottom) / 2, y_label, "middle", 12,
              " transform=\"rotate(-90 18 " + px((top + h - bottom) / 2) + ")\"");

  for (std::size_t si = 0; si < series.size(); ++si) {
    const BandSeries& s = series[si];
    const char* color = kPalette[si % kPaletteSize];
    std::string band, line;
    for (std::size_t i = 0; i < s.x.size(); ++i)
      band += px(ax(s.x[i])) + "," + px(ay(s.mean[i] + s.std[i])) + " ";
    for (std::size_t i = s.x.size(); i-- > 0;)
      band += px(ax(s.x[i])) + "," + px(ay(s.mean[i] - s.std[i])) + " ";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      line += px(ax(s.x[i])) + "," + px(ay(s.mean[i])) + " ";
    out += "<g data-series=\"" + escape(s.label) + "\">\n";
    if (!s.x.empty()) {
      out += "<polygon points=\"" + band + "\" fill=\"" + color +
             "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
      out += "<polyline points=\"" + line + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"1.5\"/>\n";
    }
    out += "</g>\n";
    const double ly = top + 16 + 20 * static_cast<double>(si);
    out += "<line x1=\"" + px(w - right + 12) + "\" y1=\"" + px(ly - 4) + "\" x2=\"" +
           px(w - right + 32) + "\" y2=\"" + px(ly - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"3\"/>\n";
    out += text(w - right + 38, ly, s.label, "start");
  }
  return out + "</svg>\n";
}

std::string consumption_svg(const std::vector<ConsumptionPanel>& panels,
                            const GridPriceSchedule& grid) {
  const double panel_w = 320, h = 380, left = 60, gap = 50, top = 50, bottom = 70;
  const double w = left + panels.size() * (panel_w + gap) + 40;
  double demand_max = 0;
  std::map<std::string, std::size_t> colors;
  for (const ConsumptionPanel& p : panels)
    for (const auto& [label, d] : p.demands) {
      demand_max = std::max(demand_max, d.maxCoeff());
      colors.emplace(label, colors.size());
    }
  demand_max = demand_max > 0 ? demand_max * 1.1 : 1.0;
  const double grid_max = grid.maxCoeff() * 1.2;

  std::string out = svg_open(w, h);
  out += text(w / 2, 22, "Hourly demand vs grid price", "middle", 15);
  for (std::size_t pi = 0; pi < panels.size(); ++pi) {
    const ConsumptionPanel& p = panels[pi];
    const double x0 = left + pi * (panel_w + gap);
    const Axis ay{0, demand_max, h - bottom, top};
    const Axis ag{0, grid_max, h - bottom, top};
    const double slot = panel_w / kHours;
    out += "<g data-step=\"" + std::to_string(p.step) + "\">\n";
    out += text(x0 + panel_w / 2, top - 10, "step " + std::to_string(p.step));
    out += "<rect x=\"" + px(x0) + "\" y=\"" + px(top) + "\" width=\"" + px(panel_w) +
           "\" height=\"" + px(h - top - bottom) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
      const double dv = demand_max * k / 4.0;
      out += text(x0 - 4, ay(dv) + 4, fmt("%.3g", dv), "end", 10);
      const double gv = grid_max * k / 4.0;
      out += text(x0 + panel_w + 4, ag(gv) + 4, fmt("%.3g", gv), "start", 10);
    }
    const std::size_t k = std::max<std::size_t>(p.demands.size(), 1);
    const double bar_w = slot * 0.8 / static_cast<double>(k);
    for (int hour = 0; hour < kHours; ++hour) {
      out += text(x0 + slot * (hour + 0.5), h - bottom + 14, std::to_string(hour + 1), "middle", 10);
      for (std::size_t si = 0; si < p.demands.size(); ++si) {
        const auto& [label, d] = p.demands[si];
        const double v = d(hour);
        const double bx = x0 + slot * hour + slot * 0.1 + bar_w * static_cast<double>(si);
        out += "<rect x=\"" + px(bx) + "\" y=\"" + px(ay(v)) + "\" width=\"" + px(bar_w) +
               "\" height=\"" + px(ay(0) - ay(v)) + "\" fill=\"" +
               kPalette[colors[label] % kPaletteSize] + "\" data-series=\"" + escape(label) +
               "\" data-hour=\"" + std::to_string(hour + 1) + "\" data-value=\"" +
               format_real(v) + "\"/>\n";
      }
    }
    std::string steps;
    for (int hour = 0; hour < kHours; ++hour) {
      const double gy = ag(grid(hour));
      steps += px(x0 + slot * hour) + "," + px(gy) + " " + px(x0 + slot * (hour + 1)) + "," +
               px(gy) + " ";
    }
    out += "<polyline points=\"" + steps +
           "\" fill=\"none\" stroke=\"black\" stroke-dasharray=\"4 2\" stroke-width=\"1.5\" "
           "data-series=\"grid\"/>\n";
    out += text(x0 + panel_w / 2, h - bottom + 32, "hour");
    out += "</g>\n";
  }
  double ly = h - 18;
  double lx = left;
  for (const auto& [label, idx] : colors) {
    out += "<rect x=\"" + px(lx) + "\" y=\"" + px(ly - 10) +
           "\" width=\"12\" height=\"12\" fill=\"" + kPalette[idx % kPaletteSize] + "\"/>\n";
    out += text(lx + 16, ly, label, "start", 11);
    lx += 16 + 7.0 * static_cast<double>(label.size()) + 20;
  }
  out += "<line x1=\"" + px(lx) + "\" y1=\"" + px(ly - 4) + "\" x2=\"" + px(lx + 20) +
         "\" y2=\"" + px(ly - 4) + "\" stroke=\"black\" stroke-dasharray=\"4 2\"/>\n";
  out += text(lx + 24, ly, "grid price", "start", 11);
  return out + "</svg>\n";
}

std::vector<ConsumptionPanel> load_consumption_panels(const std::vector<std::string>& csv_paths,
                                                      const std::vector<long>& steps) {
  std::vector<ConsumptionPanel> panels;
  for (long step : steps) panels.push_back(ConsumptionPanel{step, {}});
  for (const std::string& path : csv_paths) {
    const CsvLog log = read_csv_file(path);
    const std::string label = std::filesystem::path(path).stem().string();
    for (ConsumptionPanel& panel : panels) {
      const auto it = std::find_if(log.records.begin(), log.records.end(),
                                   [&](const StepRecord& r) { return r.step == panel.step; });
      if (it == log.records.end()) {
        const std::string range =
            log.records.empty() ? "no steps"
                                : "steps " + std::to_string(log.records.front().step) + ".." +
                                      std::to_string(log.records.back().step);
        throw std::runtime_error("step " + std::to_string(panel.step) + " not in " + path +
                                 " (available: " + range + ")");
      }
      panel.demands.emplace_back(label, it->demand);
    }
  }
  return panels;
}

}  // namespace drbench

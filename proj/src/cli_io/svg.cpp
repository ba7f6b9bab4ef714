#include "lasekk/cli_io/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "lasekk/errors.hpp"

namespace lasekk::cli {
namespace {

constexpr double kLeft = 100, kRight = 30, kTop = 50, kBottom = 70;

std::string fixed2(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, r.ptr);
}

std::string label(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 4);
  return std::string(buf, r.ptr);
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
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (!(lo <= hi)) lo = hi = 0;
    if (hi - lo <= 1e-300 + 1e-12 * std::abs(hi)) {
      const double pad = lo == 0 ? 1 : 0.05 * std::abs(lo);
      lo -= pad;
      hi += pad;
    }
  }
};

void render_panel(std::string& svg, const Panel& panel, int index) {
  Range xr, yr;
  for (const auto& s : panel.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      xr.include(s.x[i]);
      yr.include(s.y[i]);
    }
  }
  xr.settle();
  yr.settle();
  const double pad = 0.05 * (yr.hi - yr.lo);
  yr.lo -= pad;
  yr.hi += pad;

  const double w = kPanelWidth - kLeft - kRight;
  const double h = kPanelHeight - kTop - kBottom;
  const auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * w; };
  const auto py = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * h; };

  svg += "<g transform=\"translate(0," + std::to_string(index * kPanelHeight) + ")\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(kPanelWidth) + "\" height=\"" +
         std::to_string(kPanelHeight) + "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fixed2(kPanelWidth / 2.0) + "\" y=\"30\" text-anchor=\"middle\" font-size=\"18\">" +
         escape(panel.title) + "</text>\n";
  svg += "<rect x=\"" + fixed2(kLeft) + "\" y=\"" + fixed2(kTop) + "\" width=\"" + fixed2(w) +
         "\" height=\"" + fixed2(h) + "\" fill=\"none\" stroke=\"black\"/>\n";
  if (yr.lo < 0 && yr.hi > 0)
    svg += "<line x1=\"" + fixed2(kLeft) + "\" y1=\"" + fixed2(py(0)) + "\" x2=\"" + fixed2(kLeft + w) +
           "\" y2=\"" + fixed2(py(0)) + "\" stroke=\"#999\" stroke-dasharray=\"4 4\"/>\n";

  const double base = kTop + h;
  svg += "<text x=\"" + fixed2(kLeft) + "\" y=\"" + fixed2(base + 20) + "\" font-size=\"12\">" +
         label(xr.lo) + "</text>\n";
  svg += "<text x=\"" + fixed2(kLeft + w) + "\" y=\"" + fixed2(base + 20) +
         "\" text-anchor=\"end\" font-size=\"12\">" + label(xr.hi) + "</text>\n";
  svg += "<text x=\"" + fixed2(kLeft + w / 2) + "\" y=\"" + fixed2(base + 45) +
         "\" text-anchor=\"middle\" font-size=\"14\">" + escape(panel.x_label) + "</text>\n";
  svg += "<text x=\"" + fixed2(kLeft - 8) + "\" y=\"" + fixed2(kTop + 12) +
         "\" text-anchor=\"end\" font-size=\"12\">" + label(yr.hi) + "</text>\n";
  svg += "<text x=\"" + fixed2(kLeft - 8) + "\" y=\"" + fixed2(base) +
         "\" text-anchor=\"end\" font-size=\"12\">" + label(yr.lo) + "</text>\n";
  svg += "<text x=\"20\" y=\"" + fixed2(kTop + h / 2) + "\" font-size=\"14\" transform=\"rotate(-90 20 " +
         fixed2(kTop + h / 2) + ")\" text-anchor=\"middle\">" + escape(panel.y_label) + "</text>\n";

  for (const auto& s : panel.series) {
    svg += "<polyline fill=\"none\" stroke=\"" + escape(s.stroke) + "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      if (!first) svg += ' ';
      first = false;
      svg += fixed2(px(s.x[i])) + "," + fixed2(py(s.y[i]));
    }
    svg += "\"/>\n";
  }
  svg += "</g>\n";
}

}  // namespace

std::string render_svg(const std::vector<Panel>& panels) {
  const int height = kPanelHeight * int(std::max<std::size_t>(panels.size(), 1));
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kPanelWidth) +
                    "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
                    std::to_string(kPanelWidth) + " " + std::to_string(height) + "\">\n";
  for (std::size_t k = 0; k < panels.size(); ++k) render_panel(svg, panels[k], int(k));
  svg += "</svg>\n";
  return svg;
}

void write_svg_file(const std::string& path, const std::vector<Panel>& panels) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open '" + path + "' for writing");
  f << render_svg(panels);
  if (!f) throw ValidationError("write to '" + path + "' failed");
}

}  // namespace lasekk::cli

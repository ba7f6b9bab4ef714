#pragma once

#include <string>
#include <vector>

namespace lasekk::cli {

struct Series {
  std::vector<double> x;
  std::vector<double> y;  // NaN samples are dropped
  std::string stroke = "#1f77b4";
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

inline constexpr int kPanelWidth = 800;
inline constexpr int kPanelHeight = 600;

/// Panels stacked vertically, each in its own 800x600 cell; one polyline per series.
std::string render_svg(const std::vector<Panel>& panels);
void write_svg_file(const std::string& path, const std::vector<Panel>& panels);

}  // namespace lasekk::cli

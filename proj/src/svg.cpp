#include "dlme/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "dlme/error.hpp"

namespace dlme {

namespace {

const char* kPalette[] = {
    "#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860",
    "#da8bc3", "#8c8c8c", "#ccb974", "#64b5cd", "#2f4b7c", "#ffa600",
};
constexpr int kPaletteSize = 12;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string scatter_svg(const Matrix& points2d, const std::vector<int>& labels,
                        const PlotOptions& opts) {
  if (points2d.rows() == 0) throw ContractError("scatter_svg: no points to plot");
  if (points2d.cols() != 2) {
    throw ContractError("scatter_svg: expected 2-D points, got " +
                        std::to_string(points2d.cols()) + " columns");
  }
  if (!labels.empty() && static_cast<int>(labels.size()) != points2d.rows()) {
    throw ContractError("scatter_svg: label count mismatch");
  }

  const int n = points2d.rows();
  double xmin = points2d(0, 0), xmax = xmin, ymin = points2d(0, 1), ymax = ymin;
  for (int i = 0; i < n; ++i) {
    xmin = std::min(xmin, points2d(i, 0));
    xmax = std::max(xmax, points2d(i, 0));
    ymin = std::min(ymin, points2d(i, 1));
    ymax = std::max(ymax, points2d(i, 1));
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;

  const double margin = 40.0;
  const double pw = opts.width - 2 * margin;
  const double ph = opts.height - 2 * margin;
  const auto px = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * pw; };
  const auto py = [&](double y) { return margin + (ymax - y) / (ymax - ymin) * ph; };

  std::map<int, std::string> colors;
  if (!labels.empty()) {
    std::map<int, int> seen;
    for (int l : labels) seen.emplace(l, 0);
    int idx = 0;
    for (auto& [l, _] : seen) colors[l] = kPalette[idx++ % kPaletteSize];
  }

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\""
      << opts.height << "\" viewBox=\"0 0 " << opts.width << " " << opts.height << "\">\n";
  svg << "<rect width=\"" << opts.width << "\" height=\"" << opts.height
      << "\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << fmt(margin) << "\" y=\"" << fmt(margin) << "\" width=\"" << fmt(pw)
      << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
  if (!opts.title.empty()) {
    svg << "<text x=\"" << fmt(opts.width / 2.0)
        << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
        << opts.title << "</text>\n";
  }
  for (int i = 0; i < n; ++i) {
    const std::string color = labels.empty() ? "#4c72b0" : colors[labels[i]];
    svg << "<circle cx=\"" << fmt(px(points2d(i, 0))) << "\" cy=\"" << fmt(py(points2d(i, 1)))
        << "\" r=\"" << fmt(opts.point_radius) << "\" fill=\"" << color
        << "\" fill-opacity=\"0.75\"/>\n";
  }
  if (!labels.empty()) {
    double ly = margin + 14.0;
    const double lx = opts.width - margin - 96.0;
    for (const auto& [label, color] : colors) {
      svg << "<rect x=\"" << fmt(lx) << "\" y=\"" << fmt(ly - 9) << "\" width=\"10\" height=\"10\""
          << " fill=\"" << color << "\"/>\n";
      svg << "<text x=\"" << fmt(lx + 14) << "\" y=\"" << fmt(ly)
          << "\" font-family=\"sans-serif\" font-size=\"12\">label " << label << "</text>\n";
      ly += 16.0;
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_scatter_svg(const std::string& path, const Matrix& points2d,
                       const std::vector<int>& labels, const PlotOptions& opts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open SVG file for writing: " + path);
  out << scatter_svg(points2d, labels, opts);
}

}  // namespace dlme

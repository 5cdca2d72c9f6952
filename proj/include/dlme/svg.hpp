#pragma once

#include <string>
#include <vector>

#include "dlme/matrix.hpp"

namespace dlme {

struct PlotOptions {
  int width = 800;
  int height = 640;
  std::string title;
  double point_radius = 2.5;
};

// Color-by-label scatter plot with a legend. Output bytes are a pure function
// of the inputs.
std::string scatter_svg(const Matrix& points2d, const std::vector<int>& labels,
                        const PlotOptions& opts = {});

void write_scatter_svg(const std::string& path, const Matrix& points2d,
                       const std::vector<int>& labels, const PlotOptions& opts = {});

}  // namespace dlme

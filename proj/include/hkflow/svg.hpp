#pragma once

#include <string>
#include <vector>

namespace hkflow {

/// One polyline series of a line chart.
struct SvgSeries {
  std::string label;
  std::vector<double> x, y;
};

/// Writes a minimal static line chart (axes box, series, legend) atomically.
void write_line_chart(const std::string& path, const std::vector<SvgSeries>& series,
                      const std::string& title);

}  // namespace hkflow

#include "hkflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hkflow/io.hpp"

namespace hkflow {

void write_line_chart(const std::string& path, const std::vector<SvgSeries>& series,
                      const std::string& title) {
  const int W = 720, H = 480;
  const int ml = 60, mr = 20, mt = 40, mb = 40;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      if (first) {
        xmin = xmax = s.x[k];
        ymin = ymax = s.y[k];
        first = false;
      }
      xmin = std::min(xmin, s.x[k]);
      xmax = std::max(xmax, s.x[k]);
      ymin = std::min(ymin, s.y[k]);
      ymax = std::max(ymax, s.y[k]);
    }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
     << " font-size=\"16\">" << title << "</text>\n";
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\""
     << H - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", xmin);
  os << "<text x=\"" << ml << "\" y=\"" << H - mb + 18 << "\" font-family=\"sans-serif\""
     << " font-size=\"12\">" << buf << "</text>\n";
  std::snprintf(buf, sizeof(buf), "%.4g", xmax);
  os << "<text x=\"" << W - mr << "\" y=\"" << H - mb + 18 << "\" text-anchor=\"end\""
     << " font-family=\"sans-serif\" font-size=\"12\">" << buf << "</text>\n";
  std::snprintf(buf, sizeof(buf), "%.4g", ymin);
  os << "<text x=\"" << ml - 6 << "\" y=\"" << H - mb << "\" text-anchor=\"end\""
     << " font-family=\"sans-serif\" font-size=\"12\">" << buf << "</text>\n";
  std::snprintf(buf, sizeof(buf), "%.4g", ymax);
  os << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 10 << "\" text-anchor=\"end\""
     << " font-family=\"sans-serif\" font-size=\"12\">" << buf << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    os << "<polyline fill=\"none\" stroke=\"" << colors[si % 8] << "\" stroke-width=\"1.5\""
       << " points=\"";
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      os << px(s.x[k]) << ',' << py(s.y[k]) << ' ';
    }
    os << "\"/>\n";
    os << "<text x=\"" << W - mr - 8 << "\" y=\"" << mt + 18 + 16 * si
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
       << colors[si % 8] << "\">" << s.label << "</text>\n";
  }
  os << "</svg>\n";
  atomic_write(path, os.str());
}

}  // namespace hkflow

#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace krglm::cli {

namespace {

constexpr double kWidth = 640, kHeight = 480, kMargin = 60;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string loglog_svg(const std::vector<SeriesPlot>& series, const std::string& title) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (auto [n, r] : s.points) {
      if (!(n > 0 && r > 0)) continue;
      x0 = std::min(x0, std::log10(n));
      x1 = std::max(x1, std::log10(n));
      y0 = std::min(y0, std::log10(r));
      y1 = std::max(y1, std::log10(r));
    }
  if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
  if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
  const double padx = 0.05 * (x1 - x0), pady = 0.05 * (y1 - y0);
  x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;
  auto px = [&](double lx) { return kMargin + (lx - x0) / (x1 - x0) * (kWidth - 2 * kMargin); };
  auto py = [&](double ly) { return kHeight - kMargin - (ly - y0) / (y1 - y0) * (kHeight - 2 * kMargin); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\">" << title << "</text>\n"
     << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin
     << "\" height=\"" << kHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 20
     << "\" text-anchor=\"middle\">log10 n</text>\n"
     << "<text x=\"16\" y=\"" << kHeight / 2 << "\" transform=\"rotate(-90 16 " << kHeight / 2
     << ")\" text-anchor=\"middle\">log10 excess risk</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double lx = x0 + (x1 - x0) * t / 4, ly = y0 + (y1 - y0) * t / 4;
    os << "<text x=\"" << num(px(lx)) << "\" y=\"" << kHeight - kMargin + 16
       << "\" text-anchor=\"middle\">" << num(lx) << "</text>\n"
       << "<text x=\"" << kMargin - 6 << "\" y=\"" << num(py(ly) + 4) << "\" text-anchor=\"end\">"
       << num(ly) << "</text>\n";
  }
  int row = 0;
  for (const auto& s : series) {
    for (auto [n, r] : s.points)
      if (n > 0 && r > 0)
        os << "<circle cx=\"" << num(px(std::log10(n))) << "\" cy=\"" << num(py(std::log10(r)))
           << "\" r=\"2\" fill=\"" << s.color << "\" fill-opacity=\"0.4\"/>\n";
    // log r = intercept - alpha log n, in natural logs
    auto line_y = [&](double lx) {
      return (s.intercept - s.alpha * lx * std::log(10.0)) / std::log(10.0);
    };
    os << "<line x1=\"" << num(px(x0)) << "\" y1=\"" << num(py(line_y(x0))) << "\" x2=\""
       << num(px(x1)) << "\" y2=\"" << num(py(line_y(x1))) << "\" stroke=\"" << s.color
       << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << kWidth - kMargin - 4 << "\" y=\"" << kMargin + 16 + 16 * row++
       << "\" text-anchor=\"end\" fill=\"" << s.color << "\">" << s.name
       << " (alpha=" << num(s.alpha) << ")</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace krglm::cli

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "okiss/experiment.hpp"

namespace okiss {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 50.0;

struct Frame {
  double x_lo, x_hi, y_lo, y_hi;

  double px(double x) const {
    const double span = x_hi > x_lo ? x_hi - x_lo : 1.0;
    return kMargin + (x - x_lo) / span * (kWidth - 2 * kMargin);
  }
  double py(double y) const {
    const double span = y_hi > y_lo ? y_hi - y_lo : 1.0;
    return kHeight - kMargin - (y - y_lo) / span * (kHeight - 2 * kMargin);
  }
};

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void open_svg(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"25\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">"
      << title << "</text>\n";
}

void axes(std::ostringstream& out, const Frame& f, const std::string& y_lo, const std::string& y_hi) {
  out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin
      << "\" height=\"" << kHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"#888\"/>\n";
  out << "<text x=\"" << kMargin - 5 << "\" y=\"" << coord(f.py(f.y_lo))
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << y_lo << "</text>\n";
  out << "<text x=\"" << kMargin - 5 << "\" y=\"" << coord(f.py(f.y_hi))
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << y_hi << "</text>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">instances (1 to "
      << static_cast<long long>(f.x_hi) << ")</text>\n";
}

template <typename Get>
void polyline(std::ostringstream& out, const std::vector<SeriesRow>& rows, const Frame& f, Get get,
              const char* colour, const char* id) {
  out << "<polyline id=\"" << id << "\" fill=\"none\" stroke=\"" << colour
      << "\" stroke-width=\"1.5\" points=\"";
  bool first = true;
  for (const auto& r : rows) {
    const auto y = get(r);
    if (!y) continue;
    if (!first) out << ' ';
    out << coord(f.px(static_cast<double>(r.index))) << ',' << coord(f.py(*y));
    first = false;
  }
  out << "\"/>\n";
}

}  // namespace

std::string accuracy_svg(const std::vector<SeriesRow>& rows, bool paired) {
  std::ostringstream out;
  const double x_hi = rows.empty() ? 1.0 : static_cast<double>(rows.back().index);
  const Frame f{1.0, x_hi, 0.0, 1.0};
  open_svg(out, "Prequential accuracy");
  axes(out, f, "0", "1");
  polyline(out, rows, f, [](const SeriesRow& r) { return std::optional<double>(r.acc_a); },
           "#1f77b4", "acc_a");
  if (paired)
    polyline(out, rows, f, [](const SeriesRow& r) { return std::optional<double>(r.acc_b); },
             "#d62728", "acc_b");
  out << "</svg>\n";
  return out.str();
}

std::string qstat_svg(const std::vector<SeriesRow>& rows) {
  double bound = 0.0;
  for (const auto& r : rows)
    if (r.q) bound = std::max(bound, std::abs(*r.q));
  if (bound == 0.0) bound = 1.0;

  std::ostringstream out;
  const double x_hi = rows.empty() ? 1.0 : static_cast<double>(rows.back().index);
  const Frame f{1.0, x_hi, -bound, bound};
  open_svg(out, "Q statistic (A vs B)");
  axes(out, f, coord(-bound), coord(bound));
  out << "<line id=\"zero\" x1=\"" << kMargin << "\" y1=\"" << coord(f.py(0.0)) << "\" x2=\""
      << kWidth - kMargin << "\" y2=\"" << coord(f.py(0.0))
      << "\" stroke=\"#444\" stroke-dasharray=\"4 3\"/>\n";
  polyline(out, rows, f, [](const SeriesRow& r) { return r.q; }, "#2ca02c", "q");
  out << "</svg>\n";
  return out.str();
}

}  // namespace okiss

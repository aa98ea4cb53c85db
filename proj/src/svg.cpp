#include "mblborn/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "mblborn/errors.hpp"

namespace mblborn {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 610.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 390.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

struct Frame {
  double x_lo, x_hi, y_lo, y_hi;
  double px(double x) const {
    return kLeft + (x - x_lo) / (x_hi - x_lo) * (kRight - kLeft);
  }
  double py(double y) const {
    return kBottom - (y - y_lo) / (y_hi - y_lo) * (kBottom - kTop);
  }
};

void open_svg(std::ofstream& out, const std::string& path, const std::string& title) {
  out.open(path);
  if (!out) throw FormatError(path + ": cannot open for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
}

void draw_axes(std::ofstream& out, const Frame& f, const std::string& x_label,
               const std::string& y_label, bool log_y) {
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight
      << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double tx = f.x_lo + k * (f.x_hi - f.x_lo) / 4.0;
    const double ty = f.y_lo + k * (f.y_hi - f.y_lo) / 4.0;
    out << "<text x=\"" << f.px(tx) << "\" y=\"" << kBottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">" << fmt(tx) << "</text>\n";
    const std::string ylab = log_y ? ("1e" + fmt(ty)) : fmt(ty);
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << f.py(ty) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << ylab << "</text>\n";
  }
  out << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 38
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << x_label << "</text>\n"
      << "<text x=\"18\" y=\"" << (kTop + kBottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 " << (kTop + kBottom) / 2 << ")\">"
      << y_label << "</text>\n";
}

}  // namespace

void write_line_svg(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<SvgSeries>& series, bool log_y) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  std::vector<SvgSeries> plotted = series;
  for (auto& s : plotted) {
    for (std::size_t i = 0; i < s.y.size(); ++i) {
      if (log_y) s.y[i] = std::log10(std::max(s.y[i], 1e-300));
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  }
  if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
  if (!(y_hi > y_lo)) y_hi = y_lo + 1.0;

  std::ofstream out;
  open_svg(out, path, title);
  const Frame f{x_lo, x_hi, y_lo, y_hi};
  draw_axes(out, f, x_label, y_label, log_y);
  for (std::size_t si = 0; si < plotted.size(); ++si) {
    const auto& s = plotted[si];
    const std::string color =
        s.color.empty() ? kPalette[si % 6] : s.color;
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out << f.px(s.x[i]) << ',' << f.py(s.y[i]) << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << kRight - 120 << "\" y=\"" << kTop + 16 * (si + 1)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color
        << "\">" << s.label << "</text>\n";
  }
  out << "</svg>\n";
}

void write_histogram_svg(const std::string& path, const std::string& title,
                         const std::string& x_label, double lo, double hi,
                         const std::vector<std::vector<double>>& bin_counts,
                         const std::vector<std::string>& labels) {
  double y_hi = 0.0;
  for (const auto& counts : bin_counts)
    for (double c : counts) y_hi = std::max(y_hi, c);
  if (!(y_hi > 0.0)) y_hi = 1.0;

  std::ofstream out;
  open_svg(out, path, title);
  const Frame f{lo, hi, 0.0, y_hi * 1.05};
  draw_axes(out, f, x_label, "density", false);
  for (std::size_t si = 0; si < bin_counts.size(); ++si) {
    const auto& counts = bin_counts[si];
    const double bw = (hi - lo) / static_cast<double>(counts.size());
    for (std::size_t b = 0; b < counts.size(); ++b) {
      const double x0 = lo + b * bw;
      out << "<rect x=\"" << f.px(x0) << "\" y=\"" << f.py(counts[b])
          << "\" width=\"" << (f.px(x0 + bw) - f.px(x0)) << "\" height=\""
          << (f.py(0.0) - f.py(counts[b])) << "\" fill=\"" << kPalette[si % 6]
          << "\" fill-opacity=\"0.45\"/>\n";
    }
    out << "<text x=\"" << kRight - 120 << "\" y=\"" << kTop + 16 * (si + 1)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
        << kPalette[si % 6] << "\">" << labels[si] << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace mblborn

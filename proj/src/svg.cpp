#include "radial/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "radial/io.hpp"

namespace radial {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Frame {
  double x_min, x_max, y_min, y_max;

  double px(double x) const {
    return kMarginLeft +
           (x - x_min) / (x_max - x_min) * (kWidth - kMarginLeft - kMarginRight);
  }
  double py(double y) const {
    return kHeight - kMarginBottom -
           (y - y_min) / (y_max - y_min) *
               (kHeight - kMarginTop - kMarginBottom);
  }
};

void pad_range(double& lo, double& hi) {
  if (!(hi > lo)) {
    const double bump = std::abs(lo) > 0.0 ? 0.1 * std::abs(lo) : 1.0;
    lo -= bump;
    hi += bump;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
}

void open_svg(std::ofstream& out, const std::string& title,
              const std::vector<std::string>& comment_lines) {
  if (!comment_lines.empty()) {
    out << "<!--\n";
    for (const std::string& line : comment_lines) out << line << "\n";
    out << "-->\n";
  }
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2
      << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">"
      << title << "</text>\n";
}

void draw_axes(std::ofstream& out, const Frame& f, const std::string& x_label,
               const std::string& y_label) {
  const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
  const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
  out << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0
      << "\" height=\"" << y0 - y1
      << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double t = static_cast<double>(k) / 5.0;
    const double xv = f.x_min + t * (f.x_max - f.x_min);
    const double yv = f.y_min + t * (f.y_max - f.y_min);
    const double xp = f.px(xv);
    const double yp = f.py(yv);
    out << "<line x1=\"" << xp << "\" y1=\"" << y0 << "\" x2=\"" << xp
        << "\" y2=\"" << y0 + 5 << "\" stroke=\"#444\"/>\n"
        << "<text x=\"" << xp << "\" y=\"" << y0 + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << num(xv) << "</text>\n"
        << "<line x1=\"" << x0 - 5 << "\" y1=\"" << yp << "\" x2=\"" << x0
        << "\" y2=\"" << yp << "\" stroke=\"#444\"/>\n"
        << "<text x=\"" << x0 - 8 << "\" y=\"" << yp + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << num(yv) << "</text>\n";
  }
  out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << x_label << "</text>\n"
      << "<text x=\"16\" y=\"" << (y0 + y1) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 16 "
      << (y0 + y1) / 2 << ")\">" << y_label << "</text>\n";
}

void close_svg(std::ofstream& out, const std::string& path) {
  out << "</svg>\n";
  if (!out) throw IoError("write failed: " + path);
}

std::vector<double> histogram_counts(const std::vector<double>& values,
                                     std::size_t bins, double lo, double hi) {
  std::vector<double> counts(bins, 0.0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double v : values) {
    auto b = static_cast<long long>((v - lo) / width);
    if (b < 0) b = 0;
    if (b >= static_cast<long long>(bins)) b = static_cast<long long>(bins) - 1;
    counts[static_cast<std::size_t>(b)] += 1.0;
  }
  return counts;
}

}  // namespace

void write_scatter_svg(const std::string& path, const SampleSet& z,
                       const std::string& title,
                       const std::vector<std::string>& comment_lines) {
  if (z.dim < 2) throw std::invalid_argument("write_scatter_svg: need d >= 2");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (std::size_t i = 0; i < z.count; ++i) {
    x_lo = std::min(x_lo, z(i, 0));
    x_hi = std::max(x_hi, z(i, 0));
    y_lo = std::min(y_lo, z(i, 1));
    y_hi = std::max(y_hi, z(i, 1));
  }
  pad_range(x_lo, x_hi);
  pad_range(y_lo, y_hi);
  const Frame f{x_lo, x_hi, y_lo, y_hi};
  open_svg(out, title, comment_lines);
  draw_axes(out, f, "x0", "x1");
  // Cap the marker count so huge sets stay viewable; stride sampling keeps
  // the picture faithful.
  const std::size_t stride = z.count > 20000 ? z.count / 20000 : 1;
  for (std::size_t i = 0; i < z.count; i += stride) {
    out << "<circle cx=\"" << num(f.px(z(i, 0))) << "\" cy=\""
        << num(f.py(z(i, 1)))
        << "\" r=\"1.4\" fill=\"#1f77b4\" fill-opacity=\"0.45\"/>\n";
  }
  close_svg(out, path);
}

void write_histogram_svg(const std::string& path,
                         const std::vector<double>& values, std::size_t bins,
                         const std::function<double(double)>& density,
                         const std::string& title, const std::string& x_label,
                         const std::vector<std::string>& comment_lines) {
  if (values.empty() || bins == 0) {
    throw std::invalid_argument("write_histogram_svg: empty input");
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  if (!(hi > lo)) hi = lo + 1.0;
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<double> counts = histogram_counts(values, bins, lo, hi);
  const double norm = 1.0 / (static_cast<double>(values.size()) * width);
  double y_max = 0.0;
  for (double& c : counts) {
    c *= norm;
    y_max = std::max(y_max, c);
  }
  if (density) {
    for (std::size_t k = 0; k <= 128; ++k) {
      const double x = lo + (hi - lo) * static_cast<double>(k) / 128.0;
      y_max = std::max(y_max, density(x));
    }
  }
  const Frame f{lo, hi, 0.0, y_max * 1.05};
  open_svg(out, title, comment_lines);
  draw_axes(out, f, x_label, "density");
  for (std::size_t b = 0; b < bins; ++b) {
    const double x = lo + width * static_cast<double>(b);
    out << "<rect x=\"" << num(f.px(x)) << "\" y=\"" << num(f.py(counts[b]))
        << "\" width=\"" << num(f.px(x + width) - f.px(x)) << "\" height=\""
        << num(f.py(0.0) - f.py(counts[b]))
        << "\" fill=\"#1f77b4\" fill-opacity=\"0.55\" stroke=\"none\"/>\n";
  }
  if (density) {
    out << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" "
           "points=\"";
    for (std::size_t k = 0; k <= 256; ++k) {
      const double x = lo + (hi - lo) * static_cast<double>(k) / 256.0;
      out << num(f.px(x)) << "," << num(f.py(density(x))) << " ";
    }
    out << "\"/>\n";
  }
  close_svg(out, path);
}

void write_lines_svg(const std::string& path,
                     const std::vector<LineSeries>& series,
                     const std::string& title, const std::string& x_label,
                     const std::string& y_label,
                     const std::vector<std::string>& comment_lines) {
  if (series.empty()) throw std::invalid_argument("write_lines_svg: no data");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  pad_range(x_lo, x_hi);
  pad_range(y_lo, y_hi);
  const Frame f{x_lo, x_hi, y_lo, y_hi};
  open_svg(out, title, comment_lines);
  draw_axes(out, f, x_label, y_label);
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : series[s].points) {
      out << num(f.px(x)) << "," << num(f.py(y)) << " ";
    }
    out << "\"/>\n";
    for (const auto& [x, y] : series[s].points) {
      out << "<circle cx=\"" << num(f.px(x)) << "\" cy=\"" << num(f.py(y))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = kMarginTop + 16.0 + 18.0 * static_cast<double>(s);
    out << "<line x1=\"" << kMarginLeft + 10 << "\" y1=\"" << ly << "\" x2=\""
        << kMarginLeft + 34 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kMarginLeft + 40 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[s].label
        << "</text>\n";
  }
  close_svg(out, path);
}

void write_histogram_csv(const std::string& path,
                         const std::vector<double>& values, std::size_t bins,
                         const std::vector<std::string>& comment_lines) {
  if (values.empty() || bins == 0) {
    throw std::invalid_argument("write_histogram_csv: empty input");
  }
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  if (!(hi > lo)) hi = lo + 1.0;
  const std::vector<double> counts = histogram_counts(values, bins, lo, hi);
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<std::vector<double>> rows;
  for (std::size_t b = 0; b < bins; ++b) {
    rows.push_back({lo + width * static_cast<double>(b),
                    lo + width * static_cast<double>(b + 1), counts[b]});
  }
  write_table_csv(path, comment_lines, {"bin_lo", "bin_hi", "count"}, rows);
}

}  // namespace radial

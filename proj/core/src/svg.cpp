#include "strucimp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "strucimp/error.hpp"

namespace strucimp::svg {
namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 60;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) {
      const double pad = std::max(1e-3, std::abs(lo) * 0.05);
      lo -= pad;
      hi += pad;
    }
  }
};

class Canvas {
 public:
  Canvas(const std::string& title, const std::string& metadata) {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
         << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    if (!metadata.empty()) out_ << "<metadata>" << xml_escape(metadata) << "</metadata>\n";
    out_ << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out_ << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(title)
         << "</text>\n";
  }

  static double px(double f) { return kLeft + f * (kWidth - kLeft - kRight); }
  static double py(double f) { return kHeight - kBottom - f * (kHeight - kTop - kBottom); }

  void axes(const Range& y, const std::string& y_label) {
    out_ << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << px(1) << "\" y2=\"" << py(0)
         << "\" stroke=\"black\"/>\n";
    out_ << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << kLeft << "\" y2=\"" << py(1)
         << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
      const double f = i / 4.0;
      out_ << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(py(f) + 4) << "\" text-anchor=\"end\">"
           << tick(y.lo + f * (y.hi - y.lo)) << "</text>\n";
    }
    out_ << "<text transform=\"translate(16," << num(py(0.5)) << ") rotate(-90)\" text-anchor=\"middle\">"
         << xml_escape(y_label) << "</text>\n";
  }

  void x_tick(double f, const std::string& label) {
    out_ << "<text x=\"" << num(px(f)) << "\" y=\"" << num(py(0) + 18) << "\" text-anchor=\"middle\">"
         << xml_escape(label) << "</text>\n";
  }

  void x_label(const std::string& label) {
    out_ << "<text x=\"" << num(px(0.5)) << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\">"
         << xml_escape(label) << "</text>\n";
  }

  std::ostringstream& raw() { return out_; }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  std::ostringstream out_;
};

double silverman(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / std::max(1.0, n - 1.0));
  return 1.06 * std::max(sd, 1e-9) * std::pow(n, -0.2);
}

}  // namespace

std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
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

std::string line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series, const std::string& metadata) {
  Range xr;
  Range yr;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw ArgumentError("line_plot: x and y lengths differ");
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  xr.finish();
  yr.finish();

  Canvas c(title, metadata);
  c.axes(yr, y_label);
  for (int i = 0; i <= 4; ++i) c.x_tick(i / 4.0, tick(xr.lo + i / 4.0 * (xr.hi - xr.lo)));
  c.x_label(x_label);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    c.raw() << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      c.raw() << num(Canvas::px((s.x[i] - xr.lo) / (xr.hi - xr.lo))) << ','
              << num(Canvas::py((s.y[i] - yr.lo) / (yr.hi - yr.lo))) << ' ';
    }
    c.raw() << "\"/>\n";
    c.raw() << "<text x=\"" << num(Canvas::px(1) - 4) << "\" y=\"" << kTop + 14 * static_cast<double>(k)
            << "\" text-anchor=\"end\" fill=\"" << color << "\">" << xml_escape(s.label) << "</text>\n";
  }
  return c.finish();
}

std::string violin_plot(const std::string& title, const std::string& y_label, const std::vector<Group>& groups,
                        const std::string& metadata) {
  Range yr;
  for (const auto& g : groups) {
    for (double v : g.values) yr.add(v);
  }
  yr.finish();
  Canvas c(title, metadata);
  c.axes(yr, y_label);
  if (groups.empty()) return c.finish();

  const double slot = 1.0 / static_cast<double>(groups.size());
  const double half_width = 0.4 * slot * (kWidth - kLeft - kRight);
  auto fy = [&](double v) { return Canvas::py((v - yr.lo) / (yr.hi - yr.lo)); };
  for (std::size_t k = 0; k < groups.size(); ++k) {
    std::vector<double> v;
    for (double x : groups[k].values) {
      if (std::isfinite(x)) v.push_back(x);
    }
    const double center = Canvas::px((static_cast<double>(k) + 0.5) * slot);
    const char* color = kPalette[k % std::size(kPalette)];
    c.x_tick((static_cast<double>(k) + 0.5) * slot, groups[k].label + " (n=" + std::to_string(v.size()) + ")");
    if (v.size() < 2) {
      for (double x : v) {
        c.raw() << "<circle cx=\"" << num(center) << "\" cy=\"" << num(fy(x)) << "\" r=\"3\" fill=\"" << color
                << "\"/>\n";
      }
      continue;
    }
    std::sort(v.begin(), v.end());
    const double h = silverman(v);
    constexpr int kSteps = 60;
    std::vector<double> grid(kSteps + 1);
    std::vector<double> dens(kSteps + 1);
    double peak = 0.0;
    for (int s = 0; s <= kSteps; ++s) {
      grid[s] = v.front() + (v.back() - v.front()) * s / kSteps;
      double d = 0.0;
      for (double x : v) d += std::exp(-0.5 * std::pow((grid[s] - x) / h, 2));
      dens[s] = d;
      peak = std::max(peak, d);
    }
    c.raw() << "<polygon fill=\"" << color << "\" fill-opacity=\"0.45\" stroke=\"" << color << "\" points=\"";
    for (int s = 0; s <= kSteps; ++s) c.raw() << num(center + half_width * dens[s] / peak) << ',' << num(fy(grid[s])) << ' ';
    for (int s = kSteps; s >= 0; --s) c.raw() << num(center - half_width * dens[s] / peak) << ',' << num(fy(grid[s])) << ' ';
    c.raw() << "\"/>\n";
    const std::size_t mid = v.size() / 2;
    const double median = v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
    c.raw() << "<line x1=\"" << num(center - half_width * 0.5) << "\" y1=\"" << num(fy(median)) << "\" x2=\""
            << num(center + half_width * 0.5) << "\" y2=\"" << num(fy(median)) << "\" stroke=\"black\"/>\n";
  }
  return c.finish();
}

std::string bar_plot(const std::string& title, const std::string& y_label, const std::vector<std::string>& labels,
                     const std::vector<double>& values, const std::string& metadata) {
  if (labels.size() != values.size()) throw ArgumentError("bar_plot: labels and values differ in length");
  Range yr;
  yr.add(0.0);
  for (double v : values) yr.add(v);
  yr.finish();
  Canvas c(title, metadata);
  c.axes(yr, y_label);
  if (values.empty()) return c.finish();
  const double slot = 1.0 / static_cast<double>(values.size());
  auto fy = [&](double v) { return Canvas::py((v - yr.lo) / (yr.hi - yr.lo)); };
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double x0 = Canvas::px((static_cast<double>(k) + 0.15) * slot);
    const double x1 = Canvas::px((static_cast<double>(k) + 0.85) * slot);
    const double v = std::isfinite(values[k]) ? values[k] : 0.0;
    const double top = std::min(fy(v), fy(0.0));
    c.raw() << "<rect x=\"" << num(x0) << "\" y=\"" << num(top) << "\" width=\"" << num(x1 - x0) << "\" height=\""
            << num(std::abs(fy(v) - fy(0.0))) << "\" fill=\"" << kPalette[0] << "\"/>\n";
    c.x_tick((static_cast<double>(k) + 0.5) * slot, labels[k]);
  }
  return c.finish();
}

}  // namespace strucimp::svg

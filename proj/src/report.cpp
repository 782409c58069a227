#include "qmem/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace qmem::report {

std::string num(double v) { return fmt::format("{:.17g}", v); }

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (const auto& h : header) cell(h);
  end_row();
}

void CsvWriter::sep() {
  if (in_row_ == columns_) throw std::logic_error("CsvWriter: too many cells in row");
  if (in_row_ > 0) out_ << ',';
  ++in_row_;
}

CsvWriter& CsvWriter::cell(double v) {
  sep();
  out_ << num(v);
  return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
  sep();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::cell(unsigned long long v) {
  sep();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::cell(const std::string& v) {
  sep();
  if (v.find_first_of(",\"\n") == std::string::npos) {
    out_ << v;
  } else {
    std::string quoted = "\"";
    for (char c : v) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    out_ << quoted << '"';
  }
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) throw std::logic_error("CsvWriter: short row");
  out_ << '\n';
  in_row_ = 0;
}

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header() {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      kWidth, kHeight);
}

struct Frame {
  double x0, y0, w, h;  // pixel box
  double xmin, xmax, ymin, ymax;
  double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
  double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

std::string axes(const Frame& f, const std::string& title, const std::string& xl,
                 const std::string& yl) {
  std::string s = fmt::format(
      "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" "
      "stroke=\"black\"/>\n",
      f.x0, f.y0, f.w, f.h);
  s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                   f.x0 + f.w / 2, f.y0 - 8, esc(title));
  s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                   f.x0 + f.w / 2, f.y0 + f.h + 34, esc(xl));
  s += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 {:.2f} {:.2f})\">{}</text>\n",
      f.x0 - 42, f.y0 + f.h / 2, f.x0 - 42, f.y0 + f.h / 2, esc(yl));
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.xmin + (f.xmax - f.xmin) * i / 4.0;
    const double yv = f.ymin + (f.ymax - f.ymin) * i / 4.0;
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:.3g}</text>\n",
                     f.px(xv), f.y0 + f.h + 16, xv);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.3g}</text>\n",
                     f.x0 - 4, f.py(yv) + 4, yv);
  }
  return s;
}

double gaussian_pdf(double x, const ReferenceGaussian& g) {
  const double d = x - g.mean;
  return std::exp(-d * d / (2.0 * g.variance)) / std::sqrt(2.0 * std::numbers::pi * g.variance);
}

std::string histogram_panel(const HistogramSeries& h, const std::string& title, double x0) {
  const std::size_t bins = h.counts.size();
  const double width = h.bin_edges.back() - h.bin_edges.front();
  const double bin_w = width / static_cast<double>(bins);
  double xmin = h.bin_edges.front();
  double xmax = h.bin_edges.back();
  // Density normalization so the reference curve shares the axis.
  const double norm = 1.0 / (static_cast<double>(h.n_trials) * bin_w);
  double ymax = 0.0;
  for (auto c : h.counts) ymax = std::max(ymax, static_cast<double>(c) * norm);
  if (h.reference) {
    const double sd = std::sqrt(h.reference->variance);
    xmin = std::min(xmin, h.reference->mean - 4.0 * sd);
    xmax = std::max(xmax, h.reference->mean + 4.0 * sd);
    ymax = std::max(ymax, gaussian_pdf(h.reference->mean, *h.reference));
  }
  const Frame f{x0, 40.0, 320.0, 400.0, xmin, xmax, 0.0, ymax * 1.05};
  std::string s = axes(f, title, "scaled readout", "density");
  for (std::size_t i = 0; i < bins; ++i) {
    const double y = static_cast<double>(h.counts[i]) * norm;
    const double left = f.px(h.bin_edges[i]);
    const double right = f.px(h.bin_edges[i + 1]);
    s += fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#9ab\" "
        "stroke=\"#567\" stroke-width=\"0.5\"/>\n",
        left, f.py(y), std::max(0.0, right - left), f.py(0.0) - f.py(y));
  }
  if (h.reference) {
    std::string pts;
    for (int i = 0; i <= 200; ++i) {
      const double x = xmin + (xmax - xmin) * i / 200.0;
      pts += fmt::format("{:.2f},{:.2f} ", f.px(x), f.py(gaussian_pdf(x, *h.reference)));
    }
    s += fmt::format(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-dasharray=\"2,3\"/>\n",
        pts);
  }
  return s;
}

}  // namespace

std::string histogram_pair_svg(const HistogramSeries& left, const std::string& left_title,
                               const HistogramSeries& right, const std::string& right_title) {
  std::string s = header();
  s += histogram_panel(left, left_title, 60.0);
  s += histogram_panel(right, right_title, 460.0);
  s += "</svg>\n";
  return s;
}

std::string line_plot_svg(const PlotSpec& spec, const std::vector<Series>& series) {
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("line_plot_svg: size mismatch");
    for (double v : s.x) xmin = std::min(xmin, v), xmax = std::max(xmax, v);
    for (double v : s.y) ymin = std::min(ymin, v), ymax = std::max(ymax, v);
  }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  const double pad = 0.05 * (ymax - ymin);
  const Frame f{80.0, 40.0, 560.0, 400.0, xmin, xmax, ymin - pad, ymax + pad};
  std::string out = header() + axes(f, spec.title, spec.x_label, spec.y_label);
  static const char* colors[] = {"#1f4e9c", "#c0392b", "#27864a", "#8e44ad", "#555555"};
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      pts += fmt::format("{:.2f},{:.2f} ", f.px(s.x[i]), f.py(s.y[i]));
    }
    const char* color = colors[k % 5];
    out += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\"{}/>\n", pts, color,
                       s.dashed ? " stroke-dasharray=\"6,4\"" : "");
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" fill=\"{}\">{}</text>\n", 650.0,
                       60.0 + 18.0 * static_cast<double>(k), color, esc(s.label));
  }
  out += "</svg>\n";
  return out;
}

}  // namespace qmem::report

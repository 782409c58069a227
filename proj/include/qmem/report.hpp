#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qmem/montecarlo.hpp"

namespace qmem::report {

/// Floats with 17 significant digits, so values round-trip exactly.
std::string num(double v);

/// Minimal CSV writer: comma separator, LF line endings, header first.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(unsigned long long v);
  CsvWriter& cell(const std::string& v);
  void end_row();

 private:
  void sep();
  std::ostream& out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
};

/// Side-by-side histograms with the reference Gaussian drawn dotted over each.
std::string histogram_pair_svg(const HistogramSeries& left, const std::string& left_title,
                               const HistogramSeries& right, const std::string& right_title);

/// Line plot of several series on shared axes.
std::string line_plot_svg(const PlotSpec& spec, const std::vector<Series>& series);

}  // namespace qmem::report

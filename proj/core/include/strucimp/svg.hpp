#pragma once

#include <string>
#include <vector>

namespace strucimp::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Group {
  std::string label;
  std::vector<double> values;
};

// All plots are self-contained SVG documents. `metadata` is stored verbatim
// (XML-escaped) in a <metadata> element so the file records how it was made.

std::string line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series, const std::string& metadata = {});

/// Mirrored Gaussian-kernel density per group (Silverman bandwidth) with the
/// median marked. Groups with fewer than 2 values are drawn as points.
std::string violin_plot(const std::string& title, const std::string& y_label, const std::vector<Group>& groups,
                        const std::string& metadata = {});

std::string bar_plot(const std::string& title, const std::string& y_label, const std::vector<std::string>& labels,
                     const std::vector<double>& values, const std::string& metadata = {});

std::string xml_escape(const std::string& text);

}  // namespace strucimp::svg

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "strucimp/importance.hpp"
#include "strucimp/pipeline.hpp"

namespace strucimp {

const char* tool_version();

using ConfigValue = std::variant<bool, std::int64_t, double, std::string, std::vector<double>>;

/// Parameters and seeds of one command invocation, echoed into every output file.
struct RunConfig {
  std::string command;
  std::vector<std::pair<std::string, ConfigValue>> params;
  std::vector<std::pair<std::string, std::uint64_t>> seeds;

  RunConfig& set(std::string key, ConfigValue value);
  RunConfig& seed(std::string key, std::uint64_t value);
};

/// {"tool", "version", "command", "config", "seeds"} as compact JSON.
std::string meta_json(const RunConfig& config);

/// Comment lines ("# ...") carrying the version and meta_json, for CSV headers.
std::vector<std::string> meta_comments(const RunConfig& config);

enum class TableFormat { Csv, Json };

/// CSV columns node,scheme,value,eig_rank (eig_rank empty unless scheme is mb).
void write_importance(const ImportanceVector& v, const std::vector<std::string>& universe, std::size_t snapshot,
                      const RunConfig& config, std::ostream& out, TableFormat format);
/// Bar chart of the importance values.
std::string importance_svg(const ImportanceVector& v, const std::vector<std::string>& universe,
                           const RunConfig& config);

struct OutputSelection {
  bool json = true;
  bool svg = true;
};

/// Writes the analyze bundle into `dir` (created if needed). CSV tables are
/// always written; the JSON summary and SVG plots follow `select`.
/// Returns the paths written.
std::vector<std::filesystem::path> write_analyze_reports(const AnalyzeResult& result, const TemporalNetwork& tn,
                                                         const RunConfig& config, const std::filesystem::path& dir,
                                                         OutputSelection select = {});

std::string evaluation_report_json(const PredictResult& result, const RunConfig& config);

void write_coefficients(const std::vector<CoefficientRow>& rows, const RunConfig& config, std::ostream& out);

/// report.json, coefficients.csv, predictions.csv and, for binary targets, the
/// permutation-importance and SHAP tables with their plots.
std::vector<std::filesystem::path> write_predict_reports(const PredictResult& result, const TemporalNetwork& tn,
                                                         const RunConfig& config, const std::filesystem::path& dir,
                                                         OutputSelection select = {});

}  // namespace strucimp

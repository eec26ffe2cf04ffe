#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "strucimp/features.hpp"
#include "strucimp/graph.hpp"
#include "strucimp/metrics.hpp"
#include "strucimp/model.hpp"
#include "strucimp/netstats.hpp"

namespace strucimp {

// ---- analyze ----

struct SnapshotSummary {
  std::size_t index = 0;
  std::size_t active_nodes = 0;
  std::size_t edges = 0;
  double total_weight = 0.0;
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  std::size_t positive_eigenvalues = 0;
  double modularity = 0.0;
  std::size_t communities = 0;
};

/// One measure's per-snapshot values for nodes present at t, split by whether
/// the node is still present at t+1.
struct MeasureSplit {
  std::string measure;
  std::vector<double> stay;
  std::vector<double> leave;
  /// Welch test of stay vs leave; empty when either group is too small or flat.
  std::optional<TTestResult> ttest;
  bool significant = false;
};

struct AnalyzeResult {
  std::vector<SnapshotSummary> snapshots;
  /// eig_rank[t][i]: selected eigen-rank of node i at t, 0 when absent.
  std::vector<std::vector<std::size_t>> eig_rank;
  std::vector<MeasureSplit> splits;
  /// Per-test level after the Bonferroni correction (0.05 / number of tests).
  double bonferroni_alpha = 0.05;
  /// Pearson correlation between the measures over all present (node, t) rows.
  std::vector<std::string> correlation_columns;
  Eigen::MatrixXd correlation;
};

/// Undirected networks only (ContractError otherwise).
AnalyzeResult run_analyze(const TemporalNetwork& tn, std::uint64_t seed = 0);

// ---- predict ----

struct PredictOptions {
  Target target = Target::Presence;
  double change_threshold = 0.05;
  double prune_threshold = 0.8;
  double threshold = 0.5;
  std::size_t bootstrap_iterations = 1000;
  std::size_t null_trials = 100;
  std::size_t permutation_repeats = 10;
  SelectionOptions selection;
  std::uint64_t seed = 0;
};

struct CoefficientRow {
  std::string feature;
  double coef = 0.0;
  double pvalue = 0.0;
  /// Wald 95% interval, coef ± 1.96 se.
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct PredictResult {
  Target target = Target::Presence;
  std::size_t snapshots = 0;
  std::size_t rows = 0;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  /// Columns removed by correlation pruning and by the constant-column rule.
  std::vector<std::string> pruned;
  std::vector<std::string> constant;
  std::vector<CoefficientRow> coefficients;  // intercept first

  // Binary targets.
  std::optional<SelectionResult> selection;
  std::optional<Evaluation> evaluation;
  std::optional<BootstrapCi> auc_ci;
  std::optional<NullReport> null_prior;
  /// Presence target only: labels drawn from density-matched random graphs.
  std::optional<NullReport> null_edges;
  std::vector<double> permutation;  // aligned with the model's features
  std::optional<ShapValues> shap;   // test rows against the training background
  FeatureTable test;

  // rel_change.
  std::optional<LinearModel> linear;
  std::optional<double> test_r2;
  std::optional<MetricSummary> null_r2;
};

/// Features for horizons t = 1..T-2, pruning on the training rows, time-ordered
/// selection and evaluation, null models, permutation importance, SHAP and the
/// coefficient table. Needs at least 5 snapshots (DataError otherwise).
PredictResult run_predict(const TemporalNetwork& tn, const PredictOptions& options);

}  // namespace strucimp

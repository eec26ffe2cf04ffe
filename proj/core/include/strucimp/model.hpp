#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "strucimp/features.hpp"
#include "strucimp/graph.hpp"
#include "strucimp/metrics.hpp"
#include "strucimp/rng.hpp"

namespace strucimp {

/// Column-wise z-scoring fitted on training rows (population stdev).
struct Standardizer {
  std::vector<std::string> columns;
  std::vector<double> means;
  std::vector<double> stdevs;
  /// Columns dropped because they were constant on the training rows.
  std::vector<std::string> dropped;

  /// Standardized design matrix for `table`, columns looked up by name.
  Eigen::MatrixXd transform(const FeatureTable& table) const;
};

/// Columns whose stdev is <= 1e-10 * max(1, |mean|) count as constant.
Standardizer fit_standardizer(const FeatureTable& train);

struct StandardizeResult {
  FeatureTable table;
  Standardizer scaler;
};

StandardizeResult standardize(const FeatureTable& table);

/// Duplicates uniformly chosen minority-class rows until both classes have the
/// same count. Throws DataError if only one class is present.
FeatureTable oversample(const FeatureTable& table, std::uint64_t seed);

struct LogisticOptions {
  double l2 = 0.0;
  std::size_t max_iter = 500;
  double tol = 1e-8;
  /// Largest |coefficient| allowed before the data are declared separable.
  double separation_bound = 50.0;
};

/// Coefficients of P(y = 1 | z) = σ(alpha + betaᵀ z) on standardized z.
struct LogisticFit {
  double alpha = 0.0;
  Eigen::VectorXd beta;
  /// Wald standard errors and two-sided p-values, intercept first.
  Eigen::VectorXd std_errors;
  std::vector<double> pvalues;
  std::size_t iterations = 0;
  double grad_norm = 0.0;
  bool separation = false;
};

/// Maximises Σ log-likelihood − (l2/2)‖beta‖² (intercept unpenalised) by damped
/// Newton/IRLS until the gradient norm is <= tol * rows. Throws NumericalError
/// when max_iter is exhausted first. If a coefficient exceeds separation_bound the fit
/// stops, `separation` is set and the coefficients are scaled back to the bound.
/// An unpenalised fit whose linear predictor splits the classes perfectly is
/// flagged as separated as well.
LogisticFit fit_logistic(const Eigen::MatrixXd& z, std::span<const double> y, const LogisticOptions& options);

double penalized_log_likelihood(const Eigen::MatrixXd& z, std::span<const double> y, double alpha,
                                const Eigen::VectorXd& beta, double l2);
/// Gradient of penalized_log_likelihood, intercept first.
Eigen::VectorXd penalized_gradient(const Eigen::MatrixXd& z, std::span<const double> y, double alpha,
                                   const Eigen::VectorXd& beta, double l2);

struct LogisticModel {
  Standardizer scaler;
  LogisticFit fit;
  double l2 = 0.0;

  const std::vector<std::string>& features() const noexcept { return scaler.columns; }
  Eigen::VectorXd log_odds_standardized(const Eigen::MatrixXd& z) const;
  Eigen::VectorXd log_odds(const FeatureTable& table) const;
  Eigen::VectorXd predict_proba(const FeatureTable& table) const;
  std::optional<double> coefficient(const std::string& feature) const;
  std::optional<double> pvalue(const std::string& feature) const;
};

/// Standardizes on `train` and fits. Rows are used as given (no oversampling).
LogisticModel fit_logistic(const FeatureTable& train, const LogisticOptions& options);

struct SelectionOptions {
  std::vector<double> l2_grid{0.01, 0.1, 1.0, 10.0};
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  bool oversample = true;
  LogisticOptions logistic;
};

struct SelectionResult {
  LogisticModel model;
  double l2 = 0.0;
  /// Sorted, de-duplicated l2 grid and its mean validation AUC per entry (nullopt when no fold was scorable).
  std::vector<double> grid;
  std::vector<std::optional<double>> grid_auc;
  FeatureTable train;  // train + validation rows, before oversampling
  FeatureTable test;
  std::size_t folds_scored = 0;
};

/// Pools rows in time order and splits them 40/40/20 into train, validation and
/// test. The validation block is cut into `folds` consecutive pieces; fold f
/// trains on everything before piece f and validates on it. The l2 with the best
/// mean validation AUC wins (ties go to the smallest l2) and the final model is
/// refit on train + validation. Training rows are oversampled when requested;
/// validation and test rows never are.
SelectionResult time_ordered_select(std::span<const FeatureTable> tables, const SelectionOptions& options);

struct Evaluation {
  Confusion confusion;
  double threshold = 0.5;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> auc;
  std::optional<Interval> ci_precision;
  std::optional<Interval> ci_recall;
  /// Normal-approximation intervals, reported when the count is >= 100.
  std::optional<Interval> ci_precision_normal;
  std::optional<Interval> ci_recall_normal;
};

Evaluation evaluate(const LogisticModel& model, const FeatureTable& test, double threshold = 0.5,
                    double alpha = 0.05);

BootstrapCi bootstrap_auc_ci(const LogisticModel& model, const FeatureTable& table,
                             std::size_t iterations = 1000, std::uint64_t seed = 0);

/// Node presence under random edges: each of the n(n−1)/2 pairs of an n-node
/// universe is an edge with probability `density`; a node is present when it
/// gets at least one edge.
std::vector<char> sample_presence(std::size_t n, double density, Rng& rng);

/// Scores the model against presence labels drawn from density-matched random
/// graphs. For each row the density is that of snapshot as_of + 1.
NullReport null_edge_presence(const LogisticModel& model, const FeatureTable& table,
                              const TemporalNetwork& tn, std::size_t trials = 100, std::uint64_t seed = 0,
                              double threshold = 0.5);

/// Mean increase of (1 − AUC) when each feature column is shuffled. Aligned
/// with model.features().
std::vector<double> permutation_importance(const LogisticModel& model, const FeatureTable& table,
                                           std::size_t repeats = 10, std::uint64_t seed = 0);

/// Exact SHAP values of a linear score: phi_j(x) = beta_j (z_j − mean_j) with the
/// mean taken over the background rows, and base = alpha + betaᵀ mean.
struct ShapValues {
  Eigen::MatrixXd phi;  // rows × features
  double base_value = 0.0;
  Eigen::VectorXd background_mean;
};

ShapValues shap_linear(double intercept, const Eigen::VectorXd& coefficients, const Eigen::MatrixXd& z,
                       const Eigen::MatrixXd& background);
ShapValues shap_linear(const LogisticModel& model, const FeatureTable& table, const FeatureTable& background);

struct LinearModel {
  Standardizer scaler;
  double intercept = 0.0;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd std_errors;  // intercept first
  std::vector<double> pvalues;  // intercept first
  double r2 = 0.0;              // on the training rows
  bool rank_deficient = false;

  const std::vector<std::string>& features() const noexcept { return scaler.columns; }
  Eigen::VectorXd predict(const FeatureTable& table) const;
};

/// Ordinary least squares on standardized features via the normal equations
/// with a 1e-10 ridge; falls back to a pseudo-inverse if the design is rank
/// deficient. The table's target values must be real.
LinearModel fit_linear(const FeatureTable& train);

/// 1 − SS_res/SS_tot of the model's predictions on `table`.
double r_squared(const LinearModel& model, const FeatureTable& table);

/// Held-out R² after refitting on training rows whose targets were shuffled.
MetricSummary null_shuffle_regression(const FeatureTable& train, const FeatureTable& test,
                                      std::size_t trials = 100, std::uint64_t seed = 0);

}  // namespace strucimp

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace strucimp {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const noexcept { return lo <= v && v <= hi; }
};

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
};

/// Predicted positive iff score >= threshold; labels are 0/1.
Confusion confusion(std::span<const double> scores, std::span<const double> labels, double threshold);

/// TP / (TP + FP); nullopt when nothing was predicted positive.
std::optional<double> precision(const Confusion& c);
/// TP / (TP + FN); nullopt when there are no positive labels.
std::optional<double> recall(const Confusion& c);

/// ROC AUC by the Mann–Whitney rank statistic with midranks for ties.
/// nullopt when only one class is present.
std::optional<double> auc(std::span<const double> scores, std::span<const double> labels);

/// P(X <= k) for X ~ Binomial(n, p).
double binom_cdf(std::size_t k, std::size_t n, double p);

enum class BinomCiMethod {
  Exact,   // invert the binomial CDF in p (Clopper–Pearson)
  Normal,  // p̂ ± z sqrt(p̂(1 − p̂)/n), intended for n >= 100
};

/// Two-sided (1 − alpha) interval for a success probability after `k` successes
/// in `n` trials. The exact method bisects the binomial CDF to 1e-12 in p.
Interval binom_ci(std::size_t k, std::size_t n, double alpha = 0.05,
                  BinomCiMethod method = BinomCiMethod::Exact);

/// Empirical quantile with linear interpolation between order statistics, q in [0, 1].
double quantile(std::vector<double> values, double q);

struct BootstrapCi {
  Interval ci;
  double alpha = 0.05;
  std::size_t iterations = 0;
  /// Iterations dropped after 10 single-class redraws.
  std::size_t skipped = 0;
  std::size_t redraws = 0;
};

/// Percentile bootstrap of the AUC: rows resampled with replacement, a
/// single-class resample is redrawn up to 10 times before the iteration is skipped.
BootstrapCi bootstrap_auc_ci(std::span<const double> scores, std::span<const double> labels,
                             std::size_t iterations = 1000, std::uint64_t seed = 0,
                             double alpha = 0.05);

/// Distribution summary of a metric over null-model trials. `ci90` drops the top and
/// bottom 5% of trial values, `ci95` the top and bottom 2.5%.
struct MetricSummary {
  std::optional<double> mean;
  Interval ci90;
  Interval ci95;
  /// Trials in which the metric was defined.
  std::size_t defined = 0;
};

MetricSummary summarize(const std::vector<double>& values);

struct NullReport {
  MetricSummary precision;
  MetricSummary recall;
  MetricSummary auc;
  std::size_t trials = 0;
};

/// Predicts 1 with probability equal to the training positive rate, independently
/// per test row, and scores the predictions against the test labels.
NullReport null_prior_predictor(std::span<const double> train_labels, std::span<const double> test_labels,
                                std::size_t trials = 100, std::uint64_t seed = 0);

}  // namespace strucimp

#include "strucimp/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "strucimp/error.hpp"

namespace strucimp {
namespace {

constexpr double kZ975 = 1.959963984540054;

std::vector<std::size_t> first_rows(std::size_t n) {
  std::vector<std::size_t> r(n);
  std::iota(r.begin(), r.end(), std::size_t{0});
  return r;
}

CoefficientRow coefficient_row(std::string name, double coef, double se, double p) {
  return {std::move(name), coef, p, coef - kZ975 * se, coef + kZ975 * se};
}

bool both_classes(const std::vector<double>& y) {
  const auto pos = std::count_if(y.begin(), y.end(), [](double v) { return v > 0.5; });
  return pos > 0 && static_cast<std::size_t>(pos) < y.size();
}

}  // namespace

AnalyzeResult run_analyze(const TemporalNetwork& tn, std::uint64_t seed) {
  if (tn.size() == 0) throw DataError("network has no snapshots");
  const FeatureBuilder fb(tn, seed);
  const std::size_t n = tn.num_nodes();
  AnalyzeResult out;

  for (std::size_t t = 0; t < tn.size(); ++t) {
    const SnapshotMeasures& m = fb.measures(t);
    SnapshotSummary s;
    s.index = t;
    s.active_nodes = static_cast<std::size_t>(std::count(m.present.begin(), m.present.end(), 1));
    s.edges = tn[t].num_edges();
    for (const Edge& e : tn[t].edges()) s.total_weight += e.weight;
    if (m.eigenvalues.size() > 0) {
      s.lambda_max = m.eigenvalues.maxCoeff();
      s.lambda_min = m.eigenvalues.minCoeff();
      const double tol = 1e-10 * std::max(1.0, m.eigenvalues.cwiseAbs().maxCoeff());
      s.positive_eigenvalues = static_cast<std::size_t>((m.eigenvalues.array() > tol).count());
    }
    s.modularity = m.modularity;
    s.communities = m.num_communities;
    out.snapshots.push_back(s);
    out.eig_rank.push_back(m.eig_rank);
  }

  const std::size_t width = SnapshotMeasures::kNumMeasures;
  std::size_t tests = 0;
  for (std::size_t j = 0; j < width; ++j) {
    MeasureSplit split;
    split.measure = kFeatureColumns[j];
    for (std::size_t t = 0; t + 1 < tn.size(); ++t) {
      const SnapshotMeasures& now = fb.measures(t);
      const SnapshotMeasures& next = fb.measures(t + 1);
      for (std::size_t i = 0; i < n; ++i) {
        if (!now.present[i]) continue;
        const double v = now.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        (next.present[i] ? split.stay : split.leave).push_back(v);
      }
    }
    try {
      split.ttest = mean_diff_ttest(split.stay, split.leave);
      ++tests;
    } catch (const StatisticsError&) {
    }
    out.splits.push_back(std::move(split));
  }
  out.bonferroni_alpha = 0.05 / static_cast<double>(std::max<std::size_t>(1, tests));
  for (auto& split : out.splits) {
    split.significant = split.ttest && split.ttest->p_value < out.bonferroni_alpha;
  }

  std::vector<std::vector<double>> cols(width);
  for (std::size_t t = 0; t < tn.size(); ++t) {
    const SnapshotMeasures& m = fb.measures(t);
    for (std::size_t i = 0; i < n; ++i) {
      if (!m.present[i]) continue;
      for (std::size_t j = 0; j < width; ++j) {
        cols[j].push_back(m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      }
    }
  }
  out.correlation_columns.assign(kFeatureColumns.begin(), kFeatureColumns.begin() + width);
  const auto w = static_cast<Eigen::Index>(width);
  out.correlation = Eigen::MatrixXd::Constant(w, w, std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index a = 0; a < w; ++a) {
    for (Eigen::Index b = a; b < w; ++b) {
      try {
        const double r = pearson(cols[static_cast<std::size_t>(a)], cols[static_cast<std::size_t>(b)]);
        out.correlation(a, b) = out.correlation(b, a) = r;
      } catch (const StatisticsError&) {
      }
    }
  }
  return out;
}

PredictResult run_predict(const TemporalNetwork& tn, const PredictOptions& options) {
  if (tn.size() < 5) {
    throw DataError("too few snapshots for prediction: need >= 5, got " + std::to_string(tn.size()));
  }
  const FeatureBuilder fb(tn, options.seed);

  std::vector<FeatureTable> tables;
  for (std::size_t t = 1; t + 1 < tn.size(); ++t) {
    FeatureTable table = fb.build_labelled(t, options.target, options.change_threshold);
    if (table.rows() > 0) tables.push_back(std::move(table));
  }
  if (tables.empty()) throw DataError("no labelled rows in any horizon");

  PredictResult out;
  out.target = options.target;
  out.snapshots = tn.size();

  // Pruning looks only at rows that precede the test block.
  const FeatureTable pooled = concat(tables);
  out.rows = pooled.rows();
  const std::size_t fit_rows = out.rows * 4 / 5;
  if (fit_rows < 2) throw DataError("too few rows (" + std::to_string(out.rows) + ") to fit a model");
  out.pruned = prune_correlated(pooled.select_rows(first_rows(fit_rows)), options.prune_threshold).dropped;
  for (auto& t : tables) t = t.drop_columns(out.pruned);

  if (options.target == Target::RelChange) {
    const FeatureTable all = concat(tables);
    std::vector<std::size_t> test_idx(all.rows() - fit_rows);
    std::iota(test_idx.begin(), test_idx.end(), fit_rows);
    const FeatureTable train = all.select_rows(first_rows(fit_rows));
    out.test = all.select_rows(test_idx);
    if (out.test.rows() < 2) throw DataError("too few test rows for R^2");
    out.train_rows = train.rows();
    out.test_rows = out.test.rows();
    LinearModel lm = fit_linear(train);
    out.constant = lm.scaler.dropped;
    out.test_r2 = r_squared(lm, out.test);
    out.null_r2 = null_shuffle_regression(train, out.test, options.null_trials, options.seed + 5);
    out.coefficients.push_back(coefficient_row("(intercept)", lm.intercept, lm.std_errors(0), lm.pvalues[0]));
    for (std::size_t j = 0; j < lm.features().size(); ++j) {
      const auto k = static_cast<Eigen::Index>(j);
      out.coefficients.push_back(
          coefficient_row(lm.features()[j], lm.coefficients(k), lm.std_errors(k + 1), lm.pvalues[j + 1]));
    }
    out.linear = std::move(lm);
    return out;
  }

  SelectionOptions sel_opts = options.selection;
  sel_opts.seed = options.seed;
  SelectionResult sel = time_ordered_select(tables, sel_opts);
  const LogisticModel& model = sel.model;
  out.train_rows = sel.train.rows();
  out.test_rows = sel.test.rows();
  out.constant = model.scaler.dropped;
  out.test = sel.test;

  out.evaluation = evaluate(model, sel.test, options.threshold);
  if (out.evaluation->auc) {
    out.auc_ci = bootstrap_auc_ci(model, sel.test, options.bootstrap_iterations, options.seed + 1);
  }
  out.null_prior = null_prior_predictor(sel.train.y, sel.test.y, options.null_trials, options.seed + 2);
  if (options.target == Target::Presence) {
    out.null_edges = null_edge_presence(model, sel.test, tn, options.null_trials, options.seed + 3, options.threshold);
  }
  if (both_classes(sel.test.y)) {
    out.permutation = permutation_importance(model, sel.test, options.permutation_repeats, options.seed + 4);
  }
  out.shap = shap_linear(model, sel.test, sel.train);

  out.coefficients.push_back(
      coefficient_row("(intercept)", model.fit.alpha, model.fit.std_errors(0), model.fit.pvalues[0]));
  for (std::size_t j = 0; j < model.features().size(); ++j) {
    const auto k = static_cast<Eigen::Index>(j);
    out.coefficients.push_back(coefficient_row(model.features()[j], model.fit.beta(k), model.fit.std_errors(k + 1),
                                               model.fit.pvalues[j + 1]));
  }
  out.selection = std::move(sel);
  return out;
}

}  // namespace strucimp

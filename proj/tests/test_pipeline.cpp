#include <gtest/gtest.h>

#include <cmath>

#include "strucimp/error.hpp"
#include "strucimp/generators.hpp"
#include "strucimp/pipeline.hpp"
#include "strucimp/spectral.hpp"

using namespace strucimp;

namespace {

TemporalNetwork small_synthetic(double coupling, std::uint64_t seed, int horizon = 12) {
  SyntheticConfig cfg;
  cfg.n = 60;
  cfg.horizon = horizon;
  cfg.dropout_coupling = coupling;
  return gen_synthetic_temporal(cfg, seed);
}

PredictOptions quick(Target target) {
  PredictOptions o;
  o.target = target;
  o.bootstrap_iterations = 100;
  o.null_trials = 20;
  o.permutation_repeats = 2;
  o.seed = 3;
  return o;
}

}  // namespace

TEST(Analyze, StaticBarbell) {
  const Snapshot b = gen_barbell(4, 2, 5);
  std::vector<Snapshot> snaps;
  for (std::size_t t = 0; t < 3; ++t) snaps.emplace_back(b.node_ids(), b.edges(), false, t);
  const TemporalNetwork tn(b.node_ids(), snaps);
  const AnalyzeResult r = run_analyze(tn);
  ASSERT_EQ(r.snapshots.size(), 3u);
  const Spectrum s = eig_sym(adjacency(b));
  for (const auto& snap : r.snapshots) {
    EXPECT_EQ(snap.edges, 19u);
    EXPECT_EQ(snap.positive_eigenvalues, 3u);
    EXPECT_NEAR(snap.lambda_max, s.eigenvalue(0), 1e-12);
    EXPECT_NEAR(snap.modularity, r.snapshots[0].modularity, 0.0);
    EXPECT_EQ(snap.communities, 3u);
  }
  for (std::size_t i = 0; i < 11; ++i) EXPECT_EQ(r.eig_rank[1][i], select_eigencomponent(s, i));
  // every node stays, so no test can be run
  for (const auto& split : r.splits) {
    EXPECT_TRUE(split.leave.empty());
    EXPECT_FALSE(split.ttest.has_value());
  }
  EXPECT_EQ(r.bonferroni_alpha, 0.05);
}

TEST(Analyze, SyntheticSplitsAndCorrelation) {
  const TemporalNetwork tn = small_synthetic(-2.0, 1);
  const AnalyzeResult r = run_analyze(tn);
  std::size_t tests = 0;
  for (const auto& s : r.splits) tests += s.ttest.has_value();
  EXPECT_GT(tests, 0u);
  EXPECT_NEAR(r.bonferroni_alpha, 0.05 / static_cast<double>(tests), 1e-15);
  ASSERT_EQ(r.correlation.rows(), 8);
  EXPECT_NEAR(r.correlation(0, 0), 1.0, 1e-12);
  EXPECT_TRUE(r.correlation.isApprox(r.correlation.transpose()) || r.correlation.hasNaN());
}

TEST(Predict, TooFewSnapshots) {
  EXPECT_THROW(run_predict(small_synthetic(0.0, 1, 4), quick(Target::Presence)), DataError);
}

TEST(Predict, PresenceReport) {
  const TemporalNetwork tn = small_synthetic(-2.0, 2);
  const PredictResult r = run_predict(tn, quick(Target::Presence));
  ASSERT_TRUE(r.selection.has_value());
  ASSERT_TRUE(r.evaluation.has_value());
  EXPECT_TRUE(r.null_prior.has_value());
  EXPECT_TRUE(r.null_edges.has_value());
  EXPECT_EQ(r.train_rows + r.test_rows, r.rows);
  EXPECT_EQ(r.coefficients.front().feature, "(intercept)");
  EXPECT_EQ(r.coefficients.size(), r.selection->model.features().size() + 1);
  EXPECT_EQ(r.permutation.size(), r.selection->model.features().size());
  ASSERT_TRUE(r.shap.has_value());
  EXPECT_EQ(static_cast<std::size_t>(r.shap->phi.rows()), r.test_rows);
  for (const auto& c : r.coefficients) {
    EXPECT_LE(c.ci_lo, c.coef);
    EXPECT_GE(c.ci_hi, c.coef);
  }
  // mc carries no information and is dropped as constant
  EXPECT_NE(std::find(r.constant.begin(), r.constant.end(), "mc"), r.constant.end());
}

TEST(Predict, Deterministic) {
  const TemporalNetwork tn = small_synthetic(-2.0, 4);
  const PredictResult a = run_predict(tn, quick(Target::Presence));
  const PredictResult b = run_predict(tn, quick(Target::Presence));
  EXPECT_EQ(a.evaluation->auc, b.evaluation->auc);
  EXPECT_EQ(a.auc_ci->ci.lo, b.auc_ci->ci.lo);
  EXPECT_EQ(*a.null_prior->auc.mean, *b.null_prior->auc.mean);
}

TEST(Predict, OtherBinaryTargetsSkipEdgeNull) {
  const TemporalNetwork tn = small_synthetic(0.0, 5);
  const PredictResult r = run_predict(tn, quick(Target::Sign));
  EXPECT_FALSE(r.null_edges.has_value());
  EXPECT_TRUE(r.null_prior.has_value());
}

TEST(Predict, RelativeChangeRegression) {
  const TemporalNetwork tn = small_synthetic(0.0, 6);
  const PredictResult r = run_predict(tn, quick(Target::RelChange));
  ASSERT_TRUE(r.linear.has_value());
  ASSERT_TRUE(r.test_r2.has_value());
  ASSERT_TRUE(r.null_r2.has_value());
  EXPECT_TRUE(std::isfinite(*r.test_r2));
  EXPECT_FALSE(r.selection.has_value());
  EXPECT_EQ(r.coefficients.size(), r.linear->features().size() + 1);
}

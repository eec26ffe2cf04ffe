// Acceptance checks A1–A11. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "strucimp/generators.hpp"
#include "strucimp/importance.hpp"
#include "strucimp/metrics.hpp"
#include "strucimp/model.hpp"
#include "strucimp/netstats.hpp"
#include "strucimp/pipeline.hpp"
#include "strucimp/spectral.hpp"
#include "support.hpp"

using namespace strucimp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const Snapshot& barbell() {
  static const Snapshot s = gen_barbell(4, 2, 5);
  return s;
}

Outcome a1() {
  const auto t0 = std::chrono::steady_clock::now();
  const Spectrum s = eig_sym(adjacency(barbell()));
  const std::size_t pos = s.num_positive();
  double diff = INFINITY;
  if (pos == 3) {
    diff = testsupport::aligned_max_abs_diff(s.eigenvectors.leftCols(3), testsupport::barbell_reference_eigenvectors());
  }
  const double secs = seconds_since(t0);
  return {pos == 3 && diff <= 1e-3 && secs < 1.0,
          fmt("positive eigenvalues=%zu max|diff|=%.2e (tol 1e-3) runtime=%.3fs (limit 1s)", pos, diff, secs)};
}

Outcome a2() {
  const Spectrum s = eig_sym(adjacency(barbell()));
  const std::vector<std::size_t> expected{2, 2, 2, 2, 3, 3, 1, 1, 1, 1, 1};
  std::string got;
  bool ok = true;
  for (std::size_t i = 0; i < 11; ++i) {
    const std::size_t r = select_eigencomponent(s, i);
    ok = ok && r == expected[i];
    got += std::to_string(r);
  }
  return {ok, "ranks nodes 0-10 = " + got + " (expected 22223311111)"};
}

Outcome a3() {
  const Spectrum s = eig_sym(adjacency(barbell()));
  const Partition expected({0, 0, 0, 0, 1, 1, 2, 2, 2, 2, 2});
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    KMeansOptions o;
    o.k = 3;
    o.seed = seed;
    hits += kmeans_eigvecs(s, o).partition == expected;
  }
  return {hits >= 95, fmt("%d/100 seeds give {0-3},{4,5},{6-10} (need >= 95)", hits)};
}

Outcome a4() {
  const auto mb = node_importance(barbell(), Scheme::Mb);
  const double bridge = std::min(*mb.value_of(4), *mb.value_of(5));
  double right = -INFINITY;
  for (NodeIndex i = 6; i <= 10; ++i) right = std::max(right, *mb.value_of(i));
  return {bridge > right, fmt("min bridge m_b=%.6f max m_b over 6-10=%.6f", bridge, right)};
}

Outcome a5() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(20240501);
  const double eps = 1e-6;
  double worst = 0.0;
  for (int g = 0; g < 50; ++g) {
    const std::size_t n = 2 + rng.below(11);
    const Eigen::MatrixXd a = testsupport::random_connected(n, rng);
    const auto ma = node_importance(testsupport::from_matrix(a), Scheme::Ma);
    const double base = testsupport::lambda_max(a);
    for (std::size_t k = 0; k < n; ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      const double s = a.row(kk).sum();
      Eigen::MatrixXd v = Eigen::MatrixXd::Zero(a.rows(), a.cols());
      v.row(kk) = a.row(kk) / s;
      v.col(kk) = a.col(kk) / s;
      const double fd = (testsupport::lambda_max(a + eps * v) - base) / eps;
      worst = std::max(worst, std::abs(*ma.value_of(k) - fd));
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-4 && secs < 30.0,
          fmt("50 graphs, max |m_a - finite difference|=%.2e (tol 1e-4) runtime=%.2fs (limit 30s)", worst, secs)};
}

Outcome a6() {
  double worst = 0.0;
  for (std::size_t n = 3; n <= 12; ++n) {
    for (const auto& a : {testsupport::clique_matrix(n), testsupport::cycle_matrix(n)}) {
      for (double v : node_importance(testsupport::from_matrix(a), Scheme::Ma).values) {
        worst = std::max(worst, std::abs(v - 2.0 / static_cast<double>(n)));
      }
    }
  }
  return {worst <= 1e-10, fmt("cliques and cycles n=3..12, max |m_a - 2/n|=%.2e (tol 1e-10)", worst)};
}

Outcome a7() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t seed = 1;
  auto run = [&](double coupling) {
    SyntheticConfig cfg;
    cfg.n = 120;
    cfg.horizon = 30;
    cfg.dropout_coupling = coupling;
    const TemporalNetwork tn = gen_synthetic_temporal(cfg, seed);
    PredictOptions o;
    o.target = Target::Presence;
    o.seed = seed;
    return run_predict(tn, o);
  };

  const PredictResult coupled = run(-2.0);
  bool ok = coupled.auc_ci.has_value() && coupled.null_prior && coupled.null_prior->auc.mean;
  double lo = NAN, hi = NAN, null_hi = NAN, coef = NAN, p = NAN;
  if (ok) {
    lo = coupled.auc_ci->ci.lo;
    hi = coupled.auc_ci->ci.hi;
    null_hi = coupled.null_prior->auc.ci95.hi;
    ok = lo > null_hi;
  }
  const auto& model = coupled.selection->model;
  if (const auto c = model.coefficient("mb")) {
    coef = *c;
    p = *model.pvalue("mb");
    ok = ok && coef < 0.0 && p < 0.05;
  } else {
    ok = false;
  }

  const PredictResult uncoupled = run(0.0);
  double lo0 = NAN, hi0 = NAN;
  bool contains = false;
  if (uncoupled.auc_ci) {
    lo0 = uncoupled.auc_ci->ci.lo;
    hi0 = uncoupled.auc_ci->ci.hi;
    contains = uncoupled.auc_ci->ci.contains(0.5);
  }
  const double secs = seconds_since(t0);
  return {ok && contains && secs < 120.0,
          fmt("coupling -2: AUC=%.3f CI95=[%.3f,%.3f] vs null CI95 hi=%.3f, m_b coef=%.3f p=%.2e; "
              "coupling 0: CI95=[%.3f,%.3f] contains 0.5=%s; runtime=%.1fs (limit 120s)",
              coupled.evaluation && coupled.evaluation->auc ? *coupled.evaluation->auc : NAN, lo, hi, null_hi, coef,
              p, lo0, hi0, contains ? "yes" : "no", secs)};
}

Outcome a8() {
  double worst = 0.0;
  for (std::size_t n = 1; n <= 50; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      const Interval got = binom_ci(k, n);
      const Interval ref = testsupport::clopper_pearson_oracle(k, n, 0.05);
      worst = std::max({worst, std::abs(got.lo - ref.lo), std::abs(got.hi - ref.hi)});
    }
  }
  return {worst <= 1e-6, fmt("all (k, n) with n <= 50, max endpoint gap=%.2e (tol 1e-6)", worst)};
}

Outcome a9() {
  Rng rng(99);
  const Eigen::Index rows = 1000, cols = 6;
  Eigen::MatrixXd z(rows, cols), bg(500, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index j = 0; j < cols; ++j) z(r, j) = 2.0 * rng.normal();
  for (Eigen::Index r = 0; r < 500; ++r)
    for (Eigen::Index j = 0; j < cols; ++j) bg(r, j) = rng.normal() + 0.5;
  Eigen::VectorXd beta(cols);
  for (Eigen::Index j = 0; j < cols; ++j) beta(j) = rng.normal();
  const double alpha = rng.normal();
  const ShapValues s = shap_linear(alpha, beta, z, bg);
  const Eigen::VectorXd mean = bg.colwise().mean();
  double additivity = 0.0, closed = 0.0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    additivity = std::max(additivity, std::abs(s.base_value + s.phi.row(r).sum() - (alpha + z.row(r).dot(beta))));
    for (Eigen::Index j = 0; j < cols; ++j) {
      closed = std::max(closed, std::abs(s.phi(r, j) - beta(j) * (z(r, j) - mean(j))));
    }
  }
  return {additivity <= 1e-10 && closed <= 1e-10,
          fmt("1000 rows: max additivity residual=%.2e, max |phi - beta_j(x_j - mean_j)|=%.2e (tol 1e-10)",
              additivity, closed)};
}

Outcome a10() {
  double worst_half = 0.0, worst_zero = 0.0;
  for (std::size_t n = 3; n <= 10; ++n) {
    const auto m = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    a.topLeftCorner(m, m) = testsupport::clique_matrix(n);
    a.bottomRightCorner(m, m) = testsupport::clique_matrix(n);
    std::vector<int> c(2 * n, 0);
    std::fill(c.begin() + m, c.end(), 1);
    worst_half = std::max(worst_half, std::abs(modularity(testsupport::from_matrix(a), Partition(c)) - 0.5));
  }
  Rng rng(7);
  for (int g = 0; g < 30; ++g) {
    const std::size_t n = 2 + rng.below(20);
    const Snapshot s = testsupport::from_matrix(testsupport::random_connected(n, rng));
    worst_zero = std::max(worst_zero, std::abs(modularity(s, Partition(std::vector<int>(n, 0)))));
  }
  worst_zero = std::max(worst_zero, std::abs(modularity(barbell(), Partition(std::vector<int>(11, 0)))));
  return {worst_half <= 1e-12 && worst_zero <= 1e-12,
          fmt("two equal cliques max |Q-0.5|=%.2e, single community max |Q|=%.2e (tol 1e-12)", worst_half,
              worst_zero)};
}

Outcome a11() {
  Rng rng(11);
  auto balanced = [&](std::size_t n) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<double>(i % 2);
    rng.shuffle(std::span<double>(y));
    return y;
  };
  const auto train = balanced(500);
  const auto test = balanced(500);
  const NullReport r = null_prior_predictor(train, test, 100, 5);
  const double m = r.auc.mean ? *r.auc.mean : NAN;
  return {m > 0.45 && m < 0.55, fmt("100 trials, mean null AUC=%.4f (need in (0.45, 0.55))", m)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks{
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4},  {"A5", a5},  {"A6", a6},
      {"A7", a7}, {"A8", a8}, {"A9", a9}, {"A10", a10}, {"A11", a11}};
  int failed = 0;
  for (const auto& [id, check] : checks) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

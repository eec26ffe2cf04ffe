#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "strucimp/graph.hpp"
#include "strucimp/metrics.hpp"
#include "strucimp/rng.hpp"

namespace testsupport {

inline std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

inline strucimp::Snapshot from_matrix(const Eigen::MatrixXd& a, bool directed = false, std::size_t t = 0) {
  std::vector<strucimp::Edge> edges;
  const auto n = static_cast<std::size_t>(a.rows());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = directed ? 0 : i + 1; j < n; ++j) {
      const double w = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (i != j && w != 0.0) edges.push_back({i, j, w});
    }
  }
  return strucimp::Snapshot(ids(n), std::move(edges), directed, t);
}

inline Eigen::MatrixXd clique_matrix(std::size_t n, double w = 1.0) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n), w);
  a.diagonal().setZero();
  return a;
}

inline Eigen::MatrixXd cycle_matrix(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) a(i, (i + 1) % m) = a((i + 1) % m, i) = 1.0;
  return a;
}

inline double uniform(strucimp::Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

/// Connected undirected graph: a random spanning path plus extra edges with
/// probability p, weights uniform in [lo, hi].
inline Eigen::MatrixXd random_connected(std::size_t n, strucimp::Rng& rng, double p = 0.4, double lo = 0.5,
                                        double hi = 2.0) {
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(std::span<std::size_t>(order));
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const auto i = static_cast<Eigen::Index>(order[k]);
    const auto j = static_cast<Eigen::Index>(order[k + 1]);
    a(i, j) = a(j, i) = uniform(rng, lo, hi);
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      if (a(i, j) == 0.0 && rng.bernoulli(p)) a(i, j) = a(j, i) = uniform(rng, lo, hi);
    }
  }
  return a;
}

/// Largest eigenvalue by Eigen's solver, used as an independent reference.
inline double lambda_max(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

/// Textbook modularity (1/2m) Σ_ij (A_ij − k_i k_j / 2m) δ(c_i, c_j).
inline double modularity_reference(const Eigen::MatrixXd& a, const std::vector<int>& c) {
  const double two_m = a.sum();
  const Eigen::VectorXd k = a.rowwise().sum();
  double q = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (c[static_cast<std::size_t>(i)] == c[static_cast<std::size_t>(j)]) q += a(i, j) - k(i) * k(j) / two_m;
    }
  }
  return q / two_m;
}

/// Reference eigenvectors, to 3 decimals, of the three positive eigenvalues of the
/// (4, 2, 5) barbell, one row per node.
inline Eigen::MatrixXd barbell_reference_eigenvectors() {
  Eigen::MatrixXd r(11, 3);
  r << 0.006, -0.478, -0.159,
       0.006, -0.478, -0.159,
       0.006, -0.478, -0.159,
       0.013, -0.524, 0.121,
       0.033, -0.189, 0.629,
       0.122, -0.060, 0.658,
       0.463, 0.002, 0.187,
       0.439, 0.016, -0.106,
       0.439, 0.016, -0.106,
       0.439, 0.016, -0.106,
       0.439, 0.016, -0.106;
  return r;
}

/// Largest entrywise gap between `got` and `ref` after flipping each column of
/// `got` to agree in sign with `ref`.
inline double aligned_max_abs_diff(const Eigen::MatrixXd& got, const Eigen::MatrixXd& ref) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < ref.cols(); ++k) {
    const double sign = got.col(k).dot(ref.col(k)) < 0.0 ? -1.0 : 1.0;
    worst = std::max(worst, (sign * got.col(k) - ref.col(k)).cwiseAbs().maxCoeff());
  }
  return worst;
}

inline double pmf(std::size_t k, std::size_t n, double p) {
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  const double nn = static_cast<double>(n), kk = static_cast<double>(k);
  return std::exp(std::lgamma(nn + 1) - std::lgamma(kk + 1) - std::lgamma(nn - kk + 1) + kk * std::log(p) +
                  (nn - kk) * std::log1p(-p));
}

inline double cdf_sum(std::size_t k, std::size_t n, double p) {
  double s = 0.0;
  for (std::size_t j = 0; j <= k; ++j) s += pmf(j, n, p);
  return std::min(1.0, s);
}

/// Root of a monotone function on [0, 1] by plain bisection.
template <typename F>
inline double bisect(F f, double target, bool increasing) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) < target) == increasing) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline strucimp::Interval clopper_pearson_oracle(std::size_t k, std::size_t n, double alpha) {
  strucimp::Interval out{0.0, 1.0};
  // P(X >= k | p) grows with p
  if (k > 0) out.lo = bisect([&](double p) { return 1.0 - cdf_sum(k - 1, n, p); }, alpha / 2, true);
  // P(X <= k | p) shrinks with p
  if (k < n) out.hi = bisect([&](double p) { return cdf_sum(k, n, p); }, alpha / 2, false);
  return out;
}

}  // namespace testsupport

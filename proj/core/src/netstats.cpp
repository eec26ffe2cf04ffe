#include "strucimp/netstats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "strucimp/error.hpp"
#include "strucimp/spectral.hpp"

namespace strucimp {

double modularity(const Snapshot& s, const Partition& p) {
  if (p.size() != s.num_nodes()) {
    throw ArgumentError("partition covers " + std::to_string(p.size()) + " nodes, snapshot has " +
                        std::to_string(s.num_nodes()));
  }
  const std::size_t k = p.num_communities();
  double m = 0.0;
  for (const auto& e : s.edges()) m += e.weight;
  if (!(m > 0.0)) throw DegenerateError("modularity is undefined for a graph without edges");

  std::vector<double> internal(k, 0.0);
  std::vector<double> out_tot(k, 0.0);
  std::vector<double> in_tot(k, 0.0);
  for (const auto& e : s.edges()) {
    const auto cs = static_cast<std::size_t>(p[e.src]);
    const auto cd = static_cast<std::size_t>(p[e.dst]);
    if (cs == cd) internal[cs] += e.weight;
    out_tot[cs] += e.weight;
    in_tot[cd] += e.weight;
  }
  double q = 0.0;
  if (s.directed()) {
    for (std::size_t c = 0; c < k; ++c) q += internal[c] / m - out_tot[c] * in_tot[c] / (m * m);
  } else {
    for (std::size_t c = 0; c < k; ++c) {
      const double degree = (out_tot[c] + in_tot[c]) / (2.0 * m);
      q += internal[c] / m - degree * degree;
    }
  }
  return q;
}

Partition detect_communities(const Snapshot& s, std::uint64_t /*seed*/) {
  const std::size_t n = s.num_nodes();
  std::vector<int> label(n);
  std::iota(label.begin(), label.end(), 0);
  double two_m = 0.0;
  for (const auto& e : s.edges()) two_m += 2.0 * e.weight;
  if (n == 0 || !(two_m > 0.0)) return Partition(std::move(label));

  // e(i,j): fraction of edge ends joining communities i and j (both directions);
  // a(i): fraction of edge ends in community i.
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& edge : s.edges()) {
    const auto i = static_cast<Eigen::Index>(edge.src);
    const auto j = static_cast<Eigen::Index>(edge.dst);
    e(i, j) += edge.weight / two_m;
    e(j, i) += edge.weight / two_m;
  }
  Eigen::VectorXd a = e.rowwise().sum();
  std::vector<char> alive(n, 1);

  while (true) {
    double best = 0.0;
    Eigen::Index bi = -1;
    Eigen::Index bj = -1;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
      if (!alive[static_cast<std::size_t>(i)]) continue;
      for (Eigen::Index j = i + 1; j < static_cast<Eigen::Index>(n); ++j) {
        if (!alive[static_cast<std::size_t>(j)] || e(i, j) == 0.0) continue;
        const double gain = 2.0 * (e(i, j) - a(i) * a(j));
        if (gain > best + 1e-14) {
          best = gain;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0) break;
    // merge bj into bi
    e.row(bi) += e.row(bj);
    e.col(bi) += e.col(bj);
    e.row(bj).setZero();
    e.col(bj).setZero();
    a(bi) += a(bj);
    a(bj) = 0.0;
    alive[static_cast<std::size_t>(bj)] = 0;
    for (auto& l : label) {
      if (l == bj) l = static_cast<int>(bi);
    }
  }
  return Partition(std::move(label));
}

std::vector<double> eigenvector_centrality(const Snapshot& s) {
  const std::size_t n = s.num_nodes();
  if (n == 0) return {};
  Eigen::MatrixXd a = adjacency(s).dense();
  if (s.directed()) a = a + a.transpose();
  const Spectrum spec = eig_sym(a);
  Eigen::VectorXd x = spec.eigenvectors.col(0).cwiseAbs();
  x /= x.norm();
  return {x.data(), x.data() + x.size()};
}

std::vector<double> pagerank(const Snapshot& s, const PageRankOptions& options) {
  if (!(options.damping > 0.0 && options.damping < 1.0)) {
    throw ArgumentError("pagerank damping must lie in (0, 1)");
  }
  const std::size_t n = s.num_nodes();
  if (n == 0) return {};
  struct Arc {
    NodeIndex to;
    double w;
  };
  std::vector<std::vector<Arc>> out(n);
  std::vector<double> out_w(n, 0.0);
  for (const auto& e : s.edges()) {
    out[e.src].push_back({e.dst, e.weight});
    out_w[e.src] += e.weight;
    if (!s.directed()) {
      out[e.dst].push_back({e.src, e.weight});
      out_w[e.dst] += e.weight;
    }
  }

  const double nn = static_cast<double>(n);
  std::vector<double> pr(n, 1.0 / nn);
  std::vector<double> next(n);
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    double dangling = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (out_w[i] == 0.0) dangling += pr[i];
    }
    const double base = (1.0 - options.damping) / nn + options.damping * dangling / nn;
    std::fill(next.begin(), next.end(), base);
    for (std::size_t i = 0; i < n; ++i) {
      if (out_w[i] == 0.0) continue;
      const double share = options.damping * pr[i] / out_w[i];
      for (const auto& arc : out[i]) next[arc.to] += share * arc.w;
    }
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= total;
      delta += std::abs(next[i] - pr[i]);
    }
    pr.swap(next);
    if (delta <= options.tol) return pr;
  }
  throw NumericalError("pagerank did not converge in " + std::to_string(options.max_iterations) +
                       " iterations");
}

double student_t_two_sided_p(double t, double dof) {
  if (!(dof > 0.0)) throw StatisticsError("t distribution needs dof > 0");
  if (!std::isfinite(t)) return 0.0;
  const boost::math::students_t dist(dof);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;  // unbiased
};

Moments moments(std::span<const double> v) {
  Moments m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  for (double x : v) m.var += (x - m.mean) * (x - m.mean);
  m.var /= static_cast<double>(v.size() - 1);
  return m;
}

}  // namespace

TTestResult mean_diff_ttest(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw StatisticsError("t-test needs at least 2 values per group");
  const Moments ma = moments(a);
  const Moments mb = moments(b);
  if (!(ma.var > 0.0) || !(mb.var > 0.0)) throw StatisticsError("t-test group has zero variance");
  const double va = ma.var / static_cast<double>(a.size());
  const double vb = mb.var / static_cast<double>(b.size());
  TTestResult r;
  r.t_stat = (ma.mean - mb.mean) / std::sqrt(va + vb);
  r.dof = (va + vb) * (va + vb) /
          (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
  r.p_value = student_t_two_sided_p(r.t_stat, r.dof);
  return r;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw StatisticsError("pearson: length mismatch");
  if (x.size() < 2) throw StatisticsError("pearson: needs at least 2 values");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw StatisticsError("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace strucimp

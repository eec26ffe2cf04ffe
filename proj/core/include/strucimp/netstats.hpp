#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "strucimp/graph.hpp"

namespace strucimp {

/// Weighted Newman modularity. Directed snapshots use the directed form
/// Q = (1/m) Σ_ij (A_ij − S_i^out S_j^in / m) δ(c_i, c_j).
/// Throws DegenerateError for a graph without edges.
double modularity(const Snapshot& s, const Partition& p);

/// Greedy agglomerative modularity maximisation (Clauset–Newman–Moore style).
///
/// Starts from singletons and repeatedly merges the pair of communities with the
/// largest modularity gain until no merge has a positive gain. Equal gains go to
/// the pair with the lowest community ids, so the result is fully deterministic;
/// `seed` is accepted for interface symmetry with the stochastic routines and
/// does not influence the outcome. Directed snapshots are symmetrised first.
Partition detect_communities(const Snapshot& s, std::uint64_t seed = 0);

/// |leading eigenvector| of A with unit 2-norm. Directed snapshots use A + Aᵀ.
std::vector<double> eigenvector_centrality(const Snapshot& s);

struct PageRankOptions {
  double damping = 0.85;
  double tol = 1e-10;
  std::size_t max_iterations = 100000;
};

/// Weighted PageRank by power iteration. Undirected edges are walked both ways;
/// nodes without out-weight spread their mass uniformly. Sums to 1.
std::vector<double> pagerank(const Snapshot& s, const PageRankOptions& options = {});

struct TTestResult {
  double t_stat = 0.0;
  double p_value = 1.0;
  double dof = 0.0;
};

/// Welch's two-sided t-test for a difference in means.
/// Each group needs >= 2 values and non-zero variance (StatisticsError otherwise).
TTestResult mean_diff_ttest(std::span<const double> a, std::span<const double> b);

/// Two-sided p-value of Student's t with `dof` degrees of freedom.
double student_t_two_sided_p(double t, double dof);

/// Pearson product-moment correlation. Throws StatisticsError for unequal
/// lengths, fewer than 2 values or zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace strucimp

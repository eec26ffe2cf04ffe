#include "strucimp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "strucimp/error.hpp"
#include "strucimp/rng.hpp"

namespace strucimp {
namespace {

constexpr int kMaxSweeps = 100;

// Rotates rows/columns p and q of the symmetric matrix `a` so that a(p,q) = 0,
// accumulating the rotation into `v`.
void jacobi_rotate(Eigen::MatrixXd& a, Eigen::MatrixXd& v, Eigen::Index p, Eigen::Index q) {
  const double apq = a(p, q);
  const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const Eigen::Index n = a.rows();

  for (Eigen::Index k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

double off_diagonal_sq(const Eigen::MatrixXd& a) {
  double off = 0.0;
  for (Eigen::Index q = 1; q < a.cols(); ++q) {
    for (Eigen::Index p = 0; p < q; ++p) off += a(p, q) * a(p, q);
  }
  return off;
}

void fix_signs(Eigen::MatrixXd& vecs) {
  for (Eigen::Index k = 0; k < vecs.cols(); ++k) {
    auto col = vecs.col(k);
    const double biggest = col.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) >= biggest - 1e-12) {
        if (col(i) < 0.0) col = -col;
        break;
      }
    }
  }
}

double squared_distance(const Eigen::MatrixXd& pts, Eigen::Index row, const Eigen::MatrixXd& centers,
                        Eigen::Index c) {
  return (pts.row(row) - centers.row(c)).squaredNorm();
}

std::size_t count_distinct_rows(const Eigen::MatrixXd& pts) {
  std::size_t distinct = 0;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    bool seen = false;
    for (Eigen::Index j = 0; j < i && !seen; ++j) {
      seen = (pts.row(i) - pts.row(j)).cwiseAbs().maxCoeff() <= 1e-12;
    }
    if (!seen) ++distinct;
  }
  return distinct;
}

struct LloydRun {
  std::vector<int> assignment;
  double inertia = 0.0;
  std::size_t iterations = 0;
};

LloydRun lloyd(const Eigen::MatrixXd& pts, std::size_t k, std::size_t max_iter, Rng& rng) {
  const Eigen::Index n = pts.rows();
  const auto kk = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd centers(kk, pts.cols());

  // k-means++ seeding
  centers.row(0) = pts.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n))));
  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Eigen::Index c = 1; c < kk; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < c; ++j) best = std::min(best, squared_distance(pts, i, centers, j));
      d2[static_cast<std::size_t>(i)] = best;
      total += best;
    }
    Eigen::Index pick = n - 1;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      for (Eigen::Index i = 0; i < n; ++i) {
        target -= d2[static_cast<std::size_t>(i)];
        if (target < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    centers.row(c) = pts.row(pick);
  }

  LloydRun run;
  run.assignment.assign(static_cast<std::size_t>(n), -1);
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best_c = 0;
      double best = squared_distance(pts, i, centers, 0);
      for (Eigen::Index c = 1; c < kk; ++c) {
        const double d = squared_distance(pts, i, centers, c);
        if (d < best) {
          best = d;
          best_c = static_cast<int>(c);
        }
      }
      if (run.assignment[static_cast<std::size_t>(i)] != best_c) {
        run.assignment[static_cast<std::size_t>(i)] = best_c;
        changed = true;
      }
    }
    run.iterations = iter + 1;
    if (!changed) break;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(kk, pts.cols());
    std::vector<std::size_t> counts(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto c = run.assignment[static_cast<std::size_t>(i)];
      sums.row(c) += pts.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (Eigen::Index c = 0; c < kk; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
        continue;
      }
      // Empty cluster: move its centre to the point farthest from its own centre.
      Eigen::Index far = 0;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d = squared_distance(pts, i, centers, run.assignment[static_cast<std::size_t>(i)]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      centers.row(c) = pts.row(far);
    }
  }

  run.inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    run.inertia += squared_distance(pts, i, centers, run.assignment[static_cast<std::size_t>(i)]);
  }
  return run;
}

}  // namespace

std::size_t Spectrum::num_positive(double tol) const {
  return static_cast<std::size_t>((eigenvalues.array() > tol).count());
}

Spectrum eig_sym(const Eigen::MatrixXd& input) {
  if (input.rows() != input.cols()) throw ContractError("eig_sym: matrix must be square");
  const Eigen::Index n = input.rows();
  if (n == 0) return Spectrum{Eigen::VectorXd(0), Eigen::MatrixXd(0, 0)};
  const double scale = std::max(1.0, input.cwiseAbs().maxCoeff());
  if ((input - input.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ContractError("eig_sym: matrix is not symmetric");
  }

  Eigen::MatrixXd a = 0.5 * (input + input.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double frob_sq = a.squaredNorm();

  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    const double off = off_diagonal_sq(a);
    if (off <= 1e-30 * frob_sq || off == 0.0) break;
    const double negligible = 1e-18 * std::sqrt(frob_sq);
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) <= negligible) {
          a(p, q) = a(q, p) = 0.0;
        } else {
          jacobi_rotate(a, v, p, q);
        }
      }
    }
  }
  if (sweep == kMaxSweeps) {
    throw NumericalError("eig_sym: Jacobi iteration did not converge in " +
                         std::to_string(kMaxSweeps) + " sweeps");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x) > a(y, y); });

  Spectrum spec;
  spec.eigenvalues.resize(n);
  spec.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    spec.eigenvalues(k) = a(src, src);
    spec.eigenvectors.col(k) = v.col(src).normalized();
  }
  fix_signs(spec.eigenvectors);
  return spec;
}

Spectrum eig_sym(const WeightedMatrix& a) { return eig_sym(a.dense()); }

SingularTriplet leading_singular(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw ContractError("leading_singular: matrix must be square");
  SingularTriplet out;
  const Eigen::Index n = a.rows();
  if (n == 0) return out;
  if (a.cwiseAbs().maxCoeff() == 0.0) {
    out.xM = Eigen::VectorXd::Unit(n, 0);
    return out;
  }
  const Eigen::MatrixXd m = a * a.transpose();
  const Spectrum spec = eig_sym(Eigen::MatrixXd(0.5 * (m + m.transpose())));
  out.s = std::sqrt(std::max(0.0, spec.eigenvalues(0)));
  out.xM = spec.eigenvectors.col(0);
  return out;
}

SingularTriplet leading_singular(const WeightedMatrix& a) { return leading_singular(a.dense()); }

std::size_t select_eigencomponent(const Spectrum& spec, std::size_t i) {
  if (i >= spec.n()) {
    throw LookupError("node index " + std::to_string(i) + " out of range for spectrum of size " +
                      std::to_string(spec.n()));
  }
  const double tol = 1e-10 * std::max(1.0, spec.eigenvalues.cwiseAbs().maxCoeff());
  std::size_t candidates = spec.num_positive(tol);
  if (candidates == 0) candidates = spec.n();
  std::size_t best = 0;
  double best_abs = -1.0;
  for (std::size_t k = 0; k < candidates; ++k) {
    const double mag = std::abs(spec.component(k, i));
    if (mag > best_abs) {
      best_abs = mag;
      best = k;
    }
  }
  return best + 1;
}

KMeansResult kmeans(const Eigen::MatrixXd& points, const KMeansOptions& options) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (options.k == 0 || options.k > n) {
    throw ArgumentError("kmeans: k must be in [1, n]");
  }
  if (points.cols() == 0) throw ArgumentError("kmeans: no coordinates selected");
  if (count_distinct_rows(points) < options.k) {
    throw DegenerateError("kmeans: k=" + std::to_string(options.k) +
                          " exceeds the number of distinct points");
  }
  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
  LloydRun best;
  bool have = false;
  for (std::size_t r = 0; r < restarts; ++r) {
    Rng rng = Rng::derive(options.seed, r);
    LloydRun run = lloyd(points, options.k, options.max_iterations, rng);
    if (!have || run.inertia < best.inertia) {
      best = std::move(run);
      have = true;
    }
  }
  return {Partition(best.assignment), best.inertia, best.iterations};
}

KMeansResult kmeans_eigvecs(const Spectrum& spec, const KMeansOptions& options) {
  Eigen::Index cols = static_cast<Eigen::Index>(spec.n());
  if (options.which == EigenSelection::PositiveOnly) {
    const double tol = 1e-10 * std::max(1.0, spec.eigenvalues.cwiseAbs().maxCoeff());
    cols = static_cast<Eigen::Index>(spec.num_positive(tol));
  }
  if (cols == 0) throw DegenerateError("kmeans_eigvecs: no eigenvectors selected");
  return kmeans(spec.eigenvectors.leftCols(cols), options);
}

}  // namespace strucimp

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "strucimp/graph.hpp"

namespace strucimp {

/// Full eigendecomposition of a symmetric matrix.
///
/// Eigenvalues are sorted descending and column k of `eigenvectors` is the
/// unit eigenvector for eigenvalues[k]. Each eigenvector's largest-magnitude
/// component is positive (ties go to the lowest index).
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  std::size_t n() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
  double eigenvalue(std::size_t k) const { return eigenvalues(static_cast<Eigen::Index>(k)); }
  /// Component of eigenvector k (0-based) at node i.
  double component(std::size_t k, std::size_t i) const {
    return eigenvectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
  }
  /// Number of eigenvalues strictly above `tol`.
  std::size_t num_positive(double tol = 1e-10) const;
};

/// Leading singular value of A and the unit leading eigenvector of M = A Aᵀ.
struct SingularTriplet {
  double s = 0.0;
  Eigen::VectorXd xM;
};

/// Cyclic Jacobi eigensolver. Throws ContractError for non-symmetric input.
Spectrum eig_sym(const Eigen::MatrixXd& a);
Spectrum eig_sym(const WeightedMatrix& a);

/// For the all-zero matrix returns s = 0 and xM = e_0.
SingularTriplet leading_singular(const Eigen::MatrixXd& a);
SingularTriplet leading_singular(const WeightedMatrix& a);

/// 1-based rank of the eigenvector with the largest |component| at node i,
/// searched among the eigenvectors with positive eigenvalues (all of them when
/// none is positive). Exact ties go to the lower rank (larger eigenvalue).
std::size_t select_eigencomponent(const Spectrum& spec, std::size_t i);

enum class EigenSelection { PositiveOnly, All };

struct KMeansOptions {
  std::size_t k = 2;
  EigenSelection which = EigenSelection::PositiveOnly;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 100;
  std::size_t restarts = 8;
};

struct KMeansResult {
  Partition partition;
  double inertia = 0.0;
  std::size_t iterations = 0;
};

/// Lloyd's k-means on the rows of the selected eigenvector columns, k-means++
/// seeding, best inertia over the restarts.
KMeansResult kmeans_eigvecs(const Spectrum& spec, const KMeansOptions& options);

/// Lloyd's k-means on arbitrary points (rows of `points`).
KMeansResult kmeans(const Eigen::MatrixXd& points, const KMeansOptions& options);

}  // namespace strucimp

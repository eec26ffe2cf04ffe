#include <gtest/gtest.h>

#include <cmath>

#include "strucimp/error.hpp"
#include "strucimp/generators.hpp"
#include "strucimp/spectral.hpp"
#include "support.hpp"

using namespace strucimp;

namespace {

Eigen::MatrixXd random_symmetric(Eigen::Index n, Rng& rng) {
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) a(i, j) = a(j, i) = rng.normal();
  return a;
}

}  // namespace

TEST(EigSym, Dyad) {
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, 1, 0;
  const Spectrum s = eig_sym(a);
  EXPECT_NEAR(s.eigenvalue(0), 1.0, 1e-14);
  EXPECT_NEAR(s.eigenvalue(1), -1.0, 1e-14);
  EXPECT_NEAR(s.component(0, 0), 1 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(s.component(0, 1), 1 / std::sqrt(2.0), 1e-14);
}

TEST(EigSym, Triangle) {
  const Spectrum s = eig_sym(testsupport::clique_matrix(3));
  EXPECT_NEAR(s.eigenvalue(0), 2.0, 1e-12);
  EXPECT_NEAR(s.eigenvalue(1), -1.0, 1e-12);
  EXPECT_NEAR(s.eigenvalue(2), -1.0, 1e-12);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(s.component(0, i), 1 / std::sqrt(3.0), 1e-12);
}

TEST(EigSym, MatchesEigenOnRandomMatrices) {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(25));
    const Eigen::MatrixXd a = random_symmetric(n, rng);
    const Spectrum s = eig_sym(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd expected = ref.eigenvalues().reverse();
    EXPECT_LE((s.eigenvalues - expected).cwiseAbs().maxCoeff(), 1e-9 * std::max(1.0, a.norm()));

    const Eigen::MatrixXd& x = s.eigenvectors;
    EXPECT_LE((x.transpose() * x - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((a * x - x * s.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff(), 1e-9 * std::max(1.0, a.norm()));
    EXPECT_NEAR(s.eigenvalues.sum(), a.trace(), 1e-9 * std::max(1.0, a.norm()));
    for (Eigen::Index k = 0; k + 1 < n; ++k) EXPECT_GE(s.eigenvalues(k), s.eigenvalues(k + 1));
  }
}

TEST(EigSym, SignConvention) {
  Rng rng(8);
  const Spectrum s = eig_sym(random_symmetric(12, rng));
  for (Eigen::Index k = 0; k < 12; ++k) {
    Eigen::Index arg = 0;
    s.eigenvectors.col(k).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(s.eigenvectors(arg, k), 0.0);
  }
}

TEST(EigSym, RejectsNonSymmetric) {
  Eigen::MatrixXd a(2, 2);
  a << 0, 1, 2, 0;
  EXPECT_THROW(eig_sym(a), ContractError);
}

TEST(EigSym, EmptyAndSingleton) {
  EXPECT_EQ(eig_sym(Eigen::MatrixXd(0, 0)).n(), 0u);
  const Spectrum s = eig_sym(Eigen::MatrixXd::Zero(1, 1));
  EXPECT_EQ(s.eigenvalue(0), 0.0);
  EXPECT_EQ(s.component(0, 0), 1.0);
}

TEST(EigSym, BarbellReferenceEigenvectors) {
  const Spectrum s = eig_sym(adjacency(gen_barbell(4, 2, 5)));
  ASSERT_EQ(s.num_positive(), 3u);
  const Eigen::MatrixXd got = s.eigenvectors.leftCols(3);
  EXPECT_LE(testsupport::aligned_max_abs_diff(got, testsupport::barbell_reference_eigenvectors()), 1e-3);
}

TEST(LeadingSingular, DirectedDyad) {
  Eigen::MatrixXd a(2, 2);
  a << 0, 2, 0, 0;
  const SingularTriplet t = leading_singular(a);
  EXPECT_NEAR(t.s, 2.0, 1e-14);
  EXPECT_NEAR(t.xM(0), 1.0, 1e-14);
  EXPECT_NEAR(t.xM(1), 0.0, 1e-14);
}

TEST(LeadingSingular, ZeroMatrix) {
  const SingularTriplet t = leading_singular(Eigen::MatrixXd::Zero(3, 3));
  EXPECT_EQ(t.s, 0.0);
  EXPECT_EQ(t.xM, Eigen::Vector3d(1, 0, 0));
}

TEST(LeadingSingular, MatchesEigenSvd) {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(8, 8);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        if (i != j && rng.bernoulli(0.5)) a(i, j) = rng.uniform();
    const SingularTriplet t = leading_singular(a);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU);
    EXPECT_NEAR(t.s, svd.singularValues()(0), 1e-10);
    EXPECT_NEAR(std::abs(t.xM.dot(svd.matrixU().col(0))), 1.0, 1e-8);
  }
}

TEST(SelectEigencomponent, Barbell) {
  const Spectrum s = eig_sym(adjacency(gen_barbell(4, 2, 5)));
  const std::vector<std::size_t> expected{2, 2, 2, 2, 3, 3, 1, 1, 1, 1, 1};
  for (std::size_t i = 0; i < 11; ++i) EXPECT_EQ(select_eigencomponent(s, i), expected[i]) << "node " << i;
  EXPECT_THROW(select_eigencomponent(s, 11), LookupError);
}

TEST(SelectEigencomponent, CliquesGiveRankOne) {
  for (std::size_t n = 2; n <= 12; ++n) {
    const Spectrum s = eig_sym(testsupport::clique_matrix(n));
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(select_eigencomponent(s, i), 1u) << n;
  }
}

TEST(SelectEigencomponent, AgreesWithBruteForceArgmax) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd a = testsupport::random_connected(10, rng);
    const Spectrum s = eig_sym(a);
    const std::size_t pos = s.num_positive(1e-10 * std::max(1.0, s.eigenvalues.cwiseAbs().maxCoeff()));
    for (std::size_t i = 0; i < 10; ++i) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < pos; ++k)
        if (std::abs(s.component(k, i)) > std::abs(s.component(best, i))) best = k;
      EXPECT_EQ(select_eigencomponent(s, i), best + 1);
    }
  }
}

TEST(KMeans, BarbellThreeClusters) {
  const Spectrum s = eig_sym(adjacency(gen_barbell(4, 2, 5)));
  KMeansOptions o;
  o.k = 3;
  o.seed = 1;
  const KMeansResult r = kmeans_eigvecs(s, o);
  EXPECT_EQ(r.partition, Partition({0, 0, 0, 0, 1, 1, 2, 2, 2, 2, 2}));
}

TEST(KMeans, SeparatedBlobs) {
  Eigen::MatrixXd pts(6, 2);
  pts << 0, 0, 0.1, 0, 0, 0.1, 5, 5, 5.1, 5, 5, 5.1;
  KMeansOptions o;
  o.k = 2;
  const KMeansResult r = kmeans(pts, o);
  EXPECT_EQ(r.partition, Partition({0, 0, 0, 1, 1, 1}));
  // each blob: squared distances to its centroid sum to 12/900
  EXPECT_NEAR(r.inertia, 2 * 12.0 / 900.0, 1e-12);
}

TEST(KMeans, InvalidK) {
  Eigen::MatrixXd pts(3, 1);
  pts << 0, 0, 1;
  KMeansOptions o;
  o.k = 0;
  EXPECT_THROW(kmeans(pts, o), ArgumentError);
  o.k = 3;
  EXPECT_THROW(kmeans(pts, o), DegenerateError);
}

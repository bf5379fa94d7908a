#include "cpwl/linalg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace cpwl;

namespace {

Eigen::MatrixXd random_symmetric(Eigen::Index n, std::mt19937_64& rng)
{
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      a(i, j) = a(j, i) = g(rng);
  return a;
}

// Oracle: power iteration on B = A + shift I, whose eigenvalues are all
// positive, so the dominant one is the largest. Deflating B by mu v v^T sends
// that eigenvalue to 0, below every remaining one.
std::vector<double> power_iteration_spectrum(const Eigen::MatrixXd& a)
{
  const Eigen::Index n = a.rows();
  const double shift = a.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
  Eigen::MatrixXd b = a + shift * Eigen::MatrixXd::Identity(n, n);
  std::vector<double> out;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
      v(i) = g(rng);
    v.normalize();
    double mu = 0.0;
    for (int it = 0; it < 5'000'000; ++it) {
      Eigen::VectorXd w = b * v;
      w.normalize();
      v = w;
      mu = v.dot(b * v);
      if ((b * v - mu * v).norm() < 1e-13 * shift)
        break;
    }
    out.push_back(mu - shift);
    b -= mu * v * v.transpose();
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

TEST(Jacobi, ChainGramSpectrum)
{
  Eigen::MatrixXd m(3, 3);
  m << 2, 1, 0, 1, 4, 1, 0, 1, 2;
  const auto eig = jacobi_eigen(m);
  EXPECT_NEAR(eig.values(0), 3.0 - std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(eig.values(1), 2.0, 1e-12);
  EXPECT_NEAR(eig.values(2), 3.0 + std::sqrt(3.0), 1e-12);
}

TEST(Jacobi, ReconstructsRandomMatrices)
{
  std::mt19937_64 rng(5);
  for (Eigen::Index n : {1, 2, 3, 5, 8, 20, 40}) {
    const auto a = random_symmetric(n, rng);
    const auto eig = jacobi_eigen(a);
    const Eigen::MatrixXd back = eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
    EXPECT_LE((back - a).norm(), 1e-10 * a.norm()) << "n = " << n;
    EXPECT_LE((eig.vectors.transpose() * eig.vectors - Eigen::MatrixXd::Identity(n, n)).norm(), 1e-10);
    for (Eigen::Index k = 1; k < n; ++k)
      EXPECT_LE(eig.values(k - 1), eig.values(k));
  }
}

TEST(Jacobi, MatchesPowerIterationOracle)
{
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = random_symmetric(5, rng);
    const auto eig = jacobi_eigen(a);
    const auto oracle = power_iteration_spectrum(a);
    for (Eigen::Index k = 0; k < 5; ++k)
      EXPECT_NEAR(eig.values(k), oracle[static_cast<std::size_t>(k)], 1e-8) << "trial " << trial;
  }
}

TEST(Jacobi, DiagonalAndIdentity)
{
  const auto eig = jacobi_eigen(Eigen::MatrixXd::Identity(4, 4));
  EXPECT_EQ(eig.sweeps, 0);
  for (Eigen::Index k = 0; k < 4; ++k)
    EXPECT_EQ(eig.values(k), 1.0);
}

TEST(Jacobi, RejectsNonSymmetric)
{
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  EXPECT_THROW(jacobi_eigen(m), NotSymmetric);
  EXPECT_THROW(jacobi_eigen(Eigen::MatrixXd::Zero(2, 3)), NotSymmetric);
}

TEST(Jacobi, ReportsNonConvergence)
{
  Eigen::MatrixXd m(2, 2);
  m << 1, 1, 1, 1;
  EXPECT_THROW(jacobi_eigen(m, {1e-12, 0}), NoConvergence);
}

TEST(ConditionNumber, TwoByTwoClosedForm)
{
  Eigen::MatrixXd m(2, 2);
  m << 3, 1, 0.5, 2;
  // sigma^2 are the roots of s^2 - tr(M^T M) s + det(M)^2.
  const double tr = m.squaredNorm();
  const double det = m.determinant();
  const double disc = std::sqrt(tr * tr - 4 * det * det);
  const double expected = std::sqrt((tr + disc) / (tr - disc));
  EXPECT_NEAR(condition_number_2(m), expected, 1e-12);
  EXPECT_NEAR(condition_number_2(Eigen::MatrixXd::Identity(3, 3)), 1.0, 1e-15);
}

TEST(ConditionNumber, SingularThrows)
{
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 2, 4;
  EXPECT_THROW(condition_number_2(m), SingularMatrix);
}

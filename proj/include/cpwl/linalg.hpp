#pragma once

#include "cpwl/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace cpwl {

struct JacobiOptions
{
  /// Stop once the off-diagonal Frobenius norm drops below tolerance * ||A||_F.
  double tolerance = 1e-12;
  int max_sweeps = 100;
};

struct SymmetricEigen
{
  Eigen::VectorXd values;  ///< ascending
  Eigen::MatrixXd vectors; ///< column k pairs with values(k)
  int sweeps = 0;
};

namespace detail {

inline double off_diagonal_norm(const Eigen::MatrixXd& a)
{
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j)
        s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

} // namespace detail

inline bool is_symmetric(const Eigen::MatrixXd& m, double rel_tol = 1e-12)
{
  if (m.rows() != m.cols())
    return false;
  const double scale = std::max(m.norm(), 1.0);
  return (m - m.transpose()).norm() <= rel_tol * scale;
}

/// Cyclic Jacobi eigensolver for real symmetric matrices.
///
/// Each sweep visits every (p, q) pair above the diagonal in row order and
/// applies the rotation that annihilates a(p, q). Accumulated rotations give
/// the eigenvectors.
inline SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& m, const JacobiOptions& opts = {})
{
  if (!is_symmetric(m))
    throw NotSymmetric("jacobi_eigen: input matrix is not symmetric");

  const Eigen::Index n = m.rows();
  Eigen::MatrixXd a = 0.5 * (m + m.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double target = opts.tolerance * a.norm();

  int sweep = 0;
  while (detail::off_diagonal_norm(a) > target) {
    if (sweep == opts.max_sweeps)
      throw NoConvergence("jacobi_eigen: no convergence after " + std::to_string(sweep) +
                          " sweeps");
    ++sweep;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0)
          continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // A <- J^T A J with J the (p, q) rotation.
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
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  out.sweeps = sweep;
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src);
    out.vectors.col(k) = v.col(src);
  }
  return out;
}

/// 2-norm condition number sigma_max / sigma_min, from the Jacobi spectrum of M^T M.
inline double condition_number_2(const Eigen::MatrixXd& m)
{
  if (m.rows() != m.cols() || m.rows() == 0)
    throw InvalidArgument("condition_number_2: matrix must be square and nonempty");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible())
    throw SingularMatrix("condition_number_2: matrix is singular");
  const auto eig = jacobi_eigen(m.transpose() * m);
  const double lo = eig.values(0);
  const double hi = eig.values(eig.values.size() - 1);
  if (lo <= 0.0)
    throw SingularMatrix("condition_number_2: matrix is numerically singular");
  return std::sqrt(hi / lo);
}

} // namespace cpwl

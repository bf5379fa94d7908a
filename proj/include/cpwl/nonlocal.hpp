#pragma once

#include "cpwl/errors.hpp"
#include "cpwl/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace cpwl {

/// 1-D CPWL function in the ReLU parametrization
///   T(x) = theta_1 + theta_2 (x - v_1) + sum_{k=2}^{K-1} theta_{k+1} (x - v_k)_+
/// over strictly increasing knots v_1 < ... < v_K.
struct NonlocalModel
{
  std::vector<double> knots;
  std::vector<double> theta;

  static NonlocalModel make(std::vector<double> knots, std::vector<double> theta)
  {
    if (knots.size() < 2)
      throw InvalidArgument("NonlocalModel: need at least 2 knots");
    if (theta.size() != knots.size())
      throw InvalidArgument("NonlocalModel: need one parameter per knot");
    for (std::size_t k = 1; k < knots.size(); ++k)
      if (!(knots[k] > knots[k - 1]))
        throw InvalidArgument("NonlocalModel: knots must be strictly increasing (index " +
                              std::to_string(k) + ")");
    return {std::move(knots), std::move(theta)};
  }
};

inline double eval_nonlocal(const NonlocalModel& m, double x)
{
  const auto& v = m.knots;
  const auto& th = m.theta;
  double y = th[0] + th[1] * (x - v[0]);
  for (std::size_t k = 1; k + 1 < v.size(); ++k)
    y += th[k + 1] * std::max(x - v[k], 0.0);
  return y;
}

/// Knots v_1 + h * (0, 1, ..., K-1).
inline std::vector<double> uniform_knots(std::size_t count, double h, double start = 0.0)
{
  std::vector<double> v(count);
  for (std::size_t k = 0; k < count; ++k)
    v[k] = start + h * static_cast<double>(k);
  return v;
}

/// Sampling matrix of the model at its own knots, A(p, .) such that
/// y_p = T(v_p) = A(p, .) theta. Lower triangular for any increasing knots.
inline Eigen::MatrixXd nonlocal_system_matrix(std::span<const double> knots)
{
  const auto n = static_cast<Eigen::Index>(knots.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    const double x = knots[static_cast<std::size_t>(p)];
    a(p, 0) = 1.0;
    if (n > 1)
      a(p, 1) = x - knots[0];
    for (Eigen::Index k = 1; k + 1 < n; ++k)
      a(p, k + 1) = std::max(x - knots[static_cast<std::size_t>(k)], 0.0);
  }
  return a;
}

/// Closed-form interpolation matrix for uniform step h: M(p, 1) = 1 and
/// M(p, k+1) = h (p - k) for k < p, so that y = M theta.
inline Eigen::MatrixXd interpolation_matrix(std::span<const double> knots, double h)
{
  if (knots.size() < 2)
    throw InvalidArgument("interpolation_matrix: need at least 2 knots");
  if (!(h > 0.0))
    throw InvalidArgument("interpolation_matrix: step must be positive");
  for (std::size_t k = 1; k < knots.size(); ++k)
    if (std::abs((knots[k] - knots[k - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw InvalidArgument("interpolation_matrix: knots are not uniformly spaced with step h");

  const auto n = static_cast<Eigen::Index>(knots.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    m(p, 0) = 1.0;
    for (Eigen::Index k = 1; k <= p; ++k)
      m(p, k) = h * static_cast<double>(p - k + 1);
  }
  return m;
}

/// Solves the lower-triangular system M theta = y by forward substitution.
inline Eigen::VectorXd solve_lower_triangular(const Eigen::MatrixXd& m, const Eigen::VectorXd& y)
{
  const auto n = m.rows();
  if (m.cols() != n || y.size() != n)
    throw DimensionMismatch("solve_lower_triangular: size mismatch");
  Eigen::VectorXd x(n);
  for (Eigen::Index p = 0; p < n; ++p) {
    double r = y(p);
    for (Eigen::Index k = 0; k < p; ++k)
      r -= m(p, k) * x(k);
    if (m(p, p) == 0.0)
      throw SingularMatrix("solve_lower_triangular: zero pivot at row " + std::to_string(p));
    x(p) = r / m(p, p);
  }
  return x;
}

/// Parameters of the ReLU model that interpolate y at the knots. Works for
/// non-uniform knots through the direct (triangular) sampling system.
inline NonlocalModel fit_nonlocal(std::vector<double> knots, std::span<const double> y)
{
  if (y.size() != knots.size())
    throw DimensionMismatch("fit_nonlocal: need one target per knot");
  auto model = NonlocalModel::make(std::move(knots), std::vector<double>(y.size(), 0.0));
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
  const auto theta = solve_lower_triangular(nonlocal_system_matrix(model.knots), rhs);
  model.theta.assign(theta.data(), theta.data() + theta.size());
  return model;
}

/// sqrt(K (K-1) (2K-1) / 6): lower bound on cond_2 of the uniform-step interpolation matrix.
inline double nonlocal_condition_lower_bound(std::size_t count)
{
  if (count < 2)
    throw InvalidArgument("nonlocal_condition_lower_bound: need K >= 2");
  const auto k = static_cast<double>(count);
  return std::sqrt(k * (k - 1.0) * (2.0 * k - 1.0) / 6.0);
}

/// cond_2(M) = sigma_max / sigma_min.
inline double empirical_condition(const Eigen::MatrixXd& m)
{
  return condition_number_2(m);
}

/// Condition number of the local (hat-basis) interpolation map, which is the
/// identity on the knot values.
inline double local_interpolation_condition(std::size_t count)
{
  const auto n = static_cast<Eigen::Index>(count);
  return condition_number_2(Eigen::MatrixXd::Identity(n, n));
}

} // namespace cpwl

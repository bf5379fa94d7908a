#pragma once

#include "cpwl/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cpwl {

using Point = Eigen::VectorXd;

/// Relative volume below which a simplex counts as degenerate:
/// vol < kDegeneracyRelTol * (max pairwise vertex distance)^d.
inline constexpr double kDegeneracyRelTol = 1e-12;

/// Shared tolerance for inside/boundary classification. Simplices are closed,
/// so points on a face are accepted.
inline constexpr double kInsideTolerance = 1e-9;

/// Index list of d+1 vertices into a vertex table, plus the cached volume.
struct Simplex
{
  std::vector<std::size_t> vertex_ids;
  double volume = 0.0;
};

struct BarycentricCoords
{
  Eigen::VectorXd lambdas;

  bool inside(double tol = kInsideTolerance) const { return lambdas.minCoeff() >= -tol; }
  bool strictly_inside(double tol = kInsideTolerance) const { return lambdas.minCoeff() > tol; }
};

namespace detail {

inline std::size_t check_simplex_shape(std::span<const Point> vertices)
{
  if (vertices.empty())
    throw DimensionMismatch("simplex needs at least one vertex");
  const auto d = static_cast<std::size_t>(vertices.front().size());
  if (d == 0)
    throw DimensionMismatch("points must have dimension >= 1");
  for (const auto& v : vertices)
    if (static_cast<std::size_t>(v.size()) != d)
      throw DimensionMismatch("simplex vertices have mixed dimensions");
  if (vertices.size() != d + 1)
    throw DimensionMismatch("a simplex in R^" + std::to_string(d) + " needs " +
                            std::to_string(d + 1) + " vertices, got " +
                            std::to_string(vertices.size()));
  return d;
}

inline double factorial(std::size_t n)
{
  double f = 1.0;
  for (std::size_t k = 2; k <= n; ++k)
    f *= static_cast<double>(k);
  return f;
}

inline double max_pairwise_distance(std::span<const Point> vertices)
{
  double m = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
      m = std::max(m, (vertices[i] - vertices[j]).norm());
  return m;
}

inline double raw_volume(std::span<const Point> vertices, std::size_t d)
{
  Eigen::MatrixXd edges(d, d);
  for (std::size_t k = 0; k < d; ++k)
    edges.col(static_cast<Eigen::Index>(k)) = vertices[k + 1] - vertices[0];
  return std::abs(edges.partialPivLu().determinant()) / factorial(d);
}

} // namespace detail

/// True when the vertex set is affinely dependent up to the scale-aware threshold.
inline bool is_degenerate(std::span<const Point> vertices)
{
  const auto d = detail::check_simplex_shape(vertices);
  const double scale = detail::max_pairwise_distance(vertices);
  if (scale == 0.0)
    return true;
  return detail::raw_volume(vertices, d) < kDegeneracyRelTol * std::pow(scale, static_cast<double>(d));
}

/// (1/d!) |det(v_2 - v_1, ..., v_{d+1} - v_1)|, or exactly 0 for degenerate input.
inline double simplex_volume(std::span<const Point> vertices)
{
  const auto d = detail::check_simplex_shape(vertices);
  if (is_degenerate(vertices))
    return 0.0;
  return detail::raw_volume(vertices, d);
}

inline Point centroid(std::span<const Point> vertices)
{
  Point c = Point::Zero(vertices.front().size());
  for (const auto& v : vertices)
    c += v;
  return c / static_cast<double>(vertices.size());
}

/// Solves sum(lambda_k v_k) = x, sum(lambda_k) = 1 with a pivoted dense solve.
inline BarycentricCoords barycentric(std::span<const Point> vertices, const Point& x)
{
  const auto d = detail::check_simplex_shape(vertices);
  if (static_cast<std::size_t>(x.size()) != d)
    throw DimensionMismatch("query point dimension differs from simplex dimension");
  if (is_degenerate(vertices))
    throw DegenerateSimplex("barycentric coordinates of a degenerate simplex");

  const auto n = static_cast<Eigen::Index>(d + 1);
  Eigen::MatrixXd system(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    system.col(k).head(n - 1) = vertices[static_cast<std::size_t>(k)];
    system(n - 1, k) = 1.0;
  }
  Eigen::VectorXd rhs(n);
  rhs.head(n - 1) = x;
  rhs(n - 1) = 1.0;
  return {system.partialPivLu().solve(rhs)};
}

/// The unique affine function through (v_k, values_k), evaluated at x.
inline double affine_from_vertex_values(std::span<const Point> vertices,
                                        std::span<const double> values,
                                        const Point& x)
{
  if (values.size() != vertices.size())
    throw DimensionMismatch("need one value per simplex vertex");
  const auto bc = barycentric(vertices, x);
  double acc = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k)
    acc += bc.lambdas(static_cast<Eigen::Index>(k)) * values[k];
  return acc;
}

} // namespace cpwl

#pragma once

#include "cpwl/triangulation.hpp"

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace cpwl::testing {

/// 1-D chain {0, 1, 2} with unit segments.
inline Triangulation chain3()
{
  std::vector<Point> v(3, Point(1));
  v[0] << 0.0;
  v[1] << 1.0;
  v[2] << 2.0;
  return Triangulation::build(v, {{0, 1}, {1, 2}});
}

inline Triangulation chain(const std::vector<double>& knots)
{
  std::vector<Point> v;
  std::vector<std::vector<std::size_t>> s;
  for (std::size_t k = 0; k < knots.size(); ++k) {
    Point p(1);
    p << knots[k];
    v.push_back(p);
    if (k > 0)
      s.push_back({k - 1, k});
  }
  return Triangulation::build(v, s);
}

inline Point pt(std::initializer_list<double> xs)
{
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs)
    p(i++) = x;
  return p;
}

inline std::vector<Point> standard_simplex(std::size_t d)
{
  std::vector<Point> v(d + 1, Point::Zero(static_cast<Eigen::Index>(d)));
  for (std::size_t k = 0; k < d; ++k)
    v[k + 1](static_cast<Eigen::Index>(k)) = 1.0;
  return v;
}

template <class Rng>
std::vector<Point> random_simplex(std::size_t d, Rng& rng)
{
  std::normal_distribution<double> n;
  for (;;) {
    std::vector<Point> v(d + 1, Point(static_cast<Eigen::Index>(d)));
    for (auto& p : v)
      for (Eigen::Index i = 0; i < p.size(); ++i)
        p(i) = n(rng);
    if (!is_degenerate(v) && simplex_volume(v) > 0.05)
      return v;
  }
}

template <class Rng>
std::vector<Point> random_planar_points(std::size_t n, Rng& rng)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts;
  while (pts.size() < n)
    pts.push_back(pt({u(rng), u(rng)}));
  return pts;
}

template <class Rng>
Triangulation random_delaunay(std::size_t n, Rng& rng)
{
  const auto pts = random_planar_points(n, rng);
  return delaunay_2d(pts);
}

/// Kuhn triangulation of [0, n]^d with interior sites jittered by up to `amp`
/// (small enough to keep every simplex positively oriented).
template <class Rng>
Triangulation jittered_kuhn(std::size_t d, long n, double amp, Rng& rng)
{
  const auto k = kuhn_triangulation(d, n);
  std::uniform_real_distribution<double> u(-amp, amp);
  auto verts = k.vertices();
  for (auto& v : verts) {
    bool interior = true;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      interior = interior && v(i) > 0.0 && v(i) < static_cast<double>(n);
    if (interior)
      for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) += u(rng);
  }
  std::vector<std::vector<std::size_t>> s;
  for (const auto& simplex : k.simplices())
    s.push_back(simplex.vertex_ids);
  return Triangulation::build(verts, s);
}

/// Uniform random point in a simplex (exponential spacings).
template <class Rng>
Point random_point_in(const std::vector<Point>& simplex, Rng& rng)
{
  std::exponential_distribution<double> e(1.0);
  Point x = Point::Zero(simplex.front().size());
  double total = 0.0;
  for (const auto& v : simplex) {
    const double w = e(rng);
    x += w * v;
    total += w;
  }
  return x / total;
}

} // namespace cpwl::testing

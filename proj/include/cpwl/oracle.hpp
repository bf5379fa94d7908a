#pragma once

#include "cpwl/errors.hpp"
#include "cpwl/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <utility>
#include <vector>

// Brute-force quadrature used to certify the closed-form integrals. Nothing
// here relies on the exact formulas it is meant to check.

namespace cpwl::oracle {

using Integrand = std::function<double(const Point&)>;

struct QuadratureResult
{
  double estimate = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
};

/// Monte-Carlo integral over a simplex. Uniform points come from normalized
/// exponential spacings (Dirichlet(1, ..., 1) barycentric weights).
inline QuadratureResult mc_integrate_simplex(std::span<const Point> vertices, const Integrand& f,
                                             long n, std::uint64_t seed)
{
  if (n < 100)
    throw InvalidArgument("mc_integrate_simplex: need at least 100 samples");
  const double vol = simplex_volume(vertices);
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> exp1(1.0);

  const auto dim = vertices.front().size();
  Point x(dim);
  std::vector<double> w(vertices.size());
  double mean = 0.0, m2 = 0.0;
  for (long i = 0; i < n; ++i) {
    double total = 0.0;
    for (auto& wk : w) {
      wk = exp1(rng);
      total += wk;
    }
    x.setZero();
    for (std::size_t k = 0; k < w.size(); ++k)
      x += (w[k] / total) * vertices[k];
    // Welford update.
    const double y = f(x);
    const double delta = y - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (y - mean);
  }
  const double var = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
  return {vol * mean, vol * std::sqrt(var / static_cast<double>(n)), n};
}

namespace detail {

/// Children of one edgewise (Freudenthal) bisection step: each child vertex is
/// the midpoint of parent vertices (a, b), with a == b for parent vertices.
///
/// The children are the Kuhn simplices of the grid inside 2 S, where S is the
/// reference simplex {1 >= y_1 >= ... >= y_d >= 0} with vertices w_j = e_1 + ... + e_j.
/// A grid point g of 2 S equals w_a + w_b with a = #{g_i >= 1}, b = #{g_i = 2}.
inline std::vector<std::vector<std::pair<std::size_t, std::size_t>>> bisection_template(std::size_t d)
{
  std::vector<std::size_t> perm(d);
  for (std::size_t i = 0; i < d; ++i)
    perm[i] = i;
  std::vector<std::vector<std::size_t>> perms;
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  const auto in_reference = [&](const std::vector<int>& g) {
    if (g[0] > 2 || g[d - 1] < 0)
      return false;
    for (std::size_t i = 1; i < d; ++i)
      if (g[i] > g[i - 1])
        return false;
    return true;
  };

  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> children;
  std::vector<int> cell(d, 0);
  for (bool more = true; more;) {
    for (const auto& sigma : perms) {
      std::vector<std::vector<int>> verts{cell};
      for (std::size_t k = 0; k < d; ++k) {
        auto v = verts.back();
        ++v[sigma[k]];
        verts.push_back(std::move(v));
      }
      if (!std::all_of(verts.begin(), verts.end(), in_reference))
        continue;
      std::vector<std::pair<std::size_t, std::size_t>> child;
      for (const auto& g : verts) {
        std::size_t a = 0, b = 0;
        for (auto gi : g) {
          a += gi >= 1;
          b += gi == 2;
        }
        child.emplace_back(a, b);
      }
      children.push_back(std::move(child));
    }
    more = false;
    for (std::size_t i = d; i-- > 0;) {
      if (++cell[i] < 2) {
        more = true;
        break;
      }
      cell[i] = 0;
    }
  }
  return children;
}

inline double subdivide_rec(const std::vector<Point>& verts, const Integrand& f, int depth,
                            const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& tmpl,
                            double volume)
{
  if (depth == 0)
    return volume * f(centroid(verts));
  const double child_volume = volume / static_cast<double>(tmpl.size());
  double acc = 0.0;
  std::vector<Point> child(verts.size());
  for (const auto& c : tmpl) {
    for (std::size_t k = 0; k < c.size(); ++k)
      child[k] = 0.5 * (verts[c[k].first] + verts[c[k].second]);
    acc += subdivide_rec(child, f, depth - 1, tmpl, child_volume);
  }
  return acc;
}

} // namespace detail

inline constexpr int kMaxSubdivisionDepth = 6;

/// Deterministic oracle: `depth` rounds of edge-midpoint (Freudenthal)
/// subdivision into 2^d congruent-volume children each, then the centroid
/// rule on every leaf. Exact for affine integrands, O(h^2) otherwise.
inline double subdivide_integrate(std::span<const Point> vertices, const Integrand& f, int depth)
{
  if (depth < 0 || depth > kMaxSubdivisionDepth)
    throw InvalidArgument("subdivide_integrate: depth must be in [0, 6]");
  const auto d = static_cast<std::size_t>(vertices.front().size());
  const auto tmpl = detail::bisection_template(d);
  const std::vector<Point> verts(vertices.begin(), vertices.end());
  return detail::subdivide_rec(verts, f, depth, tmpl, simplex_volume(vertices));
}

} // namespace cpwl::oracle

#pragma once

#include "cpwl/cpwl.hpp"
#include "cpwl/errors.hpp"
#include "cpwl/geometry.hpp"
#include "cpwl/riesz.hpp"
#include "cpwl/triangulation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <vector>

namespace cpwl {

/// Linear box spline generated by the columns xi_1..xi_d of an invertible
/// matrix plus xi_{d+1} = xi_1 + ... + xi_d. Normalized so that B(xi_{d+1}) = 1.
class BoxSplineSpec
{
public:
  static BoxSplineSpec make(Eigen::MatrixXd xi)
  {
    if (xi.rows() != xi.cols() || xi.rows() == 0)
      throw DimensionMismatch("box spline generator matrix must be square and nonempty");
    if (!xi.allFinite())
      throw InvalidArgument("box spline generator matrix has non-finite entries");
    double scale = 1.0;
    for (Eigen::Index k = 0; k < xi.cols(); ++k)
      scale *= xi.col(k).norm();
    const double det = xi.fullPivLu().determinant();
    if (!(std::abs(det) > kDegeneracyRelTol * scale))
      throw SingularMatrix("box spline generator matrix is singular");

    BoxSplineSpec s;
    const auto d = xi.rows();
    s.inverse_ = xi.fullPivLu().inverse();
    s.full_.resize(d, d + 1);
    s.full_.leftCols(d) = xi;
    s.full_.col(d) = xi.rowwise().sum();
    s.xi_ = std::move(xi);
    s.det_abs_ = std::abs(det);
    return s;
  }

  static BoxSplineSpec cartesian(std::size_t d)
  {
    const auto n = static_cast<Eigen::Index>(d);
    return make(Eigen::MatrixXd::Identity(n, n));
  }

  std::size_t dimension() const { return static_cast<std::size_t>(xi_.rows()); }
  const Eigen::MatrixXd& generators() const { return xi_; }
  /// [xi_1 ... xi_d xi_{d+1}]
  const Eigen::MatrixXd& directions() const { return full_; }
  const Eigen::MatrixXd& inverse() const { return inverse_; }
  double det_abs() const { return det_abs_; }
  Eigen::VectorXd center() const { return full_.col(full_.cols() - 1); }

private:
  Eigen::MatrixXd xi_;
  Eigen::MatrixXd full_;
  Eigen::MatrixXd inverse_;
  double det_abs_ = 0.0;
};

/// Hinge expansion B(x) = sum over eps in {0,1}^{d+1} of
/// (-1)^|eps| min(Xi^{-1}(x - Xi_{d+1} eps))_+.
///
/// Ties inside min() need no special handling; the value is well defined.
inline double eval_box_spline_ghh(const BoxSplineSpec& spec, const Point& x)
{
  const auto d = spec.dimension();
  if (static_cast<std::size_t>(x.size()) != d)
    throw DimensionMismatch("eval_box_spline_ghh: point dimension differs from the box spline");
  const auto& dirs = spec.directions();
  const auto patterns = std::size_t{1} << (d + 1);
  double acc = 0.0;
  for (std::size_t mask = 0; mask < patterns; ++mask) {
    Eigen::VectorXd shifted = x;
    for (std::size_t k = 0; k <= d; ++k)
      if (mask & (std::size_t{1} << k))
        shifted -= dirs.col(static_cast<Eigen::Index>(k));
    const double hinge = std::max((spec.inverse() * shifted).minCoeff(), 0.0);
    acc += (std::popcount(mask) % 2 == 0 ? hinge : -hinge);
  }
  return acc;
}

/// Same function evaluated on the Kuhn triangulation of the mapped lattice:
/// y = Xi^{-1} x is located in its Kuhn simplex (fractional parts sorted in
/// decreasing order) and the hat of the site (1, ..., 1) is read off from the
/// barycentric coordinates.
inline double eval_box_spline_kuhn(const BoxSplineSpec& spec, const Point& x)
{
  const auto d = spec.dimension();
  if (static_cast<std::size_t>(x.size()) != d)
    throw DimensionMismatch("eval_box_spline_kuhn: point dimension differs from the box spline");
  const Eigen::VectorXd y = spec.inverse() * x;
  const Eigen::VectorXd base = y.array().floor();
  const Eigen::VectorXd frac = y - base;

  std::vector<Eigen::Index> order(d);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return frac(a) > frac(b); });

  std::vector<Point> vertices;
  vertices.reserve(d + 1);
  vertices.push_back(base);
  for (auto axis : order) {
    Point next = vertices.back();
    next(axis) += 1.0;
    vertices.push_back(std::move(next));
  }
  const Point ones = Point::Ones(static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k <= d; ++k)
    if (vertices[k] == ones)
      return std::clamp(barycentric(vertices, y).lambdas(static_cast<Eigen::Index>(k)), 0.0, 1.0);
  return 0.0;
}

// ---------------------------------------------------------------------------
// Autocorrelation

/// Exact inner products <B, B(. - Xi k)> keyed by integer offset k. Offsets not
/// present are zero (compact support).
struct AutocorrelationTable
{
  std::size_t dimension = 0;
  double det_abs = 1.0;
  std::map<std::vector<long>, double> entries;

  double at(const std::vector<long>& k) const
  {
    const auto it = entries.find(k);
    return it == entries.end() ? 0.0 : it->second;
  }

  double sum() const
  {
    double s = 0.0;
    for (const auto& [k, v] : entries)
      s += v;
    return s;
  }
};

/// The Cartesian hat centered at (1, ..., 1) lives on the Kuhn triangulation
/// of [0, 2]^d; returns that triangulation and the id of the center site.
inline std::pair<Triangulation, std::size_t> cartesian_box_spline_support(std::size_t d)
{
  auto t = kuhn_triangulation(d, 2);
  const Point ones = Point::Ones(static_cast<Eigen::Index>(d));
  for (std::size_t v = 0; v < t.num_vertices(); ++v)
    if (t.vertex(v) == ones)
      return {std::move(t), v};
  throw Error("center site missing from Kuhn triangulation");
}

/// Builds the table from per-simplex inner products over the support of the
/// Cartesian box spline, scaled by |det Xi| for general lattices.
inline AutocorrelationTable autocorrelation_table(const BoxSplineSpec& spec)
{
  const auto d = spec.dimension();
  const auto [t, center] = cartesian_box_spline_support(d);

  AutocorrelationTable table;
  table.dimension = d;
  table.det_abs = spec.det_abs();
  for (auto s : t.star_simplices(center)) {
    const auto& ids = t.simplex(s).vertex_ids;
    std::vector<double> hat(d + 1, 0.0);
    for (std::size_t k = 0; k <= d; ++k)
      hat[k] = ids[k] == center ? 1.0 : 0.0;
    for (std::size_t k = 0; k <= d; ++k) {
      std::vector<double> shifted(d + 1, 0.0);
      shifted[k] = 1.0;
      std::vector<long> offset(d);
      for (std::size_t i = 0; i < d; ++i)
        offset[i] = std::lround(t.vertex(ids[k])(static_cast<Eigen::Index>(i))) - 1;
      table.entries[offset] +=
          spec.det_abs() * simplex_inner_product<double>(t.simplex(s).volume, hat, shifted);
    }
  }
  return table;
}

/// g(omega) = sum_k table(k) exp(-i k . omega). Throws if the imaginary part
/// exceeds 1e-10 (relative), which would mean a non-symmetric table.
inline double g_hat(const AutocorrelationTable& table, const Eigen::VectorXd& omega)
{
  if (static_cast<std::size_t>(omega.size()) != table.dimension)
    throw DimensionMismatch("g_hat: omega dimension differs from table");
  std::complex<double> acc{};
  for (const auto& [k, v] : table.entries) {
    double phase = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i)
      phase += static_cast<double>(k[i]) * omega(static_cast<Eigen::Index>(i));
    acc += v * std::polar(1.0, -phase);
  }
  if (std::abs(acc.imag()) > 1e-10 * std::max(1.0, std::abs(acc.real())))
    throw Error("g_hat: autocorrelation symbol has a non-negligible imaginary part");
  return acc.real();
}

/// omega_0 = -2 pi / (d+1) (1, ..., 1), where the Cartesian symbol is minimal.
inline Eigen::VectorXd omega_min_location(std::size_t d)
{
  return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d),
                                   -2.0 * std::numbers::pi / (static_cast<double>(d) + 1.0));
}

struct GhatSweep
{
  std::size_t points_per_axis = 0;
  double min_value = 0.0;
  double max_value = 0.0;
  double mean_value = 0.0;
  Eigen::VectorXd argmin;
  Eigen::VectorXd argmax;
};

/// Visits omega_j = 2 pi j / n on the n^d grid of [0, 2 pi)^d in row-major order.
inline void for_each_grid_omega(std::size_t d, std::size_t n,
                                const std::function<void(const Eigen::VectorXd&)>& visit)
{
  std::vector<std::size_t> idx(d, 0);
  Eigen::VectorXd omega(static_cast<Eigen::Index>(d));
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (;;) {
    for (std::size_t i = 0; i < d; ++i)
      omega(static_cast<Eigen::Index>(i)) = step * static_cast<double>(idx[i]);
    visit(omega);
    std::size_t i = d;
    while (i-- > 0) {
      if (++idx[i] < n)
        break;
      idx[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1))
      return;
  }
}

inline GhatSweep sweep_g_hat(const AutocorrelationTable& table, std::size_t points_per_axis)
{
  if (points_per_axis < 2)
    throw InvalidArgument("sweep_g_hat: need at least 2 points per axis");
  GhatSweep out;
  out.points_per_axis = points_per_axis;
  out.min_value = std::numeric_limits<double>::infinity();
  out.max_value = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::size_t count = 0;
  for_each_grid_omega(table.dimension, points_per_axis, [&](const Eigen::VectorXd& w) {
    const double g = g_hat(table, w);
    if (g < out.min_value) {
      out.min_value = g;
      out.argmin = w;
    }
    if (g > out.max_value) {
      out.max_value = g;
      out.argmax = w;
    }
    sum += g;
    ++count;
  });
  out.mean_value = sum / static_cast<double>(count);
  return out;
}

/// Largest dimension for which lattice_riesz_bounds runs a grid sweep.
inline constexpr std::size_t kMaxSweepDimension = 3;

struct LatticeRieszResult
{
  /// A = sqrt(|det Xi| / (d+2)), B = sqrt(|det Xi|).
  RieszReport analytic;
  std::optional<GhatSweep> sweep;
  /// g evaluated at omega_0, where the minimum A^2 is attained.
  double g_at_omega0 = 0.0;
  /// Swept extrema lie inside [A^2, B^2] up to 1e-9 |det Xi|.
  bool sweep_consistent = true;
};

inline LatticeRieszResult lattice_riesz_bounds(const BoxSplineSpec& spec, std::size_t grid_resolution)
{
  if (grid_resolution < 2)
    throw InvalidArgument("lattice_riesz_bounds: grid resolution must be >= 2");
  const auto d = static_cast<double>(spec.dimension());
  LatticeRieszResult out;
  out.analytic = detail::make_report(std::sqrt(spec.det_abs() / (d + 2.0)), std::sqrt(spec.det_abs()),
                                     BoundMethod::LatticeFourier);

  const auto table = autocorrelation_table(spec);
  out.g_at_omega0 = g_hat(table, omega_min_location(spec.dimension()));
  if (spec.dimension() <= kMaxSweepDimension) {
    out.sweep = sweep_g_hat(table, grid_resolution);
    const double a2 = out.analytic.lower * out.analytic.lower;
    const double b2 = out.analytic.upper * out.analytic.upper;
    const double tol = 1e-9 * spec.det_abs();
    out.sweep_consistent = out.sweep->min_value >= a2 - tol && out.sweep->max_value <= b2 + tol;
  }
  return out;
}

} // namespace cpwl

#pragma once

#include "cpwl/errors.hpp"
#include "cpwl/geometry.hpp"
#include "cpwl/triangulation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace cpwl {

namespace detail {

template <class T>
struct is_complex : std::false_type
{};
template <class T>
struct is_complex<std::complex<T>> : std::true_type
{};

template <class Scalar>
auto conj_if_complex(const Scalar& z)
{
  if constexpr (is_complex<Scalar>::value)
    return std::conj(z);
  else
    return z;
}

/// C(n, k) as a double; exact for the small arguments used here.
inline double binomial(std::size_t n, std::size_t k)
{
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i)
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

} // namespace detail

/// Largest exponent accepted by simplex_power_integral.
inline constexpr int kMaxPowerIntegralExponent = 16;

// ---------------------------------------------------------------------------
// CPWL functions

/// A CPWL function on a triangulation, stored as one coefficient per vertex:
/// f = sum_v c_v beta_v with c_v = f(v). Holds a non-owning reference to the
/// triangulation, which must outlive it.
template <class Scalar = double>
class CpwlFunction
{
public:
  CpwlFunction(const Triangulation& t, std::vector<Scalar> coeffs)
      : tri_(&t), coeffs_(std::move(coeffs))
  {
    if (coeffs_.size() != t.num_vertices())
      throw InvalidArgument("CpwlFunction: " + std::to_string(coeffs_.size()) +
                            " coefficients for " + std::to_string(t.num_vertices()) + " vertices");
  }

  /// f(v) = sum_v f(v) beta_v for the affine function a^T x + b.
  static CpwlFunction affine(const Triangulation& t, const Eigen::VectorXd& a, Scalar b)
  {
    std::vector<Scalar> c;
    c.reserve(t.num_vertices());
    for (const auto& v : t.vertices())
      c.push_back(Scalar(a.dot(v)) + b);
    return CpwlFunction(t, std::move(c));
  }

  const Triangulation& triangulation() const { return *tri_; }
  const std::vector<Scalar>& coeffs() const { return coeffs_; }

  std::vector<Scalar> simplex_values(std::size_t simplex_id) const
  {
    std::vector<Scalar> out;
    for (auto id : tri_->simplex(simplex_id).vertex_ids)
      out.push_back(coeffs_[id]);
    return out;
  }

private:
  const Triangulation* tri_;
  std::vector<Scalar> coeffs_;
};

struct HatValue
{
  double value = 0.0;
  bool in_domain = false;
};

/// beta_v(x): the barycentric coordinate attached to v on the simplex
/// containing x, or 0 when that simplex is not in St(v). Points outside
/// conv(V) give 0 with in_domain = false.
inline HatValue eval_hat(const Triangulation& t, std::size_t vertex_id, const Point& x)
{
  if (vertex_id >= t.num_vertices())
    throw InvalidArgument("eval_hat: vertex id " + std::to_string(vertex_id) + " out of range");
  const auto loc = t.locate(x);
  if (!loc)
    return {0.0, false};
  const auto& ids = t.simplex(loc->simplex_id).vertex_ids;
  for (std::size_t k = 0; k < ids.size(); ++k)
    if (ids[k] == vertex_id)
      return {std::clamp(loc->coords.lambdas(static_cast<Eigen::Index>(k)), 0.0, 1.0), true};
  return {0.0, true};
}

/// Hat function through the min-form (min_{s in St(v)} lambda_v^s(x))_+.
/// Only equal to beta_v when St(v) is convex.
inline double eval_hat_convex_star(const Triangulation& t, std::size_t vertex_id, const Point& x)
{
  double m = std::numeric_limits<double>::infinity();
  for (auto s : t.star_simplices(vertex_id)) {
    const auto& ids = t.simplex(s).vertex_ids;
    const auto k = static_cast<Eigen::Index>(std::find(ids.begin(), ids.end(), vertex_id) - ids.begin());
    m = std::min(m, barycentric(t.simplex_points(s), x).lambdas(k));
  }
  return std::max(m, 0.0);
}

/// Evaluates f at x by locating a containing simplex and interpolating.
template <class Scalar>
Scalar eval(const CpwlFunction<Scalar>& f, const Point& x)
{
  const auto& t = f.triangulation();
  const auto loc = t.locate(x);
  if (!loc)
    throw OutOfDomain("eval: point is outside the triangulated domain");
  const auto& ids = t.simplex(loc->simplex_id).vertex_ids;
  Scalar acc{};
  for (std::size_t k = 0; k < ids.size(); ++k)
    acc += loc->coords.lambdas(static_cast<Eigen::Index>(k)) * f.coeffs()[ids[k]];
  return acc;
}

// ---------------------------------------------------------------------------
// Exact integrals

/// ||beta_v||_{L_p} = (vol(St(v)) / C(p+d, d))^{1/p}.
inline double lp_norm_hat(const Triangulation& t, std::size_t vertex_id, int p)
{
  if (p < 1)
    throw InvalidArgument("lp_norm_hat: p must be a positive integer");
  const auto d = t.dimension();
  const double vol = star(t, vertex_id).volume;
  return std::pow(vol / detail::binomial(static_cast<std::size_t>(p) + d, d), 1.0 / p);
}

/// Integral over a simplex of conj(f) g for affine f, g given by vertex values:
/// vol(s) / ((d+1)(d+2)) * f^H (ones + I) g.
template <class Scalar>
Scalar simplex_inner_product(double volume, std::span<const Scalar> f, std::span<const Scalar> g)
{
  if (f.size() != g.size() || f.empty())
    throw DimensionMismatch("simplex_inner_product: value vectors differ in size");
  const auto n = static_cast<double>(f.size());
  Scalar sum_f{}, sum_g{}, diag{};
  for (std::size_t k = 0; k < f.size(); ++k) {
    sum_f += f[k];
    sum_g += g[k];
    diag += detail::conj_if_complex(f[k]) * g[k];
  }
  return Scalar(volume / (n * (n + 1.0))) * (detail::conj_if_complex(sum_f) * sum_g + diag);
}

template <class Scalar>
Scalar simplex_inner_product(std::span<const Point> vertices, std::span<const Scalar> f,
                             std::span<const Scalar> g)
{
  if (f.size() != vertices.size())
    throw DimensionMismatch("simplex_inner_product: need one value per vertex");
  if (is_degenerate(vertices))
    throw DegenerateSimplex("simplex_inner_product: degenerate simplex");
  return simplex_inner_product<Scalar>(simplex_volume(vertices), f, g);
}

/// Integral over a simplex of f^p for affine f given by vertex values:
/// vol(s) / C(p+d, d) * sum over weak compositions |k| = p of prod f_i^{k_i}.
inline double simplex_power_integral(double volume, std::span<const double> values, int p)
{
  if (p < 0)
    throw InvalidArgument("simplex_power_integral: p must be >= 0");
  if (p > kMaxPowerIntegralExponent)
    throw InvalidArgument("simplex_power_integral: p > " +
                          std::to_string(kMaxPowerIntegralExponent) + " is not supported");
  const std::size_t n = values.size();
  if (n < 2)
    throw DimensionMismatch("simplex_power_integral: need d+1 >= 2 vertex values");
  const auto up = static_cast<std::size_t>(p);

  // Weak compositions of p into n parts, visited iteratively from (p, 0, ..., 0)
  // to (0, ..., 0, p).
  std::vector<std::size_t> k(n, 0);
  k[0] = up;
  double sum = 0.0;
  for (;;) {
    double term = 1.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t e = 0; e < k[i]; ++e)
        term *= values[i];
    sum += term;
    if (k[n - 1] == up)
      break;
    std::size_t j = n - 2;
    while (k[j] == 0)
      --j;
    --k[j];
    const auto tail = k[n - 1];
    k[n - 1] = 0;
    k[j + 1] = tail + 1;
  }
  return volume * sum / detail::binomial(up + n - 1, n - 1);
}

inline double simplex_power_integral(std::span<const Point> vertices, std::span<const double> values,
                                     int p)
{
  if (values.size() != vertices.size())
    throw DimensionMismatch("simplex_power_integral: need one value per vertex");
  return simplex_power_integral(simplex_volume(vertices), values, p);
}

/// ||f||_{L_2} by summing the exact per-simplex quadratic forms.
template <class Scalar>
double l2_norm(const CpwlFunction<Scalar>& f)
{
  const auto& t = f.triangulation();
  double acc = 0.0;
  for (std::size_t s = 0; s < t.num_simplices(); ++s) {
    const auto v = f.simplex_values(s);
    acc += std::real(simplex_inner_product<Scalar>(t.simplex(s).volume, v, v));
  }
  return std::sqrt(std::max(acc, 0.0));
}

// ---------------------------------------------------------------------------
// Gram matrix

enum class GramScale
{
  Raw,       ///< M with M_pp = 2 vol(St(v_p)), M_pq = vol(St(v_p) & St(v_q))
  Normalized ///< M / ((d+1)(d+2)), the actual L_2 inner products of hats
};

struct GramMatrix
{
  Eigen::MatrixXd matrix;
  GramScale scale = GramScale::Raw;
  std::size_t dimension = 0;

  double normalization() const
  {
    const auto d = static_cast<double>(dimension);
    return (d + 1.0) * (d + 2.0);
  }

  Eigen::MatrixXd raw() const { return scale == GramScale::Raw ? matrix : matrix * normalization(); }
  Eigen::MatrixXd normalized() const
  {
    return scale == GramScale::Normalized ? matrix : matrix / normalization();
  }
};

/// Assembles M = sum_s vol(s) L_s^T (ones + I) L_s.
inline GramMatrix gram_matrix(const Triangulation& t, GramScale scale = GramScale::Raw)
{
  const auto n = static_cast<Eigen::Index>(t.num_vertices());
  GramMatrix g{Eigen::MatrixXd::Zero(n, n), GramScale::Raw, t.dimension()};
  for (const auto& s : t.simplices()) {
    for (auto p : s.vertex_ids)
      for (auto q : s.vertex_ids)
        g.matrix(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) +=
            (p == q ? 2.0 : 1.0) * s.volume;
  }
  if (scale == GramScale::Normalized) {
    g.matrix /= g.normalization();
    g.scale = GramScale::Normalized;
  }
  return g;
}

/// c^H G c with G in the normalized scale, i.e. ||sum c_v beta_v||_{L_2}^2.
template <class Scalar>
double gram_energy(const GramMatrix& g, std::span<const Scalar> c)
{
  const auto& m = g.matrix;
  const double factor = g.scale == GramScale::Raw ? 1.0 / g.normalization() : 1.0;
  if (static_cast<Eigen::Index>(c.size()) != m.rows())
    throw DimensionMismatch("gram_energy: coefficient count differs from matrix size");
  double acc = 0.0;
  for (Eigen::Index p = 0; p < m.rows(); ++p)
    for (Eigen::Index q = 0; q < m.cols(); ++q)
      acc += std::real(detail::conj_if_complex(c[static_cast<std::size_t>(p)]) * m(p, q) *
                       c[static_cast<std::size_t>(q)]);
  return acc * factor;
}

} // namespace cpwl

#pragma once

#include "cpwl/cpwl.hpp"
#include "cpwl/errors.hpp"
#include "cpwl/linalg.hpp"
#include "cpwl/triangulation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace cpwl {

enum class BoundMethod
{
  GramEigen,     ///< exact bounds from the Gram spectrum
  StarVolume,    ///< bounds from extreme star volumes
  LatticeFourier ///< exact lattice bounds from the autocorrelation symbol
};

inline std::string_view to_string(BoundMethod m)
{
  switch (m) {
  case BoundMethod::GramEigen: return "gram-eigen";
  case BoundMethod::StarVolume: return "star-volume";
  case BoundMethod::LatticeFourier: return "lattice-fourier";
  }
  return "unknown";
}

/// Riesz bounds A <= ||sum c_k phi_k|| / ||c|| <= B and their ratio.
struct RieszReport
{
  double lower = 0.0;
  double upper = 0.0;
  double condition = 0.0;
  BoundMethod method = BoundMethod::GramEigen;

  // Star-volume extremes (StarVolume only).
  std::optional<double> star_volume_inf;
  std::optional<double> star_volume_sup;

  // Extreme Gram eigenvalues in the raw scale (GramEigen only).
  std::optional<double> lambda_min;
  std::optional<double> lambda_max;

  bool contains(const RieszReport& inner, double tol = 0.0) const
  {
    return lower <= inner.lower + tol && inner.upper <= upper + tol;
  }
};

namespace detail {

inline RieszReport make_report(double lower, double upper, BoundMethod method)
{
  if (!(lower > 0.0) || !(upper >= lower))
    throw Error("Riesz bounds violate 0 < A <= B (A = " + std::to_string(lower) +
                ", B = " + std::to_string(upper) + ")");
  RieszReport r;
  r.lower = lower;
  r.upper = upper;
  r.condition = upper / lower;
  r.method = method;
  return r;
}

} // namespace detail

/// A = sqrt(V_inf / ((d+1)(d+2))), B = sqrt(V_sup / (d+1)) from the extreme
/// star volumes; B / A = sqrt(d+2) sqrt(V_sup / V_inf).
inline RieszReport star_volume_bounds(const Triangulation& t)
{
  const auto vols = star_volumes(t);
  const auto [lo, hi] = std::minmax_element(vols.begin(), vols.end());
  const auto d = static_cast<double>(t.dimension());
  auto r = detail::make_report(std::sqrt(*lo / ((d + 1.0) * (d + 2.0))), std::sqrt(*hi / (d + 1.0)),
                               BoundMethod::StarVolume);
  r.star_volume_inf = *lo;
  r.star_volume_sup = *hi;
  return r;
}

/// Exact bounds sqrt(lambda / ((d+1)(d+2))) from the extreme eigenvalues of the
/// raw Gram matrix, computed with the cyclic Jacobi solver.
inline RieszReport gram_eigen_bounds(const Eigen::MatrixXd& raw_gram, std::size_t d,
                                     const JacobiOptions& opts = {})
{
  const auto eig = jacobi_eigen(raw_gram, opts);
  const double lmin = eig.values(0);
  const double lmax = eig.values(eig.values.size() - 1);
  const double norm = (static_cast<double>(d) + 1.0) * (static_cast<double>(d) + 2.0);
  if (!(lmin > 0.0))
    throw Error("gram_eigen_bounds: Gram matrix is not positive definite");
  auto r = detail::make_report(std::sqrt(lmin / norm), std::sqrt(lmax / norm), BoundMethod::GramEigen);
  r.lambda_min = lmin;
  r.lambda_max = lmax;
  return r;
}

inline RieszReport gram_eigen_bounds(const GramMatrix& g, const JacobiOptions& opts = {})
{
  return gram_eigen_bounds(g.raw(), g.dimension, opts);
}

/// ||sum c_v beta_v||_{L_2} / ||c||_{l_2}, exact through the Gram quadratic form.
template <class Scalar>
double synthesis_ratio(const GramMatrix& g, std::span<const Scalar> c)
{
  double c2 = 0.0;
  for (const auto& x : c)
    c2 += std::norm(x);
  if (c2 == 0.0)
    throw InvalidArgument("synthesis_ratio: zero coefficient vector");
  return std::sqrt(std::max(gram_energy<Scalar>(g, c), 0.0) / c2);
}

struct SamplingResult
{
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  int trials = 0;
  /// Whether every observed ratio fell inside the report's [A, B] (up to 1e-8).
  bool within_bounds = false;
};

/// Draws Gaussian coefficient vectors and records the extreme observed
/// synthesis ratios; they must lie inside [report.lower, report.upper].
inline SamplingResult verify_bounds_by_sampling(const Triangulation& t, const RieszReport& report,
                                                int n_trials, std::uint64_t seed = 1)
{
  if (n_trials < 1)
    throw InvalidArgument("verify_bounds_by_sampling: need at least one trial");
  const auto g = gram_matrix(t);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> c(t.num_vertices());
  SamplingResult out{std::numeric_limits<double>::infinity(), 0.0, n_trials};
  for (int i = 0; i < n_trials; ++i) {
    for (auto& x : c)
      x = normal(rng);
    const double r = synthesis_ratio<double>(g, c);
    out.min_ratio = std::min(out.min_ratio, r);
    out.max_ratio = std::max(out.max_ratio, r);
  }
  out.within_bounds = out.min_ratio >= report.lower - 1e-8 && out.max_ratio <= report.upper + 1e-8;
  return out;
}

struct StochasticConditioning
{
  double mean_ratio_sq = 0.0; ///< empirical E[C^H P C] over unit C
  double mean_ratio = 0.0;    ///< empirical E[sqrt(C^H P C)]
  double std_ratio = 0.0;     ///< sample standard deviation of sqrt(C^H P C)
  int samples = 0;
};

/// Samples C uniformly on the unit sphere of C^{d+1} (normalized complex
/// Gaussians) and averages C^H (ones + I) C and its square root.
inline StochasticConditioning stochastic_conditioning(std::size_t d, int n_samples,
                                                      std::uint64_t seed = 1)
{
  if (n_samples < 1)
    throw InvalidArgument("stochastic_conditioning: need at least one sample");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<std::complex<double>> c(d + 1);
  double sum_q = 0.0, sum_r = 0.0, sum_r2 = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    double norm2 = 0.0;
    for (auto& z : c) {
      z = {normal(rng), normal(rng)};
      norm2 += std::norm(z);
    }
    std::complex<double> total{};
    for (const auto& z : c)
      total += z;
    // C^H (ones + I) C = |sum C|^2 + ||C||^2, divided by ||C||^2.
    const double q = std::norm(total) / norm2 + 1.0;
    sum_q += q;
    sum_r += std::sqrt(q);
    sum_r2 += q;
  }
  const double n = n_samples;
  StochasticConditioning out;
  out.samples = n_samples;
  out.mean_ratio_sq = sum_q / n;
  out.mean_ratio = sum_r / n;
  out.std_ratio = n > 1 ? std::sqrt(std::max(sum_r2 / n - out.mean_ratio * out.mean_ratio, 0.0) * n / (n - 1))
                        : 0.0;
  return out;
}

} // namespace cpwl

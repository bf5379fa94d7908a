#include "cpwl/cpwl.hpp"
#include "cpwl/oracle.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cpwl;
using cpwl::testing::random_simplex;
using cpwl::testing::standard_simplex;

TEST(MonteCarlo, ConstantIsExact)
{
  std::mt19937_64 rng(61);
  for (std::size_t d = 1; d <= 5; ++d) {
    const auto s = random_simplex(d, rng);
    const auto r = oracle::mc_integrate_simplex(s, [](const Point&) { return 1.0; }, 1000, 1);
    EXPECT_NEAR(r.estimate, simplex_volume(s), 1e-12);
    EXPECT_EQ(r.std_error, 0.0);
    EXPECT_EQ(r.n_samples, 1000);
  }
}

TEST(MonteCarlo, SquaredRampOnUnitInterval)
{
  const auto r = oracle::mc_integrate_simplex(
      standard_simplex(1), [](const Point& x) { return (1 - x(0)) * (1 - x(0)); }, 1'000'000, 2);
  EXPECT_LE(std::abs(r.estimate - 1.0 / 3.0), 3.0 * r.std_error);
  EXPECT_GT(r.std_error, 0.0);
}

TEST(MonteCarlo, HatSquaredOverKuhnStar)
{
  const auto k = kuhn_triangulation(2, 2);
  std::size_t center = 0;
  for (std::size_t v = 0; v < k.num_vertices(); ++v)
    if (k.vertex(v) == Point::Ones(2))
      center = v;
  double estimate = 0.0, var = 0.0;
  for (auto s : k.star_simplices(center)) {
    const auto r = oracle::mc_integrate_simplex(
        k.simplex_points(s),
        [&](const Point& x) {
          const double h = eval_hat(k, center, x).value;
          return h * h;
        },
        50'000, s);
    estimate += r.estimate;
    var += r.std_error * r.std_error;
  }
  EXPECT_LE(std::abs(estimate - 0.5), 3.0 * std::sqrt(var));
}

TEST(MonteCarlo, ReproducibleAndValidated)
{
  const auto s = standard_simplex(2);
  const auto f = [](const Point& x) { return std::sin(x(0)) + x(1); };
  const auto a = oracle::mc_integrate_simplex(s, f, 5000, 9);
  const auto b = oracle::mc_integrate_simplex(s, f, 5000, 9);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_THROW(oracle::mc_integrate_simplex(s, f, 99, 9), InvalidArgument);
}

TEST(MonteCarlo, SamplesAreUniform)
{
  // The sample mean of x over a simplex converges to its centroid.
  std::mt19937_64 rng(62);
  const auto s = random_simplex(3, rng);
  const double vol = simplex_volume(s);
  const auto c = centroid(s);
  for (Eigen::Index i = 0; i < 3; ++i) {
    const auto r = oracle::mc_integrate_simplex(s, [&](const Point& x) { return x(i); }, 200'000, 10 + i);
    EXPECT_LE(std::abs(r.estimate / vol - c(i)), 3.0 * r.std_error / vol);
  }
}

TEST(Subdivision, TemplateTilesTheSimplex)
{
  for (std::size_t d = 1; d <= 5; ++d) {
    const auto tmpl = oracle::detail::bisection_template(d);
    EXPECT_EQ(tmpl.size(), std::size_t{1} << d);
    // Children of the standard simplex have equal volume summing to the parent.
    const auto s = standard_simplex(d);
    double total = 0.0;
    for (const auto& child : tmpl) {
      std::vector<Point> verts;
      for (auto [a, b] : child)
        verts.push_back(0.5 * (s[a] + s[b]));
      const double vol = simplex_volume(verts);
      EXPECT_NEAR(vol, simplex_volume(s) / static_cast<double>(tmpl.size()), 1e-14);
      total += vol;
    }
    EXPECT_NEAR(total, simplex_volume(s), 1e-14);
  }
}

TEST(Subdivision, AffineIsExact)
{
  std::mt19937_64 rng(63);
  std::normal_distribution<double> g;
  for (std::size_t d = 1; d <= 4; ++d) {
    const auto s = random_simplex(d, rng);
    Eigen::VectorXd a(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < a.size(); ++i)
      a(i) = g(rng);
    const auto f = [&](const Point& x) { return a.dot(x) + 0.3; };
    const double exact = simplex_volume(s) * f(centroid(s));
    for (int depth : {0, 1, 3})
      EXPECT_NEAR(oracle::subdivide_integrate(s, f, depth), exact, 1e-12);
  }
}

TEST(Subdivision, QuadraticConvergesAtSecondOrder)
{
  const auto s = standard_simplex(2);
  const auto f = [](const Point& x) { return x(0) * x(0) + x(0) * x(1); };
  // Exact: int x^2 = 1/12, int xy = 1/24 over the unit triangle.
  const double exact = 1.0 / 12.0 + 1.0 / 24.0;
  const double e5 = std::abs(oracle::subdivide_integrate(s, f, 5) - exact);
  const double e6 = std::abs(oracle::subdivide_integrate(s, f, 6) - exact);
  EXPECT_NEAR(e5 / e6, 4.0, 1e-6);
  EXPECT_THROW(oracle::subdivide_integrate(s, f, 7), InvalidArgument);
  EXPECT_THROW(oracle::subdivide_integrate(s, f, -1), InvalidArgument);
}

TEST(Subdivision, AgreesWithMonteCarlo)
{
  std::mt19937_64 rng(64);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 1 + static_cast<std::size_t>(trial % 3);
    const auto s = random_simplex(d, rng);
    const auto f = [](const Point& x) { return std::exp(-x.squaredNorm()) + x.sum() * x.sum(); };
    const double sub = oracle::subdivide_integrate(s, f, 5);
    const auto mc = oracle::mc_integrate_simplex(s, f, 100'000, static_cast<std::uint64_t>(trial));
    EXPECT_LE(std::abs(sub - mc.estimate), 4.0 * mc.std_error + 1e-3 * std::abs(sub)) << "trial " << trial;
  }
}

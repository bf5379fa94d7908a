#include "cpwl/triangulation.hpp"
#include "cpwl/triangulation_io.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

using namespace cpwl;
using cpwl::testing::chain3;
using cpwl::testing::pt;

namespace {

Triangulation unit_square_two_triangles()
{
  return Triangulation::build({pt({0, 0}), pt({1, 0}), pt({1, 1}), pt({0, 1})}, {{0, 1, 2}, {0, 2, 3}});
}

} // namespace

TEST(Build, ChainAndSquare)
{
  const auto c = chain3();
  EXPECT_EQ(c.dimension(), 1u);
  EXPECT_EQ(c.num_vertices(), 3u);
  EXPECT_EQ(c.num_simplices(), 2u);
  EXPECT_DOUBLE_EQ(c.total_volume(), 2.0);

  const auto sq = unit_square_two_triangles();
  EXPECT_DOUBLE_EQ(sq.total_volume(), 1.0);
  EXPECT_EQ(sq.star_simplices(0).size(), 2u);
  EXPECT_EQ(sq.star_simplices(1).size(), 1u);
}

TEST(Build, RejectsBadInput)
{
  EXPECT_THROW(Triangulation::build({}, {{0, 1}}), InvalidArgument);
  EXPECT_THROW(Triangulation::build({pt({0}), pt({1})}, {}), InvalidArgument);
  EXPECT_THROW(Triangulation::build({pt({0}), pt({1})}, {{0, 2}}), InvalidArgument);
  EXPECT_THROW(Triangulation::build({pt({0}), pt({1}), pt({2})}, {{0, 1}}), InvalidArgument);
  EXPECT_THROW(Triangulation::build({pt({0}), pt({1})}, {{0, 0}}), InvalidArgument);
  EXPECT_THROW(Triangulation::build({pt({0}), pt({1}), pt({2})}, {{0, 1, 2}}), InvalidArgument);
  EXPECT_THROW(Triangulation::build({pt({0, 0}), pt({1})}, {{0, 1}}), DimensionMismatch);
  EXPECT_THROW(Triangulation::build({pt({0, 0}), pt({1, 1}), pt({2, 2})}, {{0, 1, 2}}), DegenerateSimplex);
  EXPECT_THROW(Triangulation::build({pt({0}), pt({std::nan("")})}, {{0, 1}}), InvalidArgument);
  EXPECT_THROW(chain3().star_simplices(7), InvalidArgument);
}

TEST(Locate, FindsContainingSimplex)
{
  const auto sq = unit_square_two_triangles();
  const auto below = sq.locate(pt({0.7, 0.2}));
  ASSERT_TRUE(below);
  EXPECT_EQ(below->simplex_id, 0u);
  const auto above = sq.locate(pt({0.2, 0.7}));
  ASSERT_TRUE(above);
  EXPECT_EQ(above->simplex_id, 1u);
  EXPECT_FALSE(sq.locate(pt({1.5, 0.5})));
}

TEST(Star, ChainAndKuhnInterior)
{
  const auto st = star(chain3(), 1);
  EXPECT_DOUBLE_EQ(st.volume, 2.0);
  EXPECT_EQ(st.cardinality, 2u);

  // Site (1, 1) of the Kuhn triangulation of [0, 2]^2 is its only interior site.
  const auto k = kuhn_triangulation(2, 2);
  for (std::size_t v = 0; v < k.num_vertices(); ++v) {
    if (k.vertex(v) == pt({1, 1})) {
      const auto s = star(k, v);
      EXPECT_EQ(s.cardinality, 6u);
      EXPECT_NEAR(s.volume, 3.0, 1e-14);
    }
  }
}

TEST(Star, VolumesSumToDPlusOneTimesTotal)
{
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto t = cpwl::testing::random_delaunay(30, rng);
    double sum = 0.0;
    for (double v : star_volumes(t))
      sum += v;
    EXPECT_NEAR(sum, 3.0 * t.total_volume(), 1e-12);
  }
  const auto k = kuhn_triangulation(3, 2);
  double sum = 0.0;
  for (double v : star_volumes(k))
    sum += v;
  EXPECT_NEAR(sum, 4.0 * 8.0, 1e-12);
}

TEST(Validate, SharedEdgeIsValid)
{
  const auto r = validate(unit_square_two_triangles());
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.union_checked);
  EXPECT_TRUE(r.offending_pairs.empty());
}

TEST(Validate, OverlappingTrianglesAreFlagged)
{
  const auto t = Triangulation::build({pt({0, 0}), pt({2, 0}), pt({0, 2}), pt({1, 1.5}), pt({0.2, 0.2})},
                                      {{0, 1, 2}, {3, 4, 1}});
  const auto r = validate(t);
  EXPECT_FALSE(r.intersection_ok);
  ASSERT_EQ(r.offending_pairs.size(), 1u);
  EXPECT_EQ(r.offending_pairs[0], (std::pair<std::size_t, std::size_t>{0, 1}));
}

TEST(Validate, NonConvexUnionIsFlagged)
{
  // An L-shaped region: valid intersections, but it does not cover its hull.
  const auto t = Triangulation::build({pt({0, 0}), pt({1, 0}), pt({0, 1}), pt({1, 1}), pt({2, 0}), pt({2, 1}), pt({0, 2})},
                                      {{0, 1, 2}, {1, 3, 2}, {1, 4, 3}, {4, 5, 3}, {2, 3, 6}});
  const auto r = validate(t);
  EXPECT_TRUE(r.intersection_ok);
  EXPECT_FALSE(r.union_ok);
}

TEST(Validate, SingleSimplexAndHigherDimension)
{
  EXPECT_TRUE(validate(Triangulation::build(cpwl::testing::standard_simplex(2), {{0, 1, 2}})).ok());
  const auto r = validate(kuhn_triangulation(3, 2));
  EXPECT_TRUE(r.ok());
  EXPECT_FALSE(r.union_checked);
}

TEST(Kuhn, CountsAndVolumes)
{
  EXPECT_EQ(kuhn_triangulation(2, 1).num_simplices(), 2u);
  EXPECT_EQ(kuhn_triangulation(3, 1).num_simplices(), 6u);
  EXPECT_EQ(kuhn_triangulation(1, 3).num_simplices(), 3u);
  EXPECT_EQ(kuhn_triangulation(2, 3).num_simplices(), 18u);
  EXPECT_EQ(kuhn_triangulation(4, 1).num_simplices(), 24u);

  for (std::size_t d = 1; d <= 4; ++d) {
    const auto k = kuhn_triangulation(d, 2);
    const double expected = 1.0 / detail::factorial(d);
    for (const auto& s : k.simplices())
      EXPECT_NEAR(s.volume, expected, 1e-14);
    EXPECT_NEAR(k.total_volume(), std::pow(2.0, static_cast<double>(d)), 1e-12);
  }
}

TEST(Kuhn, InteriorStarVolumeIsDPlusOne)
{
  for (std::size_t d = 1; d <= 4; ++d) {
    const auto k = kuhn_triangulation(d, 3);
    std::size_t interior = 0;
    for (std::size_t v = 0; v < k.num_vertices(); ++v) {
      const auto& p = k.vertex(v);
      if (p.minCoeff() > 0.0 && p.maxCoeff() < 3.0) {
        ++interior;
        EXPECT_NEAR(star(k, v).volume, static_cast<double>(d + 1), 1e-12);
        EXPECT_EQ(star(k, v).cardinality, static_cast<std::size_t>(detail::factorial(d + 1)));
      }
    }
    EXPECT_EQ(interior, static_cast<std::size_t>(std::pow(2.0, static_cast<double>(d))));
  }
}

TEST(Kuhn, NonCubicBox)
{
  const auto k = kuhn_triangulation(2, IntegerBox{{-1, 0}, {2, 1}});
  EXPECT_EQ(k.num_simplices(), 6u);
  EXPECT_NEAR(k.total_volume(), 3.0, 1e-14);
  EXPECT_TRUE(validate(k).ok());
  EXPECT_THROW(kuhn_triangulation(2, IntegerBox{{0, 0}, {0, 1}}), InvalidArgument);
}

TEST(Delaunay, ThreePointsGiveOneTriangle)
{
  const std::vector<Point> p{pt({0, 0}), pt({1, 0}), pt({0, 1})};
  const auto t = delaunay_2d(p);
  EXPECT_EQ(t.num_simplices(), 1u);
  EXPECT_DOUBLE_EQ(t.total_volume(), 0.5);
}

TEST(Delaunay, RectangleAndCocircularSquare)
{
  const std::vector<Point> rect{pt({0, 0}), pt({3, 0}), pt({3, 1}), pt({0, 1}), pt({1.5, 0.4})};
  const auto t = delaunay_2d(rect);
  EXPECT_EQ(t.num_simplices(), 4u);
  EXPECT_NEAR(t.total_volume(), 3.0, 1e-12);
  EXPECT_TRUE(is_delaunay(t));

  const std::vector<Point> sq{pt({0, 0}), pt({1, 0}), pt({1, 1}), pt({0, 1})};
  const auto s = delaunay_2d(sq);
  EXPECT_EQ(s.num_simplices(), 2u);
  EXPECT_NEAR(s.total_volume(), 1.0, 1e-12);
  EXPECT_TRUE(validate(s).ok());
}

TEST(Delaunay, RejectsDegenerateInput)
{
  EXPECT_THROW(delaunay_2d(std::vector<Point>{pt({0, 0}), pt({1, 0})}), InvalidArgument);
  EXPECT_THROW(delaunay_2d(std::vector<Point>{pt({0, 0}), pt({1, 1}), pt({2, 2}), pt({3, 3})}), InvalidArgument);
  EXPECT_THROW(delaunay_2d(std::vector<Point>{pt({0, 0}), pt({1, 0}), pt({0, 1}), pt({1, 0})}), InvalidArgument);
  EXPECT_THROW(delaunay_2d(std::vector<Point>{pt({0}), pt({1}), pt({2})}), DimensionMismatch);
}

TEST(Delaunay, RandomSetsAreValidAndDelaunay)
{
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial) * 3;
    const auto pts = cpwl::testing::random_planar_points(n, rng);
    const auto t = delaunay_2d(pts);
    EXPECT_EQ(t.num_vertices(), n);
    const auto r = validate(t, static_cast<std::uint64_t>(trial));
    EXPECT_TRUE(r.ok()) << "n = " << n;
    EXPECT_TRUE(is_delaunay(t)) << "n = " << n;
    // Euler: 2n - 2 - h triangles for h hull vertices.
    const auto hull = detail::convex_hull_2d(pts);
    EXPECT_EQ(t.num_simplices(), 2 * n - 2 - hull.size()) << "n = " << n;
  }
}

TEST(Delaunay, GridPointsWithManyCocircularQuadruples)
{
  std::vector<Point> pts;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 5; ++j)
      pts.push_back(pt({static_cast<double>(i), static_cast<double>(j)}));
  const auto t = delaunay_2d(pts);
  EXPECT_EQ(t.num_simplices(), 40u);
  EXPECT_NEAR(t.total_volume(), 20.0, 1e-12);
  EXPECT_TRUE(validate(t).ok());
}

TEST(Json, RoundTrip)
{
  std::mt19937_64 rng(8);
  const auto t = cpwl::testing::random_delaunay(25, rng);
  EXPECT_EQ(from_json(to_json(t)), t);
  EXPECT_EQ(parse_triangulation(to_json(t).dump()), t);

  const auto path = std::filesystem::temp_directory_path() / "cpwl_roundtrip.json";
  save_triangulation(t, path);
  EXPECT_EQ(load_triangulation(path), t);
  std::filesystem::remove(path);
}

TEST(Json, ErrorsNameTheField)
{
  const auto message = [](const std::string& text) {
    try {
      parse_triangulation(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(R"({"dimension": 1, "vertices": [[0],[1]], "simplices": [[0, 5]]})").find("simplices[0]"),
            std::string::npos);
  EXPECT_NE(message(R"({"dimension": 2, "vertices": [[0,0],[1]], "simplices": []})").find("vertices[1]"),
            std::string::npos);
  EXPECT_NE(message(R"({"dimension": 1, "vertices": [[0],[1]]})").find("simplices"), std::string::npos);
  EXPECT_NE(message("{\"dimension\": 1,\n \"vertices\": [[0],[1]],\n oops}").find("line 3"), std::string::npos);
  EXPECT_NE(message(R"({"dimension": 1, "vertices": [[0],[0]], "simplices": [[0, 1]]})").find("triangulation"),
            std::string::npos);
  EXPECT_THROW(load_triangulation("/nonexistent/file.json"), ParseError);
}

TEST(Json, FixtureLoads)
{
  const auto t = load_triangulation(std::filesystem::path(CPWL_FIXTURE_DIR) / "chain1d.json");
  EXPECT_EQ(t, chain3());
}

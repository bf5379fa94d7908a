#pragma once

#include "cpwl/errors.hpp"
#include "cpwl/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cpwl {

/// Simplex found by point location, with the query's barycentric coordinates in it.
struct Location
{
  std::size_t simplex_id = 0;
  BarycentricCoords coords;
};

/// A full simplicial triangulation of a finite vertex set.
///
/// Immutable after construction. Every vertex belongs to at least one
/// simplex and every simplex is nondegenerate.
class Triangulation
{
public:
  Triangulation() = default;

  /// Validates indices and geometry, caches volumes, bounding boxes and stars.
  static Triangulation build(std::vector<Point> vertices,
                             const std::vector<std::vector<std::size_t>>& simplices)
  {
    if (vertices.empty())
      throw InvalidArgument("triangulation has no vertices");
    if (simplices.empty())
      throw InvalidArgument("triangulation has no simplices");
    const auto d = static_cast<std::size_t>(vertices.front().size());
    if (d == 0)
      throw DimensionMismatch("vertices must have dimension >= 1");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (static_cast<std::size_t>(vertices[i].size()) != d)
        throw DimensionMismatch("vertex " + std::to_string(i) + " has dimension " +
                                std::to_string(vertices[i].size()) + ", expected " +
                                std::to_string(d));
      if (!vertices[i].allFinite())
        throw InvalidArgument("vertex " + std::to_string(i) + " has non-finite coordinates");
    }

    Triangulation t;
    t.dimension_ = d;
    t.vertices_ = std::move(vertices);
    t.stars_.resize(t.vertices_.size());
    t.simplices_.reserve(simplices.size());

    for (std::size_t s = 0; s < simplices.size(); ++s) {
      const auto& ids = simplices[s];
      const std::string name = "simplex " + std::to_string(s);
      if (ids.size() != d + 1)
        throw InvalidArgument(name + " has " + std::to_string(ids.size()) +
                              " vertices, expected " + std::to_string(d + 1));
      for (auto id : ids)
        if (id >= t.vertices_.size())
          throw InvalidArgument(name + " references vertex " + std::to_string(id) +
                                " but only " + std::to_string(t.vertices_.size()) +
                                " vertices exist");
      if (std::set<std::size_t>(ids.begin(), ids.end()).size() != ids.size())
        throw InvalidArgument(name + " repeats a vertex");

      Simplex simplex{ids, 0.0};
      const auto pts = t.gather(ids);
      if (is_degenerate(pts))
        throw DegenerateSimplex(name + " is degenerate");
      simplex.volume = simplex_volume(pts);

      Point lo = pts.front();
      Point hi = pts.front();
      for (const auto& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
      }
      t.box_lo_.push_back(std::move(lo));
      t.box_hi_.push_back(std::move(hi));

      for (auto id : ids)
        t.stars_[id].push_back(s);
      t.simplices_.push_back(std::move(simplex));
    }

    for (std::size_t v = 0; v < t.stars_.size(); ++v)
      if (t.stars_[v].empty())
        throw InvalidArgument("vertex " + std::to_string(v) +
                              " belongs to no simplex (triangulation must be full)");
    return t;
  }

  std::size_t dimension() const { return dimension_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_simplices() const { return simplices_.size(); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& vertex(std::size_t id) const { return vertices_.at(id); }
  const std::vector<Simplex>& simplices() const { return simplices_; }
  const Simplex& simplex(std::size_t id) const { return simplices_.at(id); }

  /// Ids of the simplices incident to a vertex.
  const std::vector<std::size_t>& star_simplices(std::size_t vertex_id) const
  {
    if (vertex_id >= stars_.size())
      throw InvalidArgument("vertex id " + std::to_string(vertex_id) + " out of range");
    return stars_[vertex_id];
  }

  std::vector<Point> simplex_points(std::size_t simplex_id) const
  {
    return gather(simplices_.at(simplex_id).vertex_ids);
  }

  double total_volume() const
  {
    double v = 0.0;
    for (const auto& s : simplices_)
      v += s.volume;
    return v;
  }

  /// Point location by linear scan with bounding-box pruning. Returns the
  /// first simplex whose barycentric coordinates are all >= -tol.
  std::optional<Location> locate(const Point& x, double tol = kInsideTolerance) const
  {
    if (static_cast<std::size_t>(x.size()) != dimension_)
      throw DimensionMismatch("query point dimension differs from triangulation");
    for (std::size_t s = 0; s < simplices_.size(); ++s) {
      if (!in_box(s, x, tol))
        continue;
      auto bc = barycentric(simplex_points(s), x);
      if (bc.inside(tol))
        return Location{s, std::move(bc)};
    }
    return std::nullopt;
  }

  bool boxes_overlap(std::size_t a, std::size_t b, double tol = kInsideTolerance) const
  {
    for (std::size_t k = 0; k < dimension_; ++k) {
      const auto i = static_cast<Eigen::Index>(k);
      const double pad = tol * std::max(1.0, std::abs(box_hi_[a](i)) + std::abs(box_hi_[b](i)));
      if (box_hi_[a](i) + pad < box_lo_[b](i) || box_hi_[b](i) + pad < box_lo_[a](i))
        return false;
    }
    return true;
  }

  bool operator==(const Triangulation& o) const
  {
    if (dimension_ != o.dimension_ || vertices_.size() != o.vertices_.size() ||
        simplices_.size() != o.simplices_.size())
      return false;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      if (vertices_[i] != o.vertices_[i])
        return false;
    for (std::size_t s = 0; s < simplices_.size(); ++s)
      if (simplices_[s].vertex_ids != o.simplices_[s].vertex_ids)
        return false;
    return true;
  }

private:
  std::vector<Point> gather(const std::vector<std::size_t>& ids) const
  {
    std::vector<Point> pts;
    pts.reserve(ids.size());
    for (auto id : ids)
      pts.push_back(vertices_[id]);
    return pts;
  }

  bool in_box(std::size_t s, const Point& x, double tol) const
  {
    for (std::size_t k = 0; k < dimension_; ++k) {
      const auto i = static_cast<Eigen::Index>(k);
      const double pad = tol * std::max(1.0, std::abs(x(i)));
      if (x(i) < box_lo_[s](i) - pad || x(i) > box_hi_[s](i) + pad)
        return false;
    }
    return true;
  }

  std::size_t dimension_ = 0;
  std::vector<Point> vertices_;
  std::vector<Simplex> simplices_;
  std::vector<std::vector<std::size_t>> stars_;
  std::vector<Point> box_lo_;
  std::vector<Point> box_hi_;
};

// ---------------------------------------------------------------------------
// Stars

struct Star
{
  std::size_t vertex_id = 0;
  std::vector<std::size_t> simplex_ids;
  double volume = 0.0;
  std::size_t cardinality = 0;
};

inline Star star(const Triangulation& t, std::size_t vertex_id)
{
  Star st;
  st.vertex_id = vertex_id;
  st.simplex_ids = t.star_simplices(vertex_id);
  for (auto s : st.simplex_ids)
    st.volume += t.simplex(s).volume;
  st.cardinality = st.simplex_ids.size();
  return st;
}

inline std::vector<double> star_volumes(const Triangulation& t)
{
  std::vector<double> out(t.num_vertices());
  for (std::size_t v = 0; v < out.size(); ++v)
    out[v] = star(t, v).volume;
  return out;
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport
{
  bool union_ok = true;
  /// False when the union property could not be checked (d > 2).
  bool union_checked = false;
  bool intersection_ok = true;
  std::vector<std::pair<std::size_t, std::size_t>> offending_pairs;

  bool ok() const { return union_ok && intersection_ok; }
};

namespace detail {

inline double cross2(const Point& o, const Point& a, const Point& b)
{
  return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
}

/// Andrew's monotone chain; returns hull vertex indices in counter-clockwise order.
inline std::vector<std::size_t> convex_hull_2d(std::span<const Point> pts)
{
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return pts[a](0) < pts[b](0) || (pts[a](0) == pts[b](0) && pts[a](1) < pts[b](1));
  });
  if (idx.size() < 3)
    return idx;
  std::vector<std::size_t> hull(2 * idx.size());
  std::size_t k = 0;
  for (auto i : idx) {
    while (k >= 2 && cross2(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= 0.0)
      --k;
    hull[k++] = i;
  }
  for (std::size_t j = idx.size() - 1, lower = k + 1; j-- > 0;) {
    const auto i = idx[j];
    while (k >= lower && cross2(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= 0.0)
      --k;
    hull[k++] = i;
  }
  hull.resize(k - 1);
  return hull;
}

inline double polygon_area(std::span<const Point> pts, const std::vector<std::size_t>& ring)
{
  double a = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const auto& p = pts[ring[i]];
    const auto& q = pts[ring[(i + 1) % ring.size()]];
    a += p(0) * q(1) - q(0) * p(1);
  }
  return 0.5 * std::abs(a);
}

inline double hull_volume(const Triangulation& t)
{
  const auto& vs = t.vertices();
  if (t.dimension() == 1) {
    double lo = vs.front()(0), hi = vs.front()(0);
    for (const auto& v : vs) {
      lo = std::min(lo, v(0));
      hi = std::max(hi, v(0));
    }
    return hi - lo;
  }
  return polygon_area(vs, convex_hull_2d(vs));
}

/// Uniform random point of a simplex via normalized exponential spacings.
template <class Rng>
Point sample_simplex(std::span<const Point> pts, Rng& rng)
{
  std::exponential_distribution<double> exp1(1.0);
  Point x = Point::Zero(pts.front().size());
  double total = 0.0;
  for (const auto& p : pts) {
    const double w = exp1(rng);
    x += w * p;
    total += w;
  }
  return x / total;
}

} // namespace detail

/// Checks the union and intersection properties.
///
/// Intersection is a sampled test: for every pair of simplices with
/// overlapping bounding boxes, neither may contain a vertex, the centroid or
/// any of `samples_per_pair` random interior points of the other strictly in
/// its interior. The union check compares total simplex volume to the hull
/// volume and is only available for d <= 2.
inline ValidationReport validate(const Triangulation& t,
                                 std::uint64_t seed = 0x9e3779b97f4a7c15ULL,
                                 int samples_per_pair = 16)
{
  ValidationReport report;
  std::mt19937_64 rng(seed);

  const auto overlaps = [&](const std::vector<Point>& host, const std::vector<Point>& guest,
                            const std::vector<std::size_t>& host_ids,
                            const std::vector<std::size_t>& guest_ids) {
    for (std::size_t k = 0; k < guest.size(); ++k) {
      if (std::find(host_ids.begin(), host_ids.end(), guest_ids[k]) != host_ids.end())
        continue;
      if (barycentric(host, guest[k]).strictly_inside())
        return true;
    }
    if (barycentric(host, centroid(guest)).strictly_inside())
      return true;
    for (int i = 0; i < samples_per_pair; ++i)
      if (barycentric(host, detail::sample_simplex<std::mt19937_64>(guest, rng)).strictly_inside())
        return true;
    return false;
  };

  for (std::size_t a = 0; a < t.num_simplices(); ++a) {
    const auto pa = t.simplex_points(a);
    const auto& ia = t.simplex(a).vertex_ids;
    for (std::size_t b = a + 1; b < t.num_simplices(); ++b) {
      if (!t.boxes_overlap(a, b))
        continue;
      const auto pb = t.simplex_points(b);
      const auto& ib = t.simplex(b).vertex_ids;
      if (overlaps(pa, pb, ia, ib) || overlaps(pb, pa, ib, ia))
        report.offending_pairs.emplace_back(a, b);
    }
  }
  report.intersection_ok = report.offending_pairs.empty();

  if (t.dimension() <= 2) {
    report.union_checked = true;
    const double hull = detail::hull_volume(t);
    report.union_ok = std::abs(t.total_volume() - hull) <= 1e-9 * std::max(hull, 1e-300);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Kuhn / Freudenthal triangulation

/// Integer box of lattice sites lo[i] <= x_i <= hi[i].
struct IntegerBox
{
  std::vector<long> lo;
  std::vector<long> hi;

  static IntegerBox cube(std::size_t d, long n) { return {std::vector<long>(d, 0), std::vector<long>(d, n)}; }
};

/// Splits each unit cell of the box into d! simplices, one per permutation
/// sigma, with vertices v_k = v_0 + e_sigma(1) + ... + e_sigma(k). Simplices are
/// emitted in lexicographic (cell origin, permutation) order.
inline Triangulation kuhn_triangulation(std::size_t d, const IntegerBox& box)
{
  if (d == 0)
    throw InvalidArgument("kuhn_triangulation: dimension must be >= 1");
  if (box.lo.size() != d || box.hi.size() != d)
    throw DimensionMismatch("kuhn_triangulation: box dimension differs from d");
  std::vector<long> sites(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (box.hi[i] <= box.lo[i])
      throw InvalidArgument("kuhn_triangulation: empty extent along axis " + std::to_string(i));
    sites[i] = box.hi[i] - box.lo[i] + 1;
  }

  // Site index: first axis most significant.
  const auto site_id = [&](const std::vector<long>& offset) {
    std::size_t id = 0;
    for (std::size_t i = 0; i < d; ++i)
      id = id * static_cast<std::size_t>(sites[i]) + static_cast<std::size_t>(offset[i]);
    return id;
  };

  std::size_t n_sites = 1;
  for (auto s : sites)
    n_sites *= static_cast<std::size_t>(s);
  std::vector<Point> vertices(n_sites);
  {
    std::vector<long> off(d, 0);
    for (std::size_t id = 0; id < n_sites; ++id) {
      Point p(static_cast<Eigen::Index>(d));
      for (std::size_t i = 0; i < d; ++i)
        p(static_cast<Eigen::Index>(i)) = static_cast<double>(box.lo[i] + off[i]);
      vertices[site_id(off)] = p;
      for (std::size_t i = d; i-- > 0;) {
        if (++off[i] < sites[i])
          break;
        off[i] = 0;
      }
    }
  }

  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> perms;
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<std::vector<std::size_t>> simplices;
  std::vector<long> cell(d, 0);
  for (bool more = true; more;) {
    for (const auto& sigma : perms) {
      std::vector<std::size_t> ids;
      ids.reserve(d + 1);
      auto v = cell;
      ids.push_back(site_id(v));
      for (std::size_t k = 0; k < d; ++k) {
        ++v[sigma[k]];
        ids.push_back(site_id(v));
      }
      simplices.push_back(std::move(ids));
    }
    more = false;
    for (std::size_t i = d; i-- > 0;) {
      if (++cell[i] < sites[i] - 1) {
        more = true;
        break;
      }
      cell[i] = 0;
    }
  }
  return Triangulation::build(std::move(vertices), simplices);
}

inline Triangulation kuhn_triangulation(std::size_t d, long cells_per_axis)
{
  return kuhn_triangulation(d, IntegerBox::cube(d, cells_per_axis));
}

// ---------------------------------------------------------------------------
// 2-D Delaunay triangulation

namespace detail {

/// Positive when d lies strictly inside the circumcircle of the CCW triangle abc.
inline long double incircle(const Point& a, const Point& b, const Point& c, const Point& d)
{
  const long double adx = a(0) - d(0), ady = a(1) - d(1);
  const long double bdx = b(0) - d(0), bdy = b(1) - d(1);
  const long double cdx = c(0) - d(0), cdy = c(1) - d(1);
  const long double ad = adx * adx + ady * ady;
  const long double bd = bdx * bdx + bdy * bdy;
  const long double cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

inline long double orient(const Point& a, const Point& b, const Point& c)
{
  return static_cast<long double>(b(0) - a(0)) * (c(1) - a(1)) -
         static_cast<long double>(b(1) - a(1)) * (c(0) - a(0));
}

using Tri = std::array<std::size_t, 3>;

inline std::map<std::pair<std::size_t, std::size_t>, int> directed_edge_owner(const std::vector<Tri>& tris)
{
  std::map<std::pair<std::size_t, std::size_t>, int> owner;
  for (std::size_t i = 0; i < tris.size(); ++i)
    for (int e = 0; e < 3; ++e)
      owner[{tris[i][e], tris[i][(e + 1) % 3]}] = static_cast<int>(i);
  return owner;
}

/// Adds ears along the boundary until the triangulated region is convex.
inline void fill_hull_pockets(const std::vector<Point>& pts, std::vector<Tri>& tris, double area_eps)
{
  for (bool changed = true; changed;) {
    changed = false;
    const auto owner = directed_edge_owner(tris);
    // Boundary edges are directed edges without a reverse twin; next[a] = b.
    std::map<std::size_t, std::size_t> next;
    for (const auto& [edge, tri] : owner)
      if (!owner.count({edge.second, edge.first}))
        next[edge.first] = edge.second;
    for (const auto& [a, b] : next) {
      const auto c = next.at(b);
      if (c == a || orient(pts[a], pts[b], pts[c]) >= -area_eps)
        continue;
      // Reflex boundary vertex b: the ear (a, c, b) must not contain another site.
      bool blocked = false;
      for (std::size_t p = 0; p < pts.size() && !blocked; ++p) {
        if (p == a || p == b || p == c)
          continue;
        blocked = orient(pts[a], pts[c], pts[p]) > area_eps && orient(pts[c], pts[b], pts[p]) > area_eps &&
                  orient(pts[b], pts[a], pts[p]) > area_eps;
      }
      if (blocked)
        continue;
      tris.push_back({a, c, b});
      changed = true;
      break;
    }
  }
}

/// Lawson edge flips until every interior edge is locally Delaunay.
inline void legalize(const std::vector<Point>& pts, std::vector<Tri>& tris, long double circle_eps)
{
  for (bool flipped = true; flipped;) {
    flipped = false;
    const auto owner = directed_edge_owner(tris);
    for (const auto& [edge, t1] : owner) {
      const auto twin = owner.find({edge.second, edge.first});
      if (twin == owner.end())
        continue;
      const int t2 = twin->second;
      const auto a = edge.first, b = edge.second;
      const auto apex = [&](int t) {
        for (auto v : tris[static_cast<std::size_t>(t)])
          if (v != a && v != b)
            return v;
        return a;
      };
      const auto c = apex(t1); // triangle (a, b, c) is CCW
      const auto d = apex(t2);
      if (incircle(pts[a], pts[b], pts[c], pts[d]) <= circle_eps)
        continue;
      tris[static_cast<std::size_t>(t1)] = {a, d, c};
      tris[static_cast<std::size_t>(t2)] = {d, b, c};
      flipped = true;
      break;
    }
  }
}

} // namespace detail

/// Bowyer-Watson incremental Delaunay triangulation of planar points.
///
/// Cocircular ties are resolved by insertion order. Boundary pockets left by
/// the finite super-triangle are filled and re-legalized with Lawson flips.
inline Triangulation delaunay_2d(std::span<const Point> points)
{
  using detail::Tri;
  if (points.size() < 3)
    throw InvalidArgument("delaunay_2d: need at least 3 points");
  for (const auto& p : points)
    if (p.size() != 2)
      throw DimensionMismatch("delaunay_2d: points must be 2-D");

  Eigen::Vector2d lo = points.front(), hi = points.front();
  for (const auto& p : points) {
    lo = lo.cwiseMin(Eigen::Vector2d(p));
    hi = hi.cwiseMax(Eigen::Vector2d(p));
  }
  const double extent = std::max((hi - lo).maxCoeff(), 1e-300);
  const double area_eps = 1e-12 * extent * extent;

  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if ((points[i] - points[j]).norm() <= 1e-12 * extent)
        throw InvalidArgument("delaunay_2d: duplicate points " + std::to_string(i) + " and " +
                              std::to_string(j));
  {
    bool collinear = true;
    for (std::size_t k = 2; k < points.size() && collinear; ++k)
      collinear = std::abs(detail::orient(points[0], points[1], points[k])) <= area_eps;
    if (collinear)
      throw InvalidArgument("delaunay_2d: all points are collinear");
  }

  const std::size_t n = points.size();
  std::vector<Point> pts(points.begin(), points.end());
  const Eigen::Vector2d mid = 0.5 * (lo + hi);
  const double m = 64.0 * extent;
  pts.push_back(Point(Eigen::Vector2d(mid(0) - 2.0 * m, mid(1) - m)));
  pts.push_back(Point(Eigen::Vector2d(mid(0) + 2.0 * m, mid(1) - m)));
  pts.push_back(Point(Eigen::Vector2d(mid(0), mid(1) + 2.0 * m)));

  std::vector<Tri> tris{{n, n + 1, n + 2}};
  for (std::size_t p = 0; p < n; ++p) {
    std::vector<Tri> keep;
    std::map<std::pair<std::size_t, std::size_t>, int> cavity_edges;
    for (const auto& tri : tris) {
      if (detail::incircle(pts[tri[0]], pts[tri[1]], pts[tri[2]], pts[p]) > 0.0L) {
        for (int e = 0; e < 3; ++e)
          cavity_edges[{tri[e], tri[(e + 1) % 3]}]++;
      } else {
        keep.push_back(tri);
      }
    }
    for (const auto& [edge, count] : cavity_edges)
      if (!cavity_edges.count({edge.second, edge.first}))
        keep.push_back({edge.first, edge.second, p});
    tris = std::move(keep);
  }

  std::erase_if(tris, [&](const Tri& t) { return t[0] >= n || t[1] >= n || t[2] >= n; });
  pts.resize(n);
  detail::fill_hull_pockets(pts, tris, area_eps);
  detail::legalize(pts, tris, static_cast<long double>(1e-12) * extent * extent * extent * extent);

  std::vector<std::vector<std::size_t>> simplices;
  simplices.reserve(tris.size());
  for (const auto& t : tris)
    simplices.push_back({t[0], t[1], t[2]});
  return Triangulation::build(std::move(pts), simplices);
}

/// Empty-circumcircle check: no vertex lies inside any triangle's circumcircle
/// by more than `rel_tol` relative to the squared radius.
inline bool is_delaunay(const Triangulation& t, double rel_tol = 1e-9)
{
  if (t.dimension() != 2)
    throw DimensionMismatch("is_delaunay: only 2-D triangulations are supported");
  for (std::size_t s = 0; s < t.num_simplices(); ++s) {
    const auto p = t.simplex_points(s);
    const Eigen::Vector2d a = p[0], b = p[1], c = p[2];
    const double det = 2.0 * ((b - a)(0) * (c - a)(1) - (b - a)(1) * (c - a)(0));
    const double b2 = (b - a).squaredNorm(), c2 = (c - a).squaredNorm();
    const Eigen::Vector2d center =
        a + Eigen::Vector2d((c - a)(1) * b2 - (b - a)(1) * c2, (b - a)(0) * c2 - (c - a)(0) * b2) / det;
    const double r2 = (a - center).squaredNorm();
    for (const auto& v : t.vertices())
      if ((Eigen::Vector2d(v) - center).squaredNorm() < r2 * (1.0 - rel_tol))
        return false;
  }
  return true;
}

} // namespace cpwl

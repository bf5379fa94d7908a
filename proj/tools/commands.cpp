#include "commands.hpp"

#include "cpwl/boxspline.hpp"
#include "cpwl/cpwl.hpp"
#include "cpwl/nonlocal.hpp"
#include "cpwl/riesz.hpp"
#include "cpwl/triangulation.hpp"
#include "cpwl/triangulation_io.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <charconv>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cpwl::cli {

namespace {

using nlohmann::json;

/// Thrown for anything the user has to fix (exit code 2).
class InputError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class Format
{
  Table,
  Json,
  Csv
};

/// Shortest round-trip decimal, independent of the global locale.
std::string num(double x)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw InputError("cannot write " + path);
  out << text;
  if (!out)
    throw InputError("write failed for " + path);
}

template <class F>
double time_ms(F&& f)
{
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

// Two-column "key  value" table for human consumption.
class Table
{
public:
  void row(std::string key, std::string value) { rows_.emplace_back(std::move(key), std::move(value)); }

  void print(std::ostream& os) const
  {
    std::size_t w = 0;
    for (const auto& r : rows_)
      w = std::max(w, r.first.size());
    for (const auto& [k, v] : rows_)
      os << std::left << std::setw(static_cast<int>(w) + 2) << k << v << '\n';
  }

private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

std::string fixed(double x, int digits = 6)
{
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(digits) << x;
  return os.str();
}

json report_json(const RieszReport& r)
{
  json j{{"method", std::string(to_string(r.method))}, {"A", r.lower}, {"B", r.upper}, {"r", r.condition}};
  if (r.star_volume_inf)
    j["star_volume_inf"] = *r.star_volume_inf;
  if (r.star_volume_sup)
    j["star_volume_sup"] = *r.star_volume_sup;
  if (r.lambda_min)
    j["lambda_min"] = *r.lambda_min;
  if (r.lambda_max)
    j["lambda_max"] = *r.lambda_max;
  return j;
}

std::string opt_num(const std::optional<double>& x) { return x ? num(*x) : std::string(); }

// ---------------------------------------------------------------------------
// riesz

struct RieszArgs
{
  std::string path;
  std::string method = "gram";
  std::string gram_csv;
  int samples = 0;
  std::uint64_t seed = 1;
  bool timings = false;
};

int cmd_riesz(const RieszArgs& a, Format fmt, std::ostream& out)
{
  const std::string text = read_file(a.path);
  const std::string digest = sha256_hex(text);
  Triangulation t;
  try {
    t = parse_triangulation(text);
  } catch (const Error& e) {
    throw InputError(a.path + ": " + e.what());
  }
  if (a.samples < 0)
    throw InputError("--samples must be non-negative");
  const auto check = validate(t, a.seed);
  if (!check.intersection_ok) {
    const auto [p, q] = check.offending_pairs.front();
    throw InputError(a.path + ": simplices " + std::to_string(p) + " and " + std::to_string(q) +
                     " violate the face-intersection property");
  }
  if (!check.union_ok)
    throw InputError(a.path + ": simplices do not cover the convex hull of the vertices");

  const bool want_gram = a.method == "gram" || a.method == "both";
  const bool want_star = a.method == "star" || a.method == "both";

  std::vector<RieszReport> reports;
  std::optional<GramMatrix> gram;
  json timings = json::object();
  if (want_gram) {
    timings["gram_ms"] = time_ms([&] {
      gram = gram_matrix(t);
      reports.push_back(gram_eigen_bounds(*gram));
    });
  }
  if (want_star)
    timings["star_ms"] = time_ms([&] { reports.push_back(star_volume_bounds(t)); });

  std::optional<bool> contained;
  if (want_gram && want_star) {
    const auto& g = reports[0];
    const auto& s = reports[1];
    contained = s.contains(g, 1e-12 * s.upper);
  }

  std::optional<SamplingResult> sampling;
  if (a.samples > 0) {
    const auto& target = reports.front();
    timings["sampling_ms"] = time_ms([&] { sampling = verify_bounds_by_sampling(t, target, a.samples, a.seed); });
  }

  if (!a.gram_csv.empty()) {
    if (!gram)
      gram = gram_matrix(t);
    std::string csv;
    const Eigen::MatrixXd m = gram->normalized();
    for (Eigen::Index q = 0; q < m.cols(); ++q)
      csv += (q ? "," : "") + std::string("v") + std::to_string(q);
    csv += '\n';
    for (Eigen::Index p = 0; p < m.rows(); ++p) {
      for (Eigen::Index q = 0; q < m.cols(); ++q)
        csv += (q ? "," : "") + num(m(p, q));
      csv += '\n';
    }
    write_file(a.gram_csv, csv);
  }

  switch (fmt) {
  case Format::Json: {
    json j{{"command", "riesz"},
           {"input", {{"path", a.path}, {"sha256", digest}}},
           {"seed", a.seed},
           {"triangulation",
            {{"dimension", t.dimension()}, {"vertices", t.num_vertices()}, {"simplices", t.num_simplices()}}}};
    j["reports"] = json::array();
    for (const auto& r : reports)
      j["reports"].push_back(report_json(r));
    if (contained)
      j["star_contains_gram"] = *contained;
    if (sampling)
      j["sampling"] = {{"trials", sampling->trials},
                       {"min_ratio", sampling->min_ratio},
                       {"max_ratio", sampling->max_ratio},
                       {"within_bounds", sampling->within_bounds}};
    if (a.timings)
      j["timings"] = timings;
    out << j.dump(2) << '\n';
    break;
  }
  case Format::Csv:
    out << "method,A,B,r,star_volume_inf,star_volume_sup,lambda_min,lambda_max,sha256,seed\n";
    for (const auto& r : reports)
      out << to_string(r.method) << ',' << num(r.lower) << ',' << num(r.upper) << ',' << num(r.condition) << ','
          << opt_num(r.star_volume_inf) << ',' << opt_num(r.star_volume_sup) << ',' << opt_num(r.lambda_min) << ','
          << opt_num(r.lambda_max) << ',' << digest << ',' << a.seed << '\n';
    break;
  case Format::Table: {
    Table tab;
    tab.row("input", a.path);
    tab.row("sha256", digest);
    tab.row("seed", std::to_string(a.seed));
    tab.row("dimension", std::to_string(t.dimension()));
    tab.row("vertices", std::to_string(t.num_vertices()));
    tab.row("simplices", std::to_string(t.num_simplices()));
    for (const auto& r : reports) {
      const std::string m(to_string(r.method));
      tab.row(m + " A", fixed(r.lower));
      tab.row(m + " B", fixed(r.upper));
      tab.row(m + " r", fixed(r.condition));
      if (r.star_volume_inf) {
        tab.row(m + " V_inf", fixed(*r.star_volume_inf));
        tab.row(m + " V_sup", fixed(*r.star_volume_sup));
      }
    }
    if (contained)
      tab.row("star contains gram", *contained ? "yes" : "NO");
    if (sampling) {
      tab.row("samples", std::to_string(sampling->trials));
      tab.row("sampled ratio min", fixed(sampling->min_ratio));
      tab.row("sampled ratio max", fixed(sampling->max_ratio));
      tab.row("within bounds", sampling->within_bounds ? "yes" : "NO");
    }
    if (a.timings)
      for (const auto& [k, v] : timings.items())
        tab.row(k, fixed(v.get<double>(), 4));
    tab.print(out);
    break;
  }
  }

  if (contained && !*contained)
    throw Error("star-volume bounds do not contain the Gram bounds");
  if (sampling && !sampling->within_bounds)
    throw Error("sampled synthesis ratios fall outside the reported bounds");
  return kOk;
}

// ---------------------------------------------------------------------------
// boxspline

struct BoxArgs
{
  std::size_t dim = 0;
  std::string xi;
  std::size_t sweep = 0;
  std::string ghat_csv;
  bool timings = false;
};

/// Parses "a,b;c,d" (rows separated by ';') into a square matrix.
Eigen::MatrixXd parse_matrix(const std::string& text, std::size_t d)
{
  std::vector<std::vector<double>> rows;
  std::stringstream rs(text);
  std::string row;
  while (std::getline(rs, row, ';')) {
    std::vector<double> vals;
    std::stringstream cs(row);
    std::string cell;
    while (std::getline(cs, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      if (b == std::string::npos)
        throw InputError("--xi: empty entry");
      const auto s = cell.substr(b, e - b + 1);
      double v = 0.0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw InputError("--xi: cannot parse '" + s + "' as a number");
      vals.push_back(v);
    }
    rows.push_back(std::move(vals));
  }
  if (rows.size() != d)
    throw InputError("--xi: expected " + std::to_string(d) + " rows, got " + std::to_string(rows.size()));
  Eigen::MatrixXd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    if (rows[i].size() != d)
      throw InputError("--xi: row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                       " entries, expected " + std::to_string(d));
    for (std::size_t j = 0; j < d; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

int cmd_boxspline(const BoxArgs& a, Format fmt, std::ostream& out)
{
  if (a.dim == 0)
    throw InputError("--dim must be >= 1");
  if (a.sweep == 1)
    throw InputError("--sweep needs at least 2 points per axis");
  if (a.sweep > 0 && a.dim > kMaxSweepDimension)
    throw InputError("--sweep is only supported for dimension <= " + std::to_string(kMaxSweepDimension));
  if (!a.ghat_csv.empty() && a.sweep == 0)
    throw InputError("--ghat-csv requires --sweep");

  BoxSplineSpec spec;
  try {
    spec = a.xi.empty() ? BoxSplineSpec::cartesian(a.dim) : BoxSplineSpec::make(parse_matrix(a.xi, a.dim));
  } catch (const Error& e) {
    throw InputError(std::string("--xi: ") + e.what());
  }

  std::string canonical = "boxspline;dim=" + std::to_string(a.dim) + ";xi=";
  for (Eigen::Index i = 0; i < spec.generators().size(); ++i)
    canonical += num(spec.generators().data()[i]) + ",";
  canonical += ";sweep=" + std::to_string(a.sweep);
  const auto digest = sha256_hex(canonical);

  LatticeRieszResult res;
  const double ms = time_ms([&] { res = lattice_riesz_bounds(spec, std::max<std::size_t>(a.sweep, 2)); });
  if (a.sweep == 0)
    res.sweep.reset();

  if (!a.ghat_csv.empty()) {
    const auto table = autocorrelation_table(spec);
    std::string csv;
    for (std::size_t i = 0; i < a.dim; ++i)
      csv += "omega_" + std::to_string(i + 1) + ",";
    csv += "ghat\n";
    for_each_grid_omega(a.dim, a.sweep, [&](const Eigen::VectorXd& w) {
      for (Eigen::Index i = 0; i < w.size(); ++i)
        csv += num(w(i)) + ",";
      csv += num(g_hat(table, w)) + "\n";
    });
    write_file(a.ghat_csv, csv);
  }

  const auto& r = res.analytic;
  switch (fmt) {
  case Format::Json: {
    json j{{"command", "boxspline"},
           {"input", {{"dimension", a.dim}, {"det_abs", spec.det_abs()}, {"sha256", digest}}},
           {"seed", nullptr},
           {"analytic", report_json(r)},
           {"ghat_at_omega0", res.g_at_omega0}};
    if (res.sweep)
      j["sweep"] = {{"points_per_axis", res.sweep->points_per_axis},
                    {"min", res.sweep->min_value},
                    {"max", res.sweep->max_value},
                    {"mean", res.sweep->mean_value},
                    {"consistent", res.sweep_consistent}};
    if (a.timings)
      j["timings"] = {{"total_ms", ms}};
    out << j.dump(2) << '\n';
    break;
  }
  case Format::Csv:
    out << "dimension,det_abs,A,B,r,ghat_omega0,sweep_points,sweep_min,sweep_max,sweep_mean,sha256\n";
    out << a.dim << ',' << num(spec.det_abs()) << ',' << num(r.lower) << ',' << num(r.upper) << ','
        << num(r.condition) << ',' << num(res.g_at_omega0) << ',';
    if (res.sweep)
      out << res.sweep->points_per_axis << ',' << num(res.sweep->min_value) << ',' << num(res.sweep->max_value)
          << ',' << num(res.sweep->mean_value);
    else
      out << ",,,";
    out << ',' << digest << '\n';
    break;
  case Format::Table: {
    Table tab;
    tab.row("dimension", std::to_string(a.dim));
    tab.row("|det Xi|", fixed(spec.det_abs()));
    tab.row("sha256", digest);
    tab.row("A", fixed(r.lower));
    tab.row("B", fixed(r.upper));
    tab.row("r", fixed(r.condition));
    tab.row("ghat(omega_0)", fixed(res.g_at_omega0));
    if (res.sweep) {
      tab.row("sweep points/axis", std::to_string(res.sweep->points_per_axis));
      tab.row("sweep min ghat", fixed(res.sweep->min_value, 10));
      tab.row("sweep max ghat", fixed(res.sweep->max_value, 10));
      tab.row("sweep mean ghat", fixed(res.sweep->mean_value, 10));
      tab.row("sweep consistent", res.sweep_consistent ? "yes" : "NO");
    }
    if (a.timings)
      tab.row("total_ms", fixed(ms, 4));
    tab.print(out);
    break;
  }
  }
  if (!res.sweep_consistent)
    throw Error("swept ghat leaves the analytic bounds");
  return kOk;
}

// ---------------------------------------------------------------------------
// nonlocal

struct NonlocalArgs
{
  std::size_t count = 0;
  double h = 1.0;
  bool table = false;
};

struct NonlocalRow
{
  std::size_t count;
  double empirical;
  double bound;
};

int cmd_nonlocal(const NonlocalArgs& a, Format fmt, std::ostream& out)
{
  if (a.count < 2)
    throw InputError("--K must be >= 2");
  if (!(a.h > 0.0) || !std::isfinite(a.h))
    throw InputError("--h must be a positive number");

  std::vector<NonlocalRow> rows;
  for (std::size_t k = a.table ? 2 : a.count; k <= a.count; ++k) {
    const auto m = interpolation_matrix(uniform_knots(k, a.h), a.h);
    rows.push_back({k, empirical_condition(m), nonlocal_condition_lower_bound(k)});
  }
  const double local = local_interpolation_condition(a.count);
  const auto digest =
      sha256_hex("nonlocal;K=" + std::to_string(a.count) + ";h=" + num(a.h) + ";table=" + (a.table ? "1" : "0"));

  switch (fmt) {
  case Format::Json: {
    json j{{"command", "nonlocal"},
           {"input", {{"K", a.count}, {"h", a.h}, {"table", a.table}, {"sha256", digest}}},
           {"seed", nullptr},
           {"local_condition", local}};
    j["rows"] = json::array();
    for (const auto& r : rows)
      j["rows"].push_back({{"K", r.count},
                           {"empirical_condition", r.empirical},
                           {"lower_bound", r.bound},
                           {"ratio", r.empirical / r.bound}});
    out << j.dump(2) << '\n';
    break;
  }
  case Format::Csv:
    out << "K,h,empirical_condition,lower_bound,ratio,local_condition\n";
    for (const auto& r : rows)
      out << r.count << ',' << num(a.h) << ',' << num(r.empirical) << ',' << num(r.bound) << ','
          << num(r.empirical / r.bound) << ',' << num(local) << '\n';
    break;
  case Format::Table:
    out << "sha256 " << digest << '\n';
    out << std::left << std::setw(6) << "K" << std::setw(16) << "cond(M)" << std::setw(16) << "lower bound"
        << std::setw(12) << "ratio" << "local\n";
    for (const auto& r : rows)
      out << std::left << std::setw(6) << r.count << std::setw(16) << fixed(r.empirical, 8) << std::setw(16)
          << fixed(r.bound, 8) << std::setw(12) << fixed(r.empirical / r.bound, 5) << fixed(local) << '\n';
    break;
  }
  for (const auto& r : rows)
    if (r.empirical < r.bound * (1 - 1e-12))
      throw Error("empirical condition number below the lower bound at K = " + std::to_string(r.count));
  return kOk;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs
{
  std::string kind;
  std::size_t dim = 2;
  std::vector<long> extent{1};
  std::string points_file;
  std::size_t random_points = 0;
  std::uint64_t seed = 1;
  std::string out_path;
};

std::vector<Point> read_points_csv(const std::string& path)
{
  std::stringstream in(read_file(path));
  std::vector<Point> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#')
      continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw InputError(path + ":" + std::to_string(lineno) + ": expected 'x,y'");
    double x = 0.0, y = 0.0;
    const auto fx = std::from_chars(line.data(), line.data() + comma, x);
    auto rest = line.substr(comma + 1);
    while (!rest.empty() && (rest.back() == '\r' || rest.back() == ' '))
      rest.pop_back();
    const auto fy = std::from_chars(rest.data(), rest.data() + rest.size(), y);
    if (fx.ec != std::errc() || fy.ec != std::errc() || fy.ptr != rest.data() + rest.size()) {
      if (pts.empty() && lineno == 1)
        continue; // header row
      throw InputError(path + ":" + std::to_string(lineno) + ": cannot parse '" + line + "'");
    }
    Point p(2);
    p << x, y;
    pts.push_back(p);
  }
  return pts;
}

int cmd_generate(const GenerateArgs& a, std::ostream& out)
{
  Triangulation t;
  std::string params;
  if (a.kind == "kuhn") {
    if (a.dim == 0)
      throw InputError("--dim must be >= 1");
    IntegerBox box;
    if (a.extent.size() == 1)
      box = IntegerBox::cube(a.dim, a.extent[0]);
    else if (a.extent.size() == a.dim)
      box = IntegerBox{std::vector<long>(a.dim, 0), a.extent};
    else
      throw InputError("--extent takes 1 or " + std::to_string(a.dim) + " values");
    for (long e : box.hi)
      if (e < 1)
        throw InputError("--extent values must be >= 1");
    t = kuhn_triangulation(a.dim, box);
    params = "kuhn;dim=" + std::to_string(a.dim);
  } else {
    std::vector<Point> pts;
    if (!a.points_file.empty()) {
      pts = read_points_csv(a.points_file);
    } else if (a.random_points > 0) {
      std::mt19937_64 rng(a.seed);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (std::size_t i = 0; i < a.random_points; ++i) {
        Point p(2);
        p(0) = u(rng);
        p(1) = u(rng);
        pts.push_back(p);
      }
    } else {
      throw InputError("delaunay2d needs --points-file or --random");
    }
    try {
      t = delaunay_2d(pts);
    } catch (const InvalidArgument& e) {
      throw InputError(e.what());
    }
    params = "delaunay2d;seed=" + std::to_string(a.seed);
  }

  const auto report = validate(t, a.seed);
  if (!report.ok())
    throw Error("generated triangulation failed validation");
  const auto text = to_json(t).dump(1) + "\n";
  write_file(a.out_path, text);
  out << "wrote " << a.out_path << ": dimension " << t.dimension() << ", " << t.num_vertices() << " vertices, "
      << t.num_simplices() << " simplices, sha256 " << sha256_hex(text) << '\n';
  return kOk;
}

} // namespace

std::string sha256_hex(const std::string& bytes)
{
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 0xf];
  }
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Stability analysis of CPWL hat-basis parametrizations"};
  app.require_subcommand(1);
  bool json_out = false, csv_out = false;
  app.add_flag("--json", json_out, "Machine-readable JSON report");
  app.add_flag("--csv", csv_out, "Machine-readable CSV report");

  RieszArgs ra;
  auto* riesz = app.add_subcommand("riesz", "Riesz bounds of a triangulation file");
  riesz->add_option("file", ra.path, "Triangulation JSON")->required();
  riesz->add_option("--method", ra.method, "gram | star | both")
      ->check(CLI::IsMember({"gram", "star", "both"}))
      ->capture_default_str();
  riesz->add_option("--gram-csv", ra.gram_csv, "Write the raw Gram matrix as CSV");
  riesz->add_option("--samples", ra.samples, "Random coefficient vectors to check against the bounds");
  riesz->add_option("--seed", ra.seed, "RNG seed")->capture_default_str();
  riesz->add_flag("--timings", ra.timings, "Include wall-clock timings");

  BoxArgs ba;
  auto* box = app.add_subcommand("boxspline", "Lattice Riesz bounds of the linear box spline");
  box->add_option("--dim", ba.dim, "Dimension")->required();
  box->add_option("--xi", ba.xi, "Generator matrix, rows separated by ';', e.g. \"1,0;0,1\"");
  box->add_option("--sweep", ba.sweep, "Grid points per axis for the ghat sweep (d <= 3)");
  box->add_option("--ghat-csv", ba.ghat_csv, "Write the swept ghat values as CSV");
  box->add_flag("--timings", ba.timings, "Include wall-clock timings");

  NonlocalArgs na;
  auto* nl = app.add_subcommand("nonlocal", "Conditioning of the nonlocal ReLU interpolation");
  nl->set_help_flag("--help", "Print this help message and exit");
  nl->add_option("--K", na.count, "Number of knots")->required();
  nl->add_option("--h", na.h, "Knot spacing")->capture_default_str();
  nl->add_flag("--table", na.table, "Report every K from 2 up to --K");

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Write a triangulation file");
  gen->add_option("kind", ga.kind, "kuhn | delaunay2d")->required()->check(CLI::IsMember({"kuhn", "delaunay2d"}));
  gen->add_option("out", ga.out_path, "Output path")->required();
  gen->add_option("--dim", ga.dim, "Dimension (kuhn)")->capture_default_str();
  gen->add_option("--extent", ga.extent, "Cells per axis, one value or one per axis (kuhn)")->delimiter(',');
  gen->add_option("--points-file", ga.points_file, "CSV of x,y points (delaunay2d)");
  gen->add_option("--random", ga.random_points, "Number of uniform random points in [0,1]^2 (delaunay2d)");
  gen->add_option("--seed", ga.seed, "RNG seed")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& s : args)
    argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  if (json_out && csv_out) {
    err << "error: --json and --csv are mutually exclusive\n";
    return kInputError;
  }
  const Format fmt = json_out ? Format::Json : csv_out ? Format::Csv : Format::Table;

  try {
    if (riesz->parsed())
      return cmd_riesz(ra, fmt, out);
    if (box->parsed())
      return cmd_boxspline(ba, fmt, out);
    if (nl->parsed())
      return cmd_nonlocal(na, fmt, out);
    return cmd_generate(ga, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "computation failed: " << e.what() << '\n';
    return kComputationFailure;
  }
}

} // namespace cpwl::cli

#pragma once

#include "cpwl/errors.hpp"
#include "cpwl/triangulation.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// Triangulation file format (JSON):
//
//   { "dimension": d,
//     "vertices":  [[x_1, ..., x_d], ...],
//     "simplices": [[i_0, ..., i_d], ...] }
//
// Coordinates are written with round-trip precision, so save/load is bit-exact.

namespace cpwl {

inline nlohmann::json to_json(const Triangulation& t)
{
  nlohmann::json j;
  j["dimension"] = t.dimension();
  auto& vs = j["vertices"] = nlohmann::json::array();
  for (const auto& v : t.vertices())
    vs.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  auto& ss = j["simplices"] = nlohmann::json::array();
  for (const auto& s : t.simplices())
    ss.push_back(s.vertex_ids);
  return j;
}

inline Triangulation from_json(const nlohmann::json& j)
{
  if (!j.is_object())
    throw ParseError("triangulation: top-level value must be an object");
  for (const char* key : {"dimension", "vertices", "simplices"})
    if (!j.contains(key))
      throw ParseError(std::string("triangulation: missing field '") + key + "'");
  if (!j["dimension"].is_number_unsigned() || j["dimension"].get<std::size_t>() == 0)
    throw ParseError("triangulation: 'dimension' must be a positive integer");
  const auto d = j["dimension"].get<std::size_t>();

  const auto& jv = j["vertices"];
  if (!jv.is_array())
    throw ParseError("triangulation: 'vertices' must be an array");
  std::vector<Point> vertices;
  vertices.reserve(jv.size());
  for (std::size_t i = 0; i < jv.size(); ++i) {
    const auto where = "vertices[" + std::to_string(i) + "]";
    if (!jv[i].is_array())
      throw ParseError(where + ": expected an array of coordinates");
    if (jv[i].size() != d)
      throw ParseError(where + ": has " + std::to_string(jv[i].size()) +
                       " coordinates, dimension is " + std::to_string(d));
    Point p(static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; ++k) {
      if (!jv[i][k].is_number())
        throw ParseError(where + "[" + std::to_string(k) + "]: not a number");
      p(static_cast<Eigen::Index>(k)) = jv[i][k].get<double>();
    }
    vertices.push_back(std::move(p));
  }

  const auto& js = j["simplices"];
  if (!js.is_array())
    throw ParseError("triangulation: 'simplices' must be an array");
  std::vector<std::vector<std::size_t>> simplices;
  simplices.reserve(js.size());
  for (std::size_t s = 0; s < js.size(); ++s) {
    const auto where = "simplices[" + std::to_string(s) + "]";
    if (!js[s].is_array() || js[s].size() != d + 1)
      throw ParseError(where + ": expected " + std::to_string(d + 1) + " vertex indices");
    std::vector<std::size_t> ids;
    for (const auto& id : js[s]) {
      if (!id.is_number_unsigned())
        throw ParseError(where + ": indices must be non-negative integers");
      const auto v = id.get<std::size_t>();
      if (v >= vertices.size())
        throw ParseError(where + ": vertex index " + std::to_string(v) + " out of range (" +
                         std::to_string(vertices.size()) + " vertices)");
      ids.push_back(v);
    }
    simplices.push_back(std::move(ids));
  }

  try {
    return Triangulation::build(std::move(vertices), simplices);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("triangulation: ") + e.what());
  }
}

inline Triangulation parse_triangulation(const std::string& text)
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // nlohmann reports "line L, column C" in the message.
    throw ParseError(std::string("triangulation: ") + e.what());
  }
  return from_json(j);
}

inline Triangulation load_triangulation(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_triangulation(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

inline void save_triangulation(const Triangulation& t, const std::filesystem::path& path)
{
  std::ofstream out(path);
  if (!out)
    throw Error("cannot write " + path.string());
  out << to_json(t).dump(1) << '\n';
  if (!out)
    throw Error("write failed: " + path.string());
}

} // namespace cpwl

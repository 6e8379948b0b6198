#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nilspec/charpoly.hpp"
#include "nilspec/error.hpp"
#include "nilspec/family.hpp"
#include "nilspec/isospec.hpp"
#include "nilspec/lattice.hpp"
#include "nilspec/matrix.hpp"
#include "nilspec/nilalg.hpp"

// Document formats:
//   Matrix   {"rows":R,"cols":C,"entries":[row-major reals]}
//            exact readers also accept "p/q" strings as entries
//   Pencil   {"m":6,"k":2,"J":[<Matrix>, ...]}
//   Family   {"a":[1,2,3],"b":[0,1,0]}
//   Lattice  {"k":2,"basis":[[1,0],[0,1]]}, one inner array per generator

namespace nilspec::json_io {

using nlohmann::json;

namespace detail {
inline const json& field(const json& j, const char* key, const char* doc) {
  if (!j.is_object() || !j.contains(key))
    throw InputError(std::string(doc) + " JSON: missing field \"" + key + "\"");
  return j.at(key);
}

inline std::size_t positive_size(const json& j, const char* key, const char* doc) {
  const json& v = field(j, key, doc);
  if (!v.is_number_integer() || v.get<long long>() <= 0)
    throw InputError(std::string(doc) + " JSON: \"" + key + "\" must be a positive integer");
  return v.get<std::size_t>();
}

inline double real(const json& v, const char* doc) {
  if (!v.is_number()) throw InputError(std::string(doc) + " JSON: expected a number");
  return v.get<double>();
}
}  // namespace detail

inline json to_json(const Matrix& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", m.entries()}};
}

inline Matrix matrix_from_json(const json& j) {
  const std::size_t r = detail::positive_size(j, "rows", "Matrix");
  const std::size_t c = detail::positive_size(j, "cols", "Matrix");
  const json& e = detail::field(j, "entries", "Matrix");
  if (!e.is_array()) throw InputError("Matrix JSON: \"entries\" must be an array");
  std::vector<double> entries;
  for (const auto& v : e) {
    if (v.is_string()) {
      entries.push_back(to_double(parse_rational(v.get<std::string>())));
    } else {
      entries.push_back(detail::real(v, "Matrix"));
    }
  }
  if (entries.size() != r * c) throw InputError("Matrix JSON: entries length differs from rows*cols");
  return Matrix(r, c, std::move(entries));
}

/// Exact reader: entries must be integers or "p/q" / decimal strings.
inline RationalMatrix rational_matrix_from_json(const json& j) {
  const std::size_t r = detail::positive_size(j, "rows", "Matrix");
  const std::size_t c = detail::positive_size(j, "cols", "Matrix");
  const json& e = detail::field(j, "entries", "Matrix");
  if (!e.is_array()) throw InputError("Matrix JSON: \"entries\" must be an array");
  std::vector<Rational> entries;
  for (const auto& v : e) {
    if (v.is_string()) {
      entries.push_back(parse_rational(v.get<std::string>()));
    } else if (v.is_number_integer()) {
      entries.emplace_back(v.get<long long>());
    } else {
      throw InputError("exact mode needs integer or \"p/q\" entries, got " + v.dump());
    }
  }
  if (entries.size() != r * c) throw InputError("Matrix JSON: entries length differs from rows*cols");
  return RationalMatrix(r, c, std::move(entries));
}

inline json to_json(const SkewPencil& p) {
  json js = json::array();
  for (const auto& J : p.generators()) js.push_back(to_json(J));
  return json{{"m", p.m()}, {"k", p.k()}, {"J", js}};
}

template <typename T, typename Reader>
BasicSkewPencil<T> pencil_from_json_with(const json& j, Reader read) {
  const std::size_t m = detail::positive_size(j, "m", "Pencil");
  const std::size_t k = detail::positive_size(j, "k", "Pencil");
  const json& js = detail::field(j, "J", "Pencil");
  if (!js.is_array() || js.size() != k) throw InputError("Pencil JSON: \"J\" must hold k matrices");
  std::vector<BasicMatrix<T>> gens;
  for (const auto& mj : js) {
    auto M = read(mj);
    if (M.rows() != m || M.cols() != m) throw InputError("Pencil JSON: generator is not m x m");
    gens.push_back(std::move(M));
  }
  try {
    return BasicSkewPencil<T>(std::move(gens));
  } catch (const ShapeError& e) {
    throw InputError(std::string("Pencil JSON: ") + e.what());
  }
}

inline SkewPencil pencil_from_json(const json& j) {
  return pencil_from_json_with<double>(j, matrix_from_json);
}

inline RationalPencil rational_pencil_from_json(const json& j) {
  return pencil_from_json_with<Rational>(j, rational_matrix_from_json);
}

inline json to_json(const FamilyParams& p) { return json{{"a", p.a}, {"b", p.b}}; }

inline FamilyParams family_from_json(const json& j) {
  FamilyParams p;
  for (const char* key : {"a", "b"}) {
    const json& v = detail::field(j, key, "Family");
    if (!v.is_array() || v.size() != 3) throw InputError(std::string("Family JSON: \"") + key + "\" must hold 3 numbers");
    auto& dst = key[0] == 'a' ? p.a : p.b;
    for (std::size_t i = 0; i < 3; ++i) dst[i] = detail::real(v[i], "Family");
  }
  return p;
}

inline json to_json(const LatticeBasis& L) {
  json gens = json::array();
  for (std::size_t c = 0; c < L.k(); ++c) gens.push_back(L.basis().col(c));
  return json{{"k", L.k()}, {"basis", gens}};
}

inline LatticeBasis lattice_from_json(const json& j) {
  const std::size_t k = detail::positive_size(j, "k", "Lattice");
  const json& gens = detail::field(j, "basis", "Lattice");
  if (!gens.is_array() || gens.size() != k) throw InputError("Lattice JSON: \"basis\" must hold k generators");
  Matrix B(k, k);
  for (std::size_t c = 0; c < k; ++c) {
    if (!gens[c].is_array() || gens[c].size() != k)
      throw InputError("Lattice JSON: every generator needs k coordinates");
    for (std::size_t r = 0; r < k; ++r) B(r, c) = detail::real(gens[c][r], "Lattice");
  }
  try {
    return LatticeBasis(std::move(B));
  } catch (const Error& e) {
    throw InputError(std::string("Lattice JSON: ") + e.what());
  }
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

}  // namespace nilspec::json_io

#pragma once

// JSON for rings, characters and pairs. Doubles are written in shortest
// round-trip form, so a pair read back is bit-identical to the one written.

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ccr/characters.hpp"
#include "ccr/errors.hpp"
#include "ccr/finite_ring.hpp"
#include "ccr/linalg.hpp"
#include "ccr/pairs.hpp"

namespace ccr {

using Json = nlohmann::ordered_json;

inline Json ring_to_json(const FiniteRing& r) {
  Json j;
  switch (r.kind()) {
    case RingKind::zmod:
      j["kind"] = "zmod";
      j["n"] = r.modulus();
      break;
    case RingKind::prime_field:
      j["kind"] = "prime_field";
      j["p"] = r.modulus();
      break;
    case RingKind::matrix:
      j["kind"] = "matrix";
      j["n"] = r.matrix_size();
      j["base"] = ring_to_json(r.base());
      break;
    case RingKind::product: {
      j["kind"] = "product";
      Json f = Json::array();
      for (const auto& c : r.components()) f.push_back(ring_to_json(c));
      j["factors"] = std::move(f);
      break;
    }
  }
  return j;
}

namespace detail {

[[noreturn]] inline void malformed(const std::string& what) { throw StructureError("malformed input: " + what); }

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline std::uint64_t as_uint(const Json& j, const char* what) {
  if (!j.is_number_unsigned()) malformed(std::string(what) + " must be a non-negative integer");
  return j.get<std::uint64_t>();
}

inline Complex as_complex(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    malformed("complex numbers are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

}  // namespace detail

/// Accepts the descriptor object or a ring-spec string such as "zmod:4".
inline FiniteRing ring_from_json(const Json& j) {
  if (j.is_string()) return parse_ring_spec(j.get<std::string>());
  const auto& kind = detail::field(j, "kind");
  if (!kind.is_string()) detail::malformed("ring kind must be a string");
  const auto k = kind.get<std::string>();
  if (k == "zmod") return FiniteRing::zmod(detail::as_uint(detail::field(j, "n"), "n"));
  if (k == "prime_field") return FiniteRing::prime_field(detail::as_uint(detail::field(j, "p"), "p"));
  if (k == "matrix")
    return FiniteRing::matrix(detail::as_uint(detail::field(j, "n"), "n"), ring_from_json(detail::field(j, "base")));
  if (k == "product") {
    const auto& f = detail::field(j, "factors");
    if (!f.is_array()) detail::malformed("product factors must be an array");
    std::vector<FiniteRing> parts;
    for (const auto& x : f) parts.push_back(ring_from_json(x));
    return FiniteRing::product(std::move(parts));
  }
  detail::malformed("unknown ring kind \"" + k + "\"");
}

inline Json character_to_json(const Character& chi) { return Json{{"exponents", chi.exponents()}}; }

/// {"exponents": [...]} or a bare array, relative to the additive factors of R^degree.
inline Character character_from_json(const FiniteRing& ring, std::size_t degree, const Json& j) {
  const Json& e = j.is_array() ? j : detail::field(j, "exponents");
  if (!e.is_array()) detail::malformed("exponents must be an array");
  std::vector<std::uint64_t> out;
  for (const auto& x : e) out.push_back(detail::as_uint(x, "exponent"));
  return Character(ring, degree, std::move(out));
}

/// "1", "1,0,0,1" or JSON text.
inline Character parse_character(const FiniteRing& ring, std::string_view text, std::size_t degree = 1) {
  const auto first = text.find_first_not_of(" \t");
  if (first != std::string_view::npos && (text[first] == '{' || text[first] == '[')) {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      detail::malformed(std::string("character JSON: ") + e.what());
    }
    return character_from_json(ring, degree, j);
  }
  std::vector<std::uint64_t> e;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    auto tok = text.substr(pos, comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || p != tok.data() + tok.size())
      detail::malformed("character exponents: \"" + std::string(text) + "\"");
    e.push_back(v);
    pos = comma + 1;
  }
  return Character(ring, degree, std::move(e));
}

inline Json operator_to_json(const Operator& op) {
  if (op.is_monomial()) {
    const auto& m = op.monomial();
    Json cols = Json::array(), vals = Json::array();
    for (std::size_t r = 0; r < m.dim(); ++r) {
      cols.push_back(m.col(r));
      vals.push_back(detail::complex_json(m.value(r)));
    }
    return Json{{"cols", std::move(cols)}, {"values", std::move(vals)}};
  }
  const auto d = op.dense();
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < d.cols(); ++k) row.push_back(detail::complex_json(d(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Operator operator_from_json(const Json& j) {
  if (j.is_object()) {
    const auto& c = detail::field(j, "cols");
    const auto& v = detail::field(j, "values");
    if (!c.is_array() || !v.is_array()) detail::malformed("monomial operator needs cols and values arrays");
    std::vector<std::size_t> cols;
    std::vector<Complex> vals;
    for (const auto& x : c) cols.push_back(detail::as_uint(x, "column"));
    for (const auto& x : v) vals.push_back(detail::as_complex(x));
    return Operator(MonomialMatrix(std::move(cols), std::move(vals)));
  }
  if (!j.is_array() || j.empty()) detail::malformed("operator must be {cols, values} or a non-empty row array");
  const auto n = static_cast<Eigen::Index>(j.size());
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != j.size()) detail::malformed("dense operator is not square");
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = detail::as_complex(row[static_cast<std::size_t>(k)]);
  }
  return Operator(std::move(m));
}

inline Json pair_to_json(const CCRPair& p) {
  Json j;
  j["ring"] = ring_to_json(p.ring());
  j["d"] = p.degree();
  j["lambda"] = character_to_json(p.lambda());
  j["N"] = p.dim();
  j["label"] = p.label();
  Json u = Json::array(), v = Json::array();
  for (const auto& op : p.u_table()) u.push_back(operator_to_json(op));
  for (const auto& op : p.v_table()) v.push_back(operator_to_json(op));
  j["U"] = std::move(u);
  j["V"] = std::move(v);
  return j;
}

inline CCRPair pair_from_json(const Json& j) {
  const auto ring = ring_from_json(detail::field(j, "ring"));
  const auto d = detail::as_uint(detail::field(j, "d"), "d");
  if (d < 1) detail::malformed("d must be >= 1");
  const auto lambda = character_from_json(ring, 1, detail::field(j, "lambda"));
  const auto n = detail::as_uint(detail::field(j, "N"), "N");
  std::string label;
  if (j.contains("label") && j["label"].is_string()) label = j["label"].get<std::string>();
  std::vector<Operator> u, v;
  for (const char* key : {"U", "V"}) {
    const auto& t = detail::field(j, key);
    if (!t.is_array()) detail::malformed(std::string(key) + " must be an array of operators");
    auto& out = key[0] == 'U' ? u : v;
    for (const auto& x : t) {
      out.push_back(operator_from_json(x));
      if (out.back().dim() != n) detail::malformed(std::string(key) + " operator dimension differs from N");
    }
  }
  return CCRPair(lambda, d, std::move(u), std::move(v), std::move(label));
}

inline Json parse_json_text(std::string_view text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    detail::malformed(origin + ": " + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) detail::malformed("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw StructureError("cannot write " + path);
  out << text;
}

inline CCRPair read_pair(const std::string& path) { return pair_from_json(read_json_file(path)); }

}  // namespace ccr

#include "vicert/json_io.hpp"

#include <cmath>

#include "vicert/error.hpp"

namespace vicert {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void schema_error(std::string_view field, std::string_view problem) {
  throw ParseError("field '" + std::string(field) + "': " + std::string(problem));
}

const Json& require_field(const Json& j, const char* field) {
  if (!j.is_object()) schema_error(field, "enclosing value is not an object");
  const auto it = j.find(field);
  if (it == j.end()) schema_error(field, "missing");
  return *it;
}

double number_field(const Json& j, const char* field) {
  const Json& v = require_field(j, field);
  if (!v.is_number()) schema_error(field, "expected a number");
  return v.get<double>();
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into 1-based line and column.
    const std::size_t byte = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::int64_t line = 1;
    std::int64_t column = 1;
    for (std::size_t i = 0; i < byte; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + e.what(),
                     line, column);
  }
}

Vector vector_from_json(const Json& j, std::string_view field) {
  if (!j.is_array()) schema_error(field, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) schema_error(field, "expected an array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

AffineOperator operator_from_json(const Json& j) {
  const Json& rows = require_field(j, "matrix");
  if (!rows.is_array() || rows.empty()) schema_error("matrix", "expected a nonempty array of rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Vector row = vector_from_json(rows[static_cast<std::size_t>(r)], "matrix");
    if (row.size() != n) {
      throw ParseError("field 'matrix': row " + std::to_string(r) + " has " +
                       std::to_string(row.size()) + " entries, expected " + std::to_string(n));
    }
    m.row(r) = row.transpose();
  }
  return AffineOperator(std::move(m), vector_from_json(require_field(j, "offset"), "offset"));
}

Json operator_to_json(const AffineOperator& op) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < op.dim(); ++r) rows.push_back(vector_to_json(op.matrix().row(r)));
  return {{"matrix", rows}, {"offset", vector_to_json(op.offset())}};
}

ConvexSet set_from_json(const Json& j) {
  const Json& type = require_field(j, "type");
  if (!type.is_string()) schema_error("type", "expected a string");
  const auto kind = type.get<std::string>();
  if (kind == "box") {
    return ConvexSet::box(vector_from_json(require_field(j, "lower"), "lower"),
                          vector_from_json(require_field(j, "upper"), "upper"));
  }
  if (kind == "ball") {
    return ConvexSet::ball(vector_from_json(require_field(j, "center"), "center"),
                           number_field(j, "radius"));
  }
  if (kind == "halfspace") {
    return ConvexSet::halfspace(vector_from_json(require_field(j, "normal"), "normal"),
                                number_field(j, "offset"));
  }
  if (kind == "simplex") {
    const Json& dim = require_field(j, "dim");
    if (!dim.is_number_integer()) schema_error("dim", "expected an integer");
    return ConvexSet::simplex(dim.get<Eigen::Index>());
  }
  if (kind == "affine") {
    const Json& basis = require_field(j, "basis");
    if (!basis.is_array()) schema_error("basis", "expected an array of vectors");
    std::vector<Vector> vectors;
    for (const auto& b : basis) vectors.push_back(vector_from_json(b, "basis"));
    return ConvexSet::affine(vector_from_json(require_field(j, "basepoint"), "basepoint"),
                             std::move(vectors));
  }
  schema_error("type", "unknown set type '" + kind + "'");
}

Json set_to_json(const ConvexSet& set) {
  return std::visit(
      Overloaded{
          [](const Box& b) -> Json {
            return {{"type", "box"}, {"lower", vector_to_json(b.lower)},
                    {"upper", vector_to_json(b.upper)}};
          },
          [](const Ball& b) -> Json {
            return {{"type", "ball"}, {"center", vector_to_json(b.center)}, {"radius", b.radius}};
          },
          [](const Halfspace& h) -> Json {
            return {{"type", "halfspace"}, {"normal", vector_to_json(h.normal)},
                    {"offset", h.offset}};
          },
          [](const Simplex& s) -> Json { return {{"type", "simplex"}, {"dim", s.dim}}; },
          [](const AffineSubspace& a) -> Json {
            Json basis = Json::array();
            for (const auto& e : a.basis) basis.push_back(vector_to_json(e));
            return {{"type", "affine"}, {"basepoint", vector_to_json(a.basepoint)},
                    {"basis", basis}};
          },
      },
      set.shape());
}

NonexpansiveMap map_from_json(const Json& j) {
  const Json& type = require_field(j, "type");
  if (!type.is_string()) schema_error("type", "expected a string");
  const auto kind = type.get<std::string>();
  if (kind == "identity") return NonexpansiveMap::identity();
  if (kind == "projection") return NonexpansiveMap::projection(set_from_json(require_field(j, "set")));
  if (kind == "affine_average") {
    return NonexpansiveMap::affine_average(
        number_field(j, "t"), vector_from_json(require_field(j, "fixed_point"), "fixed_point"));
  }
  schema_error("type", "unknown map type '" + kind + "'");
}

Json moduli_to_json(const OperatorModuli& m) {
  Json out = {
      {"lipschitz", m.lipschitz},
      {"strong_monotonicity", m.strong_monotonicity},
      {"expansiveness", m.expansiveness},
      {"cocoercive_pair", {m.cocoercive_m, m.cocoercive_v}},
  };
  out["ism_alpha"] = m.ism_alpha ? Json(*m.ism_alpha) : Json(nullptr);
  return out;
}

Json report_to_json(const VerificationReport& r) {
  Json out = {
      {"property", r.property},
      {"status", std::string(to_string(r.status))},
      {"samples_used", r.samples_used},
  };
  // JSON has no infinity; an empty solution set reports null.
  out["max_violation"] = std::isfinite(r.max_violation) ? Json(r.max_violation) : Json(nullptr);
  out["witness"] = r.witness ? Json::array({vector_to_json(r.witness->first),
                                            vector_to_json(r.witness->second)})
                             : Json(nullptr);
  if (r.seed) out["seed"] = *r.seed;
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

}  // namespace vicert

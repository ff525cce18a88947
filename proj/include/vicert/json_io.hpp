#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "vicert/geometry.hpp"
#include "vicert/operators.hpp"
#include "vicert/report.hpp"
#include "vicert/solvers.hpp"

namespace vicert {

using Json = nlohmann::json;

/// Parses text, throwing ParseError with 1-based line and column.
Json parse_json_text(std::string_view text);

Vector vector_from_json(const Json& j, std::string_view field);

/// { "matrix": [[...]], "offset": [...] }
AffineOperator operator_from_json(const Json& j);
Json operator_to_json(const AffineOperator& op);

/// { "type": "box", "lower": [...], "upper": [...] }
/// { "type": "ball", "center": [...], "radius": r }
/// { "type": "halfspace", "normal": [...], "offset": b }
/// { "type": "simplex", "dim": n }
/// { "type": "affine", "basepoint": [...], "basis": [[...], ...] }
ConvexSet set_from_json(const Json& j);
Json set_to_json(const ConvexSet& set);

/// { "type": "identity" } | { "type": "projection", "set": {...} } |
/// { "type": "affine_average", "t": t, "fixed_point": [...] }
NonexpansiveMap map_from_json(const Json& j);

Json moduli_to_json(const OperatorModuli& m);

/// Field names: property, status, witness, samples_used, max_violation,
/// plus seed and note when set.
Json report_to_json(const VerificationReport& r);

}  // namespace vicert

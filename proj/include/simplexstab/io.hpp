#pragma once

#include <string>

#include <json.hpp>

#include "simplexstab/ellipsoids.hpp"
#include "simplexstab/isotropic.hpp"
#include "simplexstab/polytope.hpp"

namespace simplexstab::io {

using Json = nlohmann::ordered_json;

// {"n", "vertices": [[...]], "halfspaces": [{"a": [...], "b": x}]}; either
// list may be missing on input.
Json polytope_to_json(const Polytope& k);
Polytope polytope_from_json(const Json& j);

// {"n", "points": [[...]], "weights": [...]}
Json measure_to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const Json& j);

// {"n", "center": [...], "shape": [[...]]}
Json ellipsoid_to_json(const Ellipsoid& e);
Ellipsoid ellipsoid_from_json(const Json& j);

// Columns from "points" or, failing that, "vertices".
Matrix point_columns_from_json(const Json& j);

Json read_json(const std::string& path);
// Writes to a sibling temporary and renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);
// Two-space indent, trailing newline.
std::string dump(const Json& j);

}  // namespace simplexstab::io

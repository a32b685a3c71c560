#pragma once

#include <json.hpp>

#include <iosfwd>
#include <string>

#include "natred/reductive_core.hpp"

namespace natred {

/// Reads a ReductiveAlgebra from the sparse JSON layout
///
///   { "dim_m": n, "dim_k": q, "metric_m": [n*n numbers, row-major],
///     "brackets": [ {"kind": "mm_m"|"mm_k"|"km"|"kk", "i": .., "j": .., "k": .., "value": ..}, ... ] }
///
/// Indices are 0-based. For the antisymmetric kinds (mm_m, mm_k, kk) the (j,i)
/// entry is filled in automatically; giving both with a nonzero sum is an error.
/// "metric_m" may be omitted, meaning the identity.
ReductiveAlgebra algebra_from_json(const nlohmann::json& doc);
ReductiveAlgebra algebra_from_json_file(const std::string& path);

/// Inverse of algebra_from_json; emits each antisymmetric pair once (i < j).
nlohmann::json algebra_to_json(const ReductiveAlgebra& alg);

}  // namespace natred

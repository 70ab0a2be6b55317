#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "qcorr/families.hpp"
#include "qcorr/qstate.hpp"

namespace qcorr {

using StateVariant = std::variant<DensityMatrix, PureState, SeparableDecomposition>;

/// Parses a state file. Schema:
///   {"kind": "density"|"pure"|"decomposition", "dims": [...],
///    "labels": ["A", ...], "data": ...}
/// with complex entries as [re, im] pairs; decomposition data is a list of
/// {"weight": w, "psi": [...], "phi": [...]}. Validation failures carry the
/// offending field path.
StateVariant parse_state_file(const std::string& path);
StateVariant parse_state_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const DensityMatrix& rho);
nlohmann::ordered_json to_json(const PureState& psi);
nlohmann::ordered_json to_json(const SeparableDecomposition& dec);
nlohmann::ordered_json to_json(const StateVariant& state);

/// Serializes with doubles printed to 17 significant digits so parsing the
/// output reproduces every value bit-exactly.
std::string dump_json(const nlohmann::ordered_json& j, int indent = 2);

/// Writes the whole file at once: temp file in the same directory, then
/// rename.
void write_file_atomic(const std::string& path, const std::string& content);

std::string format_double(double v);  // %.17g

}  // namespace qcorr

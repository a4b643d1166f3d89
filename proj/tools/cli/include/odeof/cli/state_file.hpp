#pragma once

// State files: {"dA": 2, "dB": 2, "matrix": [[[re, im], ...], ...]} with the
// matrix stored row-major. Doubles are written with 17 significant digits so a
// file round-trips exactly.

#include <string>

#include <json.hpp>

#include "odeof/states.hpp"

namespace odeof::cli {

nlohmann::json state_to_json(const BipartiteDensity& rho);
/// Throws odeof errors naming the failed invariant (shape, trace, ...).
BipartiteDensity state_from_json(const nlohmann::json& j);

BipartiteDensity read_state_file(const std::string& path);
/// Writes through a temporary file and a rename, so a failed write leaves
/// nothing behind.
void write_state_file(const std::string& path, const BipartiteDensity& rho);

/// Atomic text write used by every file-producing command.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace odeof::cli

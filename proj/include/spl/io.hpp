#pragma once

// JSON schemas shared by the CLI and the reports.
//
// Matrix JSON: {"n": int, "real": [[...]], "imag": [[...]]}; "imag" is
// optional. Rectangular blocks carry "rows"/"cols" instead of "n".
//
// Instance JSON: {"sigma0": [...], "sigma1": [...], "gap": [l, r], "B": matrix}
// with an optional unitary "basis" (matrix). Non-diagonal blocks are written
// as "A0"/"A1" matrices in place of the spectral lists. A file holding
// {"A": matrix, "W": matrix, "gap": [l, r]} is split by the gap and W is
// reduced to its off-diagonal part; a bare matrix is an unperturbed A.

#include <optional>
#include <string>

#include "json.hpp"
#include "spl/disposition.hpp"

namespace spl {

using json = nlohmann::json;

json matrix_to_json(const MatrixC& m);
MatrixC matrix_from_json(const json& j);

json instance_to_json(const PerturbationInstance& inst);

/// Parses any accepted instance form. `gap_override` replaces (or supplies)
/// the gap. Throws ParseError for malformed input and disposition errors
/// for well-formed input that violates the disposition.
PerturbationInstance instance_from_json(const json& j, const std::optional<Gap>& gap_override = std::nullopt);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// "%.17g"; the round-trip format for CSV output.
std::string format_double(double x);

}  // namespace spl

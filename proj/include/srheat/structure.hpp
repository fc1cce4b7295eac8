#pragma once

#include "srheat/geometry.hpp"
#include "srheat/model.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace srheat {

struct Structure {
  std::string name;
  Frame frame;
  std::optional<QuadraticModel> model; // set when the structure is a normal form
};

/// Reads the JSON structure format (docs/structure.schema.json): a name and
/// exactly one of "frame" {f1, f2: three expression strings each} or "model"
/// {a, b, c}. The frame must be contact at the origin.
/// Throws UsageError for malformed documents, ParseError/UnknownIdentifierError
/// for bad expressions, DegenerateFrameError if the contact check fails.
Structure parse_structure(std::string_view json_text);

/// Built-in names "heisenberg", "model:a,b,c" and "rotated-heisenberg:θ"
/// (θ an expression in x, y, w), otherwise a path to a JSON file.
Structure load_structure(const std::string &spec);

} // namespace srheat

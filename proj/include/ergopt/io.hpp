#pragma once

// JSON and CSV plumbing shared by the command-line front end and the tests.

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "ergopt/circle.hpp"
#include "ergopt/potential.hpp"

namespace ergopt::io {

using nlohmann::json;

/// %.17g; "nan", "inf" and "-inf" for non-finite values.
std::string format_number(double x);

/// Reads and parses a JSON file. Throws InvalidArgument for a missing file, ParseError for bad JSON.
json read_json(const std::filesystem::path& path);

/// {"alphabet": n, "transitions": [[0/1, ...], ...]}
SubshiftSpec subshift_from_json(const json& j);
json subshift_to_json(const SubshiftSpec& spec);

/// {"depth": k, "values": {"word": v, ...}, "lambda": .., "alpha": ..}; an embedded
/// "subshift" object wins over `spec`, and the full shift on the symbols seen is the fallback.
Potential potential_from_json(const json& j, const std::optional<SubshiftSpec>& spec = std::nullopt);
json potential_to_json(const Potential& a);

/// {"kind":"table","knots":[[x,F],...],"slopes":[...]} or
/// {"kind":"builtin","name":"doubling"|"perturbed_doubling","epsilon":e}
CircleMap map_from_json(const json& j);
json map_to_json(const CircleMap& f);

/// Writes `text` to `path`, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ergopt::io

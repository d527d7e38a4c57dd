#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "domkit/poset.hpp"

namespace domkit {

// JSON mirror: {"name": ..., "elements": [...], "le": [[x, y], ...]}.
// Serialization lists the full relation; parsing validates it as given, so a
// missing (x, x) pair is reported as NotReflexive.
nlohmann::json poset_to_json(const FinPoset& p);
PosetPtr poset_from_json(const nlohmann::json& j);

// Text format: `poset <name>`, `elem <id>` lines, `le <id> <id>` lines.
// Reflexivity is implicit and the relation is transitively closed before
// validation. Serialization writes only the covering pairs.
std::string poset_to_text(const FinPoset& p);
PosetPtr parse_poset_text(std::string_view text);

// Hasse diagram, edges drawn bottom-to-top.
std::string poset_to_dot(const FinPoset& p);

// {"dom": <poset>, "cod": <poset>, "map": [[x, f(x)], ...]}. When `dom` or
// `cod` is supplied by the caller the corresponding key may be omitted; if
// present it must have the same shape.
nlohmann::json map_to_json(const MonotoneMap& f);
MonotoneMap map_from_json(const nlohmann::json& j, PosetPtr dom = nullptr, PosetPtr cod = nullptr);

std::string read_file(const std::filesystem::path& path);
nlohmann::json parse_json(std::string_view text, std::string_view origin);
// Dispatches on content: a leading '{' means JSON, otherwise the text format.
PosetPtr load_poset(const std::filesystem::path& path);

}  // namespace domkit

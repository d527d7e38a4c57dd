#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include <json.hpp>

#include "domkit/bilimit.hpp"
#include "domkit/internal.hpp"
#include "domkit/partial.hpp"

namespace domkit {

enum class DiagramMode { Total, Partial, Internal };

std::string_view to_string(DiagramMode m);
// Throws ParseError.
DiagramMode parse_diagram_mode(std::string_view text);

// Exactly one member is set, matching `mode`.
struct LoadedDiagram {
  DiagramMode mode = DiagramMode::Total;
  std::optional<EpDiagram> total;
  std::optional<PartialEpDiagram> partial;
  std::optional<InternalDiagram> internal;
};

// Text format, one directive per line ('#' starts a comment):
//   mode total|partial|internal      (also `mode: partial`; default total)
//   index <posetfile>
//   object <i> <file>                poset file, or presheaf file in internal mode
//   edge <i> <j> <file>              ep-pair JSON of the matching kind
// Paths are relative to `dir`. Identity edges are implicit; covering edges are
// required; other edges are composed unless given.
LoadedDiagram parse_diagram_text(std::string_view text, const std::filesystem::path& dir);
// JSON mirror: {"mode", "index", "objects": {i: ...}, "edges": [{"from", "to", "ep"}]}.
// Any nested value may instead be a string naming a file.
LoadedDiagram diagram_from_json(const nlohmann::json& j, const std::filesystem::path& dir);
// Dispatches on a leading '{'.
LoadedDiagram load_diagram(const std::filesystem::path& path);

// Inline JSON: every poset and edge is embedded.
nlohmann::json diagram_to_json(const EpDiagram& d);
nlohmann::json diagram_to_json(const PartialEpDiagram& d);
nlohmann::json diagram_to_json(const InternalDiagram& d);

// Presheaf text format: `presheaf <name>` (optional), `base <posetfile>`,
// `stage <p> <posetfile>`, `restrict <p> <q> <mapfile>`.
PresheafPoset parse_presheaf_text(std::string_view text, const std::filesystem::path& dir);
// {"name", "base", "stages": {p: poset}, "restrict": [{"from", "to", "map"}]}
PresheafPoset presheaf_from_json(const nlohmann::json& j, const std::filesystem::path& dir);
PresheafPoset load_presheaf(const std::filesystem::path& path);
nlohmann::json presheaf_to_json(const PresheafPoset& a);

// {"emb": {p: [[u, v], ...]}, "proj": {...}} over element ids of the lifted stages.
nlohmann::json internal_ep_to_json(const InternalStrictEp& e);
InternalStrictEp internal_ep_from_json(const nlohmann::json& j, const LiftPtr& small, const LiftPtr& large);

}  // namespace domkit

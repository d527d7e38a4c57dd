#include "domkit/diagram_io.hpp"

#include <sstream>

#include "domkit/error.hpp"
#include "domkit/poset_io.hpp"

namespace domkit {

std::string_view to_string(DiagramMode m) {
  switch (m) {
    case DiagramMode::Total: return "total";
    case DiagramMode::Partial: return "partial";
    case DiagramMode::Internal: return "internal";
  }
  return {};
}

DiagramMode parse_diagram_mode(std::string_view text) {
  if (text == "total") return DiagramMode::Total;
  if (text == "partial") return DiagramMode::Partial;
  if (text == "internal") return DiagramMode::Internal;
  fail(ErrorKind::ParseError, "mode must be total, partial or internal", {std::string(text)});
}

namespace {

bool looks_like_json(std::string_view text) {
  auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string_view::npos && text[pos] == '{';
}

// A nested value or the name of a file holding it.
nlohmann::json inline_or_file(const nlohmann::json& j, const std::filesystem::path& dir) {
  if (!j.is_string()) return j;
  auto path = dir / j.get<std::string>();
  return parse_json(read_file(path), path.string());
}

PosetPtr poset_value(const nlohmann::json& j, const std::filesystem::path& dir) {
  if (j.is_string()) return load_poset(dir / j.get<std::string>());
  return poset_from_json(j);
}

struct Spec {
  DiagramMode mode = DiagramMode::Total;
  PosetPtr index;
  std::map<std::string, nlohmann::json> objects;  // id -> inline JSON or path string
  std::vector<std::tuple<std::string, std::string, nlohmann::json>> edges;
};

LoadedDiagram build(const Spec& s, const std::filesystem::path& dir) {
  if (!s.index) fail(ErrorKind::ParseError, "diagram has no index");
  const auto& index = *s.index;
  for (const auto& [id, _] : s.objects) index.at(id);
  LoadedDiagram out;
  out.mode = s.mode;
  auto object_json = [&](Elem i) -> const nlohmann::json& {
    auto it = s.objects.find(index.id(i));
    if (it == s.objects.end()) fail(ErrorKind::ParseError, "no object for index element", {index.id(i)});
    return it->second;
  };
  auto position = [&](const std::string& id) { return index.at(id); };

  if (s.mode == DiagramMode::Internal) {
    std::vector<LiftPtr> objects;
    for (Elem i = 0; i < index.size(); ++i) {
      const auto& j = object_json(i);
      auto a = j.is_string() ? load_presheaf(dir / j.get<std::string>()) : presheaf_from_json(j, dir);
      objects.push_back(internal_lift(a));
    }
    InternalDiagram::EdgeMap edges;
    for (const auto& [from, to, j] : s.edges) {
      Elem a = position(from), b = position(to);
      edges.emplace(std::pair{a, b}, internal_ep_from_json(inline_or_file(j, dir), objects[a], objects[b]));
    }
    out.internal = InternalDiagram::make(s.index, std::move(objects), edges);
    return out;
  }

  std::vector<PosetPtr> objects;
  for (Elem i = 0; i < index.size(); ++i) objects.push_back(poset_value(object_json(i), dir));
  if (s.mode == DiagramMode::Partial) {
    PartialEpDiagram::EdgeMap edges;
    for (const auto& [from, to, j] : s.edges) {
      Elem a = position(from), b = position(to);
      edges.emplace(std::pair{a, b}, strict_ep_from_json(inline_or_file(j, dir), objects[a], objects[b]));
    }
    out.partial = PartialEpDiagram::make(s.index, std::move(objects), edges);
  } else {
    EpDiagram::EdgeMap edges;
    for (const auto& [from, to, j] : s.edges) {
      Elem a = position(from), b = position(to);
      edges.emplace(std::pair{a, b}, ep_from_json(inline_or_file(j, dir), objects[a], objects[b]));
    }
    out.total = EpDiagram::make(s.index, std::move(objects), edges);
  }
  return out;
}

}  // namespace

LoadedDiagram parse_diagram_text(std::string_view text, const std::filesystem::path& dir) {
  Spec s;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string head;
    if (!(words >> head)) continue;
    const auto where = "line " + std::to_string(lineno);
    auto bad = [&](const std::string& msg) { fail(ErrorKind::ParseError, where + ": " + msg, {where}); };
    std::string a, b, c;
    if (head == "mode" || head == "mode:") {
      if (!(words >> a)) bad("expected a mode");
      s.mode = parse_diagram_mode(a);
    } else if (head == "index") {
      if (!(words >> a)) bad("expected `index <posetfile>`");
      s.index = load_poset(dir / a);
    } else if (head == "object") {
      if (!(words >> a >> b)) bad("expected `object <i> <file>`");
      if (!s.objects.emplace(a, b).second) bad("object " + a + " given twice");
    } else if (head == "edge") {
      if (!(words >> a >> b >> c)) bad("expected `edge <i> <j> <file>`");
      s.edges.emplace_back(a, b, c);
    } else {
      bad("unknown directive '" + head + "'");
    }
  }
  return build(s, dir);
}

LoadedDiagram diagram_from_json(const nlohmann::json& j, const std::filesystem::path& dir) {
  try {
    Spec s;
    if (j.contains("mode")) s.mode = parse_diagram_mode(j.at("mode").get<std::string>());
    s.index = poset_value(j.at("index"), dir);
    for (const auto& [id, v] : j.at("objects").items()) s.objects.emplace(id, v);
    if (j.contains("edges"))
      for (const auto& e : j.at("edges"))
        s.edges.emplace_back(e.at("from").get<std::string>(), e.at("to").get<std::string>(), e.at("ep"));
    return build(s, dir);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string("diagram JSON: ") + e.what());
  }
}

LoadedDiagram load_diagram(const std::filesystem::path& path) {
  auto text = read_file(path);
  auto dir = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
  if (looks_like_json(text)) return diagram_from_json(parse_json(text, path.string()), dir);
  return parse_diagram_text(text, dir);
}

namespace {

template <class D, class EdgeJson>
nlohmann::json generic_to_json(const D& d, std::string_view mode, const std::function<nlohmann::json(Elem)>& object,
                               EdgeJson edge) {
  const auto& index = *d.index();
  nlohmann::json j{{"mode", mode}, {"index", poset_to_json(index)}};
  nlohmann::json objects = nlohmann::json::object();
  for (Elem i = 0; i < index.size(); ++i) objects[index.id(i)] = object(i);
  j["objects"] = objects;
  nlohmann::json edges = nlohmann::json::array();
  for (auto [a, b] : hasse_edges(index))
    edges.push_back({{"from", index.id(a)}, {"to", index.id(b)}, {"ep", edge(a, b)}});
  j["edges"] = edges;
  return j;
}

}  // namespace

nlohmann::json diagram_to_json(const EpDiagram& d) {
  return generic_to_json(
      d, "total", [&](Elem i) { return poset_to_json(*d.object(i)); },
      [&](Elem a, Elem b) { return ep_to_json(d.edge(a, b)); });
}

nlohmann::json diagram_to_json(const PartialEpDiagram& d) {
  return generic_to_json(
      d, "partial", [&](Elem i) { return poset_to_json(*d.object(i)); },
      [&](Elem a, Elem b) { return strict_ep_to_json(d.edge(a, b)); });
}

nlohmann::json diagram_to_json(const InternalDiagram& d) {
  return generic_to_json(
      d, "internal", [&](Elem i) { return presheaf_to_json(d.object(i)->base); },
      [&](Elem a, Elem b) { return internal_ep_to_json(d.edge(a, b)); });
}

// ---- presheaves ----

namespace {

struct PresheafSpec {
  std::string name = "A";
  PosetPtr base;
  std::map<std::string, PosetPtr> stages;
  std::vector<std::tuple<std::string, std::string, nlohmann::json>> restrictions;
};

PresheafPoset build_presheaf(const PresheafSpec& s, const std::filesystem::path& dir) {
  if (!s.base) fail(ErrorKind::ParseError, "presheaf has no base");
  auto site = BaseSite::make(s.base);
  std::vector<PosetPtr> stages;
  for (Elem p = 0; p < s.base->size(); ++p) {
    auto it = s.stages.find(s.base->id(p));
    if (it == s.stages.end()) fail(ErrorKind::ParseError, "no stage for base point", {s.base->id(p)});
    stages.push_back(it->second);
  }
  for (const auto& [id, _] : s.stages) s.base->at(id);
  PresheafPoset::RestrictionMap res;
  for (const auto& [from, to, j] : s.restrictions) {
    Elem p = s.base->at(from), q = s.base->at(to);
    res.emplace(std::pair{p, q}, map_from_json(inline_or_file(j, dir), stages[p], stages[q]));
  }
  return PresheafPoset::make(site, std::move(stages), res, s.name);
}

}  // namespace

PresheafPoset parse_presheaf_text(std::string_view text, const std::filesystem::path& dir) {
  PresheafSpec s;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string head, a, b, c;
    if (!(words >> head)) continue;
    const auto where = "line " + std::to_string(lineno);
    auto bad = [&](const std::string& msg) { fail(ErrorKind::ParseError, where + ": " + msg, {where}); };
    if (head == "presheaf") {
      if (!(words >> a)) bad("expected `presheaf <name>`");
      s.name = a;
    } else if (head == "base") {
      if (!(words >> a)) bad("expected `base <posetfile>`");
      s.base = load_poset(dir / a);
    } else if (head == "stage") {
      if (!(words >> a >> b)) bad("expected `stage <p> <posetfile>`");
      s.stages[a] = load_poset(dir / b);
    } else if (head == "restrict") {
      if (!(words >> a >> b >> c)) bad("expected `restrict <p> <q> <mapfile>`");
      s.restrictions.emplace_back(a, b, c);
    } else {
      bad("unknown directive '" + head + "'");
    }
  }
  return build_presheaf(s, dir);
}

PresheafPoset presheaf_from_json(const nlohmann::json& j, const std::filesystem::path& dir) {
  try {
    PresheafSpec s;
    if (j.contains("name")) s.name = j.at("name").get<std::string>();
    s.base = poset_value(j.at("base"), dir);
    for (const auto& [id, v] : j.at("stages").items()) s.stages[id] = poset_value(v, dir);
    if (j.contains("restrict"))
      for (const auto& r : j.at("restrict"))
        s.restrictions.emplace_back(r.at("from").get<std::string>(), r.at("to").get<std::string>(), r.at("map"));
    return build_presheaf(s, dir);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string("presheaf JSON: ") + e.what());
  }
}

PresheafPoset load_presheaf(const std::filesystem::path& path) {
  auto text = read_file(path);
  auto dir = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
  if (looks_like_json(text)) return presheaf_from_json(parse_json(text, path.string()), dir);
  return parse_presheaf_text(text, dir);
}

nlohmann::json presheaf_to_json(const PresheafPoset& a) {
  const auto& base = *a.site().poset();
  nlohmann::json stages = nlohmann::json::object();
  for (Elem p = 0; p < base.size(); ++p) stages[base.id(p)] = poset_to_json(*a.stage(p));
  nlohmann::json res = nlohmann::json::array();
  for (auto [q, p] : hasse_edges(base)) {
    nlohmann::json pairs = nlohmann::json::array();
    const auto& f = a.restrict(p, q);
    for (Elem x = 0; x < a.stage(p)->size(); ++x) pairs.push_back({a.stage(p)->id(x), a.stage(q)->id(f(x))});
    res.push_back({{"from", base.id(p)}, {"to", base.id(q)}, {"map", {{"map", pairs}}}});
  }
  return {{"name", a.name()}, {"base", poset_to_json(base)}, {"stages", stages}, {"restrict", res}};
}

// ---- internal ep-pairs ----

namespace {

nlohmann::json natural_json(const NaturalMap& f) {
  const auto& base = *f.dom().site().poset();
  nlohmann::json out = nlohmann::json::object();
  for (Elem p = 0; p < base.size(); ++p) {
    nlohmann::json pairs = nlohmann::json::array();
    const auto& dom = *f.dom().stage(p);
    const auto& cod = *f.cod().stage(p);
    for (Elem u = 0; u < dom.size(); ++u) pairs.push_back({dom.id(u), cod.id(f(p, u))});
    out[base.id(p)] = pairs;
  }
  return out;
}

NaturalMap natural_from(const nlohmann::json& j, const PresheafPoset& dom, const PresheafPoset& cod) {
  const auto& base = *dom.site().poset();
  std::vector<MonotoneMap> comps;
  for (Elem p = 0; p < base.size(); ++p) {
    if (!j.contains(base.id(p))) fail(ErrorKind::ParseError, "natural map misses a stage", {base.id(p)});
    comps.push_back(map_from_json({{"map", j.at(base.id(p))}}, dom.stage(p), cod.stage(p)));
  }
  return NaturalMap::make(dom, cod, std::move(comps));
}

}  // namespace

nlohmann::json internal_ep_to_json(const InternalStrictEp& e) {
  return {{"emb", natural_json(e.emb())}, {"proj", natural_json(e.proj())}};
}

InternalStrictEp internal_ep_from_json(const nlohmann::json& j, const LiftPtr& small, const LiftPtr& large) {
  if (!j.is_object() || !j.contains("emb") || !j.contains("proj"))
    fail(ErrorKind::ParseError, "internal ep-pair JSON needs \"emb\" and \"proj\"");
  return InternalStrictEp::make(natural_from(j.at("emb"), small->lifted, large->lifted),
                                natural_from(j.at("proj"), large->lifted, small->lifted), small, large);
}

}  // namespace domkit

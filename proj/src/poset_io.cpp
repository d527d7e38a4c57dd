#include "domkit/poset_io.hpp"

#include <fstream>
#include <sstream>

#include "domkit/error.hpp"

namespace domkit {

nlohmann::json poset_to_json(const FinPoset& p) {
  nlohmann::json le = nlohmann::json::array();
  for (Elem a = 0; a < p.size(); ++a)
    for (Elem b = 0; b < p.size(); ++b)
      if (p.leq(a, b)) le.push_back({p.id(a), p.id(b)});
  return {{"name", p.name()}, {"elements", p.ids()}, {"le", std::move(le)}};
}

PosetPtr poset_from_json(const nlohmann::json& j) {
  try {
    std::string name = j.value("name", std::string("poset"));
    auto ids = j.at("elements").get<std::vector<std::string>>();
    FinPoset::Relation le;
    for (const auto& pair : j.value("le", nlohmann::json::array())) {
      if (!pair.is_array() || pair.size() != 2)
        fail(ErrorKind::ParseError, "each \"le\" entry must be a pair");
      le.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
    }
    return FinPoset::check(std::move(name), std::move(ids), le);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string("poset JSON: ") + e.what());
  }
}

std::string poset_to_text(const FinPoset& p) {
  std::string out = "poset " + p.name() + "\n";
  for (const auto& id : p.ids()) out += "elem " + id + "\n";
  for (const auto& [a, b] : hasse_edges(p)) out += "le " + p.id(a) + " " + p.id(b) + "\n";
  return out;
}

PosetPtr parse_poset_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::string name;
  bool header = false;
  std::vector<std::string> ids;
  FinPoset::Relation le;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string keyword;
    if (!(words >> keyword)) continue;
    std::string a, b, extra;
    auto where = "line " + std::to_string(lineno);
    if (keyword == "poset") {
      if (header || !(words >> name)) fail(ErrorKind::ParseError, where + ": bad poset header");
      header = true;
    } else if (keyword == "elem") {
      if (!(words >> a)) fail(ErrorKind::ParseError, where + ": elem needs an id");
      ids.push_back(a);
    } else if (keyword == "le") {
      if (!(words >> a >> b)) fail(ErrorKind::ParseError, where + ": le needs two ids");
      le.emplace_back(a, b);
    } else {
      fail(ErrorKind::ParseError, where + ": unknown keyword '" + keyword + "'");
    }
    if (words >> extra) fail(ErrorKind::ParseError, where + ": trailing token '" + extra + "'");
  }
  if (!header) fail(ErrorKind::ParseError, "missing `poset <name>` line");
  return FinPoset::close(name, std::move(ids), le);
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string poset_to_dot(const FinPoset& p) {
  std::string out = "digraph " + quoted(p.name()) + " {\n  rankdir=BT;\n";
  for (const auto& id : p.ids()) out += "  " + quoted(id) + ";\n";
  for (const auto& [a, b] : hasse_edges(p))
    out += "  " + quoted(p.id(a)) + " -> " + quoted(p.id(b)) + ";\n";
  return out + "}\n";
}

nlohmann::json map_to_json(const MonotoneMap& f) {
  nlohmann::json pairs = nlohmann::json::array();
  for (Elem x = 0; x < f.dom()->size(); ++x) pairs.push_back({f.dom()->id(x), f.cod()->id(f(x))});
  return {{"dom", poset_to_json(*f.dom())}, {"cod", poset_to_json(*f.cod())}, {"map", pairs}};
}

namespace {

PosetPtr endpoint(const nlohmann::json& j, const char* key, PosetPtr given) {
  if (!j.contains(key)) {
    if (!given) fail(ErrorKind::ParseError, std::string("map JSON lacks \"") + key + "\"");
    return given;
  }
  auto parsed = poset_from_json(j.at(key));
  if (given && !same_shape(parsed, given))
    fail(ErrorKind::Mismatch, std::string("map ") + key + " differs from the expected poset");
  return given ? given : parsed;
}

}  // namespace

MonotoneMap map_from_json(const nlohmann::json& j, PosetPtr dom, PosetPtr cod) {
  try {
    dom = endpoint(j, "dom", std::move(dom));
    cod = endpoint(j, "cod", std::move(cod));
    std::vector<Elem> assignment(dom->size(), 0);
    std::vector<bool> seen(dom->size(), false);
    for (const auto& pair : j.at("map")) {
      Elem x = dom->at(pair.at(0).get<std::string>());
      if (seen[x]) fail(ErrorKind::ParseError, "element mapped twice", {dom->id(x)});
      seen[x] = true;
      assignment[x] = cod->at(pair.at(1).get<std::string>());
    }
    for (Elem x = 0; x < dom->size(); ++x)
      if (!seen[x]) fail(ErrorKind::ParseError, "map is not total", {dom->id(x)});
    return MonotoneMap::make(dom, cod, std::move(assignment));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string("map JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

nlohmann::json parse_json(std::string_view text, std::string_view origin) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string(origin) + ": " + e.what());
  }
}

PosetPtr load_poset(const std::filesystem::path& path) {
  auto text = read_file(path);
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{')
    return poset_from_json(parse_json(text, path.string()));
  return parse_poset_text(text);
}

}  // namespace domkit

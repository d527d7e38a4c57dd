#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "domkit/diagram_io.hpp"
#include "domkit/error.hpp"
#include "domkit/poset_io.hpp"
#include "domkit/solver.hpp"
#include "domkit/suite.hpp"

using namespace domkit;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kValidationError = 2;

struct Globals {
  std::string mode;
  std::uint64_t seed = 42;
  std::size_t count = 100;
  std::size_t first = 0;
  std::optional<std::size_t> depth;
  std::optional<std::uint64_t> budget;
  std::string format = "text";
  std::string out;
  std::optional<std::size_t> max_object, max_index, max_extra, cones;
};

bool is_input_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::IoError:
    case ErrorKind::SyntaxError:
    case ErrorKind::MultipleVariables:
    case ErrorKind::UnknownConstant: return true;
    default: return false;
  }
}

int exit_code(const DomainError& e) { return is_input_error(e.kind()) ? kInputError : kValidationError; }

json error_json(const DomainError& e) {
  return {{"kind", to_string(e.kind())}, {"message", e.what()}, {"witnesses", e.witnesses()}};
}

std::string error_text(const DomainError& e) {
  return e.what();
}

Budget budget_of(const Globals& g) {
  Budget b;
  if (g.budget) b.max_candidates = *g.budget;
  return b;
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) fail(ErrorKind::IoError, "cannot write " + g.out);
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

bool want_json(const Globals& g) { return g.format == "json"; }

// ---- check ----

enum class FileKind { Poset, Diagram, Presheaf, Equation, EpPair };

std::string_view kind_name(FileKind k) {
  switch (k) {
    case FileKind::Poset: return "poset";
    case FileKind::Diagram: return "diagram";
    case FileKind::Presheaf: return "presheaf";
    case FileKind::Equation: return "equation";
    case FileKind::EpPair: return "ep-pair";
  }
  return "";
}

FileKind classify(const std::string& text, const std::string& origin) {
  auto pos = text.find_first_not_of(" \t\r\n");
  if (pos != std::string::npos && text[pos] == '{') {
    auto j = parse_json(text, origin);
    if (j.contains("index")) return FileKind::Diagram;
    if (j.contains("stages")) return FileKind::Presheaf;
    if (j.contains("emb") && j.contains("proj")) return FileKind::EpPair;
    return FileKind::Poset;
  }
  std::istringstream in(text);
  std::string line;
  bool diagram = false, presheaf = false;
  while (std::getline(in, line)) {
    std::istringstream w(line);
    std::string head;
    w >> head;
    if (head == "domain") return FileKind::Equation;
    if (head == "index" || head == "object" || head == "edge") diagram = true;
    if (head == "stage" || head == "restrict" || head == "presheaf") presheaf = true;
  }
  if (diagram) return FileKind::Diagram;
  if (presheaf) return FileKind::Presheaf;
  return FileKind::Poset;
}

Report validate_loaded(const LoadedDiagram& d) {
  switch (d.mode) {
    case DiagramMode::Total: return validate_diagram(*d.total);
    case DiagramMode::Partial: return validate_partial_diagram(*d.partial);
    case DiagramMode::Internal: return validate_internal_diagram(*d.internal);
  }
  return {};
}

int cmd_check(const Globals& g, const std::vector<std::string>& paths) {
  int code = kOk;
  json results = json::array();
  std::string text;
  for (const auto& path : paths) {
    json r{{"path", path}};
    try {
      auto content = read_file(path);
      auto kind = classify(content, path);
      r["kind"] = kind_name(kind);
      std::optional<Report> report;
      switch (kind) {
        case FileKind::Poset: load_poset(path); break;
        case FileKind::Presheaf: load_presheaf(path); break;
        case FileKind::Equation: load_equation(path); break;
        case FileKind::EpPair: ep_from_json(parse_json(content, path)); break;
        case FileKind::Diagram: report = validate_loaded(load_diagram(path)); break;
      }
      bool valid = !report || report->ok();
      r["valid"] = valid;
      if (report) r["report"] = report->to_json();
      text += path + ": " + std::string(kind_name(kind)) + " " + (valid ? "valid" : "INVALID") + "\n";
      if (!valid) {
        auto f = report->first_failure();
        text += "  " + f->name + (f->detail.empty() ? "" : ": " + f->detail) + "\n";
        code = std::max(code, kValidationError);
        r["repro"] = "domkit check " + path;
      }
    } catch (const DomainError& e) {
      r["valid"] = false;
      r["error"] = error_json(e);
      r["repro"] = "domkit check " + path;
      text += path + ": INVALID\n  " + error_text(e) + "\n";
      // Input errors dominate validation failures.
      code = (code == kInputError || exit_code(e) == kInputError) ? kInputError : kValidationError;
    }
    results.push_back(r);
  }
  if (want_json(g)) emit(g, dump({{"command", "check"}, {"results", results}, {"exit", code}}));
  else emit(g, text);
  return code;
}

// ---- bilimit ----

void check_mode(const Globals& g, DiagramMode file_mode) {
  if (!g.mode.empty() && parse_diagram_mode(g.mode) != file_mode)
    fail(ErrorKind::ParseError,
         "--mode " + g.mode + " does not match the diagram's mode " + std::string(to_string(file_mode)));
}

int cmd_bilimit(const Globals& g, const std::string& path) {
  auto d = load_diagram(path);
  check_mode(g, d.mode);
  const auto budget = budget_of(g);
  auto valid = validate_loaded(d);
  json out{{"command", "bilimit"}, {"path", path}, {"mode", to_string(d.mode)}};
  if (!valid.ok()) {
    auto f = valid.first_failure();
    out["pass"] = false;
    out["report"] = valid.to_json();
    out["first_failure"] = {{"check", f->name}, {"detail", f->detail}};
    out["repro"] = "domkit bilimit " + path;
    if (want_json(g)) emit(g, dump(out));
    else emit(g, valid.to_text() + "first failing property: " + f->name + " (" + f->detail + ")\nrepro: domkit bilimit " + path + "\n");
    return kValidationError;
  }
  Report r("bilimit of " + path);
  PosetPtr apex;
  std::vector<std::size_t> stage_sizes;
  switch (d.mode) {
    case DiagramMode::Total: {
      auto b = build_bilimit(*d.total, budget);
      apex = b.apex;
      r.merge(verify_bilimit(b));
      r.merge(verify_universal(b, own_cone(b), budget).report, "own cone");
      r.merge(verify_universal(b, top_cone(*d.total), budget).report, "top cone");
      break;
    }
    case DiagramMode::Partial: {
      auto b = build_partial_bilimit(*d.partial, budget);
      apex = b.apex;
      r.merge(verify_partial_bilimit(b));
      r.merge(verify_universal_partial(b, own_cone(b), budget).report, "own cone");
      r.merge(verify_universal_partial(b, top_cone(*d.partial), budget).report, "top cone");
      break;
    }
    case DiagramMode::Internal: {
      const auto& di = *d.internal;
      for (Elem i = 0; i < di.size(); ++i)
        r.merge(internal_monad_laws(di.object(i)->base, budget), "monad " + di.index()->id(i));
      auto run = internal_partial_bilimit(di, {}, {}, budget);
      r.merge(run.report);
      if (di.site().size() == 1) r.merge(compare_with_boolean(run.bilimit), "boolean");
      for (const auto& s : run.bilimit.apex.stages()) stage_sizes.push_back(s->size());
      if (auto w = find_proper_support(*run.bilimit.lifted_apex)) {
        const auto& la = *run.bilimit.lifted_apex;
        r.add("proper-sieve support witness", true,
              la.base.site().poset()->id(w->first) + ": " + la.elem_id(la.elem(w->first, w->second)));
      }
      break;
    }
  }
  out["pass"] = r.ok();
  out["report"] = r.to_json();
  if (apex) {
    out["apex_size"] = apex->size();
    out["apex"] = poset_to_json(*apex);
  } else {
    out["apex_stage_sizes"] = stage_sizes;
  }
  if (!r.ok()) out["repro"] = "domkit bilimit " + path;
  if (g.format == "dot") {
    if (!apex) fail(ErrorKind::ParseError, "dot output needs a total or partial diagram");
    emit(g, poset_to_dot(*apex));
  } else if (want_json(g)) {
    emit(g, dump(out));
  } else {
    std::string head = apex ? "apex size " + std::to_string(apex->size()) : "apex stage sizes";
    for (auto s : stage_sizes) head += " " + std::to_string(s);
    emit(g, head + "\n" + r.to_text());
  }
  return r.ok() ? kOk : kValidationError;
}

// ---- verify ----

int cmd_verify(const Globals& g) {
  auto mode = g.mode.empty() ? DiagramMode::Total : parse_diagram_mode(g.mode);
  auto cfg = SuiteConfig::defaults(mode);
  cfg.seed = g.seed;
  cfg.count = g.count;
  cfg.first = g.first;
  cfg.budget = budget_of(g);
  if (g.max_object) cfg.shape.max_object = *g.max_object;
  if (g.max_index) cfg.shape.max_index = *g.max_index;
  if (g.max_extra) cfg.shape.max_extra = *g.max_extra;
  if (g.cones) cfg.cones = *g.cones;
  auto result = run_suite(cfg);
  emit(g, want_json(g) ? dump(result.to_json()) : result.to_text());
  return result.ok() ? kOk : kValidationError;
}

// ---- solve ----

int cmd_solve(const Globals& g, const std::string& path) {
  auto eq = load_equation(path);
  if (!g.mode.empty()) eq.mode = parse_mode(g.mode);
  if (g.depth) eq.depth = *g.depth;
  SolverBudget sb;
  sb.enumeration = budget_of(g);
  ChainApprox chain;
  try {
    chain = iterate_chain(eq.expr, eq.base, eq.depth, eq.mode, sb);
  } catch (const DomainError& e) {
    std::string hint;
    if (e.kind() == ErrorKind::NoStarterEp) hint = "partial mode starts from the empty poset; try `mode partial`";
    if (e.kind() == ErrorKind::BudgetExceeded) hint = "lower --depth or raise --budget";
    if (hint.empty()) throw;
    json out{{"command", "solve"}, {"path", path}, {"pass", false}, {"error", error_json(e)}, {"hint", hint},
             {"repro", "domkit solve " + path}};
    if (want_json(g)) emit(g, dump(out));
    else emit(g, "error: " + error_text(e) + "\nhint: " + hint + "\n");
    return kValidationError;
  }
  json levels = json::array();
  bool pass = true;
  std::ostringstream text;
  text << "domain " << eq.name << " = " << eq.expr.to_string() << "  (mode " << to_string(eq.mode) << ", base "
       << eq.base_label << ", depth " << eq.depth << ")\n";
  text << "level  size  link  truncation\n";
  for (std::size_t k = 0; k <= chain.depth(); ++k) {
    bool link_ok = true;
    if (k < chain.depth()) {
      // Re-check the link laws independently of construction.
      auto total = eq.mode == Mode::Total ? chain.total_links[k] : chain.strict_links[k].total();
      link_ok = compose(total.proj(), total.emb()) == MonotoneMap::identity(total.small()) &&
                compose(total.emb(), total.proj()).pointwise_leq(MonotoneMap::identity(total.large()));
    }
    auto t = truncated_bilimit(chain, k, sb.enumeration);
    pass = pass && link_ok && t.report.ok();
    json l{{"level", k}, {"size", chain.levels[k]->size()}, {"truncation_pass", t.report.ok()}};
    if (k < chain.depth()) l["link_valid"] = link_ok;
    if (!t.report.ok()) l["report"] = t.report.to_json();
    levels.push_back(l);
    text << std::setw(5) << k << std::setw(6) << chain.levels[k]->size() << std::setw(6)
         << (k < chain.depth() ? (link_ok ? "ok" : "FAIL") : "-") << "  "
         << (t.report.ok() ? "apex ~ D_" + std::to_string(k) : "FAIL") << "\n";
  }
  json out{{"command", "solve"}, {"path", path}, {"name", eq.name}, {"expr", eq.expr.to_string()},
           {"mode", to_string(eq.mode)}, {"base", eq.base_label}, {"depth", eq.depth},
           {"level_sizes", chain.level_sizes()}, {"levels", levels}, {"pass", pass}};
  if (!pass) out["repro"] = "domkit solve " + path;
  emit(g, want_json(g) ? dump(out) : text.str());
  return pass ? kOk : kValidationError;
}

int cmd_omegabar(const Globals& g) {
  if (!g.mode.empty() && g.mode != "partial")
    fail(ErrorKind::ParseError, "omegabar always runs in partial mode; drop --mode " + g.mode);
  const std::size_t n = g.depth.value_or(6);
  auto w = omega_bar(n);
  json out{{"command", "omegabar"}, {"depth", n}, {"level_sizes", w.chain.level_sizes()},
           {"report", w.report.to_json()}, {"pass", w.report.ok()}};
  if (!w.report.ok()) out["repro"] = "domkit omegabar --depth " + std::to_string(n);
  emit(g, want_json(g) ? dump(out) : w.report.to_text());
  return w.report.ok() ? kOk : kValidationError;
}

// ---- export ----

int cmd_export(const Globals& g, const std::string& path) {
  auto content = read_file(path);
  auto kind = classify(content, path);
  switch (kind) {
    case FileKind::Poset: {
      auto p = load_poset(path);
      if (g.format == "dot") emit(g, poset_to_dot(*p));
      else if (want_json(g)) emit(g, dump(poset_to_json(*p)));
      else emit(g, poset_to_text(*p));
      return kOk;
    }
    case FileKind::Diagram: {
      auto d = load_diagram(path);
      if (g.format == "dot") {
        emit(g, poset_to_dot(*(d.total ? d.total->index() : d.partial ? d.partial->index() : d.internal->index())));
        return kOk;
      }
      json j = d.total ? diagram_to_json(*d.total) : d.partial ? diagram_to_json(*d.partial) : diagram_to_json(*d.internal);
      emit(g, dump(j));
      return kOk;
    }
    case FileKind::Presheaf: emit(g, dump(presheaf_to_json(load_presheaf(path)))); return kOk;
    case FileKind::Equation: {
      auto eq = load_equation(path);
      if (g.depth) eq.depth = *g.depth;
      SolverBudget sb;
      sb.enumeration = budget_of(g);
      auto c = iterate_chain(eq.expr, eq.base, eq.depth, eq.mode, sb);
      json levels = json::array(), links = json::array();
      for (const auto& l : c.levels) levels.push_back(poset_to_json(*l));
      for (const auto& l : c.total_links) links.push_back(ep_to_json(l));
      for (const auto& l : c.strict_links) links.push_back(strict_ep_to_json(l));
      emit(g, dump({{"expr", eq.expr.to_string()}, {"mode", to_string(eq.mode)}, {"levels", levels}, {"links", links}}));
      return kOk;
    }
    case FileKind::EpPair: emit(g, dump(ep_to_json(ep_from_json(parse_json(content, path))))); return kOk;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite domain-theory workbench: bilimits of ep-pair diagrams, lifts, recursive domain equations"};
  app.require_subcommand(1);
  Globals g;
  auto add_globals = [&](CLI::App* sub) {
    sub->add_option("--mode", g.mode, "total | partial | internal")
        ->check(CLI::IsMember({"total", "partial", "internal"}));
    sub->add_option("--seed", g.seed, "random seed");
    sub->add_option("--count", g.count, "number of cases");
    sub->add_option("--first", g.first, "number of the first case");
    sub->add_option("--depth", g.depth, "chain depth (levels 0..depth)");
    sub->add_option("--budget", g.budget, "maximum candidate maps per exhaustive search");
    sub->add_option("--format", g.format, "text | json | dot")->check(CLI::IsMember({"text", "json", "dot"}));
    sub->add_option("--out", g.out, "write output to this file");
    sub->add_option("--max-object-size", g.max_object, "generator bound on object (or stage) size");
    sub->add_option("--max-index-size", g.max_index, "generator bound on index size");
    sub->add_option("--max-extra", g.max_extra, "extra elements of random cone apexes");
    sub->add_option("--cones", g.cones, "random cones per case");
  };
  std::vector<std::string> paths;
  std::string path;
  auto* check = app.add_subcommand("check", "validate posets, ep-pairs, diagrams, presheaves and equations");
  check->add_option("paths", paths, "input files")->required();
  auto* bilimit = app.add_subcommand("bilimit", "build a bilimit and run its full property suite");
  bilimit->add_option("diagram", path, "diagram file")->required();
  auto* verify = app.add_subcommand("verify", "seeded random universal-property suite");
  auto* solve = app.add_subcommand("solve", "iterate a domain equation and check every truncation");
  solve->add_option("equation", path, "equation file")->required();
  auto* omegabar = app.add_subcommand("omegabar", "lift chain from the empty poset with its sigma_n checks");
  auto* exporter = app.add_subcommand("export", "re-emit an input as JSON, text or DOT");
  exporter->add_option("input", path, "input file")->required();
  for (auto* s : {check, bilimit, verify, solve, omegabar, exporter}) add_globals(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*check) return cmd_check(g, paths);
    if (*bilimit) return cmd_bilimit(g, path);
    if (*verify) return cmd_verify(g);
    if (*solve) return cmd_solve(g, path);
    if (*omegabar) return cmd_omegabar(g);
    if (*exporter) return cmd_export(g, path);
  } catch (const DomainError& e) {
    std::cerr << "error: " << error_text(e) << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}

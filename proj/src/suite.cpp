#include "domkit/suite.hpp"

#include <atomic>
#include <sstream>
#include <thread>

#include "domkit/error.hpp"

namespace domkit {

SuiteConfig SuiteConfig::defaults(DiagramMode mode) {
  SuiteConfig c;
  c.mode = mode;
  switch (mode) {
    case DiagramMode::Total: c.shape = {4, 4, 2}; break;
    case DiagramMode::Partial: c.shape = {4, 3, 1}; break;
    case DiagramMode::Internal: c.shape = {3, 3, 1}; break;
  }
  return c;
}

namespace {

void record(CaseResult& r, std::size_t apex, const UniversalReport& u, std::size_t k) {
  r.cones.push_back({apex, u});
  r.report.merge(u.report, "cone " + std::to_string(k));
}

void total_case(const SuiteConfig& cfg, Rng& rng, CaseResult& r) {
  auto d = random_diagram(rng, cfg.shape);
  std::vector<ProjCone> cones;
  for (std::size_t k = 0; k < cfg.cones; ++k) cones.push_back(random_cone(rng, d, cfg.shape.max_extra));
  r.index_size = d.size();
  for (const auto& o : d.objects()) r.object_sizes.push_back(o->size());
  auto b = build_bilimit(d, cfg.budget);
  r.apex_size = b.apex->size();
  r.report.merge(verify_bilimit(b));
  for (std::size_t k = 0; k < cones.size(); ++k)
    record(r, cones[k].apex->size(), verify_universal(b, cones[k], cfg.budget), k);
}

void partial_case(const SuiteConfig& cfg, Rng& rng, CaseResult& r) {
  auto d = random_partial_diagram(rng, cfg.shape);
  std::vector<PartialProjCone> cones;
  for (std::size_t k = 0; k < cfg.cones; ++k) cones.push_back(random_partial_cone(rng, d, cfg.shape.max_extra));
  r.index_size = d.size();
  for (const auto& o : d.objects()) r.object_sizes.push_back(o->size());
  auto b = build_partial_bilimit(d, cfg.budget);
  r.apex_size = b.apex->size();
  r.report.merge(verify_partial_bilimit(b));
  for (std::size_t k = 0; k < cones.size(); ++k)
    record(r, cones[k].apex.base->size(), verify_universal_partial(b, cones[k], cfg.budget), k);
}

std::size_t total_stage_size(const PresheafPoset& a) {
  std::size_t n = 0;
  for (const auto& s : a.stages()) n += s->size();
  return n;
}

void internal_case(const SuiteConfig& cfg, Rng& rng, CaseResult& r) {
  auto site = BaseSite::make(chain(cfg.base_size));
  auto d = random_internal_diagram(rng, site, cfg.shape);
  std::vector<InternalCone> cones;
  for (std::size_t k = 0; k < cfg.cones; ++k) cones.push_back(random_internal_cone(rng, d, cfg.shape.max_extra));
  r.index_size = d.size();
  for (Elem i = 0; i < d.size(); ++i) r.object_sizes.push_back(total_stage_size(d.object(i)->base));
  auto b = build_internal_partial_bilimit(d, {}, cfg.budget);
  r.apex_size = total_stage_size(b.apex);
  r.report.merge(verify_internal_bilimit(b));
  for (std::size_t k = 0; k < cones.size(); ++k)
    record(r, total_stage_size(cones[k].apex->base), verify_internal_universal(b, cones[k], cfg.budget), k);
}

}  // namespace

CaseResult run_case(const SuiteConfig& config, std::size_t number) {
  CaseResult r;
  r.number = number;
  r.report = Report("case " + std::to_string(number));
  auto rng = Rng::for_case(config.seed, number);
  try {
    switch (config.mode) {
      case DiagramMode::Total: total_case(config, rng, r); break;
      case DiagramMode::Partial: partial_case(config, rng, r); break;
      case DiagramMode::Internal: internal_case(config, rng, r); break;
    }
  } catch (const DomainError& e) {
    r.error = std::string(to_string(e.kind())) + ": " + e.what();
  }
  bool cones_ok = true;
  for (const auto& c : r.cones) cones_ok = cones_ok && c.universal.ok();
  r.pass = r.error.empty() && r.report.ok() && cones_ok;
  return r;
}

SuiteResult run_suite(const SuiteConfig& config) {
  SuiteResult out{config, std::vector<CaseResult>(config.count)};
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(config.count, 1)));
  std::atomic<std::size_t> next{0};
  // Each case owns its slot and its random stream, so scheduling cannot leak
  // into the output.
  auto worker = [&] {
    for (std::size_t k = next++; k < config.count; k = next++) out.cases[k] = run_case(config, config.first + k);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

nlohmann::json CaseResult::to_json() const {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : cones) {
    cs.push_back({{"apex_size", c.apex_size},
                  {"candidates", c.universal.candidates},
                  {"projections", c.universal.projections},
                  {"commuting_maps", c.universal.commuting_maps},
                  {"commuting_projections", c.universal.commuting_projections},
                  {"pass", c.universal.ok()}});
  }
  nlohmann::json j{{"case", number},      {"pass", pass},           {"index_size", index_size},
                   {"object_sizes", object_sizes}, {"apex_size", apex_size}, {"cones", cs},
                   {"checks", report.checks().size()}};
  if (!error.empty()) j["error"] = error;
  if (auto f = report.first_failure()) j["failure"] = {{"check", f->name}, {"detail", f->detail}};
  return j;
}

std::size_t SuiteResult::passed() const {
  std::size_t n = 0;
  for (const auto& c : cases) n += c.pass;
  return n;
}

std::string SuiteResult::repro(std::size_t number) const {
  std::ostringstream s;
  s << "domkit verify --mode " << to_string(config.mode) << " --seed " << config.seed << " --first " << number
    << " --count 1 --max-index-size " << config.shape.max_index << " --max-object-size " << config.shape.max_object
    << " --max-extra " << config.shape.max_extra << " --cones " << config.cones << " --budget "
    << config.budget.max_candidates;
  return s.str();
}

nlohmann::json SuiteResult::to_json() const {
  nlohmann::json cs = nlohmann::json::array();
  nlohmann::json failures = nlohmann::json::array();
  std::size_t candidates = 0, projections = 0, commuting = 0, max_apex = 0;
  for (const auto& c : cases) {
    cs.push_back(c.to_json());
    if (!c.pass) failures.push_back({{"case", c.number}, {"repro", repro(c.number)}});
    max_apex = std::max(max_apex, c.apex_size);
    for (const auto& k : c.cones) {
      candidates += k.universal.candidates;
      projections += k.universal.projections;
      commuting += k.universal.commuting_maps;
    }
  }
  return {{"command", "verify"},
          {"mode", to_string(config.mode)},
          {"seed", config.seed},
          {"first", config.first},
          {"count", config.count},
          {"cones_per_case", config.cones},
          {"shape",
           {{"max_index", config.shape.max_index},
            {"max_object", config.shape.max_object},
            {"max_extra", config.shape.max_extra}}},
          {"budget", config.budget.max_candidates},
          {"passed", passed()},
          {"failed", cases.size() - passed()},
          {"summary",
           {{"candidate_maps", candidates},
            {"projections", projections},
            {"commuting_maps", commuting},
            {"max_apex_size", max_apex}}},
          {"failures", failures},
          {"cases", cs}};
}

std::string SuiteResult::to_text() const {
  std::ostringstream s;
  s << "verify " << to_string(config.mode) << " seed " << config.seed << ": " << passed() << "/" << cases.size()
    << " pass\n";
  for (const auto& c : cases) {
    if (c.pass) continue;
    s << "  case " << c.number << " FAIL";
    if (!c.error.empty()) s << " (" << c.error << ")";
    if (auto f = c.report.first_failure()) s << " " << f->name << (f->detail.empty() ? "" : ": " + f->detail);
    s << "\n    repro: " << repro(c.number) << "\n";
  }
  return s.str();
}

}  // namespace domkit

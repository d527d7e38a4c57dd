// Acceptance run: one line per criterion, exit status 0 only if all pass.
//
//   acceptance [--cli <path to domkit>] [--fixtures <dir>] [--only N]

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "domkit/diagram_io.hpp"
#include "domkit/error.hpp"
#include "domkit/generate.hpp"
#include "domkit/solver.hpp"
#include "domkit/suite.hpp"
#include "oracle.hpp"

using namespace domkit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

struct Options {
  std::string cli;
  fs::path fixtures;
  int only = 0;
};

std::string pluralize(std::size_t n, const std::string& what) { return std::to_string(n) + " " + what; }

bool is_order_iso(const FinPoset& a, const FinPoset& b, const std::vector<Elem>& f) {
  if (a.size() != b.size() || f.size() != a.size()) return false;
  std::set<Elem> image(f.begin(), f.end());
  if (image.size() != f.size()) return false;
  for (Elem x = 0; x < a.size(); ++x)
    for (Elem y = 0; y < a.size(); ++y)
      if (a.leq(x, y) != b.leq(f[x], f[y])) return false;
  return true;
}

bool is_chain_of(const FinPoset& p, std::size_t n) {
  if (p.size() != n) return false;
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y)
      if (!p.comparable(x, y)) return false;
  return true;
}

// ---- 1: ep laws over labelled small posets ----

// Every partial order on the labels 0..n-1, by brute force over relations.
std::vector<PosetPtr> labelled_posets(std::size_t n) {
  std::vector<std::pair<Elem, Elem>> slots;
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y)
      if (x != y) slots.emplace_back(x, y);
  std::vector<std::string> ids;
  for (Elem x = 0; x < n; ++x) ids.push_back(std::to_string(x));
  std::vector<PosetPtr> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << slots.size()); ++bits) {
    std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
    for (Elem x = 0; x < n; ++x) le[x][x] = true;
    for (std::size_t k = 0; k < slots.size(); ++k)
      if (bits >> k & 1) le[slots[k].first][slots[k].second] = true;
    bool order = true;
    for (Elem x = 0; x < n && order; ++x)
      for (Elem y = 0; y < n && order; ++y) {
        if (x != y && le[x][y] && le[y][x]) order = false;
        for (Elem z = 0; z < n && order; ++z)
          if (le[x][y] && le[y][z] && !le[x][z]) order = false;
      }
    if (order)
      out.push_back(FinPoset::from_predicate("L" + std::to_string(n) + "#" + std::to_string(out.size()), ids,
                                             [&](Elem x, Elem y) { return le[x][y]; }));
  }
  return out;
}

Outcome ep_law_suite() {
  Outcome o;
  std::vector<PosetPtr> small, large;
  for (std::size_t n = 0; n <= 4; ++n)
    for (const auto& p : labelled_posets(n)) {
      if (n <= 3) small.push_back(p);
      large.push_back(p);
    }
  o.require(large.size() == 1 + 1 + 3 + 19 + 219, "labelled poset count " + std::to_string(large.size()));
  std::size_t total = 0;
  for (const auto& a : small)
    for (const auto& b : large) {
      auto eps = enumerate_ep_pairs(a, b);
      auto expected = oracle::ep_pairs(*a, *b);
      std::set<std::pair<std::vector<Elem>, std::vector<Elem>>> want(expected.begin(), expected.end()), got;
      for (const auto& e : eps) {
        ++total;
        got.emplace(e.emb().assignment(), e.proj().assignment());
        for (Elem x = 0; x < a->size(); ++x) o.require(e.proj()(e.emb()(x)) == x, "section law " + a->name());
        for (Elem y = 0; y < b->size(); ++y)
          o.require(b->leq(e.emb()(e.proj()(y)), y), "deflation law " + b->name());
        o.require(projection_from_embedding(e.emb()).proj() == e.proj(), "projection from embedding");
        auto back = embedding_for_projection(e.proj());
        o.require(back && back->emb() == e.emb(), "embedding from projection");
      }
      o.require(got == want && got.size() == eps.size(),
                "enumeration differs from oracle: " + a->name() + " -> " + b->name());
    }
  o.require(total >= 500, "only " + pluralize(total, "ep-pairs"));
  if (o.pass)
    o.detail = pluralize(total, "ep-pairs") + " over " + pluralize(small.size() * large.size(), "labelled poset pairs");
  return o;
}

// ---- 2 and 3: total bilimits ----

constexpr std::uint64_t kSeed = 42;
constexpr std::size_t kCases = 100;

// Brute force over every monotone H -> D_inf: the commuting maps that are
// projections.
std::vector<std::vector<Elem>> commuting_projections(const Bilimit& b, const ProjCone& c) {
  std::vector<std::vector<Elem>> out;
  const auto& h = *c.apex;
  const auto& apex = *b.apex;
  for (const auto& p : oracle::monotone_maps(h, apex)) {
    bool commutes = true;
    for (Elem i = 0; i < b.cone.size() && commutes; ++i)
      for (Elem x = 0; x < h.size() && commutes; ++x) commutes = b.cone_proj(i)(p[x]) == c.leg(i)(x);
    if (!commutes) continue;
    for (const auto& e : oracle::monotone_maps(apex, h))
      if (oracle::ep_laws(apex, h, e, p)) {
        out.push_back(p);
        break;
      }
  }
  return out;
}

Outcome total_universal(bool identities_only) {
  Outcome o;
  auto cfg = SuiteConfig::defaults(DiagramMode::Total);
  cfg.seed = kSeed;
  cfg.count = kCases;
  std::size_t cones = 0;
  if (!identities_only) {
    auto suite = run_suite(cfg);
    o.require(suite.passed() == kCases, "suite " + std::to_string(suite.passed()) + "/100");
  }
  for (std::size_t n = 0; n < kCases; ++n) {
    auto rng = Rng::for_case(cfg.seed, n);
    auto d = random_diagram(rng, cfg.shape);
    std::vector<ProjCone> cs;
    for (std::size_t k = 0; k < cfg.cones; ++k) cs.push_back(random_cone(rng, d, cfg.shape.max_extra));
    o.require(d.size() <= 4, "index too large in case " + std::to_string(n));
    for (const auto& x : d.objects()) o.require(x->size() <= 4, "object too large in case " + std::to_string(n));
    auto b = build_bilimit(d);
    if (identities_only) {
      o.require(approximation_identity(b).ok(), "approximation identity, case " + std::to_string(n));
      o.require(choice_independence(d).ok(), "choice independence, case " + std::to_string(n));
      continue;
    }
    for (const auto& c : cs) {
      ++cones;
      auto m = mediating_projection(b, c);
      auto found = commuting_projections(b, c);
      o.require(found.size() == 1, "case " + std::to_string(n) + ": " + pluralize(found.size(), "commuting projections"));
      o.require(!found.empty() && found.front() == m.proj().assignment(),
                "case " + std::to_string(n) + ": mediating map differs from oracle");
    }
  }
  if (o.pass)
    o.detail = identities_only ? "approximation identity and choice independence on 100 cases"
                               : "100/100 cases, " + pluralize(cones, "cones") + ", unique against brute force";
  return o;
}

// ---- 4: lift monad ----

Outcome lift_monad() {
  Outcome o;
  auto posets = all_posets_up_to(5);
  for (const auto& a : posets) {
    o.require(monad_laws(a).ok(), "monad laws on " + a->name());
    // Encoding oracle: bottom first, then the elements of A shifted by one.
    auto la = lift_poset(a);
    std::vector<Elem> up(a->size());
    for (Elem x = 0; x < a->size(); ++x) up[x] = x + 1;
    o.require(eta(la).assignment() == up, "eta encoding on " + a->name());
    for (Elem u = 0; u < la.size(); ++u)
      for (Elem v = 0; v < la.size(); ++v) {
        bool want = u == 0 || (v != 0 && a->leq(u - 1, v - 1));
        o.require(la.carrier->leq(u, v) == want, "lift order on " + a->name());
      }
    auto lla = lift_poset(la.carrier);
    auto m = mu(la);
    for (Elem w = 0; w < lla.size(); ++w) o.require(m(w) == (w < 2 ? 0 : w - 1), "mu on " + a->name());
  }
  if (o.pass) o.detail = pluralize(posets.size(), "posets") + " with at most 5 elements";
  return o;
}

// ---- 5: partial bilimits ----

Outcome partial_universal() {
  Outcome o;
  auto cfg = SuiteConfig::defaults(DiagramMode::Partial);
  cfg.seed = kSeed;
  cfg.count = kCases;
  auto suite = run_suite(cfg);
  o.require(suite.passed() == kCases, "suite " + std::to_string(suite.passed()) + "/100");
  std::size_t cones = 0;
  for (std::size_t n = 0; n < kCases; ++n) {
    auto rng = Rng::for_case(cfg.seed, n);
    auto d = random_partial_diagram(rng, cfg.shape);
    std::vector<PartialProjCone> cs;
    for (std::size_t k = 0; k < cfg.cones; ++k) cs.push_back(random_partial_cone(rng, d, cfg.shape.max_extra));
    auto b = build_partial_bilimit(d);
    const auto where = "case " + std::to_string(n);
    for (const auto& c : cs) {
      ++cones;
      auto m = mediating_projection_partial(b, c);
      const auto& lh = *c.apex.carrier;
      const auto& ld = *b.lifted_apex.carrier;
      // Termination support: defined exactly where some leg is.
      for (Elem h = 0; h < lh.size(); ++h) {
        bool any = false;
        for (Elem i = 0; i < d.size(); ++i) any = any || support(c.leg(i)(h));
        o.require(support(m.proj()(h)) == any, where + ": termination support");
      }
      for (Elem u = 0; u < ld.size(); ++u) o.require(support(m.emb()(u)) == support(u), where + ": support of e_inf");
      // Every strict monotone L H -> L D_inf that commutes and has a strict
      // left adjoint.
      std::size_t hits = 0;
      for (const auto& p : oracle::monotone_maps(lh, ld)) {
        if (p[0] != 0) continue;
        bool commutes = true;
        for (Elem i = 0; i < d.size() && commutes; ++i)
          for (Elem h = 0; h < lh.size() && commutes; ++h) commutes = b.cone_proj(i)(p[h]) == c.leg(i)(h);
        if (!commutes) continue;
        bool projection = false;
        for (const auto& e : oracle::monotone_maps(ld, lh))
          if (e[0] == 0 && oracle::ep_laws(ld, lh, e, p)) projection = true;
        if (!projection) continue;
        ++hits;
        o.require(p == m.proj().underlying().assignment(), where + ": mediating map differs from oracle");
      }
      o.require(hits == 1, where + ": " + pluralize(hits, "commuting strict projections"));
    }
  }
  if (o.pass) o.detail = "100/100 cases, " + pluralize(cones, "cones") + ", unique against brute force";
  return o;
}

// ---- 6: internal mode ----

// Every presheaf over the 2-chain with stages of at most 3 elements.
std::vector<PresheafPoset> all_presheaves_over_two_chain() {
  auto site = BaseSite::make(chain(2));
  auto stages = all_posets_up_to(3);
  std::vector<PresheafPoset> out;
  for (const auto& low : stages)
    for (const auto& high : stages)
      for (const auto& r : oracle::monotone_maps(*high, *low)) {
        PresheafPoset::RestrictionMap res;
        res.emplace(std::pair<Elem, Elem>{1, 0}, MonotoneMap::make(high, low, r));
        out.push_back(PresheafPoset::make(site, {low, high}, res));
      }
  return out;
}

Outcome internal_mode(const Options& opt) {
  Outcome o;
  auto presheaves = all_presheaves_over_two_chain();
  for (const auto& a : presheaves)
    o.require(internal_monad_laws(a).ok(), "monad laws on a presheaf with stages " +
                                              std::to_string(a.stage(0)->size()) + "," + std::to_string(a.stage(1)->size()));

  auto cfg = SuiteConfig::defaults(DiagramMode::Internal);
  cfg.seed = kSeed;
  cfg.count = kCases;
  auto suite = run_suite(cfg);
  o.require(suite.passed() == kCases, "2-chain suite " + std::to_string(suite.passed()) + "/100");

  auto point = BaseSite::make(chain(1));
  for (std::size_t n = 0; n < kCases; ++n) {
    auto rng = Rng::for_case(kSeed, n);
    auto d = random_internal_diagram(rng, point, cfg.shape);
    auto run = internal_partial_bilimit(d);
    o.require(compare_with_boolean(run.bilimit).ok(), "one-point base, case " + std::to_string(n));
  }

  auto fixture = load_diagram(opt.fixtures / "proper-sieve.diagram");
  o.require(fixture.internal.has_value(), "proper-sieve fixture is not internal");
  if (fixture.internal) {
    auto run = internal_partial_bilimit(*fixture.internal);
    o.require(run.report.ok(), "proper-sieve fixture bilimit");
    auto w = find_proper_support(*run.bilimit.lifted_apex);
    o.require(w.has_value(), "no proper-sieve support in the fixture");
    if (w) {
      const auto& la = *run.bilimit.lifted_apex;
      Sieve s = la.elems[w->first][w->second].support;
      o.require(s != 0 && s != la.base.site().down(w->first), "witness support is not proper");
    }
  }
  if (o.pass)
    o.detail = pluralize(presheaves.size(), "presheaves") + " lawful, 100/100 internal cases, 100 boolean comparisons";
  return o;
}

// ---- 7: solver chains ----

Outcome solver_chains() {
  Outcome o;
  auto lift_chain = iterate_chain(parse_expr("lift X"), empty_poset(), 4, Mode::Partial);
  o.require(lift_chain.level_sizes() == std::vector<std::size_t>{0, 1, 2, 3, 4}, "lift chain sizes");
  for (std::size_t k = 0; k < lift_chain.levels.size(); ++k)
    o.require(is_chain_of(*lift_chain.levels[k], k), "level " + std::to_string(k) + " is not a chain");

  auto arrow_chain = iterate_chain(parse_expr("X -> X"), chain(2), 2, Mode::Total);
  o.require(arrow_chain.level_sizes() == std::vector<std::size_t>{2, 3, 10}, "arrow chain sizes");
  for (std::size_t k = 0; k + 1 < arrow_chain.levels.size(); ++k) {
    const auto& lk = *arrow_chain.levels[k];
    o.require(oracle::monotone_maps(lk, lk).size() == arrow_chain.levels[k + 1]->size(),
              "arrow level " + std::to_string(k + 1) + " against monotone endomaps");
  }
  for (const auto* c : {&lift_chain, &arrow_chain})
    for (std::size_t k = 0; k <= c->depth(); ++k) {
      auto t = truncated_bilimit(*c, k);
      const auto where = c->expr.to_string() + " at " + std::to_string(k);
      o.require(t.report.ok(), "truncation " + where);
      o.require(is_order_iso(*t.apex(), *c->levels[k], t.iso), "realized isomorphism " + where);
    }
  if (o.pass) o.detail = "sizes 0,1,2,3,4 and 2,3,10, every truncation isomorphic";
  return o;
}

// ---- 8: omega-bar ----

Outcome omega_bar_truncations() {
  Outcome o;
  for (std::size_t n = 1; n <= 6; ++n) {
    auto w = omega_bar(n);
    o.require(w.report.ok(), "omega_bar(" + std::to_string(n) + ")");
    for (std::size_t k = 0; k <= n; ++k) o.require(is_chain_of(*w.chain.levels[k], k), "level " + std::to_string(k));
  }
  if (o.pass) o.detail = "n = 1..6";
  return o;
}

// ---- 9: determinism ----

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome determinism(const Options& opt) {
  Outcome o;
  auto cfg = SuiteConfig::defaults(DiagramMode::Total);
  cfg.seed = kSeed;
  cfg.count = kCases;
  cfg.threads = 1;
  auto serial = run_suite(cfg).to_json().dump(2);
  cfg.threads = 4;
  o.require(run_suite(cfg).to_json().dump(2) == serial, "in-process runs differ across thread counts");
  if (opt.cli.empty()) {
    o.require(false, "no --cli given");
    return o;
  }
  auto dir = fs::temp_directory_path() / ("domkit-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::vector<std::string> outputs;
  for (int run = 0; run < 2; ++run) {
    auto out = dir / ("run" + std::to_string(run) + ".json");
    auto cmd = "\"" + opt.cli + "\" verify --seed 42 --count 100 --format json --out \"" + out.string() + "\"";
    o.require(std::system(cmd.c_str()) == 0, "cli run " + std::to_string(run) + " failed");
    outputs.push_back(slurp(out));
  }
  fs::remove_all(dir);
  o.require(!outputs[0].empty() && outputs[0] == outputs[1], "cli outputs differ");
  if (o.pass) o.detail = "two CLI runs byte-identical (" + pluralize(outputs[0].size(), "bytes") + ")";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  opt.fixtures = "fixtures";
  for (int i = 1; i + 1 < argc; i += 2) {
    std::string flag = argv[i];
    if (flag == "--cli") opt.cli = argv[i + 1];
    else if (flag == "--fixtures") opt.fixtures = argv[i + 1];
    else if (flag == "--only") opt.only = std::atoi(argv[i + 1]);
    else {
      std::cerr << "unknown flag " << flag << "\n";
      return 1;
    }
  }

  struct Criterion {
    int number;
    std::string name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {1, "ep-law suite", 10, ep_law_suite},
      {2, "total bilimit universal property", 120, [] { return total_universal(false); }},
      {3, "approximation identity and choice independence", 120, [] { return total_universal(true); }},
      {4, "lift monad laws", 5, lift_monad},
      {5, "partial bilimit universal property", 180, partial_universal},
      {6, "internal mode", 120, [&] { return internal_mode(opt); }},
      {7, "solver chains", 60, solver_chains},
      {8, "omega-bar truncations", 60, omega_bar_truncations},
      {9, "determinism", 120, [&] { return determinism(opt); }},
  };

  bool all = true;
  for (const auto& c : criteria) {
    if (opt.only && opt.only != c.number) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= c.limit_seconds) o.require(false, "took " + std::to_string(secs) + " s");
    all = all && o.pass;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << "criterion " << c.number << " [" << (o.pass ? "PASS" : "FAIL") << "] " << c.name << ": " << o.detail
         << " (" << secs << " s, limit " << c.limit_seconds << " s)";
    std::cout << line.str() << std::endl;
  }
  return all ? 0 : 1;
}

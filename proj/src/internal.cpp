#include "domkit/internal.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <set>

#include "domkit/error.hpp"
#include "domkit/lift.hpp"
#include "domkit/partial.hpp"

namespace domkit {

// ---- base site ----

BaseSite BaseSite::make(PosetPtr base) {
  if (base->size() > 32) fail(ErrorKind::BudgetExceeded, "base sites are limited to 32 points");
  BaseSite s;
  s.base_ = std::move(base);
  const std::size_t n = s.base_->size();
  for (Elem p = 0; p < n; ++p) {
    Sieve d = 0;
    for (Elem q = 0; q < n; ++q)
      if (s.base_->leq(q, p)) d |= Sieve{1} << q;
    s.down_.push_back(d);
  }
  for (Elem p = 0; p < n; ++p) {
    std::vector<Sieve> all;
    const Sieve d = s.down_[p];
    for (Sieve sub = d;; sub = (sub - 1) & d) {
      if (s.is_sieve(p, sub)) all.push_back(sub);
      if (sub == 0) break;
    }
    std::sort(all.begin(), all.end(), [](Sieve a, Sieve b) {
      auto pa = std::popcount(a), pb = std::popcount(b);
      return pa != pb ? pa < pb : a < b;
    });
    s.sieves_.push_back(std::move(all));
  }
  return s;
}

bool BaseSite::is_sieve(Elem p, Sieve s) const {
  if ((s & ~down_.at(p)) != 0) return false;
  for (Elem q = 0; q < size(); ++q)
    if (contains(s, q) && (down_[q] & ~s) != 0) return false;
  return true;
}

std::string BaseSite::sieve_id(Sieve s) const {
  std::string out = "{";
  bool first = true;
  for (Elem q = 0; q < size(); ++q)
    if (contains(s, q)) {
      out += (first ? "" : ",") + base_->id(q);
      first = false;
    }
  return out + "}";
}

// ---- presheaves ----

PresheafPoset PresheafPoset::make(BaseSite site, std::vector<PosetPtr> stages,
                                  const RestrictionMap& restrictions, std::string name) {
  const auto& base = *site.poset();
  const std::size_t n = base.size();
  if (stages.size() != n) fail(ErrorKind::Mismatch, "one stage per base point is required");
  std::vector<std::optional<MonotoneMap>> table(n * n);
  for (const auto& [key, f] : restrictions) {
    auto [p, q] = key;
    if (p >= n || q >= n) fail(ErrorKind::UnknownElement, "restriction outside the base");
    if (!base.leq(q, p))
      fail(ErrorKind::Mismatch, "restriction must go downwards", {base.id(p), base.id(q)});
    if (!domkit::same_shape(f.dom(), stages[p]) || !domkit::same_shape(f.cod(), stages[q]))
      fail(ErrorKind::Mismatch, "restriction endpoints differ from the stages", {base.id(p), base.id(q)});
    table[p * n + q] = f;
  }
  for (Elem p = 0; p < n; ++p)
    if (!table[p * n + p]) table[p * n + p] = MonotoneMap::identity(stages[p]);
  const auto covers = hasse_edges(base);
  for (auto [q, p] : covers)
    if (!table[p * n + q])
      fail(ErrorKind::MissingEdge, "no restriction for a covering pair", {base.id(p), base.id(q)});
  std::function<const MonotoneMap&(Elem, Elem)> get = [&](Elem p, Elem r) -> const MonotoneMap& {
    auto& slot = table[p * n + r];
    if (!slot) {
      for (auto [m, top] : covers) {
        if (top != p || !base.leq(r, m)) continue;
        slot = compose(get(m, r), *table[p * n + m]);
        break;
      }
    }
    return *slot;
  };
  for (Elem p = 0; p < n; ++p)
    for (Elem r = 0; r < n; ++r)
      if (base.leq(r, p)) get(p, r);

  for (Elem p = 0; p < n; ++p)
    if (!(*table[p * n + p] == MonotoneMap::identity(stages[p])))
      fail(ErrorKind::FunctorialityFailure, "restriction to the same point is not the identity",
           {base.id(p), base.id(p), base.id(p)});
  for (Elem p = 0; p < n; ++p)
    for (Elem q = 0; q < n; ++q) {
      if (!base.leq(q, p)) continue;
      for (Elem r = 0; r < n; ++r)
        if (base.leq(r, q) && !(compose(*table[q * n + r], *table[p * n + q]) == *table[p * n + r]))
          fail(ErrorKind::FunctorialityFailure, "restrictions do not compose",
               {base.id(p), base.id(q), base.id(r)});
    }
  return PresheafPoset(std::move(site), std::move(stages), std::move(table), std::move(name));
}

PresheafPoset PresheafPoset::constant(const BaseSite& site, const PosetPtr& p, std::string name) {
  std::vector<PosetPtr> stages(site.size(), p);
  RestrictionMap res;
  for (Elem a = 0; a < site.size(); ++a)
    for (Elem b = 0; b < site.size(); ++b)
      if (site.poset()->leq(b, a)) res.emplace(std::pair{a, b}, MonotoneMap::identity(p));
  return make(site, std::move(stages), res, std::move(name));
}

const MonotoneMap& PresheafPoset::restrict(Elem p, Elem q) const {
  if (p >= size() || q >= size() || !site_.poset()->leq(q, p))
    fail(ErrorKind::MissingEdge, "no restriction between these points", {std::to_string(p), std::to_string(q)});
  return *table_[p * size() + q];
}

bool PresheafPoset::same_shape(const PresheafPoset& other) const {
  if (size() != other.size()) return false;
  for (Elem p = 0; p < size(); ++p)
    if (!domkit::same_shape(stages_[p], other.stages_[p])) return false;
  for (std::size_t k = 0; k < table_.size(); ++k)
    if (table_[k].has_value() != other.table_[k].has_value() ||
        (table_[k] && table_[k]->assignment() != other.table_[k]->assignment()))
      return false;
  return true;
}

NaturalMap NaturalMap::make(PresheafPoset dom, PresheafPoset cod, std::vector<MonotoneMap> components) {
  const std::size_t n = dom.size();
  if (cod.size() != n || components.size() != n)
    fail(ErrorKind::Mismatch, "natural map needs one component per base point");
  const auto& base = *dom.site().poset();
  for (Elem p = 0; p < n; ++p)
    if (!same_shape(components[p].dom(), dom.stage(p)) || !same_shape(components[p].cod(), cod.stage(p)))
      fail(ErrorKind::Mismatch, "component endpoints differ from the stages", {base.id(p)});
  for (Elem p = 0; p < n; ++p)
    for (Elem q = 0; q < n; ++q) {
      if (!base.less(q, p)) continue;
      const auto& rd = dom.restrict(p, q);
      const auto& rc = cod.restrict(p, q);
      for (Elem x = 0; x < dom.stage(p)->size(); ++x)
        if (rc(components[p](x)) != components[q](rd(x)))
          fail(ErrorKind::NotNatural, "component does not commute with restriction",
               {base.id(p), base.id(q), dom.stage(p)->id(x)});
    }
  return NaturalMap(std::move(dom), std::move(cod), std::move(components));
}

NaturalMap NaturalMap::identity(const PresheafPoset& a) {
  std::vector<MonotoneMap> c;
  for (const auto& s : a.stages()) c.push_back(MonotoneMap::identity(s));
  return NaturalMap(a, a, std::move(c));
}

NaturalMap compose(const NaturalMap& g, const NaturalMap& f) {
  if (!f.cod().same_shape(g.dom())) fail(ErrorKind::Mismatch, "natural maps do not compose");
  std::vector<MonotoneMap> c;
  for (Elem p = 0; p < f.dom().size(); ++p) c.push_back(compose(g.at(p), f.at(p)));
  return NaturalMap::make(f.dom(), g.cod(), std::move(c));
}

std::vector<NaturalMap> enumerate_natural_maps(const PresheafPoset& a, const PresheafPoset& b,
                                               const Budget& budget) {
  const auto& base = *a.site().poset();
  const auto order = linear_extension(base);
  const std::size_t n = order.size();
  for (Elem p = 0; p < n; ++p)
    budget.require_functions(a.stage(p)->size(), b.stage(p)->size(), "enumerate_natural_maps");
  std::vector<std::vector<Elem>> chosen(n);
  std::vector<NaturalMap> out;
  std::function<void(std::size_t)> stage = [&](std::size_t k) {
    if (k == n) {
      std::vector<MonotoneMap> c;
      for (Elem p = 0; p < n; ++p) c.push_back(MonotoneMap::make(a.stage(p), b.stage(p), chosen[p]));
      out.push_back(NaturalMap::make(a, b, std::move(c)));
      budget.require_size(out.size(), "enumerate_natural_maps");
      return;
    }
    const Elem p = order[k];
    // Pointwise naturality against every stage already fixed below p.
    auto natural = [&](Elem x, Elem y, std::span<const Elem>) {
      for (Elem q = 0; q < n; ++q)
        if (base.less(q, p) && b.restrict(p, q)(y) != chosen[q][a.restrict(p, q)(x)]) return false;
      return true;
    };
    for_each_monotone(*a.stage(p), *b.stage(p), natural, [&](std::span<const Elem> f) {
      chosen[p].assign(f.begin(), f.end());
      stage(k + 1);
      return true;
    });
  };
  stage(0);
  return out;
}

PresheafPoset omega_presheaf(const BaseSite& site) {
  const std::size_t n = site.size();
  std::vector<PosetPtr> stages;
  for (Elem p = 0; p < n; ++p) {
    const auto& ss = site.sieves(p);
    std::vector<std::string> ids;
    for (Sieve s : ss) ids.push_back(site.sieve_id(s));
    stages.push_back(FinPoset::from_predicate("Omega(" + site.poset()->id(p) + ")", std::move(ids),
                                              [&](Elem a, Elem b) { return (ss[a] & ~ss[b]) == 0; }));
  }
  PresheafPoset::RestrictionMap res;
  for (Elem p = 0; p < n; ++p)
    for (Elem q = 0; q < n; ++q) {
      if (!site.poset()->less(q, p)) continue;
      const auto& from = site.sieves(p);
      const auto& to = site.sieves(q);
      std::vector<Elem> f;
      for (Sieve s : from)
        f.push_back(std::find(to.begin(), to.end(), s & site.down(q)) - to.begin());
      res.emplace(std::pair{p, q}, MonotoneMap::make(stages[p], stages[q], std::move(f)));
    }
  return PresheafPoset::make(site, std::move(stages), res, "Omega");
}

// ---- internal lift ----

Elem InternalLift::find(Elem p, const LiftElem& e) const {
  auto it = lookup.at(p).find(e);
  if (it == lookup.at(p).end())
    fail(ErrorKind::InternalFailure, "not an element of the lift", {base.site().poset()->id(p), elem_id(e)});
  return it->second;
}

std::string InternalLift::elem_id(const LiftElem& e) const {
  const auto& site = base.site();
  std::string out = "{";
  bool first = true;
  for (Elem q = 0; q < site.size(); ++q)
    if (contains(e.support, q)) {
      out += (first ? "" : ",") + site.poset()->id(q) + ":" + base.stage(q)->id(e.family[q]);
      first = false;
    }
  return out + "}";
}

namespace {

LiftElem restrict_elem(const LiftElem& e, Sieve to) {
  LiftElem r{e.support & to, e.family};
  for (Elem q = 0; q < r.family.size(); ++q)
    if (!contains(r.support, q)) r.family[q] = LiftElem::none;
  return r;
}

}  // namespace

LiftPtr internal_lift(const PresheafPoset& a, const Budget& budget) {
  const auto& site = a.site();
  const auto& base = *site.poset();
  const std::size_t n = site.size();
  const auto order = linear_extension(base);
  auto out = std::make_shared<InternalLift>(InternalLift{a, a, {}, {}});
  out->elems.resize(n);
  out->lookup.resize(n);

  for (Elem p = 0; p < n; ++p) {
    auto& elems = out->elems[p];
    for (Sieve s : site.sieves(p)) {
      std::vector<Elem> points;
      for (Elem q : order)
        if (contains(s, q)) points.push_back(q);
      LiftElem cur{s, std::vector<Elem>(n, LiftElem::none)};
      std::function<void(std::size_t)> extend = [&](std::size_t k) {
        if (k == points.size()) {
          elems.push_back(cur);
          budget.require_size(elems.size(), "internal_lift stage");
          return;
        }
        const Elem q = points[k];
        for (Elem x = 0; x < a.stage(q)->size(); ++x) {
          bool ok = true;
          for (std::size_t m = 0; m < k && ok; ++m) {
            const Elem r = points[m];
            if (base.less(r, q)) ok = a.restrict(q, r)(x) == cur.family[r];
          }
          if (!ok) continue;
          cur.family[q] = x;
          extend(k + 1);
        }
        cur.family[q] = LiftElem::none;
      };
      extend(0);
    }
    for (Elem u = 0; u < elems.size(); ++u) out->lookup[p].emplace(elems[u], u);
  }

  std::vector<PosetPtr> stages;
  for (Elem p = 0; p < n; ++p) {
    const auto& elems = out->elems[p];
    std::vector<std::string> ids;
    for (const auto& e : elems) ids.push_back(out->elem_id(e));
    stages.push_back(FinPoset::from_predicate(
        "L" + a.name() + "(" + base.id(p) + ")", std::move(ids), [&](Elem u, Elem v) {
          const auto& x = elems[u];
          const auto& y = elems[v];
          if ((x.support & ~y.support) != 0) return false;
          for (Elem q = 0; q < n; ++q)
            if (contains(x.support, q) && !a.stage(q)->leq(x.family[q], y.family[q])) return false;
          return true;
        }));
  }
  PresheafPoset::RestrictionMap res;
  for (Elem p = 0; p < n; ++p)
    for (Elem q = 0; q < n; ++q) {
      if (!base.less(q, p)) continue;
      std::vector<Elem> f;
      for (const auto& e : out->elems[p]) f.push_back(out->find(q, restrict_elem(e, site.down(q))));
      res.emplace(std::pair{p, q}, MonotoneMap::make(stages[p], stages[q], std::move(f)));
    }
  out->lifted = PresheafPoset::make(site, std::move(stages), res, "L" + a.name());
  return out;
}

NaturalMap internal_eta(const InternalLift& la) {
  const auto& a = la.base;
  const auto& site = a.site();
  std::vector<MonotoneMap> c;
  for (Elem p = 0; p < a.size(); ++p) {
    std::vector<Elem> f;
    for (Elem x = 0; x < a.stage(p)->size(); ++x) {
      LiftElem e{site.down(p), std::vector<Elem>(a.size(), LiftElem::none)};
      for (Elem q = 0; q < a.size(); ++q)
        if (contains(e.support, q)) e.family[q] = a.restrict(p, q)(x);
      f.push_back(la.find(p, e));
    }
    c.push_back(MonotoneMap::make(a.stage(p), la.lifted.stage(p), std::move(f)));
  }
  return NaturalMap::make(a, la.lifted, std::move(c));
}

NaturalMap internal_mu(const InternalLift& la, const InternalLift& lla) {
  if (!lla.base.same_shape(la.lifted)) fail(ErrorKind::Mismatch, "internal_mu: outer lift is not over L A");
  const std::size_t n = la.base.size();
  std::vector<MonotoneMap> c;
  for (Elem p = 0; p < n; ++p) {
    std::vector<Elem> f;
    for (const auto& w : lla.elems[p]) {
      LiftElem z{0, std::vector<Elem>(n, LiftElem::none)};
      for (Elem q = 0; q < n; ++q) {
        if (!contains(w.support, q)) continue;
        const auto& inner = la.elem(q, w.family[q]);
        if (!contains(inner.support, q)) continue;
        z.support |= Sieve{1} << q;
        z.family[q] = inner.family[q];
      }
      f.push_back(la.find(p, z));
    }
    c.push_back(MonotoneMap::make(lla.lifted.stage(p), la.lifted.stage(p), std::move(f)));
  }
  return NaturalMap::make(lla.lifted, la.lifted, std::move(c));
}

NaturalMap internal_lift_map(const NaturalMap& f, const InternalLift& la, const InternalLift& lb) {
  if (!f.dom().same_shape(la.base) || !f.cod().same_shape(lb.base))
    fail(ErrorKind::Mismatch, "internal_lift_map: lifts do not match the map");
  const std::size_t n = la.base.size();
  std::vector<MonotoneMap> c;
  for (Elem p = 0; p < n; ++p) {
    std::vector<Elem> a;
    for (const auto& e : la.elems[p]) {
      LiftElem img = e;
      for (Elem q = 0; q < n; ++q)
        if (contains(e.support, q)) img.family[q] = f(q, e.family[q]);
      a.push_back(lb.find(p, img));
    }
    c.push_back(MonotoneMap::make(la.lifted.stage(p), lb.lifted.stage(p), std::move(a)));
  }
  return NaturalMap::make(la.lifted, lb.lifted, std::move(c));
}

NaturalMap internal_kleisli(const NaturalMap& g, const InternalLift& la, const InternalLift& lb) {
  if (!g.dom().same_shape(la.base) || !g.cod().same_shape(lb.lifted))
    fail(ErrorKind::Mismatch, "internal_kleisli: map is not A -> L B");
  const std::size_t n = la.base.size();
  std::vector<MonotoneMap> c;
  for (Elem p = 0; p < n; ++p) {
    std::vector<Elem> a;
    for (const auto& e : la.elems[p]) {
      LiftElem z{0, std::vector<Elem>(n, LiftElem::none)};
      for (Elem q = 0; q < n; ++q) {
        if (!contains(e.support, q)) continue;
        const auto& v = lb.elem(q, g(q, e.family[q]));
        if (!contains(v.support, q)) continue;
        z.support |= Sieve{1} << q;
        z.family[q] = v.family[q];
      }
      a.push_back(lb.find(p, z));
    }
    c.push_back(MonotoneMap::make(la.lifted.stage(p), lb.lifted.stage(p), std::move(a)));
  }
  return NaturalMap::make(la.lifted, lb.lifted, std::move(c));
}

bool is_internal_strict(const NaturalMap& f, const InternalLift& la, const InternalLift& lb) {
  return internal_kleisli(compose(f, internal_eta(la)), la, lb) == f;
}

Report internal_monad_laws(const PresheafPoset& a, const Budget& budget) {
  Report r("internal monad laws on " + a.name());
  LiftPtr la, lla, llla;
  try {
    la = internal_lift(a, budget);
    lla = internal_lift(la->lifted, budget);
    llla = internal_lift(lla->lifted, budget);
    r.add("lift preserves functoriality", true);
  } catch (const DomainError& e) {
    r.add("lift preserves functoriality", false, e.what());
    return r;
  }
  std::optional<NaturalMap> eta, eta_l, mu, mu_l;
  try {
    eta = internal_eta(*la);
    eta_l = internal_eta(*lla);
    r.add("eta natural", true);
  } catch (const DomainError& e) {
    r.add("eta natural", false, e.what());
    return r;
  }
  try {
    mu = internal_mu(*la, *lla);
    mu_l = internal_mu(*lla, *llla);
    r.add("mu natural", true);
  } catch (const DomainError& e) {
    r.add("mu natural", false, e.what());
    return r;
  }
  const auto id = NaturalMap::identity(la->lifted);
  r.add("mu . L eta = id", compose(*mu, internal_lift_map(*eta, *la, *lla)) == id);
  r.add("mu . eta_L = id", compose(*mu, *eta_l) == id);
  r.add("mu . L mu = mu . mu_L",
        compose(*mu, internal_lift_map(*mu, *llla, *lla)) == compose(*mu, *mu_l));
  r.add("kleisli(eta) = id", internal_kleisli(*eta, *la, *la) == id);

  bool presentation = true, unit = true;
  std::size_t count = 0;
  for (const auto& g : enumerate_natural_maps(a, la->lifted, budget)) {
    auto k = internal_kleisli(g, *la, *la);
    presentation = presentation && k == compose(*mu, internal_lift_map(g, *la, *lla));
    unit = unit && compose(k, *eta) == g;
    if (++count == 256) break;
  }
  r.add("kleisli(g) = mu . L g", presentation, std::to_string(count) + " maps");
  r.add("kleisli(g) . eta = g", unit);
  return r;
}

std::optional<std::pair<Elem, Elem>> find_proper_support(const InternalLift& la) {
  const auto& site = la.base.site();
  for (Elem p = 0; p < la.elems.size(); ++p)
    for (Elem u = 0; u < la.elems[p].size(); ++u) {
      Sieve s = la.elems[p][u].support;
      if (s != 0 && s != site.down(p)) return std::pair{p, u};
    }
  return std::nullopt;
}

Report lift_matches_boolean(const InternalLift& la) {
  Report r("lift against the boolean lift");
  if (la.base.size() != 1) {
    r.add("one-point base", false, std::to_string(la.base.size()) + " points");
    return r;
  }
  auto bl = lift_poset(la.base.stage(0));
  const auto& st = *la.lifted.stage(0);
  std::vector<Elem> phi;
  for (const auto& e : la.elems[0])
    phi.push_back(e.support == 0 ? LiftPoset::bot : LiftPoset::eta(e.family[0]));
  std::set<Elem> image(phi.begin(), phi.end());
  bool iso = phi.size() == bl.size() && image.size() == phi.size();
  for (Elem u = 0; u < phi.size() && iso; ++u)
    for (Elem v = 0; v < phi.size() && iso; ++v) iso = st.leq(u, v) == bl.carrier->leq(phi[u], phi[v]);
  r.add("order isomorphism", iso);
  auto eta = internal_eta(la);
  bool eta_ok = true;
  for (Elem x = 0; x < la.base.stage(0)->size(); ++x)
    eta_ok = eta_ok && phi[eta(0, x)] == LiftPoset::eta(x);
  r.add("carries eta to eta", eta_ok);
  return r;
}

// ---- strict ep-pairs ----

InternalStrictEp InternalStrictEp::make(NaturalMap emb, NaturalMap proj, LiftPtr small, LiftPtr large) {
  if (!emb.dom().same_shape(small->lifted) || !emb.cod().same_shape(large->lifted) ||
      !proj.dom().same_shape(large->lifted) || !proj.cod().same_shape(small->lifted))
    fail(ErrorKind::Mismatch, "internal ep-pair endpoints do not match");
  if (!is_internal_strict(emb, *small, *large)) fail(ErrorKind::NotStrict, "embedding is not strict");
  if (!is_internal_strict(proj, *large, *small)) fail(ErrorKind::NotStrict, "projection is not strict");
  const auto& base = *small->base.site().poset();
  for (Elem p = 0; p < base.size(); ++p) {
    try {
      EpPair::make(emb.at(p), proj.at(p));
    } catch (const DomainError& e) {
      auto w = e.witnesses();
      w.insert(w.begin(), base.id(p));
      fail(e.kind(), std::string("at stage ") + base.id(p) + ": " + e.what(), w);
    }
  }
  return InternalStrictEp(std::move(emb), std::move(proj), std::move(small), std::move(large));
}

InternalStrictEp InternalStrictEp::identity(const LiftPtr& a) {
  auto id = NaturalMap::identity(a->lifted);
  return InternalStrictEp(id, id, a, a);
}

InternalStrictEp compose_internal_ep(const InternalStrictEp& f, const InternalStrictEp& g) {
  if (!f.large()->lifted.same_shape(g.small()->lifted))
    fail(ErrorKind::Mismatch, "internal ep-pairs do not compose");
  return InternalStrictEp::make(compose(g.emb(), f.emb()), compose(f.proj(), g.proj()), f.small(),
                                g.large());
}

std::vector<NaturalMap> enumerate_internal_strict_maps(const InternalLift& la, const InternalLift& lb,
                                                       const Budget& budget) {
  std::vector<NaturalMap> out;
  for (const auto& g : enumerate_natural_maps(la.base, lb.lifted, budget))
    out.push_back(internal_kleisli(g, la, lb));
  return out;
}

namespace {

bool stagewise_ep(const NaturalMap& emb, const NaturalMap& proj) {
  for (Elem p = 0; p < emb.dom().size(); ++p) {
    const auto& e = emb.at(p);
    const auto& q = proj.at(p);
    const auto& big = *e.cod();
    for (Elem x = 0; x < e.dom()->size(); ++x)
      if (q(e(x)) != x) return false;
    for (Elem y = 0; y < big.size(); ++y)
      if (!big.leq(e(q(y)), y)) return false;
  }
  return true;
}

}  // namespace

std::vector<InternalStrictEp> enumerate_internal_strict_eps(const LiftPtr& la, const LiftPtr& lb,
                                                            const Budget& budget) {
  std::vector<NaturalMap> embs;
  for (auto& e : enumerate_internal_strict_maps(*la, *lb, budget)) {
    bool injective = true;
    for (Elem p = 0; p < la->base.size() && injective; ++p) injective = e.at(p).is_injective();
    if (injective) embs.push_back(std::move(e));
  }
  std::vector<InternalStrictEp> out;
  if (embs.empty()) return out;
  auto projs = enumerate_internal_strict_maps(*lb, *la, budget);
  for (const auto& e : embs)
    for (const auto& p : projs)
      if (stagewise_ep(e, p)) out.push_back(InternalStrictEp::make(e, p, la, lb));
  return out;
}

// ---- diagrams ----

InternalDiagram InternalDiagram::make(PosetPtr index, std::vector<LiftPtr> objects, const EdgeMap& edges) {
  if (index->empty()) fail(ErrorKind::EmptyIndex, "diagram index is empty");
  const std::size_t n = index->size();
  if (objects.size() != n) fail(ErrorKind::Mismatch, "one object per index element is required");
  for (const auto& o : objects)
    if (o->base.size() != objects.front()->base.size())
      fail(ErrorKind::Mismatch, "objects live over different bases");
  std::vector<std::optional<InternalStrictEp>> table(n * n);
  for (const auto& [key, e] : edges) {
    auto [i, j] = key;
    if (i >= n || j >= n) fail(ErrorKind::UnknownElement, "edge endpoint outside the index");
    if (!index->leq(i, j))
      fail(ErrorKind::Mismatch, "edge between non-ordered index elements", {index->id(i), index->id(j)});
    if (!e.small()->lifted.same_shape(objects[i]->lifted) || !e.large()->lifted.same_shape(objects[j]->lifted))
      fail(ErrorKind::Mismatch, "edge endpoints differ from the objects", {index->id(i), index->id(j)});
    table[i * n + j] = e;
  }
  for (Elem i = 0; i < n; ++i)
    if (!table[i * n + i]) table[i * n + i] = InternalStrictEp::identity(objects[i]);
  const auto covers = hasse_edges(*index);
  for (auto [i, j] : covers)
    if (!table[i * n + j])
      fail(ErrorKind::MissingEdge, "no edge for a covering pair", {index->id(i), index->id(j)});
  std::function<const InternalStrictEp&(Elem, Elem)> get = [&](Elem i, Elem j) -> const InternalStrictEp& {
    auto& slot = table[i * n + j];
    if (!slot) {
      for (auto [low, m] : covers) {
        if (low != i || !index->leq(m, j)) continue;
        slot = compose_internal_ep(*table[i * n + m], get(m, j));
        break;
      }
    }
    return *slot;
  };
  for (Elem i = 0; i < n; ++i)
    for (Elem j = 0; j < n; ++j)
      if (index->leq(i, j)) get(i, j);
  return InternalDiagram(std::move(index), std::move(objects), std::move(table));
}

const InternalStrictEp& InternalDiagram::edge(Elem i, Elem j) const {
  if (i >= size() || j >= size() || !index_->leq(i, j))
    fail(ErrorKind::MissingEdge, "no edge between these index elements", {std::to_string(i), std::to_string(j)});
  return *edges_[i * size() + j];
}

Elem InternalDiagram::top() const {
  if (auto t = index_->top()) return *t;
  fail(ErrorKind::IndexNotDirected, "index has no greatest element");
}

namespace {

struct Violation {
  ErrorKind kind;
  std::string message;
  std::vector<std::string> witnesses;
};

std::optional<Violation> first_violation(const InternalDiagram& d) {
  const auto& index = *d.index();
  const std::size_t n = d.size();
  for (Elem a = 0; a < n; ++a)
    for (Elem b = a + 1; b < n; ++b)
      if (index.upper_bounds(a, b).empty())
        return Violation{ErrorKind::IndexNotDirected, "pair without an upper bound", {index.id(a), index.id(b)}};
  for (Elem i = 0; i < n; ++i)
    if (!(d.edge(i, i) == InternalStrictEp::identity(d.object(i))))
      return Violation{ErrorKind::FunctorialityFailure, "edge(i,i) is not the identity",
                       {index.id(i), index.id(i), index.id(i)}};
  for (Elem i = 0; i < n; ++i)
    for (Elem j = 0; j < n; ++j) {
      if (!index.leq(i, j)) continue;
      for (Elem k = 0; k < n; ++k) {
        if (!index.leq(j, k)) continue;
        const auto& ij = d.edge(i, j);
        const auto& jk = d.edge(j, k);
        const auto& ik = d.edge(i, k);
        if (!(compose(jk.emb(), ij.emb()) == ik.emb()) || !(compose(ij.proj(), jk.proj()) == ik.proj()))
          return Violation{ErrorKind::FunctorialityFailure, "edge(i,k) differs from edge(j,k) . edge(i,j)",
                           {index.id(i), index.id(j), index.id(k)}};
      }
    }
  return std::nullopt;
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t k = 0; k < parts.size(); ++k) s += (k ? "," : "") + parts[k];
  return s;
}

}  // namespace

Report validate_internal_diagram(const InternalDiagram& d) {
  Report r("internal diagram over " + d.index()->name());
  auto v = first_violation(d);
  r.add("index directed and functorial", !v, v ? std::string(to_string(v->kind)) + "(" + join(v->witnesses) + ")" : "");
  return r;
}

std::optional<Elem> InternalBilimit::find(Elem p, const std::vector<Elem>& tuple) const {
  auto it = lookup.at(p).find(tuple);
  if (it == lookup.at(p).end()) return std::nullopt;
  return it->second;
}

namespace {

bool defined_everywhere(const InternalLift& l, Elem p, Elem u) {
  return l.elem(p, u).support == l.base.site().down(p);
}

std::vector<std::vector<Elem>> stage_tuples(const InternalDiagram& d, Elem p, const Budget& budget) {
  const auto& index = *d.index();
  const auto order = linear_extension(index);
  const std::size_t n = order.size();
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> sigma(n, 0);
  std::function<void(std::size_t)> extend = [&](std::size_t pos) {
    if (pos == n) {
      for (Elem i = 0; i < n; ++i)
        if (defined_everywhere(*d.object(i), p, sigma[i])) {
          out.push_back(sigma);
          budget.require_size(out.size(), "internal bilimit stage");
          break;
        }
      return;
    }
    const Elem i = order[pos];
    for (Elem x = 0; x < d.object(i)->lifted.stage(p)->size(); ++x) {
      bool ok = true;
      for (std::size_t q = 0; q < pos && ok; ++q) {
        const Elem j = order[q];
        if (index.leq(j, i)) ok = d.edge(j, i).proj()(p, x) == sigma[j];
      }
      if (!ok) continue;
      sigma[i] = x;
      extend(pos + 1);
    }
  };
  extend(0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

InternalBilimit build_internal_partial_bilimit(const InternalDiagram& d, const InternalLimits& limits,
                                               const Budget& budget) {
  const auto& site = d.site();
  if (site.size() > limits.max_base)
    fail(ErrorKind::BudgetExceeded, "base has more points than allowed", {std::to_string(site.size())});
  for (Elem i = 0; i < d.size(); ++i)
    for (const auto& s : d.object(i)->base.stages())
      if (s->size() > limits.max_stage)
        fail(ErrorKind::BudgetExceeded, "a stage exceeds the stage limit", {d.index()->id(i), s->name()});
  if (auto v = first_violation(d)) fail(v->kind, v->message, v->witnesses);

  const std::size_t m = site.size();
  const std::size_t n = d.size();
  const auto& base = *site.poset();
  std::vector<std::vector<std::vector<Elem>>> tuples(m);
  std::vector<std::map<std::vector<Elem>, Elem>> lookup(m);
  std::vector<PosetPtr> stages;
  for (Elem p = 0; p < m; ++p) {
    tuples[p] = stage_tuples(d, p, budget);
    for (Elem s = 0; s < tuples[p].size(); ++s) lookup[p].emplace(tuples[p][s], s);
    std::vector<std::string> ids;
    std::vector<PosetPtr> carriers;
    for (Elem i = 0; i < n; ++i) carriers.push_back(d.object(i)->lifted.stage(p));
    for (const auto& t : tuples[p]) ids.push_back(tuple_id(carriers, t));
    const auto& tp = tuples[p];
    stages.push_back(FinPoset::from_predicate("D_inf(" + base.id(p) + ")", std::move(ids), [&](Elem a, Elem b) {
      for (Elem i = 0; i < n; ++i)
        if (!carriers[i]->leq(tp[a][i], tp[b][i])) return false;
      return true;
    }));
  }
  PresheafPoset::RestrictionMap res;
  for (Elem p = 0; p < m; ++p)
    for (Elem q = 0; q < m; ++q) {
      if (!base.less(q, p)) continue;
      std::vector<Elem> f;
      for (const auto& t : tuples[p]) {
        std::vector<Elem> r(n);
        for (Elem i = 0; i < n; ++i) r[i] = d.object(i)->lifted.restrict(p, q)(t[i]);
        auto it = lookup[q].find(r);
        if (it == lookup[q].end())
          fail(ErrorKind::InternalFailure, "apex is not stable under restriction", {base.id(p), base.id(q)});
        f.push_back(it->second);
      }
      res.emplace(std::pair{p, q}, MonotoneMap::make(stages[p], stages[q], std::move(f)));
    }
  auto apex = PresheafPoset::make(site, stages, res, "D_inf");
  auto lifted = internal_lift(apex, budget);
  InternalBilimit b{d, apex, tuples, lifted, {}, lookup, true};

  const auto eta_apex = internal_eta(*lifted);
  for (Elem i = 0; i < n; ++i) {
    const auto& li = *d.object(i);
    std::vector<MonotoneMap> pi, g;
    const auto eta_i = internal_eta(li);
    for (Elem p = 0; p < m; ++p) {
      std::vector<Elem> pa;
      for (const auto& t : tuples[p]) pa.push_back(t[i]);
      pi.push_back(MonotoneMap::make(apex.stage(p), li.lifted.stage(p), std::move(pa)));
      std::vector<Elem> ga;
      for (Elem x = 0; x < li.base.stage(p)->size(); ++x) {
        std::vector<Elem> t(n);
        for (Elem j = 0; j < n; ++j) {
          Elem k = choose_upper_bound(*d.index(), i, j);
          t[j] = d.edge(j, k).proj()(p, d.edge(i, k).emb()(p, eta_i(p, x)));
        }
        auto s = b.find(p, t);
        if (!s)
          fail(ErrorKind::InternalFailure, "cone embedding left the apex", {d.index()->id(i), base.id(p)});
        ga.push_back(eta_apex(p, *s));
      }
      g.push_back(MonotoneMap::make(li.base.stage(p), lifted->lifted.stage(p), std::move(ga)));
    }
    auto proj = internal_kleisli(NaturalMap::make(apex, li.lifted, std::move(pi)), *lifted, li);
    auto emb = internal_kleisli(NaturalMap::make(li.base, lifted->lifted, std::move(g)), li, *lifted);
    b.cone.push_back(InternalStrictEp::make(std::move(emb), std::move(proj), d.object(i), lifted));
  }
  return b;
}

void validate_internal_cone(const InternalDiagram& d, const InternalCone& c) {
  if (c.pairs.size() != d.size()) fail(ErrorKind::ConeInvalid, "one leg per index element required");
  for (Elem i = 0; i < d.size(); ++i)
    if (!c.pairs[i].small()->lifted.same_shape(d.object(i)->lifted) ||
        !c.pairs[i].large()->lifted.same_shape(c.apex->lifted))
      fail(ErrorKind::ConeInvalid, "leg endpoints differ from the diagram", {d.index()->id(i)});
  for (Elem i = 0; i < d.size(); ++i)
    for (Elem j = 0; j < d.size(); ++j)
      if (d.index()->leq(i, j) && !(compose(d.edge(i, j).proj(), c.leg(j)) == c.leg(i)))
        fail(ErrorKind::ConeInvalid, "legs are not natural", {d.index()->id(i), d.index()->id(j)});
}

InternalCone own_cone(const InternalBilimit& b) { return InternalCone{b.lifted_apex, b.cone}; }

InternalCone top_cone(const InternalDiagram& d) {
  const Elem t = d.top();
  InternalCone c{d.object(t), {}};
  for (Elem i = 0; i < d.size(); ++i) c.pairs.push_back(d.edge(i, t));
  return c;
}

InternalCone extend_cone(const InternalCone& c, const InternalStrictEp& onward) {
  InternalCone out{onward.large(), {}};
  for (const auto& e : c.pairs) out.pairs.push_back(compose_internal_ep(e, onward));
  return out;
}

InternalStrictEp internal_mediating(const InternalBilimit& b, const InternalCone& c) {
  const auto& d = b.diagram;
  validate_internal_cone(d, c);
  const auto& site = d.site();
  const auto& base = *site.poset();
  const std::size_t m = site.size();
  const std::size_t n = d.size();
  const auto& lh = *c.apex;
  const auto& la = *b.lifted_apex;

  std::vector<MonotoneMap> pc, ec;
  for (Elem p = 0; p < m; ++p) {
    std::vector<Elem> pa;
    for (Elem h = 0; h < lh.lifted.stage(p)->size(); ++h) {
      LiftElem out{0, std::vector<Elem>(m, LiftElem::none)};
      for (Elem i = 0; i < n; ++i) out.support |= d.object(i)->elem(p, c.leg(i)(p, h)).support;
      for (Elem q = 0; q < m; ++q) {
        if (!contains(out.support, q)) continue;
        const Elem hq = lh.lifted.restrict(p, q)(h);
        std::vector<Elem> t(n);
        for (Elem i = 0; i < n; ++i) t[i] = c.leg(i)(q, hq);
        auto s = b.find(q, t);
        if (!s) fail(ErrorKind::ConeInvalid, "legs are not coherent", {base.id(p), base.id(q)});
        out.family[q] = *s;
      }
      pa.push_back(la.find(p, out));
    }
    pc.push_back(MonotoneMap::make(lh.lifted.stage(p), la.lifted.stage(p), std::move(pa)));

    std::vector<Elem> ea;
    const auto& hp = *lh.lifted.stage(p);
    for (Elem u = 0; u < la.lifted.stage(p)->size(); ++u) {
      std::vector<Elem> family;
      for (Elem i = 0; i < n; ++i) family.push_back(c.adjoint(i)(p, b.cone[i].proj()(p, u)));
      if (!is_directed(hp, family))
        fail(ErrorKind::LubUndefined, "family e_i(pi_i(u)) is not directed",
             {base.id(p), la.lifted.stage(p)->id(u)});
      ea.push_back(directed_lub(hp, family));
    }
    ec.push_back(MonotoneMap::make(la.lifted.stage(p), hp.size() ? lh.lifted.stage(p) : lh.lifted.stage(p),
                                   std::move(ea)));
  }
  auto out = [&] {
    try {
      return InternalStrictEp::make(NaturalMap::make(la.lifted, lh.lifted, std::move(ec)),
                                    NaturalMap::make(lh.lifted, la.lifted, std::move(pc)), b.lifted_apex,
                                    c.apex);
    } catch (const DomainError& err) {
      fail(ErrorKind::InternalFailure, std::string("mediating pair invalid: ") + err.what());
    }
  }();
  for (Elem i = 0; i < n; ++i)
    if (!(compose(b.cone[i].proj(), out.proj()) == c.leg(i)))
      fail(ErrorKind::InternalFailure, "mediating triangle fails", {d.index()->id(i)});
  return out;
}

Report verify_internal_bilimit(const InternalBilimit& b) {
  Report r("internal partial bilimit");
  const auto& d = b.diagram;
  const auto& site = d.site();
  const auto& base = *site.poset();
  const std::size_t m = site.size();
  const std::size_t n = d.size();
  r.merge(validate_internal_diagram(d), "diagram");

  std::optional<std::string> member, all_bottom;
  for (Elem p = 0; p < m; ++p) {
    for (const auto& t : b.tuples[p]) {
      bool some = false;
      for (Elem i = 0; i < n; ++i) {
        some = some || defined_everywhere(*d.object(i), p, t[i]);
        for (Elem j = 0; j < n; ++j)
          if (d.index()->leq(i, j) && d.edge(i, j).proj()(p, t[j]) != t[i] && !member) member = base.id(p);
      }
      if (!some && !member) member = base.id(p);
    }
    if (b.find(p, std::vector<Elem>(n, 0)) && !all_bottom) all_bottom = base.id(p);
  }
  r.add("apex coherent and defined at its stage", !member, member.value_or(""));
  r.add("apex stable under restriction", b.restriction_stable);
  r.add("nowhere-defined tuple excluded", !all_bottom, all_bottom.value_or(""));

  std::optional<std::string> law, natural, strict, kleisli_form;
  const auto& la = *b.lifted_apex;
  for (Elem i = 0; i < n; ++i) {
    const auto& li = *d.object(i);
    const auto& e = b.cone[i].emb();
    const auto& pr = b.cone[i].proj();
    for (Elem p = 0; p < m; ++p)
      if (!(compose(pr.at(p), e.at(p)) == MonotoneMap::identity(li.lifted.stage(p))) ||
          !compose(e.at(p), pr.at(p)).pointwise_leq(MonotoneMap::identity(la.lifted.stage(p))))
        if (!law) law = d.index()->id(i) + " at " + base.id(p);
    for (Elem j = 0; j < n; ++j)
      if (d.index()->leq(i, j) && !(compose(d.edge(i, j).proj(), b.cone[j].proj()) == pr) && !natural)
        natural = d.index()->id(i) + "," + d.index()->id(j);
    if ((!is_internal_strict(e, li, la) || !is_internal_strict(pr, la, li)) && !strict) strict = d.index()->id(i);
    std::vector<MonotoneMap> pi;
    for (Elem p = 0; p < m; ++p) {
      std::vector<Elem> a;
      for (const auto& t : b.tuples[p]) a.push_back(t[i]);
      pi.push_back(MonotoneMap::make(b.apex.stage(p), li.lifted.stage(p), std::move(a)));
    }
    auto pim = NaturalMap::make(b.apex, li.lifted, std::move(pi));
    auto lli = internal_lift(li.lifted);
    if (!(compose(internal_mu(li, *lli), internal_lift_map(pim, la, *lli)) == pr) && !kleisli_form)
      kleisli_form = d.index()->id(i);
  }
  r.add("cone section and deflation at every stage", !law, law.value_or(""));
  r.add("cone naturality", !natural, natural.value_or(""));
  r.add("cone maps strict", !strict, strict.value_or(""));
  r.add("cone_proj(i) = mu . L pi_i", !kleisli_form, kleisli_form.value_or(""));

  std::optional<std::string> approx;
  for (Elem p = 0; p < m && !approx; ++p) {
    const auto& st = *la.lifted.stage(p);
    for (Elem u = 0; u < st.size() && !approx; ++u) {
      std::vector<Elem> family;
      for (Elem i = 0; i < n; ++i) family.push_back(b.cone[i].emb()(p, b.cone[i].proj()(p, u)));
      bool below = std::all_of(family.begin(), family.end(), [&](Elem a) { return st.leq(a, u); });
      if (!below || !is_directed(st, family) || directed_lub(st, family) != u)
        approx = base.id(p) + ": " + st.id(u);
    }
  }
  r.add("approximation identity at every stage", !approx, approx.value_or(""));

  std::optional<std::string> cocone;
  for (Elem i = 0; i < n && !cocone; ++i)
    for (Elem j = 0; j < n && !cocone; ++j)
      if (d.index()->leq(i, j) && !(compose(b.cone[j].emb(), d.edge(i, j).emb()) == b.cone[i].emb()))
        cocone = d.index()->id(i) + "," + d.index()->id(j);
  r.add("colimit/cocone triangles commute", !cocone, cocone.value_or(""));

  // Apex against the top object, stage by stage.
  const Elem t = d.top();
  const auto& lt = *d.object(t);
  std::optional<std::string> iso;
  std::vector<MonotoneMap> comps;
  for (Elem p = 0; p < m && !iso; ++p) {
    std::vector<Elem> f;
    std::set<Elem> seen;
    for (const auto& tu : b.tuples[p]) {
      const auto& e = lt.elem(p, tu[t]);
      if (e.support != site.down(p)) {
        iso = base.id(p);
        break;
      }
      f.push_back(e.family[p]);
      seen.insert(e.family[p]);
    }
    if (iso) break;
    const auto& ap = *b.apex.stage(p);
    if (seen.size() != f.size() || f.size() != lt.base.stage(p)->size()) iso = base.id(p);
    for (Elem a = 0; a < f.size() && !iso; ++a)
      for (Elem c = 0; c < f.size() && !iso; ++c)
        if (ap.leq(a, c) != lt.base.stage(p)->leq(f[a], f[c])) iso = base.id(p);
    if (!iso) comps.push_back(MonotoneMap::make(b.apex.stage(p), lt.base.stage(p), std::move(f)));
  }
  if (!iso) {
    try {
      NaturalMap::make(b.apex, lt.base, comps);
    } catch (const DomainError& e) {
      iso = e.what();
    }
  }
  r.add("top/apex iso top object at every stage", !iso, iso.value_or(""));
  return r;
}

namespace {

std::vector<std::vector<Elem>> key_of(const NaturalMap& f) {
  std::vector<std::vector<Elem>> k;
  for (Elem p = 0; p < f.dom().size(); ++p) k.push_back(f.at(p).assignment());
  return k;
}

// Least element of `stage` above every member of `xs`.
std::optional<Elem> least_upper_bound(const FinPoset& stage, const std::vector<Elem>& xs) {
  std::optional<Elem> best;
  for (Elem u = 0; u < stage.size(); ++u) {
    bool upper = std::all_of(xs.begin(), xs.end(), [&](Elem x) { return stage.leq(x, u); });
    if (!upper) continue;
    if (!best || stage.leq(u, *best)) best = u;
  }
  if (best)
    for (Elem u = 0; u < stage.size(); ++u) {
      bool upper = std::all_of(xs.begin(), xs.end(), [&](Elem x) { return stage.leq(x, u); });
      if (upper && !stage.leq(*best, u)) return std::nullopt;
    }
  return best;
}

}  // namespace

UniversalReport verify_internal_universal(const InternalBilimit& b, const InternalCone& c, const Budget& budget) {
  UniversalReport u;
  u.report = Report("internal universal property");
  const auto& d = b.diagram;
  const auto& site = d.site();
  const auto& base = *site.poset();
  const std::size_t m = site.size();
  const std::size_t n = d.size();
  const auto& la = *b.lifted_apex;
  const auto& lh = *c.apex;

  std::optional<InternalStrictEp> med;
  try {
    med = internal_mediating(b, c);
    u.exists = true;
  } catch (const DomainError& err) {
    u.report.add("mediating projection exists", false, err.what());
    return u;
  }
  u.report.add("mediating projection exists", true);

  std::optional<std::string> lub_bad, tri, adj, support_bad, term_bad;
  const auto omega = omega_presheaf(site);
  for (Elem p = 0; p < m; ++p) {
    const auto& ap = *la.lifted.stage(p);
    for (Elem h = 0; h < lh.lifted.stage(p)->size(); ++h) {
      std::vector<Elem> family, supports;
      for (Elem i = 0; i < n; ++i) {
        family.push_back(b.cone[i].emb()(p, c.leg(i)(p, h)));
        Sieve s = d.object(i)->elem(p, c.leg(i)(p, h)).support;
        const auto& ss = site.sieves(p);
        supports.push_back(std::find(ss.begin(), ss.end(), s) - ss.begin());
      }
      const Elem ph = med->proj()(p, h);
      if ((!is_directed(ap, family) || directed_lub(ap, family) != ph) && !lub_bad)
        lub_bad = base.id(p) + ": " + lh.lifted.stage(p)->id(h);
      auto join = least_upper_bound(*omega.stage(p), supports);
      if ((!join || site.sieves(p)[*join] != la.elem(p, ph).support) && !term_bad)
        term_bad = base.id(p) + ": " + lh.lifted.stage(p)->id(h);
    }
    for (Elem v = 0; v < ap.size(); ++v)
      if (lh.elem(p, med->emb()(p, v)).support != la.elem(p, v).support && !support_bad)
        support_bad = base.id(p) + ": " + ap.id(v);
  }
  for (Elem i = 0; i < n; ++i) {
    if (!(compose(b.cone[i].proj(), med->proj()) == c.leg(i)) && !tri) tri = d.index()->id(i);
    if (!(compose(med->emb(), b.cone[i].emb()) == c.adjoint(i)) && !adj) adj = d.index()->id(i);
  }
  u.report.add("p_inf is the lub of cone_emb(i) . leg(i)", !lub_bad, lub_bad.value_or(""));
  u.report.add("support of p_inf is the join of leg supports in Omega", !term_bad, term_bad.value_or(""));
  u.report.add("triangles commute", !tri, tri.value_or(""));
  u.report.add("e_inf . cone_emb(i) = e_i", !adj, adj.value_or(""));
  u.report.add("support of e_inf is all of D_inf", !support_bad, support_bad.value_or(""));
  u.commutes = u.report.ok();

  std::set<std::vector<std::vector<Elem>>> projections;
  for (const auto& e : enumerate_internal_strict_eps(b.lifted_apex, c.apex, budget))
    projections.insert(key_of(e.proj()));
  std::vector<std::vector<std::vector<Elem>>> winners;
  for (const auto& f : enumerate_internal_strict_maps(lh, la, budget)) {
    ++u.candidates;
    auto key = key_of(f);
    bool is_proj = projections.count(key) > 0;
    if (is_proj) ++u.projections;
    bool commutes = true;
    for (Elem i = 0; i < n && commutes; ++i) commutes = compose(b.cone[i].proj(), f) == c.leg(i);
    if (!commutes) continue;
    ++u.commuting_maps;
    if (is_proj) {
      ++u.commuting_projections;
      winners.push_back(std::move(key));
    }
  }
  u.unique_among_projections = winners.size() == 1 && winners.front() == key_of(med->proj());
  u.report.add("unique among internal strict projections", u.unique_among_projections,
               std::to_string(u.commuting_projections) + " of " + std::to_string(u.projections) +
                   " strict projections commute; " + std::to_string(u.commuting_maps) + " strict maps commute");
  return u;
}

InternalRun internal_partial_bilimit(const InternalDiagram& d, const std::vector<InternalCone>& cones,
                                     const InternalLimits& limits, const Budget& budget) {
  auto b = build_internal_partial_bilimit(d, limits, budget);
  Report r("internal partial bilimit");
  r.merge(verify_internal_bilimit(b));
  r.merge(verify_internal_universal(b, own_cone(b), budget).report, "own cone");
  r.merge(verify_internal_universal(b, top_cone(d), budget).report, "top cone");
  for (std::size_t k = 0; k < cones.size(); ++k)
    r.merge(verify_internal_universal(b, cones[k], budget).report, "cone " + std::to_string(k));
  return InternalRun{std::move(b), std::move(r)};
}

Report compare_with_boolean(const InternalBilimit& b) {
  Report r("internal against boolean");
  const auto& d = b.diagram;
  if (d.site().size() != 1) {
    r.add("one-point base", false, std::to_string(d.site().size()) + " points");
    return r;
  }
  const std::size_t n = d.size();
  auto phi_of = [](const InternalLift& l) {
    std::vector<Elem> phi;
    for (const auto& e : l.elems[0]) phi.push_back(e.support == 0 ? LiftPoset::bot : LiftPoset::eta(e.family[0]));
    return phi;
  };
  std::vector<std::vector<Elem>> phi;
  std::vector<PosetPtr> objects;
  for (Elem i = 0; i < n; ++i) {
    phi.push_back(phi_of(*d.object(i)));
    objects.push_back(d.object(i)->base.stage(0));
    r.merge(lift_matches_boolean(*d.object(i)), "object " + d.index()->id(i));
  }
  auto transport = [&](const MonotoneMap& f, Elem i, Elem j) {
    std::vector<Elem> a(f.dom()->size());
    for (Elem u = 0; u < a.size(); ++u) a[phi[i][u]] = phi[j][f(u)];
    return StrictMap::make(lift_poset(objects[i]), lift_poset(objects[j]), std::move(a));
  };
  PartialEpDiagram::EdgeMap edges;
  for (Elem i = 0; i < n; ++i)
    for (Elem j = 0; j < n; ++j)
      if (d.index()->less(i, j))
        edges.emplace(std::pair{i, j}, StrictEpPair::make(transport(d.edge(i, j).emb().at(0), i, j),
                                                          transport(d.edge(i, j).proj().at(0), j, i)));
  auto bb = build_partial_bilimit(PartialEpDiagram::make(d.index(), objects, edges));

  // psi: internal apex at the point -> boolean apex.
  std::vector<Elem> psi;
  bool iso = b.tuples[0].size() == bb.tuples.size();
  for (const auto& t : b.tuples[0]) {
    std::vector<Elem> bt(n);
    for (Elem i = 0; i < n; ++i) bt[i] = phi[i][t[i]];
    auto s = bb.find(bt);
    if (!s) {
      iso = false;
      break;
    }
    psi.push_back(*s);
  }
  if (iso) {
    const auto& ap = *b.apex.stage(0);
    for (Elem a = 0; a < psi.size() && iso; ++a)
      for (Elem c = 0; c < psi.size() && iso; ++c) iso = ap.leq(a, c) == bb.apex->leq(psi[a], psi[c]);
  }
  r.add("apex isomorphism", iso, std::to_string(bb.apex->size()) + " elements");
  if (!iso) return r;

  auto lpsi = phi_of(*b.lifted_apex);
  for (auto& v : lpsi)
    if (LiftPoset::defined(v)) v = LiftPoset::eta(psi[LiftPoset::value(v)]);
  bool cones_match = true;
  for (Elem i = 0; i < n; ++i) {
    for (Elem u = 0; u < lpsi.size(); ++u)
      cones_match = cones_match && bb.cone_proj(i)(lpsi[u]) == phi[i][b.cone[i].proj()(0, u)];
    for (Elem x = 0; x < phi[i].size(); ++x)
      cones_match = cones_match && lpsi[b.cone[i].emb()(0, x)] == bb.cone_emb(i)(phi[i][x]);
  }
  r.add("cones correspond", cones_match);
  r.add("both verifications pass", verify_partial_bilimit(bb).ok() && verify_internal_bilimit(b).ok());
  return r;
}

}  // namespace domkit

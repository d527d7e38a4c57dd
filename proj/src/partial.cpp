#include "domkit/partial.hpp"

#include <set>

#include "domkit/error.hpp"

namespace domkit {

PartialEpDiagram PartialEpDiagram::make(PosetPtr index, std::vector<PosetPtr> objects,
                                        const EdgeMap& edges) {
  std::vector<PosetPtr> carriers;
  std::vector<LiftPoset> lifts;
  for (const auto& o : objects) {
    lifts.push_back(lift_poset(o));
    carriers.push_back(lifts.back().carrier);
  }
  EpDiagram::EdgeMap total;
  for (const auto& [key, e] : edges) {
    auto [i, j] = key;
    if (i >= objects.size() || j >= objects.size())
      fail(ErrorKind::UnknownElement, "edge endpoint outside the index");
    if (!(e.small() == lifts[i]) || !(e.large() == lifts[j]))
      fail(ErrorKind::Mismatch, "edge endpoints differ from the lifted objects",
           {index->id(i), index->id(j)});
    total.emplace(key, e.total());
  }
  return from_total(objects, EpDiagram::make(std::move(index), std::move(carriers), std::move(total)));
}

PartialEpDiagram PartialEpDiagram::from_total(const std::vector<PosetPtr>& objects,
                                              const EpDiagram& carriers) {
  const std::size_t n = objects.size();
  std::vector<LiftPoset> lifts;
  for (const auto& o : objects) lifts.push_back(lift_poset(o));
  std::vector<std::optional<StrictEpPair>> table(n * n);
  for (Elem i = 0; i < n; ++i)
    for (Elem j = 0; j < n; ++j)
      if (carriers.index()->leq(i, j))
        table[i * n + j] = strict_from_total(carriers.edge(i, j), lifts[i], lifts[j]);
  return PartialEpDiagram(objects, std::move(lifts), carriers, std::move(table));
}

const StrictEpPair& PartialEpDiagram::edge(Elem i, Elem j) const {
  if (i >= size() || j >= size() || !index()->leq(i, j))
    fail(ErrorKind::MissingEdge, "no edge between these index elements",
         {std::to_string(i), std::to_string(j)});
  return *edges_[i * size() + j];
}

Report validate_partial_diagram(const PartialEpDiagram& d) {
  Report r("partial diagram over " + d.index()->name());
  r.merge(validate_diagram(d.carriers()));
  return r;
}

void check_partial_diagram(const PartialEpDiagram& d) { check_diagram(d.carriers()); }

std::optional<Elem> PartialBilimit::find(const std::vector<Elem>& tuple) const {
  auto it = lookup.find(tuple);
  if (it == lookup.end()) return std::nullopt;
  return it->second;
}

PartialBilimit build_partial_bilimit(const PartialEpDiagram& d, const Budget& budget) {
  check_partial_diagram(d);
  const std::size_t n = d.size();
  std::vector<std::vector<Elem>> tuples;
  for (auto& t : coherent_tuples(d.carriers(), budget)) {
    bool some_defined = false;
    for (Elem u : t) some_defined = some_defined || LiftPoset::defined(u);
    if (some_defined) tuples.push_back(std::move(t));
  }
  std::vector<std::string> ids;
  for (const auto& t : tuples) ids.push_back(tuple_id(d.carriers().objects(), t));
  auto apex = FinPoset::from_predicate("D_inf", std::move(ids), [&](Elem s, Elem u) {
    for (Elem i = 0; i < n; ++i)
      if (!d.lifted(i).carrier->leq(tuples[s][i], tuples[u][i])) return false;
    return true;
  });
  PartialBilimit b{d, apex, lift_poset(apex), tuples, {}, {}};
  for (Elem s = 0; s < tuples.size(); ++s) b.lookup.emplace(tuples[s], s);

  const auto& la = b.lifted_apex;
  for (Elem i = 0; i < n; ++i) {
    std::vector<Elem> proj(la.size(), LiftPoset::bot);
    for (Elem s = 0; s < tuples.size(); ++s) proj[LiftPoset::eta(s)] = tuples[s][i];
    std::vector<Elem> emb(d.lifted(i).size(), LiftPoset::bot);
    for (Elem x = 0; x < d.object(i)->size(); ++x) {
      std::vector<Elem> t(n);
      for (Elem j = 0; j < n; ++j) {
        Elem k = choose_upper_bound(*d.index(), i, j);
        t[j] = d.edge(j, k).proj()(d.edge(i, k).emb()(LiftPoset::eta(x)));
      }
      auto s = b.find(t);
      if (!s)
        fail(ErrorKind::InternalFailure, "cone embedding left the apex",
             {d.index()->id(i), d.object(i)->id(x)});
      emb[LiftPoset::eta(x)] = LiftPoset::eta(*s);
    }
    b.cone.push_back(StrictEpPair::make(StrictMap::make(d.lifted(i), la, std::move(emb)),
                                        StrictMap::make(la, d.lifted(i), std::move(proj))));
  }
  return b;
}

Report approximation_identity_partial(const PartialBilimit& b) {
  Report r("partial approximation identity");
  const auto& la = b.lifted_apex;
  const auto& c = *la.carrier;
  std::optional<std::string> not_directed, not_below, wrong_lub, not_least;
  for (Elem u = 0; u < la.size(); ++u) {
    std::vector<Elem> family;
    for (Elem i = 0; i < b.diagram.size(); ++i) {
      Elem a = b.cone_emb(i)(b.cone_proj(i)(u));
      family.push_back(a);
      if (!c.leq(a, u) && !not_below) not_below = c.id(u);
    }
    if (!is_directed(c, family)) {
      if (!not_directed) not_directed = c.id(u);
      continue;
    }
    if (lift_lub(la, family) != u && !wrong_lub) wrong_lub = c.id(u);
    // Any competitor above every approximant is above u.
    for (Elem v = 0; v < la.size(); ++v) {
      bool upper = true;
      for (Elem a : family) upper = upper && c.leq(a, v);
      if (upper && !c.leq(u, v) && !not_least) not_least = c.id(u) + " vs " + c.id(v);
    }
  }
  r.add("approximants directed", !not_directed, not_directed.value_or(""));
  r.add("approximants below element", !not_below, not_below.value_or(""));
  r.add("lub of approximants is the element", !wrong_lub,
        wrong_lub.value_or(std::to_string(la.size()) + " elements"));
  r.add("element below every upper bound", !not_least, not_least.value_or(""));
  return r;
}

std::pair<MonotoneMap, MonotoneMap> partial_top_isomorphism(const PartialBilimit& b) {
  const auto& d = b.diagram;
  const Elem t = d.top();
  std::vector<Elem> to(b.apex->size());
  for (Elem s = 0; s < to.size(); ++s) {
    Elem u = b.tuples[s][t];
    if (!LiftPoset::defined(u))
      fail(ErrorKind::InternalFailure, "apex element undefined at the top", {b.apex->id(s)});
    to[s] = LiftPoset::value(u);
  }
  std::vector<Elem> from(d.object(t)->size());
  for (Elem x = 0; x < from.size(); ++x)
    from[x] = LiftPoset::value(b.cone_emb(t)(LiftPoset::eta(x)));
  auto f = MonotoneMap::make(b.apex, d.object(t), std::move(to));
  auto g = MonotoneMap::make(d.object(t), b.apex, std::move(from));
  if (!(compose(f, g) == MonotoneMap::identity(d.object(t))) ||
      !(compose(g, f) == MonotoneMap::identity(b.apex)))
    fail(ErrorKind::InternalFailure, "apex is not isomorphic to the top object");
  return {f, g};
}

Report verify_partial_bilimit(const PartialBilimit& b) {
  Report r("partial bilimit");
  const auto& d = b.diagram;
  const std::size_t n = d.size();
  r.merge(validate_partial_diagram(d), "diagram");

  std::optional<std::string> bad_member;
  for (Elem s = 0; s < b.tuples.size() && !bad_member; ++s) {
    bool some = false;
    for (Elem i = 0; i < n; ++i) {
      some = some || LiftPoset::defined(b.tuples[s][i]);
      for (Elem j = 0; j < n; ++j)
        if (d.index()->leq(i, j) && d.edge(i, j).proj()(b.tuples[s][j]) != b.tuples[s][i])
          bad_member = b.apex->id(s);
    }
    if (!some) bad_member = b.apex->id(s);
  }
  r.add("apex coherent and somewhere defined", !bad_member, bad_member.value_or(""));
  r.add("all-undefined tuple excluded", !b.find(std::vector<Elem>(n, LiftPoset::bot)));

  std::optional<std::string> law, natural, kleisli_form;
  for (Elem i = 0; i < n; ++i) {
    const auto& p = b.cone_proj(i).underlying();
    const auto& e = b.cone_emb(i).underlying();
    if (!(compose(p, e) == MonotoneMap::identity(d.lifted(i).carrier)) ||
        !compose(e, p).pointwise_leq(MonotoneMap::identity(b.lifted_apex.carrier)))
      if (!law) law = d.index()->id(i);
    for (Elem j = 0; j < n; ++j)
      if (d.index()->leq(i, j) && !(compose(d.edge(i, j).proj(), b.cone_proj(j)) == b.cone_proj(i)) &&
          !natural)
        natural = d.index()->id(i) + "," + d.index()->id(j);
    // pi_i as a total map D_inf -> L D_i, then extended two ways.
    std::vector<Elem> pi(b.apex->size());
    for (Elem s = 0; s < pi.size(); ++s) pi[s] = b.tuples[s][i];
    auto pim = MonotoneMap::make(b.apex, d.lifted(i).carrier, std::move(pi));
    if (!(kleisli(pim, d.lifted(i)) == b.cone_proj(i)) ||
        !(compose(mu(d.lifted(i)), lift_map(pim)) == b.cone_proj(i)))
      if (!kleisli_form) kleisli_form = d.index()->id(i);
  }
  r.add("cone section and deflation", !law, law.value_or(""));
  r.add("cone naturality", !natural, natural.value_or(""));
  r.add("cone_proj(i) = mu . L pi_i", !kleisli_form, kleisli_form.value_or(""));
  r.merge(choice_independence(d.carriers()), "choice");
  r.merge(approximation_identity_partial(b), "approximation");

  std::optional<std::string> cocone;
  for (Elem i = 0; i < n && !cocone; ++i)
    for (Elem j = 0; j < n && !cocone; ++j)
      if (d.index()->leq(i, j) && !(compose(b.cone_emb(j), d.edge(i, j).emb()) == b.cone_emb(i)))
        cocone = d.index()->id(i) + "," + d.index()->id(j);
  r.add("colimit/cocone triangles commute", !cocone, cocone.value_or(""));

  try {
    partial_top_isomorphism(b);
    r.add("top/apex iso top object", true, std::to_string(b.apex->size()) + " elements");
  } catch (const DomainError& err) {
    r.add("top/apex iso top object", false, err.what());
  }
  return r;
}

void validate_partial_cone(const PartialEpDiagram& d, const PartialProjCone& c) {
  if (c.pairs.size() != d.size()) fail(ErrorKind::ConeInvalid, "one leg per index element required");
  for (Elem i = 0; i < d.size(); ++i)
    if (!(c.pairs[i].small() == d.lifted(i)) || !(c.pairs[i].large() == c.apex))
      fail(ErrorKind::ConeInvalid, "leg endpoints differ from the diagram", {d.index()->id(i)});
  for (Elem i = 0; i < d.size(); ++i)
    for (Elem j = 0; j < d.size(); ++j)
      if (d.index()->leq(i, j) && !(compose(d.edge(i, j).proj(), c.leg(j)) == c.leg(i)))
        fail(ErrorKind::ConeInvalid, "legs are not natural", {d.index()->id(i), d.index()->id(j)});
}

PartialProjCone own_cone(const PartialBilimit& b) { return PartialProjCone{b.lifted_apex, b.cone}; }

PartialProjCone top_cone(const PartialEpDiagram& d) {
  const Elem t = d.top();
  PartialProjCone c{d.lifted(t), {}};
  for (Elem i = 0; i < d.size(); ++i) c.pairs.push_back(d.edge(i, t));
  return c;
}

PartialProjCone extend_cone(const PartialProjCone& c, const StrictEpPair& onward) {
  PartialProjCone out{onward.large(), {}};
  for (const auto& e : c.pairs) out.pairs.push_back(compose_strict_ep(e, onward));
  return out;
}

StrictMap termination_support(const PartialProjCone& c) {
  auto l1 = lift_poset(unit_poset());
  std::vector<Elem> a(c.apex.size(), LiftPoset::bot);
  for (Elem h = 0; h < a.size(); ++h)
    for (Elem i = 0; i < c.pairs.size(); ++i)
      if (LiftPoset::defined(c.leg(i)(h))) a[h] = LiftPoset::eta(0);
  return StrictMap::make(c.apex, l1, std::move(a));
}

Report termination_support_report(const PartialProjCone& c) {
  Report r("termination support");
  auto s = termination_support(c);
  const auto& l1 = s.cod();
  std::optional<std::string> bad;
  for (Elem h = 0; h < c.apex.size() && !bad; ++h) {
    std::vector<Elem> per_leg;
    for (Elem i = 0; i < c.pairs.size(); ++i)
      per_leg.push_back(LiftPoset::defined(c.leg(i)(h)) ? LiftPoset::eta(0) : LiftPoset::bot);
    Elem join = per_leg.empty() ? LiftPoset::bot : lift_lub(l1, per_leg);
    if (join != s(h)) bad = c.apex.carrier->id(h);
  }
  r.add("support is the join of leg supports", !bad, bad.value_or(""));
  r.add("support is strict", s(LiftPoset::bot) == LiftPoset::bot);
  return r;
}

StrictEpPair mediating_projection_partial(const PartialBilimit& b, const PartialProjCone& c) {
  const auto& d = b.diagram;
  validate_partial_cone(d, c);
  const std::size_t n = d.size();
  const auto support = termination_support(c);
  const auto& lh = c.apex;
  const auto& la = b.lifted_apex;

  std::vector<Elem> p(lh.size(), LiftPoset::bot);
  for (Elem h = 0; h < lh.size(); ++h) {
    if (!LiftPoset::defined(support(h))) continue;
    std::vector<Elem> t(n);
    for (Elem i = 0; i < n; ++i) t[i] = c.leg(i)(h);
    auto s = b.find(t);
    if (!s) fail(ErrorKind::ConeInvalid, "legs at an element are not coherent", {lh.carrier->id(h)});
    p[h] = LiftPoset::eta(*s);
  }
  std::vector<Elem> e(la.size(), LiftPoset::bot);
  for (Elem u = 0; u < la.size(); ++u) {
    std::vector<Elem> family;
    for (Elem i = 0; i < n; ++i) family.push_back(c.adjoint(i)(b.cone_proj(i)(u)));
    if (!is_directed(*lh.carrier, family))
      fail(ErrorKind::LubUndefined, "family e_i(pi_i(u)) is not directed", {la.carrier->id(u)});
    e[u] = lift_lub(lh, family);
  }
  auto pm = StrictMap::make(lh, la, std::move(p));
  auto em = StrictMap::make(la, lh, std::move(e));
  StrictEpPair out = [&] {
    try {
      return StrictEpPair::make(em, pm);
    } catch (const DomainError& err) {
      fail(ErrorKind::InternalFailure, std::string("mediating pair invalid: ") + err.what());
    }
  }();
  for (Elem i = 0; i < n; ++i)
    if (!(compose(b.cone_proj(i), out.proj()) == c.leg(i)))
      fail(ErrorKind::InternalFailure, "mediating triangle fails", {d.index()->id(i)});
  return out;
}

Report mediating_alternatives_partial(const PartialBilimit& b, const PartialProjCone& c,
                                      const StrictEpPair& m) {
  Report r("partial mediating map");
  const auto& d = b.diagram;
  const auto& la = b.lifted_apex;
  std::optional<std::string> lub_bad;
  for (Elem h = 0; h < c.apex.size() && !lub_bad; ++h) {
    std::vector<Elem> family;
    for (Elem i = 0; i < d.size(); ++i) family.push_back(b.cone_emb(i)(c.leg(i)(h)));
    if (!is_directed(*la.carrier, family) || lift_lub(la, family) != m.proj()(h))
      lub_bad = c.apex.carrier->id(h);
  }
  r.add("p_inf is the lub of cone_emb(i) . leg(i)", !lub_bad, lub_bad.value_or(""));

  std::optional<std::string> tri, chase, adj;
  for (Elem i = 0; i < d.size(); ++i) {
    if (!(compose(b.cone_proj(i), m.proj()) == c.leg(i)) && !tri) tri = d.index()->id(i);
    if (!(compose(m.emb(), b.cone_emb(i)) == c.adjoint(i)) && !adj) adj = d.index()->id(i);
    for (Elem s = 0; s < b.apex->size(); ++s) {
      Elem u = LiftPoset::eta(s);
      if (b.cone_proj(i)(m.proj()(m.emb()(u))) != b.cone_proj(i)(u) && !chase)
        chase = d.index()->id(i) + " at " + b.apex->id(s);
    }
  }
  r.add("triangles commute", !tri, tri.value_or(""));
  r.add("e_inf . cone_emb(i) = e_i", !adj, adj.value_or(""));
  r.add("pi_i . p_inf . e_inf = pi_i on apex elements", !chase, chase.value_or(""));
  auto back = embedding_for_projection(m.proj().underlying());
  r.add("e_inf is the left adjoint of p_inf", back && back->emb() == m.emb().underlying());
  return r;
}

Report support_of_e_infinity(const PartialBilimit& b, const StrictEpPair& m) {
  Report r("support of e_inf");
  std::optional<std::string> bad;
  for (Elem u = 0; u < b.lifted_apex.size() && !bad; ++u)
    if (LiftPoset::defined(m.emb()(u)) != LiftPoset::defined(u)) bad = b.lifted_apex.carrier->id(u);
  r.add("e_inf defined exactly on defined elements", !bad, bad.value_or(""));
  return r;
}

UniversalReport verify_universal_partial(const PartialBilimit& b, const PartialProjCone& c,
                                         const Budget& budget) {
  UniversalReport u;
  u.report = Report("partial universal property");
  const auto& d = b.diagram;
  const auto& lh = *c.apex.carrier;
  const auto& la = *b.lifted_apex.carrier;
  budget.require_functions(lh.size(), la.size(), "verify_universal_partial");

  std::optional<StrictEpPair> m;
  try {
    m = mediating_projection_partial(b, c);
    u.exists = true;
  } catch (const DomainError& err) {
    u.report.add("mediating projection exists", false, err.what());
    return u;
  }
  u.report.add("mediating projection exists", true);
  u.report.merge(mediating_alternatives_partial(b, c, *m), "mediating");
  u.report.merge(support_of_e_infinity(b, *m), "support");
  u.report.merge(termination_support_report(c), "termination");
  u.commutes = u.report.ok();

  std::set<std::vector<Elem>> projections;
  for (const auto& e : enumerate_strict_ep_pairs(b.lifted_apex, c.apex, budget))
    projections.insert(e.proj().underlying().assignment());

  std::vector<std::vector<Elem>> winners;
  auto strict = [](Elem x, Elem y, std::span<const Elem>) {
    return x != LiftPoset::bot || y == LiftPoset::bot;
  };
  for_each_monotone(lh, la, strict, [&](std::span<const Elem> f) {
    ++u.candidates;
    bool is_proj = projections.count(std::vector<Elem>(f.begin(), f.end())) > 0;
    if (is_proj) ++u.projections;
    bool commutes = true;
    for (Elem i = 0; i < d.size() && commutes; ++i)
      for (Elem h = 0; h < f.size() && commutes; ++h)
        commutes = b.cone_proj(i)(f[h]) == c.leg(i)(h);
    if (commutes) {
      ++u.commuting_maps;
      if (is_proj) {
        ++u.commuting_projections;
        winners.emplace_back(f.begin(), f.end());
      }
    }
    return true;
  });
  u.unique_among_projections =
      winners.size() == 1 && winners.front() == m->proj().underlying().assignment();
  u.report.add("unique among strict projections", u.unique_among_projections,
               std::to_string(u.commuting_projections) + " of " + std::to_string(u.projections) +
                   " strict projections commute; " + std::to_string(u.commuting_maps) +
                   " strict maps commute");
  return u;
}

}  // namespace domkit

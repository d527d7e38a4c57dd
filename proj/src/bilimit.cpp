#include "domkit/bilimit.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "domkit/error.hpp"

namespace domkit {

namespace {

std::vector<std::string> index_ids(const FinPoset& index, std::initializer_list<Elem> xs) {
  std::vector<std::string> out;
  for (Elem x : xs) out.push_back(index.id(x));
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t k = 0; k < parts.size(); ++k) s += (k ? "," : "") + parts[k];
  return s;
}

}  // namespace

EpDiagram EpDiagram::make(PosetPtr index, std::vector<PosetPtr> objects, EdgeMap edges) {
  if (index->empty()) fail(ErrorKind::EmptyIndex, "diagram index is empty");
  const std::size_t n = index->size();
  if (objects.size() != n) fail(ErrorKind::Mismatch, "one object per index element is required");
  std::vector<std::optional<EpPair>> table(n * n);
  for (auto& [key, e] : edges) {
    auto [i, j] = key;
    if (i >= n || j >= n) fail(ErrorKind::UnknownElement, "edge endpoint outside the index");
    if (!index->leq(i, j))
      fail(ErrorKind::Mismatch, "edge between non-ordered index elements", index_ids(*index, {i, j}));
    if (!same_shape(e.small(), objects[i]) || !same_shape(e.large(), objects[j]))
      fail(ErrorKind::Mismatch, "edge endpoints differ from the objects", index_ids(*index, {i, j}));
    table[i * n + j] = e;
  }
  for (Elem i = 0; i < n; ++i)
    if (!table[i * n + i]) table[i * n + i] = EpPair::identity(objects[i]);
  for (auto [i, j] : hasse_edges(*index))
    if (!table[i * n + j])
      fail(ErrorKind::MissingEdge, "no edge for a covering pair", index_ids(*index, {i, j}));

  std::function<const EpPair&(Elem, Elem)> get = [&](Elem i, Elem j) -> const EpPair& {
    auto& slot = table[i * n + j];
    if (!slot) {
      for (Elem m = 0; m < n; ++m) {
        if (!index->less(i, m) || !index->leq(m, j) || !table[i * n + m]) continue;
        bool covering = true;
        for (Elem c = 0; c < n && covering; ++c)
          if (index->less(i, c) && index->less(c, m)) covering = false;
        if (!covering) continue;
        slot = compose_ep(*table[i * n + m], get(m, j));
        break;
      }
    }
    return *slot;
  };
  for (Elem i = 0; i < n; ++i)
    for (Elem j = 0; j < n; ++j)
      if (index->leq(i, j)) get(i, j);
  return EpDiagram(std::move(index), std::move(objects), std::move(table));
}

const EpPair& EpDiagram::edge(Elem i, Elem j) const {
  if (i >= size() || j >= size() || !index_->leq(i, j))
    fail(ErrorKind::MissingEdge, "no edge between these index elements",
         {std::to_string(i), std::to_string(j)});
  return *edges_[i * size() + j];
}

Elem EpDiagram::top() const {
  if (auto t = index_->top()) return *t;
  fail(ErrorKind::IndexNotDirected, "index has no greatest element");
}

namespace {

struct Violation {
  ErrorKind kind;
  std::string message;
  std::vector<std::string> witnesses;
};

std::optional<Violation> index_violation(const FinPoset& index) {
  const std::size_t n = index.size();
  for (Elem a = 0; a < n; ++a)
    for (Elem b = a + 1; b < n; ++b)
      if (index.upper_bounds(a, b).empty())
        return Violation{ErrorKind::IndexNotDirected, "pair without an upper bound",
                         index_ids(index, {a, b})};
  return std::nullopt;
}

std::vector<Violation> functoriality_violations(const EpDiagram& d, bool first_only) {
  std::vector<Violation> out;
  const auto& index = *d.index();
  const std::size_t n = d.size();
  for (Elem i = 0; i < n; ++i) {
    const auto& e = d.edge(i, i);
    if (!(e.emb() == MonotoneMap::identity(d.object(i))) ||
        !(e.proj() == MonotoneMap::identity(d.object(i)))) {
      out.push_back({ErrorKind::FunctorialityFailure, "edge(i,i) is not the identity",
                     index_ids(index, {i, i, i})});
      if (first_only) return out;
    }
  }
  for (Elem i = 0; i < n; ++i)
    for (Elem j = 0; j < n; ++j) {
      if (!index.leq(i, j)) continue;
      for (Elem k = 0; k < n; ++k) {
        if (!index.leq(j, k)) continue;
        const auto& ij = d.edge(i, j);
        const auto& jk = d.edge(j, k);
        const auto& ik = d.edge(i, k);
        if (compose(jk.emb(), ij.emb()) == ik.emb() && compose(ij.proj(), jk.proj()) == ik.proj())
          continue;
        out.push_back({ErrorKind::FunctorialityFailure,
                       "edge(i,k) differs from edge(j,k) . edge(i,j)", index_ids(index, {i, j, k})});
        if (first_only) return out;
      }
    }
  return out;
}

}  // namespace

Report validate_diagram(const EpDiagram& d) {
  Report r("diagram over " + d.index()->name());
  auto iv = index_violation(*d.index());
  r.add("index directed", !iv, iv ? join(iv->witnesses) : "");
  auto fv = functoriality_violations(d, false);
  r.add("functoriality", fv.empty(),
        fv.empty() ? "" : "(" + join(fv.front().witnesses) + ") and " +
                              std::to_string(fv.size() - 1) + " more");
  return r;
}

void check_diagram(const EpDiagram& d) {
  if (auto iv = index_violation(*d.index())) fail(iv->kind, iv->message, iv->witnesses);
  auto fv = functoriality_violations(d, true);
  if (!fv.empty()) fail(fv.front().kind, fv.front().message, fv.front().witnesses);
}

Elem choose_upper_bound(const FinPoset& index, Elem i, Elem j) {
  for (Elem k : linear_extension(index))
    if (index.leq(i, k) && index.leq(j, k)) return k;
  fail(ErrorKind::IndexNotDirected, "no upper bound", index_ids(index, {i, j}));
}

std::string tuple_id(const std::vector<PosetPtr>& objects, const std::vector<Elem>& tuple) {
  std::string s = "(";
  for (std::size_t i = 0; i < tuple.size(); ++i) s += (i ? "," : "") + objects[i]->id(tuple[i]);
  return s + ")";
}

std::optional<Elem> Bilimit::find(const std::vector<Elem>& tuple) const {
  auto it = lookup.find(tuple);
  if (it == lookup.end()) return std::nullopt;
  return it->second;
}

// Built along a linear extension so each new component is checked against
// everything below it.
std::vector<std::vector<Elem>> coherent_tuples(const EpDiagram& d, const Budget& budget) {
  const auto& index = *d.index();
  const auto order = linear_extension(index);
  const std::size_t n = order.size();
  std::vector<std::vector<Elem>> out;
  std::vector<Elem> sigma(n, 0);
  std::function<void(std::size_t)> extend = [&](std::size_t pos) {
    if (pos == n) {
      out.push_back(sigma);
      budget.require_size(out.size(), "bilimit apex");
      return;
    }
    const Elem i = order[pos];
    for (Elem x = 0; x < d.object(i)->size(); ++x) {
      bool ok = true;
      for (std::size_t q = 0; q < pos && ok; ++q) {
        const Elem j = order[q];
        if (index.leq(j, i)) ok = d.edge(j, i).proj()(x) == sigma[j];
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

Bilimit build_bilimit(const EpDiagram& d, const Budget& budget) {
  check_diagram(d);
  const std::size_t n = d.size();
  auto tuples = coherent_tuples(d, budget);
  std::vector<std::string> ids;
  for (const auto& t : tuples) ids.push_back(tuple_id(d.objects(), t));
  auto apex = FinPoset::from_predicate("D_inf", std::move(ids), [&](Elem s, Elem u) {
    for (Elem i = 0; i < n; ++i)
      if (!d.object(i)->leq(tuples[s][i], tuples[u][i])) return false;
    return true;
  });
  Bilimit b{d, apex, tuples, {}, {}};
  for (Elem s = 0; s < tuples.size(); ++s) b.lookup.emplace(tuples[s], s);

  for (Elem i = 0; i < n; ++i) {
    std::vector<Elem> proj(tuples.size());
    for (Elem s = 0; s < tuples.size(); ++s) proj[s] = tuples[s][i];
    std::vector<Elem> emb(d.object(i)->size());
    for (Elem x = 0; x < emb.size(); ++x) {
      std::vector<Elem> t(n);
      for (Elem j = 0; j < n; ++j) {
        Elem k = choose_upper_bound(*d.index(), i, j);
        t[j] = d.edge(j, k).proj()(d.edge(i, k).emb()(x));
      }
      auto s = b.find(t);
      if (!s)
        fail(ErrorKind::InternalFailure, "cone embedding left the apex",
             {d.index()->id(i), d.object(i)->id(x)});
      emb[x] = *s;
    }
    b.cone.push_back(EpPair::make(MonotoneMap::make(d.object(i), apex, std::move(emb)),
                                  MonotoneMap::make(apex, d.object(i), std::move(proj))));
  }
  return b;
}

Report choice_independence(const EpDiagram& d, Elem i, Elem j) {
  const auto& index = *d.index();
  Report r("choice independence " + index.id(i) + "," + index.id(j));
  std::vector<Elem> bounds;
  for (Elem k = 0; k < d.size(); ++k)
    if (index.leq(i, k) && index.leq(j, k)) bounds.push_back(k);
  if (bounds.size() <= 1) {
    r.add("composite independent of k", !bounds.empty(), bounds.empty() ? "no upper bound" : "vacuous");
    return r;
  }
  auto via = [&](Elem k) { return compose(d.edge(j, k).proj(), d.edge(i, k).emb()); };
  const auto ref = via(bounds.front());
  for (std::size_t q = 1; q < bounds.size(); ++q) {
    auto other = via(bounds[q]);
    if (other == ref) continue;
    for (Elem x = 0; x < d.object(i)->size(); ++x)
      if (other(x) != ref(x)) {
        r.add("composite independent of k", false,
              "k=" + index.id(bounds.front()) + " vs k=" + index.id(bounds[q]) + " at " +
                  d.object(i)->id(x));
        return r;
      }
  }
  r.add("composite independent of k", true, std::to_string(bounds.size()) + " upper bounds");
  return r;
}

Report choice_independence(const EpDiagram& d) {
  Report r("choice independence");
  std::size_t pairs = 0;
  for (Elem i = 0; i < d.size(); ++i)
    for (Elem j = 0; j < d.size(); ++j) {
      auto sub = choice_independence(d, i, j);
      ++pairs;
      if (!sub.ok()) {
        r.add("all pairs", false,
              d.index()->id(i) + "," + d.index()->id(j) + ": " + sub.first_failure()->detail);
        return r;
      }
    }
  r.add("all pairs", true, std::to_string(pairs) + " pairs");
  return r;
}

Report approximation_identity(const Bilimit& b) {
  Report r("approximation identity");
  const auto& apex = *b.apex;
  std::optional<std::string> not_directed, not_below, wrong_lub;
  for (Elem s = 0; s < apex.size(); ++s) {
    std::vector<Elem> family;
    for (Elem i = 0; i < b.diagram.size(); ++i) {
      Elem a = b.cone_emb(i)(b.cone_proj(i)(s));
      family.push_back(a);
      if (!apex.leq(a, s) && !not_below) not_below = apex.id(s) + " at " + b.diagram.index()->id(i);
    }
    if (!is_directed(apex, family)) {
      if (!not_directed) not_directed = apex.id(s);
      continue;
    }
    if (directed_lub(apex, family) != s && !wrong_lub) wrong_lub = apex.id(s);
  }
  r.add("approximants directed", !not_directed, not_directed.value_or(""));
  r.add("approximants below element", !not_below, not_below.value_or(""));
  r.add("lub of approximants is the element", !wrong_lub,
        wrong_lub.value_or(std::to_string(apex.size()) + " elements"));
  return r;
}

Report colimit_view(const Bilimit& b) {
  Report r("colimit view");
  const auto& d = b.diagram;
  std::optional<std::string> bad;
  for (Elem i = 0; i < d.size() && !bad; ++i)
    for (Elem j = 0; j < d.size() && !bad; ++j)
      if (d.index()->leq(i, j) && !(compose(b.cone_emb(j), d.edge(i, j).emb()) == b.cone_emb(i)))
        bad = d.index()->id(i) + "," + d.index()->id(j);
  r.add("cocone triangles commute", !bad, bad.value_or(""));
  return r;
}

Report top_isomorphism(const Bilimit& b) {
  Report r("top isomorphism");
  const Elem t = b.diagram.top();
  const auto& p = b.cone_proj(t);
  const auto& e = b.cone_emb(t);
  bool inverse = compose(p, e) == MonotoneMap::identity(b.diagram.object(t)) &&
                 compose(e, p) == MonotoneMap::identity(b.apex);
  r.add("apex iso top object", inverse,
        "top " + b.diagram.index()->id(t) + ", " + std::to_string(b.apex->size()) + " elements");
  return r;
}

Report verify_bilimit(const Bilimit& b) {
  Report r("bilimit");
  const auto& d = b.diagram;
  r.merge(validate_diagram(d), "diagram");

  std::optional<std::string> incoherent;
  for (Elem s = 0; s < b.tuples.size() && !incoherent; ++s)
    for (Elem i = 0; i < d.size(); ++i)
      for (Elem j = 0; j < d.size(); ++j)
        if (d.index()->leq(i, j) && d.edge(i, j).proj()(b.tuples[s][j]) != b.tuples[s][i])
          incoherent = b.apex->id(s);
  r.add("apex coherence", !incoherent, incoherent.value_or(""));

  std::optional<std::string> law, natural;
  for (Elem i = 0; i < d.size(); ++i) {
    const auto& p = b.cone_proj(i);
    const auto& e = b.cone_emb(i);
    if (!(compose(p, e) == MonotoneMap::identity(d.object(i))) ||
        !compose(e, p).pointwise_leq(MonotoneMap::identity(b.apex)))
      if (!law) law = d.index()->id(i);
    for (Elem j = 0; j < d.size(); ++j)
      if (d.index()->leq(i, j) && !(compose(d.edge(i, j).proj(), b.cone_proj(j)) == p) && !natural)
        natural = d.index()->id(i) + "," + d.index()->id(j);
  }
  r.add("cone section and deflation", !law, law.value_or(""));
  r.add("cone naturality", !natural, natural.value_or(""));
  r.merge(choice_independence(d), "choice");
  r.merge(approximation_identity(b), "approximation");
  r.merge(colimit_view(b), "colimit");
  r.merge(top_isomorphism(b), "top");
  return r;
}

void validate_cone(const EpDiagram& d, const ProjCone& c) {
  if (c.pairs.size() != d.size()) fail(ErrorKind::ConeInvalid, "one leg per index element required");
  for (Elem i = 0; i < d.size(); ++i) {
    const auto& e = c.pairs[i];
    if (!same_shape(e.small(), d.object(i)) || !same_shape(e.large(), c.apex))
      fail(ErrorKind::ConeInvalid, "leg endpoints differ from the diagram", {d.index()->id(i)});
  }
  for (Elem i = 0; i < d.size(); ++i)
    for (Elem j = 0; j < d.size(); ++j)
      if (d.index()->leq(i, j) && !(compose(d.edge(i, j).proj(), c.leg(j)) == c.leg(i)))
        fail(ErrorKind::ConeInvalid, "legs are not natural", index_ids(*d.index(), {i, j}));
}

ProjCone own_cone(const Bilimit& b) { return ProjCone{b.apex, b.cone}; }

ProjCone top_cone(const EpDiagram& d) {
  const Elem t = d.top();
  ProjCone c{d.object(t), {}};
  for (Elem i = 0; i < d.size(); ++i) c.pairs.push_back(d.edge(i, t));
  return c;
}

ProjCone extend_cone(const ProjCone& c, const EpPair& onward) {
  ProjCone out{onward.large(), {}};
  for (const auto& e : c.pairs) out.pairs.push_back(compose_ep(e, onward));
  return out;
}

EpPair mediating_projection(const Bilimit& b, const ProjCone& c) {
  const auto& d = b.diagram;
  validate_cone(d, c);
  const auto& h = *c.apex;
  const std::size_t n = d.size();

  std::vector<Elem> p(h.size());
  for (Elem x = 0; x < h.size(); ++x) {
    std::vector<Elem> t(n);
    for (Elem i = 0; i < n; ++i) t[i] = c.leg(i)(x);
    auto s = b.find(t);
    if (!s) fail(ErrorKind::ConeInvalid, "legs at an element are not coherent", {h.id(x)});
    p[x] = *s;
  }
  std::vector<Elem> e(b.apex->size());
  for (Elem s = 0; s < e.size(); ++s) {
    std::vector<Elem> family;
    for (Elem i = 0; i < n; ++i) family.push_back(c.adjoint(i)(b.tuples[s][i]));
    if (!is_directed(h, family))
      fail(ErrorKind::LubUndefined, "family e_i(pi_i(s)) is not directed", {b.apex->id(s)});
    e[s] = directed_lub(h, family);
  }
  auto pm = MonotoneMap::make(c.apex, b.apex, std::move(p));
  auto em = MonotoneMap::make(b.apex, c.apex, std::move(e));
  EpPair out = [&] {
    try {
      return EpPair::make(em, pm);
    } catch (const DomainError& err) {
      fail(ErrorKind::InternalFailure, std::string("mediating pair invalid: ") + err.what());
    }
  }();
  for (Elem i = 0; i < n; ++i)
    if (!(compose(b.cone_proj(i), out.proj()) == c.leg(i)))
      fail(ErrorKind::InternalFailure, "mediating triangle fails", {d.index()->id(i)});
  return out;
}

Report mediating_alternatives(const Bilimit& b, const ProjCone& c, const EpPair& m) {
  Report r("mediating map");
  const auto& d = b.diagram;
  const auto& apex = *b.apex;
  std::optional<std::string> lub_bad;
  for (Elem x = 0; x < c.apex->size() && !lub_bad; ++x) {
    std::vector<Elem> family;
    for (Elem i = 0; i < d.size(); ++i) family.push_back(b.cone_emb(i)(c.leg(i)(x)));
    if (!is_directed(apex, family) || directed_lub(apex, family) != m.proj()(x))
      lub_bad = c.apex->id(x);
  }
  r.add("p_inf is the lub of cone_emb(i) . leg(i)", !lub_bad, lub_bad.value_or(""));

  std::optional<std::string> tri;
  for (Elem i = 0; i < d.size() && !tri; ++i)
    if (!(compose(b.cone_proj(i), m.proj()) == c.leg(i))) tri = d.index()->id(i);
  r.add("triangles commute", !tri, tri.value_or(""));

  std::optional<std::string> adj;
  for (Elem i = 0; i < d.size() && !adj; ++i)
    if (!(compose(m.emb(), b.cone_emb(i)) == c.adjoint(i))) adj = d.index()->id(i);
  r.add("e_inf . cone_emb(i) = e_i", !adj, adj.value_or(""));

  auto back = embedding_for_projection(m.proj());
  r.add("e_inf is the left adjoint of p_inf", back && back->emb() == m.emb());
  return r;
}

nlohmann::json UniversalReport::to_json() const {
  return {{"exists", exists},
          {"commutes", commutes},
          {"unique_among_projections", unique_among_projections},
          {"candidates", candidates},
          {"projections", projections},
          {"commuting_maps", commuting_maps},
          {"commuting_projections", commuting_projections},
          {"report", report.to_json()}};
}

UniversalReport verify_universal(const Bilimit& b, const ProjCone& c, const Budget& budget) {
  UniversalReport u;
  u.report = Report("universal property");
  const auto& d = b.diagram;
  budget.require_functions(c.apex->size(), b.apex->size(), "verify_universal");

  std::optional<EpPair> m;
  try {
    m = mediating_projection(b, c);
    u.exists = true;
  } catch (const DomainError& err) {
    u.report.add("mediating projection exists", false, err.what());
    return u;
  }
  u.report.add("mediating projection exists", true);
  u.report.merge(mediating_alternatives(b, c, *m), "mediating");
  u.commutes = u.report.ok();

  std::set<std::vector<Elem>> projections;
  for (const auto& e : enumerate_ep_pairs(b.apex, c.apex, budget))
    projections.insert(e.proj().assignment());

  std::vector<std::vector<Elem>> winners;
  for_each_monotone(*c.apex, *b.apex, nullptr, [&](std::span<const Elem> f) {
    ++u.candidates;
    bool is_proj = projections.count(std::vector<Elem>(f.begin(), f.end())) > 0;
    if (is_proj) ++u.projections;
    bool commutes = true;
    for (Elem i = 0; i < d.size() && commutes; ++i)
      for (Elem x = 0; x < f.size() && commutes; ++x)
        commutes = b.cone_proj(i)(f[x]) == c.leg(i)(x);
    if (commutes) {
      ++u.commuting_maps;
      if (is_proj) {
        ++u.commuting_projections;
        winners.emplace_back(f.begin(), f.end());
      }
    }
    return true;
  });
  u.unique_among_projections = winners.size() == 1 && winners.front() == m->proj().assignment();
  u.report.add("unique among projections", u.unique_among_projections,
               std::to_string(u.commuting_projections) + " of " + std::to_string(u.projections) +
                   " projections commute");
  return u;
}

}  // namespace domkit

#include "domkit/generate.hpp"

#include <algorithm>
#include <functional>

#include "domkit/error.hpp"

namespace domkit {

PosetPtr random_directed_index(Rng& rng, std::size_t max_size) {
  const std::size_t n = rng.between(1, std::max<std::size_t>(max_size, 1));
  auto below = random_poset(rng, n - 1);
  std::vector<std::string> ids;
  for (std::size_t k = 0; k < n; ++k) ids.push_back(std::to_string(k));
  return FinPoset::from_predicate("I", std::move(ids), [&](Elem a, Elem b) {
    if (b == n - 1) return true;
    if (a == n - 1) return false;
    return below->leq(a, b);
  });
}

namespace {

std::string object_name(Elem i) { return "D" + std::to_string(i); }

// Legs into the top determine every edge.
std::optional<EpDiagram> diagram_from_legs(const PosetPtr& index, const std::vector<PosetPtr>& objects,
                                           const std::vector<EpPair>& legs) {
  EpDiagram::EdgeMap edges;
  for (Elem i = 0; i < index->size(); ++i)
    for (Elem j = 0; j < index->size(); ++j) {
      if (!index->less(i, j)) continue;
      try {
        edges.emplace(std::pair{i, j},
                      EpPair::make(compose(legs[j].proj(), legs[i].emb()),
                                   compose(legs[i].proj(), legs[j].emb())));
      } catch (const DomainError&) {
        return std::nullopt;
      }
    }
  auto d = EpDiagram::make(index, objects, std::move(edges));
  if (!validate_diagram(d).ok()) return std::nullopt;
  return d;
}

bool compatible(const PosetPtr& index, Elem i, const EpPair& leg,
                const std::vector<std::optional<EpPair>>& legs) {
  for (Elem j = 0; j < index->size(); ++j) {
    if (!index->less(i, j)) continue;
    const auto& above = *legs[j];
    // The image of leg must lie in the image of the leg above.
    if (!(compose(above.emb(), compose(above.proj(), leg.emb())) == leg.emb())) return false;
  }
  return true;
}

// How objects are drawn and turned into the posets the legs live between.
struct Sampler {
  std::size_t min_lower;  // smallest size of a non-top object
  std::function<PosetPtr(const PosetPtr&)> carrier;
};

struct Drawn {
  std::vector<PosetPtr> objects;
  EpDiagram carriers;
};

std::optional<Drawn> draw(Rng& rng, const DiagramShape& shape, const Sampler& sampler) {
  const std::size_t max_object = std::max<std::size_t>(shape.max_object, 1);
  auto index = random_directed_index(rng, shape.max_index);
  const std::size_t n = index->size();
  const Elem t = n - 1;
  std::vector<PosetPtr> objects(n), carriers(n);
  std::vector<std::optional<EpPair>> legs(n);
  // A one-point top makes every object a point; avoid it when allowed.
  const std::size_t top_size = rng.between(std::min<std::size_t>(2, max_object), max_object);
  objects[t] = random_poset(rng, top_size, object_name(t));
  carriers[t] = sampler.carrier(objects[t]);
  legs[t] = EpPair::identity(carriers[t]);

  auto order = linear_extension(*index);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Elem i = *it;
    if (i == t) continue;
    bool placed = false;
    for (int tries = 0; tries < 8 && !placed; ++tries) {
      auto candidate =
          random_poset(rng, rng.between(sampler.min_lower, objects[t]->size()), object_name(i));
      auto lifted = sampler.carrier(candidate);
      std::vector<EpPair> ok;
      for (auto& e : enumerate_ep_pairs(lifted, carriers[t]))
        if (compatible(index, i, e, legs)) ok.push_back(std::move(e));
      if (ok.empty()) continue;
      objects[i] = candidate;
      carriers[i] = lifted;
      legs[i] = rng.pick(ok);
      placed = true;
    }
    if (!placed) return std::nullopt;
  }
  std::vector<EpPair> chosen;
  for (auto& l : legs) chosen.push_back(*l);
  auto d = diagram_from_legs(index, carriers, chosen);
  if (!d) return std::nullopt;
  return Drawn{std::move(objects), std::move(*d)};
}

Drawn draw_or_constant(Rng& rng, const DiagramShape& shape, const Sampler& sampler) {
  for (int attempt = 0; attempt < 64; ++attempt)
    if (auto d = draw(rng, shape, sampler)) return std::move(*d);
  // Constant diagram on a point: always functorial.
  auto index = random_directed_index(rng, shape.max_index);
  std::vector<PosetPtr> objects(index->size(), unit_poset());
  auto carrier = sampler.carrier(unit_poset());
  std::vector<PosetPtr> carriers(index->size(), carrier);
  std::vector<EpPair> legs(index->size(), EpPair::identity(carrier));
  return Drawn{objects, *diagram_from_legs(index, carriers, legs)};
}

}  // namespace

EpDiagram random_diagram(Rng& rng, const DiagramShape& shape) {
  Sampler total{1, [](const PosetPtr& p) { return p; }};
  return draw_or_constant(rng, shape, total).carriers;
}

ProjCone random_cone(Rng& rng, const EpDiagram& d, std::size_t max_extra) {
  const auto& top = d.object(d.top());
  for (int tries = 0; tries < 16; ++tries) {
    auto h = random_poset(rng, top->size() + rng.between(0, max_extra), "H");
    auto pairs = enumerate_ep_pairs(top, h);
    if (pairs.empty()) continue;
    return extend_cone(top_cone(d), rng.pick(pairs));
  }
  return top_cone(d);
}

PartialEpDiagram random_partial_diagram(Rng& rng, const DiagramShape& shape) {
  Sampler partial{0, [](const PosetPtr& p) { return lift_poset(p).carrier; }};
  auto drawn = draw_or_constant(rng, shape, partial);
  return PartialEpDiagram::from_total(drawn.objects, drawn.carriers);
}

PartialProjCone random_partial_cone(Rng& rng, const PartialEpDiagram& d, std::size_t max_extra) {
  const auto& top = d.lifted(d.top());
  for (int tries = 0; tries < 16; ++tries) {
    auto h = lift_poset(random_poset(rng, top.base->size() + rng.between(0, max_extra), "H"));
    auto pairs = enumerate_strict_ep_pairs(top, h);
    if (pairs.empty()) continue;
    return extend_cone(top_cone(d), rng.pick(pairs));
  }
  return top_cone(d);
}

}  // namespace domkit

namespace domkit {

PresheafPoset random_presheaf(Rng& rng, const BaseSite& site, std::size_t min_stage, std::size_t max_stage,
                              std::string name) {
  const auto& base = *site.poset();
  const std::size_t n = site.size();
  for (int attempt = 0; attempt < 32; ++attempt) {
    std::vector<PosetPtr> stages(n);
    for (Elem p : linear_extension(base)) {
      bool forced_empty = false;
      for (Elem q = 0; q < n; ++q)
        if (base.less(q, p) && stages[q]->empty()) forced_empty = true;
      const std::size_t size = forced_empty ? 0 : rng.between(min_stage, std::max(min_stage, max_stage));
      stages[p] = random_poset(rng, size, name + "(" + base.id(p) + ")");
    }
    PresheafPoset::RestrictionMap res;
    for (auto [q, p] : hasse_edges(base))
      res.emplace(std::pair{p, q}, rng.pick(enumerate_monotone_maps(stages[p], stages[q])));
    try {
      return PresheafPoset::make(site, stages, res, name);
    } catch (const DomainError&) {
    }
  }
  return PresheafPoset::constant(site, unit_poset(), name);
}

namespace {

std::optional<InternalDiagram> internal_from_legs(const PosetPtr& index, const std::vector<LiftPtr>& objects,
                                                  const std::vector<InternalStrictEp>& legs) {
  InternalDiagram::EdgeMap edges;
  for (Elem i = 0; i < index->size(); ++i)
    for (Elem j = 0; j < index->size(); ++j) {
      if (!index->less(i, j)) continue;
      try {
        edges.emplace(std::pair{i, j},
                      InternalStrictEp::make(compose(legs[j].proj(), legs[i].emb()),
                                             compose(legs[i].proj(), legs[j].emb()), objects[i], objects[j]));
      } catch (const DomainError&) {
        return std::nullopt;
      }
    }
  auto d = InternalDiagram::make(index, objects, edges);
  if (!validate_internal_diagram(d).ok()) return std::nullopt;
  return d;
}

std::optional<InternalDiagram> draw_internal(Rng& rng, const BaseSite& site, const DiagramShape& shape) {
  const std::size_t max_stage = std::max<std::size_t>(shape.max_object, 1);
  auto index = random_directed_index(rng, shape.max_index);
  const std::size_t n = index->size();
  const Elem t = n - 1;
  std::vector<LiftPtr> objects(n);
  std::vector<std::optional<InternalStrictEp>> legs(n);
  objects[t] = internal_lift(random_presheaf(rng, site, std::min<std::size_t>(2, max_stage), max_stage,
                                             "D" + std::to_string(t)));
  legs[t] = InternalStrictEp::identity(objects[t]);
  std::size_t top_max = 0;
  for (const auto& s : objects[t]->base.stages()) top_max = std::max(top_max, s->size());

  auto order = linear_extension(*index);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Elem i = *it;
    if (i == t) continue;
    bool placed = false;
    for (int tries = 0; tries < 8 && !placed; ++tries) {
      auto cand = internal_lift(random_presheaf(rng, site, 0, top_max, "D" + std::to_string(i)));
      std::vector<InternalStrictEp> ok;
      for (auto& e : enumerate_internal_strict_eps(cand, objects[t])) {
        bool fits = true;
        for (Elem j = 0; j < n && fits; ++j)
          if (index->less(i, j))
            fits = compose(legs[j]->emb(), compose(legs[j]->proj(), e.emb())) == e.emb();
        if (fits) ok.push_back(std::move(e));
      }
      if (ok.empty()) continue;
      objects[i] = cand;
      legs[i] = rng.pick(ok);
      placed = true;
    }
    if (!placed) return std::nullopt;
  }
  std::vector<InternalStrictEp> chosen;
  for (auto& l : legs) chosen.push_back(*l);
  return internal_from_legs(index, objects, chosen);
}

}  // namespace

InternalDiagram random_internal_diagram(Rng& rng, const BaseSite& site, const DiagramShape& shape) {
  for (int attempt = 0; attempt < 64; ++attempt)
    if (auto d = draw_internal(rng, site, shape)) return std::move(*d);
  auto index = random_directed_index(rng, shape.max_index);
  auto point = internal_lift(PresheafPoset::constant(site, unit_poset(), "D"));
  std::vector<LiftPtr> objects(index->size(), point);
  std::vector<InternalStrictEp> legs(index->size(), InternalStrictEp::identity(point));
  return *internal_from_legs(index, objects, legs);
}

InternalCone random_internal_cone(Rng& rng, const InternalDiagram& d, std::size_t max_extra) {
  const auto& top = d.object(d.top());
  std::size_t top_max = 0;
  for (const auto& s : top->base.stages()) top_max = std::max(top_max, s->size());
  for (int tries = 0; tries < 16; ++tries) {
    auto h = internal_lift(random_presheaf(rng, d.site(), 1, top_max + rng.between(0, max_extra), "H"));
    auto pairs = enumerate_internal_strict_eps(top, h);
    if (pairs.empty()) continue;
    return extend_cone(top_cone(d), rng.pick(pairs));
  }
  return top_cone(d);
}

}  // namespace domkit

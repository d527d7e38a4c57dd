#include "domkit/ep.hpp"

#include "domkit/error.hpp"
#include "domkit/poset_io.hpp"

namespace domkit {

EpPair EpPair::make(MonotoneMap emb, MonotoneMap proj) {
  if (!same_shape(emb.dom(), proj.cod()) || !same_shape(emb.cod(), proj.dom()))
    fail(ErrorKind::Mismatch, "embedding and projection endpoints do not match");
  const auto& a = *emb.dom();
  const auto& b = *emb.cod();
  for (Elem x = 0; x < a.size(); ++x)
    if (proj(emb(x)) != x)
      fail(ErrorKind::NotSection, "proj(emb(x)) != x", {a.id(x)});
  if (!emb.is_injective()) fail(ErrorKind::NotInjective, "embedding identifies elements");
  for (Elem y = 0; y < b.size(); ++y)
    if (!b.leq(emb(proj(y)), y))
      fail(ErrorKind::NotDeflation, "emb(proj(y)) not <= y", {b.id(y)});
  return EpPair(std::move(emb), std::move(proj));
}

EpPair EpPair::identity(const PosetPtr& p) {
  return EpPair(MonotoneMap::identity(p), MonotoneMap::identity(p));
}

EpPair compose_ep(const EpPair& f, const EpPair& g) {
  if (!same_shape(f.large(), g.small()))
    fail(ErrorKind::Mismatch, "compose_ep: " + f.large()->name() + " vs " + g.small()->name());
  return EpPair::make(compose(g.emb(), f.emb()), compose(f.proj(), g.proj()));
}

namespace {

bool satisfies_laws(const MonotoneMap& emb, std::span<const Elem> proj) {
  const auto& b = *emb.cod();
  for (Elem x = 0; x < emb.dom()->size(); ++x)
    if (proj[emb(x)] != x) return false;
  for (Elem y = 0; y < b.size(); ++y)
    if (!b.leq(emb(proj[y]), y)) return false;
  return true;
}

}  // namespace

std::optional<MonotoneMap> projection_by_formula(const MonotoneMap& emb) {
  const auto& a = *emb.dom();
  const auto& b = *emb.cod();
  std::vector<Elem> proj(b.size());
  for (Elem y = 0; y < b.size(); ++y) {
    std::optional<Elem> best;
    for (Elem x = 0; x < a.size(); ++x) {
      if (!b.leq(emb(x), y)) continue;
      if (!best || a.leq(*best, x)) best = x;
    }
    if (!best) return std::nullopt;
    for (Elem x = 0; x < a.size(); ++x)
      if (b.leq(emb(x), y) && !a.leq(x, *best)) return std::nullopt;
    proj[y] = *best;
  }
  if (!satisfies_laws(emb, proj)) return std::nullopt;
  try {
    return MonotoneMap::make(emb.cod(), emb.dom(), std::move(proj));
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

EpPair projection_from_embedding(const MonotoneMap& emb, const Budget& budget) {
  budget.require_functions(emb.cod()->size(), emb.dom()->size(), "projection_from_embedding");
  std::vector<std::vector<Elem>> found;
  for_each_monotone(*emb.cod(), *emb.dom(), nullptr, [&](std::span<const Elem> p) {
    if (satisfies_laws(emb, p)) found.emplace_back(p.begin(), p.end());
    return true;
  });
  if (found.empty()) fail(ErrorKind::NoAdjoint, "no projection exists", {describe(emb)});
  if (found.size() > 1)
    fail(ErrorKind::InternalFailure, "several right adjoints found", {describe(emb)});
  auto proj = MonotoneMap::make(emb.cod(), emb.dom(), std::move(found.front()));
  auto fast = projection_by_formula(emb);
  if (!fast || !(*fast == proj))
    fail(ErrorKind::InternalFailure, "pointwise formula disagrees with exhaustive search",
         {describe(emb)});
  return EpPair::make(emb, std::move(proj));
}

std::vector<EpPair> enumerate_ep_pairs(const PosetPtr& a, const PosetPtr& b,
                                       const Budget& budget) {
  budget.require_functions(a->size(), b->size(), "enumerate_ep_pairs");
  budget.require_functions(b->size(), a->size(), "enumerate_ep_pairs");
  std::vector<EpPair> out;
  // Embeddings are injective and order-reflecting; prune on both.
  auto emb_ok = [&](Elem x, Elem y, std::span<const Elem> prefix) {
    for (Elem w = 0; w < prefix.size(); ++w) {
      if (prefix[w] == y) return false;
      if (b->leq(prefix[w], y) && !a->leq(w, x)) return false;
      if (b->leq(y, prefix[w]) && !a->leq(x, w)) return false;
    }
    return true;
  };
  for_each_monotone(*a, *b, emb_ok, [&](std::span<const Elem> e) {
    std::vector<Elem> preimage(b->size(), static_cast<Elem>(-1));
    for (Elem x = 0; x < e.size(); ++x) preimage[e[x]] = x;
    auto proj_ok = [&](Elem y, Elem x, std::span<const Elem>) {
      if (preimage[y] != static_cast<Elem>(-1) && preimage[y] != x) return false;
      return b->leq(e[x], y);
    };
    auto emb = MonotoneMap::make(a, b, std::vector<Elem>(e.begin(), e.end()));
    for_each_monotone(*b, *a, proj_ok, [&](std::span<const Elem> p) {
      out.push_back(EpPair::make(emb, MonotoneMap::make(b, a, std::vector<Elem>(p.begin(), p.end()))));
      return true;
    });
    return true;
  });
  return out;
}

std::optional<EpPair> embedding_for_projection(const MonotoneMap& proj) {
  const auto& big = proj.dom();
  const auto& small = proj.cod();
  std::optional<EpPair> result;
  // emb(x) must lie in proj^{-1}(x) and sit below every y with proj(y) >= x.
  auto ok = [&](Elem x, Elem y, std::span<const Elem>) { return proj(y) == x; };
  for_each_monotone(*small, *big, ok, [&](std::span<const Elem> e) {
    auto emb = MonotoneMap::make(small, big, std::vector<Elem>(e.begin(), e.end()));
    for (Elem y = 0; y < big->size(); ++y)
      if (!big->leq(emb(proj(y)), y)) return true;
    result = EpPair::make(std::move(emb), proj);
    return false;
  });
  return result;
}

nlohmann::json ep_to_json(const EpPair& e) {
  return {{"emb", map_to_json(e.emb())}, {"proj", map_to_json(e.proj())}};
}

EpPair ep_from_json(const nlohmann::json& j, PosetPtr small, PosetPtr large) {
  if (!j.is_object() || !j.contains("emb") || !j.contains("proj"))
    fail(ErrorKind::ParseError, "ep-pair JSON needs \"emb\" and \"proj\"");
  auto emb = map_from_json(j.at("emb"), small, large);
  auto proj = map_from_json(j.at("proj"), emb.cod(), emb.dom());
  return EpPair::make(std::move(emb), std::move(proj));
}

}  // namespace domkit

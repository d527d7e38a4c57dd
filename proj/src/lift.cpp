#include "domkit/lift.hpp"

#include "domkit/error.hpp"

namespace domkit {

LiftPoset lift_poset(const PosetPtr& a) {
  std::vector<std::string> ids{"bot"};
  for (const auto& id : a->ids()) ids.push_back("eta(" + id + ")");
  auto carrier = FinPoset::from_predicate("L(" + a->name() + ")", std::move(ids), [&](Elem u, Elem v) {
    if (u == LiftPoset::bot) return true;
    if (v == LiftPoset::bot) return false;
    return a->leq(u - 1, v - 1);
  });
  return LiftPoset{a, std::move(carrier)};
}

StrictMap StrictMap::make(LiftPoset dom, LiftPoset cod, MonotoneMap underlying) {
  if (!same_shape(dom.carrier, underlying.dom()) || !same_shape(cod.carrier, underlying.cod()))
    fail(ErrorKind::Mismatch, "strict map endpoints differ from the lifted posets");
  if (underlying(LiftPoset::bot) != LiftPoset::bot)
    fail(ErrorKind::NotStrict, "bottom is not sent to bottom",
         {cod.carrier->id(underlying(LiftPoset::bot))});
  return StrictMap(std::move(dom), std::move(cod), std::move(underlying));
}

StrictMap StrictMap::make(LiftPoset dom, LiftPoset cod, std::vector<Elem> assignment) {
  auto f = MonotoneMap::make(dom.carrier, cod.carrier, std::move(assignment));
  return make(std::move(dom), std::move(cod), std::move(f));
}

StrictMap StrictMap::identity(const LiftPoset& a) {
  return StrictMap(a, a, MonotoneMap::identity(a.carrier));
}

StrictMap StrictMap::undefined(const LiftPoset& dom, const LiftPoset& cod) {
  return StrictMap(dom, cod, MonotoneMap::constant(dom.carrier, cod.carrier, LiftPoset::bot));
}

StrictMap compose(const StrictMap& g, const StrictMap& f) {
  return StrictMap::make(f.dom(), g.cod(), compose(g.underlying(), f.underlying()));
}

MonotoneMap eta(const LiftPoset& la) {
  std::vector<Elem> a(la.base->size());
  for (Elem x = 0; x < a.size(); ++x) a[x] = LiftPoset::eta(x);
  return MonotoneMap::make(la.base, la.carrier, std::move(a));
}

StrictMap mu(const LiftPoset& la) {
  auto lla = lift_poset(la.carrier);
  // Positions in L L A: 0 is the outer bottom, u + 1 is eta(u).
  std::vector<Elem> a(lla.size());
  a[0] = LiftPoset::bot;
  for (Elem u = 0; u < la.size(); ++u) a[u + 1] = u;
  return StrictMap::make(lla, la, std::move(a));
}

StrictMap lift_map(const MonotoneMap& f) {
  auto la = lift_poset(f.dom());
  auto lb = lift_poset(f.cod());
  std::vector<Elem> a(la.size(), LiftPoset::bot);
  for (Elem x = 0; x < f.dom()->size(); ++x) a[LiftPoset::eta(x)] = LiftPoset::eta(f(x));
  return StrictMap::make(la, lb, std::move(a));
}

StrictMap kleisli(const MonotoneMap& f, const LiftPoset& lb) {
  if (!same_shape(f.cod(), lb.carrier))
    fail(ErrorKind::Mismatch, "kleisli: codomain is not " + lb.carrier->name());
  auto la = lift_poset(f.dom());
  std::vector<Elem> a(la.size(), LiftPoset::bot);
  for (Elem x = 0; x < f.dom()->size(); ++x) a[LiftPoset::eta(x)] = f(x);
  return StrictMap::make(la, lb, std::move(a));
}

MonotoneMap restrict_to_base(const StrictMap& f) { return compose(f.underlying(), eta(f.dom())); }

Elem lift_lub(const LiftPoset& la, std::span<const Elem> family) {
  if (!is_directed(*la.carrier, family)) {
    // Reuse the carrier's witness search for the error.
    directed_lub(*la.carrier, family);
    fail(ErrorKind::NotDirected, "family is not directed");
  }
  std::vector<Elem> defined;
  for (Elem u : family)
    if (LiftPoset::defined(u)) defined.push_back(LiftPoset::value(u));
  if (defined.empty()) return LiftPoset::bot;
  return LiftPoset::eta(directed_lub(*la.base, defined));
}

Report monad_laws(const PosetPtr& a) {
  Report r("monad laws on " + a->name());
  auto la = lift_poset(a);
  auto lla = lift_poset(la.carrier);
  auto id = MonotoneMap::identity(la.carrier);
  auto m = mu(la);
  auto mm = mu(lla);

  r.add("mu . L eta = id", compose(m.underlying(), lift_map(eta(la)).underlying()) == id);
  r.add("mu . eta_L = id", compose(m.underlying(), eta(lla)) == id);
  auto assoc_l = compose(m.underlying(), lift_map(m.underlying()).underlying());
  auto assoc_r = compose(m.underlying(), mm.underlying());
  r.add("mu . L mu = mu . mu_L", assoc_l == assoc_r);
  r.add("kleisli(eta) = id", kleisli(eta(la), la).underlying() == id);

  // kleisli(f) = mu . L f, and Kleisli composition is associative with eta
  // as unit, over every monotone f: A -> L A.
  bool kleisli_is_mu_lf = true;
  bool right_unit = true;
  bool assoc = true;
  auto maps = enumerate_monotone_maps(a, la.carrier);
  for (const auto& f : maps) {
    auto fs = kleisli(f, la);
    kleisli_is_mu_lf = kleisli_is_mu_lf && fs == compose(m, lift_map(f));
    right_unit = right_unit && compose(fs.underlying(), eta(la)) == f;
  }
  for (std::size_t i = 0; i < maps.size() && i < 16; ++i)
    for (std::size_t j = 0; j < maps.size() && j < 16; ++j) {
      auto f = kleisli(maps[i], la), g = kleisli(maps[j], la);
      auto gf = kleisli(compose(g.underlying(), maps[i]), la);
      assoc = assoc && gf == compose(g, f);
    }
  r.add("kleisli(f) = mu . L f", kleisli_is_mu_lf);
  r.add("kleisli(f) . eta = f", right_unit);
  r.add("kleisli(g) . kleisli(f) = kleisli(kleisli(g) . f)", assoc);
  return r;
}

StrictEpPair StrictEpPair::make(StrictMap emb, StrictMap proj) {
  if (!(emb.dom() == proj.cod()) || !(emb.cod() == proj.dom()))
    fail(ErrorKind::Mismatch, "strict embedding and projection endpoints do not match");
  EpPair::make(emb.underlying(), proj.underlying());
  return StrictEpPair(std::move(emb), std::move(proj));
}

StrictEpPair StrictEpPair::identity(const LiftPoset& a) {
  return StrictEpPair(StrictMap::identity(a), StrictMap::identity(a));
}

EpPair StrictEpPair::total() const { return EpPair::make(emb_.underlying(), proj_.underlying()); }

StrictEpPair compose_strict_ep(const StrictEpPair& f, const StrictEpPair& g) {
  if (!(f.large() == g.small()))
    fail(ErrorKind::Mismatch,
         "compose_strict_ep: " + f.large().carrier->name() + " vs " + g.small().carrier->name());
  return StrictEpPair::make(compose(g.emb(), f.emb()), compose(f.proj(), g.proj()));
}

StrictEpPair strict_from_total(const EpPair& e, const LiftPoset& small, const LiftPoset& large) {
  return StrictEpPair::make(StrictMap::make(small, large, e.emb()),
                            StrictMap::make(large, small, e.proj()));
}

StrictEpPair lift_ep(const EpPair& e) {
  return StrictEpPair::make(lift_map(e.emb()), lift_map(e.proj()));
}

namespace {

std::vector<Elem> from_partial(const FinPoset& dom, const FinPoset& cod,
                               const std::vector<std::optional<Elem>>& f) {
  if (f.size() != dom.size()) fail(ErrorKind::Mismatch, "partial map arity");
  std::vector<Elem> a{LiftPoset::bot};
  for (const auto& v : f) {
    if (v && *v >= cod.size()) fail(ErrorKind::UnknownElement, "partial map value out of range");
    a.push_back(v ? LiftPoset::eta(*v) : LiftPoset::bot);
  }
  return a;
}

}  // namespace

StrictEpPair strict_ep_from_partial(const PosetPtr& small, const PosetPtr& large,
                                    const std::vector<std::optional<Elem>>& emb,
                                    const std::vector<std::optional<Elem>>& proj) {
  auto ls = lift_poset(small), ll = lift_poset(large);
  return StrictEpPair::make(StrictMap::make(ls, ll, from_partial(*small, *large, emb)),
                            StrictMap::make(ll, ls, from_partial(*large, *small, proj)));
}

StrictEpPair empty_strict_ep(const PosetPtr& d) {
  std::vector<std::optional<Elem>> proj(d->size());
  return strict_ep_from_partial(empty_poset(), d, {}, proj);
}

std::vector<StrictEpPair> enumerate_strict_ep_pairs(const LiftPoset& a, const LiftPoset& b,
                                                    const Budget& budget) {
  std::vector<StrictEpPair> out;
  for (const auto& e : enumerate_ep_pairs(a.carrier, b.carrier, budget))
    out.push_back(strict_from_total(e, a, b));
  return out;
}

nlohmann::json lifted_to_json(const LiftPoset& la, Elem u) {
  if (!LiftPoset::defined(u)) return "bot";
  return {{"eta", la.base->id(LiftPoset::value(u))}};
}

Elem lifted_from_json(const LiftPoset& la, const nlohmann::json& j) {
  if (j.is_string() && j.get<std::string>() == "bot") return LiftPoset::bot;
  if (j.is_object() && j.size() == 1 && j.contains("eta") && j.at("eta").is_string())
    return LiftPoset::eta(la.base->at(j.at("eta").get<std::string>()));
  fail(ErrorKind::ParseError, "lifted element must be \"bot\" or {\"eta\": id}: " + j.dump());
}

namespace {

nlohmann::json strict_map_json(const StrictMap& f) {
  auto pairs = nlohmann::json::array();
  for (Elem u = 0; u < f.dom().size(); ++u)
    pairs.push_back({lifted_to_json(f.dom(), u), lifted_to_json(f.cod(), f(u))});
  return pairs;
}

StrictMap strict_map_from(const nlohmann::json& j, const LiftPoset& dom, const LiftPoset& cod) {
  if (!j.is_array()) fail(ErrorKind::ParseError, "strict map must be an array of pairs");
  std::vector<std::optional<Elem>> a(dom.size());
  a[LiftPoset::bot] = LiftPoset::bot;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2)
      fail(ErrorKind::ParseError, "strict map entry must be a pair: " + pair.dump());
    Elem u = lifted_from_json(dom, pair[0]);
    Elem v = lifted_from_json(cod, pair[1]);
    if (a[u] && *a[u] != v && u != LiftPoset::bot)
      fail(ErrorKind::ParseError, "element mapped twice", {dom.carrier->id(u)});
    if (u == LiftPoset::bot && v != LiftPoset::bot)
      fail(ErrorKind::NotStrict, "bottom is not sent to bottom", {cod.carrier->id(v)});
    a[u] = v;
  }
  std::vector<Elem> out;
  for (Elem u = 0; u < a.size(); ++u) {
    if (!a[u]) fail(ErrorKind::ParseError, "strict map is not total", {dom.carrier->id(u)});
    out.push_back(*a[u]);
  }
  return StrictMap::make(dom, cod, std::move(out));
}

}  // namespace

nlohmann::json strict_ep_to_json(const StrictEpPair& e) {
  return {{"emb", strict_map_json(e.emb())}, {"proj", strict_map_json(e.proj())}};
}

StrictEpPair strict_ep_from_json(const nlohmann::json& j, const PosetPtr& small,
                                 const PosetPtr& large) {
  if (!j.is_object() || !j.contains("emb") || !j.contains("proj"))
    fail(ErrorKind::ParseError, "strict ep-pair JSON needs \"emb\" and \"proj\"");
  auto ls = lift_poset(small), ll = lift_poset(large);
  return StrictEpPair::make(strict_map_from(j.at("emb"), ls, ll),
                            strict_map_from(j.at("proj"), ll, ls));
}

}  // namespace domkit

#pragma once

#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "domkit/ep.hpp"
#include "domkit/poset.hpp"
#include "domkit/report.hpp"

namespace domkit {

// L A over a two-valued truth object: A plus a fresh bottom. In the carrier,
// position 0 is the bottom and base element x sits at position x + 1. Ids are
// "bot" and "eta(<id>)".
struct LiftPoset {
  PosetPtr base;
  PosetPtr carrier;

  static constexpr Elem bot = 0;
  static Elem eta(Elem x) { return x + 1; }
  static bool defined(Elem u) { return u != bot; }
  // Precondition: defined(u).
  static Elem value(Elem u) { return u - 1; }

  std::size_t size() const { return carrier->size(); }
  friend bool operator==(const LiftPoset& a, const LiftPoset& b) {
    return same_shape(a.carrier, b.carrier);
  }
};

LiftPoset lift_poset(const PosetPtr& a);

inline bool support(Elem u) { return LiftPoset::defined(u); }

// A monotone map between lift carriers that sends bottom to bottom; the
// representation of a partial map dom.base -> cod.base.
class StrictMap {
 public:
  // Throws Mismatch or NotStrict.
  static StrictMap make(LiftPoset dom, LiftPoset cod, MonotoneMap underlying);
  static StrictMap make(LiftPoset dom, LiftPoset cod, std::vector<Elem> assignment);
  static StrictMap identity(const LiftPoset& a);
  // Everywhere undefined.
  static StrictMap undefined(const LiftPoset& dom, const LiftPoset& cod);

  Elem operator()(Elem u) const { return f_(u); }
  const LiftPoset& dom() const { return dom_; }
  const LiftPoset& cod() const { return cod_; }
  const MonotoneMap& underlying() const { return f_; }

  friend bool operator==(const StrictMap& a, const StrictMap& b) { return a.f_ == b.f_; }

 private:
  StrictMap(LiftPoset dom, LiftPoset cod, MonotoneMap f)
      : dom_(std::move(dom)), cod_(std::move(cod)), f_(std::move(f)) {}

  LiftPoset dom_;
  LiftPoset cod_;
  MonotoneMap f_;
};

// g after f.
StrictMap compose(const StrictMap& g, const StrictMap& f);

// eta: A -> L A.
MonotoneMap eta(const LiftPoset& la);
// mu: L L A -> L A.
StrictMap mu(const LiftPoset& la);
// L f: L A -> L B.
StrictMap lift_map(const MonotoneMap& f);
// Kleisli extension of f: A -> L B, equal to mu . L f.
StrictMap kleisli(const MonotoneMap& f, const LiftPoset& lb);
// The total map underlying a strict one restricted along eta: f . eta.
MonotoneMap restrict_to_base(const StrictMap& f);

// Bottom when no member is defined, else eta of the lub of the defined values.
// Throws NotDirected.
Elem lift_lub(const LiftPoset& la, std::span<const Elem> family);

// Unit, multiplication, associativity and Kleisli laws by exhaustion on A.
Report monad_laws(const PosetPtr& a);

class StrictEpPair {
 public:
  // Revalidates section and deflation on the carriers.
  static StrictEpPair make(StrictMap emb, StrictMap proj);
  static StrictEpPair identity(const LiftPoset& a);

  const StrictMap& emb() const { return emb_; }
  const StrictMap& proj() const { return proj_; }
  const LiftPoset& small() const { return emb_.dom(); }
  const LiftPoset& large() const { return emb_.cod(); }
  // The same pair viewed as an ep-pair between the carriers.
  EpPair total() const;

  friend bool operator==(const StrictEpPair& a, const StrictEpPair& b) {
    return a.emb_ == b.emb_ && a.proj_ == b.proj_;
  }

 private:
  StrictEpPair(StrictMap emb, StrictMap proj) : emb_(std::move(emb)), proj_(std::move(proj)) {}

  StrictMap emb_;
  StrictMap proj_;
};

StrictEpPair compose_strict_ep(const StrictEpPair& f, const StrictEpPair& g);
// A total ep-pair between carriers, checked to be strict. Every ep-pair
// between pointed posets is, so this only fails on shape mismatch.
StrictEpPair strict_from_total(const EpPair& e, const LiftPoset& small, const LiftPoset& large);

// L e, with both halves lifted.
StrictEpPair lift_ep(const EpPair& e);

// Builds a strict ep-pair from partial functions on the bases: nullopt means
// undefined. Validated like any other pair.
StrictEpPair strict_ep_from_partial(const PosetPtr& small, const PosetPtr& large,
                                    const std::vector<std::optional<Elem>>& emb,
                                    const std::vector<std::optional<Elem>>& proj);
// L 0 <-> L d: the bottom goes to bottom and everything projects to bottom.
StrictEpPair empty_strict_ep(const PosetPtr& d);

std::vector<StrictEpPair> enumerate_strict_ep_pairs(const LiftPoset& a, const LiftPoset& b,
                                                    const Budget& budget = {});

// "bot" or {"eta": <id>}.
nlohmann::json lifted_to_json(const LiftPoset& la, Elem u);
Elem lifted_from_json(const LiftPoset& la, const nlohmann::json& j);

// {"emb": [[u, v], ...], "proj": [[u, v], ...]} over lifted elements. Pairs
// for bottom may be omitted since strictness fixes them.
nlohmann::json strict_ep_to_json(const StrictEpPair& e);
StrictEpPair strict_ep_from_json(const nlohmann::json& j, const PosetPtr& small,
                                 const PosetPtr& large);

}  // namespace domkit

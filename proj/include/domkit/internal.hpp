#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "domkit/bilimit.hpp"
#include "domkit/poset.hpp"
#include "domkit/report.hpp"

namespace domkit {

// Subsets of the base as bitmasks; bit q set means q is a member.
using Sieve = std::uint32_t;

inline bool contains(Sieve s, Elem q) { return (s >> q) & 1u; }

// A finite base poset P viewed as a space; presheaves live over it.
class BaseSite {
 public:
  // At most 32 points.
  static BaseSite make(PosetPtr base);

  const PosetPtr& poset() const { return base_; }
  std::size_t size() const { return base_->size(); }
  // The principal sieve of p: everything below p.
  Sieve down(Elem p) const { return down_.at(p); }
  bool is_sieve(Elem p, Sieve s) const;
  // Every sieve at p, by size then mask.
  const std::vector<Sieve>& sieves(Elem p) const { return sieves_.at(p); }
  std::string sieve_id(Sieve s) const;

 private:
  PosetPtr base_;
  std::vector<Sieve> down_;
  std::vector<std::vector<Sieve>> sieves_;
};

// A presheaf of finite posets: a stage A(p) per point and monotone
// restrictions A(p) -> A(q) for q <= p, functorial.
class PresheafPoset {
 public:
  // Keyed by (p, q) with q <= p.
  using RestrictionMap = std::map<std::pair<Elem, Elem>, MonotoneMap>;

  // Identities may be omitted; covering pairs are required and other
  // restrictions are composed along covering pairs. Throws Mismatch,
  // MissingEdge or FunctorialityFailure(p, q, r).
  static PresheafPoset make(BaseSite site, std::vector<PosetPtr> stages,
                            const RestrictionMap& restrictions, std::string name = "A");
  // Same poset at every stage, identity restrictions.
  static PresheafPoset constant(const BaseSite& site, const PosetPtr& p, std::string name = "A");

  const BaseSite& site() const { return site_; }
  const std::string& name() const { return name_; }
  std::size_t size() const { return stages_.size(); }
  const PosetPtr& stage(Elem p) const { return stages_.at(p); }
  const std::vector<PosetPtr>& stages() const { return stages_; }
  // Restriction from stage p to stage q <= p.
  const MonotoneMap& restrict(Elem p, Elem q) const;
  bool same_shape(const PresheafPoset& other) const;

 private:
  PresheafPoset(BaseSite site, std::vector<PosetPtr> stages, std::vector<std::optional<MonotoneMap>> table,
                std::string name)
      : site_(std::move(site)), stages_(std::move(stages)), table_(std::move(table)), name_(std::move(name)) {}

  BaseSite site_;
  std::vector<PosetPtr> stages_;
  std::vector<std::optional<MonotoneMap>> table_;
  std::string name_;
};

// Stagewise monotone maps commuting with restriction.
class NaturalMap {
 public:
  // Throws Mismatch or NotNatural(p, q).
  static NaturalMap make(PresheafPoset dom, PresheafPoset cod, std::vector<MonotoneMap> components);
  static NaturalMap identity(const PresheafPoset& a);

  const PresheafPoset& dom() const { return dom_; }
  const PresheafPoset& cod() const { return cod_; }
  const MonotoneMap& at(Elem p) const { return components_.at(p); }
  Elem operator()(Elem p, Elem x) const { return components_.at(p)(x); }

  friend bool operator==(const NaturalMap& a, const NaturalMap& b) {
    return a.components_ == b.components_;
  }

 private:
  NaturalMap(PresheafPoset dom, PresheafPoset cod, std::vector<MonotoneMap> components)
      : dom_(std::move(dom)), cod_(std::move(cod)), components_(std::move(components)) {}

  PresheafPoset dom_;
  PresheafPoset cod_;
  std::vector<MonotoneMap> components_;
};

NaturalMap compose(const NaturalMap& g, const NaturalMap& f);

// Every natural map A -> B, by backtracking over the stages.
std::vector<NaturalMap> enumerate_natural_maps(const PresheafPoset& a, const PresheafPoset& b,
                                               const Budget& budget = {});

// Stage p holds the sieves at p ordered by inclusion; restriction to q is
// intersection with the principal sieve of q.
PresheafPoset omega_presheaf(const BaseSite& site);

// A partial element at some stage: where it is defined, and its value at each
// point of that region. family[q] is meaningful only when q is in support.
struct LiftElem {
  static constexpr Elem none = static_cast<Elem>(-1);

  Sieve support = 0;
  std::vector<Elem> family;

  friend auto operator<=>(const LiftElem&, const LiftElem&) = default;
};

// L A computed stagewise. Stage p holds every compatible family over every
// sieve at p; (S, x) <= (T, y) iff S is inside T and x_q <= y_q on S.
// Position 0 of each stage is the nowhere-defined element.
struct InternalLift {
  PresheafPoset base;
  PresheafPoset lifted;
  std::vector<std::vector<LiftElem>> elems;
  std::vector<std::map<LiftElem, Elem>> lookup;

  const LiftElem& elem(Elem p, Elem u) const { return elems.at(p).at(u); }
  // Throws InternalFailure when absent.
  Elem find(Elem p, const LiftElem& e) const;
  // "{q:x,...}", "{}" when nowhere defined.
  std::string elem_id(const LiftElem& e) const;
};

using LiftPtr = std::shared_ptr<const InternalLift>;

LiftPtr internal_lift(const PresheafPoset& a, const Budget& budget = {});

// eta_p(a) = (principal sieve, the restrictions of a).
NaturalMap internal_eta(const InternalLift& la);
// lla must be the lift of la.lifted. mu flattens: defined where both layers
// are, with the inner value at each point.
NaturalMap internal_mu(const InternalLift& la, const InternalLift& lla);
// L f between the lifts of f's endpoints.
NaturalMap internal_lift_map(const NaturalMap& f, const InternalLift& la, const InternalLift& lb);
// The extension of g: A -> L B to L A -> L B, computed directly.
NaturalMap internal_kleisli(const NaturalMap& g, const InternalLift& la, const InternalLift& lb);
// Strict means determined by the restriction along eta: f = kleisli(f . eta).
bool is_internal_strict(const NaturalMap& f, const InternalLift& la, const InternalLift& lb);

// Unit, multiplication and associativity laws, the mu . L g presentation of
// Kleisli extension, and naturality of eta and mu, by stagewise exhaustion.
Report internal_monad_laws(const PresheafPoset& a, const Budget& budget = {});

// A stage and element whose support is a nonempty sieve other than the
// principal one, if any.
std::optional<std::pair<Elem, Elem>> find_proper_support(const InternalLift& la);

// With a one-point base: L A at the point is order-isomorphic to the boolean
// lift of A at the point, and the isomorphism carries eta to eta.
Report lift_matches_boolean(const InternalLift& la);

// Internal strict ep-pair L A <-> L B: both halves strict, stagewise section
// and deflation.
class InternalStrictEp {
 public:
  // Throws NotStrict, NotSection or NotDeflation with the stage.
  static InternalStrictEp make(NaturalMap emb, NaturalMap proj, LiftPtr small, LiftPtr large);
  static InternalStrictEp identity(const LiftPtr& a);

  const NaturalMap& emb() const { return emb_; }
  const NaturalMap& proj() const { return proj_; }
  const LiftPtr& small() const { return small_; }
  const LiftPtr& large() const { return large_; }

  friend bool operator==(const InternalStrictEp& a, const InternalStrictEp& b) {
    return a.emb_ == b.emb_ && a.proj_ == b.proj_;
  }

 private:
  InternalStrictEp(NaturalMap emb, NaturalMap proj, LiftPtr small, LiftPtr large)
      : emb_(std::move(emb)), proj_(std::move(proj)), small_(std::move(small)), large_(std::move(large)) {}

  NaturalMap emb_;
  NaturalMap proj_;
  LiftPtr small_;
  LiftPtr large_;
};

InternalStrictEp compose_internal_ep(const InternalStrictEp& f, const InternalStrictEp& g);

// Strict maps L A -> L B, one per natural map A -> L B.
std::vector<NaturalMap> enumerate_internal_strict_maps(const InternalLift& la, const InternalLift& lb,
                                                       const Budget& budget = {});
std::vector<InternalStrictEp> enumerate_internal_strict_eps(const LiftPtr& la, const LiftPtr& lb,
                                                            const Budget& budget = {});

class InternalDiagram {
 public:
  using EdgeMap = std::map<std::pair<Elem, Elem>, InternalStrictEp>;

  // Same completion rules as EpDiagram::make.
  static InternalDiagram make(PosetPtr index, std::vector<LiftPtr> objects, const EdgeMap& edges);

  const PosetPtr& index() const { return index_; }
  std::size_t size() const { return objects_.size(); }
  const BaseSite& site() const { return objects_.front()->base.site(); }
  const LiftPtr& object(Elem i) const { return objects_.at(i); }
  const InternalStrictEp& edge(Elem i, Elem j) const;
  Elem top() const;

 private:
  InternalDiagram(PosetPtr index, std::vector<LiftPtr> objects,
                  std::vector<std::optional<InternalStrictEp>> edges)
      : index_(std::move(index)), objects_(std::move(objects)), edges_(std::move(edges)) {}

  PosetPtr index_;
  std::vector<LiftPtr> objects_;
  std::vector<std::optional<InternalStrictEp>> edges_;
};

Report validate_internal_diagram(const InternalDiagram& d);

// Limits on input sizes; stage counts multiply quickly.
struct InternalLimits {
  std::size_t max_base = 3;
  std::size_t max_stage = 3;
};

struct InternalBilimit {
  InternalDiagram diagram;
  PresheafPoset apex;
  // tuples[p][s][i]: component i of element s of stage p, in L D_i(p).
  std::vector<std::vector<std::vector<Elem>>> tuples;
  LiftPtr lifted_apex;
  std::vector<InternalStrictEp> cone;
  std::vector<std::map<std::vector<Elem>, Elem>> lookup;
  // Whether every restriction of an apex element stayed in the apex.
  bool restriction_stable = true;

  std::optional<Elem> find(Elem p, const std::vector<Elem>& tuple) const;
};

// Stage p keeps coherent tuples with some component defined on all of the
// principal sieve of p. Throws BudgetExceeded when the inputs exceed `limits`.
InternalBilimit build_internal_partial_bilimit(const InternalDiagram& d, const InternalLimits& limits = {},
                                               const Budget& budget = {});

struct InternalCone {
  LiftPtr apex;
  std::vector<InternalStrictEp> pairs;

  const NaturalMap& leg(Elem i) const { return pairs.at(i).proj(); }
  const NaturalMap& adjoint(Elem i) const { return pairs.at(i).emb(); }
};

void validate_internal_cone(const InternalDiagram& d, const InternalCone& c);
InternalCone own_cone(const InternalBilimit& b);
InternalCone top_cone(const InternalDiagram& d);
InternalCone extend_cone(const InternalCone& c, const InternalStrictEp& onward);

// p_inf(h) is defined on the union of the leg supports, with the tuple of legs
// as its value; e_inf is the stagewise lub of adjoint(i) . cone_proj(i).
InternalStrictEp internal_mediating(const InternalBilimit& b, const InternalCone& c);

// Stagewise rerun of the partial bilimit checks.
Report verify_internal_bilimit(const InternalBilimit& b);
// Existence, triangles, support of e_inf, and uniqueness among internal strict
// projections by exhaustion.
UniversalReport verify_internal_universal(const InternalBilimit& b, const InternalCone& c,
                                          const Budget& budget = {});

struct InternalRun {
  InternalBilimit bilimit;
  Report report;
};

// Builds the bilimit and verifies it together with its own cone, the top cone
// and every extra cone.
InternalRun internal_partial_bilimit(const InternalDiagram& d, const std::vector<InternalCone>& cones = {},
                                     const InternalLimits& limits = {}, const Budget& budget = {});

// One-point base only: rebuilds the diagram in boolean mode and checks that a
// constructed isomorphism matches apexes and cones.
Report compare_with_boolean(const InternalBilimit& b);

}  // namespace domkit

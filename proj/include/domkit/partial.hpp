#pragma once

#include <map>
#include <optional>
#include <vector>

#include "domkit/bilimit.hpp"
#include "domkit/lift.hpp"

namespace domkit {

// A diagram of strict ep-pairs L D_i <-> L D_j over a directed index.
class PartialEpDiagram {
 public:
  using EdgeMap = std::map<std::pair<Elem, Elem>, StrictEpPair>;

  // Same completion rules as EpDiagram::make.
  static PartialEpDiagram make(PosetPtr index, std::vector<PosetPtr> objects, const EdgeMap& edges);
  // Reads a diagram of the lift carriers back as a partial one.
  static PartialEpDiagram from_total(const std::vector<PosetPtr>& objects, const EpDiagram& carriers);

  const PosetPtr& index() const { return carriers_.index(); }
  std::size_t size() const { return objects_.size(); }
  const PosetPtr& object(Elem i) const { return objects_.at(i); }
  const std::vector<PosetPtr>& objects() const { return objects_; }
  const LiftPoset& lifted(Elem i) const { return lifts_.at(i); }
  const StrictEpPair& edge(Elem i, Elem j) const;
  Elem top() const { return carriers_.top(); }
  // The same diagram on the carriers L D_i.
  const EpDiagram& carriers() const { return carriers_; }

 private:
  PartialEpDiagram(std::vector<PosetPtr> objects, std::vector<LiftPoset> lifts, EpDiagram carriers,
                   std::vector<std::optional<StrictEpPair>> edges)
      : objects_(std::move(objects)), lifts_(std::move(lifts)), carriers_(std::move(carriers)),
        edges_(std::move(edges)) {}

  std::vector<PosetPtr> objects_;
  std::vector<LiftPoset> lifts_;
  EpDiagram carriers_;
  std::vector<std::optional<StrictEpPair>> edges_;
};

Report validate_partial_diagram(const PartialEpDiagram& d);
void check_partial_diagram(const PartialEpDiagram& d);

struct PartialBilimit {
  PartialEpDiagram diagram;
  PosetPtr apex;           // D_inf
  LiftPoset lifted_apex;   // L D_inf
  // tuples[s][i]: component i of apex element s, a position in L D_i.
  std::vector<std::vector<Elem>> tuples;
  // cone[i]: L D_i <-> L D_inf.
  std::vector<StrictEpPair> cone;

  const StrictMap& cone_proj(Elem i) const { return cone.at(i).proj(); }
  const StrictMap& cone_emb(Elem i) const { return cone.at(i).emb(); }
  std::optional<Elem> find(const std::vector<Elem>& tuple) const;

  std::map<std::vector<Elem>, Elem> lookup;
};

// Coherent tuples of lifted values with at least one defined component.
PartialBilimit build_partial_bilimit(const PartialEpDiagram& d, const Budget& budget = {});

// For every u in L D_inf (bottom included) the approximants are directed with
// lub u, and every other upper bound in L D_inf lies above u.
Report approximation_identity_partial(const PartialBilimit& b);

// The realized isomorphism D_inf ~ D_t, s -> value of its top component, and
// its inverse. Throws InternalFailure if it is not one.
std::pair<MonotoneMap, MonotoneMap> partial_top_isomorphism(const PartialBilimit& b);

// Membership, cone laws and naturality, the mu . L pi_i presentation of the
// cone, choice independence, approximation identity, colimit view and the top
// isomorphism.
Report verify_partial_bilimit(const PartialBilimit& b);

// pairs[i]: L D_i <-> L H; the legs are the projections.
struct PartialProjCone {
  LiftPoset apex;
  std::vector<StrictEpPair> pairs;

  const StrictMap& leg(Elem i) const { return pairs.at(i).proj(); }
  const StrictMap& adjoint(Elem i) const { return pairs.at(i).emb(); }
};

void validate_partial_cone(const PartialEpDiagram& d, const PartialProjCone& c);
PartialProjCone own_cone(const PartialBilimit& b);
PartialProjCone top_cone(const PartialEpDiagram& d);
PartialProjCone extend_cone(const PartialProjCone& c, const StrictEpPair& onward);

// h -> defined iff some leg is defined at h, as a strict map L H -> L 1.
StrictMap termination_support(const PartialProjCone& c);
// The support against the pointwise join of the per-leg supports.
Report termination_support_report(const PartialProjCone& c);

// p_inf from the support predicate and the tuple of legs; e_inf as the lub of
// adjoint(i) . cone_proj(i). Throws ConeInvalid or LubUndefined.
StrictEpPair mediating_projection_partial(const PartialBilimit& b, const PartialProjCone& c);

// p_inf against the lub of cone_emb(i) . leg(i), the triangles, the element
// chase pi_i . p_inf . e_inf = pi_i on apex elements, and adjointness.
Report mediating_alternatives_partial(const PartialBilimit& b, const PartialProjCone& c,
                                      const StrictEpPair& mediating);

// e_inf(u) is defined exactly when u is.
Report support_of_e_infinity(const PartialBilimit& b, const StrictEpPair& mediating);

// Exhausts every strict monotone map L H -> L D_inf. commuting_maps counts all
// strict commuting maps and is informational only.
UniversalReport verify_universal_partial(const PartialBilimit& b, const PartialProjCone& c,
                                         const Budget& budget = {});

}  // namespace domkit

#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "domkit/ep.hpp"
#include "domkit/poset.hpp"
#include "domkit/report.hpp"

namespace domkit {

// A diagram of ep-pairs over a directed index: an object per index element and
// an ep-pair D_i <-> D_j for every i <= j.
class EpDiagram {
 public:
  using EdgeMap = std::map<std::pair<Elem, Elem>, EpPair>;

  // Identity edges may be omitted. Every covering pair of the index needs an
  // edge; other missing edges are composed along covering edges. Throws
  // EmptyIndex, MissingEdge or Mismatch. Functoriality is not checked here.
  static EpDiagram make(PosetPtr index, std::vector<PosetPtr> objects, EdgeMap edges);

  const PosetPtr& index() const { return index_; }
  std::size_t size() const { return objects_.size(); }
  const PosetPtr& object(Elem i) const { return objects_.at(i); }
  const std::vector<PosetPtr>& objects() const { return objects_; }
  // Throws MissingEdge unless i <= j.
  const EpPair& edge(Elem i, Elem j) const;
  // The greatest index element; finite directed posets always have one.
  Elem top() const;

 private:
  EpDiagram(PosetPtr index, std::vector<PosetPtr> objects, std::vector<std::optional<EpPair>> edges)
      : index_(std::move(index)), objects_(std::move(objects)), edges_(std::move(edges)) {}

  PosetPtr index_;
  std::vector<PosetPtr> objects_;
  std::vector<std::optional<EpPair>> edges_;
};

// Directedness, identity edges and functoriality, with witnesses.
Report validate_diagram(const EpDiagram& d);
// Throws IndexNotDirected or FunctorialityFailure(i, j, k) on the first failure.
void check_diagram(const EpDiagram& d);

// Least element, in a fixed linear extension, among the upper bounds of i and
// j; it is always a minimal upper bound. Throws IndexNotDirected.
Elem choose_upper_bound(const FinPoset& index, Elem i, Elem j);

struct Bilimit {
  EpDiagram diagram;
  PosetPtr apex;
  // tuples[s][i] is the i-th component of apex element s.
  std::vector<std::vector<Elem>> tuples;
  // cone[i]: D_i <-> apex.
  std::vector<EpPair> cone;

  const MonotoneMap& cone_proj(Elem i) const { return cone.at(i).proj(); }
  const MonotoneMap& cone_emb(Elem i) const { return cone.at(i).emb(); }
  std::optional<Elem> find(const std::vector<Elem>& tuple) const;

  std::map<std::vector<Elem>, Elem> lookup;
};

// Every coherent tuple, in lexicographic order. Throws BudgetExceeded.
std::vector<std::vector<Elem>> coherent_tuples(const EpDiagram& d, const Budget& budget = {});

// Coherent tuples under the pointwise order, with the limiting cone. Throws
// on an invalid diagram.
Bilimit build_bilimit(const EpDiagram& d, const Budget& budget = {});

// Componentwise tuple id "(x,y,...)".
std::string tuple_id(const std::vector<PosetPtr>& objects, const std::vector<Elem>& tuple);

// pi_{j<=k} . eps_{i<=k} agrees for every pair of upper bounds k, k' of i, j.
Report choice_independence(const EpDiagram& d, Elem i, Elem j);
Report choice_independence(const EpDiagram& d);

// Every element is the directed lub of its approximations e_i(p_i(s)).
Report approximation_identity(const Bilimit& b);

// cone_emb(j) . eps_{i<=j} = cone_emb(i).
Report colimit_view(const Bilimit& b);

// cone_proj(t) is an isomorphism onto D_t with inverse cone_emb(t).
Report top_isomorphism(const Bilimit& b);

// Coherence, cone laws, naturality, choice independence, approximation
// identity, colimit view and the top isomorphism.
Report verify_bilimit(const Bilimit& b);

// A cone of projections H -> D_i; pairs[i] is (adjoint, leg): D_i <-> H.
struct ProjCone {
  PosetPtr apex;
  std::vector<EpPair> pairs;

  const MonotoneMap& leg(Elem i) const { return pairs.at(i).proj(); }
  const MonotoneMap& adjoint(Elem i) const { return pairs.at(i).emb(); }
};

// Throws ConeInvalid on shape mismatch or a non-natural leg.
void validate_cone(const EpDiagram& d, const ProjCone& c);

ProjCone own_cone(const Bilimit& b);
// Legs pi_{i<=t} out of the top object.
ProjCone top_cone(const EpDiagram& d);
// Post-composes every pair with apex <-> H.
ProjCone extend_cone(const ProjCone& c, const EpPair& onward);

// emb = e_inf: B.apex -> C.apex, proj = p_inf: C.apex -> B.apex. Throws
// ConeInvalid, or LubUndefined if the family defining e_inf is not directed.
EpPair mediating_projection(const Bilimit& b, const ProjCone& c);

// p_inf against the pointwise lub of cone_emb(i) . leg(i), and the mediating
// triangles.
Report mediating_alternatives(const Bilimit& b, const ProjCone& c, const EpPair& mediating);

struct UniversalReport {
  bool exists = false;
  bool commutes = false;
  bool unique_among_projections = false;
  std::size_t candidates = 0;             // monotone maps C.apex -> B.apex
  std::size_t projections = 0;            // of those, right halves of ep-pairs
  std::size_t commuting_maps = 0;         // monotone maps making every triangle commute
  std::size_t commuting_projections = 0;
  Report report;

  bool ok() const { return exists && commutes && unique_among_projections && report.ok(); }
  nlohmann::json to_json() const;
};

// Exhausts every monotone map C.apex -> B.apex. Throws BudgetExceeded.
UniversalReport verify_universal(const Bilimit& b, const ProjCone& c, const Budget& budget = {});

}  // namespace domkit

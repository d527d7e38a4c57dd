#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace domkit {

// Elements of a finite poset are addressed by their position in the carrier.
using Elem = std::size_t;

// Caps exhaustive enumeration: a search over maps A -> B is admitted only
// when the |B|^|A| candidate functions fit in `max_candidates`.
struct Budget {
  std::uint64_t max_candidates = 1'000'000;

  // Saturating |cod|^|dom|.
  static std::uint64_t function_count(std::size_t dom_size, std::size_t cod_size);
  void require_functions(std::size_t dom_size, std::size_t cod_size, std::string_view what) const;
  void require_size(std::uint64_t count, std::string_view what) const;
};

class FinPoset;
using PosetPtr = std::shared_ptr<const FinPoset>;

// A finite carrier with a decidable partial order. Immutable once built;
// every factory validates reflexivity, antisymmetry and transitivity.
class FinPoset {
  struct Token {};

 public:
  using Relation = std::vector<std::pair<std::string, std::string>>;

  // Validates the relation exactly as given.
  static PosetPtr check(std::string name, std::vector<std::string> ids, const Relation& le);
  // Takes the reflexive-transitive closure of `le` first, then validates.
  static PosetPtr close(std::string name, std::vector<std::string> ids, const Relation& le);
  static PosetPtr from_predicate(std::string name, std::vector<std::string> ids,
                                 const std::function<bool(Elem, Elem)>& leq);

  FinPoset(Token, std::string name, std::vector<std::string> ids, std::vector<std::uint8_t> leq);

  const std::string& name() const { return name_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const std::string& id(Elem x) const { return ids_.at(x); }
  const std::vector<std::string>& ids() const { return ids_; }

  std::optional<Elem> find(std::string_view id) const;
  // Throws UnknownElement.
  Elem at(std::string_view id) const;

  bool leq(Elem a, Elem b) const { return leq_[a * ids_.size() + b] != 0; }
  bool less(Elem a, Elem b) const { return a != b && leq(a, b); }
  bool comparable(Elem a, Elem b) const { return leq(a, b) || leq(b, a); }

  std::optional<Elem> bottom() const;
  std::optional<Elem> top() const;
  std::vector<Elem> upper_bounds(Elem a, Elem b) const;

  // Same ids in the same positions with the same order; names are ignored.
  bool same_shape(const FinPoset& other) const;

 private:
  static PosetPtr validated(std::string name, std::vector<std::string> ids,
                            std::vector<std::uint8_t> leq);

  std::string name_;
  std::vector<std::string> ids_;
  std::vector<std::uint8_t> leq_;
  std::unordered_map<std::string, Elem> index_;
};

bool same_shape(const PosetPtr& a, const PosetPtr& b);

// Standard small posets. Chains are named 0 < 1 < ... ; antichains a, b, ...
PosetPtr chain(std::size_t n);
PosetPtr antichain(std::size_t n);
PosetPtr unit_poset();
PosetPtr empty_poset();

// Nonempty and pairwise bounded within the subset.
bool is_directed(const FinPoset& p, std::span<const Elem> subset);
// Id-level overload; throws UnknownElement.
bool is_directed(const FinPoset& p, const std::vector<std::string>& subset);
// Greatest member of a directed subset; throws NotDirected with a witness pair.
Elem directed_lub(const FinPoset& p, std::span<const Elem> subset);

struct DirectedSubset {
  PosetPtr ambient;
  std::vector<Elem> members;

  static DirectedSubset make(PosetPtr ambient, std::vector<Elem> members);
  Elem lub() const { return directed_lub(*ambient, members); }
};

class MonotoneMap {
 public:
  // Throws NotMonotone with the offending pair, or Mismatch on arity.
  static MonotoneMap make(PosetPtr dom, PosetPtr cod, std::vector<Elem> assignment);
  static MonotoneMap identity(PosetPtr p);
  static MonotoneMap constant(PosetPtr dom, PosetPtr cod, Elem value);

  Elem operator()(Elem x) const { return assignment_[x]; }
  const PosetPtr& dom() const { return dom_; }
  const PosetPtr& cod() const { return cod_; }
  const std::vector<Elem>& assignment() const { return assignment_; }

  bool is_injective() const;
  bool is_order_reflecting() const;
  // Pointwise f <= g; endpoints must match.
  bool pointwise_leq(const MonotoneMap& other) const;

  friend bool operator==(const MonotoneMap& a, const MonotoneMap& b);

 private:
  MonotoneMap(PosetPtr dom, PosetPtr cod, std::vector<Elem> assignment)
      : dom_(std::move(dom)), cod_(std::move(cod)), assignment_(std::move(assignment)) {}

  PosetPtr dom_;
  PosetPtr cod_;
  std::vector<Elem> assignment_;
};

// g after f; throws Mismatch unless f.cod and g.dom have the same shape.
MonotoneMap compose(const MonotoneMap& g, const MonotoneMap& f);

std::string describe(const MonotoneMap& f);

// Callback over partial assignments: may `y` be assigned to `x` given the
// values already chosen for elements 0..x-1?
using Admissible = std::function<bool(Elem x, Elem y, std::span<const Elem> prefix)>;
// Return false to stop the traversal.
using Visitor = std::function<bool(std::span<const Elem> assignment)>;

// Backtracking traversal of every monotone map dom -> cod, in lexicographic
// order of assignment vectors. `admissible` only prunes; monotonicity is
// always enforced. Budget is the caller's responsibility.
void for_each_monotone(const FinPoset& dom, const FinPoset& cod, const Admissible& admissible,
                       const Visitor& visit);

std::vector<MonotoneMap> enumerate_monotone_maps(const PosetPtr& dom, const PosetPtr& cod,
                                                 const Budget& budget = {});

struct Product {
  PosetPtr poset;
  std::vector<std::string> index;
  std::vector<PosetPtr> factors;
  std::vector<MonotoneMap> projections;

  std::vector<Elem> tuple(Elem x) const;
  Elem element(std::span<const Elem> tuple) const;
};

// Tuples in lexicographic order, ordered pointwise. An empty index is an error.
Product product_family(std::vector<std::string> index, std::vector<PosetPtr> factors,
                       const Budget& budget = {});

struct SubPoset {
  PosetPtr poset;
  MonotoneMap inclusion;
  std::vector<Elem> kept;
};

SubPoset sub_poset(const PosetPtr& p, const std::function<bool(Elem)>& keep,
                   std::string name = {});

struct FunctionSpace {
  PosetPtr poset;
  PosetPtr dom;
  PosetPtr cod;
  std::vector<MonotoneMap> maps;

  const MonotoneMap& map(Elem x) const { return maps.at(x); }
  std::optional<Elem> find(const std::vector<Elem>& assignment) const;

 private:
  friend FunctionSpace function_space(const PosetPtr&, const PosetPtr&, const Budget&);
  std::map<std::vector<Elem>, Elem> lookup_;
};

// All monotone maps ordered pointwise.
FunctionSpace function_space(const PosetPtr& a, const PosetPtr& b, const Budget& budget = {});

struct Coproduct {
  PosetPtr poset;
  MonotoneMap inl;
  MonotoneMap inr;

  Elem left(Elem a) const { return inl(a); }
  Elem right(Elem b) const { return inr(b); }
  bool is_left(Elem x) const;
  // Position within the summand.
  Elem component(Elem x) const;
};

Coproduct coproduct(const PosetPtr& a, const PosetPtr& b);

// Covering pairs (a, b) with a < b and nothing strictly between.
std::vector<std::pair<Elem, Elem>> hasse_edges(const FinPoset& p);

// Deterministic topological order of the elements (minimal first, ties by
// position).
std::vector<Elem> linear_extension(const FinPoset& p);

}  // namespace domkit

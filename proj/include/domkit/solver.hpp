#pragma once

#include <compare>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "domkit/bilimit.hpp"
#include "domkit/lift.hpp"
#include "domkit/partial.hpp"

namespace domkit {

enum class Mode { Total, Partial };

std::string_view to_string(Mode m);
// Throws ParseError.
Mode parse_mode(std::string_view text);

// Domain constructors over one variable X.
struct DomainExpr {
  enum class Kind { Var, Const, Unit, Empty, Sum, Prod, Arrow, Lift };

  Kind kind = Kind::Var;
  std::string name;  // constant name
  PosetPtr constant;
  std::vector<DomainExpr> args;

  static DomainExpr var() { return {}; }
  static DomainExpr unit() { return {Kind::Unit, {}, {}, {}}; }
  static DomainExpr empty() { return {Kind::Empty, {}, {}, {}}; }
  static DomainExpr constant_of(std::string name, PosetPtr p) { return {Kind::Const, std::move(name), std::move(p), {}}; }
  static DomainExpr sum(DomainExpr a, DomainExpr b) { return {Kind::Sum, {}, {}, {std::move(a), std::move(b)}}; }
  static DomainExpr prod(DomainExpr a, DomainExpr b) { return {Kind::Prod, {}, {}, {std::move(a), std::move(b)}}; }
  static DomainExpr arrow(DomainExpr a, DomainExpr b) { return {Kind::Arrow, {}, {}, {std::move(a), std::move(b)}}; }
  static DomainExpr lift(DomainExpr a) { return {Kind::Lift, {}, {}, {std::move(a)}}; }

  // Canonical form, e.g. "sum(unit,prod(X,X))".
  std::string to_string() const;
  friend bool operator==(const DomainExpr& a, const DomainExpr& b) { return a.to_string() == b.to_string(); }
};

using Constants = std::map<std::string, PosetPtr, std::less<>>;

// Precedence lift > * > + > ->; '->' is right-associative, '+' and '*' are
// left-associative. Errors carry the column of the offending token.
// Throws SyntaxError, MultipleVariables or UnknownConstant.
DomainExpr parse_expr(std::string_view text, const Constants& constants = {});

// Level-size guard for chains and functor evaluation.
struct SolverBudget {
  std::size_t max_level = 512;
  Budget enumeration{};
};

// Structural evaluation: coproduct, product, monotone function space,
// lift. In partial mode arrow(A,B) is the poset of monotone maps A -> L B,
// that is strict maps L A -> L B, ordered pointwise.
PosetPtr functor_object(const DomainExpr& e, const PosetPtr& p, Mode mode, const SolverBudget& budget = {});

// Action on ep-pairs. Arrow embeds f to e2.f.p1 and projects g to p2.g.e1.
EpPair functor_ep(const DomainExpr& e, const EpPair& ep, const SolverBudget& budget = {});
// The same action on strict ep-pairs L A <-> L B.
StrictEpPair functor_ep(const DomainExpr& e, const StrictEpPair& ep, const SolverBudget& budget = {});

struct ChainApprox {
  DomainExpr expr;
  Mode mode = Mode::Total;
  std::vector<PosetPtr> levels;
  std::vector<EpPair> total_links;         // total mode
  std::vector<StrictEpPair> strict_links;  // partial mode

  std::size_t depth() const { return levels.size() - 1; }
  std::vector<std::size_t> level_sizes() const;
  // Level embedding D_k -> D_{k+1} on elements; total in either mode.
  Elem embed(std::size_t k, Elem x) const;
  // Preimage under embed(k - 1, .), if x lies in its image.
  std::optional<Elem> retract(std::size_t k, Elem x) const;
};

// Levels D_0 .. D_depth with D_{k+1} = F(D_k) and links(k+1) = F(links(k)).
// Without a starter the first enumerated ep-pair is used; in partial mode an
// empty base starts from the empty strict ep-pair. Throws NoStarterEp or
// BudgetExceeded.
ChainApprox iterate_chain(const DomainExpr& e, const PosetPtr& base, std::size_t depth, Mode mode,
                          const SolverBudget& budget = {});
ChainApprox iterate_chain(const DomainExpr& e, const EpPair& starter, std::size_t depth,
                          const SolverBudget& budget = {});
ChainApprox iterate_chain(const DomainExpr& e, const StrictEpPair& starter, std::size_t depth,
                          const SolverBudget& budget = {});

struct TruncatedBilimit {
  std::optional<Bilimit> total;
  std::optional<PartialBilimit> partial;
  // apex element -> element of D_k
  std::vector<Elem> iso;
  Report report;

  PosetPtr apex() const { return total ? total->apex : partial->apex; }
};

// Bilimit of the segment 0..k with the isomorphism apex -> D_k checked.
TruncatedBilimit truncated_bilimit(const ChainApprox& c, std::size_t k, const Budget& budget = {});

// The lift chain from the empty poset, and sigma_k: L(D_{k-1}) -> D_k for
// k = 1..n.
struct OmegaBar {
  ChainApprox chain;
  std::vector<MonotoneMap> sigma;  // sigma[k-1] is sigma_k
  Report report;
};

OmegaBar omega_bar(std::size_t n);

// (rank, value) with value in D_rank of a shared chain.
struct FiniteRankElem {
  std::shared_ptr<const ChainApprox> chain;
  std::size_t rank = 0;
  Elem value = 0;

  std::string id() const;
  friend bool operator==(const FiniteRankElem& a, const FiniteRankElem& b) {
    return a.chain == b.chain && a.rank == b.rank && a.value == b.value;
  }
};

FiniteRankElem canonical_rank(const FiniteRankElem& x);
// The same element at a higher rank.
FiniteRankElem coerce(const FiniteRankElem& x, std::size_t rank);
// Throws DifferentChains.
std::partial_ordering compare(const FiniteRankElem& x, const FiniteRankElem& y);
// Throws DifferentChains, NotDirected.
FiniteRankElem lub_finite_rank(const std::vector<FiniteRankElem>& xs);

struct FixedPoint {
  Elem value;
  std::size_t steps;  // applications until the iterate stopped moving
};

// Kleene iteration from the bottom; checked to be below every fixed point.
// Throws NotPointed.
FixedPoint lfp(const MonotoneMap& f);

// `domain <name> = <expr>` plus directives `base`, `mode`, `depth`, and
// `const <ident> <posetfile>`. `sierpinski` is predefined.
struct Equation {
  std::string name;
  DomainExpr expr;
  PosetPtr base;
  std::string base_label;
  Mode mode = Mode::Total;
  std::size_t depth = 3;
};

Equation parse_equation(std::string_view text, const std::filesystem::path& dir = ".");
Equation load_equation(const std::filesystem::path& path);

}  // namespace domkit

#include "domkit/solver.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "domkit/error.hpp"
#include "domkit/poset_io.hpp"

namespace domkit {

std::string_view to_string(Mode m) { return m == Mode::Total ? "total" : "partial"; }

Mode parse_mode(std::string_view text) {
  if (text == "total") return Mode::Total;
  if (text == "partial") return Mode::Partial;
  fail(ErrorKind::ParseError, "mode must be total or partial", {std::string(text)});
}

std::string DomainExpr::to_string() const {
  switch (kind) {
    case Kind::Var: return "X";
    case Kind::Const: return name;
    case Kind::Unit: return "unit";
    case Kind::Empty: return "empty";
    case Kind::Lift: return "lift(" + args[0].to_string() + ")";
    case Kind::Sum: return "sum(" + args[0].to_string() + "," + args[1].to_string() + ")";
    case Kind::Prod: return "prod(" + args[0].to_string() + "," + args[1].to_string() + ")";
    case Kind::Arrow: return "arrow(" + args[0].to_string() + "," + args[1].to_string() + ")";
  }
  return {};
}

// ---- parser ----

namespace {

struct Token {
  enum Kind { Zero, One, Var, Ident, Lift, Arrow, Plus, Star, LParen, RParen, End } kind;
  std::string text;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    const std::size_t col = i + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      out.push_back({Token::Arrow, "->", col});
      i += 2;
    } else if (c == '+' || c == '*' || c == '(' || c == ')') {
      auto k = c == '+' ? Token::Plus : c == '*' ? Token::Star : c == '(' ? Token::LParen : Token::RParen;
      out.push_back({k, std::string(1, c), col});
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      std::string num(s.substr(i, j - i));
      if (num != "0" && num != "1")
        fail(ErrorKind::SyntaxError, "only 0 and 1 are numeric constants (column " + std::to_string(col) + ")",
             {num, std::to_string(col)});
      out.push_back({num == "0" ? Token::Zero : Token::One, num, col});
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      std::string word(s.substr(i, j - i));
      auto k = word == "lift" ? Token::Lift : word == "X" ? Token::Var : Token::Ident;
      out.push_back({k, word, col});
      i = j;
    } else {
      fail(ErrorKind::SyntaxError, "unexpected character at column " + std::to_string(col),
           {std::string(1, c), std::to_string(col)});
    }
  }
  out.push_back({Token::End, "", s.size() + 1});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const Constants& constants) : toks_(std::move(toks)), constants_(constants) {}

  DomainExpr parse() {
    auto e = arrow();
    if (peek().kind != Token::End) unexpected();
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool accept(Token::Kind k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void unexpected() const {
    const auto& t = peek();
    std::string what = t.kind == Token::End ? "end of input" : "'" + t.text + "'";
    fail(ErrorKind::SyntaxError, "unexpected " + what + " at column " + std::to_string(t.column),
         {t.text, std::to_string(t.column)});
  }

  DomainExpr arrow() {
    auto l = sum();
    if (accept(Token::Arrow)) return DomainExpr::arrow(std::move(l), arrow());
    return l;
  }
  DomainExpr sum() {
    auto l = prod();
    while (accept(Token::Plus)) l = DomainExpr::sum(std::move(l), prod());
    return l;
  }
  DomainExpr prod() {
    auto l = unary();
    while (accept(Token::Star)) l = DomainExpr::prod(std::move(l), unary());
    return l;
  }
  DomainExpr unary() {
    if (accept(Token::Lift)) return DomainExpr::lift(unary());
    return atom();
  }
  DomainExpr atom() {
    const Token t = peek();
    switch (t.kind) {
      case Token::Zero: ++pos_; return DomainExpr::empty();
      case Token::One: ++pos_; return DomainExpr::unit();
      case Token::Var: ++pos_; return DomainExpr::var();
      case Token::LParen: {
        ++pos_;
        auto e = arrow();
        if (!accept(Token::RParen)) unexpected();
        return e;
      }
      case Token::Ident: {
        ++pos_;
        if (auto it = constants_.find(t.text); it != constants_.end())
          return DomainExpr::constant_of(t.text, it->second);
        if (t.text.size() == 1 && std::isupper(static_cast<unsigned char>(t.text[0])))
          fail(ErrorKind::MultipleVariables, "only the variable X is allowed (column " + std::to_string(t.column) + ")",
               {t.text, std::to_string(t.column)});
        fail(ErrorKind::UnknownConstant, "unknown constant '" + t.text + "' at column " + std::to_string(t.column),
             {t.text, std::to_string(t.column)});
      }
      default: unexpected();
    }
  }

  std::vector<Token> toks_;
  const Constants& constants_;
  std::size_t pos_ = 0;
};

}  // namespace

DomainExpr parse_expr(std::string_view text, const Constants& constants) {
  return Parser(tokenize(text), constants).parse();
}

// ---- functor action ----

namespace {

PosetPtr guarded(PosetPtr p, const SolverBudget& budget) {
  if (p->size() > budget.max_level)
    fail(ErrorKind::BudgetExceeded,
         "object " + p->name() + " has " + std::to_string(p->size()) + " elements, over the level budget " +
             std::to_string(budget.max_level),
         {std::to_string(p->size())});
  return p;
}

PosetPtr pair_product(const PosetPtr& a, const PosetPtr& b, const Budget& budget) {
  return product_family({"1", "2"}, {a, b}, budget).poset;
}

std::optional<Elem> partial_value(Elem u) {
  if (!LiftPoset::defined(u)) return std::nullopt;
  return LiftPoset::value(u);
}

}  // namespace

PosetPtr functor_object(const DomainExpr& e, const PosetPtr& p, Mode mode, const SolverBudget& budget) {
  using K = DomainExpr::Kind;
  switch (e.kind) {
    case K::Var: return p;
    case K::Const: return e.constant;
    case K::Unit: return unit_poset();
    case K::Empty: return empty_poset();
    case K::Lift: return guarded(lift_poset(functor_object(e.args[0], p, mode, budget)).carrier, budget);
    default: break;
  }
  auto a = functor_object(e.args[0], p, mode, budget);
  auto b = functor_object(e.args[1], p, mode, budget);
  budget.enumeration.require_size(a->size() * std::max<std::size_t>(b->size(), 1), "functor_object");
  switch (e.kind) {
    case K::Sum: return guarded(coproduct(a, b).poset, budget);
    case K::Prod: return guarded(pair_product(a, b, budget.enumeration), budget);
    default: {
      auto cod = mode == Mode::Total ? b : lift_poset(b).carrier;
      if (Budget::function_count(a->size(), cod->size()) > budget.enumeration.max_candidates)
        fail(ErrorKind::BudgetExceeded,
             "function space [" + std::to_string(a->size()) + " -> " + std::to_string(cod->size()) +
                 "] exceeds the enumeration budget",
             {std::to_string(a->size()), std::to_string(cod->size())});
      return guarded(function_space(a, cod, budget.enumeration).poset, budget);
    }
  }
}

EpPair functor_ep(const DomainExpr& e, const EpPair& ep, const SolverBudget& budget) {
  using K = DomainExpr::Kind;
  switch (e.kind) {
    case K::Var: return ep;
    case K::Const:
    case K::Unit:
    case K::Empty: return EpPair::identity(functor_object(e, ep.small(), Mode::Total, budget));
    case K::Lift: return lift_ep(functor_ep(e.args[0], ep, budget)).total();
    default: break;
  }
  auto l = functor_ep(e.args[0], ep, budget);
  auto r = functor_ep(e.args[1], ep, budget);
  if (e.kind == K::Sum) {
    auto s = coproduct(l.small(), r.small());
    auto g = coproduct(l.large(), r.large());
    std::vector<Elem> emb, proj;
    for (Elem x = 0; x < s.poset->size(); ++x)
      emb.push_back(s.is_left(x) ? g.left(l.emb()(s.component(x))) : g.right(r.emb()(s.component(x))));
    for (Elem y = 0; y < g.poset->size(); ++y)
      proj.push_back(g.is_left(y) ? s.left(l.proj()(g.component(y))) : s.right(r.proj()(g.component(y))));
    return EpPair::make(MonotoneMap::make(s.poset, g.poset, std::move(emb)),
                        MonotoneMap::make(g.poset, s.poset, std::move(proj)));
  }
  if (e.kind == K::Prod) {
    auto s = product_family({"1", "2"}, {l.small(), r.small()}, budget.enumeration);
    auto g = product_family({"1", "2"}, {l.large(), r.large()}, budget.enumeration);
    std::vector<Elem> emb, proj;
    for (Elem x = 0; x < s.poset->size(); ++x) {
      auto t = s.tuple(x);
      std::vector<Elem> img{l.emb()(t[0]), r.emb()(t[1])};
      emb.push_back(g.element(img));
    }
    for (Elem y = 0; y < g.poset->size(); ++y) {
      auto t = g.tuple(y);
      std::vector<Elem> img{l.proj()(t[0]), r.proj()(t[1])};
      proj.push_back(s.element(img));
    }
    return EpPair::make(MonotoneMap::make(s.poset, g.poset, std::move(emb)),
                        MonotoneMap::make(g.poset, s.poset, std::move(proj)));
  }
  // Arrow: f -> e2.f.p1 and g -> p2.g.e1.
  auto small = function_space(l.small(), r.small(), budget.enumeration);
  auto large = function_space(l.large(), r.large(), budget.enumeration);
  guarded(large.poset, budget);
  std::vector<Elem> emb, proj;
  for (const auto& f : small.maps) emb.push_back(*large.find(compose(r.emb(), compose(f, l.proj())).assignment()));
  for (const auto& g : large.maps) proj.push_back(*small.find(compose(r.proj(), compose(g, l.emb())).assignment()));
  return EpPair::make(MonotoneMap::make(small.poset, large.poset, std::move(emb)),
                      MonotoneMap::make(large.poset, small.poset, std::move(proj)));
}

StrictEpPair functor_ep(const DomainExpr& e, const StrictEpPair& ep, const SolverBudget& budget) {
  using K = DomainExpr::Kind;
  switch (e.kind) {
    case K::Var: return ep;
    case K::Const:
    case K::Unit:
    case K::Empty:
      return StrictEpPair::identity(lift_poset(functor_object(e, ep.small().base, Mode::Partial, budget)));
    case K::Lift: return lift_ep(functor_ep(e.args[0], ep, budget).total());
    default: break;
  }
  auto l = functor_ep(e.args[0], ep, budget);
  auto r = functor_ep(e.args[1], ep, budget);
  // Partial maps on the underlying posets; embeddings are total there.
  auto pe = [](const StrictMap& f, Elem x) { return partial_value(f(LiftPoset::eta(x))); };
  std::vector<std::optional<Elem>> emb, proj;
  if (e.kind == K::Sum) {
    auto s = coproduct(l.small().base, r.small().base);
    auto g = coproduct(l.large().base, r.large().base);
    for (Elem x = 0; x < s.poset->size(); ++x) {
      const auto& half = s.is_left(x) ? l : r;
      auto v = pe(half.emb(), s.component(x));
      emb.push_back(v ? std::optional(s.is_left(x) ? g.left(*v) : g.right(*v)) : std::nullopt);
    }
    for (Elem y = 0; y < g.poset->size(); ++y) {
      const auto& half = g.is_left(y) ? l : r;
      auto v = pe(half.proj(), g.component(y));
      proj.push_back(v ? std::optional(g.is_left(y) ? s.left(*v) : s.right(*v)) : std::nullopt);
    }
    return strict_ep_from_partial(s.poset, g.poset, emb, proj);
  }
  if (e.kind == K::Prod) {
    auto s = product_family({"1", "2"}, {l.small().base, r.small().base}, budget.enumeration);
    auto g = product_family({"1", "2"}, {l.large().base, r.large().base}, budget.enumeration);
    auto both = [](std::optional<Elem> a, std::optional<Elem> b, const Product& into) -> std::optional<Elem> {
      if (!a || !b) return std::nullopt;
      std::vector<Elem> t{*a, *b};
      return into.element(t);
    };
    for (Elem x = 0; x < s.poset->size(); ++x) {
      auto t = s.tuple(x);
      emb.push_back(both(pe(l.emb(), t[0]), pe(r.emb(), t[1]), g));
    }
    for (Elem y = 0; y < g.poset->size(); ++y) {
      auto t = g.tuple(y);
      proj.push_back(both(pe(l.proj(), t[0]), pe(r.proj(), t[1]), s));
    }
    return strict_ep_from_partial(s.poset, g.poset, emb, proj);
  }
  // Arrow over maps A -> L B, each standing for its strict extension.
  auto small = function_space(l.small().base, r.small().carrier, budget.enumeration);
  auto large = function_space(l.large().base, r.large().carrier, budget.enumeration);
  guarded(large.poset, budget);
  auto extend = [](const MonotoneMap& f, Elem u) { return LiftPoset::defined(u) ? f(LiftPoset::value(u)) : u; };
  std::vector<Elem> te, tp;
  for (const auto& f : small.maps) {
    std::vector<Elem> a;
    for (Elem x = 0; x < l.large().base->size(); ++x)
      a.push_back(r.emb()(extend(f, l.proj()(LiftPoset::eta(x)))));
    te.push_back(*large.find(a));
  }
  for (const auto& g : large.maps) {
    std::vector<Elem> a;
    for (Elem x = 0; x < l.small().base->size(); ++x)
      a.push_back(r.proj()(extend(g, l.emb()(LiftPoset::eta(x)))));
    tp.push_back(*small.find(a));
  }
  return lift_ep(EpPair::make(MonotoneMap::make(small.poset, large.poset, std::move(te)),
                              MonotoneMap::make(large.poset, small.poset, std::move(tp))));
}

// ---- chains ----

std::vector<std::size_t> ChainApprox::level_sizes() const {
  std::vector<std::size_t> out;
  for (const auto& l : levels) out.push_back(l->size());
  return out;
}

Elem ChainApprox::embed(std::size_t k, Elem x) const {
  if (mode == Mode::Total) return total_links.at(k).emb()(x);
  return LiftPoset::value(strict_links.at(k).emb()(LiftPoset::eta(x)));
}

std::optional<Elem> ChainApprox::retract(std::size_t k, Elem x) const {
  if (k == 0) return std::nullopt;
  if (mode == Mode::Total) {
    const auto& l = total_links.at(k - 1);
    Elem y = l.proj()(x);
    if (l.emb()(y) == x) return y;
    return std::nullopt;
  }
  const auto& l = strict_links.at(k - 1);
  Elem u = l.proj()(LiftPoset::eta(x));
  if (LiftPoset::defined(u) && l.emb()(u) == LiftPoset::eta(x)) return LiftPoset::value(u);
  return std::nullopt;
}

namespace {

void require_level(const ChainApprox& c, std::size_t k, const PosetPtr& got) {
  if (!same_shape(got, c.levels[k]))
    fail(ErrorKind::InternalFailure, "functor action landed outside level " + std::to_string(k));
}

ChainApprox start(const DomainExpr& e, const PosetPtr& base, std::size_t depth, Mode mode,
                  const SolverBudget& budget) {
  ChainApprox c{e, mode, {guarded(base, budget)}, {}, {}};
  for (std::size_t k = 0; k < depth; ++k) c.levels.push_back(functor_object(e, c.levels.back(), mode, budget));
  return c;
}

}  // namespace

ChainApprox iterate_chain(const DomainExpr& e, const EpPair& starter, std::size_t depth,
                          const SolverBudget& budget) {
  auto c = start(e, starter.small(), depth, Mode::Total, budget);
  if (depth == 0) return c;
  require_level(c, 1, starter.large());
  c.total_links.push_back(starter);
  for (std::size_t k = 1; k < depth; ++k) {
    c.total_links.push_back(functor_ep(e, c.total_links.back(), budget));
    require_level(c, k + 1, c.total_links.back().large());
  }
  return c;
}

ChainApprox iterate_chain(const DomainExpr& e, const StrictEpPair& starter, std::size_t depth,
                          const SolverBudget& budget) {
  auto c = start(e, starter.small().base, depth, Mode::Partial, budget);
  if (depth == 0) return c;
  require_level(c, 1, starter.large().base);
  c.strict_links.push_back(starter);
  for (std::size_t k = 1; k < depth; ++k) {
    c.strict_links.push_back(functor_ep(e, c.strict_links.back(), budget));
    require_level(c, k + 1, c.strict_links.back().large().base);
  }
  return c;
}

ChainApprox iterate_chain(const DomainExpr& e, const PosetPtr& base, std::size_t depth, Mode mode,
                          const SolverBudget& budget) {
  if (depth == 0) return start(e, base, 0, mode, budget);
  auto next = functor_object(e, base, mode, budget);
  if (mode == Mode::Total) {
    auto eps = enumerate_ep_pairs(base, next, budget.enumeration);
    if (eps.empty())
      fail(ErrorKind::NoStarterEp,
           "no ep-pair " + base->name() + " <-> F(" + base->name() + "); total chains cannot start here" +
               (base->empty() ? " (nothing projects onto the empty poset; try partial mode)" : ""),
           {base->name()});
    return iterate_chain(e, eps.front(), depth, budget);
  }
  if (base->empty()) return iterate_chain(e, empty_strict_ep(next), depth, budget);
  auto eps = enumerate_strict_ep_pairs(lift_poset(base), lift_poset(next), budget.enumeration);
  if (eps.empty())
    fail(ErrorKind::NoStarterEp, "no strict ep-pair L" + base->name() + " <-> L F(" + base->name() + ")",
         {base->name()});
  return iterate_chain(e, eps.front(), depth, budget);
}

// ---- truncation ----

namespace {

void check_iso(Report& r, const FinPoset& apex, const FinPoset& target, const std::vector<std::optional<Elem>>& f,
               const std::string& label) {
  bool ok = f.size() == target.size() && apex.size() == target.size();
  std::set<Elem> seen;
  for (const auto& v : f) {
    if (!v) ok = false;
    else seen.insert(*v);
  }
  ok = ok && seen.size() == f.size();
  for (Elem a = 0; a < f.size() && ok; ++a)
    for (Elem b = 0; b < f.size() && ok; ++b) ok = apex.leq(a, b) == target.leq(*f[a], *f[b]);
  r.add(label, ok, std::to_string(apex.size()) + " elements");
}

}  // namespace

TruncatedBilimit truncated_bilimit(const ChainApprox& c, std::size_t k, const Budget& budget) {
  if (k >= c.levels.size()) fail(ErrorKind::Mismatch, "truncation level beyond the chain", {std::to_string(k)});
  auto index = chain(k + 1);
  std::vector<PosetPtr> objects(c.levels.begin(), c.levels.begin() + static_cast<std::ptrdiff_t>(k + 1));
  TruncatedBilimit out;
  out.report = Report("truncated bilimit at level " + std::to_string(k));
  std::vector<std::optional<Elem>> iso;
  if (c.mode == Mode::Total) {
    EpDiagram::EdgeMap edges;
    for (Elem i = 0; i < k; ++i) edges.emplace(std::pair{i, i + 1}, c.total_links[i]);
    out.total = build_bilimit(EpDiagram::make(index, objects, edges), budget);
    out.report.merge(verify_bilimit(*out.total));
    for (const auto& t : out.total->tuples) iso.push_back(t[k]);
  } else {
    PartialEpDiagram::EdgeMap edges;
    for (Elem i = 0; i < k; ++i) edges.emplace(std::pair{i, i + 1}, c.strict_links[i]);
    out.partial = build_partial_bilimit(PartialEpDiagram::make(index, objects, edges), budget);
    out.report.merge(verify_partial_bilimit(*out.partial));
    for (const auto& t : out.partial->tuples) iso.push_back(partial_value(t[k]));
  }
  check_iso(out.report, *out.apex(), *c.levels[k], iso, "apex iso D_" + std::to_string(k));
  for (const auto& v : iso) out.iso.push_back(v.value_or(0));
  return out;
}

OmegaBar omega_bar(std::size_t n) {
  if (n == 0) fail(ErrorKind::Mismatch, "omega_bar needs n >= 1");
  OmegaBar out{iterate_chain(DomainExpr::lift(DomainExpr::var()), empty_poset(), n, Mode::Partial), {},
               Report("omega-bar truncated at " + std::to_string(n))};
  const auto& c = out.chain;
  for (std::size_t k = 1; k <= n; ++k) {
    const std::string tag = "sigma_" + std::to_string(k);
    auto lifted = lift_poset(c.levels[k - 1]);
    const auto& target = *c.levels[k];
    // Identity re-indexing: match elements by id.
    std::vector<std::optional<Elem>> f;
    for (Elem u = 0; u < lifted.size(); ++u) f.push_back(target.find(lifted.carrier->id(u)));
    check_iso(out.report, *lifted.carrier, target, f, tag + " order isomorphism");
    std::vector<Elem> a;
    for (const auto& v : f) a.push_back(v.value_or(0));
    out.sigma.push_back(MonotoneMap::make(lifted.carrier, c.levels[k], std::move(a)));
    const auto& sigma = out.sigma.back();

    // sigma . eta carries the level-(k-1) approximant of infinity to the next one.
    auto prev_top = c.levels[k - 1]->top();
    if (!prev_top) {
      out.report.add(tag + " . eta preserves top", true, "vacuous: level " + std::to_string(k - 1) + " is empty");
    } else {
      auto next_top = target.top();
      out.report.add(tag + " . eta preserves top", next_top && sigma(LiftPoset::eta(*prev_top)) == *next_top);
    }
    if (k >= 2) {
      const auto& link = c.strict_links[k - 1];
      auto expected = lift_ep(c.strict_links[k - 2].total());
      out.report.add("link " + std::to_string(k - 1) + " is L of link " + std::to_string(k - 2),
                     link.emb().underlying().assignment() == expected.emb().underlying().assignment() &&
                         link.proj().underlying().assignment() == expected.proj().underlying().assignment());
      // sigma_k . (previous link, total) = (chain embedding) . sigma_{k-1}
      const auto& prev = c.strict_links[k - 2].total();
      const auto& sigma_prev = out.sigma[k - 2];
      bool commutes = true;
      for (Elem u = 0; u < prev.small()->size(); ++u)
        commutes = commutes && sigma(prev.emb()(u)) == c.embed(k - 1, sigma_prev(u));
      out.report.add(tag + " commutes with the links", commutes);
    }
  }
  return out;
}

// ---- finite-rank elements ----

std::string FiniteRankElem::id() const {
  return std::to_string(rank) + ":" + chain->levels.at(rank)->id(value);
}

FiniteRankElem canonical_rank(const FiniteRankElem& x) {
  FiniteRankElem y = x;
  while (y.rank > 0) {
    auto pre = y.chain->retract(y.rank, y.value);
    if (!pre) break;
    y.value = *pre;
    --y.rank;
  }
  return y;
}

FiniteRankElem coerce(const FiniteRankElem& x, std::size_t rank) {
  if (rank < x.rank || rank > x.chain->depth())
    fail(ErrorKind::Mismatch, "cannot coerce to rank " + std::to_string(rank), {x.id()});
  FiniteRankElem y = x;
  while (y.rank < rank) y.value = y.chain->embed(y.rank++, y.value);
  return y;
}

namespace {

void same_chain(const FiniteRankElem& a, const FiniteRankElem& b) {
  if (a.chain != b.chain) fail(ErrorKind::DifferentChains, "elements live on different chains", {a.id(), b.id()});
}

}  // namespace

std::partial_ordering compare(const FiniteRankElem& x, const FiniteRankElem& y) {
  same_chain(x, y);
  const std::size_t r = std::max(x.rank, y.rank);
  const Elem a = coerce(x, r).value;
  const Elem b = coerce(y, r).value;
  const auto& p = *x.chain->levels[r];
  if (a == b) return std::partial_ordering::equivalent;
  if (p.leq(a, b)) return std::partial_ordering::less;
  if (p.leq(b, a)) return std::partial_ordering::greater;
  return std::partial_ordering::unordered;
}

FiniteRankElem lub_finite_rank(const std::vector<FiniteRankElem>& xs) {
  if (xs.empty()) fail(ErrorKind::NotDirected, "empty family has no directed lub");
  std::size_t r = 0;
  for (const auto& x : xs) {
    same_chain(xs.front(), x);
    r = std::max(r, x.rank);
  }
  std::vector<Elem> vals;
  for (const auto& x : xs) vals.push_back(coerce(x, r).value);
  return canonical_rank(FiniteRankElem{xs.front().chain, r, directed_lub(*xs.front().chain->levels[r], vals)});
}

FixedPoint lfp(const MonotoneMap& f) {
  const auto& d = *f.dom();
  if (!same_shape(f.dom(), f.cod())) fail(ErrorKind::Mismatch, "lfp needs an endomap");
  auto bot = d.bottom();
  if (!bot) fail(ErrorKind::NotPointed, "no least element to iterate from", {d.name()});
  Elem x = *bot;
  std::size_t steps = 0;
  while (f(x) != x) {
    x = f(x);
    if (++steps > d.size()) fail(ErrorKind::InternalFailure, "Kleene iteration did not stabilize");
  }
  for (Elem y = 0; y < d.size(); ++y)
    if (f(y) == y && !d.leq(x, y))
      fail(ErrorKind::InternalFailure, "iterate is not the least fixed point", {d.id(x), d.id(y)});
  return {x, steps};
}

// ---- equation files ----

namespace {

PosetPtr builtin(std::string_view name) {
  if (name == "0") return empty_poset();
  if (name == "1") return unit_poset();
  if (name == "sierpinski") {
    auto s = FinPoset::close("sierpinski", {"bot", "top"}, {{"bot", "top"}});
    return s;
  }
  return nullptr;
}

PosetPtr resolve_poset(const std::string& ref, const std::filesystem::path& dir) {
  if (ref == "0" || ref == "1") return builtin(ref);
  for (auto candidate : {dir / ref, dir / (ref + ".poset")})
    if (std::filesystem::is_regular_file(candidate)) return load_poset(candidate);
  if (auto b = builtin(ref)) return b;
  fail(ErrorKind::IoError, "cannot resolve poset '" + ref + "'", {ref});
}

}  // namespace

Equation parse_equation(std::string_view text, const std::filesystem::path& dir) {
  Equation eq;
  Constants constants{{"sierpinski", builtin("sierpinski")}};
  std::optional<std::string> expr_text;
  std::size_t expr_line = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string head;
    if (!(words >> head)) continue;
    auto where = "line " + std::to_string(lineno);
    auto bad = [&](const std::string& msg) -> void { fail(ErrorKind::ParseError, where + ": " + msg, {where}); };
    if (head == "domain") {
      std::string name, eqsign;
      if (!(words >> name >> eqsign) || eqsign != "=") bad("expected `domain <name> = <expr>`");
      std::string rest;
      std::getline(words, rest);
      eq.name = name;
      expr_text = rest;
      expr_line = lineno;
    } else if (head == "base") {
      std::string ref;
      if (!(words >> ref)) bad("expected `base <poset>`");
      eq.base_label = ref;
      eq.base = resolve_poset(ref, dir);
    } else if (head == "mode") {
      std::string m;
      if (!(words >> m)) bad("expected `mode total|partial`");
      eq.mode = parse_mode(m);
    } else if (head == "depth") {
      long long n = -1;
      if (!(words >> n) || n < 0) bad("expected `depth <n>`");
      eq.depth = static_cast<std::size_t>(n);
    } else if (head == "const") {
      std::string name, ref;
      if (!(words >> name >> ref)) bad("expected `const <ident> <poset>`");
      constants[name] = resolve_poset(ref, dir);
    } else {
      bad("unknown directive '" + head + "'");
    }
  }
  if (!expr_text) fail(ErrorKind::ParseError, "no `domain` line");
  try {
    eq.expr = parse_expr(*expr_text, constants);
  } catch (const DomainError& e) {
    auto w = e.witnesses();
    w.insert(w.begin(), "line " + std::to_string(expr_line));
    fail(e.kind(), "line " + std::to_string(expr_line) + ": " + e.what(), w);
  }
  if (!eq.base) {
    eq.base = eq.mode == Mode::Partial ? empty_poset() : unit_poset();
    eq.base_label = eq.mode == Mode::Partial ? "0" : "1";
  }
  return eq;
}

Equation load_equation(const std::filesystem::path& path) {
  return parse_equation(read_file(path), path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace domkit

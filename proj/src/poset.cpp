#include "domkit/poset.hpp"

#include <algorithm>

#include "domkit/error.hpp"

namespace domkit {

std::uint64_t Budget::function_count(std::size_t dom_size, std::size_t cod_size) {
  constexpr std::uint64_t kCap = std::uint64_t{1} << 62;
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < dom_size; ++i) {
    if (cod_size == 0) return 0;
    if (count > kCap / cod_size) return kCap;
    count *= cod_size;
  }
  return count;
}

void Budget::require_functions(std::size_t dom_size, std::size_t cod_size,
                               std::string_view what) const {
  require_size(function_count(dom_size, cod_size), what);
}

void Budget::require_size(std::uint64_t count, std::string_view what) const {
  if (count > max_candidates)
    fail(ErrorKind::BudgetExceeded,
         std::string(what) + ": " + std::to_string(count) + " candidates exceed budget " +
             std::to_string(max_candidates));
}

// ---------------------------------------------------------------------------
// FinPoset

FinPoset::FinPoset(Token, std::string name, std::vector<std::string> ids,
                   std::vector<std::uint8_t> leq)
    : name_(std::move(name)), ids_(std::move(ids)), leq_(std::move(leq)) {
  index_.reserve(ids_.size());
  for (Elem i = 0; i < ids_.size(); ++i) index_.emplace(ids_[i], i);
}

PosetPtr FinPoset::validated(std::string name, std::vector<std::string> ids,
                             std::vector<std::uint8_t> leq) {
  const std::size_t n = ids.size();
  {
    std::unordered_map<std::string, Elem> seen;
    for (Elem i = 0; i < n; ++i)
      if (!seen.emplace(ids[i], i).second)
        fail(ErrorKind::DuplicateElement, "element ids must be unique", {ids[i]});
  }
  auto at = [&](Elem a, Elem b) { return leq[a * n + b] != 0; };
  for (Elem a = 0; a < n; ++a)
    if (!at(a, a)) fail(ErrorKind::NotReflexive, "missing (x, x)", {ids[a]});
  for (Elem a = 0; a < n; ++a)
    for (Elem b = a + 1; b < n; ++b)
      if (at(a, b) && at(b, a))
        fail(ErrorKind::NotAntisymmetric, "distinct elements below each other", {ids[a], ids[b]});
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) {
      if (!at(a, b)) continue;
      for (Elem c = 0; c < n; ++c)
        if (at(b, c) && !at(a, c))
          fail(ErrorKind::NotTransitive, "x <= y <= z but not x <= z", {ids[a], ids[b], ids[c]});
    }
  return std::make_shared<const FinPoset>(Token{}, std::move(name), std::move(ids), std::move(leq));
}

namespace {

std::vector<std::uint8_t> relation_matrix(const std::vector<std::string>& ids,
                                          const FinPoset::Relation& le) {
  std::unordered_map<std::string, Elem> index;
  for (Elem i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);
  const std::size_t n = ids.size();
  std::vector<std::uint8_t> m(n * n, 0);
  for (const auto& [a, b] : le) {
    auto ia = index.find(a);
    if (ia == index.end()) fail(ErrorKind::UnknownElement, "relation mentions a non-element", {a});
    auto ib = index.find(b);
    if (ib == index.end()) fail(ErrorKind::UnknownElement, "relation mentions a non-element", {b});
    m[ia->second * n + ib->second] = 1;
  }
  return m;
}

}  // namespace

PosetPtr FinPoset::check(std::string name, std::vector<std::string> ids, const Relation& le) {
  auto m = relation_matrix(ids, le);
  return validated(std::move(name), std::move(ids), std::move(m));
}

PosetPtr FinPoset::close(std::string name, std::vector<std::string> ids, const Relation& le) {
  auto m = relation_matrix(ids, le);
  const std::size_t n = ids.size();
  for (Elem i = 0; i < n; ++i) m[i * n + i] = 1;
  for (Elem k = 0; k < n; ++k)
    for (Elem i = 0; i < n; ++i)
      if (m[i * n + k])
        for (Elem j = 0; j < n; ++j)
          if (m[k * n + j]) m[i * n + j] = 1;
  return validated(std::move(name), std::move(ids), std::move(m));
}

PosetPtr FinPoset::from_predicate(std::string name, std::vector<std::string> ids,
                                  const std::function<bool(Elem, Elem)>& leq) {
  const std::size_t n = ids.size();
  std::vector<std::uint8_t> m(n * n, 0);
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) m[a * n + b] = leq(a, b) ? 1 : 0;
  return validated(std::move(name), std::move(ids), std::move(m));
}

std::optional<Elem> FinPoset::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Elem FinPoset::at(std::string_view id) const {
  if (auto x = find(id)) return *x;
  fail(ErrorKind::UnknownElement, "not an element of " + name_, {std::string(id)});
}

std::optional<Elem> FinPoset::bottom() const {
  for (Elem a = 0; a < size(); ++a) {
    bool below_all = true;
    for (Elem b = 0; b < size() && below_all; ++b) below_all = leq(a, b);
    if (below_all) return a;
  }
  return std::nullopt;
}

std::optional<Elem> FinPoset::top() const {
  for (Elem a = 0; a < size(); ++a) {
    bool above_all = true;
    for (Elem b = 0; b < size() && above_all; ++b) above_all = leq(b, a);
    if (above_all) return a;
  }
  return std::nullopt;
}

std::vector<Elem> FinPoset::upper_bounds(Elem a, Elem b) const {
  std::vector<Elem> out;
  for (Elem k = 0; k < size(); ++k)
    if (leq(a, k) && leq(b, k)) out.push_back(k);
  return out;
}

bool FinPoset::same_shape(const FinPoset& other) const {
  return this == &other || (ids_ == other.ids_ && leq_ == other.leq_);
}

bool same_shape(const PosetPtr& a, const PosetPtr& b) {
  return a == b || (a && b && a->same_shape(*b));
}

PosetPtr chain(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  return FinPoset::from_predicate(std::to_string(n) + "-chain", std::move(ids),
                                  [](Elem a, Elem b) { return a <= b; });
}

PosetPtr antichain(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i)
    ids.push_back(n <= 26 ? std::string(1, static_cast<char>('a' + i)) : "a" + std::to_string(i));
  return FinPoset::from_predicate(std::to_string(n) + "-antichain", std::move(ids),
                                  [](Elem a, Elem b) { return a == b; });
}

PosetPtr unit_poset() {
  return FinPoset::from_predicate("1", {"*"}, [](Elem, Elem) { return true; });
}

PosetPtr empty_poset() {
  return FinPoset::from_predicate("0", {}, [](Elem, Elem) { return true; });
}

// ---------------------------------------------------------------------------
// Directed subsets

bool is_directed(const FinPoset& p, std::span<const Elem> subset) {
  if (subset.empty()) return false;
  for (Elem a : subset)
    for (Elem b : subset) {
      bool bounded = false;
      for (Elem c : subset)
        if (p.leq(a, c) && p.leq(b, c)) {
          bounded = true;
          break;
        }
      if (!bounded) return false;
    }
  return true;
}

bool is_directed(const FinPoset& p, const std::vector<std::string>& subset) {
  std::vector<Elem> members;
  for (const auto& id : subset) members.push_back(p.at(id));
  return is_directed(p, members);
}

Elem directed_lub(const FinPoset& p, std::span<const Elem> subset) {
  if (subset.empty()) fail(ErrorKind::NotDirected, "empty family");
  for (Elem a : subset)
    for (Elem b : subset) {
      bool bounded = false;
      for (Elem c : subset)
        if (p.leq(a, c) && p.leq(b, c)) {
          bounded = true;
          break;
        }
      if (!bounded)
        fail(ErrorKind::NotDirected, "no upper bound inside the family", {p.id(a), p.id(b)});
    }
  // A finite directed family contains its own maximum.
  for (Elem c : subset) {
    bool greatest = true;
    for (Elem a : subset) greatest = greatest && p.leq(a, c);
    if (greatest) return c;
  }
  fail(ErrorKind::InternalFailure, "directed family without a greatest member");
}

DirectedSubset DirectedSubset::make(PosetPtr ambient, std::vector<Elem> members) {
  directed_lub(*ambient, members);  // throws with a witness when not directed
  return DirectedSubset{std::move(ambient), std::move(members)};
}

// ---------------------------------------------------------------------------
// Monotone maps

MonotoneMap MonotoneMap::make(PosetPtr dom, PosetPtr cod, std::vector<Elem> assignment) {
  if (assignment.size() != dom->size())
    fail(ErrorKind::Mismatch, "assignment length differs from domain size");
  for (Elem x = 0; x < assignment.size(); ++x)
    if (assignment[x] >= cod->size())
      fail(ErrorKind::UnknownElement, "image outside codomain", {dom->id(x)});
  for (Elem x = 0; x < dom->size(); ++x)
    for (Elem y = 0; y < dom->size(); ++y)
      if (dom->leq(x, y) && !cod->leq(assignment[x], assignment[y]))
        fail(ErrorKind::NotMonotone, "x <= y but f(x) not <= f(y)", {dom->id(x), dom->id(y)});
  return MonotoneMap(std::move(dom), std::move(cod), std::move(assignment));
}

MonotoneMap MonotoneMap::identity(PosetPtr p) {
  std::vector<Elem> a(p->size());
  for (Elem x = 0; x < a.size(); ++x) a[x] = x;
  return MonotoneMap(p, p, std::move(a));
}

MonotoneMap MonotoneMap::constant(PosetPtr dom, PosetPtr cod, Elem value) {
  if (value >= cod->size()) fail(ErrorKind::UnknownElement, "constant outside codomain");
  std::vector<Elem> a(dom->size(), value);
  return MonotoneMap(std::move(dom), std::move(cod), std::move(a));
}

bool MonotoneMap::is_injective() const {
  for (Elem x = 0; x < assignment_.size(); ++x)
    for (Elem y = x + 1; y < assignment_.size(); ++y)
      if (assignment_[x] == assignment_[y]) return false;
  return true;
}

bool MonotoneMap::is_order_reflecting() const {
  for (Elem x = 0; x < assignment_.size(); ++x)
    for (Elem y = 0; y < assignment_.size(); ++y)
      if (cod_->leq(assignment_[x], assignment_[y]) && !dom_->leq(x, y)) return false;
  return true;
}

bool MonotoneMap::pointwise_leq(const MonotoneMap& other) const {
  if (!same_shape(dom_, other.dom_) || !same_shape(cod_, other.cod_))
    fail(ErrorKind::Mismatch, "pointwise comparison of maps with different endpoints");
  for (Elem x = 0; x < assignment_.size(); ++x)
    if (!cod_->leq(assignment_[x], other.assignment_[x])) return false;
  return true;
}

bool operator==(const MonotoneMap& a, const MonotoneMap& b) {
  return a.assignment_ == b.assignment_ && same_shape(a.dom_, b.dom_) &&
         same_shape(a.cod_, b.cod_);
}

MonotoneMap compose(const MonotoneMap& g, const MonotoneMap& f) {
  if (!same_shape(f.cod(), g.dom()))
    fail(ErrorKind::Mismatch,
         "cannot compose: codomain " + f.cod()->name() + " vs domain " + g.dom()->name());
  std::vector<Elem> a(f.dom()->size());
  for (Elem x = 0; x < a.size(); ++x) a[x] = g(f(x));
  return MonotoneMap::make(f.dom(), g.cod(), std::move(a));
}

std::string describe(const MonotoneMap& f) {
  std::string out = "{";
  for (Elem x = 0; x < f.dom()->size(); ++x) {
    if (x) out += ", ";
    out += f.dom()->id(x) + "->" + f.cod()->id(f(x));
  }
  return out + "}";
}

void for_each_monotone(const FinPoset& dom, const FinPoset& cod, const Admissible& admissible,
                       const Visitor& visit) {
  const std::size_t n = dom.size();
  const std::size_t m = cod.size();
  if (n == 0) {
    visit({});
    return;
  }
  if (m == 0) return;
  std::vector<Elem> assignment(n, 0);
  // Iterative backtracking; `next[x]` is the next candidate to try at x.
  std::vector<Elem> next(n, 0);
  std::size_t x = 0;
  while (true) {
    bool placed = false;
    while (next[x] < m) {
      Elem y = next[x]++;
      bool ok = true;
      for (Elem w = 0; w < x && ok; ++w) {
        if (dom.leq(w, x) && !cod.leq(assignment[w], y)) ok = false;
        if (dom.leq(x, w) && !cod.leq(y, assignment[w])) ok = false;
      }
      if (ok && admissible && !admissible(x, y, std::span<const Elem>(assignment.data(), x)))
        ok = false;
      if (ok) {
        assignment[x] = y;
        placed = true;
        break;
      }
    }
    if (placed) {
      if (x + 1 == n) {
        if (!visit(assignment)) return;
        continue;  // try the next candidate at the last position
      }
      ++x;
      next[x] = 0;
      continue;
    }
    if (x == 0) return;
    --x;
  }
}

std::vector<MonotoneMap> enumerate_monotone_maps(const PosetPtr& dom, const PosetPtr& cod,
                                                 const Budget& budget) {
  budget.require_functions(dom->size(), cod->size(), "enumerate_monotone_maps");
  std::vector<MonotoneMap> out;
  for_each_monotone(*dom, *cod, nullptr, [&](std::span<const Elem> a) {
    out.push_back(MonotoneMap::make(dom, cod, std::vector<Elem>(a.begin(), a.end())));
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Products, subposets, function spaces, coproducts

namespace {

std::string tuple_id(const std::vector<PosetPtr>& factors, std::span<const Elem> t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += factors[i]->id(t[i]);
  }
  return out + ")";
}

}  // namespace

std::vector<Elem> Product::tuple(Elem x) const {
  std::vector<Elem> t(factors.size());
  for (std::size_t i = factors.size(); i-- > 0;) {
    t[i] = x % factors[i]->size();
    x /= factors[i]->size();
  }
  return t;
}

Elem Product::element(std::span<const Elem> t) const {
  if (t.size() != factors.size()) fail(ErrorKind::Mismatch, "tuple arity");
  Elem x = 0;
  for (std::size_t i = 0; i < factors.size(); ++i) x = x * factors[i]->size() + t[i];
  return x;
}

Product product_family(std::vector<std::string> index, std::vector<PosetPtr> factors,
                       const Budget& budget) {
  if (index.empty()) fail(ErrorKind::EmptyIndex, "product over an empty index");
  if (index.size() != factors.size()) fail(ErrorKind::Mismatch, "index/factor count");
  std::uint64_t total = 1;
  for (const auto& f : factors) {
    total *= f->size();
    budget.require_size(total, "product_family");
  }
  Product prod;
  prod.index = std::move(index);
  prod.factors = std::move(factors);
  std::vector<std::vector<Elem>> tuples;
  tuples.reserve(total);
  std::vector<std::string> ids;
  for (Elem x = 0; x < total; ++x) {
    tuples.push_back(prod.tuple(x));
    ids.push_back(tuple_id(prod.factors, tuples.back()));
  }
  std::string name = "prod(";
  for (std::size_t i = 0; i < prod.factors.size(); ++i)
    name += (i ? "," : "") + prod.factors[i]->name();
  name += ")";
  prod.poset = FinPoset::from_predicate(std::move(name), std::move(ids), [&](Elem a, Elem b) {
    for (std::size_t i = 0; i < prod.factors.size(); ++i)
      if (!prod.factors[i]->leq(tuples[a][i], tuples[b][i])) return false;
    return true;
  });
  for (std::size_t i = 0; i < prod.factors.size(); ++i) {
    std::vector<Elem> a(total);
    for (Elem x = 0; x < total; ++x) a[x] = tuples[x][i];
    prod.projections.push_back(MonotoneMap::make(prod.poset, prod.factors[i], std::move(a)));
  }
  return prod;
}

SubPoset sub_poset(const PosetPtr& p, const std::function<bool(Elem)>& keep, std::string name) {
  std::vector<Elem> kept;
  std::vector<std::string> ids;
  for (Elem x = 0; x < p->size(); ++x)
    if (keep(x)) {
      kept.push_back(x);
      ids.push_back(p->id(x));
    }
  if (name.empty()) name = "sub(" + p->name() + ")";
  auto sub = FinPoset::from_predicate(std::move(name), std::move(ids),
                                      [&](Elem a, Elem b) { return p->leq(kept[a], kept[b]); });
  auto inclusion = MonotoneMap::make(sub, p, kept);
  return SubPoset{std::move(sub), std::move(inclusion), std::move(kept)};
}

std::optional<Elem> FunctionSpace::find(const std::vector<Elem>& assignment) const {
  auto it = lookup_.find(assignment);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

FunctionSpace function_space(const PosetPtr& a, const PosetPtr& b, const Budget& budget) {
  FunctionSpace fs;
  fs.dom = a;
  fs.cod = b;
  fs.maps = enumerate_monotone_maps(a, b, budget);
  std::vector<std::string> ids;
  for (Elem k = 0; k < fs.maps.size(); ++k) {
    const auto& f = fs.maps[k];
    std::string id = "[";
    for (Elem x = 0; x < a->size(); ++x) id += (x ? ";" : "") + a->id(x) + ">" + b->id(f(x));
    ids.push_back(id + "]");
    fs.lookup_.emplace(f.assignment(), k);
  }
  fs.poset = FinPoset::from_predicate("[" + a->name() + "->" + b->name() + "]", std::move(ids),
                                      [&](Elem f, Elem g) {
                                        return fs.maps[f].pointwise_leq(fs.maps[g]);
                                      });
  return fs;
}

bool Coproduct::is_left(Elem x) const { return x < inl.dom()->size(); }

Elem Coproduct::component(Elem x) const {
  return is_left(x) ? x : x - inl.dom()->size();
}

Coproduct coproduct(const PosetPtr& a, const PosetPtr& b) {
  const std::size_t na = a->size();
  std::vector<std::string> ids;
  for (Elem x = 0; x < na; ++x) ids.push_back("inl(" + a->id(x) + ")");
  for (Elem y = 0; y < b->size(); ++y) ids.push_back("inr(" + b->id(y) + ")");
  auto sum = FinPoset::from_predicate(a->name() + "+" + b->name(), std::move(ids),
                                      [&](Elem x, Elem y) {
                                        if (x < na && y < na) return a->leq(x, y);
                                        if (x >= na && y >= na) return b->leq(x - na, y - na);
                                        return false;
                                      });
  std::vector<Elem> left(na), right(b->size());
  for (Elem x = 0; x < na; ++x) left[x] = x;
  for (Elem y = 0; y < b->size(); ++y) right[y] = na + y;
  auto inl = MonotoneMap::make(a, sum, std::move(left));
  auto inr = MonotoneMap::make(b, sum, std::move(right));
  return Coproduct{std::move(sum), std::move(inl), std::move(inr)};
}

std::vector<std::pair<Elem, Elem>> hasse_edges(const FinPoset& p) {
  std::vector<std::pair<Elem, Elem>> edges;
  for (Elem a = 0; a < p.size(); ++a)
    for (Elem b = 0; b < p.size(); ++b) {
      if (!p.less(a, b)) continue;
      bool covered = true;
      for (Elem c = 0; c < p.size() && covered; ++c)
        if (p.less(a, c) && p.less(c, b)) covered = false;
      if (covered) edges.emplace_back(a, b);
    }
  return edges;
}

std::vector<Elem> linear_extension(const FinPoset& p) {
  std::vector<Elem> order;
  std::vector<bool> placed(p.size(), false);
  while (order.size() < p.size()) {
    for (Elem x = 0; x < p.size(); ++x) {
      if (placed[x]) continue;
      bool minimal = true;
      for (Elem y = 0; y < p.size() && minimal; ++y)
        if (!placed[y] && p.less(y, x)) minimal = false;
      if (minimal) {
        placed[x] = true;
        order.push_back(x);
        break;
      }
    }
  }
  return order;
}

}  // namespace domkit

#include <gtest/gtest.h>

#include "domkit/catalog.hpp"
#include "domkit/error.hpp"
#include "domkit/poset.hpp"
#include "domkit/poset_io.hpp"
#include "oracle.hpp"

using namespace domkit;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const DomainError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a DomainError";
  return ErrorKind::InternalFailure;
}

std::vector<std::string> witnesses_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const DomainError& e) {
    return e.witnesses();
  }
  return {};
}

}  // namespace

TEST(CheckPoset, TwoChain) {
  auto p = FinPoset::check("c", {"a", "b"}, {{"a", "a"}, {"b", "b"}, {"a", "b"}});
  EXPECT_EQ(p->size(), 2u);
  EXPECT_TRUE(p->leq(0, 1));
  EXPECT_FALSE(p->leq(1, 0));
}

TEST(CheckPoset, MissingReflexivity) {
  auto bad = [] { FinPoset::check("c", {"a", "b"}, {{"b", "b"}, {"a", "b"}}); };
  EXPECT_EQ(kind_of(bad), ErrorKind::NotReflexive);
  EXPECT_EQ(witnesses_of(bad), std::vector<std::string>{"a"});
}

TEST(CheckPoset, Antisymmetry) {
  auto bad = [] {
    FinPoset::check("c", {"a", "b"}, {{"a", "a"}, {"b", "b"}, {"a", "b"}, {"b", "a"}});
  };
  EXPECT_EQ(kind_of(bad), ErrorKind::NotAntisymmetric);
  EXPECT_EQ(witnesses_of(bad), (std::vector<std::string>{"a", "b"}));
}

TEST(CheckPoset, TransitivityAndDuplicates) {
  auto bad = [] {
    FinPoset::check("c", {"a", "b", "c"},
                    {{"a", "a"}, {"b", "b"}, {"c", "c"}, {"a", "b"}, {"b", "c"}});
  };
  EXPECT_EQ(kind_of(bad), ErrorKind::NotTransitive);
  EXPECT_EQ(witnesses_of(bad), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(kind_of([] { FinPoset::check("d", {"a", "a"}, {{"a", "a"}}); }),
            ErrorKind::DuplicateElement);
  EXPECT_EQ(kind_of([] { FinPoset::check("d", {"a"}, {{"a", "z"}}); }),
            ErrorKind::UnknownElement);
}

TEST(Directed, Examples) {
  auto c2 = chain(2);
  auto a2 = antichain(2);
  EXPECT_TRUE(is_directed(*c2, std::vector<std::string>{"0", "1"}));
  EXPECT_FALSE(is_directed(*a2, std::vector<std::string>{"a", "b"}));
  EXPECT_FALSE(is_directed(*c2, std::vector<Elem>{}));
  EXPECT_EQ(kind_of([&] { is_directed(*c2, std::vector<std::string>{"q"}); }),
            ErrorKind::UnknownElement);
}

TEST(Directed, LubExamples) {
  auto c3 = chain(3);
  EXPECT_EQ(directed_lub(*c3, std::vector<Elem>{0, 1, 2}), 2u);
  EXPECT_EQ(directed_lub(*c3, std::vector<Elem>{1}), 1u);
  auto a2 = antichain(2);
  auto bad = [&] { directed_lub(*a2, std::vector<Elem>{0, 1}); };
  EXPECT_EQ(kind_of(bad), ErrorKind::NotDirected);
  EXPECT_EQ(witnesses_of(bad), (std::vector<std::string>{"a", "b"}));
}

// Every directed subset of every poset with at most 4 elements: the lub is a
// member, an upper bound, and below every upper bound in the ambient poset.
TEST(Directed, LubIsLeastUpperBoundExhaustively) {
  for (const auto& p : all_posets_up_to(4)) {
    const std::size_t n = p->size();
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      std::vector<Elem> s;
      for (Elem x = 0; x < n; ++x)
        if (mask >> x & 1) s.push_back(x);
      if (!is_directed(*p, s)) continue;
      Elem lub = directed_lub(*p, s);
      EXPECT_NE(std::find(s.begin(), s.end(), lub), s.end());
      for (Elem u = 0; u < n; ++u) {
        bool upper = std::all_of(s.begin(), s.end(), [&](Elem x) { return p->leq(x, u); });
        if (upper) {
          EXPECT_TRUE(p->leq(lub, u));
        }
        if (u == lub) {
          EXPECT_TRUE(upper);
        }
      }
    }
  }
}

TEST(Enumerate, FrozenCounts) {
  // Counts frozen from the brute-force oracle.
  EXPECT_EQ(oracle::monotone_maps(*chain(2), *chain(2)).size(), 3u);
  EXPECT_EQ(oracle::monotone_maps(*antichain(2), *chain(2)).size(), 4u);
  EXPECT_EQ(enumerate_monotone_maps(chain(2), chain(2)).size(), 3u);
  EXPECT_EQ(enumerate_monotone_maps(antichain(2), chain(2)).size(), 4u);
  EXPECT_EQ(enumerate_monotone_maps(chain(3), unit_poset()).size(), 1u);
  EXPECT_EQ(enumerate_monotone_maps(antichain(3), unit_poset()).size(), 1u);
}

TEST(Enumerate, AgreesWithOracleOnAllSmallPairs) {
  auto posets = all_posets_up_to(3);
  for (const auto& a : posets)
    for (const auto& b : posets) {
      auto expected = oracle::monotone_maps(*a, *b);
      auto got = enumerate_monotone_maps(a, b);
      ASSERT_EQ(got.size(), expected.size()) << a->name() << " -> " << b->name();
      for (std::size_t k = 0; k < got.size(); ++k) EXPECT_EQ(got[k].assignment(), expected[k]);
    }
}

TEST(Enumerate, Budget) {
  Budget tight{10};
  EXPECT_EQ(kind_of([&] { enumerate_monotone_maps(chain(3), chain(3), tight); }),
            ErrorKind::BudgetExceeded);
  EXPECT_NO_THROW(enumerate_monotone_maps(chain(2), chain(3), tight));
}

TEST(Product, Examples) {
  auto sq = product_family({"x", "y"}, {chain(2), chain(2)});
  EXPECT_EQ(sq.poset->size(), 4u);
  EXPECT_EQ(hasse_edges(*sq.poset).size(), 4u);

  auto single = product_family({"x"}, {chain(3)});
  EXPECT_EQ(single.poset->size(), 3u);
  EXPECT_TRUE(single.projections[0].is_injective());
  EXPECT_TRUE(single.projections[0].is_order_reflecting());

  auto mixed = product_family({"x", "y"}, {chain(2), antichain(2)});
  ASSERT_EQ(mixed.poset->size(), 4u);
  // Oracle: compare pairs componentwise.
  for (Elem u = 0; u < 4; ++u)
    for (Elem v = 0; v < 4; ++v) {
      auto tu = mixed.tuple(u), tv = mixed.tuple(v);
      bool expected = tu[0] <= tv[0] && tu[1] == tv[1];
      EXPECT_EQ(mixed.poset->leq(u, v), expected);
    }
  EXPECT_EQ(kind_of([] { product_family({}, {}); }), ErrorKind::EmptyIndex);
}

TEST(Product, ProjectionsJointlyOrderReflecting) {
  auto posets = all_posets_up_to(3);
  for (std::size_t i = 0; i < posets.size(); i += 2)
    for (std::size_t j = 1; j < posets.size(); j += 3) {
      auto prod = product_family({"l", "r"}, {posets[i], posets[j]});
      for (Elem u = 0; u < prod.poset->size(); ++u)
        for (Elem v = 0; v < prod.poset->size(); ++v) {
          bool all = true;
          for (const auto& pr : prod.projections) all = all && pr.cod()->leq(pr(u), pr(v));
          EXPECT_EQ(prod.poset->leq(u, v), all);
        }
    }
}

TEST(SubPoset, Examples) {
  auto c3 = chain(3);
  auto all = sub_poset(c3, [](Elem) { return true; });
  EXPECT_EQ(all.inclusion, MonotoneMap::identity(c3));
  EXPECT_EQ(sub_poset(c3, [](Elem) { return false; }).poset->size(), 0u);

  auto sq = product_family({"x", "y"}, {chain(2), chain(2)});
  auto diag = sub_poset(sq.poset, [&](Elem e) {
    auto t = sq.tuple(e);
    return t[0] == t[1];
  });
  ASSERT_EQ(diag.poset->size(), 2u);
  EXPECT_TRUE(diag.poset->less(0, 1));
  EXPECT_TRUE(diag.inclusion.is_order_reflecting());
}

TEST(FunctionSpace, Examples) {
  auto fs = function_space(chain(2), chain(2));
  ASSERT_EQ(fs.poset->size(), 3u);
  // Linearly ordered: every pair comparable.
  for (Elem a = 0; a < 3; ++a)
    for (Elem b = 0; b < 3; ++b) EXPECT_TRUE(fs.poset->comparable(a, b));

  auto b = antichain(3);
  auto one = function_space(unit_poset(), b);
  ASSERT_EQ(one.poset->size(), 3u);
  for (Elem x = 0; x < 3; ++x)
    for (Elem y = 0; y < 3; ++y)
      EXPECT_EQ(one.poset->leq(x, y), b->leq(one.map(x)(0), one.map(y)(0)));

  EXPECT_EQ(function_space(chain(3), chain(3)).poset->size(), 10u);
  EXPECT_EQ(oracle::monotone_maps(*chain(3), *chain(3)).size(), 10u);
}

TEST(Coproduct, HasseAndSerialization) {
  auto c = coproduct(unit_poset(), unit_poset());
  EXPECT_EQ(c.poset->size(), 2u);
  EXPECT_FALSE(c.poset->comparable(0, 1));
  EXPECT_EQ(hasse_edges(*chain(3)).size(), 2u);

  for (const auto& p : all_posets_up_to(4)) {
    EXPECT_TRUE(poset_from_json(poset_to_json(*p))->same_shape(*p));
    EXPECT_EQ(poset_to_json(*poset_from_json(poset_to_json(*p))), poset_to_json(*p));
    EXPECT_TRUE(parse_poset_text(poset_to_text(*p))->same_shape(*p));
  }
  auto dot = poset_to_dot(*chain(2));
  EXPECT_NE(dot.find("rankdir=BT"), std::string::npos);
  EXPECT_NE(dot.find("\"0\" -> \"1\""), std::string::npos);
}

TEST(PosetText, ClosesTransitivelyAndReportsCycles) {
  auto p = parse_poset_text("poset c3\nelem a\nelem b\nelem c\nle a b\nle b c\n");
  EXPECT_TRUE(p->leq(p->at("a"), p->at("c")));
  EXPECT_EQ(kind_of([] { parse_poset_text("poset x\nelem a\nelem b\nle a b\nle b a\n"); }),
            ErrorKind::NotAntisymmetric);
  EXPECT_EQ(kind_of([] { parse_poset_text("elem a\n"); }), ErrorKind::ParseError);
}

TEST(Catalog, KnownPosetCounts) {
  // Unlabelled posets on n points: 1, 1, 2, 5, 16, 63.
  const std::size_t expected[] = {1, 1, 2, 5, 16, 63};
  for (std::size_t n = 0; n <= 5; ++n) EXPECT_EQ(all_posets(n).size(), expected[n]);
}

TEST(MonotoneMapTest, RejectsNonMonotone) {
  auto c2 = chain(2);
  EXPECT_EQ(kind_of([&] { MonotoneMap::make(c2, c2, {1, 0}); }), ErrorKind::NotMonotone);
  EXPECT_EQ(kind_of([&] { compose(MonotoneMap::identity(chain(3)), MonotoneMap::identity(c2)); }),
            ErrorKind::Mismatch);
}

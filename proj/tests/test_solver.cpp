#include <gtest/gtest.h>

#include "domkit/catalog.hpp"
#include "domkit/error.hpp"
#include "domkit/solver.hpp"
#include "oracle.hpp"

using namespace domkit;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const DomainError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InternalFailure;
}

bool is_chain(const FinPoset& p) {
  for (Elem a = 0; a < p.size(); ++a)
    for (Elem b = 0; b < p.size(); ++b)
      if (!p.comparable(a, b)) return false;
  return true;
}

bool is_antichain(const FinPoset& p) {
  for (Elem a = 0; a < p.size(); ++a)
    for (Elem b = 0; b < p.size(); ++b)
      if (a != b && p.comparable(a, b)) return false;
  return true;
}

const std::vector<std::string> kSampleExprs{"X", "lift X", "1 + X", "X * X", "X -> X", "lift (X + 1)", "0 * X",
                                            "X -> lift X"};

}  // namespace

TEST(ParseTest, Examples) {
  EXPECT_EQ(parse_expr("lift X").to_string(), "lift(X)");
  EXPECT_EQ(parse_expr("(X -> X)").to_string(), "arrow(X,X)");
  EXPECT_EQ(parse_expr("1 + (X * X)").to_string(), "sum(unit,prod(X,X))");
}

TEST(ParseTest, PrecedenceAndAssociativity) {
  EXPECT_EQ(parse_expr("X -> X -> X").to_string(), "arrow(X,arrow(X,X))");
  EXPECT_EQ(parse_expr("1 + X * X").to_string(), "sum(unit,prod(X,X))");
  EXPECT_EQ(parse_expr("X + X + 0").to_string(), "sum(sum(X,X),empty)");
  EXPECT_EQ(parse_expr("lift X * X").to_string(), "prod(lift(X),X)");
  EXPECT_EQ(parse_expr("lift lift X -> X + 1").to_string(), "arrow(lift(lift(X)),sum(X,unit))");
  Constants c{{"S", chain(2)}, {"sierpinski", chain(2)}};
  EXPECT_EQ(parse_expr("sierpinski -> X", c).to_string(), "arrow(sierpinski,X)");
}

TEST(ParseTest, Errors) {
  EXPECT_EQ(kind_of([] { parse_expr("X ->"); }), ErrorKind::SyntaxError);
  EXPECT_EQ(kind_of([] { parse_expr("(X"); }), ErrorKind::SyntaxError);
  EXPECT_EQ(kind_of([] { parse_expr("X $ X"); }), ErrorKind::SyntaxError);
  EXPECT_EQ(kind_of([] { parse_expr("2"); }), ErrorKind::SyntaxError);
  EXPECT_EQ(kind_of([] { parse_expr("X -> Y"); }), ErrorKind::MultipleVariables);
  EXPECT_EQ(kind_of([] { parse_expr("foo + X"); }), ErrorKind::UnknownConstant);
  try {
    parse_expr("X + )");
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("column 5"), std::string::npos) << e.what();
  }
}

TEST(FunctorObjectTest, Examples) {
  EXPECT_EQ(functor_object(parse_expr("lift X"), empty_poset(), Mode::Partial)->size(), 1u);
  auto arrow = functor_object(parse_expr("X -> X"), chain(2), Mode::Total);
  EXPECT_EQ(arrow->size(), oracle::monotone_maps(*chain(2), *chain(2)).size());
  EXPECT_EQ(arrow->size(), 3u);
  EXPECT_TRUE(is_chain(*arrow));
  auto sum = functor_object(parse_expr("1 + X"), antichain(2), Mode::Total);
  EXPECT_EQ(sum->size(), 3u);
  EXPECT_TRUE(is_antichain(*sum));
  // Partial arrow counts maps into the lift.
  auto parrow = functor_object(parse_expr("X -> X"), chain(2), Mode::Partial);
  EXPECT_EQ(parrow->size(), oracle::monotone_maps(*chain(2), *lift_poset(chain(2)).carrier).size());
}

TEST(FunctorEpTest, IdentityGoesToIdentity) {
  for (const auto& text : kSampleExprs) {
    auto e = parse_expr(text);
    for (const auto& p : all_posets_up_to(2)) {
      auto fp = functor_object(e, p, Mode::Total);
      EXPECT_TRUE(functor_ep(e, EpPair::identity(p)) == EpPair::identity(fp)) << text;
      auto lp = functor_object(e, p, Mode::Partial);
      EXPECT_TRUE(functor_ep(e, StrictEpPair::identity(lift_poset(p))) == StrictEpPair::identity(lift_poset(lp)))
          << text;
    }
  }
}

TEST(FunctorEpTest, LiftAgreesWithLiftEp) {
  auto e = parse_expr("lift X");
  for (const auto& a : all_posets_up_to(2))
    for (const auto& b : all_posets_up_to(3))
      for (const auto& ep : enumerate_ep_pairs(a, b)) {
        auto got = functor_ep(e, ep);
        auto want = lift_ep(ep).total();
        EXPECT_EQ(got.emb().assignment(), want.emb().assignment());
        EXPECT_EQ(got.proj().assignment(), want.proj().assignment());
      }
}

TEST(FunctorEpTest, ArrowOnPointIntoSierpinski) {
  // 1 <-> 2-chain, the point going to the bottom.
  auto ep = EpPair::make(MonotoneMap::make(unit_poset(), chain(2), {0}), MonotoneMap::constant(chain(2), unit_poset(), 0));
  auto a = functor_ep(parse_expr("X -> X"), ep);
  EXPECT_EQ(a.small()->size(), 1u);
  EXPECT_EQ(a.large()->size(), 3u);
  EXPECT_EQ(a.proj()(a.emb()(0)), 0u);
  // The image is the constant map at the bottom, which is the least of the three.
  EXPECT_EQ(a.large()->bottom(), a.emb()(0));
}

TEST(FunctorEpTest, ArrowMatchesConjugationOracle) {
  auto e = parse_expr("X -> X");
  for (const auto& a : all_posets_up_to(2))
    for (const auto& b : all_posets_up_to(3))
      for (const auto& ep : enumerate_ep_pairs(a, b)) {
        auto got = functor_ep(e, ep);
        auto small = oracle::monotone_maps(*a, *a);
        auto large = oracle::monotone_maps(*b, *b);
        ASSERT_EQ(got.small()->size(), small.size());
        for (Elem f = 0; f < small.size(); ++f) {
          std::vector<Elem> conj;
          for (Elem y = 0; y < b->size(); ++y) conj.push_back(ep.emb()(small[f][ep.proj()(y)]));
          const auto& img = large[got.emb()(f)];
          EXPECT_EQ(img, conj);
        }
      }
}

TEST(FunctorEpTest, Functoriality) {
  std::size_t pairs = 0;
  for (const auto& text : kSampleExprs) {
    auto e = parse_expr(text);
    for (const auto& a : all_posets_up_to(1))
      for (const auto& b : all_posets_up_to(2))
        for (const auto& c : all_posets_up_to(3)) {
          auto fs = enumerate_ep_pairs(a, b);
          auto gs = enumerate_ep_pairs(b, c);
          if (fs.empty() || gs.empty()) continue;
          const auto& f = fs.front();
          const auto& g = gs.back();
          EXPECT_TRUE(functor_ep(e, compose_ep(f, g)) == compose_ep(functor_ep(e, f), functor_ep(e, g))) << text;
          auto sf = enumerate_strict_ep_pairs(lift_poset(a), lift_poset(b));
          auto sg = enumerate_strict_ep_pairs(lift_poset(b), lift_poset(c));
          const auto& f2 = sf.back();
          const auto& g2 = sg.front();
          EXPECT_TRUE(functor_ep(e, compose_strict_ep(f2, g2)) ==
                      compose_strict_ep(functor_ep(e, f2), functor_ep(e, g2)))
              << text;
          ++pairs;
        }
  }
  EXPECT_GT(pairs, 20u);
}

TEST(ChainTest, LiftChainFromEmpty) {
  auto c = iterate_chain(parse_expr("lift X"), empty_poset(), 4, Mode::Partial);
  EXPECT_EQ(c.level_sizes(), (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  for (const auto& l : c.levels) EXPECT_TRUE(is_chain(*l));
}

TEST(ChainTest, ArrowChainFromSierpinski) {
  auto c = iterate_chain(parse_expr("X -> X"), chain(2), 2, Mode::Total);
  auto three = chain(3);
  EXPECT_EQ(c.level_sizes(), (std::vector<std::size_t>{2, 3, oracle::monotone_maps(*three, *three).size()}));
  EXPECT_EQ(c.levels[2]->size(), 10u);
  EXPECT_EQ(kind_of([] { iterate_chain(parse_expr("X -> X"), chain(2), 3, Mode::Total); }),
            ErrorKind::BudgetExceeded);
}

TEST(ChainTest, SumChainFromEmpty) {
  auto c = iterate_chain(parse_expr("1 + X"), empty_poset(), 3, Mode::Partial);
  EXPECT_EQ(c.level_sizes(), (std::vector<std::size_t>{0, 1, 2, 3}));
  for (const auto& l : c.levels) EXPECT_TRUE(is_antichain(*l));
}

TEST(ChainTest, NoStarterFromEmptyInTotalMode) {
  EXPECT_EQ(kind_of([] { iterate_chain(parse_expr("X -> X"), empty_poset(), 2, Mode::Total); }),
            ErrorKind::NoStarterEp);
}

TEST(TruncationTest, EveryLevelIsTheApex) {
  std::vector<ChainApprox> chains{
      iterate_chain(parse_expr("lift X"), empty_poset(), 4, Mode::Partial),
      iterate_chain(parse_expr("X -> X"), chain(2), 2, Mode::Total),
      iterate_chain(parse_expr("1 + X"), empty_poset(), 3, Mode::Partial),
      iterate_chain(parse_expr("lift X"), unit_poset(), 3, Mode::Total),
  };
  for (const auto& c : chains)
    for (std::size_t k = 0; k <= c.depth(); ++k) {
      auto t = truncated_bilimit(c, k);
      EXPECT_TRUE(t.report.ok()) << c.expr.to_string() << " k=" << k << "\n" << t.report.to_text();
      EXPECT_EQ(t.apex()->size(), c.levels[k]->size());
    }
  auto arrow = truncated_bilimit(chains[1], 2);
  EXPECT_EQ(arrow.apex()->size(), 10u);
  auto lift3 = truncated_bilimit(chains[0], 3);
  EXPECT_TRUE(is_chain(*lift3.apex()));
}

TEST(OmegaBarTest, Truncations) {
  for (std::size_t n = 1; n <= 6; ++n) {
    auto w = omega_bar(n);
    EXPECT_TRUE(w.report.ok()) << w.report.to_text();
    EXPECT_EQ(w.sigma.size(), n);
    EXPECT_EQ(w.chain.levels[n]->size(), n);
  }
  auto w3 = omega_bar(3);
  const auto& l2 = *w3.chain.levels[2];
  const auto& l3 = *w3.chain.levels[3];
  EXPECT_EQ(w3.sigma[2](LiftPoset::eta(*l2.top())), *l3.top());
}

TEST(FiniteRankTest, CanonicalCompareLub) {
  auto c = std::make_shared<const ChainApprox>(iterate_chain(parse_expr("lift X"), empty_poset(), 4, Mode::Partial));
  // In the lift chain the bottom of level k+1 is the image of the bottom of level k.
  FiniteRankElem x{c, 1, 0};
  auto up = coerce(x, 3);
  EXPECT_EQ(canonical_rank(up), x);
  EXPECT_EQ(compare(x, up), std::partial_ordering::equivalent);
  FiniteRankElem a{c, 2, 0}, b{c, 2, 1};
  EXPECT_EQ(compare(a, b), std::partial_ordering::less);
  EXPECT_EQ(lub_finite_rank({a, b}), canonical_rank(b));
  auto other = std::make_shared<const ChainApprox>(*c);
  EXPECT_EQ(kind_of([&] { compare(x, FiniteRankElem{other, 1, 0}); }), ErrorKind::DifferentChains);
}

TEST(FiniteRankTest, LawsOnArrowChain) {
  auto c = std::make_shared<const ChainApprox>(iterate_chain(parse_expr("X -> X"), chain(2), 2, Mode::Total));
  std::vector<FiniteRankElem> all;
  for (std::size_t r = 0; r <= 2; ++r)
    for (Elem v = 0; v < c->levels[r]->size(); ++v) all.push_back({c, r, v});
  for (const auto& x : all) {
    auto k = canonical_rank(x);
    EXPECT_EQ(canonical_rank(k), k);
    EXPECT_EQ(compare(x, k), std::partial_ordering::equivalent);
    if (k.rank > 0) {
      EXPECT_FALSE(c->retract(k.rank, k.value));
    }
    // Coercion preserves and reflects order.
    for (const auto& y : all) {
      if (x.rank != y.rank || x.rank == 2) continue;
      auto want = c->levels[x.rank]->leq(x.value, y.value);
      EXPECT_EQ(c->levels[x.rank + 1]->leq(coerce(x, x.rank + 1).value, coerce(y, x.rank + 1).value), want);
    }
  }
}

TEST(LfpTest, Examples) {
  auto c3 = chain(3);
  EXPECT_EQ(lfp(MonotoneMap::identity(c3)).value, 0u);
  EXPECT_EQ(lfp(MonotoneMap::constant(c3, c3, 1)).value, 1u);
  auto step = lfp(MonotoneMap::make(c3, c3, {1, 2, 2}));
  EXPECT_EQ(step.value, 2u);
  EXPECT_EQ(step.steps, 2u);
  EXPECT_EQ(kind_of([] { lfp(MonotoneMap::identity(antichain(2))); }), ErrorKind::NotPointed);
}

TEST(LfpTest, LeastAmongFixedPointsExhaustively) {
  for (const auto& p : all_posets_up_to(4)) {
    if (!p->bottom()) continue;
    for (const auto& f : oracle::monotone_maps(*p, *p)) {
      auto r = lfp(MonotoneMap::make(p, p, f));
      EXPECT_EQ(f[r.value], r.value);
      for (Elem y = 0; y < p->size(); ++y)
        if (f[y] == y) {
          EXPECT_TRUE(p->leq(r.value, y));
        }
    }
  }
}

TEST(EquationTest, Directives) {
  auto eq = parse_equation("# lift chain\ndomain D = lift X\nbase 0\nmode partial\ndepth 4\n");
  EXPECT_EQ(eq.name, "D");
  EXPECT_EQ(eq.expr.to_string(), "lift(X)");
  EXPECT_EQ(eq.base->size(), 0u);
  EXPECT_EQ(eq.mode, Mode::Partial);
  EXPECT_EQ(eq.depth, 4u);
  auto s = parse_equation("domain D = X -> X\nbase sierpinski\nmode total\ndepth 2\n");
  EXPECT_EQ(s.base->size(), 2u);
  EXPECT_EQ(kind_of([] { parse_equation("domain D = X -> Y\n"); }), ErrorKind::MultipleVariables);
  EXPECT_EQ(kind_of([] { parse_equation("domian D = X\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_equation("domain D = X\nbase nowhere\n"); }), ErrorKind::IoError);
}

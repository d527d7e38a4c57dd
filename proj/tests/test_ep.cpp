#include <gtest/gtest.h>

#include "domkit/catalog.hpp"
#include "domkit/ep.hpp"
#include "domkit/error.hpp"
#include "oracle.hpp"

using namespace domkit;

namespace {

std::optional<DomainError> error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const DomainError& e) {
    return e;
  }
  return std::nullopt;
}

}  // namespace

TEST(MakeEp, Examples) {
  for (const auto& p : all_posets_up_to(3))
    EXPECT_NO_THROW(EpPair::make(MonotoneMap::identity(p), MonotoneMap::identity(p)));

  auto one = unit_poset();
  auto c2 = chain(2);
  EXPECT_NO_THROW(EpPair::make(MonotoneMap::make(one, c2, {0}), MonotoneMap::constant(c2, one, 0)));

  auto err = error_of(
      [&] { EpPair::make(MonotoneMap::make(one, c2, {1}), MonotoneMap::constant(c2, one, 0)); });
  ASSERT_TRUE(err);
  EXPECT_EQ(err->kind(), ErrorKind::NotDeflation);
  EXPECT_EQ(err->witnesses(), std::vector<std::string>{"0"});

  auto c3 = chain(3);
  auto not_section = error_of(
      [&] { EpPair::make(MonotoneMap::make(c2, c3, {0, 1}), MonotoneMap::make(c3, c2, {0, 0, 1})); });
  ASSERT_TRUE(not_section);
  EXPECT_EQ(not_section->kind(), ErrorKind::NotSection);
  EXPECT_EQ(not_section->witnesses(), std::vector<std::string>{"1"});
}

TEST(ComposeEp, Examples) {
  auto one = unit_poset();
  auto c2 = chain(2), c3 = chain(3);
  auto f = EpPair::make(MonotoneMap::make(one, c2, {0}), MonotoneMap::constant(c2, one, 0));
  auto g = EpPair::make(MonotoneMap::make(c2, c3, {0, 1}), MonotoneMap::make(c3, c2, {0, 1, 1}));
  EXPECT_EQ(compose_ep(f, EpPair::identity(c2)), f);
  EXPECT_EQ(compose_ep(EpPair::identity(one), f), f);
  auto gf = compose_ep(f, g);
  EXPECT_EQ(gf.emb().assignment(), std::vector<Elem>{0});
  EXPECT_EQ(gf.proj().assignment(), (std::vector<Elem>{0, 0, 0}));
  EXPECT_THROW(compose_ep(g, f), DomainError);
}

TEST(ComposeEp, AssociativeAndUnitalOnSampledTriples) {
  auto posets = all_posets_up_to(3);
  int triples = 0;
  for (const auto& a : posets)
    for (const auto& b : posets) {
      if (b->size() < a->size()) continue;
      auto ab = enumerate_ep_pairs(a, b);
      if (ab.empty()) continue;
      for (const auto& c : posets) {
        if (c->size() < b->size()) continue;
        auto bc = enumerate_ep_pairs(b, c);
        if (bc.empty()) continue;
        auto cd = enumerate_ep_pairs(c, chain(c->size() + 1));
        if (cd.empty()) continue;
        const auto& f = ab.front();
        const auto& g = bc.back();
        const auto& h = cd.front();
        EXPECT_EQ(compose_ep(compose_ep(f, g), h), compose_ep(f, compose_ep(g, h)));
        EXPECT_EQ(compose_ep(EpPair::identity(a), f), f);
        EXPECT_EQ(compose_ep(f, EpPair::identity(b)), f);
        ++triples;
      }
    }
  EXPECT_GE(triples, 10);
}

TEST(ProjectionFromEmbedding, Examples) {
  auto c2 = chain(2);
  EXPECT_EQ(projection_from_embedding(MonotoneMap::identity(c2)).proj(), MonotoneMap::identity(c2));

  auto one = unit_poset();
  auto pair = projection_from_embedding(MonotoneMap::make(one, c2, {0}));
  EXPECT_EQ(pair.proj().assignment(), (std::vector<Elem>{0, 0}));

  auto a2 = antichain(2);
  auto err = error_of([&] { projection_from_embedding(MonotoneMap::make(a2, c2, {0, 1})); });
  ASSERT_TRUE(err);
  EXPECT_EQ(err->kind(), ErrorKind::NoAdjoint);
}

TEST(EnumerateEp, ExamplesFrozenFromOracle) {
  auto one = unit_poset();
  EXPECT_EQ(oracle::ep_pairs(*one, *one).size(), 1u);
  EXPECT_EQ(oracle::ep_pairs(*one, *chain(2)).size(), 1u);
  EXPECT_EQ(oracle::ep_pairs(*chain(2), *antichain(2)).size(), 0u);
  EXPECT_EQ(enumerate_ep_pairs(one, one).size(), 1u);
  EXPECT_EQ(enumerate_ep_pairs(one, chain(2)).size(), 1u);
  EXPECT_EQ(enumerate_ep_pairs(chain(2), antichain(2)).size(), 0u);
}

TEST(EnumerateEp, MatchesOracleAndAdjointsAreUnique) {
  auto posets = all_posets_up_to(3);
  for (const auto& a : posets)
    for (const auto& b : posets) {
      auto expected = oracle::ep_pairs(*a, *b);
      auto got = enumerate_ep_pairs(a, b);
      ASSERT_EQ(got.size(), expected.size()) << a->name() << " <-> " << b->name();
      for (std::size_t k = 0; k < got.size(); ++k) {
        EXPECT_EQ(got[k].emb().assignment(), expected[k].first);
        EXPECT_EQ(got[k].proj().assignment(), expected[k].second);
        // Embeddings are order-reflecting; adjoints are unique.
        EXPECT_TRUE(got[k].emb().is_order_reflecting());
        EXPECT_EQ(projection_from_embedding(got[k].emb()).proj(), got[k].proj());
        auto back = embedding_for_projection(got[k].proj());
        ASSERT_TRUE(back);
        EXPECT_EQ(back->emb(), got[k].emb());
      }
    }
}

TEST(EpJson, RoundTrip) {
  auto one = unit_poset();
  auto e = enumerate_ep_pairs(one, chain(3)).front();
  EXPECT_EQ(ep_from_json(ep_to_json(e)), e);
}

#include <gtest/gtest.h>

#include <set>

#include "domkit/error.hpp"
#include "domkit/generate.hpp"
#include "domkit/internal.hpp"
#include "oracle.hpp"

using namespace domkit;

namespace {

BaseSite sierpinski_site() { return BaseSite::make(chain(2)); }

PresheafPoset empty_presheaf(const BaseSite& site) { return PresheafPoset::constant(site, empty_poset(), "0"); }
PresheafPoset terminal(const BaseSite& site) { return PresheafPoset::constant(site, unit_poset(), "1"); }

// Counts L A(p) straight from the definition: every down-closed subset of the
// principal down-set, every family on it compatible with restriction.
std::size_t oracle_lift_count(const PresheafPoset& a, Elem p) {
  const auto& base = *a.site().poset();
  const std::size_t n = base.size();
  std::size_t count = 0;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    bool sieve = true;
    for (Elem q = 0; q < n; ++q) {
      if (!((s >> q) & 1u)) continue;
      if (!base.leq(q, p)) sieve = false;
      for (Elem r = 0; r < n; ++r)
        if (base.leq(r, q) && !((s >> r) & 1u)) sieve = false;
    }
    if (!sieve) continue;
    std::vector<Elem> pts;
    for (Elem q = 0; q < n; ++q)
      if ((s >> q) & 1u) pts.push_back(q);
    std::vector<Elem> x(pts.size(), 0);
    bool any_empty = false;
    for (Elem q : pts) any_empty = any_empty || a.stage(q)->empty();
    if (any_empty) continue;
    while (true) {
      bool ok = true;
      for (std::size_t u = 0; u < pts.size(); ++u)
        for (std::size_t v = 0; v < pts.size(); ++v)
          if (base.less(pts[v], pts[u]) && a.restrict(pts[u], pts[v])(x[u]) != x[v]) ok = false;
      count += ok;
      std::size_t k = 0;
      while (k < pts.size() && ++x[k] == a.stage(pts[k])->size()) x[k++] = 0;
      if (k == pts.size()) break;
    }
  }
  return count;
}

// Natural maps by filtering the full product of stagewise monotone maps.
std::size_t oracle_natural_count(const PresheafPoset& a, const PresheafPoset& b) {
  const std::size_t n = a.size();
  std::vector<std::vector<std::vector<Elem>>> per;
  for (Elem p = 0; p < n; ++p) per.push_back(oracle::monotone_maps(*a.stage(p), *b.stage(p)));
  for (const auto& v : per)
    if (v.empty()) return 0;
  std::vector<std::size_t> pick(n, 0);
  std::size_t count = 0;
  const auto& base = *a.site().poset();
  while (true) {
    bool ok = true;
    for (Elem p = 0; p < n; ++p)
      for (Elem q = 0; q < n; ++q)
        if (base.leq(q, p))
          for (Elem x = 0; x < a.stage(p)->size(); ++x)
            if (b.restrict(p, q)(per[p][pick[p]][x]) != per[q][pick[q]][a.restrict(p, q)(x)]) ok = false;
    count += ok;
    std::size_t k = 0;
    while (k < n && ++pick[k] == per[k].size()) pick[k++] = 0;
    if (k == n) return count;
  }
}

std::vector<BaseSite> small_sites() {
  std::vector<BaseSite> out;
  for (const auto& p : all_posets_up_to(3))
    if (!p->empty()) out.push_back(BaseSite::make(p));
  return out;
}

}  // namespace

TEST(OmegaTest, OnePointBaseHasTwoTruthValues) {
  auto omega = omega_presheaf(BaseSite::make(unit_poset()));
  EXPECT_EQ(omega.stage(0)->size(), 2u);
}

TEST(OmegaTest, SierpinskiStages) {
  auto site = sierpinski_site();
  auto omega = omega_presheaf(site);
  ASSERT_EQ(omega.stage(1)->size(), 3u);
  ASSERT_EQ(omega.stage(0)->size(), 2u);
  for (Elem p = 0; p < 2; ++p)
    for (Elem a = 0; a < omega.stage(p)->size(); ++a)
      for (Elem b = 0; b < omega.stage(p)->size(); ++b) EXPECT_TRUE(omega.stage(p)->comparable(a, b));
  Elem full = omega.stage(1)->at("{0,1}");
  EXPECT_EQ(omega.stage(0)->id(omega.restrict(1, 0)(full)), "{0}");
  EXPECT_EQ(omega.stage(0)->id(omega.restrict(1, 0)(omega.stage(1)->at("{}"))), "{}");
}

TEST(OmegaTest, StagesAreLattices) {
  for (const auto& site : small_sites()) {
    auto omega = omega_presheaf(site);
    for (Elem p = 0; p < site.size(); ++p) {
      const auto& st = *omega.stage(p);
      ASSERT_TRUE(st.bottom() && st.top());
      for (Elem a = 0; a < st.size(); ++a)
        for (Elem b = 0; b < st.size(); ++b) {
          // Join of sieves is their union, which must be a member.
          auto ss = site.sieves(p);
          Sieve u = ss[a] | ss[b];
          EXPECT_NE(std::find(ss.begin(), ss.end(), u), ss.end());
          EXPECT_NE(std::find(ss.begin(), ss.end(), ss[a] & ss[b]), ss.end());
        }
    }
  }
}

TEST(InternalLiftTest, StageCountsMatchOracle) {
  Rng rng(7);
  for (const auto& site : small_sites())
    for (int k = 0; k < 6; ++k) {
      auto a = random_presheaf(rng, site, 0, 3);
      auto la = internal_lift(a);
      for (Elem p = 0; p < site.size(); ++p) {
        EXPECT_EQ(la->lifted.stage(p)->size(), oracle_lift_count(a, p));
        EXPECT_EQ(la->elem(p, 0).support, 0u);
      }
    }
}

TEST(InternalLiftTest, EmptyAndTerminal) {
  auto site = sierpinski_site();
  auto le = internal_lift(empty_presheaf(site));
  for (Elem p = 0; p < 2; ++p) EXPECT_EQ(le->lifted.stage(p)->size(), 1u);
  auto lt = internal_lift(terminal(site));
  EXPECT_EQ(lt->lifted.stage(1)->size(), 3u);
  EXPECT_EQ(lt->lifted.stage(0)->size(), 2u);
}

TEST(InternalLiftTest, ProperSupportWitness) {
  auto site = sierpinski_site();
  auto lt = internal_lift(terminal(site));
  auto w = find_proper_support(*lt);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->first, 1u);
  EXPECT_EQ(lt->elem(1, w->second).support, Sieve{1});
  EXPECT_EQ(lt->lifted.stage(1)->id(w->second), "{0:*}");
  // Over a point every support is empty or everything.
  EXPECT_FALSE(find_proper_support(*internal_lift(terminal(BaseSite::make(unit_poset())))));
}

TEST(InternalLiftTest, MonadLaws) {
  Rng rng(11);
  for (const auto& site : small_sites()) {
    if (site.size() > 2) continue;
    for (int k = 0; k < 4; ++k) {
      auto a = random_presheaf(rng, site, 0, 2);
      auto r = internal_monad_laws(a);
      EXPECT_TRUE(r.ok()) << r.to_text();
    }
  }
  auto r = internal_monad_laws(terminal(BaseSite::make(chain(3))));
  EXPECT_TRUE(r.ok()) << r.to_text();
}

TEST(InternalLiftTest, OnePointBaseMatchesBooleanLift) {
  auto site = BaseSite::make(unit_poset());
  for (const auto& p : all_posets_up_to(3)) {
    auto la = internal_lift(PresheafPoset::constant(site, p));
    auto r = lift_matches_boolean(*la);
    EXPECT_TRUE(r.ok()) << r.to_text();
  }
}

TEST(NaturalMapTest, EnumerationMatchesOracle) {
  Rng rng(3);
  for (const auto& site : small_sites())
    for (int k = 0; k < 3; ++k) {
      auto a = random_presheaf(rng, site, 0, 2);
      auto b = random_presheaf(rng, site, 0, 3);
      EXPECT_EQ(enumerate_natural_maps(a, b).size(), oracle_natural_count(a, b));
    }
}

TEST(NaturalMapTest, RejectsNonNatural) {
  auto site = sierpinski_site();
  auto a = PresheafPoset::constant(site, chain(2));
  // Identity at 1, constant at 0: fails to commute with the identity restriction.
  std::vector<MonotoneMap> comps{MonotoneMap::constant(chain(2), chain(2), 0), MonotoneMap::identity(chain(2))};
  EXPECT_THROW(
      {
        try {
          NaturalMap::make(a, a, comps);
        } catch (const DomainError& e) {
          EXPECT_EQ(e.kind(), ErrorKind::NotNatural);
          throw;
        }
      },
      DomainError);
}

TEST(InternalStrictEpTest, StrictnessAndComposition) {
  auto site = sierpinski_site();
  auto l0 = internal_lift(empty_presheaf(site));
  auto l1 = internal_lift(terminal(site));
  auto l2 = internal_lift(PresheafPoset::constant(site, chain(2)));
  auto e01 = enumerate_internal_strict_eps(l0, l1);
  ASSERT_EQ(e01.size(), 1u);
  auto e12 = enumerate_internal_strict_eps(l1, l2);
  ASSERT_FALSE(e12.empty());
  for (const auto& f : e12) {
    auto g = compose_internal_ep(e01.front(), f);
    EXPECT_TRUE(is_internal_strict(g.emb(), *l0, *l2));
    EXPECT_TRUE(compose_internal_ep(InternalStrictEp::identity(l1), f) == f);
  }
  // A map sending bottom above bottom is not strict.
  auto id = NaturalMap::identity(l1->lifted);
  std::vector<MonotoneMap> comps;
  for (Elem p = 0; p < 2; ++p) {
    const auto& st = l1->lifted.stage(p);
    comps.push_back(MonotoneMap::constant(st, st, st->size() - 1));
  }
  auto top_const = NaturalMap::make(l1->lifted, l1->lifted, comps);
  EXPECT_FALSE(is_internal_strict(top_const, *l1, *l1));
  EXPECT_THROW(InternalStrictEp::make(top_const, id, l1, l1), DomainError);
}

TEST(InternalBilimitTest, SierpinskiBaseTwoStepChain) {
  auto site = sierpinski_site();
  auto l0 = internal_lift(empty_presheaf(site));
  auto l1 = internal_lift(terminal(site));
  InternalDiagram::EdgeMap edges;
  edges.emplace(std::pair{0, 1}, enumerate_internal_strict_eps(l0, l1).front());
  auto d = InternalDiagram::make(chain(2), {l0, l1}, edges);
  auto run = internal_partial_bilimit(d);
  EXPECT_TRUE(run.report.ok()) << run.report.to_text();
  for (Elem p = 0; p < 2; ++p) EXPECT_EQ(run.bilimit.apex.stage(p)->size(), 1u);
  EXPECT_EQ(run.bilimit.lifted_apex->lifted.stage(1)->size(), 3u);
}

TEST(InternalBilimitTest, ApexMatchesOracle) {
  Rng rng(5);
  for (const auto& site : small_sites()) {
    if (site.size() > 2) continue;
    for (int k = 0; k < 3; ++k) {
      auto d = random_internal_diagram(rng, site, DiagramShape{3, 2, 1});
      auto b = build_internal_partial_bilimit(d);
      for (Elem p = 0; p < site.size(); ++p) {
        std::set<std::vector<Elem>> expect;
        const std::size_t n = d.size();
        std::vector<Elem> t(n, 0);
        while (true) {
          bool coherent = true, defined = false;
          for (Elem i = 0; i < n; ++i) {
            defined = defined || d.object(i)->elem(p, t[i]).support == site.down(p);
            for (Elem j = 0; j < n; ++j)
              if (d.index()->leq(i, j) && d.edge(i, j).proj()(p, t[j]) != t[i]) coherent = false;
          }
          if (coherent && defined) expect.insert(t);
          std::size_t c = 0;
          while (c < n && ++t[c] == d.object(c)->lifted.stage(p)->size()) t[c++] = 0;
          if (c == n) break;
        }
        EXPECT_EQ(std::set<std::vector<Elem>>(b.tuples[p].begin(), b.tuples[p].end()), expect);
      }
    }
  }
}

TEST(InternalBilimitTest, RandomDiagramsVerify) {
  Rng rng(9);
  for (const auto& site : small_sites()) {
    if (site.size() > 2) continue;
    for (int k = 0; k < 3; ++k) {
      auto d = random_internal_diagram(rng, site, DiagramShape{3, 2, 1});
      auto c = random_internal_cone(rng, d, 1);
      auto run = internal_partial_bilimit(d, {c});
      EXPECT_TRUE(run.report.ok()) << run.report.to_text();
    }
  }
}

TEST(InternalBilimitTest, OnePointBaseReproducesBooleanBilimit) {
  Rng rng(13);
  auto site = BaseSite::make(unit_poset());
  for (int k = 0; k < 6; ++k) {
    auto d = random_internal_diagram(rng, site, DiagramShape{3, 3, 1});
    auto b = build_internal_partial_bilimit(d);
    auto r = compare_with_boolean(b);
    EXPECT_TRUE(r.ok()) << r.to_text();
  }
}

TEST(InternalBilimitTest, LimitsEnforced) {
  auto site = BaseSite::make(chain(4));
  auto l = internal_lift(terminal(site));
  auto d = InternalDiagram::make(unit_poset(), {l}, {});
  EXPECT_THROW(build_internal_partial_bilimit(d), DomainError);
}

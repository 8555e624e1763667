#include <gtest/gtest.h>

#include <random>

#include "confn/confn.hpp"

using namespace confn;

namespace {

// Minimum of phi_k over strictly interior points of the box [-r, r]^rank, by plain nested loops.
std::optional<Integer> oracleMin(const ConeByFunctionals& cone, const PicardLattice& lat, std::size_t k, int r) {
  std::optional<Integer> best;
  std::vector<Integer> c(lat.rank(), -r);
  while (true) {
    auto l = DivisorClass::of(lat, c);
    if (cone.strictlyContains(l)) {
      Integer v = cone.value(k, l);
      if (!best || v < *best) best = v;
    }
    std::size_t p = 0;
    while (p < c.size() && ++c[p] > r) c[p++] = -r;
    if (p == c.size()) break;
  }
  return best;
}

std::vector<InteriorMinimum> minima(const ConeByFunctionals& cone, int radius = kDefaultSearchRadius) {
  std::vector<InteriorMinimum> out;
  for (std::size_t k = 0; k < cone.size(); ++k) out.push_back(minInteriorValue(cone, k, radius));
  return out;
}

}  // namespace

TEST(Cone, MembershipOnF1) {
  auto f1 = hirzebruchF1();
  const auto& c = *f1->nef;
  EXPECT_TRUE(c.strictlyContains(f1->cls({1, 2})));
  EXPECT_TRUE(c.contains(f1->basis("F")));
  EXPECT_FALSE(c.strictlyContains(f1->basis("F")));
  EXPECT_FALSE(c.contains(f1->cls({-1, -1})));
  EXPECT_THROW(c.contains(projectiveSpace(2)->basis("H")), LatticeMismatch);
}

TEST(Cone, MembershipOnDelPezzo7) {
  auto d7 = delPezzo7();
  auto l = d7->cls({1, -1, 0});
  EXPECT_EQ(d7->nef->values(l), (std::vector<Integer>{1, 0, 0}));
  EXPECT_TRUE(d7->nef->contains(l));
  EXPECT_FALSE(d7->nef->strictlyContains(l));
}

TEST(Cone, ConstructionChecks) {
  PicardLattice lat({"A", "B"});
  EXPECT_THROW(ConeByFunctionals(lat, {}), ConeError);
  EXPECT_THROW(ConeByFunctionals(lat, {{0, 0}}), ConeError);
  EXPECT_THROW(ConeByFunctionals(lat, {{1, 2, 3}}), ConeError);
  // a >= 0, b >= 0, a + b >= 0: the last one is implied.
  EXPECT_THROW(ConeByFunctionals(lat, {{1, 0}, {0, 1}, {1, 1}}), ConeError);
  ConeByFunctionals c(lat, {{2, 4}, {0, 3}});
  EXPECT_EQ(c.functionals()[0], (std::vector<Integer>{1, 2}));
  EXPECT_EQ(c.functionals()[1], (std::vector<Integer>{0, 1}));
}

TEST(Cone, InteriorMinimaMatchEnumeration) {
  auto f1 = hirzebruchF1();
  auto m = minInteriorValue(*f1->nef, 0);
  ASSERT_EQ(m.status, SearchStatus::Certified);
  EXPECT_EQ(*m.value, 1);
  EXPECT_EQ(*m.value, *oracleMin(*f1->nef, f1->lattice, 0, 4));
  EXPECT_EQ(*m.minimizer, f1->cls({1, 2}));

  auto d7 = delPezzo7();
  auto m3 = minInteriorValue(*d7->nef, 2);
  ASSERT_EQ(m3.status, SearchStatus::Certified);
  EXPECT_EQ(*m3.value, *oracleMin(*d7->nef, d7->lattice, 2, 4));
  EXPECT_EQ(*m3.value, 1);
  EXPECT_EQ(*m3.minimizer, d7->cls({3, -1, -1}));

  auto p3 = projectiveSpace(3);
  auto mp = minInteriorValue(*p3->nef, 0);
  EXPECT_EQ(*mp.value, 1);
  EXPECT_EQ(*mp.minimizer, p3->basis("H"));
}

TEST(Cone, InteriorMinimumErrors) {
  PicardLattice lat({"A", "B"});
  ConeByFunctionals halfPlane(lat, {{1, 0}});
  EXPECT_THROW(minInteriorValue(halfPlane, 0), ConeError);
  auto f1 = hirzebruchF1();
  EXPECT_THROW(minInteriorValue(*f1->nef, 5), ConeError);
  EXPECT_THROW(minInteriorValue(*f1->nef, 0, 0), ConeError);
}

TEST(Cone, SmallRadiusIsInconclusive) {
  // a >= 5b + 1 with b >= 1: no interior point fits in the radius-1 box.
  PicardLattice lat({"A", "B"});
  ConeByFunctionals c(lat, {{1, -5}, {0, 1}});
  auto m = minInteriorValue(c, 0, 1);
  EXPECT_EQ(m.status, SearchStatus::Inconclusive);
  EXPECT_FALSE(m.usable());
  auto wide = minInteriorValue(c, 0, 8);
  EXPECT_EQ(wide.status, SearchStatus::Certified);
  EXPECT_EQ(*wide.minimizer, DivisorClass::of(lat, {6, 1}));
  EXPECT_THROW(adjointFreenessThreshold(c, DivisorClass::zero(lat), {m}), InconclusiveError);

  auto s = InteriorMinimum::supplied(c, 0, 1, DivisorClass::of(lat, {6, 1}));
  EXPECT_EQ(s.status, SearchStatus::Supplied);
  EXPECT_THROW(InteriorMinimum::supplied(c, 0, 1, DivisorClass::of(lat, {5, 1})), ConeError);
  EXPECT_THROW(InteriorMinimum::supplied(c, 0, 2, DivisorClass::of(lat, {6, 1})), ConeError);
}

TEST(Cone, ThresholdExamples) {
  auto f1 = hirzebruchF1();
  auto r = adjointFreenessThreshold(*f1->nef, f1->canonical, minima(*f1->nef));
  EXPECT_EQ(r.mStar, 2);
  EXPECT_EQ(r.perFunctional[0].valueOnCanonical, -2);
  EXPECT_EQ(r.perFunctional[1].valueOnCanonical, -1);
  ASSERT_EQ(r.witness.size(), 1u);
  EXPECT_TRUE(witnessViolates(*f1->nef, f1->canonical, r.witness));

  auto d7 = delPezzo7();
  auto r7 = adjointFreenessThreshold(*d7->nef, d7->canonical, minima(*d7->nef));
  EXPECT_EQ(r7.mStar, 1);
  EXPECT_EQ(d7->nef->values(d7->canonical), (std::vector<Integer>{-1, -1, -1}));
  EXPECT_TRUE(r7.witness.empty());
  EXPECT_TRUE(witnessViolates(*d7->nef, d7->canonical, {}));

  auto p2 = projectiveSpace(2);
  auto rp = adjointFreenessThreshold(*p2->nef, p2->canonical, minima(*p2->nef));
  EXPECT_EQ(rp.mStar, 3);
  EXPECT_EQ(rp.witness.size(), 2u);

  // Ample canonical class: nothing to fix.
  auto ci = completeIntersection(3, {6});
  EXPECT_EQ(adjointFreenessThreshold(*ci->nef, ci->canonical, minima(*ci->nef)).mStar, 0);
}

TEST(Cone, ThresholdNeedsEveryMinimum) {
  auto f1 = hirzebruchF1();
  auto mus = minima(*f1->nef);
  mus.pop_back();
  EXPECT_THROW(adjointFreenessThreshold(*f1->nef, f1->canonical, mus), InconclusiveError);
}

TEST(Cone, BruteForceExamples) {
  auto f1 = hirzebruchF1();
  auto hit = bruteForceRefute(*f1->nef, f1->canonical, 1, 3);
  ASSERT_TRUE(hit.has_value());
  ASSERT_EQ(hit->tuple.size(), 1u);
  EXPECT_TRUE(witnessViolates(*f1->nef, f1->canonical, hit->tuple));
  EXPECT_FALSE(f1->nef->contains(f1->canonical + f1->cls({1, 2})));
  EXPECT_FALSE(bruteForceRefute(*f1->nef, f1->canonical, 2, 3).has_value());

  auto p2 = projectiveSpace(2);
  auto h = bruteForceRefute(*p2->nef, p2->canonical, 2, 3);
  ASSERT_TRUE(h.has_value());
  EXPECT_EQ(h->tuple[0], p2->basis("H"));
  EXPECT_EQ(h->tuple[1], p2->basis("H"));
  EXPECT_EQ(h->value, -1);
  EXPECT_THROW(bruteForceRefute(*p2->nef, p2->canonical, 1, 0), ConeError);
}

TEST(ConeProperty, RandomConesAgreeWithOracles) {
  std::mt19937 rng(4242);
  std::uniform_int_distribution<int> coef(-3, 3);
  int checked = 0;
  for (int attempt = 0; attempt < 5000 && checked < 120; ++attempt) {
    const std::size_t rank = 2 + rng() % 2, nf = rank + rng() % 2;
    PicardLattice lat(rank == 2 ? std::vector<std::string>{"A", "B"} : std::vector<std::string>{"A", "B", "C"});
    std::vector<std::vector<Integer>> fs(nf, std::vector<Integer>(rank));
    for (auto& f : fs)
      for (auto& c : f) c = coef(rng);
    std::optional<ConeByFunctionals> cone;
    try {
      cone.emplace(lat, fs);
    } catch (const ConeError&) {
      continue;
    }
    if (!cone->pointed()) continue;
    std::vector<InteriorMinimum> mus;
    bool ok = true;
    for (std::size_t k = 0; k < nf; ++k) {
      auto m = minInteriorValue(*cone, k, 6);
      auto o = oracleMin(*cone, lat, k, 6);
      if (!o) {
        ok = false;
        break;
      }
      // Within the same box both searches see the same points.
      ASSERT_EQ(*m.value, *o);
      if (m.status != SearchStatus::Certified) ok = false;
      mus.push_back(m);
    }
    if (!ok) continue;
    std::vector<Integer> kc(rank);
    for (auto& c : kc) c = coef(rng);
    auto K = DivisorClass::of(lat, kc);
    auto rep = adjointFreenessThreshold(*cone, K, mus);
    if (rep.mStar > 3) continue;
    ++checked;
    const int ms = static_cast<int>(rep.mStar);
    if (ms >= 1) {
      ASSERT_EQ(rep.witness.size(), static_cast<std::size_t>(ms - 1));
      ASSERT_TRUE(witnessViolates(*cone, K, rep.witness));
      // The witness lies in the radius-6 box the minima were taken over.
      ASSERT_TRUE(bruteForceRefute(*cone, K, ms - 1, 6).has_value());
    }
    for (int m = ms; m <= ms + 2; ++m)
      for (int radius = 1; radius <= 4; ++radius) ASSERT_FALSE(bruteForceRefute(*cone, K, m, radius).has_value());
  }
  EXPECT_GE(checked, 50);
}

TEST(ConeProperty, ScalingTheCanonicalClass) {
  // Doubling K can only raise the threshold; negating an ample K gives the ceil formula directly.
  auto f1 = hirzebruchF1();
  auto mus = minima(*f1->nef);
  for (int a = -4; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b) {
      auto K = f1->cls({a, b});
      auto m1 = adjointFreenessThreshold(*f1->nef, K, mus).mStar;
      auto m2 = adjointFreenessThreshold(*f1->nef, Integer(2) * K, mus).mStar;
      if (m1 > 0) {
        EXPECT_GE(m2, m1);
      }
      Integer expect = 0;
      for (const auto& v : f1->nef->values(K)) expect = std::max(expect, Integer(-v));
      EXPECT_EQ(m1, expect);
    }
}

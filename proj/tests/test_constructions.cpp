#include <gtest/gtest.h>

#include <random>

#include "confn/confn.hpp"

using namespace confn;

namespace {

DivisorClass lift(const VarietyDescriptor& prod, const DivisorClass& a, const DivisorClass& b) {
  std::vector<Integer> c(a.coeffs().begin(), a.coeffs().end());
  c.insert(c.end(), b.coeffs().begin(), b.coeffs().end());
  return prod.cls(c);
}

DescriptorPtr randomThreefold(std::mt19937& rng, std::size_t rank) {
  CustomSpec s;
  s.dimension = 3;
  for (std::size_t i = 0; i < rank; ++i) s.basis.push_back("D" + std::to_string(i));
  std::uniform_int_distribution<int> v(-6, 6);
  IntersectionForm::forEachMonomial(rank, 3, [&](const MultiIndex& idx) { s.formEntries.push_back({idx, v(rng)}); });
  // |K_i| <= 3 keeps the nef-violation lower bound below the threefold bound.
  std::uniform_int_distribution<int> k(-3, 3);
  for (std::size_t i = 0; i < rank; ++i) s.canonical.push_back(k(rng));
  std::vector<std::vector<Integer>> fs(rank, std::vector<Integer>(rank, 0));
  for (std::size_t i = 0; i < rank; ++i) fs[i][i] = 1;
  s.nefFunctionals = fs;
  return custom(s);
}

}  // namespace

TEST(Product, BasisAndCanonical) {
  auto x = product(hirzebruchF1(), projectiveSpace(1));
  EXPECT_EQ(x->lattice.basisNames(), (std::vector<std::string>{"S", "F", "H"}));
  EXPECT_EQ(x->canonical, x->cls({-2, -3, -2}));
  EXPECT_TRUE(x->exactEqualsNef());
  EXPECT_TRUE(x->flags.toric);
  auto y = product(projectiveSpace(2), projectiveSpace(1));
  EXPECT_EQ(y->lattice.basisNames(), (std::vector<std::string>{"p1_H", "p2_H"}));
  ASSERT_TRUE(y->provenance.construction);
  EXPECT_EQ(y->provenance.construction->parents.size(), 2u);
  EXPECT_THROW(product(curve(1), curve(1), {"no_such_assertion"}), ConstructionError);
}

TEST(Product, MonomialsFactor) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> c(-4, 4);
  std::vector<std::pair<DescriptorPtr, DescriptorPtr>> pairs = {
      {hirzebruchF1(), projectiveSpace(1)}, {delPezzo7(), projectiveSpace(2)}, {curve(2), abelian(2)},
      {delPezzo7(), hirzebruchF1()}};
  for (const auto& [x, y] : pairs) {
    auto prod = product(x, y);
    const std::size_t p = x->dimension, q = y->dimension;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<DivisorClass> ax, ay;
      for (std::size_t i = 0; i < p + q; ++i) {
        std::vector<Integer> u(x->rank()), w(y->rank());
        for (auto& t : u) t = c(rng);
        for (auto& t : w) t = c(rng);
        ax.push_back(x->cls(u));
        ay.push_back(y->cls(w));
      }
      // kx factors pulled back from X, the rest from Y.
      for (std::size_t kx = 0; kx <= p + q; ++kx) {
        std::vector<DivisorClass> args;
        for (std::size_t i = 0; i < kx; ++i) args.push_back(lift(*prod, ax[i], DivisorClass::zero(y->lattice)));
        for (std::size_t i = kx; i < p + q; ++i) args.push_back(lift(*prod, DivisorClass::zero(x->lattice), ay[i]));
        const Integer v = prod->form.evaluate(std::span<const DivisorClass>(args));
        if (kx != p) {
          ASSERT_EQ(v, 0);
        } else {
          std::vector<DivisorClass> fx(ax.begin(), ax.begin() + p), fy(ay.begin() + p, ay.end());
          ASSERT_EQ(v, x->form.evaluate(std::span<const DivisorClass>(fx)) *
                           y->form.evaluate(std::span<const DivisorClass>(fy)));
        }
      }
    }
  }
}

TEST(Product, GlobalGenerationStatus) {
  auto e = product(curve(1), projectiveSpace(1));
  EXPECT_TRUE(std::holds_alternative<GgUnknown>(e->gg));
  EXPECT_FALSE(e->flags.irregularityZero);
  EXPECT_EQ(e->effectiveCurves.size(), 2u);

  auto p3 = projectiveSpace(3);
  auto s = hypersurfaceSection(p3, p3->basis("H"), 5);
  auto x = product(s, projectiveSpace(1));
  ASSERT_TRUE(std::holds_alternative<GgUnderApprox>(x->gg));
  EXPECT_TRUE(x->knownGloballyGenerated(lift(*x, s->canonical, DivisorClass::zero(projectiveSpace(1)->lattice))));
  EXPECT_FALSE(x->knownGloballyGenerated(x->cls({0, 1})));

  auto a = product(abelian(2), abelian(2));
  EXPECT_TRUE(std::holds_alternative<GgUnknown>(a->gg));
}

TEST(Blowup, Invariants) {
  for (auto s : {projectiveSpace(2), hirzebruchF1(), delPezzo7()}) {
    auto b = blowupPoint(s);
    ASSERT_EQ(b->rank(), s->rank() + 1);
    auto E = b->basis("E");
    EXPECT_EQ(b->form.evaluate({E, E}), -1);
    EXPECT_EQ(b->form.evaluate({b->canonical, E}), -1);
    for (std::size_t i = 0; i < s->rank(); ++i) {
      auto ai = DivisorClass::basis(b->lattice, i);
      EXPECT_EQ(b->form.evaluate({ai, E}), 0);
      for (std::size_t j = 0; j < s->rank(); ++j)
        EXPECT_EQ(b->form.evaluate({ai, DivisorClass::basis(b->lattice, j)}),
                  s->form.evaluate({DivisorClass::basis(s->lattice, i), DivisorClass::basis(s->lattice, j)}));
    }
    EXPECT_FALSE(b->nef.has_value());
    EXPECT_TRUE(std::holds_alternative<GgUnknown>(b->gg));
    EXPECT_FALSE(b->flags.toric);
    // (f*M - aE)^2 = (M^2) - a^2.
    auto m = DivisorClass::basis(b->lattice, 0);
    for (int a = 0; a <= 4; ++a) {
      auto l = m - Integer(a) * E;
      EXPECT_EQ(b->form.evaluate({l, l}), b->form.evaluate({m, m}) - a * a);
    }
  }
  EXPECT_THROW(blowupPoint(projectiveSpace(3)), ConstructionError);
}

TEST(Blowup, DeterminantMatchesF1) {
  auto b = blowupPoint(projectiveSpace(2));
  EXPECT_EQ(determinant(b->form.gram()), determinant(hirzebruchF1()->form.gram()));
}

TEST(Blowup, AnnotationsMoveToTheSublattice) {
  CustomSpec s;
  s.dimension = 2;
  s.basis = {"H"};
  s.formEntries = {{{0, 0}, 24}};
  s.canonical = {0};
  s.nefFunctionals = std::vector<std::vector<Integer>>{{1}};
  s.annotations = {{24, {}}};
  auto b = blowupPoint(custom(s));
  ASSERT_EQ(b->annotations.size(), 1u);
  EXPECT_FALSE(b->annotations[0].fullLattice());
  EXPECT_EQ(b->annotations[0].modulus, 24);
  EXPECT_EQ(b->form.evaluate({b->canonical, b->basis("E")}), -1);
}

TEST(Section, QuinticInProjectiveThreeSpace) {
  auto p3 = projectiveSpace(3);
  auto x = hypersurfaceSection(p3, p3->basis("H"), 5);
  EXPECT_EQ(x->dimension, 2u);
  EXPECT_EQ(x->form.evaluate({x->basis("H"), x->basis("H")}), 5);
  EXPECT_EQ(x->canonical, x->basis("H"));
  ASSERT_EQ(x->annotations.size(), 1u);
  EXPECT_EQ(x->annotations[0].modulus, 5);
  EXPECT_TRUE(x->flags.veryGeneralNL);
  EXPECT_TRUE(x->knownGloballyGenerated(x->canonical));
  EXPECT_FALSE(x->nef.has_value());
  EXPECT_TRUE(x->provenance.construction->asserts("very_general"));
  EXPECT_THROW(hypersurfaceSection(p3, p3->basis("H"), 3), ConstructionError);
  EXPECT_THROW(hypersurfaceSection(p3, DivisorClass::zero(p3->lattice), 5), ConstructionError);
  EXPECT_THROW(hypersurfaceSection(projectiveSpace(2), projectiveSpace(2)->basis("H"), 5), ConstructionError);
}

TEST(Section, BoundFollowsTheAmbient) {
  // hi(F1 x P1) = 2, so the floor of 5 decides.
  auto y = product(hirzebruchF1(), projectiveSpace(1));
  EXPECT_NO_THROW(hypersurfaceSection(y, y->cls({1, 2, 1}), 5));
  EXPECT_THROW(hypersurfaceSection(y, y->cls({1, 2, 1}), 4), ConstructionError);
}

TEST(Section, AnnotationHoldsOnRandomAmbients) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    auto y = randomThreefold(rng, 1 + rng() % 3);
    std::vector<Integer> h(y->rank(), 1);
    const std::int64_t p = 5 + static_cast<std::int64_t>(rng() % 6);
    // The threefold bound keeps hi(Y) <= 4, so every p >= 5 is admissible.
    auto x = hypersurfaceSection(y, y->cls(h), p);
    EXPECT_TRUE(checkAnnotation(x->form, DivisibilityAnnotation::full(Integer(p))));
    for (const auto& [idx, v] : x->form.entries()) {
      MultiIndex full = idx;
      Integer viaAmbient = 0;
      for (std::size_t k = 0; k < y->rank(); ++k) {
        full = idx;
        full.push_back(k);
        viaAmbient += Integer(p) * h[k] * y->form.entry(full);
      }
      EXPECT_EQ(v, viaAmbient);
    }
  }
}

TEST(Cover, FormScalesByDegree) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto y = randomThreefold(rng, 2);
    const std::int64_t d = 2 + static_cast<std::int64_t>(rng() % 5);
    auto x = cyclicCover(y, y->cls({1, 1}), d, {"assume_large_d"});
    IntersectionForm::forEachMonomial(2, 3, [&](const MultiIndex& idx) {
      EXPECT_EQ(x->form.entry(idx), Integer(d) * y->form.entry(idx));
    });
    EXPECT_EQ(x->canonical.coeffs(), (y->canonical + Integer(d - 1) * y->cls({1, 1})).coeffs());
    EXPECT_TRUE(x->provenance.construction->asserts("pic_pullback_iso"));
  }
}

TEST(Cover, Preconditions) {
  auto p3 = projectiveSpace(3);
  auto h = p3->basis("H");
  EXPECT_THROW(cyclicCover(p3, h, 1, {"assume_large_d"}), ConstructionError);
  EXPECT_THROW(cyclicCover(p3, h, 4), ConstructionError);
  EXPECT_THROW(cyclicCover(p3, DivisorClass::zero(p3->lattice), 4, {"assume_large_d"}), ConstructionError);
  auto p4 = projectiveSpace(4);
  EXPECT_NO_THROW(cyclicCover(p4, p4->basis("H"), 3));
  auto d7 = delPezzo7();
  EXPECT_THROW(cyclicCover(d7, d7->cls({3, -1, -1}), 2), ConstructionError);
  EXPECT_NO_THROW(cyclicCover(d7, d7->cls({3, -1, -1}), 2, {"pic_pullback_iso"}));
  auto c0 = curve(0);
  EXPECT_THROW(cyclicCover(c0, c0->basis("H"), 2), ConstructionError);
}

TEST(Cover, GlobalGenerationAndAnnotations) {
  auto p4 = projectiveSpace(4);
  auto x = cyclicCover(p4, p4->basis("H"), 7);
  // K_X = f*(K_Y + 6H) = f*H, ample and nef on the exact base.
  EXPECT_EQ(x->canonical, x->basis("H"));
  EXPECT_TRUE(x->knownGloballyGenerated(x->canonical));
  EXPECT_TRUE(x->knownGloballyGenerated(x->basis("H")));

  auto s = completeIntersection(2, {5}, true);
  auto c = cyclicCover(s, s->basis("H"), 3, {"pic_pullback_iso"});
  ASSERT_EQ(c->annotations.size(), 1u);
  EXPECT_EQ(c->annotations[0].modulus, 15);
  EXPECT_EQ(c->form.evaluate({c->basis("H"), c->basis("H")}), 15);
}

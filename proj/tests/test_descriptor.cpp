#include <gtest/gtest.h>

#include "confn/confn.hpp"

using namespace confn;

TEST(Descriptor, ProjectiveSpaceCanonicalLoop) {
  for (int n = 1; n <= 8; ++n) {
    auto p = projectiveSpace(n);
    EXPECT_EQ(p->dimension, static_cast<std::size_t>(n));
    EXPECT_EQ(p->rank(), 1u);
    EXPECT_EQ(p->canonical, Integer(-(n + 1)) * p->basis("H"));
    EXPECT_EQ(p->form.selfIntersection(p->basis("H"), n), 1);
    EXPECT_TRUE(p->exactEqualsNef());
    EXPECT_TRUE(p->flags.toric);
    EXPECT_TRUE(p->flags.irregularityZero);
  }
  EXPECT_THROW(projectiveSpace(0), DescriptorError);
}

TEST(Descriptor, CompleteIntersections) {
  auto q = completeIntersection(3, {5});
  EXPECT_TRUE(q->canonical.isZero());
  EXPECT_EQ(q->form.selfIntersection(q->basis("H"), 3), 5);

  auto x = completeIntersection(4, {2, 2});
  EXPECT_EQ(x->canonical, Integer(-3) * x->basis("H"));
  EXPECT_EQ(x->form.selfIntersection(x->basis("H"), 4), 4);

  auto s = completeIntersection(2, {5}, true);
  EXPECT_EQ(s->canonical, s->basis("H"));
  EXPECT_TRUE(s->nef->strictlyContains(s->canonical));
  EXPECT_TRUE(s->flags.veryGeneralNL);
  ASSERT_EQ(s->annotations.size(), 1u);
  EXPECT_EQ(s->annotations[0].modulus, 5);

  EXPECT_THROW(completeIntersection(2, {5}), DescriptorError);
  EXPECT_THROW(completeIntersection(2, {3}, true), DescriptorError);
  EXPECT_THROW(completeIntersection(2, {4, 4}, true), DescriptorError);
  EXPECT_THROW(completeIntersection(3, {}), DescriptorError);
  EXPECT_THROW(completeIntersection(3, {0}), DescriptorError);
}

TEST(Descriptor, CompleteIntersectionFormulaIdentity) {
  // All degrees 1 is the formula-level degenerate case: n + r + 1 - r = n + 1 = conFN(P^n).
  for (int n = 3; n <= 6; ++n)
    for (int r = 1; r <= 3; ++r) {
      auto ci = completeIntersection(n, std::vector<int>(r, 1));
      EXPECT_EQ(ci->canonical, projectiveSpace(n)->canonical.transported(ci->lattice));
      auto iv = resolve(ci);
      EXPECT_EQ(iv.lo, n + 1);
      EXPECT_EQ(iv.hi, n + 1);
    }
}

TEST(Descriptor, HirzebruchF1) {
  auto f1 = hirzebruchF1();
  EXPECT_EQ(f1->canonical, f1->cls({-2, -3}));
  auto l = f1->cls({1, 2});
  EXPECT_TRUE(f1->nef->strictlyContains(l));
  EXPECT_EQ(f1->form.selfIntersection(l, 2), 3);
  auto adj = f1->canonical + Integer(2) * l;
  EXPECT_EQ(adj, f1->basis("F"));
  EXPECT_TRUE(f1->nef->contains(adj));
  EXPECT_FALSE(f1->nef->strictlyContains(adj));
}

TEST(Descriptor, DelPezzo7) {
  auto d7 = delPezzo7();
  EXPECT_EQ(d7->form.gram(), (std::vector<std::vector<Integer>>{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}));
  EXPECT_EQ(d7->canonical, d7->cls({-3, 1, 1}));
  EXPECT_FALSE(d7->nef->contains(d7->canonical));
  auto l = d7->cls({3, -1, -1});
  EXPECT_TRUE(d7->nef->strictlyContains(l));
  EXPECT_EQ(d7->form.selfIntersection(l, 2), 7);
}

TEST(Descriptor, Curves) {
  for (int g : {0, 1, 3, 7}) {
    auto c = curve(g);
    EXPECT_EQ(c->canonical, c->cls({2 * g - 2}));
    EXPECT_EQ(*c->flags.curveGenus, g);
    EXPECT_EQ(c->exactEqualsNef(), g == 0);
  }
  EXPECT_THROW(curve(-1), DescriptorError);
}

TEST(Descriptor, AbelianVarieties) {
  auto a = abelian(3);
  EXPECT_TRUE(a->canonical.isZero());
  EXPECT_EQ(a->form.selfIntersection(a->basis("H"), 3), 6);
  EXPECT_TRUE(a->flags.abelian);
  EXPECT_FALSE(a->exactEqualsNef());
  // The trivial canonical class is nef, so no negative pairing can exist.
  EXPECT_TRUE(a->nef->contains(a->canonical));
  auto a8 = abelian(2, Integer(8));
  EXPECT_EQ(a8->form.selfIntersection(a8->basis("H"), 2), 8);
  EXPECT_THROW(abelian(2, Integer(0)), DescriptorError);
  EXPECT_THROW(abelian(0), DescriptorError);
}

TEST(Descriptor, CustomAccepted) {
  CustomSpec s;
  s.dimension = 2;
  s.basis = {"H"};
  s.formEntries = {{{0, 0}, 24}};
  s.canonical = {0};
  s.nefFunctionals = std::vector<std::vector<Integer>>{{1}};
  s.annotations = {{24, {}}};
  auto d = custom(s);
  EXPECT_EQ(d->provenance.constructor, "custom");
  EXPECT_TRUE(checkAnnotation(d->form, d->annotations[0]));
}

TEST(Descriptor, CustomRejections) {
  CustomSpec s;
  s.dimension = 2;
  s.basis = {"H"};
  s.formEntries = {{{0, 0, 0}, 1}};
  s.canonical = {0};
  EXPECT_THROW(custom(s), DescriptorError);

  s.formEntries = {{{0, 0}, 12}};
  s.annotations = {{24, {}}};
  try {
    custom(s);
    FAIL() << "annotation should be rejected";
  } catch (const DescriptorError& e) {
    EXPECT_NE(std::string(e.what()).find("24"), std::string::npos);
  }

  s.annotations.clear();
  s.canonical = {0, 1};
  EXPECT_THROW(custom(s), DescriptorError);

  // ExactEqualsNef on a rank-2 non-toric descriptor has no justification.
  CustomSpec t;
  t.dimension = 2;
  t.basis = {"A", "B"};
  t.formEntries = {{{0, 1}, 1}};
  t.canonical = {-2, -2};
  t.nefFunctionals = std::vector<std::vector<Integer>>{{1, 0}, {0, 1}};
  t.ggKind = CustomSpec::Gg::ExactEqualsNef;
  EXPECT_THROW(custom(t), DescriptorError);
  t.flags.toric = true;
  EXPECT_NO_THROW(custom(t));
}

TEST(Descriptor, KnownGloballyGenerated) {
  auto f1 = hirzebruchF1();
  EXPECT_TRUE(f1->knownGloballyGenerated(f1->basis("F")));
  EXPECT_FALSE(f1->knownGloballyGenerated(f1->basis("S") - f1->basis("F")));
  auto c = curve(2);
  EXPECT_TRUE(c->knownGloballyGenerated(DivisorClass::zero(c->lattice)));
  EXPECT_FALSE(c->knownGloballyGenerated(c->basis("H")));
}

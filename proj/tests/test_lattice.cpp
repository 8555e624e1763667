#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "confn/confn.hpp"

using namespace confn;

namespace {

// Sum over every ordered index tuple, no sparsity shortcuts.
Integer naiveEvaluate(const IntersectionForm& f, const std::vector<DivisorClass>& args) {
  const std::size_t n = args.size(), r = f.rank();
  Integer total = 0;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    Integer term = 1;
    for (std::size_t j = 0; j < n; ++j) term *= args[j][idx[j]];
    if (term != 0) total += term * f.entry(idx);
    std::size_t p = 0;
    while (p < n && ++idx[p] == r) idx[p++] = 0;
    if (p == n) break;
  }
  return total;
}

IntersectionForm randomForm(const PicardLattice& lat, std::size_t degree, std::mt19937& rng, int bound,
                            const Integer& scale = 1) {
  IntersectionForm f(lat, degree);
  std::uniform_int_distribution<int> dist(-bound, bound);
  IntersectionForm::forEachMonomial(lat.rank(), degree, [&](const MultiIndex& idx) { f.set(idx, scale * dist(rng)); });
  return f;
}

DivisorClass randomClass(const PicardLattice& lat, std::mt19937& rng, int bound) {
  std::uniform_int_distribution<int> dist(-bound, bound);
  std::vector<Integer> c;
  for (std::size_t i = 0; i < lat.rank(); ++i) c.push_back(dist(rng));
  return DivisorClass::of(lat, c);
}

PicardLattice names(std::size_t r) {
  std::vector<std::string> n;
  for (std::size_t i = 0; i < r; ++i) n.push_back("D" + std::to_string(i));
  return PicardLattice(n);
}

}  // namespace

TEST(Lattice, RejectsBadBases) {
  EXPECT_THROW(PicardLattice({}), DescriptorError);
  EXPECT_THROW(PicardLattice({"H", "H"}), DescriptorError);
  EXPECT_THROW(PicardLattice({"3H"}), DescriptorError);
  EXPECT_NO_THROW(PicardLattice({"H", "E_1", "_x"}));
}

TEST(Lattice, ClassArithmeticStaysOnItsLattice) {
  PicardLattice a({"H"}), b({"H"});
  auto h = DivisorClass::basis(a, 0);
  EXPECT_EQ((h + h)[0], 2);
  EXPECT_THROW(h + DivisorClass::basis(b, 0), LatticeMismatch);
  EXPECT_THROW(DivisorClass::of(a, {1, 2}), LatticeMismatch);
  PicardLattice d({"H", "E1", "E2"});
  EXPECT_EQ(DivisorClass::of(d, {3, -1, -1}).str(d), "3*H - E1 - E2");
  EXPECT_EQ(DivisorClass::zero(d).str(d), "0");
}

TEST(Lattice, ProjectivePlaneHyperplane) {
  auto p2 = projectiveSpace(2);
  EXPECT_EQ(p2->form.evaluate({p2->basis("H"), p2->basis("H")}), 1);
}

TEST(Lattice, HirzebruchPairings) {
  auto f1 = hirzebruchF1();
  auto S = f1->basis("S"), F = f1->basis("F");
  EXPECT_EQ(f1->form.evaluate({S, S}), -1);
  EXPECT_EQ(f1->form.evaluate({S, F}), 1);
  EXPECT_EQ(f1->form.evaluate({F, F}), 0);
  // 2S+3F against S+F by hand expansion over the Gram matrix.
  const auto g = f1->form.gram();
  const std::vector<Integer> a = {2, 3}, b = {1, 1};
  Integer oracle = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) oracle += a[i] * b[j] * g[i][j];
  EXPECT_EQ(oracle, 3);
  EXPECT_EQ(f1->form.evaluate({f1->cls({2, 3}), f1->cls({1, 1})}), oracle);
}

TEST(Lattice, SelfIntersections) {
  auto f1 = hirzebruchF1();
  auto l = f1->cls({1, 2});
  EXPECT_EQ(selfIntersection(f1->form, l, 2), naiveEvaluate(f1->form, {l, l}));
  EXPECT_EQ(selfIntersection(f1->form, l, 2), 3);
  auto p2 = projectiveSpace(2);
  EXPECT_EQ(selfIntersection(p2->form, p2->cls({3}), 2), 9);
  auto d7 = delPezzo7();
  auto m = d7->cls({3, -1, -1});
  EXPECT_EQ(selfIntersection(d7->form, m, 2), naiveEvaluate(d7->form, {m, m}));
  EXPECT_EQ(selfIntersection(d7->form, m, 2), 7);
  EXPECT_THROW(selfIntersection(d7->form, m, 3), ArityError);
}

TEST(Lattice, EvaluateErrors) {
  auto f1 = hirzebruchF1();
  auto p2 = projectiveSpace(2);
  EXPECT_THROW(f1->form.evaluate({f1->basis("S")}), ArityError);
  EXPECT_THROW(f1->form.evaluate({f1->basis("S"), p2->basis("H")}), LatticeMismatch);
}

TEST(Lattice, Annotations) {
  PicardLattice lat({"A", "B"});
  IntersectionForm f(lat, 2);
  f.set({0, 0}, 24).set({0, 1}, -48).set({1, 1}, 72);
  EXPECT_TRUE(checkAnnotation(f, DivisibilityAnnotation::full(24)));
  EXPECT_FALSE(checkAnnotation(f, DivisibilityAnnotation::full(48)));

  auto p2 = projectiveSpace(2);
  EXPECT_FALSE(checkAnnotation(p2->form, DivisibilityAnnotation::full(5)));

  auto f1 = hirzebruchF1();
  EXPECT_TRUE(checkAnnotation(f1->form, DivisibilityAnnotation::sublattice(2, {f1->basis("F")})));
  EXPECT_FALSE(checkAnnotation(f1->form, DivisibilityAnnotation::sublattice(2, {f1->basis("S")})));
}

TEST(Lattice, EvenForms) {
  PicardLattice lat({"A", "B"});
  IntersectionForm f(lat, 2);
  f.set({0, 0}, 2).set({1, 1}, -2);
  EXPECT_TRUE(isEvenForm(f));
  EXPECT_FALSE(isEvenForm(hirzebruchF1()->form));
  // Section of F1 x P1 with p = 6: all pairings lie in 6Z.
  auto y = product(hirzebruchF1(), projectiveSpace(1));
  auto x = hypersurfaceSection(y, y->cls({1, 2, 1}), 6);
  for (const auto& [idx, v] : x->form.entries()) EXPECT_EQ(detail::mod(v, 6), 0);
  EXPECT_TRUE(isEvenForm(x->form));
  EXPECT_THROW(isEvenForm(projectiveSpace(3)->form), ArityError);
}

TEST(LatticeProperty, SymmetryUnderPermutation) {
  std::mt19937 rng(20261014);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t rank = 1 + rng() % 4, degree = 1 + rng() % 4;
    PicardLattice lat = names(rank);
    IntersectionForm f = randomForm(lat, degree, rng, 9);
    std::vector<DivisorClass> args;
    for (std::size_t i = 0; i < degree; ++i) args.push_back(randomClass(lat, rng, 5));
    const Integer v = f.evaluate(std::span<const DivisorClass>(args));
    ASSERT_EQ(v, naiveEvaluate(f, args));
    std::shuffle(args.begin(), args.end(), rng);
    ASSERT_EQ(f.evaluate(std::span<const DivisorClass>(args)), v);
  }
}

TEST(LatticeProperty, MultilinearityWithoutOverflow) {
  std::mt19937 rng(7);
  const Integer huge = Integer(1) << 120;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t rank = 1 + rng() % 4, degree = 1 + rng() % 4;
    PicardLattice lat = names(rank);
    IntersectionForm f = randomForm(lat, degree, rng, 5, huge);
    std::vector<DivisorClass> rest;
    for (std::size_t i = 1; i < degree; ++i) rest.push_back(randomClass(lat, rng, 4));
    auto A = randomClass(lat, rng, 4), B = randomClass(lat, rng, 4);
    const Integer a = huge + 3, b = -(huge * 5) + 1;
    auto eval = [&](const DivisorClass& first) {
      std::vector<DivisorClass> args{first};
      args.insert(args.end(), rest.begin(), rest.end());
      return f.evaluate(std::span<const DivisorClass>(args));
    };
    ASSERT_EQ(eval(a * A + b * B), a * eval(A) + b * eval(B));
  }
}

TEST(LatticeProperty, AnnotationImpliesDivisibility) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rank = 1 + rng() % 3, degree = 1 + rng() % 3;
    const Integer n = 2 + rng() % 23;
    PicardLattice lat = names(rank);
    IntersectionForm f = randomForm(lat, degree, rng, 6, n);
    ASSERT_TRUE(checkAnnotation(f, DivisibilityAnnotation::full(n)));
    for (int s = 0; s < 10; ++s) {
      std::vector<DivisorClass> args;
      for (std::size_t i = 0; i < degree; ++i) args.push_back(randomClass(lat, rng, 7));
      ASSERT_EQ(detail::mod(naiveEvaluate(f, args), n), 0);
    }
    // Sublattice scope: check against combinations of the generators only.
    IntersectionForm g = randomForm(lat, degree, rng, 6);
    std::vector<DivisorClass> gens{randomClass(lat, rng, 3), randomClass(lat, rng, 3)};
    const bool claim = checkAnnotation(g, DivisibilityAnnotation::sublattice(n, gens));
    bool allDivisible = true;
    for (int s = 0; s < 40 && allDivisible; ++s) {
      std::vector<DivisorClass> args;
      std::uniform_int_distribution<int> c(-4, 4);
      for (std::size_t i = 0; i < degree; ++i) args.push_back(Integer(c(rng)) * gens[0] + Integer(c(rng)) * gens[1]);
      allDivisible = detail::mod(naiveEvaluate(g, args), n) == 0;
    }
    if (claim) {
      ASSERT_TRUE(allDivisible);
    }
  }
}

TEST(Lattice, DeterminantAndRank) {
  EXPECT_EQ(determinant(hirzebruchF1()->form.gram()), -1);
  EXPECT_EQ(determinant(blowupPoint(projectiveSpace(2))->form.gram()), -1);
  EXPECT_EQ(determinant({{2, 1}, {4, 2}}), 0);
  EXPECT_EQ(matrixRank({{1, 0}, {-1, 1}, {0, 1}}), 2u);
  EXPECT_EQ(matrixRank({{1, 2}, {2, 4}}), 1u);
}

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "confn/cone.hpp"
#include "confn/core.hpp"
#include "confn/lattice.hpp"

namespace confn {

struct VarietyDescriptor;
using DescriptorPtr = std::shared_ptr<const VarietyDescriptor>;

/// Globally generated iff nef.
struct GgExactEqualsNef {
  std::string justification;
};
/// These classes are known globally generated; nothing is claimed about others.
struct GgUnderApprox {
  std::vector<DivisorClass> classes;
};
struct GgUnknown {};
using GgStatus = std::variant<GgExactEqualsNef, GgUnderApprox, GgUnknown>;

struct VarietyFlags {
  bool toric = false;
  bool irregularityZero = false;
  bool abelian = false;
  bool veryGeneralNL = false;
  std::optional<int> curveGenus;
  std::vector<std::uint64_t> noCommonIsogenyFactorWith;
};

enum class ConstructionKind { Product, BlowupPoint, HypersurfaceSection, CyclicCover };

inline const char* kindName(ConstructionKind k) {
  switch (k) {
    case ConstructionKind::Product: return "product";
    case ConstructionKind::BlowupPoint: return "blowup_point";
    case ConstructionKind::HypersurfaceSection: return "hypersurface_section";
    case ConstructionKind::CyclicCover: return "cyclic_cover";
  }
  return "?";
}

/// A hypothesis the engine trusts rather than checks.
struct Assertion {
  std::string name;
  std::string citation;
  friend bool operator==(const Assertion&, const Assertion&) = default;
};

struct ConstructionTrace {
  ConstructionKind kind;
  std::vector<DescriptorPtr> parents;
  /// Cover degree d, or section multiple p.
  std::int64_t degree = 0;
  /// Branch class L (covers) or section class H (sections), on the parent's lattice.
  std::optional<DivisorClass> divisor;
  std::vector<Assertion> assertions;

  bool asserts(const std::string& name) const {
    for (const auto& a : assertions)
      if (a.name == name) return true;
    return false;
  }
};

struct Provenance {
  std::string constructor;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::optional<ConstructionTrace> construction;
  std::vector<std::string> notes;
  std::string fundamentalGroupNote;
};

struct VarietyDescriptor {
  std::uint64_t id = detail::nextId();
  std::size_t dimension = 0;
  PicardLattice lattice;
  IntersectionForm form;
  DivisorClass canonical;
  /// Empty when the nef cone is not determined by the numerical data.
  std::optional<ConeByFunctionals> nef;
  GgStatus gg = GgUnknown{};
  VarietyFlags flags;
  std::vector<DivisibilityAnnotation> annotations;
  /// Effective curve classes (surfaces), e.g. exceptional curves.
  std::vector<DivisorClass> effectiveCurves;
  Provenance provenance;

  VarietyDescriptor(std::size_t dim, PicardLattice lat, IntersectionForm f, DivisorClass k)
      : dimension(dim), lattice(std::move(lat)), form(std::move(f)), canonical(std::move(k)) {}

  std::size_t rank() const { return lattice.rank(); }
  bool exactEqualsNef() const { return std::holds_alternative<GgExactEqualsNef>(gg); }

  DivisorClass cls(std::vector<Integer> coeffs) const { return DivisorClass::of(lattice, std::move(coeffs)); }
  DivisorClass basis(const std::string& name) const {
    auto i = lattice.indexOf(name);
    if (!i) throw LatticeMismatch("no basis class named '" + name + "'");
    return DivisorClass::basis(lattice, *i);
  }

  std::optional<ConstructionKind> kind() const {
    if (!provenance.construction) return std::nullopt;
    return provenance.construction->kind;
  }

  /// Classes certified globally generated by the descriptor itself.
  bool knownGloballyGenerated(const DivisorClass& d) const {
    if (d.isZero()) return true;
    if (exactEqualsNef() && nef) return nef->contains(d);
    if (const auto* u = std::get_if<GgUnderApprox>(&gg))
      for (const auto& c : u->classes)
        if (c == d) return true;
    return false;
  }

  /// Throws DescriptorError naming the first violated invariant.
  void validate() const {
    if (dimension < 1) throw DescriptorError("dimension must be >= 1");
    if (form.degree() != dimension)
      throw DescriptorError("intersection form degree " + std::to_string(form.degree()) +
                            " differs from dimension " + std::to_string(dimension));
    if (form.latticeId() != lattice.id() || form.rank() != lattice.rank())
      throw DescriptorError("intersection form is not on the descriptor's lattice");
    if (canonical.latticeId() != lattice.id() || canonical.rank() != lattice.rank())
      throw DescriptorError("canonical class is not on the descriptor's lattice");
    if (nef && (nef->latticeId() != lattice.id() || nef->rank() != lattice.rank()))
      throw DescriptorError("nef cone is not on the descriptor's lattice");
    if (exactEqualsNef()) {
      if (!nef) throw DescriptorError("ExactEqualsNef requires a known nef cone");
      const auto& just = std::get<GgExactEqualsNef>(gg).justification;
      bool productOfExact = false;
      if (provenance.construction && provenance.construction->kind == ConstructionKind::Product) {
        productOfExact = true;
        for (const auto& p : provenance.construction->parents) productOfExact = productOfExact && p->exactEqualsNef();
      }
      if (!flags.toric && !productOfExact && !(lattice.rank() == 1 && !just.empty()))
        throw DescriptorError(
            "ExactEqualsNef needs the toric flag, a product of such factors, or a Picard-rank-1 "
            "justification in provenance");
    }
    if (const auto* u = std::get_if<GgUnderApprox>(&gg))
      for (const auto& c : u->classes)
        if (c.latticeId() != lattice.id()) throw DescriptorError("globally generated class on foreign lattice");
    for (const auto& c : effectiveCurves)
      if (c.latticeId() != lattice.id()) throw DescriptorError("effective curve on foreign lattice");
    if (flags.curveGenus && (dimension != 1 || *flags.curveGenus < 0))
      throw DescriptorError("curve flag requires dimension 1 and genus >= 0");
    for (const auto& a : annotations) {
      if (a.generators)
        for (const auto& g : *a.generators)
          if (g.latticeId() != lattice.id()) throw DescriptorError("annotation generator on foreign lattice");
      if (!checkAnnotation(form, a))
        throw DescriptorError("divisibility annotation N=" + a.modulus.str() +
                              " is not satisfied by the intersection form");
    }
  }
};

namespace detail {

inline std::shared_ptr<VarietyDescriptor> finish(std::shared_ptr<VarietyDescriptor> d) {
  d->validate();
  return d;
}

inline std::vector<std::vector<Integer>> singleNonnegative() { return {{1}}; }

}  // namespace detail

inline DescriptorPtr projectiveSpace(int n) {
  if (n < 1) throw DescriptorError("projective space needs n >= 1");
  PicardLattice lat({"H"});
  IntersectionForm f(lat, n);
  f.set(MultiIndex(n, 0), 1);
  auto d = std::make_shared<VarietyDescriptor>(n, lat, f, DivisorClass::of(lat, {Integer(-(n + 1))}));
  d->nef = ConeByFunctionals(lat, detail::singleNonnegative());
  d->gg = GgExactEqualsNef{"toric: globally generated iff nef"};
  d->flags.toric = true;
  d->flags.irregularityZero = true;
  d->provenance.constructor = "projective_space";
  d->provenance.parameters = {{"n", std::to_string(n)}};
  d->provenance.fundamentalGroupNote = "simply connected";
  return detail::finish(d);
}

/// Complete intersection of multidegree `degrees` in P^{n+r}, r = degrees.size().
/// Surfaces are accepted only as very general hypersurfaces of degree >= 4 in P^3.
inline DescriptorPtr completeIntersection(int n, const std::vector<int>& degrees, bool veryGeneral = false) {
  const int r = static_cast<int>(degrees.size());
  if (r < 1) throw DescriptorError("complete intersection needs at least one degree");
  for (int di : degrees)
    if (di < 1) throw DescriptorError("complete intersection degrees must be >= 1");
  if (n < 3) {
    if (!(n == 2 && r == 1))
      throw DescriptorError("complete intersections need n >= 3 (Lefschetz range), or a hypersurface in P^3");
    if (degrees[0] < 4) throw DescriptorError("surface hypersurface needs degree >= 4 for Noether-Lefschetz");
    if (!veryGeneral) throw DescriptorError("surface hypersurface requires the very_general assertion");
  }
  PicardLattice lat({"H"});
  IntersectionForm f(lat, n);
  Integer prod = 1, sum = 0;
  for (int di : degrees) {
    prod *= di;
    sum += di;
  }
  f.set(MultiIndex(n, 0), prod);
  auto d = std::make_shared<VarietyDescriptor>(n, lat, f, DivisorClass::of(lat, {sum - (n + r + 1)}));
  d->nef = ConeByFunctionals(lat, detail::singleNonnegative());
  d->gg = GgExactEqualsNef{
      "Picard rank 1 generated by O(1)|X; O(a)|X is globally generated iff a >= 0"};
  d->flags.irregularityZero = true;
  d->flags.veryGeneralNL = veryGeneral || n == 2;
  if (n == 2 && degrees[0] >= 2) d->annotations.push_back(DivisibilityAnnotation::full(degrees[0]));
  d->provenance.constructor = "complete_intersection";
  std::string ds;
  for (int i = 0; i < r; ++i) ds += (i ? "," : "") + std::to_string(degrees[i]);
  d->provenance.parameters = {{"n", std::to_string(n)}, {"r", std::to_string(r)}, {"degrees", ds}};
  d->provenance.notes.push_back(n == 2 ? "Pic generated by O(1)|X for a very general surface (Noether-Lefschetz)"
                                       : "Pic generated by O(1)|X (Lefschetz hyperplane theorem)");
  d->provenance.fundamentalGroupNote = "simply connected (Lefschetz hyperplane theorem)";
  return detail::finish(d);
}

/// Blow-up of P^2 in one point, basis (S, F) for section and fibre.
inline DescriptorPtr hirzebruchF1() {
  PicardLattice lat({"S", "F"});
  IntersectionForm f(lat, 2);
  f.set({0, 0}, -1).set({0, 1}, 1);
  auto d = std::make_shared<VarietyDescriptor>(2, lat, f, DivisorClass::of(lat, {-2, -3}));
  d->nef = ConeByFunctionals(lat, {{1, 0}, {-1, 1}});
  d->gg = GgExactEqualsNef{"toric: globally generated iff nef"};
  d->flags.toric = true;
  d->flags.irregularityZero = true;
  d->effectiveCurves = {d->basis("S"), d->basis("F")};
  d->provenance.constructor = "hirzebruch1";
  d->provenance.fundamentalGroupNote = "simply connected (birational to P^2)";
  return detail::finish(d);
}

/// Blow-up of P^2 in two points, basis (H, E1, E2); dH - a1 E1 - a2 E2 has coefficients (d, -a1, -a2).
inline DescriptorPtr delPezzo7() {
  PicardLattice lat({"H", "E1", "E2"});
  IntersectionForm f(lat, 2);
  f.set({0, 0}, 1).set({1, 1}, -1).set({2, 2}, -1);
  auto d = std::make_shared<VarietyDescriptor>(2, lat, f, DivisorClass::of(lat, {-3, 1, 1}));
  // a1 >= 0, a2 >= 0, d - a1 - a2 >= 0 with a_i = -coefficient.
  d->nef = ConeByFunctionals(lat, {{0, -1, 0}, {0, 0, -1}, {1, 1, 1}});
  d->gg = GgExactEqualsNef{"toric: globally generated iff nef"};
  d->flags.toric = true;
  d->flags.irregularityZero = true;
  d->effectiveCurves = {d->basis("E1"), d->basis("E2")};
  d->provenance.constructor = "delpezzo7";
  d->provenance.fundamentalGroupNote = "simply connected (birational to P^2)";
  return detail::finish(d);
}

/// Smooth projective curve of genus g; the lattice is the degree map.
inline DescriptorPtr curve(int genus) {
  if (genus < 0) throw DescriptorError("curve genus must be >= 0");
  PicardLattice lat({"H"});
  IntersectionForm f(lat, 1);
  f.set({0}, 1);
  auto d = std::make_shared<VarietyDescriptor>(1, lat, f, DivisorClass::of(lat, {Integer(2 * genus - 2)}));
  d->nef = ConeByFunctionals(lat, detail::singleNonnegative());
  d->flags.curveGenus = genus;
  if (genus == 0) {
    d->gg = GgExactEqualsNef{"toric: globally generated iff nef"};
    d->flags.toric = true;
    d->flags.irregularityZero = true;
  } else {
    d->gg = GgUnknown{};
  }
  d->provenance.constructor = "curve";
  d->provenance.parameters = {{"genus", std::to_string(genus)}};
  return detail::finish(d);
}

/// Abelian variety with a rank-1 numerical lattice; (H^n) defaults to n!.
inline DescriptorPtr abelian(int n, std::optional<Integer> topSelfIntersection = std::nullopt) {
  if (n < 1) throw DescriptorError("abelian variety needs n >= 1");
  Integer top = 1;
  for (int i = 2; i <= n; ++i) top *= i;
  if (topSelfIntersection) top = *topSelfIntersection;
  if (top <= 0) throw DescriptorError("ample generator must have positive top self-intersection");
  PicardLattice lat({"H"});
  IntersectionForm f(lat, n);
  f.set(MultiIndex(n, 0), top);
  auto d = std::make_shared<VarietyDescriptor>(n, lat, f, DivisorClass::zero(lat));
  d->nef = ConeByFunctionals(lat, detail::singleNonnegative());
  d->gg = GgUnknown{};
  d->flags.abelian = true;
  d->provenance.constructor = "abelian";
  d->provenance.parameters = {{"n", std::to_string(n)}, {"top", top.str()}};
  return detail::finish(d);
}

struct CustomSpec {
  std::size_t dimension = 0;
  std::vector<std::string> basis;
  /// (multi-index by basis position, value); any index order.
  std::vector<std::pair<MultiIndex, Integer>> formEntries;
  std::vector<Integer> canonical;
  std::optional<std::vector<std::vector<Integer>>> nefFunctionals;
  enum class Gg { Unknown, ExactEqualsNef, UnderApprox } ggKind = Gg::Unknown;
  std::vector<std::vector<Integer>> ggClasses;
  std::string ggJustification;
  VarietyFlags flags;
  /// (modulus, generator coefficient vectors); no generators means the full lattice.
  std::vector<std::pair<Integer, std::vector<std::vector<Integer>>>> annotations;
  std::vector<std::vector<Integer>> effectiveCurves;
};

inline DescriptorPtr custom(const CustomSpec& spec) {
  PicardLattice lat(spec.basis);
  if (spec.dimension < 1) throw DescriptorError("dimension must be >= 1");
  IntersectionForm f(lat, spec.dimension);
  for (const auto& [idx, v] : spec.formEntries) {
    if (idx.size() != spec.dimension)
      throw DescriptorError("form entry has " + std::to_string(idx.size()) + " factors but dimension is " +
                            std::to_string(spec.dimension));
    f.set(idx, v);
  }
  if (spec.canonical.size() != lat.rank()) throw DescriptorError("canonical class has wrong length");
  auto d = std::make_shared<VarietyDescriptor>(spec.dimension, lat, f, DivisorClass::of(lat, spec.canonical));
  if (spec.nefFunctionals) d->nef = ConeByFunctionals(lat, *spec.nefFunctionals);
  switch (spec.ggKind) {
    case CustomSpec::Gg::Unknown: d->gg = GgUnknown{}; break;
    case CustomSpec::Gg::ExactEqualsNef:
      d->gg = GgExactEqualsNef{spec.ggJustification.empty() ? std::string("asserted by caller")
                                                            : spec.ggJustification};
      break;
    case CustomSpec::Gg::UnderApprox: {
      GgUnderApprox u;
      for (const auto& c : spec.ggClasses) u.classes.push_back(DivisorClass::of(lat, c));
      d->gg = u;
      break;
    }
  }
  d->flags = spec.flags;
  for (const auto& [n, gens] : spec.annotations) {
    if (gens.empty()) {
      d->annotations.push_back(DivisibilityAnnotation::full(n));
    } else {
      std::vector<DivisorClass> g;
      for (const auto& c : gens) g.push_back(DivisorClass::of(lat, c));
      d->annotations.push_back(DivisibilityAnnotation::sublattice(n, std::move(g)));
    }
  }
  for (const auto& c : spec.effectiveCurves) d->effectiveCurves.push_back(DivisorClass::of(lat, c));
  d->provenance.constructor = "custom";
  return detail::finish(d);
}

}  // namespace confn

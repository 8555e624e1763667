#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "confn/descriptor.hpp"
#include "confn/engine.hpp"

namespace confn {

/// Hypotheses accepted by the transforms, with the theorem each one stands for.
inline std::optional<std::string> assertionCitation(const std::string& name) {
  if (name == "pic_pullback_iso")
    return "Grothendieck-Lefschetz for Pic on the branch divisor: f* : Pic(Y) -> Pic(X) is an isomorphism";
  if (name == "assume_large_d")
    return "dim Y = 3: d sufficiently large and B very general, Noether-Lefschetz for Pic(Y) -> Pic(B)";
  if (name == "effective_nl_gate")
    return "effective Noether-Lefschetz: omega_Y(B) globally generated gives Pic(Y) = Pic(B) for very general B";
  if (name == "very_general") return "Noether-Lefschetz: the very general member has Pic restricted from the ambient";
  if (name == "no_common_isogeny_factor")
    return "Pic^0(X) and Pic^0(Y) share no nontrivial isogeny factor, so Pic(X x Y) = Pic(X) x Pic(Y)";
  if (name == "very_ample") return "the class is very ample (caller's hypothesis)";
  return std::nullopt;
}

inline Assertion makeAssertion(const std::string& name) {
  auto c = assertionCitation(name);
  if (!c) throw ConstructionError("unknown assertion '" + name + "'");
  return {name, *c};
}

namespace detail {

inline void addAssertion(std::vector<Assertion>& list, const std::string& name) {
  for (const auto& a : list)
    if (a.name == name) return;
  list.push_back(makeAssertion(name));
}

inline std::vector<Assertion> makeAssertions(const std::vector<std::string>& names) {
  std::vector<Assertion> out;
  for (const auto& n : names) addAssertion(out, n);
  return out;
}

inline std::string freshName(const PicardLattice& lat, const std::string& base) {
  if (!lat.indexOf(base)) return base;
  for (int i = 1;; ++i) {
    std::string c = base + std::to_string(i);
    if (!lat.indexOf(c)) return c;
  }
}

inline std::vector<Integer> concat(std::vector<Integer> a, const std::vector<Integer>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline std::vector<DivisorClass> knownGgClasses(const VarietyDescriptor& d) {
  std::vector<DivisorClass> out;
  if (const auto* u = std::get_if<GgUnderApprox>(&d.gg)) out = u->classes;
  return out;
}

}  // namespace detail

/// X x Y with Pic = Pic(X) x Pic(Y). Colliding basis names get prefixes p1_ and p2_.
inline DescriptorPtr product(const DescriptorPtr& x, const DescriptorPtr& y,
                             const std::vector<std::string>& assertions = {}) {
  const std::size_t p = x->dimension, q = y->dimension, rx = x->rank(), ry = y->rank();
  std::vector<std::string> names = x->lattice.basisNames();
  const auto& yn = y->lattice.basisNames();
  bool collide = false;
  for (const auto& n : yn) collide = collide || x->lattice.indexOf(n).has_value();
  if (collide) {
    for (auto& n : names) n = "p1_" + n;
    for (const auto& n : yn) names.push_back("p2_" + n);
  } else {
    names.insert(names.end(), yn.begin(), yn.end());
  }
  PicardLattice lat(names);

  // A monomial is nonzero only with exactly p factors from X.
  IntersectionForm f(lat, p + q);
  for (const auto& [ix, vx] : x->form.entries())
    for (const auto& [iy, vy] : y->form.entries()) {
      MultiIndex idx = ix;
      for (auto j : iy) idx.push_back(j + rx);
      f.set(idx, vx * vy);
    }

  auto lift = [&](const DivisorClass& a, const DivisorClass& b) {
    return DivisorClass::of(lat, detail::concat(a.coeffs(), b.coeffs()));
  };
  auto d = std::make_shared<VarietyDescriptor>(p + q, lat, f, lift(x->canonical, y->canonical));

  if (x->nef && y->nef) {
    std::vector<std::vector<Integer>> fs;
    for (const auto& phi : x->nef->functionals()) fs.push_back(detail::concat(phi, std::vector<Integer>(ry, 0)));
    for (const auto& phi : y->nef->functionals()) fs.push_back(detail::concat(std::vector<Integer>(rx, 0), phi));
    d->nef = ConeByFunctionals(lat, fs);
  }
  const DivisorClass zx = DivisorClass::zero(x->lattice), zy = DivisorClass::zero(y->lattice);
  if (x->exactEqualsNef() && y->exactEqualsNef()) {
    d->gg = GgExactEqualsNef{"box-sum A + B is globally generated iff A and B are (Kunneth); both factors exact"};
  } else {
    std::vector<DivisorClass> gx = detail::knownGgClasses(*x), gy = detail::knownGgClasses(*y);
    gx.push_back(zx);
    gy.push_back(zy);
    GgUnderApprox u;
    for (const auto& a : gx)
      for (const auto& b : gy) {
        DivisorClass c = lift(a, b);
        if (c.isZero() || std::find(u.classes.begin(), u.classes.end(), c) != u.classes.end()) continue;
        u.classes.push_back(c);
      }
    if (u.classes.empty())
      d->gg = GgUnknown{};
    else
      d->gg = u;
  }
  d->flags.irregularityZero = x->flags.irregularityZero && y->flags.irregularityZero;
  d->flags.toric = x->flags.toric && y->flags.toric;
  if (x->dimension + y->dimension == 2 && x->dimension == 1) {
    // Fibres of the two projections.
    d->effectiveCurves = {lift(DivisorClass::basis(x->lattice, 0), zy), lift(zx, DivisorClass::basis(y->lattice, 0))};
  }

  ConstructionTrace tr;
  tr.kind = ConstructionKind::Product;
  tr.parents = {x, y};
  tr.assertions = detail::makeAssertions(assertions);
  d->provenance.constructor = "product";
  d->provenance.parameters = {{"first", x->provenance.constructor}, {"second", y->provenance.constructor}};
  d->provenance.construction = tr;
  d->provenance.fundamentalGroupNote = "pi_1 of a product is the product of pi_1 (recorded, not computed)";
  return detail::finish(d);
}

/// Blow-up of a surface in one point: Pic = f*Pic(S) + ZE, (E^2) = -1, K' = f*K + E.
inline DescriptorPtr blowupPoint(const DescriptorPtr& s) {
  if (s->dimension != 2) throw ConstructionError("blow-up of a point needs a surface, got dimension " +
                                                 std::to_string(s->dimension));
  std::vector<std::string> names = s->lattice.basisNames();
  names.push_back(detail::freshName(s->lattice, "E"));
  PicardLattice lat(names);
  const std::size_t e = s->rank();
  IntersectionForm f(lat, 2);
  for (const auto& [idx, v] : s->form.entries()) f.set(idx, v);
  f.set({e, e}, -1);

  auto pull = [&](const DivisorClass& c) {
    auto v = c.coeffs();
    v.push_back(0);
    return DivisorClass::of(lat, v);
  };
  const DivisorClass E = DivisorClass::basis(lat, e);
  auto d = std::make_shared<VarietyDescriptor>(2, lat, f, pull(s->canonical) + E);
  d->gg = GgUnknown{};
  for (const auto& a : s->annotations) {
    std::vector<DivisorClass> gens;
    if (a.fullLattice())
      for (std::size_t i = 0; i < e; ++i) gens.push_back(DivisorClass::basis(lat, i));
    else
      for (const auto& g : *a.generators) gens.push_back(pull(g));
    d->annotations.push_back(DivisibilityAnnotation::sublattice(a.modulus, std::move(gens)));
  }
  d->flags.irregularityZero = s->flags.irregularityZero;
  d->effectiveCurves.push_back(E);
  for (const auto& c : s->effectiveCurves) d->effectiveCurves.push_back(pull(c));

  ConstructionTrace tr;
  tr.kind = ConstructionKind::BlowupPoint;
  tr.parents = {s};
  d->provenance.constructor = "blowup_point";
  d->provenance.parameters = {{"surface", s->provenance.constructor}};
  d->provenance.construction = tr;
  d->provenance.notes.push_back("nef cone of the blow-up is not determined by numerical data of S");
  d->provenance.fundamentalGroupNote = "pi_1 unchanged (birational invariance)";
  return detail::finish(d);
}

/// Very general member X of |pH| on a threefold Y, with Pic(X) = Pic(Y).
inline DescriptorPtr hypersurfaceSection(const DescriptorPtr& y, const DivisorClass& h, std::int64_t p,
                                         const ResolveOptions& opt = {}) {
  if (y->dimension != 3)
    throw ConstructionError("hypersurface section needs a threefold, got dimension " + std::to_string(y->dimension));
  if (!y->nef) throw ConstructionError("H must be ample, but the nef cone of Y is unknown");
  if (!y->nef->strictlyContains(h)) throw ConstructionError("H = " + h.str(y->lattice) + " is not ample on Y");
  const std::int64_t hiY = resolve(*y, opt).hi;
  const std::int64_t need = std::max<std::int64_t>(5, hiY);
  if (p < need)
    throw ConstructionError("p = " + std::to_string(p) + " is below max(5, conFN(Y) upper bound) = " +
                            std::to_string(need) + "; K_Y + pH is then not known ample and globally generated");
  PicardLattice lat(y->lattice.basisNames());
  IntersectionForm f = y->form.contracted(Integer(p) * h, lat);
  auto d = std::make_shared<VarietyDescriptor>(2, lat, f, (y->canonical + Integer(p) * h).transported(lat));
  d->annotations.push_back(DivisibilityAnnotation::full(Integer(p)));
  d->gg = GgUnderApprox{{d->canonical}};
  d->flags.veryGeneralNL = true;
  d->flags.irregularityZero = y->flags.irregularityZero;

  ConstructionTrace tr;
  tr.kind = ConstructionKind::HypersurfaceSection;
  tr.parents = {y};
  tr.degree = p;
  tr.divisor = h;
  tr.assertions = {makeAssertion("very_general")};
  d->provenance.constructor = "hypersurface_section";
  d->provenance.parameters = {{"ambient", y->provenance.constructor}, {"p", std::to_string(p)},
                              {"H", h.str(y->lattice)}};
  d->provenance.construction = tr;
  d->provenance.notes.push_back("K_X = (K_Y + pH)|X is globally generated since p >= conFN(Y) bound");
  d->provenance.fundamentalGroupNote = "pi_1(X) = pi_1(Y) (Lefschetz hyperplane theorem)";
  return detail::finish(d);
}

/// Degree-d cyclic cover totally branched along B in |dL|; Pic identified with Pic(Y) via f*.
inline DescriptorPtr cyclicCover(const DescriptorPtr& y, const DivisorClass& l, std::int64_t degree,
                                 const std::vector<std::string>& assertions = {}) {
  if (degree < 2) throw ConstructionError("cover degree must be >= 2, got " + std::to_string(degree));
  if (!y->nef) throw ConstructionError("branch class must be ample, but the nef cone of Y is unknown");
  if (!y->nef->strictlyContains(l)) throw ConstructionError("branch class " + l.str(y->lattice) + " is not ample");
  std::vector<Assertion> as = detail::makeAssertions(assertions);
  auto has = [&](const char* n) {
    return std::any_of(as.begin(), as.end(), [&](const Assertion& a) { return a.name == n; });
  };
  if (y->dimension >= 4) {
    detail::addAssertion(as, "pic_pullback_iso");
  } else if (y->dimension <= 2 && has("pic_pullback_iso")) {
    // Trusted as stated by the caller.
  } else if (y->dimension == 3) {
    if (!has("assume_large_d") && !has("effective_nl_gate"))
      throw ConstructionError(
          "dim Y = 3: the Pic pullback isomorphism needs assume=[assume_large_d] (or the effective "
          "Noether-Lefschetz gate)");
    detail::addAssertion(as, "pic_pullback_iso");
  } else {
    throw ConstructionError("Pic pullback isomorphism is unavailable for dim Y = " + std::to_string(y->dimension) +
                            "; covers need dim Y >= 3 or an explicit assume=[pic_pullback_iso]");
  }

  PicardLattice lat(y->lattice.basisNames());
  IntersectionForm f = y->form.scaled(Integer(degree), lat);
  const DivisorClass kBase = y->canonical + Integer(degree - 1) * l;
  auto d = std::make_shared<VarietyDescriptor>(y->dimension, lat, f, kBase.transported(lat));
  d->nef = y->nef->transported(lat);

  // Pullbacks of globally generated classes stay globally generated.
  GgUnderApprox u;
  if (y->exactEqualsNef()) {
    u.classes.push_back(l.transported(lat));
    if (y->nef->contains(kBase)) u.classes.push_back(d->canonical);
  } else {
    for (const auto& c : detail::knownGgClasses(*y)) u.classes.push_back(c.transported(lat));
  }
  if (u.classes.empty())
    d->gg = GgUnknown{};
  else
    d->gg = u;

  for (const auto& a : y->annotations) {
    DivisibilityAnnotation b{a.modulus * degree, std::nullopt};
    if (!a.fullLattice()) {
      b.generators.emplace();
      for (const auto& g : *a.generators) b.generators->push_back(g.transported(lat));
    }
    d->annotations.push_back(std::move(b));
  }
  d->flags.irregularityZero = y->flags.irregularityZero;

  ConstructionTrace tr;
  tr.kind = ConstructionKind::CyclicCover;
  tr.parents = {y};
  tr.degree = degree;
  tr.divisor = l;
  tr.assertions = std::move(as);
  d->provenance.constructor = "cyclic_cover";
  d->provenance.parameters = {{"base", y->provenance.constructor}, {"d", std::to_string(degree)},
                              {"L", l.str(y->lattice)}};
  d->provenance.construction = tr;
  if (y->flags.irregularityZero)
    d->provenance.notes.push_back("H^1(O_X) = H^1(O_Y) + sum H^1(L^-i) = 0 by Kodaira vanishing");
  d->provenance.fundamentalGroupNote = "pi_1(X) = pi_1(Y) for totally branched covers (recorded, not computed)";
  return detail::finish(d);
}

}  // namespace confn

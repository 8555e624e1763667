#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "confn/certificate.hpp"
#include "confn/engine.hpp"
#include "confn/h0.hpp"

namespace confn {

struct VerifyResult {
  bool ok = true;
  std::string reason;

  static VerifyResult pass() { return {}; }
  static VerifyResult fail(std::string why) { return {false, std::move(why)}; }
};

namespace detail {

inline std::vector<Integer> coeffsAt(const Json& j) { return integersFromJson(j); }

inline const DivisibilityAnnotation* fullAnnotation(const VarietyDescriptor& d, const Integer& n) {
  for (const auto& a : d.annotations)
    if (a.fullLattice() && a.modulus == n) return &a;
  return nullptr;
}

inline VerifyResult verifyThreshold(const VarietyDescriptor& d, const Certificate& c) {
  const Json& w = c.witness;
  if (c.rule != ruleId(Rule::ExactThreshold) || c.kind != CertificateKind::UpperBound)
    return VerifyResult::fail("threshold witness on a foreign rule");
  if (!d.exactEqualsNef() || !d.nef) return VerifyResult::fail("descriptor is not ExactEqualsNef");
  const auto& cone = *d.nef;
  if (w.at("functionals").size() != cone.size()) return VerifyResult::fail("functional count differs");
  for (std::size_t k = 0; k < cone.size(); ++k)
    if (integersFromJson(w.at("functionals")[k]) != cone.functionals()[k])
      return VerifyResult::fail("functional " + std::to_string(k) + " differs");
  if (integersFromJson(w.at("canonical")) != d.canonical.coeffs()) return VerifyResult::fail("canonical differs");
  const auto& per = w.at("per_functional");
  if (per.size() != cone.size()) return VerifyResult::fail("per-functional list has wrong length");
  Integer mStar = 0;
  for (std::size_t k = 0; k < cone.size(); ++k) {
    const Json& e = per[k];
    if (e.at("functional").get<std::size_t>() != k) return VerifyResult::fail("per-functional order broken");
    const DivisorClass minimizer = DivisorClass::of(d.lattice, integersFromJson(e.at("minimizer")));
    if (!cone.strictlyContains(minimizer))
      return VerifyResult::fail("minimizer of functional " + std::to_string(k) + " is not ample");
    const Integer mu = integerFromJson(e.at("mu"));
    if (cone.value(k, minimizer) != mu) return VerifyResult::fail("mu does not match the minimizer value");
    // Integrality gives mu >= 1 on ample lattice points, so only mu = 1 is globally certified.
    if (mu != 1) return VerifyResult::fail("mu = " + mu.str() + " is not certifiable by integrality");
    const Integer phiK = cone.value(k, d.canonical);
    if (integerFromJson(e.at("value_on_canonical")) != phiK) return VerifyResult::fail("phi(K) differs");
    const Integer req = ceilDiv(-phiK, mu);
    if (integerFromJson(e.at("required_m")) != req) return VerifyResult::fail("required m differs");
    mStar = std::max(mStar, req);
  }
  if (w.at("m_star").get<std::int64_t>() != c.value || Integer(c.value) != mStar)
    return VerifyResult::fail("m* recomputes to " + mStar.str());
  return VerifyResult::pass();
}

inline VerifyResult verifyViolation(const VarietyDescriptor& d, const Certificate& c) {
  const Json& w = c.witness;
  if (c.kind != CertificateKind::LowerBoundWitness) return VerifyResult::fail("violation witness on an upper bound");
  if (c.rule != ruleId(Rule::ExactThreshold) && c.rule != ruleId(Rule::WitnessNotNef))
    return VerifyResult::fail("violation witness on a foreign rule");
  if (!d.nef) return VerifyResult::fail("nef cone unknown");
  const auto& tuple = w.at("tuple");
  if (static_cast<std::int64_t>(tuple.size()) != c.value - 1)
    return VerifyResult::fail("tuple size " + std::to_string(tuple.size()) + " does not witness conFN >= " +
                              std::to_string(c.value));
  DivisorClass adj = d.canonical;
  for (const auto& t : tuple) {
    DivisorClass l = DivisorClass::of(d.lattice, integersFromJson(t));
    if (!d.nef->strictlyContains(l)) return VerifyResult::fail("tuple member " + l.str(d.lattice) + " is not ample");
    adj += l;
  }
  if (integersFromJson(w.at("adjoint")) != adj.coeffs()) return VerifyResult::fail("adjoint differs");
  const auto k = w.at("functional").get<std::size_t>();
  if (k >= d.nef->size()) return VerifyResult::fail("functional index out of range");
  const Integer v = d.nef->value(k, adj);
  if (v >= 0 || integerFromJson(w.at("functional_value")) != v)
    return VerifyResult::fail("adjoint does not leave the nef cone");
  return VerifyResult::pass();
}

inline VerifyResult verifyNegativePairing(const VarietyDescriptor& d, const Certificate& c) {
  const Json& w = c.witness;
  if (c.rule != ruleId(Rule::WitnessNotNef) || c.kind != CertificateKind::LowerBoundWitness || c.value != 1)
    return VerifyResult::fail("negative pairing proves exactly conFN >= 1");
  if (d.dimension != 2) return VerifyResult::fail("pairing witness needs a surface");
  if (integersFromJson(w.at("class")) != d.canonical.coeffs()) return VerifyResult::fail("paired class is not K");
  const DivisorClass curve = DivisorClass::of(d.lattice, integersFromJson(w.at("curve")));
  if (std::find(d.effectiveCurves.begin(), d.effectiveCurves.end(), curve) == d.effectiveCurves.end())
    return VerifyResult::fail("curve is not a recorded effective class");
  const Integer p = d.form.evaluate({d.canonical, curve});
  if (p >= 0 || integerFromJson(w.at("pairing")) != p) return VerifyResult::fail("pairing is not negative");
  return VerifyResult::pass();
}

inline VerifyResult verifyDimensionOrFlag(const VarietyDescriptor& d, const Certificate& c) {
  const Json& w = c.witness;
  const auto n = static_cast<std::int64_t>(d.dimension);
  if (c.kind != CertificateKind::UpperBound) return VerifyResult::fail("bound witness on a lower bound");
  if (w.at("type") == "flag") {
    const auto flag = w.at("flag").get<std::string>();
    if (flag == "abelian" && c.rule == ruleId(Rule::Abelian))
      return d.flags.abelian && c.value == 2 ? VerifyResult::pass() : VerifyResult::fail("abelian gate");
    if (flag == "toric" && c.rule == ruleId(Rule::Toric))
      return d.flags.toric && c.value == n + 1 ? VerifyResult::pass() : VerifyResult::fail("toric gate");
    return VerifyResult::fail("unknown flag witness");
  }
  if (w.at("dimension").get<std::int64_t>() != n) return VerifyResult::fail("dimension differs");
  if (c.rule == ruleId(Rule::ReiderSurface))
    return n == 2 && c.value == 3 ? VerifyResult::pass() : VerifyResult::fail("surface bound");
  if (c.rule == ruleId(Rule::Threefold))
    return n == 3 && c.value == 4 ? VerifyResult::pass() : VerifyResult::fail("threefold bound");
  if (c.rule == ruleId(Rule::Universal))
    return c.value == (n * n + n + 2) / 2 ? VerifyResult::pass() : VerifyResult::fail("universal bound");
  return VerifyResult::fail("dimension witness on a foreign rule");
}

inline VerifyResult verifyReiderRefinement(const VarietyDescriptor& d, const Certificate& c) {
  const Json& w = c.witness;
  const auto type = w.at("type").get<std::string>();
  if (c.rule != ruleId(Rule::ReiderSurface) || c.kind != CertificateKind::UpperBound || c.value != 2 ||
      d.dimension != 2)
    return VerifyResult::fail("surface refinement gate");
  if (type == "even_form") {
    for (std::size_t i = 0; i < d.rank(); ++i)
      if (mod(d.form.entry({i, i}), 2) != 0) return VerifyResult::fail("diagonal entry is odd");
    return VerifyResult::pass();
  }
  if (type == "canonical_half") {
    DivisorClass half = DivisorClass::of(d.lattice, integersFromJson(w.at("half")));
    return Integer(2) * half == d.canonical ? VerifyResult::pass() : VerifyResult::fail("K is not 2D");
  }
  // no_unit_square
  const auto reason = w.at("reason").get<std::string>();
  if (reason == "annotation") {
    const auto* a = fullAnnotation(d, integerFromJson(w.at("modulus")));
    if (!a || a->modulus < 2 || !checkAnnotation(d.form, *a))
      return VerifyResult::fail("no verified full-lattice annotation with that modulus");
    return VerifyResult::pass();
  }
  if (reason == "rank_one") {
    if (d.rank() != 1 || !d.nef || d.nef->size() != 1) return VerifyResult::fail("not a rank-one nef ray");
    return d.form.entry({0, 0}) != 1 ? VerifyResult::pass() : VerifyResult::fail("generator has square 1");
  }
  return VerifyResult::fail("unknown no_unit_square reason");
}

inline VerifyResult verifyDivisibility(const VarietyDescriptor& d, const Certificate& c) {
  if (c.rule != ruleId(Rule::DivisibilityReider) || c.kind != CertificateKind::UpperBound || c.value != 1 ||
      d.dimension != 2)
    return VerifyResult::fail("divisibility gate");
  const Integer n = integerFromJson(c.witness.at("modulus"));
  const auto* a = fullAnnotation(d, n);
  if (n < 5 || !a || !checkAnnotation(d.form, *a)) return VerifyResult::fail("annotation N >= 5 not verified");
  return VerifyResult::pass();
}

inline VerifyResult verifyResidues(const VarietyDescriptor& d, const Certificate& c) {
  const Json& w = c.witness;
  if (c.rule != ruleId(Rule::BlowupCongruence) || c.kind != CertificateKind::UpperBound || c.value != 1)
    return VerifyResult::fail("blow-up gate");
  if (!isPointBlowupForm(d)) return VerifyResult::fail("not a one-point blow-up form");
  const auto& base = *d.provenance.construction->parents.at(0);
  const Integer n = integerFromJson(w.at("modulus"));
  const auto* a = fullAnnotation(base, n);
  if (!a || !checkAnnotation(base.form, *a)) return VerifyResult::fail("base annotation not verified");
  // Independent recomputation by direct loops.
  std::set<Integer> sq;
  for (Integer x = 0; x < n; ++x) sq.insert(mod(x * x, n));
  if (integersFromJson(w.at("square_residues")) != std::vector<Integer>(sq.begin(), sq.end()))
    return VerifyResult::fail("square residues differ");
  Integer least = -1;
  for (Integer a = 0; a < n; ++a) {
    // Smallest (M^2) in nZ exceeding a^2.
    const Integer m2 = (a * a / n + 1) * n;
    if (least < 0 || m2 - a * a < least) least = m2 - a * a;
  }
  if (integerFromJson(w.at("min_positive_square")) != least) return VerifyResult::fail("least (L^2) differs");
  Integer g = 0;
  for (Integer m = 1; m <= n; ++m)
    if (mod(m * m, n) == 0) g = gcd(g, m);
  if (integerFromJson(w.at("multiplicity_divisor")) != g) return VerifyResult::fail("multiplicity divisor differs");
  const Integer em = gcd(n, g);
  if (integerFromJson(w.at("exceptional_modulus")) != em) return VerifyResult::fail("exceptional modulus differs");
  if (em == 1) return VerifyResult::fail("exceptional case not excluded");
  if (least < 5) return VerifyResult::fail("(L^2) >= 5 not guaranteed");
  return VerifyResult::pass();
}

inline VerifyResult verifyH0(const VarietyDescriptor& d, const Certificate& c) {
  if (c.rule != ruleId(Rule::CanonicalNoSections) || c.kind != CertificateKind::LowerBoundWitness || c.value != 1)
    return VerifyResult::fail("h0 gate");
  DescriptorPtr self(std::shared_ptr<const VarietyDescriptor>(), &d);
  H0Fact f = kunnethH0Prover({self, d.canonical});
  if (f.value != H0Value::Zero) return VerifyResult::fail("h0(K) is not proved zero");
  if (f.derivation != c.witness.at("derivation")) return VerifyResult::fail("derivation differs");
  return VerifyResult::pass();
}

inline VerifyResult verifyProduct(const VarietyDescriptor& d, const Certificate& c, const ResolveOptions& opt) {
  if (c.rule != ruleId(Rule::ProductCombine) || d.kind() != ConstructionKind::Product)
    return VerifyResult::fail("product gate");
  const auto& tr = *d.provenance.construction;
  const auto& fs = c.witness.at("factors");
  std::int64_t maxLo = 0, maxHi = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    FujitaInterval iv = resolve(*tr.parents.at(i), opt.forParents());
    if (fs[i].at("lo").get<std::int64_t>() != iv.lo || fs[i].at("hi").get<std::int64_t>() != iv.hi)
      return VerifyResult::fail("factor interval differs on re-resolution");
    maxLo = std::max(maxLo, iv.lo);
    maxHi = std::max(maxHi, iv.hi);
  }
  if (c.kind == CertificateKind::LowerBoundWitness)
    return c.value == maxLo ? VerifyResult::pass() : VerifyResult::fail("lower bound is not the max");
  auto gate = productGate(d);
  if (!gate || c.witness.value("gate", std::string()) != *gate) return VerifyResult::fail("product gate absent");
  return c.value == maxHi ? VerifyResult::pass() : VerifyResult::fail("upper bound is not the max");
}

inline VerifyResult verifyCover(const VarietyDescriptor& d, const Certificate& c, const ResolveOptions& opt) {
  if (c.rule != ruleId(Rule::CoverBound) || c.kind != CertificateKind::UpperBound ||
      d.kind() != ConstructionKind::CyclicCover)
    return VerifyResult::fail("cover gate");
  const auto& tr = *d.provenance.construction;
  if (!tr.asserts("pic_pullback_iso")) return VerifyResult::fail("Pic pullback isomorphism not asserted");
  const std::int64_t hi = resolve(*tr.parents.at(0), opt.forParents()).hi;
  const Json& w = c.witness;
  if (w.at("parent_hi").get<std::int64_t>() != hi || w.at("degree").get<std::int64_t>() != tr.degree)
    return VerifyResult::fail("cover parameters differ");
  if (c.value != std::max<std::int64_t>(0, hi + 1 - tr.degree)) return VerifyResult::fail("cover bound differs");
  if (w.at("omega_ample_gg").get<bool>() != (tr.degree - 2 >= hi)) return VerifyResult::fail("omega flag differs");
  return VerifyResult::pass();
}

}  // namespace detail

/// Re-derives one certificate from the descriptor. `context` holds the rest of the trace;
/// only canonical_gg consults it.
inline VerifyResult verifyCertificate(const VarietyDescriptor& d, const Certificate& c,
                                      const std::vector<Certificate>& context = {},
                                      const ResolveOptions& opt = {}) {
  try {
    if (c.value < 0) return VerifyResult::fail("negative bound");
    const auto type = c.witness.at("type").get<std::string>();
    if (type == "threshold") return detail::verifyThreshold(d, c);
    if (type == "ample_tuple_violation") return detail::verifyViolation(d, c);
    if (type == "negative_pairing") return detail::verifyNegativePairing(d, c);
    if (type == "curve_point_witness") {
      if (c.rule != ruleId(Rule::Curve) || c.value != 2 || d.dimension != 1)
        return VerifyResult::fail("curve gate");
      const int g = detail::curveGenus(d);
      if (c.witness.at("genus").get<int>() != g || c.witness.at("adjoint_degree").get<int>() != 2 * g - 1 ||
          c.witness.at("ample_degree").get<int>() != 1)
        return VerifyResult::fail("curve degrees differ");
      return VerifyResult::pass();
    }
    if (type == "flag" || type == "dimension") return detail::verifyDimensionOrFlag(d, c);
    if (type == "even_form" || type == "canonical_half" || type == "no_unit_square")
      return detail::verifyReiderRefinement(d, c);
    if (type == "form_divisibility") return detail::verifyDivisibility(d, c);
    if (type == "blowup_residues") return detail::verifyResidues(d, c);
    if (type == "h0_vanishing") return detail::verifyH0(d, c);
    if (type == "product_factors") return detail::verifyProduct(d, c, opt);
    if (type == "cover_bound") return detail::verifyCover(d, c, opt);
    if (type == "canonical_gg") {
      if (c.rule != ruleId(Rule::CanonicalFree) || c.kind != CertificateKind::UpperBound || c.value != 0)
        return VerifyResult::fail("canonical gate");
      const auto src = c.witness.at("source").get<std::string>();
      bool kgg = src == "descriptor" && d.knownGloballyGenerated(d.canonical);
      bool prior = false;
      for (const auto& o : context) {
        if (&o == &c || o.rule == ruleId(Rule::CanonicalFree) || o.kind != CertificateKind::UpperBound) continue;
        if (!verifyCertificate(d, o, {}, opt).ok) continue;
        if (o.value <= 1) prior = true;
        if (src == "cover_bound" && o.rule == ruleId(Rule::CoverBound) && o.witness.value("omega_ample_gg", false))
          kgg = true;
      }
      if (!kgg) return VerifyResult::fail("K not shown globally generated");
      if (!prior) return VerifyResult::fail("no verified bound conFN <= 1 in the trace");
      return VerifyResult::pass();
    }
    return VerifyResult::fail("unknown witness type '" + type + "'");
  } catch (const std::exception& e) {
    return VerifyResult::fail(std::string("malformed witness: ") + e.what());
  }
}

/// Verifies every certificate and that lo/hi are the max/min of the certified values.
inline VerifyResult verifyInterval(const VarietyDescriptor& d, const FujitaInterval& iv,
                                   const ResolveOptions& opt = {}) {
  std::int64_t lo = 0, hi = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = 0; i < iv.certificates.size(); ++i) {
    const auto& c = iv.certificates[i];
    auto r = verifyCertificate(d, c, iv.certificates, opt);
    if (!r.ok) return VerifyResult::fail("certificate " + std::to_string(i) + " (" + c.rule + "): " + r.reason);
    if (c.kind == CertificateKind::UpperBound)
      hi = std::min(hi, c.value);
    else
      lo = std::max(lo, c.value);
  }
  if (lo != iv.lo || hi != iv.hi) return VerifyResult::fail("interval is not spanned by its certificates");
  return VerifyResult::pass();
}

}  // namespace confn

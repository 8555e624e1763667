#pragma once

#include <algorithm>
#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "confn/certificate.hpp"
#include "confn/cone.hpp"
#include "confn/core.hpp"
#include "confn/descriptor.hpp"
#include "confn/h0.hpp"

namespace confn {

/// Fixed application order: exact, structural, dimension-generic, then the canonical step.
enum class Rule : std::size_t {
  ExactThreshold,
  Curve,
  ProductCombine,
  CoverBound,
  WitnessNotNef,
  CanonicalNoSections,
  DivisibilityReider,
  BlowupCongruence,
  ReiderSurface,
  Abelian,
  Toric,
  Threefold,
  Universal,
  CanonicalFree,
  Count_
};

inline constexpr std::size_t kRuleCount = static_cast<std::size_t>(Rule::Count_);

inline const char* ruleId(Rule r) {
  static constexpr std::array<const char*, kRuleCount> names = {
      "exact_threshold",  "curve",           "product_combine",     "cover_bound", "witness_not_nef",
      "canonical_no_sections", "divisibility_reider", "blowup_congruence", "reider_surface", "abelian",
      "toric",            "threefold",       "universal",           "canonical_free"};
  return names[static_cast<std::size_t>(r)];
}

namespace cite {
inline const char* kExact =
    "globally generated iff nef: conFN = max(0, max_k ceil(-phi_k(K)/mu_k)), mu_k the least phi_k on ample classes";
inline const char* kCurve =
    "Riemann-Roch on curves: conFN(C) = 2 for every genus; omega_C(P) is not globally generated";
inline const char* kProductLower = "restriction to the fibres of both projections: conFN(X x Y) >= max";
inline const char* kProductUpper =
    "Kunneth formula with Pic(X x Y) = Pic(X) x Pic(Y): conFN(X x Y) = max{conFN(X), conFN(Y)}";
inline const char* kCover =
    "cyclic cover canonical formula omega_X = f*(omega_Y + (d-1)L): conFN(X) <= max(0, conFN(Y) + 1 - d)";
inline const char* kNotNef = "globally generated implies nef: a negative pairing excludes global generation";
inline const char* kNoSections = "a line bundle without global sections is not globally generated";
inline const char* kDivisibility =
    "Reider's theorem with intersection pairing in NZ, N >= 5: conFN(X) <= 1";
inline const char* kBlowup =
    "Reider's theorem on a one-point blow-up of a surface with pairing in NZ: (L^2) bound and "
    "exceptional curves excluded by congruences";
inline const char* kReider1 = "Reider's theorem: conFN(X) <= 3 for every smooth projective surface";
inline const char* kReiderEven = "Reider's theorem with even intersection pairing: conFN(X) <= 2";
inline const char* kReiderHalf = "Reider's theorem with K numerically 2D: conFN(X) <= 2";
inline const char* kReiderUnit =
    "Reider's theorem: conFN(X) = 3 forces an ample L with (L^2) = 1, and none exists";
inline const char* kAbelian = "theorem of the square with Kodaira vanishing: conFN(A) <= 2 for abelian varieties";
inline const char* kToric = "Mustata's vanishing on toric varieties: conFN(X) <= dim(X) + 1";
inline const char* kThreefold = "Helmke's criterion on threefolds: conFN(X) <= 4";
inline const char* kUniversal = "Angehrn-Siu criterion: conFN(X) <= (n^2 + n + 2)/2";
inline const char* kCanonicalFree = "conFN(X) <= 1 with globally generated canonical bundle gives conFN(X) = 0";
}  // namespace cite

struct ResolveOptions {
  int searchRadius = kDefaultSearchRadius;
  /// Universal is applied regardless, so hi is always finite.
  std::bitset<kRuleCount> enabled = std::bitset<kRuleCount>().set();

  bool on(Rule r) const { return r == Rule::Universal || enabled.test(static_cast<std::size_t>(r)); }

  /// Construction parents are always resolved with every rule; the subset only governs the variety itself.
  ResolveOptions forParents() const {
    ResolveOptions o;
    o.searchRadius = searchRadius;
    return o;
  }
};

/// Bounds contributed by one rule application.
struct RuleOutcome {
  std::vector<Certificate> certificates;
  std::vector<std::string> advisories;
};

inline FujitaInterval resolve(const VarietyDescriptor& d, const ResolveOptions& opt = {});
inline FujitaInterval resolve(const DescriptorPtr& d, const ResolveOptions& opt = {}) { return resolve(*d, opt); }

namespace detail {

inline Certificate upper(Rule r, std::int64_t v, const char* citation, std::vector<std::string> premises,
                         Json witness) {
  return {CertificateKind::UpperBound, ruleId(r), v, citation, std::move(premises), std::move(witness)};
}

inline Certificate lower(Rule r, std::int64_t v, const char* citation, std::vector<std::string> premises,
                         Json witness) {
  return {CertificateKind::LowerBoundWitness, ruleId(r), v, citation, std::move(premises), std::move(witness)};
}

inline Json tupleJson(const std::vector<DivisorClass>& tuple) {
  Json t = Json::array();
  for (const auto& c : tuple) t.push_back(toJson(c.coeffs()));
  return t;
}

inline Json functionalsJson(const ConeByFunctionals& cone) {
  Json f = Json::array();
  for (const auto& phi : cone.functionals()) f.push_back(toJson(phi));
  return f;
}

inline Json violationWitness(const VarietyDescriptor& d, const std::vector<DivisorClass>& tuple) {
  DivisorClass adj = d.canonical;
  for (const auto& l : tuple) adj += l;
  std::size_t k = 0;
  for (; k < d.nef->size(); ++k)
    if (d.nef->value(k, adj) < 0) break;
  Json w;
  w["type"] = "ample_tuple_violation";
  w["tuple"] = tupleJson(tuple);
  w["adjoint"] = toJson(adj.coeffs());
  w["functional"] = k;
  w["functional_value"] = toJson(d.nef->value(k, adj));
  return w;
}

inline bool isProjectiveSpace(const VarietyDescriptor& d) {
  if (d.provenance.constructor == "projective_space") return true;
  return d.provenance.constructor == "curve" && d.flags.curveGenus == 0;
}

inline bool isTrueRank1Generator(const VarietyDescriptor& d) {
  return d.rank() == 1 && d.nef && d.nef->size() == 1;
}

/// Interior minima for every nef functional, or nullopt with a reason when one is inconclusive.
inline std::optional<std::vector<InteriorMinimum>> certifiedMinima(const VarietyDescriptor& d, int radius,
                                                                   std::string* why) {
  std::vector<InteriorMinimum> mus;
  for (std::size_t k = 0; k < d.nef->size(); ++k) {
    auto m = minInteriorValue(*d.nef, k, radius);
    if (!m.usable()) {
      if (why) *why = "functional " + std::to_string(k + 1) + ": " + m.note;
      return std::nullopt;
    }
    mus.push_back(std::move(m));
  }
  return mus;
}

}  // namespace detail

/// Exact conFN when global generation coincides with nefness.
inline std::optional<RuleOutcome> ruleExactThreshold(const VarietyDescriptor& d,
                                                     int radius = kDefaultSearchRadius) {
  if (!d.exactEqualsNef() || !d.nef) return std::nullopt;
  std::string why;
  auto mus = detail::certifiedMinima(d, radius, &why);
  if (!mus) throw InconclusiveError("exact threshold: " + why);
  ThresholdReport rep = adjointFreenessThreshold(*d.nef, d.canonical, *mus);
  const std::int64_t mStar = detail::toInt64(rep.mStar, "threshold");

  Json w;
  w["type"] = "threshold";
  w["functionals"] = detail::functionalsJson(*d.nef);
  w["canonical"] = toJson(d.canonical.coeffs());
  w["per_functional"] = Json::array();
  for (std::size_t k = 0; k < rep.perFunctional.size(); ++k) {
    const auto& ft = rep.perFunctional[k];
    Json e;
    e["functional"] = ft.functional;
    e["value_on_canonical"] = toJson(ft.valueOnCanonical);
    e["mu"] = toJson(ft.mu);
    e["minimizer"] = toJson((*mus)[k].minimizer->coeffs());
    e["mu_status"] = (*mus)[k].status == SearchStatus::Certified ? "certified" : "supplied";
    e["required_m"] = toJson(ft.requiredM);
    w["per_functional"].push_back(e);
  }
  w["m_star"] = mStar;

  RuleOutcome out;
  const auto& just = std::get<GgExactEqualsNef>(d.gg).justification;
  out.certificates.push_back(detail::upper(
      Rule::ExactThreshold, mStar, cite::kExact,
      {"globally generated iff nef: " + just, "mu_k >= 1 by integrality, so every s >= m* also works"}, w));
  if (mStar >= 1)
    out.certificates.push_back(detail::lower(Rule::ExactThreshold, mStar, cite::kExact,
                                             {"globally generated iff nef: " + just},
                                             detail::violationWitness(d, rep.witness)));
  return out;
}

inline std::optional<RuleOutcome> ruleCurve(const VarietyDescriptor& d) {
  if (d.dimension != 1) return std::nullopt;
  const int g = detail::curveGenus(d);
  Json w;
  w["type"] = "curve_point_witness";
  w["genus"] = g;
  w["ample_degree"] = 1;
  w["adjoint_degree"] = 2 * g - 1;
  RuleOutcome out;
  out.certificates.push_back(detail::upper(Rule::Curve, 2, cite::kCurve, {"dimension 1"}, w));
  out.certificates.push_back(
      detail::lower(Rule::Curve, 2, cite::kCurve, {"dimension 1", "L = O_C(P) has degree 1"}, w));
  return out;
}

inline std::optional<RuleOutcome> ruleAbelian(const VarietyDescriptor& d) {
  if (!d.flags.abelian) return std::nullopt;
  Json w;
  w["type"] = "flag";
  w["flag"] = "abelian";
  RuleOutcome out;
  out.certificates.push_back(detail::upper(Rule::Abelian, 2, cite::kAbelian, {"flag abelian"}, w));
  return out;
}

inline std::optional<RuleOutcome> ruleToric(const VarietyDescriptor& d) {
  if (!d.flags.toric) return std::nullopt;
  Json w;
  w["type"] = "flag";
  w["flag"] = "toric";
  w["dimension"] = d.dimension;
  RuleOutcome out;
  out.certificates.push_back(detail::upper(Rule::Toric, static_cast<std::int64_t>(d.dimension) + 1,
                                           cite::kToric, {"flag toric"}, w));
  return out;
}

inline std::optional<RuleOutcome> ruleThreefold(const VarietyDescriptor& d) {
  if (d.dimension != 3) return std::nullopt;
  Json w;
  w["type"] = "dimension";
  w["dimension"] = 3;
  w["inequalities"] = "m >= 4 ample summands give (L^3) >= m^3 > 27, (L^2.S) >= m^2 >= 9, (L.C) >= m >= 3";
  RuleOutcome out;
  out.certificates.push_back(detail::upper(Rule::Threefold, 4, cite::kThreefold, {"dimension 3"}, w));
  return out;
}

inline std::int64_t universalBound(std::int64_t n) { return (n * n + n + 2) / 2; }

inline std::optional<RuleOutcome> ruleUniversal(const VarietyDescriptor& d) {
  const auto n = static_cast<std::int64_t>(d.dimension);
  Json w;
  w["type"] = "dimension";
  w["dimension"] = n;
  RuleOutcome out;
  out.certificates.push_back(detail::upper(Rule::Universal, universalBound(n), cite::kUniversal,
                                           {"dimension " + std::to_string(n)}, w));
  return out;
}

inline std::optional<RuleOutcome> ruleReiderSurface(const VarietyDescriptor& d) {
  if (d.dimension != 2) return std::nullopt;
  RuleOutcome out;
  {
    Json w;
    w["type"] = "dimension";
    w["dimension"] = 2;
    out.certificates.push_back(detail::upper(Rule::ReiderSurface, 3, cite::kReider1, {"dimension 2"}, w));
  }
  bool refined = false;
  if (isEvenForm(d.form)) {
    Json w;
    w["type"] = "even_form";
    Json diag = Json::array();
    for (std::size_t i = 0; i < d.rank(); ++i) diag.push_back(toJson(d.form.entry({i, i})));
    w["diagonal"] = diag;
    out.certificates.push_back(
        detail::upper(Rule::ReiderSurface, 2, cite::kReiderEven, {"every (D^2) is even"}, w));
    refined = true;
  }
  const bool kEven = std::all_of(d.canonical.coeffs().begin(), d.canonical.coeffs().end(),
                                 [](const Integer& c) { return detail::mod(c, 2) == 0; });
  if (kEven) {
    Json w;
    w["type"] = "canonical_half";
    std::vector<Integer> half;
    for (const auto& c : d.canonical.coeffs()) half.push_back(c / 2);
    w["half"] = toJson(half);
    out.certificates.push_back(
        detail::upper(Rule::ReiderSurface, 2, cite::kReiderHalf, {"K = 2D in the lattice"}, w));
    refined = true;
  }
  if (refined) return out;

  // Necessary condition for conFN = 3: an ample L with (L^2) = 1.
  for (const auto& a : d.annotations) {
    if (a.fullLattice() && a.modulus >= 2) {
      Json w;
      w["type"] = "no_unit_square";
      w["reason"] = "annotation";
      w["modulus"] = toJson(a.modulus);
      out.certificates.push_back(detail::upper(Rule::ReiderSurface, 2, cite::kReiderUnit,
                                               {"all (L^2) divisible by " + a.modulus.str()}, w));
      return out;
    }
  }
  if (detail::isTrueRank1Generator(d)) {
    const Integer sq = d.form.entry({0, 0});
    if (sq != 1) {
      Json w;
      w["type"] = "no_unit_square";
      w["reason"] = "rank_one";
      w["generator_square"] = toJson(sq);
      out.certificates.push_back(detail::upper(Rule::ReiderSurface, 2, cite::kReiderUnit,
                                               {"ample classes are aH, a >= 1, with (aH)^2 = a^2 (H^2)"}, w));
    }
    return out;
  }
  if (!d.nef) {
    out.advisories.push_back("reider clause (ii): search for an ample class of square 1 skipped, nef cone unknown");
    return out;
  }
  std::optional<DivisorClass> unit;
  if (d.nef->enumerable() && detail::boxSize(d.rank(), 8) <= detail::kEnumerationBudget) {
    for (int r = 1; r <= 8 && !unit; ++r)
      detail::forEachShellPoint(d.rank(), r, [&](const detail::Point& p) {
        for (std::size_t j = 0; j < d.nef->size(); ++j)
          if (d.nef->smallValue(j, p) < 1) return true;
        DivisorClass l = d.nef->classAt(p);
        if (d.form.selfIntersection(l, 2) == 1) {
          unit = l;
          return false;
        }
        return true;
      });
    if (unit)
      out.advisories.push_back("reider clause (ii): ample class " + unit->str(d.lattice) +
                               " has square 1, conFN = 3 not excluded");
    else
      out.advisories.push_back(
          "reider clause (ii): no ample class of square 1 within radius 8 (advisory only, not a bound)");
  } else {
    out.advisories.push_back("reider clause (ii): search skipped, lattice too large");
  }
  return out;
}

inline std::optional<RuleOutcome> ruleDivisibilityReider(const VarietyDescriptor& d) {
  if (d.dimension != 2) return std::nullopt;
  const DivisibilityAnnotation* best = nullptr;
  for (const auto& a : d.annotations)
    if (a.fullLattice() && a.modulus >= 5 && (!best || a.modulus > best->modulus)) best = &a;
  if (!best) return std::nullopt;
  Json w;
  w["type"] = "form_divisibility";
  w["modulus"] = toJson(best->modulus);
  w["exceptional_case"] = "N divides (L.C) - (C^2), so (L.C) - (C^2) = 1 is impossible";
  RuleOutcome out;
  out.certificates.push_back(detail::upper(Rule::DivisibilityReider, 1, cite::kDivisibility,
                                           {"pairing values in " + best->modulus.str() + "Z",
                                            "(L^2) >= N >= 5 for ample L"},
                                           w));
  return out;
}

/// Congruence data for a one-point blow-up of a surface whose pairing lies in NZ.
struct BlowupResidueAnalysis {
  Integer modulus;
  std::vector<Integer> squareResidues;
  /// Least positive value of (M^2) - a^2 with (M^2) in NZ.
  Integer minPositiveSquare;
  /// gcd of all multiplicities m with m^2 = 0 mod N.
  Integer multiplicityDivisor;
  /// (L.C') = (M.C) - a m is divisible by this.
  Integer exceptionalModulus;
  bool exceptionalExcluded = false;
  bool reiderApplies = false;

  bool valid() const { return exceptionalExcluded && reiderApplies; }
};

inline std::vector<Integer> squaresMod(const Integer& n) {
  std::set<Integer> s;
  for (Integer x = 0; x < n; ++x) s.insert(detail::mod(x * x, n));
  return {s.begin(), s.end()};
}

inline BlowupResidueAnalysis blowupResidueAnalysis(const Integer& n) {
  if (n < 2) throw Error("modulus must be >= 2");
  BlowupResidueAnalysis a;
  a.modulus = n;
  a.squareResidues = squaresMod(n);
  a.minPositiveSquare = -1;
  for (const auto& s : a.squareResidues) {
    Integer v = s == 0 ? n : n - s;
    if (a.minPositiveSquare < 0 || v < a.minPositiveSquare) a.minPositiveSquare = v;
  }
  Integer g = n;
  for (Integer m = 0; m < n; ++m)
    if (detail::mod(m * m, n) == 0) g = gcd(g, m);
  a.multiplicityDivisor = g;
  a.exceptionalModulus = gcd(n, g);
  a.exceptionalExcluded = detail::mod(Integer(1), a.exceptionalModulus) != 0;
  a.reiderApplies = a.minPositiveSquare >= 5;
  return a;
}

inline Json residueJson(const BlowupResidueAnalysis& a) {
  Json w;
  w["type"] = "blowup_residues";
  w["modulus"] = toJson(a.modulus);
  w["square_residues"] = toJson(a.squareResidues);
  w["min_positive_square"] = toJson(a.minPositiveSquare);
  w["multiplicity_divisor"] = toJson(a.multiplicityDivisor);
  w["exceptional_modulus"] = toJson(a.exceptionalModulus);
  w["exceptional_excluded"] = a.exceptionalExcluded;
  return w;
}

inline bool isPointBlowupForm(const VarietyDescriptor& d) {
  if (d.kind() != ConstructionKind::BlowupPoint || d.dimension != 2) return false;
  const std::size_t e = d.rank() - 1;
  if (d.form.entry({e, e}) != -1) return false;
  for (std::size_t i = 0; i < e; ++i)
    if (d.form.entry({i, e}) != 0) return false;
  return true;
}

inline std::optional<RuleOutcome> ruleBlowupCongruence(const VarietyDescriptor& d) {
  if (!isPointBlowupForm(d)) return std::nullopt;
  const auto& base = *d.provenance.construction->parents.at(0);
  std::optional<BlowupResidueAnalysis> best;
  for (const auto& ann : base.annotations) {
    if (!ann.fullLattice()) continue;
    auto a = blowupResidueAnalysis(ann.modulus);
    if (a.valid() && (!best || a.modulus > best->modulus)) best = a;
  }
  if (!best) return std::nullopt;
  RuleOutcome out;
  out.certificates.push_back(detail::upper(
      Rule::BlowupCongruence, 1, cite::kBlowup,
      {"Pic of the blow-up is f*Pic(S) + ZE with (E^2) = -1", "pairing on S in " + best->modulus.str() + "Z",
       "(L^2) >= " + best->minPositiveSquare.str() + " >= 5"},
      residueJson(*best)));
  return out;
}

inline std::optional<RuleOutcome> ruleWitnessNotNef(const VarietyDescriptor& d, int radius = kDefaultSearchRadius) {
  RuleOutcome out;
  if (d.dimension == 2) {
    for (const auto& c : d.effectiveCurves) {
      Integer pairing = d.form.evaluate({d.canonical, c});
      if (pairing < 0) {
        Json w;
        w["type"] = "negative_pairing";
        w["tuple"] = Json::array();
        w["class"] = toJson(d.canonical.coeffs());
        w["curve"] = toJson(c.coeffs());
        w["pairing"] = toJson(pairing);
        out.certificates.push_back(detail::lower(Rule::WitnessNotNef, 1, cite::kNotNef,
                                                 {"effective curve " + c.str(d.lattice)}, w));
        break;
      }
    }
  }
  if (d.nef) {
    std::string why;
    auto mus = d.nef->pointed() ? detail::certifiedMinima(d, radius, &why) : std::nullopt;
    if (mus) {
      auto rep = adjointFreenessThreshold(*d.nef, d.canonical, *mus);
      if (rep.mStar >= 1)
        out.certificates.push_back(detail::lower(Rule::WitnessNotNef, detail::toInt64(rep.mStar, "threshold"),
                                                 cite::kNotNef, {"adjoint leaves the nef cone"},
                                                 detail::violationWitness(d, rep.witness)));
    } else if (!why.empty()) {
      out.advisories.push_back("witness_not_nef: interior minimum not certified (" + why + ")");
    }
  }
  if (out.certificates.empty() && out.advisories.empty()) return std::nullopt;
  return out;
}

inline std::optional<RuleOutcome> ruleCanonicalNoSections(const DescriptorPtr& d) {
  const auto kind = d->kind();
  if (kind != ConstructionKind::Product && kind != ConstructionKind::CyclicCover) return std::nullopt;
  H0Fact f = kunnethH0Prover({d, d->canonical});
  if (f.value != H0Value::Zero) return std::nullopt;
  Json w;
  w["type"] = "h0_vanishing";
  w["derivation"] = f.derivation;
  RuleOutcome out;
  out.certificates.push_back(
      detail::lower(Rule::CanonicalNoSections, 1, cite::kNoSections, {"h0(omega_X) = 0"}, w));
  return out;
}

namespace detail {

inline Json factorJson(const VarietyDescriptor& f, const FujitaInterval& i) {
  Json j;
  j["constructor"] = f.provenance.constructor;
  j["dimension"] = f.dimension;
  j["lo"] = i.lo;
  j["hi"] = i.hi;
  return j;
}

inline std::optional<std::string> productGate(const VarietyDescriptor& d) {
  const auto& tr = *d.provenance.construction;
  if (tr.parents.at(1)->flags.irregularityZero) return "second factor has H^1(O) = 0";
  if (tr.parents.at(0)->flags.irregularityZero) return "first factor has H^1(O) = 0";
  if (tr.asserts("no_common_isogeny_factor")) return "asserted: Pic^0 factors share no isogeny factor";
  return std::nullopt;
}

}  // namespace detail

inline std::optional<RuleOutcome> ruleProductCombine(const VarietyDescriptor& d, const ResolveOptions& opt = {}) {
  if (d.kind() != ConstructionKind::Product) return std::nullopt;
  const auto& tr = *d.provenance.construction;
  const auto& x = *tr.parents.at(0);
  const auto& y = *tr.parents.at(1);
  FujitaInterval ix = resolve(x, opt.forParents()), iy = resolve(y, opt.forParents());
  Json w;
  w["type"] = "product_factors";
  w["factors"] = Json::array({detail::factorJson(x, ix), detail::factorJson(y, iy)});
  RuleOutcome out;
  out.certificates.push_back(detail::lower(Rule::ProductCombine, std::max(ix.lo, iy.lo), cite::kProductLower,
                                           {"unconditional"}, w));
  if (auto gate = detail::productGate(d)) {
    Json wu = w;
    wu["gate"] = *gate;
    out.certificates.push_back(
        detail::upper(Rule::ProductCombine, std::max(ix.hi, iy.hi), cite::kProductUpper, {*gate}, wu));
  } else {
    out.advisories.push_back("product_combine: no gate (H^1(O) = 0 or isogeny assertion), upper bound not combined");
  }
  return out;
}

inline std::optional<RuleOutcome> ruleCoverBound(const VarietyDescriptor& d, const ResolveOptions& opt = {}) {
  if (d.kind() != ConstructionKind::CyclicCover) return std::nullopt;
  const auto& tr = *d.provenance.construction;
  if (!tr.asserts("pic_pullback_iso")) return std::nullopt;
  FujitaInterval iy = resolve(*tr.parents.at(0), opt.forParents());
  const std::int64_t bound = std::max<std::int64_t>(0, iy.hi + 1 - tr.degree);
  Json w;
  w["type"] = "cover_bound";
  w["parent_hi"] = iy.hi;
  w["degree"] = tr.degree;
  w["omega_ample_gg"] = tr.degree - 2 >= iy.hi;
  std::vector<std::string> premises;
  for (const auto& a : tr.assertions) premises.push_back("asserted " + a.name + ": " + a.citation);
  if (tr.degree - 2 >= iy.hi) premises.push_back("d - 2 >= conFN(Y): omega_X is ample and globally generated");
  RuleOutcome out;
  out.certificates.push_back(detail::upper(Rule::CoverBound, bound, cite::kCover, premises, w));
  return out;
}

/// Whether K is globally generated by the descriptor data or by a certificate already collected.
inline std::optional<std::string> canonicalGgSource(const VarietyDescriptor& d,
                                                    const std::vector<Certificate>& certs) {
  if (d.knownGloballyGenerated(d.canonical)) return "descriptor";
  for (const auto& c : certs)
    if (c.rule == ruleId(Rule::CoverBound) && c.witness.value("omega_ample_gg", false)) return "cover_bound";
  return std::nullopt;
}

inline std::optional<RuleOutcome> ruleCanonicalFree(const VarietyDescriptor& d, std::int64_t currentHi,
                                                    const std::vector<Certificate>& certs) {
  if (currentHi > 1 || currentHi == 0) return std::nullopt;
  auto src = canonicalGgSource(d, certs);
  if (!src) return std::nullopt;
  Json w;
  w["type"] = "canonical_gg";
  w["source"] = *src;
  w["prior_bound"] = currentHi;
  RuleOutcome out;
  out.certificates.push_back(detail::upper(Rule::CanonicalFree, 0, cite::kCanonicalFree,
                                           {"K globally generated (" + *src + ")", "conFN <= 1"}, w));
  return out;
}

namespace detail {

inline std::string dumpInterval(const VarietyDescriptor& d, const FujitaInterval& i) {
  std::ostringstream out;
  out << "resolver inconsistency on " << d.provenance.constructor << " (dim " << d.dimension << ", rank "
      << d.rank() << "): lo=" << i.lo << " > hi=" << i.hi << "\n";
  for (const auto& c : i.certificates) out << "  " << c.toJson().dump() << "\n";
  return out.str();
}

}  // namespace detail

inline FujitaInterval resolve(const VarietyDescriptor& d, const ResolveOptions& opt) {
  FujitaInterval iv;
  auto merge = [&](std::optional<RuleOutcome> o) {
    if (!o) return;
    for (auto& c : o->certificates) {
      if (c.kind == CertificateKind::UpperBound)
        iv.hi = std::min(iv.hi, c.value);
      else
        iv.lo = std::max(iv.lo, c.value);
      iv.certificates.push_back(std::move(c));
    }
    for (auto& a : o->advisories) iv.advisories.push_back(std::move(a));
  };
  // Rules that need a shared pointer receive a non-owning alias.
  DescriptorPtr self(std::shared_ptr<const VarietyDescriptor>(), &d);

  for (std::size_t i = 0; i < kRuleCount; ++i) {
    const Rule r = static_cast<Rule>(i);
    if (!opt.on(r)) continue;
    try {
      switch (r) {
        case Rule::ExactThreshold: merge(ruleExactThreshold(d, opt.searchRadius)); break;
        case Rule::Curve: merge(ruleCurve(d)); break;
        case Rule::ProductCombine: merge(ruleProductCombine(d, opt)); break;
        case Rule::CoverBound: merge(ruleCoverBound(d, opt)); break;
        case Rule::WitnessNotNef: merge(ruleWitnessNotNef(d, opt.searchRadius)); break;
        case Rule::CanonicalNoSections: merge(ruleCanonicalNoSections(self)); break;
        case Rule::DivisibilityReider: merge(ruleDivisibilityReider(d)); break;
        case Rule::BlowupCongruence: merge(ruleBlowupCongruence(d)); break;
        case Rule::ReiderSurface: merge(ruleReiderSurface(d)); break;
        case Rule::Abelian: merge(ruleAbelian(d)); break;
        case Rule::Toric: merge(ruleToric(d)); break;
        case Rule::Threefold: merge(ruleThreefold(d)); break;
        case Rule::Universal: merge(ruleUniversal(d)); break;
        case Rule::CanonicalFree: merge(ruleCanonicalFree(d, iv.hi, iv.certificates)); break;
        case Rule::Count_: break;
      }
    } catch (const InconclusiveError& e) {
      iv.advisories.push_back(std::string(ruleId(r)) + " skipped: " + e.what());
    }
  }

  if (d.flags.toric && iv.exact() && iv.hi == static_cast<std::int64_t>(d.dimension) + 1 &&
      !detail::isProjectiveSpace(d))
    iv.advisories.push_back("toric strictness violated: conFN = dim + 1 on a toric variety other than P^n "
                            "(probable modeling bug)");
  if (iv.lo > iv.hi) throw InconsistencyError(detail::dumpInterval(d, iv));
  return iv;
}

}  // namespace confn

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "confn/constructions.hpp"
#include "confn/engine.hpp"

namespace confn {

struct PipelineResult {
  DescriptorPtr descriptor;
  FujitaInterval interval;
  std::int64_t target = 0;
  /// interval is exactly [target, target].
  bool achieved = false;
  std::vector<std::string> notes;
  std::optional<BlowupResidueAnalysis> residues;
};

namespace detail {

inline PipelineResult finishPipeline(DescriptorPtr d, std::int64_t target, const ResolveOptions& opt) {
  PipelineResult r;
  r.descriptor = std::move(d);
  r.interval = resolve(*r.descriptor, opt);
  r.target = target;
  r.achieved = r.interval.exact() && r.interval.lo == target;
  if (!r.achieved)
    r.notes.push_back("resolved [" + std::to_string(r.interval.lo) + ", " + std::to_string(r.interval.hi) +
                      "], target " + std::to_string(target) + " not certified");
  return r;
}

}  // namespace detail

/// Surface with conFN = 1: blow-up of a point on a surface whose pairing lies in 24Z.
inline PipelineResult pipelineN2K1(const DescriptorPtr& s24, const ResolveOptions& opt = {}) {
  if (s24->dimension != 2) throw ConstructionError("pipeline_n2k1 needs a surface");
  bool has24 = false;
  std::string found;
  for (const auto& a : s24->annotations) {
    if (!a.fullLattice()) continue;
    if (a.modulus == 24) has24 = true;
    found += (found.empty() ? "" : ", ") + a.modulus.str();
  }
  if (!has24)
    throw ConstructionError("pipeline_n2k1 needs a full-lattice annotation N = 24 (found: " +
                            (found.empty() ? std::string("none") : found) +
                            "); the residue certificate is specific to 24");
  PipelineResult r = detail::finishPipeline(blowupPoint(s24), 1, opt);
  r.residues = blowupResidueAnalysis(24);
  return r;
}

/// Threefold with conFN = 1: double cover of S x P^1 branched in |2(M + O(1))|.
inline PipelineResult pipelineN3K1(const DescriptorPtr& s, const DivisorClass& m, const ResolveOptions& opt = {}) {
  if (s->dimension != 2) throw ConstructionError("pipeline_n3k1 needs a surface");
  const std::int64_t hiS = resolve(*s, opt).hi;
  if (hiS > 2)
    throw ConstructionError("pipeline_n3k1 requires conFN(S) <= 2, resolved upper bound is " + std::to_string(hiS));
  if (!s->nef || !s->nef->strictlyContains(m))
    throw ConstructionError("M = " + m.str(s->lattice) + " must be ample on S");
  auto p1 = projectiveSpace(1);
  auto y = product(s, p1);
  std::vector<Integer> lc = m.coeffs();
  lc.push_back(1);
  const DivisorClass l = DivisorClass::of(y->lattice, lc);

  // omega_Y(B) = (K_S + 2M) box O_P1(0), globally generated because conFN(S) <= 2.
  const DivisorClass gate = y->canonical + Integer(2) * l;
  if (gate.coeffs().back() != 0)
    throw ConstructionError("effective Noether-Lefschetz gate: P^1 component of omega_Y(B) is not trivial");
  auto r = detail::finishPipeline(cyclicCover(y, l, 2, {"very_ample", "effective_nl_gate"}), 1, opt);
  r.notes.push_back("omega_Y(B) = pr*(K_S + 2M) is globally generated since conFN(S) <= " + std::to_string(hiS) +
                    " and M + M is a sum of two ample classes");
  return r;
}

/// Fujita simple surface: very general member of |pH| on a threefold.
inline PipelineResult pipelineFujitaSimpleSurface(const DescriptorPtr& y, const DivisorClass& h, std::int64_t p,
                                                  const ResolveOptions& opt = {}) {
  return detail::finishPipeline(hypersurfaceSection(y, h, p, opt), 0, opt);
}

/// Fujita simple variety: degree-d cyclic cover with d >= conFN(Y) + 2.
inline PipelineResult pipelineFujitaSimpleVariety(const DescriptorPtr& y, const DivisorClass& l, std::int64_t d,
                                                  const std::vector<std::string>& assertions = {},
                                                  const ResolveOptions& opt = {}) {
  const std::int64_t hiY = resolve(*y, opt).hi;
  auto r = detail::finishPipeline(cyclicCover(y, l, d, assertions), 0, opt);
  if (d < hiY + 2)
    r.notes.push_back("d = " + std::to_string(d) + " is below conFN(Y) + 2 = " + std::to_string(hiY + 2) +
                      "; the cover bound alone does not give 0");
  return r;
}

}  // namespace confn

#pragma once

#include <sstream>
#include <string>

#include "confn/dsl/eval.hpp"

namespace confn::dsl {

/// The built-in example suite as a descriptor program. Row names double as table labels.
inline std::string corpusProgram() {
  std::ostringstream p;
  p << "# Projective spaces: conFN(P^n) = n + 1\n";
  for (int n = 1; n <= 6; ++n)
    p << "let P" << n << " = projective_space(" << n << ")\nassert_confn P" << n << " = " << n + 1 << "\n";

  p << "\n# Complete intersections: conFN = max(0, n + r + 1 - sum d_i)\n";
  for (int n = 3; n <= 5; ++n) {
    for (int d = 1; d <= 8; ++d)
      p << "let ci_n" << n << "_d" << d << " = complete_intersection(" << n << ", degrees=[" << d << "])\n"
        << "assert_confn ci_n" << n << "_d" << d << " = " << std::max(0, n + 2 - d) << "\n";
    for (int d1 = 1; d1 <= 8; ++d1)
      for (int d2 = d1; d2 <= 8; ++d2)
        p << "let ci_n" << n << "_d" << d1 << "_" << d2 << " = complete_intersection(" << n << ", degrees=[" << d1
          << ", " << d2 << "])\n"
          << "assert_confn ci_n" << n << "_d" << d1 << "_" << d2 << " = " << std::max(0, n + 3 - d1 - d2) << "\n";
  }

  p << R"(
# Toric and very general surfaces
let hirzebruch1 = hirzebruch1()
assert_confn hirzebruch1 = 2
let delpezzo7 = delpezzo7()
assert_confn delpezzo7 = 1
let quintic_surface = complete_intersection(2, degrees=[5], assume=[very_general])
assert_confn quintic_surface = 0

# Curves: conFN = 2 for every genus
let curve_g0 = curve(0)
assert_confn curve_g0 = 2
let curve_g1 = curve(1)
assert_confn curve_g1 = 2
let curve_g3 = curve(3)
assert_confn curve_g3 = 2
let curve_g5 = curve(5)
assert_confn curve_g5 = 2

# Abelian varieties: conFN <= 2, no lower bound beyond 0 except for curves
let abelian1 = abelian(1)
assert_confn abelian1 = 2
let abelian2 = abelian(2)
assert_confn abelian2 in [0, 2]
let abelian3 = abelian(3)
assert_confn abelian3 in [0, 2]
let abelian2_sq = product(abelian2, abelian2)
assert_confn abelian2_sq in [0, 11]
let abelian2_sq_gated = product(abelian2, abelian2, assume=[no_common_isogeny_factor])
assert_confn abelian2_sq_gated in [0, 2]

# Products
let f1_x_p1 = product(hirzebruch1, P1)
assert_confn f1_x_p1 = 2
let dp7_x_p2 = product(delpezzo7, P2)
assert_confn dp7_x_p2 = 3
let dp7_x_dp7 = product(delpezzo7, delpezzo7)
assert_confn dp7_x_dp7 = 1
let p1_x_p1 = product(P1, P1)
assert_confn p1_x_p1 = 2
let elliptic_x_p1 = product(curve_g1, P1)
assert_confn elliptic_x_p1 = 2

# Synthetic surfaces
let plain_surface = custom(dim=2, basis=[H], entries=[[H, H, 1]], canonical=H)
assert_confn plain_surface in [0, 3]
let even_surface = custom(dim=2, basis=[A, B], entries=[[A, A, 2], [B, B, -2]], canonical=A + B)
assert_confn even_surface in [0, 2]
let mod24_surface = custom(dim=2, basis=[H], entries=[[H, H, 24]], canonical=0, nef=[[1]], annotations=[[24]])
assert_confn mod24_surface = 0
let blowup_p2 = blowup_point(P2)
assert_confn blowup_p2 in [1, 3]

# Sections and covers
let quintic_section = pipeline_simple_surface(P3, section=H, p=5)
assert_confn quintic_section = 0
let section_f1_x_p1 = hypersurface_section(f1_x_p1, section=S + 2*F + H, p=5)
assert_confn section_f1_x_p1 = 0
let cover_f1_x_p1_d4 = cyclic_cover(f1_x_p1, degree=4, branch=S + 2*F + H, assume=[assume_large_d])
assert_confn cover_f1_x_p1_d4 = 0
let cover_f1_x_p1_d2 = cyclic_cover(f1_x_p1, degree=2, branch=S + 2*F + H, assume=[assume_large_d])
assert_confn cover_f1_x_p1_d2 = 1
let simple_cover_p3 = pipeline_simple_variety(P3, degree=6, branch=H, assume=[assume_large_d])
assert_confn simple_cover_p3 = 0
let simple_cover_p4 = pipeline_simple_variety(P4, degree=7, branch=H)
assert_confn simple_cover_p4 = 0
let n2k1 = pipeline_n2k1(mod24_surface)
assert_confn n2k1 = 1
let n3k1_dp7 = pipeline_n3k1(delpezzo7, m=3*H - E1 - E2)
assert_confn n3k1_dp7 = 1
let n3k1_f1 = pipeline_n3k1(hirzebruch1, m=S + 2*F)
assert_confn n3k1_f1 = 1

# Simply connected varieties with conFN = k, 0 <= k <= n + 1
let sc_n2_k0 = complete_intersection(2, degrees=[5], assume=[very_general])
assert_confn sc_n2_k0 = 0
let sc_n2_k1 = delpezzo7()
assert_confn sc_n2_k1 = 1
let sc_n2_k2 = hirzebruch1()
assert_confn sc_n2_k2 = 2
let sc_n2_k3 = projective_space(2)
assert_confn sc_n2_k3 = 3
let sc_n3_k0 = complete_intersection(3, degrees=[5])
assert_confn sc_n3_k0 = 0
let sc_n3_k1 = complete_intersection(3, degrees=[4])
assert_confn sc_n3_k1 = 1
let sc_n3_k2 = complete_intersection(3, degrees=[3])
assert_confn sc_n3_k2 = 2
let sc_n3_k3 = complete_intersection(3, degrees=[2])
assert_confn sc_n3_k3 = 3
let sc_n3_k4 = projective_space(3)
assert_confn sc_n3_k4 = 4

# Composition: conFN = k, 0 <= k <= n - 1, from a Fujita simple surface
let simple_surface = pipeline_simple_surface(P3, section=H, p=5)
let comp_n2_k0 = pipeline_simple_surface(P3, section=H, p=5)
assert_confn comp_n2_k0 = 0
let comp_n2_k1 = pipeline_n2k1(mod24_surface)
assert_confn comp_n2_k1 = 1
let comp_n3_k0 = pipeline_simple_variety(P3, degree=6, branch=H, assume=[assume_large_d])
assert_confn comp_n3_k0 = 0
let comp_n3_k1 = pipeline_n3k1(delpezzo7, m=3*H - E1 - E2)
assert_confn comp_n3_k1 = 1
let comp_n3_k2 = product(simple_surface, P1)
assert_confn comp_n3_k2 = 2
let comp_n4_k0 = pipeline_simple_variety(P4, degree=7, branch=H)
assert_confn comp_n4_k0 = 0
let comp_n4_k1 = product(simple_surface, delpezzo7)
assert_confn comp_n4_k1 = 1
let comp_n4_k2 = product(simple_surface, hirzebruch1)
assert_confn comp_n4_k2 = 2
let comp_n4_k3 = product(simple_surface, P2)
assert_confn comp_n4_k3 = 3
)";
  return p.str();
}

inline Report corpus(const EvalOptions& opt = {}) { return evaluate(parse(corpusProgram()), opt); }

}  // namespace confn::dsl

// Walks the reference deformation family: prints the Ricci spectrum on v,
// the isospectrality residual against u = 0 and the scalar curvature range
// of the boundary manifold at a few values of u.

#include <cstdio>

#include "nilspec/nilspec.hpp"

int main() {
  using namespace nilspec;
  const FamilyParams base = reference_family();
  const DeformationInterval I = interval_I(base);
  const SkewPencil p0 = family_pencil(base);
  std::printf("I = [%g, %g], scal~ = %g\n", I.lo, I.hi, scal_ambient(p0));

  for (double u : u_grid(I, 5)) {
    const SkewPencil pu = family_pencil(deform(base, u));
    const SymEigen e = sym_eigen(ricci_u(base, u));
    const IsospecReport iso = pencil_isospectral(p0, pu);
    const ScalExtremes ex = scal_extremes(pu);
    std::printf("u=%-8.5g ric=[", u);
    for (double v : e.values) std::printf(" %8.4f", v);
    std::printf(" ]  iso=%s (%.1e)  scal in [%.4f, %.4f]\n", to_string(iso.verdict), iso.max_residual,
                ex.min, ex.max);
  }

  const EquivalenceVerdict v =
      l_equivalence(p0, family_pencil(deform(base, 1.0 / 16)), LatticeBasis::standard(2));
  std::printf("u=0 vs u=1/16: %s\n", to_string(v.state));
  if (v.witness) std::printf("  witness %s gap %.3g\n", v.witness->name.c_str(), v.witness->gap);
  return 0;
}

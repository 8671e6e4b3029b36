#!/usr/bin/env python3
"""The minimum modulus on circles and its iteration.

m(r) is the minimum of |f| over the circle |z| = r.  When the iterates
m(r), m(m(r)), ... tend to infinity for some starting radius, the set of
points with unbounded orbit is connected.  Squaring shows a textbook
divergence; sin never diverges because every circle meets the real axis,
where |sin| <= 1; and -10 z exp(-z) - z/2 never diverges because
m(r) <= |f(r)| is about r/2 for large r, yet its unbounded-orbit set is
still connected by the nested-domain criterion (see demo 03).
"""

from orbitplane import iterate_min_modulus, min_modulus, parse

for source, r0 in [("z^2", 2.0), ("sin(z)", 1.0),
                   ("-10*z*exp(-z) - 0.5*z", 1.0)]:
    f = parse(source)
    print(f"f(z) = {source},  r0 = {r0}")
    ext = min_modulus(f, r0)
    print(f"  m({r0}) = {ext.value:.9g} attained at angle "
          f"{ext.arg_extremum:.6f} ({ext.samples_used} samples)")
    rep = iterate_min_modulus(f, r0, n_max=30, blow_up=1e50)
    shown = ", ".join(f"{v:.4g}" for v in rep.sequence[:8])
    print(f"  sequence: {shown}{' ...' if len(rep.sequence) > 8 else ''}")
    print(f"  verdict : {rep.verdict}   witness: {rep.witness}")
    print()

print("verdicts are finite-budget heuristics: DIVERGES means the")
print("blow-up threshold was crossed, NOT_DIVERGING means a revisit or a")
print("collapse below the numerical floor, UNDECIDED means budget ran out.")

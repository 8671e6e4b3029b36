#!/usr/bin/env python3
"""cos z + z is strongly polynomial-like, yet disconnects.

The characterisation asks for nested rectangles D_n with

  (i)   the image of the boundary of D_n surrounds the closure of D_n,
  (ii)  the D_n exhaust the plane, and
  (iii) the closure of D_n sits inside D_(n+1).

The horizontal sides map into a thin annulus of radius about
exp(2(n+1)pi)/2 and the vertical sides are pushed outward by at least
cosh(Im z)/sqrt(2), so (i) holds with a comfortable margin.  At the same
time the real axis is fixed setwise and every real orbit converges to a
superattracting fixed point, so the real line stays bounded and splits
the unbounded-orbit set.
"""

import math

from orbitplane import Rect, check_spl, ex52_domain, find_fixed_points, parse

PI = math.pi

f = parse("cos(z) + z")
domains = [ex52_domain(n) for n in range(4)]

report = check_spl(f, domains, density=4.0, probe_grid=5)
for pair in report.self_surround:
    rep = pair.report
    print(f"(i)  image(dD_{pair.index}) vs closure(D_{pair.index}): "
          f"{rep.verdict}  (distance {rep.min_distance:.4f}, windings "
          f"{sorted({w for _, w in rep.winding_values})})")
print(f"(iii) closures nested: {list(report.closure_nested)}")
print(f"(ii)  inradius growth proxy: "
      f"{[round(r / PI, 2) for r in report.inradii]} pi, "
      f"increasing={report.inradius_increasing}")
print("strongly polynomial-like on the tested family:",
      report.condition_i and report.condition_iii)
print()

records = find_fixed_points(f, Rect(0.0, 4 * PI, -1.0, 1.0))
print("fixed points on [0, 4pi] x [-1, 1]:")
for rec in records:
    print(f"  z = {rec.location.real / PI:.1f} pi   multiplier "
          f"{abs(rec.multiplier):.2g}   {rec.classification}")
print()
print("the superattracting points pin the real axis into the bounded set,")
print("so the unbounded suspects above and below it cannot join.")

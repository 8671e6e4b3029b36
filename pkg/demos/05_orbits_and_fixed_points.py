#!/usr/bin/env python3
"""Finite-budget orbit verdicts and the three-way classification.

Unboundedness is undecidable from finitely many iterates, so orbits are
classified as unbounded suspects (escaped the radius or overflowed),
bounded suspects (confirmed near-cycle, or budget exhausted with lots of
headroom), or undecided.  Cycle locking replays one full period before
trusting a near-return.
"""

import math

from orbitplane import OrbitPolicy, classify_point, iterate_orbit, parse

PI = math.pi
policy = OrbitPolicy(budget=200, escape_radius=1e6,
                     cycle_tol=1e-9, cycle_window=32)

cases = [
    ("z^2", 2.0, "squaring escapes hard"),
    ("z^2", 0.5 + 0.1j, "inside the unit disc: collapses to 0"),
    ("cos(z) + z", PI / 2, "superattracting fixed point"),
    ("cos(z) + z", 3 * PI / 2 + 1e-3, "repelled, then captured next door"),
    ("sin(z)", 1.0, "real orbits crawl toward 0"),
    ("sin(z)", 1j, "imaginary direction blows up"),
]

for source, z0, note in cases:
    f = parse(source)
    verdict = iterate_orbit(f, z0, policy, keep_trace=True)
    cls = classify_point(f, z0, policy)
    line = f"{source:14} z0={z0!s:14} {verdict.kind:16}"
    if verdict.kind == "ESCAPED":
        line += f" step={verdict.escape_step}"
    elif verdict.kind == "CYCLE_LOCKED":
        line += f" period={verdict.period} at {verdict.representative:.6g}"
    else:
        line += f" max|z|={verdict.max_modulus:.3g}"
    print(f"{line}   -> {cls.name}   ({note})")

print()
print("trace of the slow sine crawl (every 40th point):")
trace = iterate_orbit(parse("sin(z)"), 1.0, policy, keep_trace=True).trace
for k in range(0, len(trace), 40):
    print(f"  n={k:3d}  z={trace[k]:.6f}")

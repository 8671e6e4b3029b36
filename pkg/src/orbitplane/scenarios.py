"""Built-in study scenarios and their asserted checks.

Each scenario bundles a function, a domain-sequence generator, default
policies, and a list of named checks with frozen tolerances.  Running a
scenario produces CSV/PPM artifacts plus a JSON report; a scenario
passes only if every asserted check passes.

``ex51``   the function -10 z exp(-z) - z/2: its two-rectangle domain
           chain satisfies the nested-surrounding conditions although
           the iterated minimum modulus never diverges.
``ex52``   cos z + z: strongly polynomial-like (boundary images surround
           their own domains) yet the real axis stays bounded, with
           alternating superattracting/repelling fixed points.
``sinz``   sin z: the real line is bounded and splits the unbounded
           suspects into separate components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import fileio
from .domains import Disc, DomainSpec, Rect, RectUnion
from .expressions import evaluate, parse
from .modulus import DIVERGES, iterate_min_modulus
from .orbits import (OrbitPolicy, PointClass, REPELLING, SUPERATTRACTING,
                     find_fixed_points)
from .raster import (GridSpec, boundary_pixels, classify_grid,
                     label_components, spiders_web_probe, write_ppm)
from .surround import (NestedDomainsReport, SplReport, check_spl,
                       check_nested_domains)

__all__ = [
    "Scenario",
    "SCENARIOS",
    "ex51_domain",
    "ex52_domain",
    "EX51_SOURCE",
    "EX52_SOURCE",
    "SINZ_SOURCE",
    "run_scenario",
    "encode_domain",
    "encode_surround_report",
    "encode_nested_report",
    "encode_spl_report",
]

EX51_SOURCE = "-10*z*exp(-z) - 0.5*z"
EX52_SOURCE = "cos(z) + z"
SINZ_SOURCE = "sin(z)"


def ex51_domain(n: int) -> RectUnion:
    """Two-rectangle domain: (0, 4n pi) x (-4n pi, 4n pi) joined along the
    imaginary axis to (-n pi, 0) x (-n pi, n pi)."""
    if n < 1:
        raise ValueError("domain index must be >= 1")
    pi = math.pi
    return RectUnion(
        (Rect(0.0, 4 * n * pi, -4 * n * pi, 4 * n * pi),
         Rect(-n * pi, 0.0, -n * pi, n * pi)),
        label=f"D{n}")


def ex52_domain(n: int) -> Rect:
    """Rectangle (-(2n+11/4) pi, (2n+9/4) pi) x (-2(n+1) pi, 2(n+1) pi)."""
    if n < 0:
        raise ValueError("domain index must be >= 0")
    pi = math.pi
    return Rect(-(2 * n + 11 / 4) * pi, (2 * n + 9 / 4) * pi,
                -2 * (n + 1) * pi, 2 * (n + 1) * pi, label=f"D{n}")


# ---------------------------------------------------------------------------
# JSON encoding helpers (shared with the CLI)
# ---------------------------------------------------------------------------

def encode_domain(domain: DomainSpec) -> dict:
    if isinstance(domain, Disc):
        return {"shape": "disc", "center": fileio.encode_complex(domain.center),
                "radius": domain.radius, "label": domain.label}
    if isinstance(domain, Rect):
        return {"shape": "rect", "x_min": domain.x_min, "x_max": domain.x_max,
                "y_min": domain.y_min, "y_max": domain.y_max,
                "label": domain.label}
    return {"shape": "rect_union",
            "rects": [encode_domain(r) for r in domain.rects],
            "label": domain.label}


def encode_surround_report(report) -> dict:
    return {
        "verdict": report.verdict,
        "min_distance": report.min_distance,
        "max_penetration": report.max_penetration,
        "windings": [{"probe": fileio.encode_complex(p), "winding": w}
                     for p, w in report.winding_values],
        "probes_tested": report.probes_tested,
        "note": report.note,
    }


def encode_nested_report(report: NestedDomainsReport) -> dict:
    return {
        "pairs": [{"index": p.index, "report": encode_surround_report(p.report)}
                  for p in report.pairs],
        "inradii": list(report.inradii),
        "inradius_increasing": report.inradius_increasing,
        "condition_a": report.condition_a,
        "condition_b": report.condition_b,
        "verdict": report.verdict,
        "note": report.note,
    }


def encode_spl_report(report: SplReport) -> dict:
    return {
        "self_surround": [{"index": p.index,
                           "report": encode_surround_report(p.report)}
                          for p in report.self_surround],
        "closure_nested": list(report.closure_nested),
        "inradii": list(report.inradii),
        "inradius_increasing": report.inradius_increasing,
        "condition_i": report.condition_i,
        "condition_iii": report.condition_iii,
        "verdict": report.verdict,
        "note": report.note,
    }


def encode_policy(policy: OrbitPolicy) -> dict:
    return {"budget": policy.budget, "escape_radius": policy.escape_radius,
            "cycle_tol": policy.cycle_tol, "cycle_window": policy.cycle_window}


# ---------------------------------------------------------------------------
# Scenario definitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    name: str
    source: str
    description: str
    runner: Callable


def _check(name: str, passed: bool, **details) -> dict:
    return {"name": name, "passed": bool(passed), "details": details}


def _run_ex51(outdir, emit) -> dict:
    pi = math.pi
    f = parse(EX51_SOURCE)
    checks = []

    # On the right edge Re z = 8 pi (with |Im z| <= 8 pi) the
    # exponential term is negligible and f tracks -z/2 within 1e-3.
    y = np.linspace(-8 * pi, 8 * pi, 1001)
    z = 8 * pi + 1j * y
    dev = float(np.max(np.abs(evaluate(f, z) + z / 2)))
    checks.append(_check("right_edge_bound", dev < 1e-3,
                         max_deviation=dev, tolerance=1e-3, samples=int(y.size)))

    # Endpoint values f(4 n pi i) = -42 n pi i.
    worst = 0.0
    for n in range(1, 6):
        value = complex(evaluate(f, 4 * n * pi * 1j))
        expect = -42 * n * pi * 1j
        worst = max(worst, abs(value - expect) / abs(expect))
    checks.append(_check("endpoint_values", worst < 1e-9,
                         worst_relative_error=worst, tolerance=1e-9))

    # Surrounding suite over D2..D6 (source indices 2..5).
    domains = [ex51_domain(n) for n in range(2, 7)]
    nested = check_nested_domains(f, domains, density=4.0, probe_grid=5)
    checks.append(_check("surround_suite", nested.verdict,
                         **encode_nested_report(nested)))
    from .curves import image_curve
    from .domains import boundary
    for n, dom in zip(range(2, 7), domains):
        curve = boundary(dom, 4.0)
        emit(f"ex51_boundary_D{n}.csv",
             lambda p, c=curve: fileio.curves_csv(p, [c]))
        img = image_curve(f, curve, max_step=None)
        emit(f"ex51_image_D{n}.csv",
             lambda p, c=img: fileio.curves_csv(p, [c]))

    # The iterated minimum modulus never diverges from integer starts.
    diverged = []
    verdict_counts: dict[str, int] = {}
    for r0 in range(1, 51):
        rep = iterate_min_modulus(f, float(r0), n_max=50, blow_up=1e50)
        verdict_counts[rep.verdict] = verdict_counts.get(rep.verdict, 0) + 1
        if rep.verdict == DIVERGES:
            diverged.append(r0)
    checks.append(_check("minmod_never_diverges", not diverged,
                         diverged_from=diverged, verdicts=verdict_counts,
                         n_max=50, blow_up=1e50))

    return {"function": EX51_SOURCE, "checks": checks}


def _run_ex52(outdir, emit) -> dict:
    pi = math.pi
    f = parse(EX52_SOURCE)
    checks = []

    # Horizontal sides map into the annulus 0.5 e^{2(n+1)pi} +- 4(n+1)pi.
    annulus = []
    ok = True
    for n in range(4):
        height = 2 * (n + 1) * pi
        dom = ex52_domain(n)
        x = np.linspace(dom.x_min, dom.x_max, 1001)
        lo = 0.5 * math.exp(height) - 4 * (n + 1) * pi
        hi = 0.5 * math.exp(height) + 4 * (n + 1) * pi
        seen_lo, seen_hi = math.inf, 0.0
        for side in (height, -height):
            m = np.abs(evaluate(f, x + 1j * side))
            seen_lo = min(seen_lo, float(m.min()))
            seen_hi = max(seen_hi, float(m.max()))
        inside = (seen_lo >= lo * (1 - 1e-6)) and (seen_hi <= hi * (1 + 1e-6))
        ok &= inside
        annulus.append({"n": n, "lo": lo, "hi": hi,
                        "seen_lo": seen_lo, "seen_hi": seen_hi,
                        "inside": inside})
    checks.append(_check("annulus_bound", ok, sides=annulus,
                         relative_tolerance=1e-6))

    # Strongly-polynomial-like suite on D0..D3.
    domains = [ex52_domain(n) for n in range(4)]
    spl = check_spl(f, domains, density=4.0, probe_grid=5)
    checks.append(_check("spl_suite", spl.condition_i and spl.condition_iii,
                         **encode_spl_report(spl)))
    from .curves import image_curve
    from .domains import boundary
    for n, dom in enumerate(domains):
        img = image_curve(f, boundary(dom, 4.0), max_step=None)
        emit(f"ex52_image_D{n}.csv", lambda p, c=img: fileio.curves_csv(p, [c]))

    # Fixed points on [0, 4 pi] x [-1, 1]: alternating superattracting
    # and repelling with multipliers 0 and 2.
    records = find_fixed_points(f, Rect(0.0, 4 * pi, -1.0, 1.0))
    expected = [((k + 0.5) * pi, 0.0 if k % 2 == 0 else 2.0,
                 SUPERATTRACTING if k % 2 == 0 else REPELLING)
                for k in range(4)]
    fp_ok = len(records) == 4
    rows = []
    for rec, (loc, mult, cls) in zip(records, expected):
        good = (abs(rec.location - loc) <= 1e-8
                and abs(rec.multiplier - mult) <= 1e-8
                and rec.classification == cls)
        fp_ok &= good
        rows.append({"location": fileio.encode_complex(rec.location),
                     "multiplier": fileio.encode_complex(rec.multiplier),
                     "classification": rec.classification,
                     "residual": rec.residual, "matches_expected": good})
    checks.append(_check("fixed_points", fp_ok, records=rows,
                         expected_count=4, location_tolerance=1e-8))

    return {"function": EX52_SOURCE, "checks": checks}


def _run_sinz(outdir, emit) -> dict:
    f = parse(SINZ_SOURCE)
    checks = []
    policy = OrbitPolicy(budget=200, escape_radius=1e6)
    grid = GridSpec(Rect(-10.0, 10.0, -5.0, 5.0), 400, 200)
    pc = classify_grid(f, grid, policy)

    overlay = boundary_pixels(pc, PointClass.UNBOUNDED_SUSPECT)
    emit("sinz_render.ppm", lambda p: write_ppm(p, pc, overlay))
    emit("sinz_render.npz", lambda p: fileio.save_classification(p, pc))

    # Real-axis band bounded: both pixel rows nearest Im z = 0.
    ys = grid.y_centers()
    rows = np.argsort(np.abs(ys))[:2]
    band_ok = bool(np.all(pc.classes[rows, :] == int(PointClass.BOUNDED_SUSPECT)))
    checks.append(_check("real_axis_bounded", band_ok,
                         rows_checked=[int(r) for r in rows],
                         row_ordinates=[float(ys[r]) for r in rows]))

    # Census: the unbounded suspects split into several components, the
    # two largest touching the window edge (the half-plane bands).
    labeling = label_components(pc, PointClass.UNBOUNDED_SUSPECT, 4)
    big = labeling.census[:2]
    census_ok = (len(labeling.census) >= 2
                 and all(s.touches_window_edge for s in big))
    checks.append(_check("disconnection_census", census_ok,
                         component_count=len(labeling.census),
                         largest=[{"component_id": s.component_id,
                                   "pixels": s.pixels,
                                   "touches_window_edge": s.touches_window_edge}
                                  for s in labeling.census[:6]]))

    # The nested-surrounding condition fails on discs of radius 1, 2, 3.
    nested = check_nested_domains(f, [Disc(0j, 1.0), Disc(0j, 2.0), Disc(0j, 3.0)],
                             density=8.0)
    checks.append(_check("surround_fails_on_discs", not nested.condition_a,
                         **encode_nested_report(nested)))

    # Iterated minimum modulus stays at or below 1 and never diverges.
    rep = iterate_min_modulus(f, 1.0, n_max=50)
    emit("sinz_minmod.csv", lambda p: fileio.sequence_csv(p, rep.sequence))
    checks.append(_check("minmod_not_diverging", rep.verdict != DIVERGES
                         and max(rep.sequence) <= 1.0,
                         verdict=rep.verdict,
                         max_value=float(max(rep.sequence))))

    # No surrounding pixel cycles in the unbounded class (the bounded real
    # axis blocks them).
    probe = spiders_web_probe(labeling, 0j, [2.0, 4.0])
    checks.append(_check("no_spiders_web", not probe.verdict,
                         per_radius=[{"radius": r, "surrounded": s}
                                     for r, s in probe.per_radius]))

    # Resolution probe: component counts as the column count doubles
    # (reported, not asserted).
    counts = []
    for cols in (100, 200, 400):
        g = GridSpec(Rect(-10.0, 10.0, -5.0, 5.0), cols, cols // 2)
        lab = label_components(classify_grid(f, g, policy),
                               PointClass.UNBOUNDED_SUSPECT, 4)
        counts.append({"columns": cols, "components": len(lab.census)})
    checks.append(_check("resolution_probe", True, reported_only=True,
                         counts=counts))

    return {"function": SINZ_SOURCE, "checks": checks}


SCENARIOS: dict[str, Scenario] = {
    "ex51": Scenario("ex51", EX51_SOURCE,
                     "nested two-rectangle domains with non-diverging "
                     "minimum modulus", _run_ex51),
    "ex52": Scenario("ex52", EX52_SOURCE,
                     "strongly polynomial-like with a bounded real axis",
                     _run_ex52),
    "sinz": Scenario("sinz", SINZ_SOURCE,
                     "the real line disconnects the unbounded suspects",
                     _run_sinz),
}


def run_scenario(name: str, outdir) -> dict:
    """Run a named scenario, writing artifacts under ``outdir``.

    Returns the scenario report; ``report["passed"]`` aggregates all
    asserted checks.
    """
    import os

    if name not in SCENARIOS:
        raise KeyError(f"unknown scenario {name!r}; "
                       f"available: {', '.join(sorted(SCENARIOS))}")
    os.makedirs(outdir, exist_ok=True)
    files: list[str] = []

    def emit(filename: str, writer) -> None:
        path = os.path.join(outdir, filename)
        writer(path)
        files.append(filename)

    body = SCENARIOS[name].runner(outdir, emit)
    report = {
        "kind": "scenario",
        "name": name,
        "function": body["function"],
        "checks": body["checks"],
        "passed": all(c["passed"] for c in body["checks"]),
        "files": sorted(files),
    }
    fileio.write_json_report(os.path.join(outdir, f"scenario_{name}.json"),
                             report)
    return report

"""Surrounding checks: does the image of a boundary enclose a domain?

A closed curve *surrounds* a set when the set lies in a bounded component
of the curve's complement.  For sampled curves this is decided by two
ingredients: the curve keeps its distance from the domain, and the
winding number about every interior probe point is nonzero (and the same
for all probes).  Both ingredients are finite evidence, not proof, and
every report says so.

Two distance regimes are needed in practice.  The nested-domain check
requires the image curve merely to stay out of the open target domain,
with a small touch tolerance so that exact boundary-to-boundary maps
(such as squaring on a disc chain) pass.  The strongly-polynomial-like
check requires the image to clear the *closure* of its own domain by a
positive margin.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import SampledCurve, image_curve, winding_number, _insert_samples
from .domains import (DomainSpec, boundary, clearance, contains,
                      contains_closure, diameter, inradius_about,
                      interior_point)
from .errors import CurveTooClose
from .expressions import FunctionExpression

__all__ = [
    "SurroundReport",
    "PairCheck",
    "NestedDomainsReport",
    "SplReport",
    "surrounds",
    "check_nested_domains",
    "check_spl",
    "FINITE_HORIZON_NOTE",
]

FINITE_HORIZON_NOTE = (
    "checked on the supplied finite family only; conditions quantified over "
    "all n are reported as finite-horizon evidence, not proof")

# Rounds of clearance-driven bisection before segment distances are trusted.
_REFINE_ROUNDS = 48


@dataclass(frozen=True)
class SurroundReport:
    """Evidence that a closed curve surrounds a domain.

    ``min_distance`` is the least distance from the sampled polyline
    segments to the closed domain (zero when they touch or cross);
    ``max_penetration`` is the deepest incursion of any curve sample into
    the open domain (zero when no sample is inside).  With the default
    strict settings the verdict is true iff ``min_distance > 0`` and all
    probe windings are nonzero and unanimous.
    """

    verdict: bool
    min_distance: float
    max_penetration: float
    winding_values: tuple[tuple[complex, int], ...]
    probes_tested: int
    note: str = ""


def _probe_points(domain: DomainSpec, probe_grid: int) -> np.ndarray:
    x0, x1, y0, y1 = domain.bounding_box()
    k = max(1, int(probe_grid))
    xs = x0 + (np.arange(k) + 0.5) * (x1 - x0) / k
    ys = y0 + (np.arange(k) + 0.5) * (y1 - y0) / k
    grid = (xs[None, :] + 1j * ys[:, None]).ravel()
    keep = contains(domain, grid, closed=False)
    probes = grid[keep]
    if probes.size == 0:
        probes = np.array([interior_point(domain)])
    return probes


def _refine_near_domain(curve: SampledCurve, domain: DomainSpec,
                        max_points: int) -> SampledCurve:
    """Bisect segments longer than their endpoint clearance.

    After convergence every chord is shorter than the distance of its
    endpoints to the domain, so a chord cannot sneak across the domain
    unnoticed.  Refinement is capped; a curve that truly touches the
    domain simply stops shrinking and the distance test reports zero.
    """
    work = curve
    for _ in range(_REFINE_ROUNDS):
        c = np.abs(clearance(domain, work.points))
        ends = np.roll(c, -1)
        seglen = np.abs(work.segment_ends() - work.segment_starts())
        bad = np.nonzero(seglen > 0.9 * np.maximum(np.maximum(c, ends), 1e-300))[0]
        if bad.size == 0 or len(work) + bad.size > max_points:
            break
        if work.params is None:
            n = len(work)
            work = SampledCurve(work.points, True, np.arange(n) / n, None)
        refined = _insert_samples(work, bad)
        if len(refined) == len(work):
            break
        work = refined
    return work


def _segment_distance_to_domain(curve: SampledCurve, domain: DomainSpec) -> float:
    from .domains import Disc, _polygon_of, _segment_segment_distance, _point_segment_distance

    a = curve.segment_starts()
    b = curve.segment_ends()
    inside = contains(domain, curve.points, closed=True)
    if inside.any():
        return 0.0
    if isinstance(domain, Disc):
        center = np.array([domain.center])
        d = _point_segment_distance(center, a, b)[0] - domain.radius
        return float(max(0.0, d))
    verts = _polygon_of(domain)
    oa, ob = verts, np.roll(verts, -1)
    d = float(np.min(_segment_segment_distance(a, b, oa, ob)))
    # A segment could cross the domain without its endpoints being inside;
    # crossing the boundary polygon yields distance zero above, and a
    # segment entirely inside is excluded by the endpoint test.
    return d


def surrounds(curve: SampledCurve, domain: DomainSpec, probe_grid: int = 5,
              *, min_distance_required: float = 0.0,
              touch_tolerance: float | None = None,
              max_points: int = 200_000) -> SurroundReport:
    """Check that ``curve`` surrounds ``domain``.

    Default (strict): the curve must not intersect the closed domain
    (``min_distance > min_distance_required``) and the winding number
    about every interior probe on a ``probe_grid`` x ``probe_grid``
    lattice (at least one point) must be nonzero and unanimous.

    With ``touch_tolerance`` set, the distance requirement is replaced by
    a sample-penetration bound: curve samples may touch the boundary but
    not enter the open domain deeper than the tolerance.  This is the
    right test against open target domains whose boundary the image may
    hit exactly.
    """
    if not curve.closed:
        raise ValueError("surrounds requires a closed curve")
    work = _refine_near_domain(curve, domain, max_points)

    c = clearance(domain, work.points)
    max_penetration = float(max(0.0, -np.min(c)))
    min_distance = _segment_distance_to_domain(work, domain)

    if touch_tolerance is None:
        geom_ok = min_distance > min_distance_required
    else:
        geom_ok = max_penetration <= touch_tolerance

    probes = _probe_points(domain, probe_grid)
    windings: list[tuple[complex, int]] = []
    windable = True
    for w in probes:
        try:
            wn = winding_number(work, complex(w),
                                min_clearance=min(1e-9, max(min_distance / 2, 1e-300)),
                                max_points=max_points)
        except CurveTooClose:
            windable = False
            break
        windings.append((complex(w), wn))
    if windable and windings:
        values = {wn for _, wn in windings}
        wind_ok = (len(values) == 1) and (0 not in values)
    else:
        wind_ok = False

    return SurroundReport(
        verdict=bool(geom_ok and wind_ok),
        min_distance=min_distance,
        max_penetration=max_penetration,
        winding_values=tuple(windings),
        probes_tested=len(probes),
        note=FINITE_HORIZON_NOTE,
    )


@dataclass(frozen=True)
class PairCheck:
    index: int
    report: SurroundReport

    @property
    def verdict(self) -> bool:
        return self.report.verdict


@dataclass(frozen=True)
class NestedDomainsReport:
    """Evidence for the nested-domain sufficient condition.

    Condition (a): the image of each boundary surrounds the next domain.
    Condition (b): the inradii about 0 are strictly increasing across the
    supplied family (the finite-horizon proxy for exhausting the plane).
    """

    pairs: tuple[PairCheck, ...]
    inradii: tuple[float, ...]
    inradius_increasing: bool
    note: str = FINITE_HORIZON_NOTE

    @property
    def condition_a(self) -> bool:
        return all(p.verdict for p in self.pairs)

    @property
    def condition_b(self) -> bool:
        return self.inradius_increasing

    @property
    def verdict(self) -> bool:
        return self.condition_a and self.condition_b


def check_nested_domains(f: FunctionExpression, domains: list[DomainSpec],
                    density: float = 4.0, probe_grid: int = 5,
                    *, touch_rtol: float = 1e-9,
                    max_points: int = 200_000) -> NestedDomainsReport:
    """Check the nested-domain conditions on a finite family.

    For each consecutive pair, the image of the boundary of ``D[n]``
    under ``f`` must surround ``D[n+1]``; touching the target boundary
    within ``touch_rtol * diameter`` is tolerated because equality cases
    (boundary mapping exactly onto boundary) are legitimate.
    """
    if len(domains) < 2:
        raise ValueError("need at least two domains")
    pairs = []
    for n in range(len(domains) - 1):
        img = image_curve(f, boundary(domains[n], density), max_step=None,
                          max_points=max_points)
        tol = touch_rtol * diameter(domains[n + 1])
        rep = surrounds(img, domains[n + 1], probe_grid,
                        touch_tolerance=tol, max_points=max_points)
        pairs.append(PairCheck(n, rep))
    inradii = tuple(inradius_about(d, 0j) for d in domains)
    increasing = all(b > a for a, b in zip(inradii, inradii[1:]))
    return NestedDomainsReport(tuple(pairs), inradii, increasing)


@dataclass(frozen=True)
class SplReport:
    """Evidence for the strongly-polynomial-like characterisation.

    (i) each boundary image surrounds the closure of its own domain
    (closure handled by requiring a positive distance margin),
    (iii) each closure is contained in the next domain, and (ii) is
    reported as the inradius growth proxy.
    """

    self_surround: tuple[PairCheck, ...]
    closure_nested: tuple[bool, ...]
    inradii: tuple[float, ...]
    inradius_increasing: bool
    note: str = FINITE_HORIZON_NOTE

    @property
    def condition_i(self) -> bool:
        return all(p.verdict for p in self.self_surround)

    @property
    def condition_iii(self) -> bool:
        return all(self.closure_nested)

    @property
    def verdict(self) -> bool:
        return self.condition_i and self.condition_iii and self.inradius_increasing


def check_spl(f: FunctionExpression, domains: list[DomainSpec],
              density: float = 4.0, probe_grid: int = 5,
              *, closure_eps_rtol: float = 1e-9,
              max_points: int = 200_000) -> SplReport:
    """Check the strongly-polynomial-like conditions on a finite family."""
    if len(domains) < 2:
        raise ValueError("need at least two domains")
    self_surround = []
    for n, dom in enumerate(domains):
        img = image_curve(f, boundary(dom, density), max_step=None,
                          max_points=max_points)
        eps = closure_eps_rtol * diameter(dom)
        rep = surrounds(img, dom, probe_grid,
                        min_distance_required=eps, max_points=max_points)
        self_surround.append(PairCheck(n, rep))
    nested = tuple(contains_closure(domains[n + 1], domains[n])
                   for n in range(len(domains) - 1))
    inradii = tuple(inradius_about(d, 0j) for d in domains)
    increasing = all(b > a for a, b in zip(inradii, inradii[1:]))
    return SplReport(tuple(self_surround), nested, inradii, increasing)

"""Minimum and maximum modulus on circles and the iterated minimum-modulus map.

The extremum of |f| over a circle |z| = r is located by uniform coarse
sampling followed by ternary-search refinement of every coarse local
extremum bracket.  No modulus-of-continuity bound is available for user
expressions, so the coarse grid (default 4096 angles) is what guards
against missed dips; the refinement then resolves each bracket to the
requested angular tolerance.

Iterating r -> m(r) probes the divergence condition m^n(r) -> infinity.
Divergence is undecidable from finitely many iterates, so the verdicts
are explicit heuristics: DIVERGES means a threshold was crossed,
NOT_DIVERGING means the sequence revisited an earlier value or collapsed
to (numerical) zero, UNDECIDED means the budget ran out first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .domains import Disc
from .errors import InvalidRadius
from .expressions import FunctionExpression, evaluate

__all__ = [
    "RadialExtremum",
    "MinModIterationReport",
    "DiscSequence",
    "min_modulus",
    "max_modulus",
    "iterate_min_modulus",
    "derive_disc_sequence",
    "DIVERGES",
    "NOT_DIVERGING",
    "UNDECIDED",
]

DIVERGES = "DIVERGES"
NOT_DIVERGING = "NOT_DIVERGING"
UNDECIDED = "UNDECIDED"

# Iteration heuristics (see module docstring).
DEFAULT_BLOW_UP = 1e50
REVISIT_RTOL = 1e-9
RADIUS_FLOOR = 1e-12

_MAX_BRACKETS = 256


@dataclass(frozen=True)
class RadialExtremum:
    """Extremum of |f| over a circle, with the angle that attains it."""

    radius: float
    value: float
    arg_extremum: float
    samples_used: int
    refined: bool


def _check_radius(r: float) -> float:
    r = float(r)
    if not (math.isfinite(r) and r > 0):
        raise InvalidRadius(f"radius must be positive and finite, got {r!r}")
    return r


def _circle_moduli(f: FunctionExpression, r: float, thetas: np.ndarray) -> np.ndarray:
    return np.abs(evaluate(f, r * np.exp(1j * thetas)))


def _extremum(f: FunctionExpression, r: float, n_coarse: int, tol: float,
              maximize: bool) -> RadialExtremum:
    r = _check_radius(r)
    if n_coarse < 64:
        raise ValueError("n_coarse must be at least 64")
    if not (tol > 0 and math.isfinite(tol)):
        raise ValueError("tol must be positive and finite")

    step = 2 * math.pi / n_coarse
    thetas = step * np.arange(n_coarse)
    vals = _circle_moduli(f, r, thetas)
    if maximize:
        vals = -vals
    samples = n_coarse

    prev = np.roll(vals, 1)
    nxt = np.roll(vals, -1)
    cand = np.nonzero((vals <= prev) & (vals <= nxt))[0]
    if cand.size == 0:
        cand = np.array([int(np.argmin(vals))])
    elif cand.size > _MAX_BRACKETS:
        order = np.argsort(vals[cand], kind="stable")
        cand = cand[order[:_MAX_BRACKETS]]

    # Vectorized ternary search on the brackets around each candidate.
    lo = (cand - 1) * step
    hi = (cand + 1) * step
    best_val = vals[cand].copy()
    best_arg = cand * step
    refined = False
    while np.max(hi - lo) > tol:
        refined = True
        third = (hi - lo) / 3.0
        m1 = lo + third
        m2 = hi - third
        v1 = _circle_moduli(f, r, m1)
        v2 = _circle_moduli(f, r, m2)
        if maximize:
            v1, v2 = -v1, -v2
        samples += 2 * m1.size
        take_left = v1 <= v2
        hi = np.where(take_left, m2, hi)
        lo = np.where(take_left, lo, m1)
        improved1 = v1 < best_val
        best_val = np.where(improved1, v1, best_val)
        best_arg = np.where(improved1, m1, best_arg)
        improved2 = v2 < best_val
        best_val = np.where(improved2, v2, best_val)
        best_arg = np.where(improved2, m2, best_arg)

    k = int(np.argmin(best_val))
    value = float(best_val[k])
    if maximize:
        value = -value
    arg = float(best_arg[k]) % (2 * math.pi)
    return RadialExtremum(r, value, arg, samples, refined)


def min_modulus(f: FunctionExpression, r: float, n_coarse: int = 4096,
                tol: float = 1e-10) -> RadialExtremum:
    """Global minimum of |f| over the circle |z| = r.

    Coarse sampling at ``n_coarse`` uniform angles, then ternary-search
    refinement of every coarse local minimum until the angular bracket is
    below ``tol``; the least refined value wins.  On plateaus (constant
    modulus puts a local minimum at every angle) refinement keeps the 256
    lowest brackets, which cannot change the reported minimum.
    """
    return _extremum(f, r, n_coarse, tol, maximize=False)


def max_modulus(f: FunctionExpression, r: float, n_coarse: int = 4096,
                tol: float = 1e-10) -> RadialExtremum:
    """Global maximum of |f| over the circle |z| = r (see min_modulus)."""
    return _extremum(f, r, n_coarse, tol, maximize=True)


@dataclass(frozen=True)
class MinModIterationReport:
    """Trajectory of the iterated minimum-modulus map starting at r0.

    ``sequence[0]`` is r0 itself; ``sequence[k]`` is m^k(r0).  The
    verdict is finite-budget evidence, not proof; ``witness`` holds the
    indices/values that triggered it.
    """

    r0: float
    sequence: tuple[float, ...]
    verdict: str
    witness: dict

    @property
    def final(self) -> float:
        return self.sequence[-1]


def iterate_min_modulus(f: FunctionExpression, r0: float, n_max: int = 50,
                        blow_up: float = DEFAULT_BLOW_UP,
                        n_coarse: int = 4096, tol: float = 1e-10,
                        revisit_rtol: float = REVISIT_RTOL,
                        floor: float = RADIUS_FLOOR) -> MinModIterationReport:
    """Iterate r -> min_modulus(f, r) from ``r0`` with divergence heuristics.

    Stops with DIVERGES when a value exceeds ``blow_up``, with
    NOT_DIVERGING when a value falls below ``floor`` (a zero of f on the
    circle makes further iterates meaningless in double precision) or
    revisits any earlier value within relative ``revisit_rtol``, and with
    UNDECIDED when ``n_max`` steps elapse first.
    """
    r0 = _check_radius(r0)
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if not blow_up > r0:
        raise ValueError("blow_up must exceed r0")

    seq = [r0]
    verdict = UNDECIDED
    witness: dict = {"note": f"no termination within {n_max} iterations"}
    for k in range(1, n_max + 1):
        value = min_modulus(f, seq[-1], n_coarse, tol).value
        seq.append(value)
        if value > blow_up:
            verdict = DIVERGES
            witness = {"index": k, "value": value, "threshold": blow_up}
            break
        if value < floor:
            verdict = NOT_DIVERGING
            witness = {"index": k, "value": value, "floor": floor}
            break
        earlier = np.array(seq[:-1])
        scale = np.maximum(np.abs(earlier), abs(value))
        near = np.nonzero(np.abs(earlier - value) <= revisit_rtol * scale)[0]
        if near.size:
            verdict = NOT_DIVERGING
            witness = {"index": k, "revisits": int(near[0]), "value": value}
            break
    return MinModIterationReport(r0, tuple(seq), verdict, witness)


@dataclass(frozen=True)
class DiscSequence:
    """Discs about 0 with radii m^n(r0), plus the iteration report.

    Feed the discs to the surround checker to locate the index from which
    each boundary image surrounds the next disc.  The disc list stops at
    the first non-positive radius (the report records why).
    """

    discs: tuple[Disc, ...]
    report: MinModIterationReport


def derive_disc_sequence(f: FunctionExpression, r0: float, count: int,
                         n_coarse: int = 4096, tol: float = 1e-10,
                         blow_up: float = DEFAULT_BLOW_UP) -> DiscSequence:
    """Discs centred at 0 with radii m^n(r0) for n = 0 .. count-1."""
    if count < 1:
        raise ValueError("count must be at least 1")
    report = iterate_min_modulus(f, r0, n_max=count - 1 if count > 1 else 1,
                                 blow_up=blow_up, n_coarse=n_coarse, tol=tol)
    discs = []
    for n, radius in enumerate(report.sequence[:count]):
        if not (radius > 0 and math.isfinite(radius)):
            break
        discs.append(Disc(0j, float(radius), label=f"D'{n}"))
    return DiscSequence(tuple(discs), report)

"""Sampled plane curves: images under a map, refinement, winding numbers.

A :class:`SampledCurve` is an ordered finite sampling of a curve.  Closed
curves are stored without the duplicate endpoint; the wrap-around segment
is implicit.  When the sampling came from a parameterized source (a domain
boundary, or its image under a function) the curve carries the parameter
values and a vectorized ``source`` callable, which is what makes honest
local refinement possible: new samples are taken on the true curve, not
interpolated from old ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import AliasingUnresolved, CurveTooClose, RefinementBudgetExceeded
from .expressions import FunctionExpression, evaluate

__all__ = ["SampledCurve", "image_curve", "winding_number"]

# A single argument increment above this is treated as aliasing and the
# segment is refined before the winding sum is trusted.
_ALIAS_THRESHOLD = np.pi / 2

# Residual of the winding sum after rounding must stay below this.
_ROUND_RESIDUAL = 0.05


@dataclass(frozen=True)
class SampledCurve:
    """Ordered sampling of a plane curve.

    ``points`` are complex samples; for ``closed`` curves the segment from
    the last point back to the first is implied.  ``params`` are parameter
    values on the parent curve (same length as ``points``, increasing,
    in [0, 1) for closed boundaries) and ``source`` maps parameter arrays
    to points on the parent curve.  Both are optional for synthetic
    polylines, in which case refinement falls back to chord midpoints.
    """

    points: np.ndarray
    closed: bool
    params: Optional[np.ndarray] = None
    source: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.complex128)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("a curve needs at least two samples")
        if self.params is not None:
            prm = np.asarray(self.params, dtype=np.float64)
            if prm.shape != pts.shape:
                raise ValueError("params must match points in length")
            object.__setattr__(self, "params", prm)
        seg = np.diff(pts)
        if np.any(seg == 0):
            raise ValueError("consecutive curve points must be distinct")
        if self.closed and pts[0] == pts[-1]:
            raise ValueError("closed curves are stored without the duplicate endpoint")

    def __len__(self) -> int:
        return self.points.size

    def segment_starts(self) -> np.ndarray:
        return self.points

    def segment_ends(self) -> np.ndarray:
        if self.closed:
            return np.roll(self.points, -1)
        return self.points[1:]

    def reversed(self) -> "SampledCurve":
        pts = self.points[::-1].copy()
        if self.params is None:
            return SampledCurve(pts, self.closed, None, None)
        t = self.params
        src = self.source
        if self.closed:
            rev_t = (1.0 - t[::-1]) % 1.0
            shift = int(np.argmin(rev_t))
            rev_t = np.roll(rev_t, -shift)
            pts = np.roll(pts, -shift)
            rev_source = None if src is None else (
                lambda u: src((1.0 - np.asarray(u)) % 1.0))
        else:
            lo, hi = t[0], t[-1]
            rev_t = (lo + hi) - t[::-1]
            rev_source = None if src is None else (
                lambda u: src((lo + hi) - np.asarray(u)))
        return SampledCurve(pts, self.closed, rev_t, rev_source)

    def translated(self, offset: complex) -> "SampledCurve":
        src = self.source
        new_source = None if src is None else (lambda t: src(t) + offset)
        return SampledCurve(self.points + offset, self.closed, self.params, new_source)


def _midpoint_params(curve: SampledCurve, segments: np.ndarray) -> np.ndarray:
    """Parameter midpoints of the given segment indices (wrap-aware)."""
    t = curve.params
    t0 = t[segments]
    t1 = np.where(segments + 1 < t.size, t[(segments + 1) % t.size], t[0] + 1.0)
    return ((t0 + t1) / 2.0) % 1.0 if curve.closed else (t0 + t1) / 2.0


def _insert_samples(curve: SampledCurve, segments: np.ndarray) -> SampledCurve:
    """Bisect the listed segments, sampling from the source when available.

    Without a source (or parameters) the polyline itself is authoritative
    and midpoints are chord midpoints, which leaves the traced path
    unchanged while halving its angular steps.
    """
    pts = curve.points
    if curve.params is not None and curve.source is not None:
        t_new = _midpoint_params(curve, segments)
        p_new = np.asarray(curve.source(t_new), dtype=np.complex128)
        t_all = np.concatenate([curve.params, t_new])
        p_all = np.concatenate([pts, p_new])
        order = np.argsort(t_all, kind="stable")
        t_all, p_all = t_all[order], p_all[order]
        keep = np.ones(p_all.size, dtype=bool)
        keep[1:] = p_all[1:] != p_all[:-1]
        if curve.closed and p_all.size > 1 and p_all[keep][-1] == p_all[keep][0]:
            last = np.nonzero(keep)[0][-1]
            keep[last] = False
        return SampledCurve(p_all[keep], curve.closed, t_all[keep], curve.source)
    ends = curve.segment_ends() if curve.closed else pts[1:]
    mids = (pts[segments] + ends[segments]) / 2.0
    p_all = np.insert(pts, segments + 1, mids)
    params = None
    if curve.params is not None:
        t = curve.params
        t_m = _midpoint_params(curve, segments)
        params = np.insert(t, segments + 1, t_m)
    return SampledCurve(p_all, curve.closed, params, None)


def image_curve(f: FunctionExpression, curve: SampledCurve,
                max_step: float | None = None,
                max_points: int = 100_000) -> SampledCurve:
    """Image of a closed parameterized curve under ``f``.

    The image is refined on the *source* curve until consecutive image
    points are within ``max_step`` of each other (``None`` skips the
    distance refinement; the winding computation refines on demand
    anyway).  Raises :class:`RefinementBudgetExceeded` with the partial
    curve attached if ``max_points`` is hit first.
    """
    if not curve.closed:
        raise ValueError("image_curve requires a closed curve")
    if curve.params is None:
        raise ValueError("image_curve requires source parameters")

    src = curve.source
    if src is None:
        # Fall back to the polyline itself as the parent curve.
        base_t, base_p = curve.params.copy(), curve.points.copy()

        def src(t):
            t = np.asarray(t, dtype=np.float64)
            tt = np.concatenate([base_t, base_t[:1] + 1.0])
            pp = np.concatenate([base_p, base_p[:1]])
            re = np.interp(t % 1.0, tt, pp.real)
            im = np.interp(t % 1.0, tt, pp.imag)
            return re + 1j * im

    composed = lambda t: evaluate(f, np.asarray(src(t), dtype=np.complex128))

    params = curve.params
    points = np.asarray(composed(params), dtype=np.complex128)
    result = _dedupe_closed(points, params, composed)
    if max_step is None:
        return result
    while True:
        gaps = np.abs(result.segment_ends() - result.segment_starts())
        bad = np.nonzero(gaps > max_step)[0]
        if bad.size == 0:
            return result
        if len(result) + bad.size > max_points:
            raise RefinementBudgetExceeded(
                f"image refinement exceeded {max_points} points", partial=result)
        t_new = _midpoint_params(result, bad)
        p_new = np.asarray(composed(t_new), dtype=np.complex128)
        t_all = np.concatenate([result.params, t_new])
        p_all = np.concatenate([result.points, p_new])
        order = np.argsort(t_all, kind="stable")
        result = _dedupe_closed(p_all[order], t_all[order], composed)


def _dedupe_closed(points: np.ndarray, params: np.ndarray, source) -> SampledCurve:
    """Drop consecutive duplicate image points (flat spots under f)."""
    keep = np.ones(points.size, dtype=bool)
    keep[1:] = points[1:] != points[:-1]
    if points[keep].size > 1 and points[keep][-1] == points[keep][0]:
        keep[np.nonzero(keep)[0][-1]] = False
    if points[keep].size < 2:
        raise ValueError("curve image collapsed to a point")
    return SampledCurve(points[keep], True, params[keep], source)


def winding_number(curve: SampledCurve, w: complex,
                   min_clearance: float = 1e-9,
                   max_points: int = 200_000) -> int:
    """Winding number of a closed curve about ``w``.

    Argument increments between consecutive samples are taken in
    (-pi, pi].  Any increment above pi/2 is treated as aliasing and the
    segment is bisected (on the source curve when available, else on the
    chord) until all increments are small; the rounded sum is then exact
    for the sampled path.  Raises :class:`CurveTooClose` if any sample
    comes within ``min_clearance`` of ``w``, and
    :class:`AliasingUnresolved` if refinement cannot settle within the
    point budget.
    """
    if not curve.closed:
        raise ValueError("winding_number requires a closed curve")
    work = curve
    while True:
        rel = work.points - w
        dist = np.abs(rel)
        if np.min(dist) < min_clearance:
            raise CurveTooClose(
                f"curve sample within {min_clearance} of probe {w}")
        angles = np.angle(rel)
        inc = np.diff(np.concatenate([angles, angles[:1]]))
        inc = (inc + np.pi) % (2 * np.pi) - np.pi  # wrap to [-pi, pi)
        bad = np.nonzero(np.abs(inc) > _ALIAS_THRESHOLD)[0]
        if bad.size == 0:
            total = float(np.sum(inc)) / (2 * np.pi)
            wn = int(round(total))
            if abs(total - wn) >= _ROUND_RESIDUAL:
                raise AliasingUnresolved(
                    f"winding residual {abs(total - wn):.3f} after refinement")
            return wn
        if len(work) + bad.size > max_points:
            raise AliasingUnresolved(
                f"aliasing persists at {len(work)} points (budget {max_points})")
        if work.params is None:
            n = len(work)
            work = SampledCurve(work.points, True, np.arange(n) / n, None)
        work = _insert_samples(work, bad)

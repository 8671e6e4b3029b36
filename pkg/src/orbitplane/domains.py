"""Bounded, simply connected plane regions built from discs and rectangles.

A domain is one of :class:`Disc`, :class:`Rect` or :class:`RectUnion`.
Rectangle unions are validated at construction: member rectangles must
form a tree under the adjacency relation "closed overlap with positive
length" (2-d overlap or a shared edge segment; corner touching does not
count).  A tree of such adjacencies guarantees a connected interior and
simple connectivity, which is what the surrounding checks rely on.

The outer boundary of a rectangle union is traced on the irregular grid
induced by the member coordinates, yielding an exact counterclockwise
rectilinear polygon.  General rectilinear unions are traced by the same
code; only tree-overlap unions are accepted by the constructor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .curves import SampledCurve
from .errors import DegenerateDomain

__all__ = [
    "Disc",
    "Rect",
    "RectUnion",
    "DomainSpec",
    "boundary",
    "clearance",
    "contains",
    "contains_closure",
    "inradius_about",
    "diameter",
    "interior_point",
]


@dataclass(frozen=True)
class Rect:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    label: str = ""

    def __post_init__(self):
        vals = (self.x_min, self.x_max, self.y_min, self.y_max)
        if not all(math.isfinite(v) for v in vals):
            raise DegenerateDomain("rectangle bounds must be finite")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise DegenerateDomain("rectangle bounds must satisfy min < max")

    def bounding_box(self) -> tuple[float, float, float, float]:
        return (self.x_min, self.x_max, self.y_min, self.y_max)

    def vertices(self) -> np.ndarray:
        """Counterclockwise corner list."""
        return np.array([
            complex(self.x_min, self.y_min),
            complex(self.x_max, self.y_min),
            complex(self.x_max, self.y_max),
            complex(self.x_min, self.y_max),
        ])


@dataclass(frozen=True)
class Disc:
    center: complex
    radius: float
    label: str = ""

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise DegenerateDomain("disc radius must be positive and finite")
        c = complex(self.center)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise DegenerateDomain("disc center must be finite")
        object.__setattr__(self, "center", c)

    def bounding_box(self) -> tuple[float, float, float, float]:
        c, r = self.center, self.radius
        return (c.real - r, c.real + r, c.imag - r, c.imag + r)


@dataclass(frozen=True)
class RectUnion:
    rects: tuple[Rect, ...]
    label: str = ""
    _polygon: tuple[complex, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        rects = tuple(self.rects)
        if not rects:
            raise DegenerateDomain("rectangle union needs at least one member")
        object.__setattr__(self, "rects", rects)
        _validate_tree_overlap(rects)
        poly = _trace_outer_polygon(rects)
        object.__setattr__(self, "_polygon", tuple(poly))

    def bounding_box(self) -> tuple[float, float, float, float]:
        return (
            min(r.x_min for r in self.rects),
            max(r.x_max for r in self.rects),
            min(r.y_min for r in self.rects),
            max(r.y_max for r in self.rects),
        )

    def vertices(self) -> np.ndarray:
        """Outer boundary polygon, counterclockwise, minimal vertex list."""
        return np.array(self._polygon)


DomainSpec = Union[Disc, Rect, RectUnion]


# ---------------------------------------------------------------------------
# Rectangle-union validation and outer boundary tracing
# ---------------------------------------------------------------------------

def _overlap_kind(a: Rect, b: Rect) -> str:
    """'area' | 'edge' | 'corner' | 'none' for the closed intersection."""
    ox = min(a.x_max, b.x_max) - max(a.x_min, b.x_min)
    oy = min(a.y_max, b.y_max) - max(a.y_min, b.y_min)
    if ox < 0 or oy < 0:
        return "none"
    if ox > 0 and oy > 0:
        return "area"
    if ox == 0 and oy == 0:
        return "corner"
    return "edge"


def _validate_tree_overlap(rects: tuple[Rect, ...]) -> None:
    n = len(rects)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            kind = _overlap_kind(rects[i], rects[j])
            if kind == "corner":
                raise DegenerateDomain(
                    f"rectangles {i} and {j} touch only at a corner (pinch point)")
            if kind != "none":
                edges.append((i, j))
    if len(edges) != n - 1:
        raise DegenerateDomain(
            f"rectangle adjacency graph must be a tree: {n} members, "
            f"{len(edges)} adjacencies")
    parent = list(range(n))

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri == rj:
            raise DegenerateDomain("rectangle adjacency graph contains a cycle")
        parent[ri] = rj
    if len({find(k) for k in range(n)}) != 1:
        raise DegenerateDomain("rectangle union is disconnected")


def _trace_outer_polygon(rects: tuple[Rect, ...]) -> list[complex]:
    xs = sorted({v for r in rects for v in (r.x_min, r.x_max)})
    ys = sorted({v for r in rects for v in (r.y_min, r.y_max)})
    nx, ny = len(xs) - 1, len(ys) - 1
    inside = np.zeros((nx, ny), dtype=bool)
    for r in rects:
        i0, i1 = xs.index(r.x_min), xs.index(r.x_max)
        j0, j1 = ys.index(r.y_min), ys.index(r.y_max)
        inside[i0:i1, j0:j1] = True

    def cell(i, j):
        return inside[i, j] if 0 <= i < nx and 0 <= j < ny else False

    # Directed boundary edges with the interior on the left (counterclockwise
    # outer loop): interior west of a vertical edge -> walk north, east ->
    # south; interior north of a horizontal edge -> walk east, south -> west.
    out_edges: dict[tuple[float, float], tuple[float, float]] = {}

    def add_edge(p, q):
        if p in out_edges:
            raise DegenerateDomain("pinch point on union boundary")
        out_edges[p] = q

    for i in range(nx + 1):
        for j in range(ny):
            west, east = cell(i - 1, j), cell(i, j)
            if west == east:
                continue
            lo, hi = (xs[i], ys[j]), (xs[i], ys[j + 1])
            if west:
                add_edge(lo, hi)
            else:
                add_edge(hi, lo)
    for i in range(nx):
        for j in range(ny + 1):
            south, north = cell(i, j - 1), cell(i, j)
            if south == north:
                continue
            lo, hi = (xs[i], ys[j]), (xs[i + 1], ys[j])
            if north:
                add_edge(lo, hi)
            else:
                add_edge(hi, lo)

    start = min(out_edges)
    loop = [start]
    cur = out_edges[start]
    while cur != start:
        loop.append(cur)
        cur = out_edges[cur]
    if len(loop) != len(out_edges):
        raise DegenerateDomain("union boundary is not a single closed loop")

    # Merge collinear runs into a minimal vertex list.
    verts: list[tuple[float, float]] = []
    m = len(loop)
    for k in range(m):
        prev, here, nxt = loop[k - 1], loop[k], loop[(k + 1) % m]
        d1 = (here[0] - prev[0], here[1] - prev[1])
        d2 = (nxt[0] - here[0], nxt[1] - here[1])
        if d1[0] * d2[1] - d1[1] * d2[0] != 0:
            verts.append(here)
    return [complex(x, y) for x, y in verts]


# ---------------------------------------------------------------------------
# Geometry queries
# ---------------------------------------------------------------------------

def _polygon_of(domain: Rect | RectUnion) -> np.ndarray:
    return domain.vertices()


def _point_segment_distance(points: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distances from each point to the nearest of the segments (a[k], b[k])."""
    p = points[:, None]
    a, b = a[None, :], b[None, :]
    ab = b - a
    denom = np.abs(ab) ** 2
    t = np.clip(((p - a) * np.conj(ab)).real / denom, 0.0, 1.0)
    proj = a + t * ab
    return np.min(np.abs(p - proj), axis=1)


def contains(domain: DomainSpec, points, closed: bool = True) -> np.ndarray:
    """Membership test, vectorized over complex ``points``.

    ``closed=True`` tests the closure, ``closed=False`` the open domain.
    """
    pts = np.atleast_1d(np.asarray(points, dtype=np.complex128))
    if isinstance(domain, Disc):
        d = np.abs(pts - domain.center)
        return d <= domain.radius if closed else d < domain.radius
    if isinstance(domain, Rect):
        x, y = pts.real, pts.imag
        if closed:
            return ((x >= domain.x_min) & (x <= domain.x_max)
                    & (y >= domain.y_min) & (y <= domain.y_max))
        return ((x > domain.x_min) & (x < domain.x_max)
                & (y > domain.y_min) & (y < domain.y_max))
    result = np.zeros(pts.shape, dtype=bool)
    for r in domain.rects:
        result |= contains(r, pts, closed=True)
    if not closed:
        # Interior of the union: inside some closed member and strictly
        # away from the outer boundary (the union has no holes).
        verts = _polygon_of(domain)
        a, b = verts, np.roll(verts, -1)
        result &= _point_segment_distance(pts, a, b) > 0
    return result


def clearance(domain: DomainSpec, points) -> np.ndarray:
    """Signed distance from each point to the domain boundary.

    Positive outside, negative inside, zero on the boundary.  For
    rectangle unions the distance is measured to the outer boundary
    polygon, which is exact because validated unions have no holes.
    """
    pts = np.atleast_1d(np.asarray(points, dtype=np.complex128))
    if isinstance(domain, Disc):
        return np.abs(pts - domain.center) - domain.radius
    verts = _polygon_of(domain)
    a, b = verts, np.roll(verts, -1)
    dist = _point_segment_distance(pts, a, b)
    sign = np.where(contains(domain, pts, closed=True), -1.0, 1.0)
    return sign * dist


def diameter(domain: DomainSpec) -> float:
    if isinstance(domain, Disc):
        return 2.0 * domain.radius
    x0, x1, y0, y1 = domain.bounding_box()
    return math.hypot(x1 - x0, y1 - y0)


def interior_point(domain: DomainSpec) -> complex:
    """A point guaranteed to lie in the open domain."""
    if isinstance(domain, Disc):
        return domain.center
    if isinstance(domain, Rect):
        return complex((domain.x_min + domain.x_max) / 2,
                       (domain.y_min + domain.y_max) / 2)
    largest = max(domain.rects,
                  key=lambda r: (r.x_max - r.x_min) * (r.y_max - r.y_min))
    return interior_point(largest)


def inradius_about(domain: DomainSpec, center: complex = 0j) -> float:
    """Radius of the largest disc about ``center`` inside the domain.

    Zero when ``center`` is not an interior point.
    """
    c = clearance(domain, center)[0]
    return float(-c) if c < 0 else 0.0


def contains_closure(outer: DomainSpec, inner: DomainSpec) -> bool:
    """Whether the closure of ``inner`` lies in the open set ``outer``."""
    if isinstance(inner, Disc):
        if isinstance(outer, Disc):
            return abs(inner.center - outer.center) + inner.radius < outer.radius
        # Distance from the center to the outer boundary must exceed the
        # radius; exact because validated domains have no holes.
        c = clearance(outer, inner.center)[0]
        return c < 0 and -c > inner.radius
    verts = _polygon_of(inner)
    if isinstance(outer, Disc):
        return bool(np.all(np.abs(verts - outer.center) < outer.radius))
    if not np.all(clearance(outer, verts) < 0):
        return False
    # No inner edge may touch or cross the outer boundary.
    overts = _polygon_of(outer)
    oa, ob = overts, np.roll(overts, -1)
    a, b = verts, np.roll(verts, -1)
    return float(np.min(_segment_segment_distance(a, b, oa, ob))) > 0.0


def _segment_segment_distance(a1: np.ndarray, b1: np.ndarray,
                              a2: np.ndarray, b2: np.ndarray) -> np.ndarray:
    """Pairwise min distances between segment family 1 and family 2.

    Returns an array of shape (len(a1),): for each segment in family 1
    the distance to the nearest segment of family 2 (0 when they cross).
    """
    m, n = a1.size, a2.size
    p1, q1 = a1[:, None], b1[:, None]
    p2, q2 = a2[None, :], b2[None, :]

    def orient(p, q, r):
        return np.sign((q - p).real * (r - p).imag - (q - p).imag * (r - p).real)

    o1 = orient(p1, q1, p2)
    o2 = orient(p1, q1, q2)
    o3 = orient(p2, q2, p1)
    o4 = orient(p2, q2, q1)
    crossing = (o1 * o2 < 0) & (o3 * o4 < 0)

    def seg_point(p, q, r):
        pq = q - p
        denom = np.abs(pq) ** 2
        denom = np.where(denom == 0, 1.0, denom)
        t = np.clip(((r - p) * np.conj(pq)).real / denom, 0.0, 1.0)
        return np.abs(r - (p + t * pq))

    d = np.minimum.reduce([
        seg_point(p1, q1, p2), seg_point(p1, q1, q2),
        seg_point(p2, q2, p1), seg_point(p2, q2, q1),
    ])
    d = np.where(crossing, 0.0, d)
    return np.min(d, axis=1)


# ---------------------------------------------------------------------------
# Boundary sampling
# ---------------------------------------------------------------------------

def boundary(domain: DomainSpec, density: float = 10.0) -> SampledCurve:
    """Positively oriented closed sampling of the domain boundary.

    ``density`` is points per unit arclength.  The returned curve carries
    parameters in [0, 1) and a vectorized source callable, so downstream
    refinement samples the true boundary.
    """
    if not (density > 0 and math.isfinite(density)):
        raise ValueError("density must be positive and finite")
    if isinstance(domain, Disc):
        c, r = domain.center, domain.radius
        n = max(16, math.ceil(2 * math.pi * r * density))
        t = np.arange(n) / n

        def source(u):
            u = np.asarray(u, dtype=np.float64)
            return c + r * np.exp(2j * np.pi * u)

        return SampledCurve(source(t), True, t, source)

    verts = _polygon_of(domain)
    edges = np.roll(verts, -1) - verts
    lengths = np.abs(edges)
    total = float(np.sum(lengths))
    knots = np.concatenate([[0.0], np.cumsum(lengths)]) / total

    def source(u):
        u = np.asarray(u, dtype=np.float64) % 1.0
        k = np.clip(np.searchsorted(knots, u, side="right") - 1, 0, verts.size - 1)
        local = (u - knots[k]) / (knots[k + 1] - knots[k])
        return verts[k] + local * edges[k]

    t_list = []
    for k in range(verts.size):
        pieces = max(1, math.ceil(lengths[k] * density))
        t_list.append(knots[k] + (knots[k + 1] - knots[k]) * np.arange(pieces) / pieces)
    t = np.concatenate(t_list)
    return SampledCurve(source(t), True, t, source)

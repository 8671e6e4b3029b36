"""Pixel-grid classification, component census, and boundary extraction.

``classify_grid`` runs the same escape/cycle/budget semantics as
``orbits.iterate_orbit`` for every pixel center simultaneously; the
vectorized loop and the scalar loop share evaluation code paths, so a
grid cell is classified exactly as the corresponding single point would
be.  The component census is a union-find labeling of one suspect class;
its boundary against the other classes is the pixel-level approximation
of the Julia set.  Undecided pixels are excluded from every census so
heuristic uncertainty can never silently merge components.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .domains import Rect
from .errors import RadiusOutsideWindow
from .expressions import FunctionExpression, evaluate_with_overflow
from .orbits import OrbitPolicy, PointClass

__all__ = [
    "GridSpec",
    "PixelClassification",
    "ComponentStat",
    "ComponentLabeling",
    "SpidersWebReport",
    "classify_grid",
    "label_components",
    "boundary_pixels",
    "spiders_web_probe",
    "classification_from_array",
    "write_ppm",
    "PALETTE",
]

# Fixed output palette (PPM): class -> RGB.
PALETTE = {
    PointClass.UNBOUNDED_SUSPECT: (255, 255, 255),
    PointClass.BOUNDED_SUSPECT: (0, 0, 0),
    PointClass.UNDECIDED: (128, 128, 128),
}
BOUNDARY_RGB = (255, 0, 0)


@dataclass(frozen=True)
class GridSpec:
    """Raster window and resolution; pixel centers are window-interior."""

    window: Rect
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs at least 2x2 pixels")

    @property
    def dx(self) -> float:
        return (self.window.x_max - self.window.x_min) / self.nx

    @property
    def dy(self) -> float:
        return (self.window.y_max - self.window.y_min) / self.ny

    @property
    def aspect_distortion(self) -> float:
        """dx/dy; 1.0 means square pixels (reported, never corrected)."""
        return self.dx / self.dy

    def x_centers(self) -> np.ndarray:
        return self.window.x_min + (np.arange(self.nx) + 0.5) * self.dx

    def y_centers(self) -> np.ndarray:
        return self.window.y_min + (np.arange(self.ny) + 0.5) * self.dy

    def pixel_centers(self) -> np.ndarray:
        """Complex centers, shape (ny, nx); row iy has increasing y."""
        return self.x_centers()[None, :] + 1j * self.y_centers()[:, None]


@dataclass(frozen=True)
class PixelClassification:
    """Per-pixel suspect classes over a grid, with the policy that made them.

    ``classes`` has shape (ny, nx), values from :class:`PointClass`,
    indexed [iy, ix] with iy increasing upward in the plane.
    """

    grid: GridSpec
    classes: np.ndarray
    policy: OrbitPolicy

    def __post_init__(self):
        if self.classes.shape != (self.grid.ny, self.grid.nx):
            raise ValueError("classes array does not match grid dimensions")


def classification_from_array(classes: np.ndarray, window: Rect | None = None,
                              policy: OrbitPolicy | None = None) -> PixelClassification:
    """Wrap a raw class array (tests, file round-trips) in the result type."""
    classes = np.asarray(classes, dtype=np.uint8)
    ny, nx = classes.shape
    if window is None:
        window = Rect(0.0, float(nx), 0.0, float(ny))
    return PixelClassification(GridSpec(window, nx, ny), classes,
                               policy or OrbitPolicy())


def classify_grid(f: FunctionExpression, grid: GridSpec,
                  policy: OrbitPolicy) -> PixelClassification:
    """Classify every pixel center; identical to classify_point per pixel.

    The iteration is vectorized over the active pixel set with the same
    stopping rules as the scalar orbit loop: escape on radius or
    overflow, cycle lock only after a replayed full period confirms a
    near-return, bounded/undecided split on budget exhaustion.
    """
    z0 = grid.pixel_centers().ravel()
    n = z0.size
    w = policy.cycle_window

    z = z0.copy()
    active = np.ones(n, dtype=bool)
    kind = np.zeros(n, dtype=np.uint8)  # 0 pending, 1 escaped, 2 cycle, 3 budget
    max_mod = np.abs(z)
    history = np.zeros((w, n), dtype=np.complex128)
    history[0] = z  # slot s % w holds the orbit point at step s
    pending_due = np.full(n, -1, dtype=np.int64)
    pending_target = np.zeros(n, dtype=np.complex128)
    pending_period = np.zeros(n, dtype=np.int64)

    for step in range(1, policy.budget + 1):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        z_new, overflowed = evaluate_with_overflow(f, z[idx])
        m = np.abs(z_new)
        np.maximum.at(max_mod, idx, m)

        escaped = overflowed | (m >= policy.escape_radius)
        esc_idx = idx[escaped]
        kind[esc_idx] = 1
        active[esc_idx] = False

        live = idx[~escaped]
        z_live = z_new[~escaped]

        due_now = pending_due[live] == step
        if due_now.any():
            confirm = live[due_now]
            hit = np.abs(z_live[due_now] - pending_target[confirm]) < policy.cycle_tol
            locked = confirm[hit]
            kind[locked] = 2
            active[locked] = False
            pending_due[confirm[~hit]] = -1
            still = ~np.isin(live, locked, assume_unique=True)
            live = live[still]
            z_live = z_live[still]

        scan = pending_due[live] < 0
        if scan.any():
            scan_idx = live[scan]
            z_scan = z_live[scan]
            unresolved = np.ones(scan_idx.size, dtype=bool)
            for lag in range(1, min(step, w) + 1):
                if not unresolved.any():
                    break
                cand = history[(step - lag) % w, scan_idx]
                near = unresolved & (np.abs(z_scan - cand) < policy.cycle_tol)
                if near.any():
                    hit_idx = scan_idx[near]
                    pending_due[hit_idx] = step + lag
                    pending_target[hit_idx] = z_scan[near]
                    pending_period[hit_idx] = lag
                    unresolved &= ~near

        rest = idx[~escaped]
        history[step % w, rest] = z_new[~escaped]
        z[rest] = z_new[~escaped]

    kind[active] = 3

    classes = np.empty(n, dtype=np.uint8)
    classes[kind == 1] = PointClass.UNBOUNDED_SUSPECT
    classes[kind == 2] = PointClass.BOUNDED_SUSPECT
    budget = kind == 3
    bounded = budget & (max_mod < policy.escape_radius / 100.0)
    classes[bounded] = PointClass.BOUNDED_SUSPECT
    classes[budget & ~bounded] = PointClass.UNDECIDED
    return PixelClassification(grid, classes.reshape(grid.ny, grid.nx), policy)


# ---------------------------------------------------------------------------
# Connected components (union-find)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComponentStat:
    component_id: int
    pixels: int
    bbox: tuple[int, int, int, int]  # ix_min, ix_max, iy_min, iy_max
    touches_window_edge: bool


@dataclass(frozen=True)
class ComponentLabeling:
    """Component ids over the grid for one target class.

    ``labels[iy, ix]`` is 0 outside the target class; component ids are
    assigned in row-major order of each component's first pixel, so they
    are stable across runs.  ``census`` is sorted by size descending.
    Components touching the window edge are unbounded candidates.
    """

    grid: GridSpec
    labels: np.ndarray
    census: tuple[ComponentStat, ...]
    target: PointClass
    connectivity: int


def label_components(classification: PixelClassification, target: PointClass,
                     connectivity: int = 4) -> ComponentLabeling:
    """Union-find labeling of the target class under 4- or 8-connectivity."""
    if connectivity not in (4, 8):
        raise ValueError("connectivity must be 4 or 8")
    mask = classification.classes == int(target)
    ny, nx = mask.shape
    flat = mask.ravel()
    parent = np.arange(flat.size, dtype=np.int64)

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    offsets = [(-1, 0), (0, -1)]
    if connectivity == 8:
        offsets += [(-1, -1), (-1, 1)]
    for iy in range(ny):
        base = iy * nx
        for ix in range(nx):
            if not flat[base + ix]:
                continue
            for dy, dx in offsets:
                jy, jx = iy + dy, ix + dx
                if 0 <= jy < ny and 0 <= jx < nx and flat[jy * nx + jx]:
                    union(base + ix, jy * nx + jx)

    labels = np.zeros(flat.size, dtype=np.int32)
    next_id = 0
    root_to_id: dict[int, int] = {}
    for k in np.nonzero(flat)[0]:
        r = find(int(k))
        if r not in root_to_id:
            next_id += 1
            root_to_id[r] = next_id
        labels[k] = root_to_id[r]
    labels = labels.reshape(ny, nx)

    stats = []
    for cid in range(1, next_id + 1):
        ys, xs = np.nonzero(labels == cid)
        touches = bool((ys.min() == 0) or (ys.max() == ny - 1)
                       or (xs.min() == 0) or (xs.max() == nx - 1))
        stats.append(ComponentStat(cid, int(ys.size),
                                   (int(xs.min()), int(xs.max()),
                                    int(ys.min()), int(ys.max())), touches))
    stats.sort(key=lambda s: (-s.pixels, s.component_id))
    return ComponentLabeling(classification.grid, labels, tuple(stats),
                             target, connectivity)


def boundary_pixels(classification: PixelClassification,
                    target: PointClass) -> np.ndarray:
    """Mask of target pixels with at least one non-target 4-neighbor.

    Neighbors outside the grid do not count, so a uniform grid has an
    empty boundary.
    """
    mask = classification.classes == int(target)
    edge = np.zeros_like(mask)
    edge[1:, :] |= mask[1:, :] & ~mask[:-1, :]
    edge[:-1, :] |= mask[:-1, :] & ~mask[1:, :]
    edge[:, 1:] |= mask[:, 1:] & ~mask[:, :-1]
    edge[:, :-1] |= mask[:, :-1] & ~mask[:, 1:]
    return edge


# ---------------------------------------------------------------------------
# Spider's-web probe
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpidersWebReport:
    """Per-radius evidence that the largest component loops around a center.

    For each radius the probe searches the largest component's pixel
    graph, restricted to pixels at that distance or more from the
    center, for a cycle with nonzero winding about the center.  All
    radii passing is heuristic evidence for a spider's-web structure.
    """

    center: complex
    per_radius: tuple[tuple[float, bool], ...]
    verdict: bool
    component_id: Optional[int]


def spiders_web_probe(labeling: ComponentLabeling, center: complex,
                      radii: list[float]) -> SpidersWebReport:
    """Search for surrounding pixel cycles in the largest target component."""
    radii = [float(r) for r in radii]
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly increasing")
    grid = labeling.grid
    win = grid.window
    for r in radii:
        if not (win.x_min < center.real - r and center.real + r < win.x_max
                and win.y_min < center.imag - r and center.imag + r < win.y_max):
            raise RadiusOutsideWindow(
                f"disc of radius {r} about {center} does not fit inside the window")

    if not labeling.census:
        return SpidersWebReport(center, tuple((r, False) for r in radii),
                                False, None)
    cid = labeling.census[0].component_id
    member = labeling.labels == cid
    xs = grid.x_centers()
    ys = grid.y_centers()
    px = xs[None, :] - center.real
    py = ys[:, None] - center.imag
    dist = np.hypot(px, py)

    results = []
    for r in radii:
        sub = member & (dist >= r)
        results.append((r, _has_surrounding_cycle(sub, xs, ys, center,
                                                  labeling.connectivity)))
    return SpidersWebReport(center, tuple(results), all(ok for _, ok in results), cid)


def _has_surrounding_cycle(mask: np.ndarray, xs: np.ndarray, ys: np.ndarray,
                           center: complex, connectivity: int) -> bool:
    """BFS with a winding sheet: a revisit on a different sheet is a loop.

    Steps between adjacent pixels count signed crossings of the ray
    x > center.x at y = center.y; reaching an already-visited pixel with
    a different accumulated crossing count proves a cycle of nonzero
    winding about the center.
    """
    ny, nx = mask.shape
    if connectivity == 8:
        steps = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]
    else:
        steps = [(-1, 0), (1, 0), (0, -1), (0, 1)]
    sheet = np.full(mask.shape, np.iinfo(np.int32).min, dtype=np.int32)
    unseen = sheet[0, 0]
    cy = center.imag

    def crossing(iy1: int, ix1: int, iy2: int, ix2: int) -> int:
        y1, y2 = ys[iy1], ys[iy2]
        up = (y1 <= cy) and (y2 > cy)
        down = (y2 <= cy) and (y1 > cy)
        if not (up or down):
            return 0
        x1, x2 = xs[ix1], xs[ix2]
        t = (cy - y1) / (y2 - y1)
        x_cross = x1 + t * (x2 - x1)
        if x_cross <= center.real:
            return 0
        return 1 if up else -1

    coords = np.argwhere(mask)
    for sy, sx in coords:
        if sheet[sy, sx] != unseen:
            continue
        sheet[sy, sx] = 0
        stack = [(int(sy), int(sx))]
        while stack:
            iy, ix = stack.pop()
            s = sheet[iy, ix]
            for dy, dx in steps:
                jy, jx = iy + dy, ix + dx
                if not (0 <= jy < ny and 0 <= jx < nx and mask[jy, jx]):
                    continue
                s2 = s + crossing(iy, ix, jy, jx)
                if sheet[jy, jx] == unseen:
                    sheet[jy, jx] = s2
                    stack.append((jy, jx))
                elif sheet[jy, jx] != s2:
                    return True
    return False


# ---------------------------------------------------------------------------
# PPM output
# ---------------------------------------------------------------------------

def write_ppm(path, classification: PixelClassification,
              boundary_overlay: np.ndarray | None = None) -> None:
    """Binary P6 image, maxval 255, top row = largest imaginary part.

    Palette: unbounded suspect white, bounded suspect black, undecided
    gray; the optional boundary overlay is drawn red on top.
    """
    classes = classification.classes
    ny, nx = classes.shape
    rgb = np.zeros((ny, nx, 3), dtype=np.uint8)
    for cls, color in PALETTE.items():
        rgb[classes == int(cls)] = color
    if boundary_overlay is not None:
        rgb[boundary_overlay] = BOUNDARY_RGB
    rgb = rgb[::-1]  # image rows run top-down
    header = f"P6\n{nx} {ny}\n255\n".encode("ascii")
    from .fileio import atomic_write_bytes
    atomic_write_bytes(path, header + rgb.tobytes())

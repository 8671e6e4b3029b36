import math

import numpy as np
import pytest

from orbitplane.curves import SampledCurve, image_curve, winding_number
from orbitplane.domains import Disc, Rect, boundary
from orbitplane.errors import (AliasingUnresolved, CurveTooClose,
                               RefinementBudgetExceeded)
from orbitplane.expressions import _format_complex, parse

PI = math.pi


def polynomial_expression(coeffs):
    terms = [f"({_format_complex(complex(c))})*z^{k}"
             for k, c in enumerate(coeffs)]
    return parse("+".join(terms))


def test_winding_trivial():
    circle = boundary(Disc(0j, 1.0), 10.0)
    assert winding_number(circle, 0j) == 1
    assert winding_number(circle, 2.0 + 0j) == 0


def test_winding_square_and_coarse_refinement():
    square = boundary(Rect(-1, 1, -1, 1), 0.6)  # 4 corner samples only
    assert winding_number(square, 0.2 + 0.1j) == 1
    assert winding_number(square, 3.0 + 0j) == 0


def test_winding_orientation_reversal():
    curve = boundary(Rect(-1, 2, -1, 1), 3.0)
    for w in (0j, 0.5 + 0.2j, 1.5 - 0.5j):
        assert winding_number(curve.reversed(), w) == -winding_number(curve, w)


def test_winding_translation_equivariance():
    rng = np.random.default_rng(11)
    curve = boundary(Disc(0.3 - 0.2j, 1.5), 8.0)
    for _ in range(10):
        c = complex(rng.normal(), rng.normal())
        w = complex(rng.normal(scale=0.4), rng.normal(scale=0.4))
        assert winding_number(curve.translated(c), w + c) == winding_number(curve, w)


def test_winding_too_close_probe():
    circle = boundary(Disc(0j, 1.0), 10.0)
    with pytest.raises(CurveTooClose):
        winding_number(circle, complex(circle.points[5]), min_clearance=1e-3)


def test_winding_probe_on_curve_fails_cleanly():
    circle = boundary(Disc(0j, 1.0), 10.0)
    # a probe on the curve itself: refinement drives samples into the
    # clearance and raises rather than returning a bogus integer
    with pytest.raises((CurveTooClose, AliasingUnresolved)):
        winding_number(circle, 1.0 + 0j)


def test_double_wrap_image():
    f = parse("z^2")
    circle = boundary(Disc(0j, 1.0), 10.0)
    img = image_curve(f, circle)
    assert winding_number(img, 0j) == 2
    np.testing.assert_allclose(np.abs(img.points), 1.0, atol=1e-12)


def test_identity_image_is_identical():
    f = parse("z")
    circle = boundary(Disc(0j, 1.0), 10.0)
    img = image_curve(f, circle)
    assert np.array_equal(img.points, circle.points)


def test_image_refinement_max_step():
    f = parse("z^2")
    coarse = boundary(Disc(0j, 2.0), 1.0)
    img = image_curve(f, coarse, max_step=0.1)
    gaps = np.abs(np.roll(img.points, -1) - img.points)
    assert float(gaps.max()) <= 0.1
    # refined samples still lie on the true image circle |w| = 4
    np.testing.assert_allclose(np.abs(img.points), 4.0, atol=1e-12)


def test_image_refinement_budget():
    f = parse("z^2")
    coarse = boundary(Disc(0j, 2.0), 1.0)
    with pytest.raises(RefinementBudgetExceeded) as err:
        image_curve(f, coarse, max_step=1e-4, max_points=64)
    assert err.value.partial is not None
    assert len(err.value.partial) <= 64 + 32


def test_image_requires_closed_parameterized_curve():
    f = parse("z")
    open_curve = SampledCurve(np.array([0j, 1 + 0j, 2 + 0j]), closed=False)
    with pytest.raises(ValueError):
        image_curve(f, open_curve)
    bare = SampledCurve(np.array([0j, 1 + 0j, 1j]), closed=True)
    with pytest.raises(ValueError):
        image_curve(f, bare)


def test_winding_matches_root_counts():
    # argument principle against the companion-matrix root finder
    rng = np.random.default_rng(137)
    checked = 0
    while checked < 50:
        deg = int(rng.integers(1, 6))
        coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        x0 = rng.uniform(-2.0, 0.5)
        y0 = rng.uniform(-2.0, 0.5)
        rect = Rect(x0, x0 + rng.uniform(0.5, 2.5), y0, y0 + rng.uniform(0.5, 2.5))
        w = complex(rng.normal(), rng.normal())
        shifted = np.array(coeffs)
        shifted[0] -= w
        roots = np.roots(shifted[::-1]) if deg >= 1 else np.array([])
        # skip ill-conditioned draws with a root too near the rectangle edge
        margin = min((min(abs(r.real - rect.x_min), abs(r.real - rect.x_max),
                          abs(r.imag - rect.y_min), abs(r.imag - rect.y_max))
                      for r in roots), default=1.0)
        if margin < 1e-3:
            continue
        inside = sum(bool(rect.x_min < r.real < rect.x_max
                          and rect.y_min < r.imag < rect.y_max) for r in roots)
        p = polynomial_expression(coeffs)
        img = image_curve(p, boundary(rect, 30.0))
        assert winding_number(img, w) == inside
        checked += 1
    assert checked == 50


def test_curve_validation():
    with pytest.raises(ValueError):
        SampledCurve(np.array([1 + 0j]), closed=True)
    with pytest.raises(ValueError):
        SampledCurve(np.array([1 + 0j, 1 + 0j, 2 + 0j]), closed=False)
    with pytest.raises(ValueError):
        SampledCurve(np.array([1 + 0j, 2 + 0j, 1 + 0j]), closed=True)

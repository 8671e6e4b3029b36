import math

import numpy as np
import pytest

from orbitplane.errors import InvalidRadius
from orbitplane.expressions import parse
from orbitplane.modulus import (DIVERGES, NOT_DIVERGING, UNDECIDED,
                                derive_disc_sequence, iterate_min_modulus,
                                max_modulus, min_modulus)

PI = math.pi

# Frozen 10^6-angle brute-force oracle values (dense uniform sampling).
SIN_M1 = 0.8414709848078965        # m(1) for sin z
SIN_M2 = 0.7456241416655579        # m(m(1))
COSZ_M1 = 0.45969769413186023      # m(1) for cos z + z
COSZ_M2 = 0.4364889705649081
SIN_MAX1 = 1.1752011936438014      # max |sin| on |z| = 1


def test_squared_modulus_is_constant():
    f = parse("z^2")
    ext = min_modulus(f, 2.0)
    assert ext.value == pytest.approx(4.0, rel=1e-12)
    assert max_modulus(f, 2.0).value == pytest.approx(4.0, rel=1e-12)


def test_sin_min_bounded_by_real_axis():
    # the circle |z| = 3 meets the real axis where |sin| <= |sin 3|
    ext = min_modulus(parse("sin(z)"), 3.0)
    assert ext.value <= abs(math.sin(3.0)) + 1e-9


def test_example_function_min_at_large_radius():
    f = parse("-10*z*exp(-z) - 0.5*z")
    ext = min_modulus(f, 100.0)
    assert ext.value <= abs(complex(f(100.0))) + 1e-9
    assert ext.value == pytest.approx(50.0, rel=1e-2)


def test_max_modulus_cos_plus_z_lower_bound():
    ext = max_modulus(parse("cos(z) + z"), 2 * PI)
    assert ext.value >= math.cosh(2 * PI) - 2 * PI


def test_sin_max_against_frozen_oracle():
    ext = max_modulus(parse("sin(z)"), 1.0)
    assert ext.value == pytest.approx(SIN_MAX1, rel=1e-6)


def test_min_is_at_most_max_and_extremum_attained():
    rng = np.random.default_rng(3)
    f = parse("cos(z) + z")
    for r in rng.uniform(0.2, 10.0, 5):
        lo = min_modulus(f, float(r))
        hi = max_modulus(f, float(r))
        assert lo.value <= hi.value
        for ext in (lo, hi):
            at = abs(complex(f(r * np.exp(1j * ext.arg_extremum))))
            assert at == pytest.approx(ext.value, rel=1e-9, abs=1e-12)
            assert 0.0 <= ext.arg_extremum < 2 * PI
            assert ext.samples_used >= 4096


def test_circle_symmetry_for_real_coefficients():
    # real coefficients: the modulus on the circle is conjugation
    # symmetric, so both half circles attain the same minimum
    for source in ("sin(z)", "cos(z) + z", "-10*z*exp(-z) - 0.5*z"):
        f = parse(source)
        for r in (0.7, 2.0, 5.5):
            th = PI * np.arange(20000) / 20000
            upper = np.abs(f(r * np.exp(1j * th)))
            lower = np.abs(f(r * np.exp(1j * (th + PI))))
            assert abs(upper.min() - np.abs(f(r * np.exp(-1j * th))).min()) < 1e-9
            assert min(upper.min(), lower.min()) == pytest.approx(
                min_modulus(f, r).value, rel=1e-4)


def test_invalid_radius():
    f = parse("z^2")
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(InvalidRadius):
            min_modulus(f, bad)
    with pytest.raises(ValueError):
        min_modulus(f, 1.0, n_coarse=32)


def test_iterate_squaring_diverges():
    rep = iterate_min_modulus(parse("z^2"), 2.0, n_max=50, blow_up=1e100)
    assert rep.verdict == DIVERGES
    np.testing.assert_allclose(rep.sequence[:4], [2, 4, 16, 256], rtol=1e-9)
    assert len(rep.sequence) - 1 <= 10
    assert rep.witness["value"] > 1e100


def test_iterate_sin_never_diverges():
    # m(r) <= 1 for every r (the circle meets the real axis), so the
    # sequence cannot blow up; the slow parabolic decay toward 0 is not
    # detectable as a revisit at practical budgets, so UNDECIDED is also
    # an acceptable verdict here.
    rep = iterate_min_modulus(parse("sin(z)"), 1.0, n_max=50)
    assert rep.verdict in (NOT_DIVERGING, UNDECIDED)
    assert max(rep.sequence) <= 1.0
    assert all(b < a for a, b in zip(rep.sequence, rep.sequence[1:]))


def test_iterate_revisit_detection():
    # |z^0| = 1 on every circle: the map is constant at 1, an immediate
    # revisit of the start value from r0 = 1
    rep = iterate_min_modulus(parse("z^0"), 1.0, n_max=10)
    assert rep.verdict == NOT_DIVERGING
    assert rep.witness.get("revisits") == 0


def test_iterate_floor_detection():
    # f = z has m(r) = r; scaling down by 1e-30 crosses the floor fast
    rep = iterate_min_modulus(parse("z/1e30"), 1.0, n_max=10)
    assert rep.verdict == NOT_DIVERGING
    assert "floor" in rep.witness


def test_sequence_consistency_invariant():
    f = parse("cos(z) + z")
    rep = iterate_min_modulus(f, 1.0, n_max=4)
    for a, b in zip(rep.sequence, rep.sequence[1:]):
        assert min_modulus(f, a).value == pytest.approx(b, rel=1e-9)


def test_disc_sequence_squaring():
    seq = derive_disc_sequence(parse("z^2"), 2.0, 4)
    radii = [d.radius for d in seq.discs]
    np.testing.assert_allclose(radii, [2, 4, 16, 256], rtol=1e-9)
    assert all(d.center == 0j for d in seq.discs)


def test_disc_sequence_sin_against_frozen_oracle():
    seq = derive_disc_sequence(parse("sin(z)"), 1.0, 3)
    radii = [d.radius for d in seq.discs]
    assert radii[0] == 1.0
    assert radii[1] == pytest.approx(SIN_M1, rel=1e-6)
    assert radii[2] == pytest.approx(SIN_M2, rel=1e-6)


def test_disc_sequence_cos_plus_z_against_frozen_oracle():
    seq = derive_disc_sequence(parse("cos(z) + z"), 1.0, 3)
    radii = [d.radius for d in seq.discs]
    assert radii[1] == pytest.approx(COSZ_M1, rel=1e-6)
    assert radii[2] == pytest.approx(COSZ_M2, rel=1e-6)


def test_disc_sequence_stops_with_iteration():
    # the iteration collapses below the floor after one step, so only
    # the surviving radii become discs and the report explains why
    seq = derive_disc_sequence(parse("z/1e30"), 1.0, 5)
    assert len(seq.discs) == 2
    assert seq.discs[0].radius == 1.0
    assert seq.discs[1].radius == pytest.approx(1e-30, rel=1e-9)
    assert seq.report.verdict == NOT_DIVERGING
    assert "floor" in seq.report.witness

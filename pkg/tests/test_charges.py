import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asymdir.charges import (
    ConfigurationError,
    field_arrays,
    field_eval,
    in_domain,
    load_configuration,
    moment,
    moment_order,
    random_configuration,
    validate,
)

from .conftest import configurations


def test_validation_examples():
    cfg = validate([(1, 0, 0)])
    assert cfg.M == 1 and cfg.gamma_scale == 1
    assert validate([(1, 1, 2)]).gamma_scale == 4
    with pytest.raises(ConfigurationError, match="trivial field"):
        validate([(0, 0, 0), (0, 1, 0)])
    with pytest.raises(ConfigurationError, match="coincident charges"):
        validate([(1, 0, 0), (2, 0, 0)])
    with pytest.raises(ConfigurationError, match="empty configuration"):
        validate([])


def test_json_round_trip(tmp_path):
    cfg = validate([("1/2", "-3/4", 2), (-1, 0, "1/3")])
    path = tmp_path / "c.json"
    import json

    path.write_text(json.dumps(cfg.to_json()))
    assert load_configuration(path) == cfg


def test_float_input_rejected():
    with pytest.raises(ConfigurationError):
        validate([(0.5, 0, 0)])


def test_field_examples():
    fv = field_eval(validate([(1, 0, 0)]), (1, 0))
    assert (fv.X, fv.Y) == (1.0, 0.0)
    fv = field_eval(validate([(1, 1, 0), (1, -1, 0)]), (0, 0))
    assert (fv.X, fv.Y) == (0.0, 0.0)
    fv = field_eval(validate([(2, 0, 0)]), (0, 2))
    assert fv.X == 0.0 and fv.Y == pytest.approx(0.5, rel=1e-15)
    with pytest.raises(ConfigurationError, match="singular point"):
        field_eval(validate([(1, 0, 0)]), (0, 0))


def direct_field(cfg, p):
    # second, independently written summation (complex form of the Coulomb field)
    z = complex(*p)
    w = sum(float(c.a) * (z - complex(float(c.x), float(c.y))) / abs(z - complex(float(c.x), float(c.y))) ** 3 for c in cfg.charges)
    return w.real, w.imag


@given(configurations(), st.floats(-5, 5), st.floats(-5, 5))
def test_field_matches_independent_sum(cfg, px, py):
    d = min(math.hypot(px - float(c.x), py - float(c.y)) for c in cfg.charges)
    if d < 1e-3:
        return
    fv = field_eval(cfg, (px, py))
    X, Y = direct_field(cfg, (px, py))
    scale = sum(abs(float(c.a)) / math.hypot(px - float(c.x), py - float(c.y)) ** 2 for c in cfg.charges)
    assert abs(fv.X - X) <= 1e-12 * scale and abs(fv.Y - Y) <= 1e-12 * scale
    Xa, Ya = field_arrays(cfg, np.array([px]), np.array([py]))
    assert abs(Xa[0] - fv.X) <= 1e-12 * scale


@given(configurations(), st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=50)
def test_translation_invariance(cfg, sx, sy):
    moved = validate([(c.a, c.x + sx, c.y + sy) for c in cfg.charges])
    p = (7.25, -6.5)
    a, b = field_eval(cfg, p), field_eval(moved, (p[0] + sx, p[1] + sy))
    scale = abs(a.X) + abs(a.Y) + 1e-300
    assert abs(a.X - b.X) <= 1e-12 * scale * 10 and abs(a.Y - b.Y) <= 1e-12 * scale * 10


def test_single_charge_vertical_zero_line():
    cfg = validate([(1, "1/3", "1/2")])
    left = field_eval(cfg, (1 / 3 - 1e-6, 4.0)).X
    right = field_eval(cfg, (1 / 3 + 1e-6, 4.0)).X
    assert left < 0 < right
    assert field_eval(validate([(1, 0, 0)]), (0.0, 3.0)).X == 0.0


def test_moment_examples(dipole):
    cfg = validate([(2, 1, 1), (-5, 0, 3)])
    assert moment(cfg, 0, 0) == -3
    assert moment(dipole, 1, 0) == 2
    assert moment(dipole, 0, 1) == 0
    assert moment_order(validate([(1, 0, 0)])).order_L == 0
    assert moment_order(dipole).order_L == 1
    assert moment_order(validate([(1, 1, 0), (1, -1, 0)])).order_L == 0


@given(configurations(max_M=4))
@settings(max_examples=60)
def test_moment_order_brute_force(cfg):
    L = moment_order(cfg).order_L
    assert L <= 2 * cfg.M - 1
    assert all(moment(cfg, l, i) == 0 for tot in range(L) for l in range(tot + 1) for i in [tot - l])
    assert any(moment(cfg, l, L - l) != 0 for l in range(L + 1))


def test_target_L_draws():
    rng = np.random.default_rng(3)
    for L in range(3):
        cfg = random_configuration(rng, 3, target_L=L)
        assert moment_order(cfg).order_L == L
    special = random_configuration(rng, 3, special_case=True)
    assert all(c.y == 0 and c.x > 0 for c in special.charges)


@given(configurations(max_M=4))
@settings(max_examples=60)
def test_moment_order_within_tighter_bound(cfg):
    # polynomials of degree M-1 interpolate any values at M distinct points, so L <= M-1 always
    assert moment_order(cfg).order_L <= cfg.M - 1


def test_in_domain_examples():
    one = validate([(1, 0, 0)])
    assert in_domain((0, 10), one, 0.1, "I")
    assert not in_domain((10, 0), one, 0.1, "I")
    assert in_domain((10, 0), one, 0.1, "II")
    assert in_domain((0.5, 2), validate([(1, 0, 1)]), 0.1, "I")
    with pytest.raises(ValueError):
        in_domain((0, 10), one, 0.5, "I")

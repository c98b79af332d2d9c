"""Point-charge configurations, exact moments and the planar field.

A configuration is a finite list of charges ``(a_j, x_j, y_j)`` with exact
rational data.  The field is

    X = sum a_j (x - x_j) / r_j**3,   Y = sum a_j (y - y_j) / r_j**3.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exact import as_rational, format_rational

log = logging.getLogger(__name__)

TYPE_I = "I"
TYPE_II = "II"
DOMAINS = (TYPE_I, TYPE_II)


class ConfigurationError(ValueError):
    """Raised for configurations that violate the model's invariants."""


@dataclass(frozen=True)
class Charge:
    a: Fraction
    x: Fraction
    y: Fraction


@dataclass(frozen=True)
class ChargeConfiguration:
    charges: tuple[Charge, ...]

    @property
    def M(self) -> int:
        return len(self.charges)

    @property
    def gamma_scale(self) -> Fraction:
        return 1 + max(abs(c.x) + abs(c.y) for c in self.charges)

    @property
    def amp_max(self) -> Fraction:
        return max(abs(c.a) for c in self.charges)

    @property
    def total_abs_charge(self) -> float:
        return float(sum(abs(c.a) for c in self.charges))

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        a = np.array([float(c.a) for c in self.charges])
        x = np.array([float(c.x) for c in self.charges])
        y = np.array([float(c.y) for c in self.charges])
        return a, x, y

    def negated(self) -> "ChargeConfiguration":
        return ChargeConfiguration(tuple(Charge(-c.a, c.x, c.y) for c in self.charges))

    def to_json(self) -> dict:
        return {
            "charges": [
                {"a": format_rational(c.a), "x": format_rational(c.x), "y": format_rational(c.y)}
                for c in self.charges
            ]
        }

    def __str__(self) -> str:
        body = ", ".join(
            f"({format_rational(c.a)} @ {format_rational(c.x)},{format_rational(c.y)})" for c in self.charges
        )
        return f"[{body}]"


def validate(raw) -> ChargeConfiguration:
    """Build a checked configuration.

    ``raw`` may be a ``ChargeConfiguration``, a ``{"charges": [...]}``
    mapping, or a sequence of ``(a, x, y)`` triples / ``{"a","x","y"}``
    mappings.  Values must be ints, Fractions or rational strings.
    """
    if isinstance(raw, ChargeConfiguration):
        items = [(c.a, c.x, c.y) for c in raw.charges]
    else:
        if isinstance(raw, dict):
            if "charges" not in raw:
                raise ConfigurationError("missing 'charges' key")
            raw = raw["charges"]
        items = []
        for entry in raw:
            if isinstance(entry, dict):
                try:
                    items.append((entry["a"], entry["x"], entry["y"]))
                except KeyError as exc:
                    raise ConfigurationError(f"charge entry missing field {exc}") from None
            else:
                items.append(tuple(entry))
    if not items:
        raise ConfigurationError("empty configuration")
    charges = []
    for item in items:
        if len(item) != 3:
            raise ConfigurationError(f"charge {item!r} is not an (a, x, y) triple")
        try:
            a, x, y = (as_rational(v) for v in item)
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(str(exc)) from None
        charges.append(Charge(a, x, y))
    if all(c.a == 0 for c in charges):
        raise ConfigurationError("trivial field")
    locations = [(c.x, c.y) for c in charges]
    if len(set(locations)) != len(locations):
        raise ConfigurationError("coincident charges")
    return ChargeConfiguration(tuple(charges))


def load_configuration(path) -> ChargeConfiguration:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return validate(data)


# ---------------------------------------------------------------------------
# field evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldValue:
    X: float
    Y: float
    min_distance: float


def field_eval(config: ChargeConfiguration, point: tuple[float, float]) -> FieldValue:
    px, py = float(point[0]), float(point[1])
    X = Y = 0.0
    dmin = math.inf
    for c in config.charges:
        dx = px - float(c.x)
        dy = py - float(c.y)
        r2 = dx * dx + dy * dy
        if r2 == 0.0:
            raise ConfigurationError("singular point")
        r = math.sqrt(r2)
        dmin = min(dmin, r)
        w = float(c.a) / (r2 * r)
        X += w * dx
        Y += w * dy
    return FieldValue(X, Y, dmin)


def field_arrays(config: ChargeConfiguration, xs, ys) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised (X, Y) on arrays of points (no singularity check)."""
    a, cx, cy = config.arrays()
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    X = np.zeros(np.broadcast(xs, ys).shape)
    Y = np.zeros_like(X)
    for aj, xj, yj in zip(a, cx, cy):
        dx = xs - xj
        dy = ys - yj
        r2 = dx * dx + dy * dy
        w = aj / (r2 * np.sqrt(r2))
        X += w * dx
        Y += w * dy
    return X, Y


def component_and_gradient(config: ChargeConfiguration, component: str, px: float, py: float):
    """Value of X or Y at a point, its gradient, and the local scale sum |a_j|/r_j**2."""
    val = gx = gy = scale = 0.0
    for c in config.charges:
        dx = px - float(c.x)
        dy = py - float(c.y)
        r2 = dx * dx + dy * dy
        r = math.sqrt(r2)
        a = float(c.a)
        r3 = r2 * r
        r5 = r3 * r2
        scale += abs(a) / r2
        if component == "X":
            val += a * dx / r3
            gx += a * (1.0 / r3 - 3.0 * dx * dx / r5)
            gy += a * (-3.0 * dx * dy / r5)
        else:
            val += a * dy / r3
            gx += a * (-3.0 * dx * dy / r5)
            gy += a * (1.0 / r3 - 3.0 * dy * dy / r5)
    return val, gx, gy, scale


def component_value(config: ChargeConfiguration, component: str, px: float, py: float) -> float:
    fv = field_eval(config, (px, py))
    return fv.X if component == "X" else fv.Y


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------


def _pow(base: Fraction, e: int) -> Fraction:
    # 0**0 == 1 is the convention the moment formulas need
    return Fraction(1) if e == 0 else base**e


def moment(config: ChargeConfiguration, l: int, i: int) -> Fraction:
    """Exact sum_j a_j x_j**l y_j**i."""
    if l < 0 or i < 0:
        raise ValueError("moment orders must be non-negative")
    return sum((c.a * _pow(c.x, l) * _pow(c.y, i) for c in config.charges), Fraction(0))


@dataclass(frozen=True)
class MomentTable:
    order_L: int
    moments: dict = field(default_factory=dict)

    def leading(self) -> dict:
        return {k: v for k, v in self.moments.items() if sum(k) == self.order_L}


def moment_order(config: ChargeConfiguration) -> MomentTable:
    """Smallest total degree L carrying a nonzero moment, with all moments up to L."""
    cap = 2 * config.M - 1
    table = {}
    for total in range(cap + 1):
        nonzero = False
        for l in range(total + 1):
            m = moment(config, l, total - l)
            table[(l, total - l)] = m
            nonzero = nonzero or m != 0
        if nonzero:
            if total > config.M - 1:
                log.info("moment order L=%d exceeds M-1=%d for %s", total, config.M - 1, config)
            return MomentTable(total, table)
    raise AssertionError(f"no nonzero moment up to degree 2M-1={cap}; arithmetic bug")


def in_domain(point: tuple[float, float], config: ChargeConfiguration, delta: float, domain: str) -> bool:
    """Membership in the Type I set D_delta or the Type II set H_delta."""
    if not 0.0 < delta < 0.5:
        raise ValueError("delta must lie in (0, 1/2)")
    x, y = float(point[0]), float(point[1])
    if domain == TYPE_II:
        x, y = y, x
        coords = [(float(c.y), float(c.x)) for c in config.charges]
    elif domain == TYPE_I:
        coords = [(float(c.x), float(c.y)) for c in config.charges]
    else:
        raise ValueError(f"unknown domain {domain!r}")
    if y == 0.0 or abs(x / y) > 1.0 - delta:
        return False
    for xj, yj in coords:
        if not abs(y) > abs(yj):
            return False
        if not (abs(x) + abs(xj)) / (abs(y) - abs(yj)) < 1.0:
            return False
    return True


# ---------------------------------------------------------------------------
# random configurations
# ---------------------------------------------------------------------------


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Exact basis of {v : rows . v = 0} by reduced row echelon form."""
    m = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][col]
        m[rank] = [v / pv for v in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for r, pcol in enumerate(pivots):
            v[pcol] = -m[r][fcol]
        basis.append(v)
    return basis


def random_configuration(
    rng: np.random.Generator,
    M: int,
    *,
    target_L: int | None = None,
    special_case: bool = False,
    max_den: int = 4,
    extent: int = 2,
    max_tries: int = 200,
) -> ChargeConfiguration:
    """Draw a random configuration with rational data.

    Coordinates are ``k/d`` in ``[-extent, extent]`` with ``d <= max_den``;
    ``special_case`` puts every charge on the positive x-axis.  When
    ``target_L`` is given, charge strengths are drawn from the exact null
    space of the lower-order moment conditions so the moment order is
    exactly ``target_L`` (raises if the geometry does not allow it).
    """
    for _ in range(max_tries):
        pts = set()
        while len(pts) < M:
            d = int(rng.integers(1, max_den + 1))
            if special_case:
                x = Fraction(int(rng.integers(1, extent * d + 1)), d)
                y = Fraction(0)
            else:
                x = Fraction(int(rng.integers(-extent * d, extent * d + 1)), d)
                d2 = int(rng.integers(1, max_den + 1))
                y = Fraction(int(rng.integers(-extent * d2, extent * d2 + 1)), d2)
            pts.add((x, y))
        pts = sorted(pts)
        if target_L is None or target_L == 0:
            a = [Fraction(int(rng.integers(1, 11)) * int(rng.choice([-1, 1])), int(rng.integers(1, 5))) for _ in pts]
            if target_L == 0 and sum(a) == 0:
                continue
        else:
            rows = [
                [_pow(x, l) * _pow(y, tot - l) for x, y in pts]
                for tot in range(target_L)
                for l in range(tot + 1)
            ]
            basis = _nullspace(rows, M)
            if not basis:
                continue
            a = [Fraction(0)] * M
            for v in basis:
                w = int(rng.integers(-5, 6))
                a = [ai + w * vi for ai, vi in zip(a, v)]
        if all(v == 0 for v in a):
            continue
        cfg = validate([(ai, x, y) for ai, (x, y) in zip(a, pts)])
        if target_L is not None and moment_order(cfg).order_L != target_L:
            continue
        return cfg
    raise ConfigurationError(f"could not draw a configuration with M={M}, L={target_L}")

"""Sign-product polynomials whose zero sets contain {X=0} and {Y=0}.

Write r_k^3 as an auxiliary indeterminate chi_k.  Clearing denominators in
``X_sigma = sum_j sigma_j a_j (x - x_j) / r_j^3`` gives the linear form
``sum_j sigma_j a_j (x - x_j) prod_{k != j} chi_k``.  The product of these
forms over all 2^M sign patterns is even in every chi_k, so substituting
``chi_k^2 = ((x-x_k)^2 + (y-y_k)^2)^3`` yields a genuine polynomial P(x, y).
The identity pattern sigma = (1, ..., 1) gives X itself, hence
{X=0} is contained in {P=0}.  Q is built the same way from (y - y_j).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .charges import ChargeConfiguration, component_and_gradient
from .exact import BiPoly, bipoly_substitute_even, format_rational

MAX_M = 3


@dataclass(frozen=True)
class SignPattern:
    signs: tuple[int, ...]


def sign_patterns(M: int) -> list[SignPattern]:
    return [SignPattern(s) for s in itertools.product((1, -1), repeat=M)]


@dataclass(frozen=True)
class ProductPolynomials:
    P: BiPoly
    Q: BiPoly

    @property
    def total_degree_P(self) -> int:
        return self.P.total_degree

    @property
    def total_degree_Q(self) -> int:
        return self.Q.total_degree


def _check_size(config: ChargeConfiguration) -> None:
    if config.M > MAX_M:
        raise ValueError("expansion too large")


def _linear(c, k: int, nvars: int) -> BiPoly:
    """The polynomial (var_k - c)."""
    return BiPoly.var(k, nvars) - BiPoly.const(c, nvars)


def sign_factor(config: ChargeConfiguration, component: str, pattern: SignPattern) -> BiPoly:
    n = 2 + config.M
    axis = 0 if component == "X" else 1
    out = BiPoly({}, n)
    for j, (s, ch) in enumerate(zip(pattern.signs, config.charges)):
        centre = ch.x if axis == 0 else ch.y
        term = _linear(centre, axis, n).scale(s * ch.a)
        for k in range(config.M):
            if k != j:
                term = term * BiPoly.var(2 + k, n)
        out = out + term
    return out


def sign_product_expansion(config: ChargeConfiguration, component: str) -> BiPoly:
    """Product over all sign patterns, still in the auxiliary variables chi_k."""
    _check_size(config)
    factors = [sign_factor(config, component, p) for p in sign_patterns(config.M)]
    # balanced pairing keeps intermediate sizes even
    while len(factors) > 1:
        nxt = [factors[i] * factors[i + 1] for i in range(0, len(factors) - 1, 2)]
        if len(factors) % 2:
            nxt.append(factors[-1])
        factors = nxt
    return factors[0]


def distance_cubed_squares(config: ChargeConfiguration) -> list[BiPoly]:
    """((x-x_k)^2 + (y-y_k)^2)^3 for every charge."""
    out = []
    for ch in config.charges:
        dx = _linear(ch.x, 0, 2)
        dy = _linear(ch.y, 1, 2)
        out.append((dx * dx + dy * dy) ** 3)
    return out


def product_polynomials(config: ChargeConfiguration) -> ProductPolynomials:
    _check_size(config)
    squares = distance_cubed_squares(config)
    P = bipoly_substitute_even(sign_product_expansion(config, "X"), squares)
    Q = bipoly_substitute_even(sign_product_expansion(config, "Y"), squares)
    if P.is_zero() or Q.is_zero():
        raise AssertionError(f"product polynomial vanishes for {config}")
    return ProductPolynomials(P, Q)


def sign_product_value(config: ChargeConfiguration, component: str, x: float, y: float) -> float:
    """Float value of prod_sigma X_sigma(x, y) (or Y_sigma)."""
    a, cx, cy = config.arrays()
    dx, dy = x - cx, y - cy
    r3 = (dx * dx + dy * dy) ** 1.5
    num = a * (dx if component == "X" else dy) / r3
    out = 1.0
    for p in sign_patterns(config.M):
        out *= float(np.dot(p.signs, num))
    return out


def denominator_value(config: ChargeConfiguration, x: float, y: float) -> float:
    """D(x, y) = prod_k r_k^3."""
    a, cx, cy = config.arrays()
    return float(np.prod(((x - cx) ** 2 + (y - cy) ** 2) ** 1.5))


# ---------------------------------------------------------------------------
# containment
# ---------------------------------------------------------------------------


def _bisect_zero(config, component, p0, p1, iters: int = 200):
    f0 = component_and_gradient(config, component, *p0)[0]
    lo, hi = np.asarray(p0, float), np.asarray(p1, float)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if np.array_equal(mid, lo) or np.array_equal(mid, hi):
            break
        fm = component_and_gradient(config, component, *mid)[0]
        if fm == 0.0:
            return mid
        if (fm > 0) == (f0 > 0):
            lo, f0 = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sample_zeros(config: ChargeConfiguration, component: str, n_samples: int, seed: int = 0, max_rays: int = 2000):
    """Points with component ~ 0 found by bisection along random segments."""
    rng = np.random.default_rng(seed)
    R = 3.0 * float(config.gamma_scale)
    _, cx, cy = config.arrays()
    found = []
    for _ in range(max_rays):
        if len(found) >= n_samples:
            break
        start = rng.uniform(-R, R, size=2)
        theta = rng.uniform(0.0, 2.0 * math.pi)
        end = start + 2.0 * R * np.array([math.cos(theta), math.sin(theta)])
        ts = np.linspace(0.0, 1.0, 257)
        pts = start[None, :] + ts[:, None] * (end - start)[None, :]
        dmin = np.min(np.hypot(pts[:, 0:1] - cx[None, :], pts[:, 1:2] - cy[None, :]), axis=1)
        if np.any(dmin < 1e-6):
            continue
        vals = np.array([component_and_gradient(config, component, *p)[0] for p in pts])
        for i in np.nonzero(np.signbit(vals[:-1]) != np.signbit(vals[1:]))[0]:
            z = _bisect_zero(config, component, pts[i], pts[i + 1])
            val, _, _, scale = component_and_gradient(config, component, *z)
            near = np.min(np.hypot(z[0] - cx, z[1] - cy))
            # a sign change across a charge is a pole, not a zero
            if near > 1e-3 * R and abs(val) <= 1e-9 * scale:
                found.append((float(z[0]), float(z[1])))
                if len(found) >= n_samples:
                    break
    return found


def magnitude_bound(poly: BiPoly, x: float, y: float) -> float:
    rho = max(1.0, abs(x), abs(y))
    return math.fsum(abs(float(c)) * rho ** (i + j) for i, j, c in poly.to_rows())


def containment_check(
    config: ChargeConfiguration, n_samples: int = 50, seed: int = 0, polys: ProductPolynomials | None = None
) -> dict:
    """Evaluate P at numerically found X-zeros and Q at Y-zeros.

    The ratio is |P| / sum |c_ij| rho^(i+j) with rho = max(1, |x|, |y|).
    Normalising by the literal monomial values |x^i y^j| instead would make
    the ratio identically 1 whenever every term vanishes at the same rate,
    as for P = -x^2 on the line x = 0.
    """
    polys = polys or product_polynomials(config)
    out = {"requested": n_samples}
    for comp, poly in (("X", polys.P), ("Y", polys.Q)):
        pts = sample_zeros(config, comp, n_samples, seed)
        ratios = []
        for x, y in pts:
            v, _ = poly.eval_float(x, y)
            ratios.append(abs(v) / magnitude_bound(poly, x, y))
        out[comp] = {
            "found": len(pts),
            "partial": len(pts) < n_samples,
            "max_ratio": max(ratios) if ratios else None,
        }
    return out


# ---------------------------------------------------------------------------
# degree bookkeeping
# ---------------------------------------------------------------------------


def harnack_bound(m: int) -> tuple[int, int]:
    """(lower, upper) bounds on the number of components of a degree-m real curve."""
    if m < 1:
        raise ValueError("degree must be at least 1")
    return (1 - (-1) ** m) // 2, (m - 1) * (m - 2) // 2 + 1


def direction_count_bound(M: int) -> int:
    if M < 1:
        raise ValueError("M must be at least 1")
    return 9 * (M - 1) ** 2 * 4 ** (M - 1) + 1


def claimed_degree(M: int) -> int:
    return 3 * (M - 1) * 2 ** (M - 1)


def factor_count_degree(M: int) -> int:
    """Degree if no cancellation occurs: 2^M factors of degree 1 + 3(M-1)."""
    return 2**M * (1 + 3 * (M - 1))


def _harnack_or_none(m: int):
    return list(harnack_bound(m)) if m >= 1 else None


def degree_claim_check(config: ChargeConfiguration, polys: ProductPolynomials | None = None) -> dict:
    polys = polys or product_polynomials(config)
    M = config.M
    measured = polys.total_degree_P
    claim = claimed_degree(M)
    nominal = factor_count_degree(M)
    report = {
        "M": M,
        "measured": measured,
        "measured_Q": polys.total_degree_Q,
        "paper_claim": claim,
        "factor_count": nominal,
        "consistent": measured <= claim,
        "harnack": {
            "measured": _harnack_or_none(measured),
            "paper_claim": _harnack_or_none(claim),
            "factor_count": _harnack_or_none(nominal),
        },
        "direction_count_bound": direction_count_bound(M),
        "findings": [],
    }
    if not report["consistent"]:
        report["findings"].append(
            {
                "severity": "finding",
                "message": f"measured degree {measured} exceeds claimed bound {claim}",
                "exact_data": {"config": config.to_json(), "measured": measured, "claim": claim},
            }
        )
    return report


def bipoly_rows(p: BiPoly) -> list[tuple[int, int, str]]:
    return [(i, j, format_rational(c)) for i, j, c in p.to_rows()]

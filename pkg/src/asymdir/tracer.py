"""Numerical tracing of far-field zero curves and slope matching.

Sign changes of X (or Y) are located on a polar grid over an annulus
inside the Type I or Type II chart.  Each new crossing seeds a branch that
is continued outward by predictor-corrector steps: a tangent step
perpendicular to the analytic gradient, then bisection along the gradient
line back onto the curve.  The outermost slope of each branch is compared
with the exact direction spectrum.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .charges import TYPE_I, TYPE_II, ChargeConfiguration, component_and_gradient, field_arrays
from .directions import DirectionSpectrum


@dataclass(frozen=True)
class TraceParams:
    """Tracer knobs.  ``r_min`` and ``r_max`` are multiples of the configuration's gamma scale;
    ``step`` is relative to the current radius."""

    delta: float = 0.1
    r_min: float = 1e3
    r_max: float = 1e4
    step: float = 0.02
    refine_tol: float = 1e-10
    n_theta: int = 720
    n_r: int = 64
    max_refinements: int = 2

    def __post_init__(self):
        if not 0.0 < self.delta < 0.5:
            raise ValueError("delta must lie in (0, 1/2)")
        if not 0.0 < self.r_min < self.r_max:
            raise ValueError("invalid annulus")
        if self.step <= 0 or self.refine_tol <= 0:
            raise ValueError("step and refine_tol must be positive")
        if self.n_theta < 8 or self.n_r < 2:
            raise ValueError("seeding grid too coarse")


@dataclass
class CurveBranch:
    component: str
    domain: str
    points: list
    reached_r_max: bool = False
    note: str = ""

    @property
    def outer_radius(self) -> float:
        return math.hypot(*self.points[-1]) if self.points else 0.0

    def slopes(self) -> np.ndarray:
        pts = np.asarray(self.points, dtype=float)
        if self.domain == TYPE_I:
            return pts[:, 0] / pts[:, 1]
        return pts[:, 1] / pts[:, 0]


@dataclass(frozen=True)
class SlopeEstimate:
    branch_id: int
    component: str
    domain: str
    slope: float
    uncertainty: float
    matched_root: float | None
    distance: float | None

    @property
    def matched(self) -> bool:
        return self.matched_root is not None


def domain_mask(config: ChargeConfiguration, xs, ys, delta: float, domain: str) -> np.ndarray:
    """Vectorised form of ``charges.in_domain``."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    _, cx, cy = config.arrays()
    if domain == TYPE_II:
        xs, ys = ys, xs
        cx, cy = cy, cx
    elif domain != TYPE_I:
        raise ValueError(f"unknown domain {domain!r}")
    with np.errstate(divide="ignore", invalid="ignore"):
        ok = (ys != 0.0) & (np.abs(xs / ys) <= 1.0 - delta)
        for xj, yj in zip(cx, cy):
            ok &= np.abs(ys) > abs(yj)
            ok &= (np.abs(xs) + abs(xj)) / (np.abs(ys) - abs(yj)) < 1.0
    return ok


def _value(config, component, p) -> float:
    return component_and_gradient(config, component, float(p[0]), float(p[1]))[0]


def _bisect(fn, lo: float, hi: float, flo: float, iters: int = 80) -> float:
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = fn(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _correct(config, component, p, h):
    """Pull ``p`` back onto the curve along the local gradient line."""
    val, gx, gy, _ = component_and_gradient(config, component, p[0], p[1])
    g = math.hypot(gx, gy)
    if val == 0.0:
        return p
    if g == 0.0:
        return None
    n = np.array([gx, gy]) / g

    def f(s):
        return _value(config, component, p + s * n)

    w = 0.5 * h
    for _ in range(6):
        fa, fb = f(-w), f(w)
        if (fa > 0) != (fb > 0):
            return p + _bisect(f, -w, w, fa) * n
        w *= 2.0
    return None


def _trace_branch(config, component, domain, seed_pt, params, R_min, R_max) -> CurveBranch:
    p = np.asarray(seed_pt, dtype=float)
    pts = [tuple(p)]
    prev_t = None
    max_steps = int(10 * math.log(R_max / R_min) / params.step) + 100
    for _ in range(max_steps):
        r = math.hypot(*p)
        if r >= R_max:
            return CurveBranch(component, domain, pts, True)
        _, gx, gy, _ = component_and_gradient(config, component, p[0], p[1])
        tan = np.array([-gy, gx])
        norm = math.hypot(*tan)
        if norm == 0.0:
            return CurveBranch(component, domain, pts, False, "vanishing gradient")
        tan /= norm
        ref = prev_t if prev_t is not None else p
        if float(np.dot(tan, ref)) < 0:
            tan = -tan
        h = params.step * r
        q = _correct(config, component, p + h * tan, h)
        if q is None:
            return CurveBranch(component, domain, pts, False, "corrector failed")
        if not domain_mask(config, [q[0]], [q[1]], params.delta, domain)[0]:
            return CurveBranch(component, domain, pts, False, "left the domain chart")
        if math.hypot(*q) < 0.5 * R_min:
            return CurveBranch(component, domain, pts, False, "turned inward")
        prev_t = (q - p) / max(math.hypot(*(q - p)), 1e-300)
        p = q
        pts.append(tuple(p))
    return CurveBranch(component, domain, pts, False, "step limit")


def _branch_angle_at(branch: CurveBranch, r: float):
    pts = np.asarray(branch.points)
    rs = np.hypot(pts[:, 0], pts[:, 1])
    if r < rs.min() or r > rs.max():
        return None
    k = int(np.argmin(np.abs(rs - r)))
    return math.atan2(pts[k, 1], pts[k, 0])


def _angle_gap(a: float, b: float) -> float:
    d = (a - b) % (2 * math.pi)
    return min(d, 2 * math.pi - d)


def trace_zero_curves(
    config: ChargeConfiguration, component: str, params: TraceParams = TraceParams(), domain: str = TYPE_I
) -> list[CurveBranch]:
    """All branches of {component = 0} crossing the annulus inside the chart."""
    if component not in ("X", "Y"):
        raise ValueError(f"unknown component {component!r}")
    g = float(config.gamma_scale)
    R_min, R_max = params.r_min * g, params.r_max * g
    radii = np.geomspace(R_min, R_max, params.n_r)
    dtheta = 2 * math.pi / params.n_theta
    thetas = np.arange(params.n_theta) * dtheta
    branches: list[CurveBranch] = []
    for r in radii:
        xs, ys = r * np.cos(thetas), r * np.sin(thetas)
        X, Y = field_arrays(config, xs, ys)
        vals = X if component == "X" else Y
        mask = domain_mask(config, xs, ys, params.delta, domain)
        sgn = vals >= 0
        for k in range(params.n_theta):
            k2 = (k + 1) % params.n_theta
            if not (mask[k] and mask[k2]) or sgn[k] == sgn[k2]:
                continue
            th = thetas[k] + 0.5 * dtheta
            if any(
                (a := _branch_angle_at(b, r)) is not None and _angle_gap(a, th) <= 2 * dtheta for b in branches
            ):
                continue

            def f(angle, r=r):
                return _value(config, component, (r * math.cos(angle), r * math.sin(angle)))

            a0 = thetas[k]
            ang = _bisect(f, a0, a0 + dtheta, f(a0))
            seed = np.array([r * math.cos(ang), r * math.sin(ang)])
            branches.append(_trace_branch(config, component, domain, seed, params, R_min, R_max))
    # order by seed angle for stable ids
    branches.sort(key=lambda b: (round(math.atan2(b.points[0][1], b.points[0][0]), 9), b.outer_radius))
    return branches


def branch_residuals(config: ChargeConfiguration, branch: CurveBranch) -> np.ndarray:
    """|component| / sum_j |a_j| / r_j^2 at every point of a branch."""
    out = []
    for x, y in branch.points:
        val, _, _, scale = component_and_gradient(config, branch.component, x, y)
        out.append(abs(val) / scale)
    return np.asarray(out)


def _candidates(spectrum, component: str, domain: str) -> list[float]:
    if isinstance(spectrum, DirectionSpectrum):
        return spectrum.entry(component, domain).values()
    return sorted(spectrum[(component, domain)])


def estimate_directions(branches, spectrum, *, min_points: int = 10) -> tuple[list[SlopeEstimate], list[str]]:
    """Outer slope of each complete branch, matched to the nearest candidate root.

    ``spectrum`` is a DirectionSpectrum or a mapping (component, domain) -> root values.
    Returns the estimates and notes about excluded branches.
    """
    estimates, notes = [], []
    for bid, br in enumerate(branches):
        if len(br.points) < min_points:
            notes.append(f"branch {bid}: excluded, only {len(br.points)} points")
            continue
        if not br.reached_r_max:
            notes.append(f"branch {bid}: excluded, truncated ({br.note})")
            continue
        s = br.slopes()
        tail = s[-max(2, len(s) // 5) :]
        slope = float(s[-1])
        unc = float(tail.max() - tail.min())
        roots = _candidates(spectrum, br.component, br.domain)
        best, dist = None, None
        if roots:
            j = int(np.argmin([abs(slope - t) for t in roots]))
            d = abs(slope - roots[j])
            if d <= 10 * unc + 1e-3:
                best, dist = float(roots[j]), float(d)
        estimates.append(SlopeEstimate(bid, br.component, br.domain, slope, unc, best, dist))
    return estimates, notes


@dataclass
class TraceResult:
    component: str
    domain: str
    params: TraceParams
    branches: list
    estimates: list
    notes: list
    unmatched_roots: list = field(default_factory=list)
    refinements: int = 0

    def to_json(self) -> dict:
        return {
            "component": self.component,
            "domain": self.domain,
            "n_theta": self.params.n_theta,
            "refinements": self.refinements,
            "branches": [
                {
                    "id": i,
                    "points": len(b.points),
                    "reached_r_max": b.reached_r_max,
                    "note": b.note,
                }
                for i, b in enumerate(self.branches)
            ],
            "estimates": [
                {
                    "branch_id": e.branch_id,
                    "slope": e.slope,
                    "uncertainty": e.uncertainty,
                    "matched_root": "UNMATCHED" if e.matched_root is None else e.matched_root,
                    "distance": e.distance,
                }
                for e in self.estimates
            ],
            "unmatched_roots": self.unmatched_roots,
            "notes": self.notes,
        }


def trace_and_match(
    config: ChargeConfiguration, component: str, domain: str, spectrum, params: TraceParams = TraceParams()
) -> TraceResult:
    """Trace, match, and refine the angular grid while a realizable root has no branch.

    Roots with |t| > 1 - delta lie outside the chart and are not expected.
    """
    result = None
    for level in range(params.max_refinements + 1):
        p = replace(params, n_theta=params.n_theta * 2**level)
        branches = trace_zero_curves(config, component, p, domain)
        estimates, notes = estimate_directions(branches, spectrum)
        hit = {e.matched_root for e in estimates if e.matched}
        realizable = [t for t in _candidates(spectrum, component, domain) if abs(t) < 1.0 - params.delta]
        missing = [t for t in realizable if t not in hit]
        result = TraceResult(component, domain, p, branches, estimates, notes, missing, level)
        if not missing:
            break
    return result


# ---------------------------------------------------------------------------
# harmonic counterexample
# ---------------------------------------------------------------------------


def _harmonic_parts(a, b, c, x, y, z):
    ph = b * x + c * y
    ch, sh = np.cosh(a * z), np.sinh(a * z)
    cs, sn = np.cos(ph), np.sin(ph)
    return ch * cs, ch, sh, cs, sn


def harmonic_demo(a: float, b: float, c: float, grid_extent: float = 1.0, grid_n: int = 9, refinements: int = 2) -> dict:
    """Checks on U = cosh(a z) cos(b x + c y).

    The finite-difference Laplacian is evaluated at the fixed points of an
    ``grid_n``^3 grid with stencil spacing h, h/2, ... so the residuals at
    successive levels are directly comparable.
    """
    if grid_n < 3:
        raise ValueError("grid_n must be at least 3")
    axis = np.linspace(-grid_extent, grid_extent, grid_n)
    X, Y, Z = np.meshgrid(axis, axis, axis, indexing="ij")
    U = np.cosh(a * Z) * np.cos(b * X + c * Y)

    def u(x, y, z):
        return np.cosh(a * z) * np.cos(b * x + c * y)

    h0 = 2 * grid_extent / (grid_n - 1)
    u_scale = float(np.max(np.abs(U)))
    scale = (a * a + b * b + c * c) * u_scale
    levels = []
    lap_coarse = None
    for k in range(refinements + 1):
        h = h0 / 2**k
        lap = (
            u(X + h, Y, Z) + u(X - h, Y, Z) + u(X, Y + h, Z) + u(X, Y - h, Z) + u(X, Y, Z + h) + u(X, Y, Z - h) - 6 * U
        ) / (h * h)
        if lap_coarse is None:
            lap_coarse = lap
        levels.append({"h": h, "max_residual": float(np.max(np.abs(lap))) / scale})
    ratios = [
        levels[i]["max_residual"] / levels[i + 1]["max_residual"] if levels[i + 1]["max_residual"] > 0 else math.inf
        for i in range(len(levels) - 1)
    ]
    big = np.abs(U) >= 0.1 * u_scale
    lap_over_u = float(np.max(np.abs(lap_coarse[big]) / np.abs(U[big])))
    # analytic second derivatives
    Uxx, Uyy, Uxy = -b * b * U, -c * c * U, -b * c * U
    H = Uxx * Uyy - Uxy * Uxy
    h_scale = np.abs(Uxx * Uyy) + Uxy * Uxy
    hess = float(np.max(np.abs(H) / np.where(h_scale > 0, h_scale, 1.0)))
    # U_z on z = 0 and the gradient on the plane b x + c y = 0
    uz0 = a * np.sinh(a * 0.0) * np.cos(b * X[:, :, 0] + c * Y[:, :, 0])
    s = np.linspace(-grid_extent, grid_extent, grid_n)
    norm = math.hypot(b, c) or 1.0
    px, py = -c * s / norm, b * s / norm
    pts = [(xx, yy, zz) for xx, yy in zip(px, py) for zz in axis]
    grad_plane = max(
        math.hypot(b * math.cosh(a * zz) * math.sin(b * xx + c * yy), c * math.cosh(a * zz) * math.sin(b * xx + c * yy))
        for xx, yy, zz in pts
    )
    return {
        "a": a,
        "b": b,
        "c": c,
        "harmonic": a * a == b * b + c * c,
        "levels": levels,
        "convergence_ratios": ratios,
        "max_laplacian_over_U": lap_over_u,
        "hessian_max_relative": hess,
        "Uz_on_z0_max": float(np.max(np.abs(uz0))),
        "grad_xy_on_plane_max": grad_plane,
    }


# ---------------------------------------------------------------------------
# emitters
# ---------------------------------------------------------------------------


def write_branches_csv(branches, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["branch_id", "component", "domain", "x", "y"])
        for i, b in enumerate(branches):
            for x, y in b.points:
                w.writerow([i, b.component, b.domain, f"{x:.12f}", f"{y:.12f}"])


def render_svg(branches, roots, domain: str, R_min: float, R_max: float, size: int = 600) -> str:
    """Annulus plot with branches and predicted asymptote lines."""
    half = size / 2
    k = (half - 10) / R_max

    def pt(x, y):
        return f"{half + k * x:.3f},{half - k * y:.3f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<circle cx="{half:.3f}" cy="{half:.3f}" r="{k * R_min:.3f}" fill="none" stroke="#999"/>',
        f'<circle cx="{half:.3f}" cy="{half:.3f}" r="{k * R_max:.3f}" fill="none" stroke="#999"/>',
    ]
    for t in roots:
        if domain == TYPE_I:
            dx, dy = t, 1.0
        else:
            dx, dy = 1.0, t
        n = math.hypot(dx, dy)
        ex, ey = R_max * dx / n, R_max * dy / n
        out.append(f'<polyline points="{pt(-ex, -ey)} {pt(ex, ey)}" fill="none" stroke="#d33" stroke-dasharray="4 3"/>')
        out.append(f'<text x="{half + k * ex:.3f}" y="{half - k * ey:.3f}" font-size="10">t={t:.6f}</text>')
    for b in branches:
        coords = " ".join(pt(x, y) for x, y in b.points)
        out.append(f'<polyline points="{coords}" fill="none" stroke="#236" stroke-width="1.5"/>')
    out.append(f'<text x="10" y="20" font-size="12">Type {domain}: {len(branches)} branches</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

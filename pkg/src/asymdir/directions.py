"""Zeroing expressions for the asymptotic directions of {X=0} and {Y=0}.

In the Type I chart the far-field slope is ``t = x/y``; in the Type II
chart it is ``t = y/x``.  For moment order L the leading far-field
behaviour of a component is ``|q|^-(L+2)`` times

    sum_l c_l t^(-l-1) / (l! (L-l)!) * d^(L-l)/dt^(L-l) [ (d^l R / dt^l) t^(L+1) ]

where R is the odd kernel t/(1+t^2)^(3/2) or the even kernel
1/(1+t^2)^(3/2).  This is the ``authoritative`` variant.  Two more
variants are built for comparison: ``paper_closed`` (the same sum without
the t^(-l-1) factor) and ``remark`` (derivatives taken in reverse order).
"""
from __future__ import annotations

import functools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .charges import TYPE_I, TYPE_II, ChargeConfiguration, moment_order, random_configuration
from .exact import (
    IsolatingInterval,
    UniPoly,
    as_rational,
    format_rational,
    isolate_real_roots,
    poly_gcd,
    resultant,
    roots_in_open_interval,
    squarefree_part,
    strictly_interlacing,
)
from .kernels import (
    KIND_A,
    KIND_B,
    HalfPowerForm,
    base_form,
    general_binomial,
    halfpower_derivative,
    kernel_form,
    kernel_poly,
)

COMPONENTS = ("X", "Y")
VARIANTS = ("authoritative", "paper_closed", "remark")
# tight enough that the 12-decimal CSV rendering of a midpoint is exact
ROOT_WIDTH = Fraction(1, 10**14)

# Kernel carried by each (component, domain).  In Type II the roles of x and
# y swap, so X sees the even kernel there and Y the odd one.
_PAIRING = {
    "derived": {("X", TYPE_I): KIND_A, ("Y", TYPE_I): KIND_B, ("X", TYPE_II): KIND_B, ("Y", TYPE_II): KIND_A},
    "as_printed": {("X", TYPE_I): KIND_A, ("Y", TYPE_I): KIND_B, ("X", TYPE_II): KIND_A, ("Y", TYPE_II): KIND_B},
}


def kernel_for(component: str, domain: str, pairing: str = "derived") -> str:
    try:
        return _PAIRING[pairing][(component, domain)]
    except KeyError:
        raise ValueError(f"bad component/domain/pairing {component!r}, {domain!r}, {pairing!r}") from None


def _pow(base: Fraction, e: int) -> Fraction:
    return Fraction(1) if e == 0 else base**e


@dataclass(frozen=True)
class DirectionCoefficients:
    domain: str
    L: int
    coeffs: tuple[Fraction, ...]

    def as_strings(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]


def direction_coefficients(
    config: ChargeConfiguration, domain: str, type2_convention: str = "printed"
) -> DirectionCoefficients:
    """Leading-moment coefficient vector c[0..L] for a chart.

    Type I:  c[l] = sum a_j (-x_j)^l y_j^(L-l).
    Type II: c[l] = sum a_j (-x_j)^(L-l) y_j^l  (``printed``), or the exact
    mirror sum a_j (-y_j)^l x_j^(L-l) (``mirrored``).  The two Type II
    conventions differ by the global factor (-1)^L.
    """
    L = moment_order(config).order_L
    out = []
    for l in range(L + 1):
        s = Fraction(0)
        for c in config.charges:
            if domain == TYPE_I:
                s += c.a * _pow(-c.x, l) * _pow(c.y, L - l)
            elif domain == TYPE_II:
                if type2_convention == "printed":
                    s += c.a * _pow(-c.x, L - l) * _pow(c.y, l)
                elif type2_convention == "mirrored":
                    s += c.a * _pow(-c.y, l) * _pow(c.x, L - l)
                else:
                    raise ValueError(f"unknown Type II convention {type2_convention!r}")
            else:
                raise ValueError(f"unknown domain {domain!r}")
        out.append(s)
    if not any(out):
        raise AssertionError("all direction coefficients vanish, contradicting the moment order")
    return DirectionCoefficients(domain, L, tuple(out))


@dataclass(frozen=True)
class DirectionPolynomial:
    component: str | None
    domain: str | None
    variant: str
    L: int
    numerator: UniPoly
    half_exponent: int
    t_valuation: int = 0

    def form(self) -> HalfPowerForm:
        return HalfPowerForm(self.numerator, self.half_exponent, self.t_valuation)

    def __call__(self, t: float) -> float:
        return self.form()(t)

    def exact_numerator_at(self, t) -> Fraction:
        return self.numerator(as_rational(t))


def _nderiv(f: HalfPowerForm, k: int) -> HalfPowerForm:
    for _ in range(k):
        f = halfpower_derivative(f)
    return f


def zeroing_from_coefficients(coeffs: Sequence, kind: str, variant: str) -> HalfPowerForm:
    """Assemble a zeroing expression from a coefficient vector c[0..L]."""
    L = len(coeffs) - 1
    total = HalfPowerForm(UniPoly(), 2 * L + 3, 0)
    for l, c in enumerate(coeffs):
        c = as_rational(c)
        if c == 0:
            continue
        weight = c / (math.factorial(l) * math.factorial(L - l))
        if variant in ("authoritative", "paper_closed"):
            term = _nderiv(kernel_form(kind, l).mul_tpow(L + 1), L - l)
            if variant == "authoritative":
                term = term.mul_tpow(-(l + 1))
        elif variant == "remark":
            inner = _nderiv(base_form(kind).mul_tpow(L - l + 1), L - l).mul_tpow(-1)
            term = _nderiv(inner, l)
        else:
            raise ValueError(f"unknown variant {variant!r}")
        total = total + term.scale(weight)
    return total


def zeroing_form(
    config: ChargeConfiguration,
    component: str,
    domain: str,
    variant: str = "authoritative",
    *,
    type2_convention: str = "printed",
    pairing: str = "derived",
) -> DirectionPolynomial:
    dc = direction_coefficients(config, domain, type2_convention)
    kind = kernel_for(component, domain, pairing)
    f = zeroing_from_coefficients(dc.coeffs, kind, variant)
    if f.is_zero():
        raise AssertionError(f"{variant} zeroing form vanishes identically for {config}")
    return DirectionPolynomial(component, domain, variant, dc.L, f.numerator, f.half_exponent, f.t_valuation)


# ---------------------------------------------------------------------------
# truncated Laurent series
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def binom_m32(n: int) -> Fraction:
    """binom(-3/2, n)."""
    return general_binomial(Fraction(-3, 2), n)


def series_terms(coeffs: Sequence, kind: str, n_max: int) -> tuple:
    """(coefficient, exponent) pairs of the truncated series, n <= n_max."""
    return _series_terms(tuple(as_rational(c) for c in coeffs), kind, n_max)


@functools.lru_cache(maxsize=4096)
def _series_terms(coeffs: tuple, kind: str, n_max: int) -> tuple:
    out = []
    L = len(coeffs) - 1
    odd = kind == KIND_A
    for l, c in enumerate(coeffs):
        c = as_rational(c)
        if c == 0:
            continue
        for n in range(n_max + 1):
            if odd:
                k = math.comb(2 * n + 1, l) * math.comb(L - l + 2 * n + 2, 2 * n + 2)
                e = 2 * n + 1 - l
            else:
                k = math.comb(2 * n, l) * math.comb(L - l + 2 * n + 1, 2 * n + 1)
                e = 2 * n - l
            if k:
                out.append((float(c * binom_m32(n) * k), e))
    return tuple(out)


def series_eval(
    config: ChargeConfiguration,
    component: str,
    domain: str,
    t: float,
    n_max: int = 80,
    *,
    type2_convention: str = "printed",
    pairing: str = "derived",
) -> float:
    """Partial sum of the far-field Laurent series at slope ``t``.

    Converges for |t| < 1, slowly near the boundary.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    t = float(t)
    if abs(t) >= 1.0:
        raise ValueError("outside convergence region")
    dc = direction_coefficients(config, domain, type2_convention)
    kind = kernel_for(component, domain, pairing)
    parts = []
    for coef, e in series_terms(dc.coeffs, kind, n_max):
        if e < 0 and t == 0.0:
            raise ValueError("pole at zero")
        parts.append(coef * t**e)
    return math.fsum(parts)


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumEntry:
    component: str
    domain: str
    L: int
    numerator: UniPoly
    roots: tuple[IsolatingInterval, ...]
    zero_is_root: bool

    @property
    def root_count(self) -> int:
        return sum(iv.multiplicity for iv in self.roots)

    @property
    def within_bound(self) -> bool:
        return self.root_count <= 2 * self.L + 1

    def values(self) -> list[float]:
        """Candidate slopes as floats, zero included when it is a root."""
        vals = [iv.midpoint for iv in self.roots]
        if self.zero_is_root:
            vals.append(0.0)
        return sorted(vals)


@dataclass(frozen=True)
class DistinctnessVerdict:
    domain: str
    resultant: Fraction
    shared_roots: tuple[IsolatingInterval, ...]
    shared_zero: bool

    @property
    def distinct(self) -> bool:
        return not self.shared_roots and not self.shared_zero


@dataclass
class DirectionSpectrum:
    L: int
    entries: dict
    distinctness: dict
    findings: list = field(default_factory=list)

    def entry(self, component: str, domain: str) -> SpectrumEntry:
        return self.entries[(component, domain)]

    def to_json(self) -> dict:
        return {
            "L": self.L,
            "entries": [
                {
                    "component": e.component,
                    "domain": e.domain,
                    "numerator": [format_rational(c) for c in e.numerator.coeffs],
                    "zero_is_root": e.zero_is_root,
                    "roots": [iv.as_dict() for iv in e.roots],
                    "root_count": e.root_count,
                    "bound": 2 * e.L + 1,
                }
                for e in self.entries.values()
            ],
            "distinctness": [
                {
                    "domain": d.domain,
                    "resultant": format_rational(d.resultant),
                    "shared_roots": [iv.as_dict() for iv in d.shared_roots],
                    "shared_zero": d.shared_zero,
                    "distinct": d.distinct,
                }
                for d in self.distinctness.values()
            ],
            "findings": list(self.findings),
        }


def _core(p: UniPoly) -> UniPoly:
    """Squarefree part with powers of t removed."""
    _, q = p.strip_tpow()
    return squarefree_part(q)


def unit_window_roots(p: UniPoly) -> tuple[tuple[IsolatingInterval, ...], bool]:
    """Nonzero roots of ``p`` in (-1, 1), and whether t = 0 is a root."""
    k, q = p.strip_tpow()
    roots = tuple(roots_in_open_interval(q, -1, 1, ROOT_WIDTH)) if q.degree > 0 else ()
    return roots, k > 0


def spectrum(config: ChargeConfiguration, **kwargs) -> DirectionSpectrum:
    entries = {}
    findings = []
    L = moment_order(config).order_L
    for domain in (TYPE_I, TYPE_II):
        for comp in COMPONENTS:
            dp = zeroing_form(config, comp, domain, "authoritative", **kwargs)
            roots, zero = unit_window_roots(dp.numerator)
            zero = zero and dp.t_valuation == 0
            e = SpectrumEntry(comp, domain, dp.L, dp.numerator, roots, zero)
            if not e.within_bound:
                findings.append(
                    {
                        "severity": "finding",
                        "message": f"{comp}/Type {domain}: {e.root_count} nonzero roots exceed 2L+1={2 * L + 1}",
                        "exact_data": {"config": config.to_json(), "roots": [iv.as_dict() for iv in roots]},
                    }
                )
            entries[(comp, domain)] = e
    verdicts = {}
    for domain in (TYPE_I, TYPE_II):
        ex, ey = entries[("X", domain)], entries[("Y", domain)]
        cx, cy = _core(ex.numerator), _core(ey.numerator)
        res = resultant(cx, cy)
        shared: tuple = ()
        if res == 0:
            g = poly_gcd(cx, cy)
            if g.degree > 0:
                shared = tuple(roots_in_open_interval(g, -1, 1, ROOT_WIDTH))
        verdicts[domain] = DistinctnessVerdict(domain, res, shared, ex.zero_is_root and ey.zero_is_root)
    return DirectionSpectrum(L, entries, verdicts, findings)


def special_case_interlacing(ds: DirectionSpectrum, domain: str = TYPE_I) -> bool:
    """Exact strict interlacing of the X and Y candidate slopes in (-1, 1), zero included."""
    px = ds.entry("X", domain).numerator
    py = ds.entry("Y", domain).numerator
    return strictly_interlacing(px, py, -1, 1) if _has_window_roots(px, py) else True


def _has_window_roots(*polys) -> bool:
    return any(roots_in_open_interval(p, -1, 1) for p in polys)


# ---------------------------------------------------------------------------
# variant comparison
# ---------------------------------------------------------------------------


def _real_root_count(p: UniPoly) -> int:
    return len(isolate_real_roots(p)) if p.degree > 0 else 0


def _same_real_roots(a: UniPoly, b: UniPoly) -> bool:
    g = poly_gcd(a, b)
    ng = _real_root_count(g)
    return _real_root_count(a) == ng == _real_root_count(b)


@dataclass
class VariantReport:
    component: str
    domain: str
    L: int
    nonzero_root_sets_equal: bool
    details: dict

    def to_json(self) -> dict:
        return {
            "component": self.component,
            "domain": self.domain,
            "L": self.L,
            "nonzero_root_sets_equal": self.nonzero_root_sets_equal,
            "details": self.details,
        }


def variant_comparison(config: ChargeConfiguration, component: str, domain: str, **kwargs) -> VariantReport:
    """Compare the three zeroing variants by their nonzero real root sets.

    All decisions are exact: after removing powers of t, squarefree parts
    are compared for proportionality and real-root sets through gcds.
    """
    forms = {v: zeroing_form(config, component, domain, v, **kwargs) for v in VARIANTS}
    cores = {v: _core(dp.numerator) for v, dp in forms.items()}
    details = {
        "numerators": {v: [format_rational(c) for c in dp.numerator.coeffs] for v, dp in forms.items()},
        "nonzero_real_roots": {v: _real_root_count(cores[v]) for v in VARIANTS},
        "pairs": {},
    }
    all_equal = True
    for i, a in enumerate(VARIANTS):
        for b in VARIANTS[i + 1 :]:
            fa, fb = forms[a].form(), forms[b].form()
            ratio_tpow = None
            for k in range(-(2 * forms[a].L + 3), 2 * forms[a].L + 4):
                if fa.mul_tpow(k).same_function(fb):
                    ratio_tpow = k
                    break
            same_roots = _same_real_roots(cores[a], cores[b])
            all_equal = all_equal and same_roots
            details["pairs"][f"{a}~{b}"] = {
                "same_function": fa.same_function(fb),
                "differs_by_t_power": ratio_tpow,
                "squarefree_proportional": cores[a] == cores[b],
                "nonzero_real_roots_equal": same_roots,
            }
    L = forms["authoritative"].L
    return VariantReport(component, domain, L, all_equal, details)


# ---------------------------------------------------------------------------
# sigma / gamma algebra
# ---------------------------------------------------------------------------


def _falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


@dataclass(frozen=True)
class SigmaForm:
    L: int
    c: tuple[Fraction, ...]
    sigma: tuple[Fraction, ...]
    d: tuple[Fraction, ...]
    gamma: tuple[Fraction, ...]


def sigma_conversion(c: Sequence, L: int) -> SigmaForm:
    """Convert c-weights of sum c_l D^l[x^(L+1) D^(L-l) R] to gamma-weights.

    sigma_k = sum_{l>=k} C(l,k) c_l,  d_k = sigma_k (L+1)(L)...(L+2-k),
    gamma_l = d_(L-l).
    """
    c = tuple(as_rational(v) for v in c)
    if len(c) != L + 1:
        raise ValueError("c must have length L+1")
    if not any(c):
        raise ValueError("linear combination is trivial")
    sigma = tuple(sum((math.comb(l, k) * c[l] for l in range(k, L + 1)), Fraction(0)) for k in range(L + 1))
    d = tuple(sigma[k] * _falling(L + 1, k) for k in range(L + 1))
    gamma = tuple(d[L - l] for l in range(L + 1))
    return SigmaForm(L, c, sigma, d, gamma)


def sigma_combination(vector: Sequence, kind: str, L: int, form: str = "gamma") -> DirectionPolynomial:
    """Build Sigma(R) from c-weights (``form="c"``) or gamma-weights."""
    vec = [as_rational(v) for v in vector]
    if len(vec) != L + 1:
        raise ValueError("vector must have length L+1")
    if not any(vec):
        raise ValueError("linear combination is trivial")
    total = HalfPowerForm(UniPoly(), 3, 0)
    for l, w in enumerate(vec):
        if w == 0:
            continue
        if form == "c":
            term = _nderiv(kernel_form(kind, L - l).mul_tpow(L + 1), l)
        elif form == "gamma":
            term = kernel_form(kind, l).mul_tpow(l + 1)
        else:
            raise ValueError(f"unknown form {form!r}")
        total = total + term.scale(w)
    return DirectionPolynomial(None, None, f"sigma_{form}", L, total.numerator, total.half_exponent, total.t_valuation)


@dataclass(frozen=True)
class ConjecturePair:
    L: int
    gamma: tuple[Fraction, ...]
    F_P: UniPoly
    F_Q: UniPoly
    resultant: Fraction
    method: str
    shared_positive_roots: tuple[IsolatingInterval, ...]

    @property
    def distinct_positive_roots(self) -> bool:
        return not self.shared_positive_roots


def conjecture_polynomials(gamma: Sequence, L: int) -> tuple[UniPoly, UniPoly]:
    gamma = [as_rational(g) for g in gamma]
    one_t2 = UniPoly([1, 0, 1])
    FP, FQ = UniPoly(), UniPoly()
    for l, g in enumerate(gamma):
        if g == 0:
            continue
        w = one_t2 ** (L - l) * UniPoly.monomial(l, g)
        FP = FP + w * kernel_poly(KIND_A, l)
        FQ = FQ + w * kernel_poly(KIND_B, l)
    return FP, FQ


def conjecture_poly_pair(gamma: Sequence, L: int) -> ConjecturePair:
    """The polynomial pair sum gamma_l (1+x^2)^(L-l) x^l {P_l, Q_l} and its positive-root test.

    A nonzero resultant of the squarefree cores settles distinctness at
    once; otherwise the shared factor is isolated on (0, inf).
    """
    gamma = tuple(as_rational(g) for g in gamma)
    if len(gamma) != L + 1:
        raise ValueError("gamma must have length L+1")
    if not any(gamma):
        raise ValueError("gamma vector is trivial")
    FP, FQ = conjecture_polynomials(gamma, L)
    if FP.is_zero() or FQ.is_zero():
        raise AssertionError(f"conjecture polynomial vanishes for gamma={gamma}")
    cp, cq = _core(FP), _core(FQ)
    res = resultant(cp, cq)
    shared: tuple = ()
    method = "resultant"
    if res == 0:
        method = "gcd"
        g = poly_gcd(cp, cq)
        if g.degree > 0:
            bound = 2 + max(abs(a) for a in g.coeffs) / abs(g.lc)
            shared = tuple(roots_in_open_interval(g, 0, bound, ROOT_WIDTH))
    return ConjecturePair(L, gamma, FP, FQ, res, method, shared)


# ---------------------------------------------------------------------------
# random scans
# ---------------------------------------------------------------------------


def _draw_gamma(rng: np.random.Generator, L: int, D: int) -> tuple[Fraction, ...]:
    while True:
        g = tuple(Fraction(int(rng.integers(-D, D + 1)), int(rng.integers(1, D + 1))) for _ in range(L + 1))
        if any(g):
            return g


def _gamma_trial(args) -> dict:
    seed, trial, L_max, D = args
    rng = np.random.default_rng(seed ^ trial)
    L = int(rng.integers(0, L_max + 1))
    gamma = _draw_gamma(rng, L, D)
    pair = conjecture_poly_pair(gamma, L)
    return {
        "trial": trial,
        "L": L,
        "gamma": [format_rational(g) for g in gamma],
        "method": pair.method,
        "distinct": pair.distinct_positive_roots,
        "shared_positive_roots": [iv.as_dict() for iv in pair.shared_positive_roots],
    }


def _config_trial(args) -> dict:
    seed, trial, M_max = args
    rng = np.random.default_rng([seed ^ trial, 1])
    M = int(rng.integers(1, M_max + 1))
    target = int(rng.integers(0, 2)) if M >= 2 else 0
    cfg = random_configuration(rng, M, target_L=target)
    ds = spectrum(cfg)
    bad = {d: not v.distinct for d, v in ds.distinctness.items()}
    return {
        "trial": trial,
        "config": cfg.to_json(),
        "L": ds.L,
        "distinct": not any(bad.values()),
        "shared": {
            d: {
                "roots": [iv.as_dict() for iv in v.shared_roots],
                "zero": v.shared_zero,
            }
            for d, v in ds.distinctness.items()
            if bad[d]
        },
    }


def conjecture_scan(
    L_max: int,
    trials: int,
    seed: int = 0,
    *,
    D: int = 20,
    config_trials: int | None = None,
    M_max: int = 4,
    workers: int = 1,
) -> dict:
    """Randomised search for counterexamples to the distinctness conjectures.

    Trial ``k`` draws from ``default_rng(seed ^ k)``, so the report is a
    pure function of the arguments whatever the worker count.
    """
    if trials < 1:
        raise ValueError("empty scan")
    if L_max < 0:
        raise ValueError("L_max must be non-negative")
    if config_trials is None:
        config_trials = max(1, trials // 10)
    gamma_jobs = [(seed, k, L_max, D) for k in range(trials)]
    config_jobs = [(seed, k, M_max) for k in range(config_trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            gamma_rows = list(pool.map(_gamma_trial, gamma_jobs, chunksize=32))
            config_rows = list(pool.map(_config_trial, config_jobs, chunksize=4))
    else:
        gamma_rows = [_gamma_trial(j) for j in gamma_jobs]
        config_rows = [_config_trial(j) for j in config_jobs]
    methods: dict = {}
    for r in gamma_rows:
        methods[r["method"]] = methods.get(r["method"], 0) + 1
    return {
        "seed": seed,
        "trials": trials,
        "L_max": L_max,
        "D": D,
        "resolution_methods": dict(sorted(methods.items())),
        "counterexamples": [r for r in gamma_rows if not r["distinct"]],
        "config_trials": config_trials,
        "config_counterexamples": [r for r in config_rows if not r["distinct"]],
    }

"""Half-power rational forms and the kernel polynomials P_l, Q_l.

A half-power form is ``N(t) / (t**v * (1 + t**2)**(m/2))`` with odd ``m``.
The family is closed under differentiation, which is all the direction
machinery needs.  The kernels are

    A_0(t) = t / (1+t^2)^(3/2),   B_0(t) = 1 / (1+t^2)^(3/2)

and their l-th derivatives have numerators P_l (degree l+1) and Q_l
(degree l) over ``(1+t^2)^((2l+3)/2)``.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

from .exact import UniPoly, as_rational, isolate_real_roots, strictly_interlacing

KIND_A = "A"
KIND_B = "B"
KINDS = (KIND_A, KIND_B)

DEFAULT_CAP = 64

ONE_PLUS_T2 = UniPoly([1, 0, 1])
T = UniPoly([0, 1])


@dataclass(frozen=True)
class HalfPowerForm:
    numerator: UniPoly
    half_exponent: int
    t_valuation: int = 0

    def __post_init__(self):
        if self.half_exponent % 2 != 1:
            raise ValueError("half_exponent must be odd")
        if self.t_valuation < 0:
            raise ValueError("t_valuation must be non-negative")

    @classmethod
    def make(cls, numerator: UniPoly, half_exponent: int, t_valuation: int = 0) -> "HalfPowerForm":
        """Construct and normalise (cancel common powers of t)."""
        return cls(numerator, half_exponent, t_valuation).normalized()

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def normalized(self) -> "HalfPowerForm":
        if self.numerator.is_zero():
            return HalfPowerForm(UniPoly(), self.half_exponent, 0)
        k = min(self.t_valuation, self.numerator.valuation())
        if k == 0:
            return self
        num = UniPoly(self.numerator.coeffs[k:])
        return HalfPowerForm(num, self.half_exponent, self.t_valuation - k)

    def mul_tpow(self, k: int) -> "HalfPowerForm":
        """Multiply by t**k; ``k`` may be negative."""
        if k >= 0:
            cancel = min(k, self.t_valuation)
            num = self.numerator.shift(k - cancel)
            return HalfPowerForm(num, self.half_exponent, self.t_valuation - cancel).normalized()
        return HalfPowerForm(self.numerator, self.half_exponent, self.t_valuation - k).normalized()

    def scale(self, c) -> "HalfPowerForm":
        return HalfPowerForm(self.numerator * as_rational(c), self.half_exponent, self.t_valuation).normalized()

    def lift(self, half_exponent: int, t_valuation: int) -> UniPoly:
        """Numerator over the larger denominator t**v' (1+t^2)**(m'/2)."""
        dm = half_exponent - self.half_exponent
        dv = t_valuation - self.t_valuation
        if dm < 0 or dm % 2 or dv < 0:
            raise ValueError("can only lift to a larger compatible denominator")
        return (self.numerator * ONE_PLUS_T2 ** (dm // 2)).shift(dv)

    def __add__(self, other: "HalfPowerForm") -> "HalfPowerForm":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        m = max(self.half_exponent, other.half_exponent)
        v = max(self.t_valuation, other.t_valuation)
        return HalfPowerForm(self.lift(m, v) + other.lift(m, v), m, v).normalized()

    def __neg__(self) -> "HalfPowerForm":
        return HalfPowerForm(-self.numerator, self.half_exponent, self.t_valuation)

    def __sub__(self, other: "HalfPowerForm") -> "HalfPowerForm":
        return self + (-other)

    def same_function(self, other: "HalfPowerForm") -> bool:
        """Exact equality as rational functions (representations may differ)."""
        m = max(self.half_exponent, other.half_exponent)
        v = max(self.t_valuation, other.t_valuation)
        return self.lift(m, v) == other.lift(m, v)

    def __call__(self, t: float) -> float:
        t = float(t)
        den = (1.0 + t * t) ** (self.half_exponent / 2.0)
        if self.t_valuation:
            if t == 0.0:
                raise ZeroDivisionError("pole at zero")
            den *= t**self.t_valuation
        return self.numerator.eval_float(t) / den


def halfpower_derivative(f: HalfPowerForm) -> HalfPowerForm:
    """Exact derivative; the half exponent always grows by 2.

    For f = N t^-v (1+t^2)^(-m/2):
        f' = [t(1+t^2)N' - v(1+t^2)N - m t^2 N] / (t^(v+1) (1+t^2)^((m+2)/2))
    which for v = 0 reduces to [(1+t^2)N' - m t N] / (1+t^2)^((m+2)/2).
    """
    N, m, v = f.numerator, f.half_exponent, f.t_valuation
    if N.is_zero():
        return HalfPowerForm(UniPoly(), m + 2, 0)
    if v == 0:
        num = ONE_PLUS_T2 * N.derivative() - (T * N) * m
        return HalfPowerForm(num, m + 2, 0)
    num = (T * ONE_PLUS_T2) * N.derivative() - (ONE_PLUS_T2 * N) * v - (T * T * N) * m
    return HalfPowerForm(num, m + 2, v + 1).normalized()


def base_form(kind: str) -> HalfPowerForm:
    if kind == KIND_A:
        return HalfPowerForm(T, 3, 0)
    if kind == KIND_B:
        return HalfPowerForm(UniPoly([1]), 3, 0)
    raise ValueError(f"unknown kernel kind {kind!r}")


# memo: one chain per kind, extended under a lock, read freely afterwards
_memo: dict[str, list[UniPoly]] = {KIND_A: [T], KIND_B: [UniPoly([1])]}
_memo_lock = threading.Lock()


def kernel_poly(kind: str, l: int, cap: int = DEFAULT_CAP) -> UniPoly:
    """P_l (kind A) or Q_l (kind B) from the first-order recurrence

        K_l = (1+t^2) K_{l-1}' - (2l+1) t K_{l-1}.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kernel kind {kind!r}")
    if l < 0:
        raise ValueError("l must be non-negative")
    if l > cap:
        raise ValueError(f"kernel index {l} exceeds cap {cap}")
    chain = _memo[kind]
    if l < len(chain):
        return chain[l]
    with _memo_lock:
        while len(chain) <= l:
            k = len(chain)
            prev = chain[-1]
            nxt = ONE_PLUS_T2 * prev.derivative() - (T * prev) * (2 * k + 1)
            expected = k + 1 if kind == KIND_A else k
            if nxt.degree != expected:
                raise AssertionError(f"degree of kernel {kind}_{k} is {nxt.degree}, expected {expected}")
            chain.append(nxt)
    return chain[l]


def kernel_form(kind: str, l: int) -> HalfPowerForm:
    """The l-th derivative of the base kernel as a half-power form."""
    return HalfPowerForm(kernel_poly(kind, l), 2 * l + 3, 0)


def general_binomial(r, n: int) -> Fraction:
    """binom(r, n) for rational r."""
    r = as_rational(r) if not isinstance(r, Fraction) else r
    out = Fraction(1)
    for k in range(n):
        out *= (r - k) / (k + 1)
    return out


def kernel_poly_series_oracle(kind: str, l: int, guard: int = 4) -> UniPoly:
    """Independent P_l / Q_l from Taylor series, no recurrence involved.

    Differentiates the binomial series of the base kernel termwise, then
    multiplies by the series of (1+t^2)^((2l+3)/2) and truncates.  The
    ``guard`` coefficients above the expected degree must vanish.
    """
    expected = l + 1 if kind == KIND_A else l
    top = expected + guard
    base_shift = 1 if kind == KIND_A else 0
    # series of d^l R up to degree `top`
    deriv = [Fraction(0)] * (top + 1)
    n = 0
    while True:
        power = 2 * n + base_shift
        if power - l > top:
            break
        if power >= l:
            deriv[power - l] += general_binomial(Fraction(-3, 2), n) * math.perm(power, l)
        n += 1
    lift = [Fraction(0)] * (top + 1)
    for k in range(top // 2 + 1):
        lift[2 * k] = general_binomial(Fraction(2 * l + 3, 2), k)
    prod = [sum((deriv[i] * lift[d - i] for i in range(d + 1)), Fraction(0)) for d in range(top + 1)]
    if any(prod[expected + 1 :]):
        raise AssertionError(f"series oracle for {kind}_{l} has nonzero terms above degree {expected}")
    return UniPoly(prod)


def kernel_identity_check(l: int, kernel=kernel_poly) -> bool:
    """P_l == l Q_{l-1} (1+t^2) + t Q_l, exactly."""
    if l < 1:
        raise ValueError("identity is stated for l >= 1")
    lhs = kernel(KIND_A, l)
    rhs = kernel(KIND_B, l - 1) * ONE_PLUS_T2 * l + T * kernel(KIND_B, l)
    return lhs == rhs


@dataclass(frozen=True)
class InterlacingReport:
    l: int
    all_real: bool
    strictly_interlacing: bool
    roots_P: int
    roots_Q: int


def kernel_interlacing_check(l: int, kernel=kernel_poly) -> InterlacingReport:
    if l < 1:
        raise ValueError("l must be positive")
    P, Q = kernel(KIND_A, l), kernel(KIND_B, l)
    rp, rq = isolate_real_roots(P), isolate_real_roots(Q)
    nP = sum(iv.multiplicity for iv in rp)
    nQ = sum(iv.multiplicity for iv in rq)
    all_real = nP == P.degree and nQ == Q.degree
    return InterlacingReport(l, all_real, strictly_interlacing(P, Q), nP, nQ)


def kernel_table_rows(l_max: int) -> list[tuple[str, int, int, Fraction]]:
    """(kind, l, power, coefficient) rows for CSV dumps."""
    rows = []
    for kind in KINDS:
        for l in range(l_max + 1):
            for k, c in enumerate(kernel_poly(kind, l).coeffs):
                if c:
                    rows.append((kind, l, k, c))
    return rows

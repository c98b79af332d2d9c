"""Exact rational arithmetic and polynomial algebra.

Everything here works over :class:`fractions.Fraction`.  ``UniPoly`` is a
dense univariate polynomial, ``BiPoly`` a sparse multivariate one (two
main variables plus optional auxiliary ones).  Real roots are isolated
with Sturm sequences on the squarefree factors of a Yun decomposition, so
all root counts, distinctness and interlacing verdicts are exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _igcd
from typing import Iterable, Mapping, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "as_rational",
    "format_rational",
    "parse_rational",
    "UniPoly",
    "BiPoly",
    "IsolatingInterval",
    "poly_arith",
    "poly_derivative",
    "poly_eval",
    "poly_gcd",
    "squarefree_part",
    "squarefree_decomposition",
    "resultant",
    "sylvester_resultant",
    "sturm_sequence",
    "sign_variations",
    "isolate_real_roots",
    "refine_interval",
    "roots_in_open_interval",
    "strictly_interlacing",
    "bipoly_arith",
    "bipoly_substitute_even",
]


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: silently importing a binary float would defeat
    the point of exact arithmetic.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}") from exc


def format_rational(q: Fraction) -> str:
    """``"p/q"`` or ``"p"`` for integers."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _sign(q) -> int:
    return (q > 0) - (q < 0)


# ---------------------------------------------------------------------------
# univariate polynomials
# ---------------------------------------------------------------------------


class UniPoly:
    """Dense polynomial with Fraction coefficients, lowest power first.

    The zero polynomial has an empty coefficient tuple and degree -1.
    Instances are immutable and hashable.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [as_rational(a) if not isinstance(a, Fraction) else a for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def _raw(cls, coeffs: list) -> "UniPoly":
        # coeffs already Fractions; strip only
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        p = cls.__new__(cls)
        p._c = tuple(coeffs)
        return p

    @classmethod
    def const(cls, c) -> "UniPoly":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> "UniPoly":
        return cls([0] * k + [c])

    @classmethod
    def x(cls) -> "UniPoly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "UniPoly":
        p = cls([1])
        for r in roots:
            p = p * cls([-as_rational(r), 1])
        return p

    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    @property
    def lc(self) -> Fraction:
        if not self._c:
            raise ValueError("zero polynomial has no leading coefficient")
        return self._c[-1]

    def __len__(self) -> int:
        return len(self._c)

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self._c):
            return self._c[k]
        return Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == UniPoly([other])._c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._c)

    def __repr__(self) -> str:
        return f"UniPoly({[format_rational(a) for a in self._c]})"

    def __str__(self) -> str:
        return self.pretty()

    def pretty(self, var: str = "t") -> str:
        if not self._c:
            return "0"
        parts = []
        for k in range(len(self._c) - 1, -1, -1):
            a = self._c[k]
            if a == 0:
                continue
            mag = format_rational(abs(a))
            if k == 0:
                body = mag
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == "1" else f"{mag}*{mono}"
            parts.append(("-" if a < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sg, body in parts[1:]:
            s += f" {sg} {body}"
        return s

    # arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, v in enumerate(b):
            out[k] += v
        return UniPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly._raw([-a for a in self._c])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return UniPoly()
            return UniPoly._raw([a * other for a in self._c])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._c, other._c
        if not a or not b:
            return UniPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return UniPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise ValueError("negative power")
        result = UniPoly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "UniPoly":
        """Multiply by t**k (k >= 0)."""
        if k < 0:
            raise ValueError("use divide_tpow for negative shifts")
        if not self._c or k == 0:
            return self
        return UniPoly._raw([Fraction(0)] * k + list(self._c))

    def valuation(self) -> int:
        """Largest k with t**k dividing the polynomial (0 for the zero polynomial)."""
        for k, a in enumerate(self._c):
            if a != 0:
                return k
        return 0

    def strip_tpow(self) -> tuple[int, "UniPoly"]:
        """Return ``(k, q)`` with ``self == t**k * q`` and ``q(0) != 0``."""
        k = self.valuation()
        return k, UniPoly._raw(list(self._c[k:]))

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self._c)
        db = other.degree
        lb = other._c[-1]
        if len(r) - 1 < db:
            return UniPoly(), self
        q = [Fraction(0)] * (len(r) - db)
        bc = other._c
        for k in range(len(r) - 1 - db, -1, -1):
            coef = r[k + db] / lb
            q[k] = coef
            if coef:
                for j in range(db + 1):
                    r[k + j] -= coef * bc[j]
        del r[db:]
        return UniPoly._raw(q), UniPoly._raw(r)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    def derivative(self) -> "UniPoly":
        return UniPoly._raw([k * a for k, a in enumerate(self._c)][1:])

    def __call__(self, t) -> Fraction:
        t = as_rational(t) if not isinstance(t, Fraction) else t
        acc = Fraction(0)
        for a in reversed(self._c):
            acc = acc * t + a
        return acc

    def eval_float(self, t: float) -> float:
        acc = 0.0
        for a in reversed(self._c):
            acc = acc * t + float(a)
        return acc

    def monic(self) -> "UniPoly":
        if not self._c:
            return self
        return self * (1 / self._c[-1])

    def primitive_positive(self) -> "UniPoly":
        """Scale by a positive rational so coefficients are coprime integers.

        Signs are preserved, which is what Sturm chains need.
        """
        if not self._c:
            return self
        den = 1
        for a in self._c:
            den = den * a.denominator // _igcd(den, a.denominator)
        ints = [int(a * den) for a in self._c]
        g = 0
        for v in ints:
            g = _igcd(g, v)
        return UniPoly._raw([Fraction(v // g) for v in ints])

    def reflect(self) -> "UniPoly":
        """p(-t)."""
        return UniPoly._raw([a if k % 2 == 0 else -a for k, a in enumerate(self._c)])

    def parity(self) -> int | None:
        """0 if even, 1 if odd, None if mixed (the zero polynomial is even)."""
        ks = {k % 2 for k, a in enumerate(self._c) if a != 0}
        if not ks:
            return 0
        if len(ks) == 1:
            return ks.pop()
        return None


def poly_arith(p: UniPoly, q: UniPoly, op: str) -> UniPoly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


def poly_derivative(p: UniPoly) -> UniPoly:
    return p.derivative()


def poly_eval(p: UniPoly, t) -> Fraction:
    return p(t)


def poly_gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic gcd (zero only when both inputs are zero)."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, (a % b).primitive_positive()
    return a.monic()


def squarefree_part(p: UniPoly) -> UniPoly:
    if p.is_zero():
        raise ValueError("zero polynomial has no squarefree part")
    if p.degree <= 0:
        return UniPoly([1])
    g = poly_gcd(p, p.derivative())
    return p.exact_div(g).monic()


def squarefree_decomposition(p: UniPoly) -> list[tuple[int, UniPoly]]:
    """Yun's algorithm: ``[(i, f_i)]`` with ``p = c * prod f_i**i``.

    Every ``f_i`` is monic, squarefree, of positive degree, and the
    ``f_i`` are pairwise coprime.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has no squarefree decomposition")
    if p.degree <= 0:
        return []
    dp = p.derivative()
    a0 = poly_gcd(p, dp)
    b = p.exact_div(a0)
    c = dp.exact_div(a0)
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        if a.degree > 0:
            out.append((i, a.monic()))
        i += 1
    return out


def resultant(p: UniPoly, q: UniPoly) -> Fraction:
    """Resultant via the Euclidean remainder sequence.

    Zero exactly when ``p`` and ``q`` share a complex root.
    """
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant with the zero polynomial is undefined")
    acc = Fraction(1)
    a, b = p, q
    while True:
        m, n = a.degree, b.degree
        if n == 0:
            return acc * b.lc ** m
        r = a % b
        if r.is_zero():
            return Fraction(0)
        if (m * n) % 2:
            acc = -acc
        acc *= b.lc ** (m - r.degree)
        a, b = b, r


def sylvester_resultant(p: UniPoly, q: UniPoly) -> Fraction:
    """Determinant of the Sylvester matrix, by fraction-exact elimination.

    Slow but independent of :func:`resultant`; used as a cross-check.
    """
    m, n = p.degree, q.degree
    if m < 0 or n < 0:
        raise ValueError("resultant with the zero polynomial is undefined")
    size = m + n
    if size == 0:
        return Fraction(1)
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + pc + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + qc + [Fraction(0)] * (size - n - 1 - i))
    det = Fraction(1)
    for col in range(size):
        piv = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        pv = rows[col][col]
        det *= pv
        for r in range(col + 1, size):
            f = rows[r][col] / pv
            if f:
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return det


# ---------------------------------------------------------------------------
# real roots
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IsolatingInterval:
    """Closed interval [lo, hi] holding exactly one distinct real root.

    ``multiplicity`` is the multiplicity of that root in the polynomial
    the interval was isolated for.
    """

    lo: Fraction
    hi: Fraction
    multiplicity: int = 1

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("lo > hi")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return float((self.lo + self.hi) / 2)

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def as_dict(self) -> dict:
        return {
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
            "multiplicity": self.multiplicity,
            "approx": round(self.midpoint, 12),
        }


def sturm_sequence(p: UniPoly) -> list[UniPoly]:
    """Sturm chain of ``p``, each member rescaled by a positive constant."""
    seq = [p.primitive_positive(), p.derivative().primitive_positive()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append((-r).primitive_positive())
    return [s for s in seq if not s.is_zero()]


def sign_variations(seq: Sequence[UniPoly], t: Fraction) -> int:
    prev = 0
    count = 0
    for s in seq:
        v = _sign(s(t))
        if v == 0:
            continue
        if prev and v != prev:
            count += 1
        prev = v
    return count


def _cauchy_bound(p: UniPoly) -> Fraction:
    lc = abs(p.lc)
    return 1 + max((abs(a) / lc for a in p.coeffs[:-1]), default=Fraction(0))


def _isolate_squarefree(f: UniPoly) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals for a squarefree ``f``.

    Each returned ``(lo, hi)`` is either a degenerate exact root or has
    ``f(lo) * f(hi) < 0``.
    """
    if f.degree < 1:
        return []
    seq = sturm_sequence(f)
    bound = _cauchy_bound(f)
    a, b = -bound, bound
    # roots lie strictly inside (-bound, bound), so counts on (a, b] are exact
    stack = [(a, b, sign_variations(seq, a), sign_variations(seq, b))]
    found = []
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n == 0:
            continue
        if n == 1:
            found.append(_settle(f, seq, a, b, va))
            continue
        m = (a + b) / 2
        vm = sign_variations(seq, m)
        stack.append((m, b, vm, vb))
        stack.append((a, m, va, vm))
    found.sort()
    return found


def _settle(f, seq, a, b, va):
    """Shrink (a, b] holding one root until neither endpoint is a root."""
    if f(b) == 0:
        return (b, b)
    while f(a) == 0:
        m = (a + b) / 2
        if f(m) == 0:
            return (m, m)
        vm = sign_variations(seq, m)
        if va - vm == 1:
            b = m
        else:
            a, va = m, vm
    return (a, b)


def _bisect_once(f: UniPoly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    if lo == hi:
        return lo, hi
    m = (lo + hi) / 2
    fm = f(m)
    if fm == 0:
        return m, m
    if _sign(fm) == _sign(f(lo)):
        return m, hi
    return lo, m


def isolate_real_roots(p: UniPoly) -> list[IsolatingInterval]:
    """Disjoint isolating intervals for every distinct real root of ``p``.

    Sorted increasingly; multiplicities come from the squarefree
    decomposition so they sum to at most ``deg p``.
    """
    if p.is_zero():
        raise ValueError("indeterminate root set")
    items = []
    for mult, f in squarefree_decomposition(p):
        for lo, hi in _isolate_squarefree(f):
            items.append([lo, hi, mult, f])
    items.sort(key=lambda it: (it[0], it[1]))
    # roots from different factors are distinct, so separation terminates
    changed = True
    while changed:
        changed = False
        for k in range(len(items) - 1):
            left, right = items[k], items[k + 1]
            if left[1] >= right[0]:
                left[0], left[1] = _bisect_once(left[3], left[0], left[1])
                right[0], right[1] = _bisect_once(right[3], right[0], right[1])
                changed = True
        if changed:
            items.sort(key=lambda it: (it[0], it[1]))
    return [IsolatingInterval(lo, hi, mult) for lo, hi, mult, _ in items]


def refine_interval(p: UniPoly, iv: IsolatingInterval, width) -> IsolatingInterval:
    """Bisect ``iv`` (isolated for ``p``) down to ``hi - lo <= width``."""
    width = as_rational(width) if not isinstance(width, Fraction) else width
    if width <= 0:
        raise ValueError("width must be positive")
    f = squarefree_part(p)
    lo, hi = iv.lo, iv.hi
    if lo != hi and f(lo) == 0:
        raise ValueError("interval endpoint is a root; not an isolating interval")
    while hi - lo > width:
        lo, hi = _bisect_once(f, lo, hi)
    return IsolatingInterval(lo, hi, iv.multiplicity)


def roots_in_open_interval(p: UniPoly, a, b, width=Fraction(1, 10**12)) -> list[IsolatingInterval]:
    """Roots of ``p`` strictly inside (a, b), refined to ``width``.

    Each returned interval lies inside (a, b) as well.
    """
    a, b = as_rational(a), as_rational(b)
    f = squarefree_part(p)
    out = []
    for iv in isolate_real_roots(p):
        lo, hi = iv.lo, iv.hi
        while True:
            if hi - lo > width:
                lo, hi = _bisect_once(f, lo, hi)
                continue
            if lo > a and hi < b:
                out.append(IsolatingInterval(lo, hi, iv.multiplicity))
                break
            if hi <= a or lo >= b:
                break
            # straddles an endpoint: either the root is the endpoint or more bisection decides
            if lo == hi:
                break
            if (lo <= a <= hi and f(a) == 0) or (lo <= b <= hi and f(b) == 0):
                break
            lo, hi = _bisect_once(f, lo, hi)
    return out


def _separate(fa: UniPoly, ia: list, fb: UniPoly, ib: list) -> None:
    """Refine intervals of two root lists (coprime squarefree) until disjoint."""
    while True:
        clash = False
        for x in ia:
            for y in ib:
                if x[0] <= y[1] and y[0] <= x[1]:
                    x[0], x[1] = _bisect_once(fa, x[0], x[1])
                    y[0], y[1] = _bisect_once(fb, y[0], y[1])
                    clash = True
        if not clash:
            return


def strictly_interlacing(p: UniPoly, q: UniPoly, lo=None, hi=None) -> bool:
    """Exact test that the real roots of ``p`` and ``q`` strictly interlace.

    Roots are restricted to the open window (lo, hi) when given.  Every
    root must be simple, no root may be shared, and the merged sorted
    sequence must alternate between the two polynomials.
    """
    if lo is None:
        rp, rq = isolate_real_roots(p), isolate_real_roots(q)
    else:
        rp = roots_in_open_interval(p, lo, hi)
        rq = roots_in_open_interval(q, lo, hi)
    if any(iv.multiplicity > 1 for iv in rp + rq):
        return False
    g = poly_gcd(p, q)
    if g.degree > 0:
        shared = isolate_real_roots(g) if lo is None else roots_in_open_interval(g, lo, hi)
        if shared:
            return False
    fp, fq = squarefree_part(p), squarefree_part(q)
    ia = [[iv.lo, iv.hi] for iv in rp]
    ib = [[iv.lo, iv.hi] for iv in rq]
    _separate(fp, ia, fq, ib)
    merged = sorted([(x[0], 0) for x in ia] + [(y[0], 1) for y in ib])
    return all(merged[k][1] != merged[k + 1][1] for k in range(len(merged) - 1))


# ---------------------------------------------------------------------------
# sparse multivariate polynomials
# ---------------------------------------------------------------------------


def _lcm(a: int, b: int) -> int:
    return a * b // _igcd(a, b)


class BiPoly:
    """Sparse polynomial in (x, y) plus optional auxiliary variables.

    ``terms`` maps exponent tuples ``(i, j, e_1, ..., e_k)`` to nonzero
    Fractions.  With ``nvars == 2`` this is an ordinary bivariate
    polynomial in x and y.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, terms: Mapping | None = None, nvars: int = 2):
        self.nvars = nvars
        clean = {}
        for key, c in (terms or {}).items():
            key = tuple(key)
            if len(key) != nvars:
                raise ValueError(f"exponent {key} does not have {nvars} entries")
            c = as_rational(c) if not isinstance(c, Fraction) else c
            if c != 0:
                clean[key] = clean.get(key, Fraction(0)) + c
                if clean[key] == 0:
                    del clean[key]
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "BiPoly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def const(cls, c, nvars: int = 2) -> "BiPoly":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def var(cls, k: int, nvars: int = 2) -> "BiPoly":
        e = [0] * nvars
        e[k] = 1
        return cls({tuple(e): 1}, nvars)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int:
        """Total degree in the first two variables (x, y); -1 for zero."""
        if not self.terms:
            return -1
        return max(k[0] + k[1] for k in self.terms)

    @property
    def full_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(k) for k in self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"BiPoly({len(self.terms)} terms, nvars={self.nvars}, degree={self.total_degree})"

    def __add__(self, other: "BiPoly") -> "BiPoly":
        if isinstance(other, (int, Fraction)):
            other = BiPoly.const(other, self.nvars)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return BiPoly._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self) -> "BiPoly":
        return BiPoly._raw({k: -c for k, c in self.terms.items()}, self.nvars)

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def scale(self, c) -> "BiPoly":
        c = as_rational(c) if not isinstance(c, Fraction) else c
        if c == 0:
            return BiPoly({}, self.nvars)
        return BiPoly._raw({k: v * c for k, v in self.terms.items()}, self.nvars)

    def _integer_form(self) -> tuple[int, dict]:
        den = 1
        for c in self.terms.values():
            den = _lcm(den, c.denominator)
        return den, {k: c.numerator * (den // c.denominator) for k, c in self.terms.items()}

    def __mul__(self, other) -> "BiPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if other.nvars != self.nvars:
            raise ValueError("variable count mismatch")
        # integer convolution with a common denominator is far cheaper than Fraction products
        da, ta = self._integer_form()
        db, tb = other._integer_form()
        acc: dict = {}
        n = self.nvars
        if n == 2:
            for (i1, j1), c1 in ta.items():
                for (i2, j2), c2 in tb.items():
                    key = (i1 + i2, j1 + j2)
                    acc[key] = acc.get(key, 0) + c1 * c2
        else:
            for k1, c1 in ta.items():
                for k2, c2 in tb.items():
                    key = tuple(a + b for a, b in zip(k1, k2))
                    acc[key] = acc.get(key, 0) + c1 * c2
        den = da * db
        return BiPoly._raw({k: Fraction(v, den) for k, v in acc.items() if v}, n)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "BiPoly":
        result = BiPoly.const(1, self.nvars)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, *point):
        """Exact evaluation at rational values of all variables."""
        if len(point) != self.nvars:
            raise ValueError("wrong number of coordinates")
        total = Fraction(0)
        for k, c in self.terms.items():
            term = c
            for v, e in zip(point, k):
                if e:
                    term *= as_rational(v) ** e
            total += term
        return total

    def eval_float(self, x: float, y: float) -> tuple[float, float]:
        """Float value at (x, y) and the absolute-term scale sum |c|*|monomial|."""
        if self.nvars != 2:
            raise ValueError("float evaluation is for (x, y) polynomials only")
        val = 0.0
        scale = 0.0
        for (i, j), c in self.terms.items():
            t = float(c) * x**i * y**j
            val += t
            scale += abs(t)
        return val, scale

    def aux_exponents(self) -> list[tuple[int, ...]]:
        return sorted({k[2:] for k in self.terms})

    def drop_aux(self) -> "BiPoly":
        if any(any(k[2:]) for k in self.terms):
            raise ValueError("auxiliary variables still present")
        return BiPoly._raw({k[:2]: c for k, c in self.terms.items()}, 2)

    def to_rows(self) -> list[tuple[int, int, Fraction]]:
        return sorted((k[0], k[1], c) for k, c in self.terms.items())


def bipoly_arith(p: BiPoly, q: BiPoly, op: str) -> BiPoly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


def bipoly_substitute_even(p: BiPoly, squares: Sequence[BiPoly]) -> BiPoly:
    """Replace every auxiliary ``chi_k**(2m)`` with ``squares[k]**m``.

    ``squares[k]`` is the (x, y) polynomial that ``chi_k**2`` stands for.
    Raises if any auxiliary exponent is odd.
    """
    naux = p.nvars - 2
    if len(squares) != naux:
        raise ValueError("need one square per auxiliary variable")
    groups: dict = {}
    for key, c in p.terms.items():
        aux = key[2:]
        if any(e % 2 for e in aux):
            k = next(i for i, e in enumerate(aux) if e % 2)
            raise ValueError(f"product not even in chi_{k + 1}")
        groups.setdefault(aux, {})[key[:2]] = c
    powers: dict = {}

    def power(k: int, m: int) -> BiPoly:
        if (k, m) not in powers:
            powers[(k, m)] = squares[k] ** m
        return powers[(k, m)]

    out = BiPoly({}, 2)
    for aux, coeff in sorted(groups.items()):
        term = BiPoly._raw(dict(coeff), 2)
        for k, e in enumerate(aux):
            if e:
                term = term * power(k, e // 2)
        out = out + term
    return out

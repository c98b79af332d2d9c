from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from asymdir.exact import (
    BiPoly,
    UniPoly,
    as_rational,
    bipoly_substitute_even,
    format_rational,
    isolate_real_roots,
    parse_rational,
    poly_arith,
    poly_derivative,
    poly_eval,
    poly_gcd,
    refine_interval,
    resultant,
    roots_in_open_interval,
    squarefree_decomposition,
    squarefree_part,
    strictly_interlacing,
    sylvester_resultant,
)

coeff = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 3))
polys = st.lists(coeff, min_size=0, max_size=7).map(UniPoly)
nonconst = st.lists(coeff, min_size=2, max_size=7).map(UniPoly).filter(lambda p: p.degree >= 1)

t = sp.Symbol("t")


def to_sympy(p):
    return sp.Poly([sp.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)] or [0], t)


def sympy_sylvester(p, q):
    a = [sp.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)]
    b = [sp.Rational(c.numerator, c.denominator) for c in reversed(q.coeffs)]
    n, m = len(a) - 1, len(b) - 1
    rows = [[0] * i + a + [0] * (m - 1 - i) for i in range(m)]
    rows += [[0] * i + b + [0] * (n - 1 - i) for i in range(n)]
    return sp.Matrix(rows).det()


def test_rationals_are_normalised():
    assert as_rational("6/4") == Fraction(3, 2)
    assert parse_rational("-0/5") == 0
    assert format_rational(Fraction(-3, 1)) == "-3"
    assert format_rational(Fraction(2, 6)) == "1/3"
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_zero_polynomial_conventions():
    z = UniPoly([0, 0])
    assert z.coeffs == () and z.degree == -1 and z.is_zero()
    assert UniPoly([1, 2, 0]).degree == 1


def test_spec_arithmetic_examples():
    p = UniPoly([1, 1])
    assert poly_arith(p, p, "mul") == UniPoly([1, 2, 1])
    assert poly_arith(p, p, "sub").is_zero()
    assert poly_derivative(UniPoly([0, 0, 0, 1])) == UniPoly([0, 0, 3])
    assert poly_eval(UniPoly([1, 0, 1]), Fraction(1, 2)) == Fraction(5, 4)


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p + q == q + p


@given(polys, polys)
def test_product_rule(p, q):
    assert (p * q).derivative() == p.derivative() * q + p * q.derivative()


@given(polys, nonconst)
def test_divmod_reconstructs(p, q):
    quo, rem = p.divmod(q)
    assert quo * q + rem == p
    assert rem.degree < q.degree


@given(nonconst, nonconst)
@settings(max_examples=60)
def test_resultant_matches_sylvester_and_sympy(p, q):
    r = resultant(p, q)
    assert r == sylvester_resultant(p, q)
    rs = sp.Rational(r.numerator, r.denominator)
    assert rs == sympy_sylvester(p, q)
    # sympy.resultant disagrees in sign when an argument vanishes at 0, so only |.| is compared
    assert abs(rs) == abs(sp.resultant(to_sympy(p), to_sympy(q)))


@given(nonconst, nonconst)
@settings(max_examples=60)
def test_gcd_matches_sympy(p, q):
    g = poly_gcd(p, q)
    expect = sp.gcd(to_sympy(p), to_sympy(q)).monic()
    assert sp.expand(to_sympy(g).as_expr() - expect.as_expr()) == 0


def test_resultant_simple():
    assert resultant(UniPoly([-1, 1]), UniPoly([-2, 1])) == -1


@given(nonconst)
@settings(max_examples=80)
def test_isolation_counts_match_sympy(p):
    ivs = isolate_real_roots(p)
    roots = sp.Poly(to_sympy(p)).real_roots()
    assert sum(iv.multiplicity for iv in ivs) == len(roots)
    for a, b in zip(ivs, ivs[1:]):
        assert a.hi < b.lo
    for iv in ivs:
        inside = [r for r in roots if iv.lo <= r <= iv.hi]
        assert len(inside) == iv.multiplicity


def test_isolation_examples():
    (neg, pos) = isolate_real_roots(UniPoly([-2, 0, 1]))
    assert neg.lo < -1.41421 < neg.hi and pos.lo < 1.41421 < pos.hi
    (triple,) = isolate_real_roots(UniPoly([0, 0, 0, 1]))
    assert triple.multiplicity == 3 and triple.lo <= 0 <= triple.hi
    assert isolate_real_roots(UniPoly([1, 0, 1])) == []
    with pytest.raises(ValueError, match="indeterminate root set"):
        isolate_real_roots(UniPoly())


def test_refinement_reaches_width():
    (_, pos) = isolate_real_roots(UniPoly([-2, 0, 1]))
    iv = refine_interval(UniPoly([-2, 0, 1]), pos, Fraction(1, 10**12))
    assert iv.width <= Fraction(1, 10**12)
    assert abs(iv.midpoint - 2**0.5) < 1e-12


def test_roots_in_open_interval_excludes_endpoints():
    p = UniPoly.from_roots([-1, Fraction(1, 2), 1])
    ivs = roots_in_open_interval(p, -1, 1)
    assert len(ivs) == 1 and ivs[0].lo <= Fraction(1, 2) <= ivs[0].hi


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=4), st.integers(1, 3))
def test_squarefree(roots, power):
    p = UniPoly.from_roots(roots) ** power
    assert squarefree_part(p) == UniPoly.from_roots(sorted(set(roots)))
    rebuilt = UniPoly([1])
    for m, f in squarefree_decomposition(p):
        rebuilt = rebuilt * f**m
    assert rebuilt == p.monic()


def test_interlacing():
    p = UniPoly.from_roots([-2, 0, 2])
    q = UniPoly.from_roots([-1, 1])
    assert strictly_interlacing(p, q)
    assert not strictly_interlacing(p, UniPoly.from_roots([1, 3]))
    assert not strictly_interlacing(p, UniPoly.from_roots([0, 1]))  # shared root


def test_bipoly_product_and_degree():
    x, y = BiPoly.var(0), BiPoly.var(1)
    p = (x + y) * (x - y)
    assert p == x * x - y * y
    assert p.total_degree == 2
    assert p(3, 1) == 8


def test_even_substitution():
    n = 3
    x, chi = BiPoly.var(0, n), BiPoly.var(2, n)
    p = x * chi * chi
    out = bipoly_substitute_even(p, [BiPoly.var(1) * BiPoly.var(1)])
    assert out == BiPoly.var(0) * BiPoly.var(1) * BiPoly.var(1)
    with pytest.raises(ValueError, match="not even"):
        bipoly_substitute_even(x * chi, [BiPoly.var(1)])

import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from frobdmod.fieldpoly import (
    NEG_INF,
    ExponentRangeError,
    ModulusMismatch,
    PolyParseError,
    Prime,
    SparsePoly,
    add,
    binom_mod_p,
    format_poly,
    frobenius_level,
    mul,
    neg,
    parse_poly,
    scale,
)


def pascal_rows(nmax):
    """Exact big-integer Pascal rows, independent of any digit arithmetic."""
    row = [1]
    yield row
    for _ in range(nmax):
        row = [1] + [a + b for a, b in zip(row, row[1:])] + [1]
        yield row


@pytest.mark.parametrize(
    "n,k,p,expected",
    [
        (6, 2, 2, math.factorial(6) // (math.factorial(2) * math.factorial(4)) % 2),
        (4, 2, 2, 6 % 2),
        (12, 4, 2, 495 % 2),
        (17, 0, 5, 1),
        (3, 7, 3, 0),
    ],
)
def test_binom_examples(n, k, p, expected):
    assert binom_mod_p(n, k, p) == expected


def test_binom_frozen_values():
    assert binom_mod_p(6, 2, 2) == 1
    assert binom_mod_p(4, 2, 2) == 0
    assert binom_mod_p(12, 4, 2) == 1


@pytest.mark.parametrize("p", [2, 3, 5])
def test_lucas_against_pascal(p):
    for n, row in enumerate(pascal_rows(1000)):
        for k, c in enumerate(row):
            assert binom_mod_p(n, k, p) == c % p, (n, k)


def test_binom_huge_arguments():
    n = 2**70 + 5
    assert binom_mod_p(n, 5, 2) == math.comb(5, 5) % 2
    assert binom_mod_p(n, 2, 2) == 0


def test_prime_validation():
    assert Prime(7) == 7
    for bad in (0, 1, 4, 9, 7917):
        with pytest.raises(ValueError):
            Prime(bad)
    with pytest.raises(TypeError):
        Prime(2.0)


def test_ring_examples():
    x3 = SparsePoly.monomial(2, 3)
    assert add(x3, x3).is_zero()
    assert mul(SparsePoly.monomial(5, 2), SparsePoly.monomial(5, 4)) == SparsePoly.monomial(5, 6)
    assert neg(SparsePoly.monomial(3, 2)) == SparsePoly(3, {2: 2})
    assert scale(4, SparsePoly(5, {1: 2})) == SparsePoly(5, {1: 3})


def test_no_zero_terms_stored():
    f = SparsePoly(3, {1: 3, 2: 4, 5: 0})
    assert f.terms == {2: 1}
    g = SparsePoly(3, {2: 2}) + SparsePoly(3, {2: 1})
    assert g.terms == {}


def test_zero_degree_is_negative_infinity():
    z = SparsePoly.zero(3)
    assert z.degree == NEG_INF
    assert z.degree < 0 and not isinstance(z.degree, int)
    assert SparsePoly(3, {7: 1, 2: 2}).degree == 7


def test_modulus_mismatch():
    with pytest.raises(ModulusMismatch):
        SparsePoly.one(2) + SparsePoly.one(3)


def test_exponent_overflow_raises():
    big = SparsePoly.monomial(2, 2**62)
    with pytest.raises(ExponentRangeError):
        big * big
    with pytest.raises(ExponentRangeError):
        SparsePoly.monomial(2, 2**63)
    with pytest.raises(ExponentRangeError):
        big.shift(2**62)


def test_frobenius_level_examples():
    assert frobenius_level(SparsePoly(2, {6: 1, 12: 1})) == 1
    for p in (2, 3, 5):
        for r in range(6):
            assert frobenius_level(SparsePoly.monomial(p, (p + 1) * p**r)) >= r
    assert frobenius_level(SparsePoly.one(3)) == math.inf
    assert frobenius_level(SparsePoly.zero(3)) == math.inf


@pytest.mark.parametrize(
    "text,p,terms",
    [("x + x^4", 2, {1: 1, 4: 1}), ("2*x^2", 3, {2: 2}), ("1 + 2*x + x^9", 3, {0: 1, 1: 2, 9: 1}), ("0", 5, {})],
)
def test_parse(text, p, terms):
    assert parse_poly(text, p).terms == terms


def test_format():
    assert format_poly(SparsePoly.zero(2)) == "0"
    assert format_poly(SparsePoly(3, {4: 1, 1: 2, 0: 1})) == "1 + 2*x + x^4"
    assert format_poly(parse_poly("x^4 + x", 2)) == "x + x^4"


@pytest.mark.parametrize("bad", ["", "x^", "3*x", "x^-1", "2x", "x + x", "y", "x^2 +"])
def test_parse_errors(bad):
    with pytest.raises(PolyParseError):
        parse_poly(bad, 3)


def polys(p, max_terms=6, max_exp=60):
    return st.dictionaries(st.integers(0, max_exp), st.integers(0, p - 1), max_size=max_terms).map(
        lambda d: SparsePoly(p, d)
    )


@settings(max_examples=200, derandomize=True)
@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: st.tuples(polys(p), polys(p), polys(p))))
def test_ring_axioms(triple):
    f, g, h = triple
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f + g == g + f and f * g == g * f
    assert f - f == SparsePoly.zero(f.p)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_ring_axioms_random_triples(p):
    rng = random.Random(1000 + p)

    def rand():
        return SparsePoly(p, {rng.randrange(80): rng.randrange(p) for _ in range(rng.randrange(6))})

    for _ in range(1000):
        f, g, h = rand(), rand(), rand()
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert f * g == g * f


@settings(max_examples=200, derandomize=True)
@given(st.sampled_from([2, 3, 5]).flatmap(polys))
def test_roundtrip(f):
    assert parse_poly(format_poly(f), f.p) == f


@settings(max_examples=100, derandomize=True)
@given(st.sampled_from([2, 3]).flatmap(lambda p: polys(p, max_terms=3, max_exp=30)))
def test_frobenius_level_of_pth_power(f):
    if f.is_constant():
        return
    assert frobenius_level(f ** f.p) == frobenius_level(f) + 1
    assert f ** f.p == f.frobenius(1)

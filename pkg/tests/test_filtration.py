from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest

from frobdmod.diffop import BasisOp, apply_basis
from frobdmod.fieldpoly import SparsePoly, parse_poly
from frobdmod.filtration import (
    FormulaUndefined,
    SpanAccumulator,
    e_of,
    element_vector,
    filtration_dim_reference,
    filtration_image,
    growth_series,
    span_dim,
    spanning_images,
    thm32_bound,
    thm42_formula,
)
from frobdmod.frobmod import FrobModule, ModuleElement
from frobdmod.linalg import echelon_rank


def E(p, f1, f2):
    return ModuleElement(parse_poly(f1, p), parse_poly(f2, p))


def test_span_dim_examples():
    assert span_dim([E(2, "0", "1"), E(2, "0", "x"), E(2, "x^2", "0")]) == 3
    assert span_dim([E(2, "x + x^4", "0"), E(2, "x", "0"), E(2, "x^4", "0")]) == 2
    assert span_dim([]) == 0


def test_echelon_rank_small_matrix():
    # rows of [[1,2,0],[2,4,0],[0,1,1]] over F_5 have rank 2
    rows = [([0, 1], [1, 2]), ([0, 1], [2, 4]), ([1, 2], [1, 1])]
    assert echelon_rank(rows, 5) == 2
    assert echelon_rank([([0], [3])], 3) == 0


def test_accumulator_is_reduced_echelon():
    acc = SpanAccumulator(3)
    for el in [E(3, "1 + x", "x"), E(3, "x + 2*x^2", "0"), E(3, "1 + x^2", "x"), E(3, "x^3", "1")]:
        acc.insert(el)
    rows = acc.rows
    assert acc.dimension() == len(rows) == 3
    for pivot, row in rows.items():
        assert row[pivot] == 1
        assert min(row) == pivot
        for other_pivot, other in rows.items():
            if other_pivot != pivot:
                assert pivot not in other


def test_accumulator_idempotent():
    acc = SpanAccumulator(2)
    els = spanning_images(FrobModule.ex2(2), [ModuleElement.s2(2)], 6)
    for el in els:
        acc.insert(el)
    before = acc.rows
    for el in els:
        assert not acc.insert(el)
        assert acc.contains(el)
    assert acc.rows == before


def test_filtration_image_small_by_hand():
    imgs = [E(2, "0", "1"), E(2, "0", "x"), E(2, "0", "x^2"), E(2, "x^2", "0"), E(2, "x^3", "0"), E(2, "x + x^4", "0")]
    assert span_dim(imgs) == 6
    _, dim = filtration_image(FrobModule.ex2(2), [ModuleElement.s2(2)], 2)
    assert dim == 6
    assert thm42_formula(2, 2) == 8


def test_filtration_image_examples():
    m = FrobModule.ex2(2)
    assert filtration_image(m, [ModuleElement.s2(2)], 5)[1] == 16
    for p in (2, 3):
        for kind in ("ex1", "ex2"):
            mod = FrobModule.ex1(p) if kind == "ex1" else FrobModule.ex2(p)
            for i in range(10):
                assert filtration_image(mod, [ModuleElement.s1(p)], i)[1] == i + 1


@pytest.mark.parametrize("p,kind,gens", [(2, "ex2", ("s2",)), (3, "ex2", ("s2",)), (2, "ex1", ("s1", "s2")), (3, "ex1", ("s2",))])
def test_dedup_is_invisible(p, kind, gens):
    m = FrobModule.ex1(p) if kind == "ex1" else FrobModule.ex2(p)
    g = [getattr(ModuleElement, n)(p) for n in gens]
    for i in range(0, 17):
        assert filtration_image(m, g, i)[1] == filtration_dim_reference(m, g, i)


def test_thm42_formula_examples():
    assert thm42_formula(8, 2) == 3 * 8 - 4 + 3 == 23
    assert thm42_formula(12, 2) == 2 * 12 + 16 - 8 + 2 == 34
    assert thm42_formula(5, 2) == 15 - 2 + 3 == 16
    with pytest.raises(FormulaUndefined):
        thm42_formula(2, 3)


def test_thm32_bound_examples():
    assert thm32_bound(3, 2) == 2 * 8 - 4 * (2**2 - 1) == 4
    assert thm32_bound(4, 2) == 3 * 16 - 4 * (2**3 - 1) == 20
    assert thm32_bound(1, 2) == 0
    # the bound is the sum over ceil(i/2) <= k <= i of (p^i - p^k)
    for p in (2, 3, 5):
        for i in range(1, 12):
            h = -(-i // 2)
            assert thm32_bound(i, p) == sum(p**i - p**k for k in range(h, i + 1))


def test_e_of():
    assert e_of(8, 2) == 3
    assert e_of(9, 3) == 2
    for p in (2, 3, 5):
        for k in range(1, 8):
            assert e_of(p**k - 1, p) == k - 1
            assert e_of(p**k, p) == k


def test_thm42_oracle_equality():
    for p, lo, hi in ((2, 5, 128), (3, 7, 100)):
        m = FrobModule.ex2(p)
        for i in range(lo, hi + 1):
            _, dim = filtration_image(m, [ModuleElement.s2(p)], i)
            assert dim == thm42_formula(i, p), (p, i)
            assert dim <= 4 * i


@pytest.mark.parametrize("p", [2, 3, 5])
def test_monotone_in_i_and_generators(p):
    for mod in (FrobModule.ex1(p), FrobModule.ex2(p)):
        prev = -1
        for i in range(0, 30):
            d2 = filtration_image(mod, [ModuleElement.s2(p)], i)[1]
            d12 = filtration_image(mod, [ModuleElement.s1(p), ModuleElement.s2(p)], i)[1]
            assert d2 >= prev and d12 >= d2
            prev = d2


def test_growth_series_ex2():
    series = growth_series(FrobModule.ex2(2), [ModuleElement.s2(2)], range(5, 13))
    assert all(r.match for r in series.records)
    assert [r.formula_value for r in series.records] == [thm42_formula(i, 2) for i in range(5, 13)]
    assert series.records[0].ratio == Fraction(16, 5)


def test_growth_series_s1_slope():
    series = growth_series(FrobModule.ex1(3), [ModuleElement.s1(3)], range(1, 20))
    assert series.dims() == list(range(2, 21))
    assert series.empirical_slope_bound == 2
    assert all(r.formula_value is None for r in series.records)


def test_growth_series_ex1_bound():
    m = FrobModule.ex1(2)
    series = growth_series(m, [ModuleElement.s1(2), ModuleElement.s2(2)], [2, 4, 8, 16, 32])
    for e, rec in enumerate(series.records, start=1):
        assert rec.dim >= thm32_bound(e, 2)


def test_growth_series_rejects_unsorted():
    with pytest.raises(ValueError):
        growth_series(FrobModule.ex2(2), [ModuleElement.s2(2)], [3, 2])


def test_ex1_distinct_degrees():
    p = 2
    m = FrobModule.ex1(p)
    for i in range(1, 8):
        seen = {}
        for k in range(-(-i // 2), i + 1):
            d = apply_basis(BasisOp(0, p**k), m.sigma(k))
            for j in range(0, p**i - p**k + 1):
                deg = d.shift(j).degree
                assert deg == j + p ** (2 * k)
                assert deg not in seen, (i, j, k, seen.get(deg))
                seen[deg] = (j, k)


def test_ex1_superlinear_tail():
    m = FrobModule.ex1(2)
    g = [ModuleElement.s1(2), ModuleElement.s2(2)]
    dims = [filtration_image(m, g, 2**e)[1] for e in range(1, 8)]
    assert dims == [7, 13, 26, 56, 121, 269, 590]
    ratios = [Fraction(d, 2**e) for e, d in enumerate(dims, start=1)]
    assert all(b > a for a, b in zip(ratios[2:], ratios[3:]))


def test_serial_equals_concurrent():
    m = FrobModule.ex2(3)
    g = [ModuleElement.s2(3)]
    idx = list(range(0, 60))
    serial = [filtration_image(m, g, i)[1] for i in idx]
    with ThreadPoolExecutor(max_workers=4) as ex:
        par = list(ex.map(lambda i: filtration_image(FrobModule.ex2(3), g, i)[1], idx))
    assert serial == par


def test_element_vector_components():
    v = element_vector(E(3, "2*x", "1 + x"))
    assert v == {(1, 1): 2, (0, 0): 1, (0, 1): 1}

"""Dimensions of Bernstein-filtration images F_i . (generators) inside M.

Monomials of M are indexed by (component, exponent) with the s2 component
ordered before s1; every elimination pivots on the smallest such index.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .diffop import BasisOp, bernstein_basis
from .fieldpoly import ExponentRangeError, Prime
from .frobmod import FrobModule, ModuleElement
from .linalg import echelon_rank

S2, S1 = 0, 1

Monomial = Tuple[int, int]


class FormulaUndefined(ValueError):
    """The closed formula needs p^(e-1) with e = 0 (that is, i < p)."""


def element_vector(m: ModuleElement) -> Dict[Monomial, int]:
    vec = {(S1, e): c for e, c in m.f1._terms.items()}
    vec.update({(S2, e): c for e, c in m.f2._terms.items()})
    return vec


class SpanAccumulator:
    """Reduced row-echelon basis of a growing subspace of M over F_p."""

    def __init__(self, p: int):
        self.p = Prime(p)
        self._rows: Dict[Monomial, Dict[Monomial, int]] = {}

    def dimension(self) -> int:
        return len(self._rows)

    __len__ = dimension

    @property
    def rows(self) -> Dict[Monomial, Dict[Monomial, int]]:
        return {k: dict(v) for k, v in sorted(self._rows.items())}

    def reduce(self, vec: Dict[Monomial, int]) -> Dict[Monomial, int]:
        """Remainder of vec after clearing every pivot column."""
        p = self.p
        v = {k: c % p for k, c in vec.items() if c % p}
        for col in [k for k in v if k in self._rows]:
            f = v.get(col)
            if not f:
                continue
            for k, c in self._rows[col].items():
                y = (v.get(k, 0) - f * c) % p
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
        return v

    def insert(self, m: ModuleElement) -> bool:
        """Add m to the span; True when the dimension grew."""
        if m.p != self.p:
            raise ValueError("element modulus differs from accumulator modulus")
        return self.insert_vector(element_vector(m))

    def insert_vector(self, vec: Dict[Monomial, int]) -> bool:
        p = self.p
        v = self.reduce(vec)
        if not v:
            return False
        pivot = min(v)
        inv = pow(v[pivot], -1, p)
        v = {k: c * inv % p for k, c in v.items()}
        for row in self._rows.values():
            f = row.get(pivot)
            if f:
                for k, c in v.items():
                    y = (row.get(k, 0) - f * c) % p
                    if y:
                        row[k] = y
                    else:
                        row.pop(k, None)
        self._rows[pivot] = v
        return True

    def contains(self, m: ModuleElement) -> bool:
        return not self.reduce(element_vector(m))


def span_dim(elements: Iterable[ModuleElement], p: Optional[int] = None) -> int:
    """Dimension over F_p of the span of the given elements."""
    elements = list(elements)
    if not elements:
        return 0
    if p is None:
        p = elements[0].p
    vecs = [element_vector(m) for m in elements]
    cols = sorted({k for v in vecs for k in v})
    index = {k: n for n, k in enumerate(cols)}
    rows = []
    for v in vecs:
        keys = sorted(v)
        rows.append(([index[k] for k in keys], [v[k] for k in keys]))
    return echelon_rank(rows, int(p))


def spanning_images(module: FrobModule, gens: Sequence[ModuleElement], i: int) -> List[ModuleElement]:
    """Distinct images spanning F_i . gens.

    x^a D_b acts as x^a times D_b, so the image of (a, b) on g is x^a E with
    E = D_b g; only the largest shift per normalized E is kept.
    """
    if i < 0:
        raise ValueError("filtration index must be non-negative")
    reach: Dict[ModuleElement, int] = {}
    order: List[ModuleElement] = []
    for g in gens:
        for b in range(i + 1):
            e = module.act_basis(BasisOp(0, b), g)
            if e.is_zero():
                continue
            key = _normalize(e)
            if key not in reach:
                order.append(key)
                reach[key] = i - b
            else:
                reach[key] = max(reach[key], i - b)
    return [key.shift(a) for key in order for a in range(reach[key] + 1)]


def _normalize(m: ModuleElement) -> ModuleElement:
    vec = element_vector(m)
    lead = vec[min(vec)]
    return m.scale(pow(lead, -1, m.p))


def filtration_image(
    module: FrobModule, gens: Sequence[ModuleElement], i: int
) -> Tuple[List[ModuleElement], int]:
    elements = spanning_images(module, gens, i)
    return elements, span_dim(elements, module.p)


def filtration_dim_reference(module: FrobModule, gens: Sequence[ModuleElement], i: int) -> int:
    """Same dimension without deduplication: every x^a D_b on every generator."""
    acc = SpanAccumulator(module.p)
    for g in gens:
        for op in bernstein_basis(i):
            acc.insert(module.act_basis(op, g))
    return acc.dimension()


def e_of(i: int, p: int) -> int:
    """The e with p^e <= i < p^(e+1)."""
    if i < 1:
        raise ValueError("e_of needs i >= 1")
    e, q = 0, p
    while q <= i:
        q *= p
        e += 1
    return e


def thm42_formula(i: int, p: int) -> int:
    """Closed form for dim F_i s2 in the EX2 module."""
    if i < 1:
        raise ValueError("formula needs i >= 1")
    e = e_of(i, p)
    if e == 0:
        raise FormulaUndefined(f"i={i} < p={p}: p^(e-1) is not an integer")
    pe = p**e
    if pe * p - pe + pe // p <= i:
        return 2 * i + pe * p - pe + 2
    return 3 * i - pe // p + 3


def thm42_boundary(e: int, p: int) -> int:
    """First i in [p^e, p^(e+1)) on the 2i branch of the closed form."""
    return p ** (e + 1) - p**e + p ** (e - 1)


def thm32_bound(i: int, p: int) -> int:
    """Lower bound for dim F_(p^i) (s1, s2) in the EX1 module."""
    if i < 1:
        raise ValueError("bound needs i >= 1")
    h = (i + 1) // 2
    num = p ** (i - h + 1) - 1
    if num % (p - 1):
        raise ArithmeticError("geometric sum not integral")
    value = (i - h + 1) * p**i - p**h * (num // (p - 1))
    if abs(value) > 2**63 - 1:
        raise ExponentRangeError(f"bound at i={i}, p={p} exceeds the 64-bit range")
    return value


@dataclass(frozen=True)
class GrowthRecord:
    i: int
    dim: int
    ratio: Optional[Fraction]
    formula_value: Optional[int] = None
    match: Optional[bool] = None


@dataclass
class GrowthSeries:
    records: List[GrowthRecord] = field(default_factory=list)

    @property
    def empirical_slope_bound(self) -> Optional[Fraction]:
        ratios = [r.ratio for r in self.records if r.ratio is not None]
        return max(ratios) if ratios else None

    def dims(self) -> List[int]:
        return [r.dim for r in self.records]


def _is_ex2_s2(module: FrobModule, gens: Sequence[ModuleElement]) -> bool:
    return module.gseq.kind == "ex2" and list(gens) == [ModuleElement.s2(module.p)]


def growth_series(module: FrobModule, gens: Sequence[ModuleElement], i_values: Iterable[int]) -> GrowthSeries:
    i_values = list(i_values)
    if any(b <= a for a, b in zip(i_values, i_values[1:])):
        raise ValueError("i values must be strictly ascending")
    with_formula = _is_ex2_s2(module, gens)
    series = GrowthSeries()
    for i in i_values:
        _, dim = filtration_image(module, gens, i)
        ratio = Fraction(dim, i) if i > 0 else None
        fv = match = None
        if with_formula and i >= module.p:
            fv = thm42_formula(i, module.p)
            match = fv == dim
        series.records.append(GrowthRecord(i, dim, ratio, fv, match))
    return series

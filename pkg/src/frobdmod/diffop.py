"""Divided-power differential operators on F_p[x].

Operators are kept in the normal form sum c * x^a D_b, where D_b sends x^v to
C(v, b) x^(v-b).  Composition is renormalized with

    D_b x^c = sum_j C(c, j) x^(c-j) D_(b-j)
    D_a D_b = C(a+b, a) D_(a+b)
"""
from __future__ import annotations

import re
from typing import Dict, Iterable, Iterator, List, Mapping, NamedTuple, Tuple, Union

from .fieldpoly import (
    MAX_EXPONENT,
    ExponentRangeError,
    ModulusMismatch,
    PolyParseError,
    Prime,
    SparsePoly,
    base_p_digits,
    binom_mod_p,
    check_exponent,
)


class BasisOp(NamedTuple):
    """The basis symbol x^a D_b."""

    a: int
    b: int

    @property
    def bdeg(self) -> int:
        return self.a + self.b


def apply_basis(op: BasisOp, f: SparsePoly) -> SparsePoly:
    a, b = op
    p = f.p
    out: Dict[int, int] = {}
    for v, c in f._terms.items():
        if v < b:
            continue
        coeff = binom_mod_p(v, b, p)
        if coeff:
            e = v - b + a
            if e > MAX_EXPONENT:
                raise ExponentRangeError(f"x^{a} D_{b} applied to x^{v} overflows")
            out[e] = c * coeff % p
    return SparsePoly._raw(p, out)


def digit_submasks(n: int, p: int, limit: int) -> Iterator[int]:
    """All j <= limit whose base-p digits are dominated by those of n.

    These are exactly the j with C(n, j) nonzero mod p.
    """
    digits = base_p_digits(n, p)
    partial = [0]
    place = 1
    for d in digits:
        partial = [q + t * place for q in partial for t in range(d + 1) if q + t * place <= limit]
        place *= p
    yield from sorted(partial)


class Operator:
    """F_p-linear combination of basis symbols x^a D_b."""

    __slots__ = ("p", "_terms")

    def __init__(self, p: int, terms: Union[Mapping[Tuple[int, int], int], Iterable[Tuple[Tuple[int, int], int]], None] = None):
        self.p = Prime(p)
        acc: Dict[BasisOp, int] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for (a, b), c in items:
                key = BasisOp(check_exponent(a), check_exponent(b))
                c = (acc.get(key, 0) + c) % self.p
                if c:
                    acc[key] = c
                else:
                    acc.pop(key, None)
        self._terms = acc

    @classmethod
    def basis(cls, p: int, a: int = 0, b: int = 0, c: int = 1) -> "Operator":
        return cls(p, {(a, b): c})

    @classmethod
    def divided_power(cls, p: int, b: int) -> "Operator":
        return cls(p, {(0, b): 1})

    @property
    def terms(self) -> Dict[BasisOp, int]:
        return dict(self._terms)

    def items(self) -> List[Tuple[BasisOp, int]]:
        return sorted(self._terms.items(), key=lambda kv: (kv[0].b, kv[0].a))

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def order(self) -> int:
        return max((t.b for t in self._terms), default=0)

    @property
    def bdeg(self) -> int:
        return max((t.a + t.b for t in self._terms), default=0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Operator):
            return NotImplemented
        return self.p == other.p and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((int(self.p), frozenset(self._terms.items())))

    def _check(self, other: "Operator") -> None:
        if other.p != self.p:
            raise ModulusMismatch(f"moduli differ: {self.p} vs {other.p}")

    def __add__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.p, list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> "Operator":
        return Operator(self.p, {t: -c for t, c in self._terms.items()})

    def __sub__(self, other: "Operator") -> "Operator":
        return self + (-other)

    def scale(self, c: int) -> "Operator":
        return Operator(self.p, {t: c * v for t, v in self._terms.items()})

    def __mul__(self, other: "Operator") -> "Operator":
        return op_mul(self, other)

    def __call__(self, f: SparsePoly) -> SparsePoly:
        return apply(self, f)

    def __repr__(self) -> str:
        return f"Operator({int(self.p)}, {format_operator(self)!r})"

    def __str__(self) -> str:
        return format_operator(self)


def apply(op: Operator, f: SparsePoly) -> SparsePoly:
    if op.p != f.p:
        raise ModulusMismatch(f"moduli differ: {op.p} vs {f.p}")
    result = SparsePoly.zero(f.p)
    for term, c in op._terms.items():
        result = result + apply_basis(term, f).scale(c)
    return result


def _basis_product(p: int, left: BasisOp, right: BasisOp) -> Dict[BasisOp, int]:
    # (x^a D_b)(x^c D_d) = sum_j C(c, j) C(b-j+d, d) x^(a+c-j) D_(b-j+d)
    a, b = left
    c, d = right
    out: Dict[BasisOp, int] = {}
    for j in digit_submasks(c, p, b):
        coeff = binom_mod_p(c, j, p) * binom_mod_p(b - j + d, d, p) % p
        if coeff:
            key = BasisOp(check_exponent(a + c - j), check_exponent(b - j + d))
            out[key] = (out.get(key, 0) + coeff) % p
    return out


def op_mul(u: Operator, v: Operator) -> Operator:
    """Normal form of the composition u o v."""
    u._check(v)
    p = u.p
    acc: Dict[BasisOp, int] = {}
    for lt, lc in u._terms.items():
        for rt, rc in v._terms.items():
            for key, c in _basis_product(p, lt, rt).items():
                acc[key] = (acc.get(key, 0) + lc * rc * c) % p
    return Operator(p, acc)


def bernstein_basis(i: int) -> List[BasisOp]:
    """All x^a D_b with a + b <= i, ordered by b then a."""
    if i < 0:
        raise ValueError("filtration index must be non-negative")
    return [BasisOp(a, b) for b in range(i + 1) for a in range(i - b + 1)]


def min_level(b: int, p: int) -> int:
    """Least s with b < p^s."""
    s, q = 0, 1
    while b >= q:
        q *= p
        s += 1
    return s


_OP_TERM_RE = re.compile(
    r"^(?:(?P<c>\d+))?(?:\s*\*?\s*x(?:\s*\^\s*(?P<a>\d+))?)?(?:\s*\*?\s*D_(?P<b>\d+))?$"
)


def parse_operator(text: str, p: int) -> Operator:
    """Read ``"x^2*D_4 + D_1"``-style operator text."""
    p = Prime(p)
    s = text.strip()
    if s == "0":
        return Operator(p)
    acc: Dict[Tuple[int, int], int] = {}
    for raw in s.split("+"):
        tok = raw.strip()
        m = _OP_TERM_RE.match(tok)
        if not tok or m is None:
            raise PolyParseError(f"malformed operator term {tok!r}")
        has_x = "x" in tok
        c = int(m.group("c")) if m.group("c") is not None else 1
        if m.group("c") is not None and (has_x or m.group("b") is not None) and "*" not in tok:
            raise PolyParseError(f"missing '*' in {tok!r}")
        a = int(m.group("a")) if m.group("a") is not None else (1 if has_x else 0)
        b = int(m.group("b")) if m.group("b") is not None else 0
        if c == 0 or c >= p:
            raise PolyParseError(f"coefficient {c} outside 1..{p - 1}")
        acc[(a, b)] = (acc.get((a, b), 0) + c) % p
    return Operator(p, acc)


def format_operator(op: Operator) -> str:
    if op.is_zero():
        return "0"
    parts = []
    for (a, b), c in op.items():
        factors = []
        if c != 1:
            factors.append(str(c))
        if a:
            factors.append("x" if a == 1 else f"x^{a}")
        if b:
            factors.append(f"D_{b}")
        parts.append("*".join(factors) if factors else "1")
    return " + ".join(parts)

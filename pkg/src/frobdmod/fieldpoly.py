"""Prime fields F_p and sparse univariate polynomials over them."""
from __future__ import annotations

import math
import re
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

#: Largest exponent a polynomial may carry; anything above raises ExponentRangeError.
MAX_EXPONENT = 2**63 - 1

#: Degree of the zero polynomial.
NEG_INF = -math.inf


class ExponentRangeError(OverflowError):
    """An exponent or divided-power order left the supported range."""


class ModulusMismatch(ValueError):
    pass


class PolyParseError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Prime(int):
    """A validated prime modulus."""

    def __new__(cls, p: int) -> "Prime":
        if isinstance(p, Prime):
            return p
        if isinstance(p, bool) or not isinstance(p, int):
            raise TypeError(f"prime must be an int, got {type(p).__name__}")
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        return super().__new__(cls, p)

    def __repr__(self) -> str:
        return f"Prime({int(self)})"

    __str__ = int.__repr__


def base_p_digits(n: int, p: int) -> list[int]:
    """Digits of n in base p, least significant first (empty for n=0)."""
    out = []
    while n:
        n, d = divmod(n, p)
        out.append(d)
    return out


def binom_mod_p(n: int, k: int, p: int) -> int:
    """C(n, k) mod p via base-p digits (Lucas); 0 when k > n."""
    if k < 0 or n < 0:
        raise ValueError("binomial arguments must be non-negative")
    if k > n:
        return 0
    result = 1
    while k:
        n, nd = divmod(n, p)
        k, kd = divmod(k, p)
        if kd > nd:
            return 0
        result = result * math.comb(nd, kd) % p
    return result


def check_exponent(e: int) -> int:
    if e < 0:
        raise ExponentRangeError(f"negative exponent {e}")
    if e > MAX_EXPONENT:
        raise ExponentRangeError(f"exponent {e} exceeds 2^63-1")
    return int(e)


def p_adic_valuation(n: int, p: int) -> Union[int, float]:
    if n == 0:
        return math.inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class SparsePoly:
    """Immutable element of F_p[x] stored as {exponent: nonzero coefficient}."""

    __slots__ = ("p", "_terms", "_hash")

    def __init__(self, p: int, terms: Union[Mapping[int, int], Iterable[Tuple[int, int]], None] = None):
        self.p = Prime(p)
        acc: Dict[int, int] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for e, c in items:
                check_exponent(e)
                c = (acc.get(e, 0) + c) % self.p
                if c:
                    acc[e] = c
                else:
                    acc.pop(e, None)
        self._terms = acc
        self._hash = None

    @classmethod
    def _raw(cls, p: Prime, terms: Dict[int, int]) -> "SparsePoly":
        # terms must already be reduced, nonzero, and in range
        obj = cls.__new__(cls)
        obj.p = p
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, p: int) -> "SparsePoly":
        return cls._raw(Prime(p), {})

    @classmethod
    def one(cls, p: int) -> "SparsePoly":
        return cls._raw(Prime(p), {0: 1})

    @classmethod
    def monomial(cls, p: int, e: int, c: int = 1) -> "SparsePoly":
        return cls(p, {e: c})

    @property
    def terms(self) -> Dict[int, int]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[int, int]]:
        """Terms in ascending exponent order."""
        for e in sorted(self._terms):
            yield e, self._terms[e]

    def coeff(self, e: int) -> int:
        return self._terms.get(e, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def degree(self) -> Union[int, float]:
        return max(self._terms) if self._terms else NEG_INF

    @property
    def low_degree(self) -> Union[int, float]:
        return min(self._terms) if self._terms else NEG_INF

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {0}

    def _check(self, other: "SparsePoly") -> None:
        if not isinstance(other, SparsePoly):
            raise TypeError(f"expected SparsePoly, got {type(other).__name__}")
        if other.p != self.p:
            raise ModulusMismatch(f"moduli differ: {self.p} vs {other.p}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.p == other.p and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((int(self.p), frozenset(self._terms.items())))
        return self._hash

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        self._check(other)
        p = self.p
        out = dict(self._terms)
        for e, c in other._terms.items():
            c = (out.get(e, 0) + c) % p
            if c:
                out[e] = c
            else:
                del out[e]
        return SparsePoly._raw(p, out)

    def __neg__(self) -> "SparsePoly":
        p = self.p
        return SparsePoly._raw(p, {e: p - c for e, c in self._terms.items()})

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + (-other)

    def __mul__(self, other: "SparsePoly") -> "SparsePoly":
        self._check(other)
        p = self.p
        out: Dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                if e > MAX_EXPONENT:
                    raise ExponentRangeError(f"product exponent {e} exceeds 2^63-1")
                out[e] = (out.get(e, 0) + c1 * c2) % p
        return SparsePoly._raw(p, {e: c for e, c in out.items() if c})

    def scale(self, c: int) -> "SparsePoly":
        p = self.p
        c %= p
        if not c:
            return SparsePoly._raw(p, {})
        return SparsePoly._raw(p, {e: v * c % p for e, v in self._terms.items()})

    def shift(self, a: int) -> "SparsePoly":
        """Multiply by x^a."""
        if not a:
            return self
        if self._terms and max(self._terms) + a > MAX_EXPONENT:
            raise ExponentRangeError("shift overflows exponent range")
        return SparsePoly._raw(self.p, {e + a: c for e, c in self._terms.items()})

    def __pow__(self, n: int) -> "SparsePoly":
        if n < 0:
            raise ValueError("negative power")
        result = SparsePoly.one(self.p)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frobenius(self, s: int = 1) -> "SparsePoly":
        """f(x)^(p^s), which over F_p is f(x^(p^s))."""
        q = self.p**s
        return SparsePoly._raw(self.p, {check_exponent(e * q): c for e, c in self._terms.items()})

    def monic(self) -> "SparsePoly":
        """Scale so the lowest-degree coefficient is 1."""
        if not self._terms:
            return self
        lead = self._terms[min(self._terms)]
        return self.scale(pow(lead, -1, self.p))

    def __repr__(self) -> str:
        return f"SparsePoly({int(self.p)}, {format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


# functional aliases for the ring operations

def add(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    return f + g


def mul(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    return f * g


def neg(f: SparsePoly) -> SparsePoly:
    return -f


def scale(c: int, f: SparsePoly) -> SparsePoly:
    return f.scale(c)


def frobenius_level(f: SparsePoly) -> Union[int, float]:
    """Largest s with f in F_p[x^(p^s)]; math.inf for constants and zero."""
    level: Union[int, float] = math.inf
    for e in f._terms:
        if e:
            level = min(level, p_adic_valuation(e, f.p))
    return level


_TERM_RE = re.compile(
    r"""^(?:
        (?P<c1>\d+)\s*\*\s*x(?:\s*\^\s*(?P<e1>\d+))?   # c*x or c*x^e
      | x(?:\s*\^\s*(?P<e2>\d+))?                     # x or x^e
      | (?P<c3>\d+)                                  # c
    )$""",
    re.VERBOSE,
)


def parse_poly(text: str, p: int) -> SparsePoly:
    """Read a polynomial such as ``"x + 2*x^4"``; coefficients must lie in 1..p-1."""
    p = Prime(p)
    s = text.strip()
    if not s:
        raise PolyParseError("empty polynomial text")
    if s == "0":
        return SparsePoly.zero(p)
    terms: Dict[int, int] = {}
    for raw in s.split("+"):
        tok = raw.strip()
        m = _TERM_RE.match(tok)
        if m is None:
            raise PolyParseError(f"malformed term {tok!r} in {text!r}")
        if m.group("c3") is not None:
            c, e = int(m.group("c3")), 0
        elif m.group("c1") is not None:
            c = int(m.group("c1"))
            e = int(m.group("e1")) if m.group("e1") is not None else 1
        else:
            c = 1
            e = int(m.group("e2")) if m.group("e2") is not None else 1
        if c == 0 or c >= p:
            raise PolyParseError(f"coefficient {c} outside 1..{p - 1}")
        if e in terms:
            raise PolyParseError(f"repeated exponent {e}")
        terms[check_exponent(e)] = c
    return SparsePoly(p, terms)


def format_poly(f: SparsePoly) -> str:
    if not f._terms:
        return "0"
    parts = []
    for e, c in f.items():
        if e == 0:
            parts.append(str(c))
            continue
        mono = "x" if e == 1 else f"x^{e}"
        parts.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(parts)

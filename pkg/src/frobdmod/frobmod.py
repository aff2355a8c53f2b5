"""The rank-two Frobenius-descent D-module M = R s1 + R s2.

A generator sequence g_0, g_1, ... with g_r in F_p[x^(p^r)] glues the levels
together: the level-s generators are s1 and s2 + (g_0 + ... + g_(s-1)) s1.
Writing sigma_n = -(g_0 + ... + g_n), an operator of order b < p^s acts on
f1 s1 + f2 s2 through the level-s coordinates (f1 + f2 sigma_(s-1), f2).
"""
from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from .diffop import BasisOp, Operator, apply_basis, min_level
from .fieldpoly import ModulusMismatch, Prime, SparsePoly, format_poly, frobenius_level, parse_poly


class SequenceError(ValueError):
    """A generator sequence is too short or violates g_r in R^(p^r)."""


class GeneratorSequence:
    """Rule r -> g_r.  ``kind`` is "ex1", "ex2" or "custom"."""

    def __init__(self, p: int, kind: str, polys: Optional[Sequence[SparsePoly]] = None):
        self.p = Prime(p)
        kind = kind.lower()
        if kind not in ("ex1", "ex2", "custom"):
            raise ValueError(f"unknown sequence kind {kind!r}")
        if kind == "custom":
            if polys is None:
                raise ValueError("custom sequence needs an explicit list of polynomials")
            for g in polys:
                if g.p != self.p:
                    raise ModulusMismatch(f"g has modulus {g.p}, sequence has {self.p}")
            self.polys: Optional[tuple] = tuple(polys)
        else:
            self.polys = None
        self.kind = kind

    @classmethod
    def ex1(cls, p: int) -> "GeneratorSequence":
        return cls(p, "ex1")

    @classmethod
    def ex2(cls, p: int) -> "GeneratorSequence":
        return cls(p, "ex2")

    @classmethod
    def custom(cls, p: int, polys: Sequence[SparsePoly]) -> "GeneratorSequence":
        return cls(p, "custom", polys)

    @classmethod
    def from_json(cls, text: str) -> "GeneratorSequence":
        doc = json.loads(text)
        if not isinstance(doc, dict) or "p" not in doc or "g" not in doc:
            raise SequenceError('sequence file must be an object with keys "p" and "g"')
        p = Prime(doc["p"])
        if not isinstance(doc["g"], list):
            raise SequenceError('"g" must be a list of polynomial strings')
        return cls.custom(p, [parse_poly(str(t), p) for t in doc["g"]])

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "GeneratorSequence":
        return cls.from_json(Path(path).read_text())

    def to_json(self, rmax: int) -> str:
        return json.dumps({"p": int(self.p), "g": [format_poly(self.g(r)) for r in range(rmax + 1)]})

    @property
    def coverage(self) -> Optional[int]:
        """Largest r available, or None when unbounded."""
        return None if self.polys is None else len(self.polys) - 1

    def g(self, r: int) -> SparsePoly:
        if r < 0:
            raise ValueError("generator index must be non-negative")
        p = self.p
        if self.kind == "ex1":
            return SparsePoly.monomial(p, p**r + p ** (2 * r))
        if self.kind == "ex2":
            return SparsePoly.monomial(p, (p + 1) * p**r)
        if r >= len(self.polys):
            raise SequenceError(
                f"custom sequence covers g_0..g_{len(self.polys) - 1}; "
                f"g_{r} needed (supply at least {r + 1} polynomials)"
            )
        return self.polys[r]

    def __repr__(self) -> str:
        return f"GeneratorSequence(p={int(self.p)}, kind={self.kind!r})"


@dataclass(frozen=True)
class Violation:
    r: int
    level: Union[int, float]

    def __str__(self) -> str:
        return f"g_{self.r} has Frobenius level {self.level} < {self.r}"


def validate_sequence(gseq: GeneratorSequence, rmax: int) -> Optional[Violation]:
    """Return None when every g_r (r <= rmax) lies in R^(p^r), else the first violation."""
    cov = gseq.coverage
    if cov is not None and cov < rmax:
        raise SequenceError(f"validation up to r={rmax} needs {rmax + 1} polynomials, got {cov + 1}")
    for r in range(rmax + 1):
        lvl = frobenius_level(gseq.g(r))
        if lvl < r:
            return Violation(r, lvl)
    return None


@dataclass(frozen=True)
class ModuleElement:
    """f1 s1 + f2 s2."""

    f1: SparsePoly
    f2: SparsePoly

    def __post_init__(self):
        if self.f1.p != self.f2.p:
            raise ModulusMismatch("coordinates have different moduli")

    @property
    def p(self) -> Prime:
        return self.f1.p

    @classmethod
    def zero(cls, p: int) -> "ModuleElement":
        return cls(SparsePoly.zero(p), SparsePoly.zero(p))

    @classmethod
    def s1(cls, p: int) -> "ModuleElement":
        return cls(SparsePoly.one(p), SparsePoly.zero(p))

    @classmethod
    def s2(cls, p: int) -> "ModuleElement":
        return cls(SparsePoly.zero(p), SparsePoly.one(p))

    def is_zero(self) -> bool:
        return self.f1.is_zero() and self.f2.is_zero()

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        return ModuleElement(self.f1 + other.f1, self.f2 + other.f2)

    def __neg__(self) -> "ModuleElement":
        return ModuleElement(-self.f1, -self.f2)

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        return self + (-other)

    def scale(self, c: int) -> "ModuleElement":
        return ModuleElement(self.f1.scale(c), self.f2.scale(c))

    def shift(self, a: int) -> "ModuleElement":
        return ModuleElement(self.f1.shift(a), self.f2.shift(a))

    def __str__(self) -> str:
        return format_element(self)


def format_element(m: ModuleElement) -> str:
    return f"({format_poly(m.f1)}, {format_poly(m.f2)})"


def parse_element(text: str, p: int) -> ModuleElement:
    """Read ``"(f1, f2)"``."""
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ValueError(f"module element must look like (f1, f2), got {text!r}")
    inner = s[1:-1]
    parts = inner.split(",")
    if len(parts) != 2:
        raise ValueError(f"module element must have two coordinates, got {text!r}")
    return ModuleElement(parse_poly(parts[0], p), parse_poly(parts[1], p))


class FrobModule:
    """M built from a generator sequence, with a memoized sigma table."""

    def __init__(self, gseq: GeneratorSequence):
        self.gseq = gseq
        self.p = gseq.p
        self._sigma: Dict[int, SparsePoly] = {-1: SparsePoly.zero(self.p)}
        self._lock = threading.Lock()

    @classmethod
    def ex1(cls, p: int) -> "FrobModule":
        return cls(GeneratorSequence.ex1(p))

    @classmethod
    def ex2(cls, p: int) -> "FrobModule":
        return cls(GeneratorSequence.ex2(p))

    def sigma(self, n: int) -> SparsePoly:
        """-(g_0 + ... + g_n); sigma(-1) is 0."""
        if n < -1:
            raise ValueError("sigma index must be >= -1")
        cached = self._sigma.get(n)
        if cached is not None:
            return cached
        with self._lock:
            start = max(k for k in self._sigma if k <= n)
            acc = self._sigma[start]
            for r in range(start + 1, n + 1):
                acc = acc - self.gseq.g(r)
                # whole polynomials only: readers never see a partial value
                self._sigma[r] = acc
            return acc

    def _level(self, b: int, level: Optional[int]) -> int:
        if level is None:
            return min_level(b, self.p)
        if level < 0 or b >= self.p**level:
            raise ValueError(f"D_{b} is not in D_{level} (needs order < p^{level})")
        return level

    def act_basis(self, op: BasisOp, m: ModuleElement, level: Optional[int] = None) -> ModuleElement:
        a, b = op
        if m.p != self.p:
            raise ModulusMismatch(f"element modulus {m.p} differs from module modulus {self.p}")
        if b == 0:
            return m.shift(a)
        s = self._level(b, level)
        sig = self.sigma(s - 1)
        d = BasisOp(a, b)
        f1, f2 = m.f1, m.f2
        if f2.is_zero():
            return ModuleElement(apply_basis(d, f1), f2)
        lifted = apply_basis(d, f1 + f2 * sig)
        d_f2 = apply_basis(BasisOp(0, b), f2)
        return ModuleElement(lifted - (d_f2 * sig).shift(a), d_f2.shift(a))

    def act(self, op: Operator, m: ModuleElement) -> ModuleElement:
        if op.p != self.p:
            raise ModulusMismatch(f"operator modulus {op.p} differs from module modulus {self.p}")
        out = ModuleElement.zero(self.p)
        for term, c in op._terms.items():
            out = out + self.act_basis(term, m).scale(c)
        return out

    def displayed_formula_act(self, k: int, m: ModuleElement) -> ModuleElement:
        """(D f1 + (D sigma_k) f2, D f2) with D = D_(p^k), the twist taken verbatim."""
        d = BasisOp(0, self.p**k)
        twist = apply_basis(d, self.sigma(k))
        return ModuleElement(apply_basis(d, m.f1) + twist * m.f2, apply_basis(d, m.f2))

    def __repr__(self) -> str:
        return f"FrobModule({self.gseq!r})"


def ses_embed(f: SparsePoly) -> ModuleElement:
    """R -> M, f -> (f, 0)."""
    return ModuleElement(f, SparsePoly.zero(f.p))


def ses_project(m: ModuleElement) -> SparsePoly:
    """M -> R, (f1, f2) -> f2."""
    return m.f2


def act_word(module: FrobModule, ks: Sequence[int], m: ModuleElement) -> ModuleElement:
    """Apply D_(p^k) for each k in ks, rightmost first."""
    for k in reversed(ks):
        m = module.act_basis(BasisOp(0, module.p**k), m)
    return m


def generators(names: Sequence[str], p: int) -> List[ModuleElement]:
    table = {"s1": ModuleElement.s1, "s2": ModuleElement.s2}
    out = []
    for n in names:
        if n not in table:
            raise ValueError(f"unknown generator {n!r} (expected s1 or s2)")
        out.append(table[n](p))
    return out

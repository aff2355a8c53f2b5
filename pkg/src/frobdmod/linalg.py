"""Sparse Gaussian elimination over F_p."""
from __future__ import annotations

from typing import Dict, Iterable, Sequence, Tuple

Row = Tuple[Sequence[int], Sequence[int]]


def echelon_rank(rows: Iterable[Row], p: int) -> int:
    """Rank over F_p of sparse rows given as (columns, values) pairs.

    Rows are reduced into a semi-echelon basis keyed by lowest column.
    """
    pivots: Dict[int, Dict[int, int]] = {}
    for cols, vals in rows:
        v = {c: x % p for c, x in zip(cols, vals) if x % p}
        while v:
            lead = min(v)
            prow = pivots.get(lead)
            if prow is None:
                inv = pow(v[lead], -1, p)
                pivots[lead] = {c: x * inv % p for c, x in v.items()}
                break
            f = v[lead]
            for c, x in prow.items():
                y = (v.get(c, 0) - f * x) % p
                if y:
                    v[c] = y
                else:
                    v.pop(c, None)
    return len(pivots)

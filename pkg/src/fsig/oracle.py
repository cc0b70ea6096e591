"""Linear-algebra length oracle, independent of the Groebner machinery.

For an ideal containing the box ideal ``(x_1^b_1, ..., x_N^b_N)`` the quotient
``S/(box + (g_1..g_r))`` is finite dimensional; its length is the box volume
minus the rank of the Macaulay matrix whose rows are ``x^beta * g_i`` truncated
to the box.  Rows are split along a grading that makes every ``g_i``
homogeneous, so each rank problem stays small.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Sequence

from .ffpoly import Polynomial


def homogenizing_weights(polys: Sequence[Polynomial]) -> list[tuple[int, ...]]:
    """Integer weight vectors under which every polynomial is homogeneous."""
    if not polys:
        return []
    n = polys[0].ring.nvars
    rows = []
    for f in polys:
        exps = list(f.terms)
        for e in exps[1:]:
            rows.append([Fraction(a - b) for a, b in zip(e, exps[0])])
    return _rational_nullspace(rows, n)


def _rational_nullspace(rows: list[list[Fraction]], n: int) -> list[tuple[int, ...]]:
    rows = [r[:] for r in rows if any(r)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                k = rows[i][c]
                rows[i] = [a - k * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        den = lcm(*(x.denominator for x in v))
        basis.append(tuple(int(x * den) for x in v))
    return basis


def _rank_mod_p(rows: list[dict], p: int) -> int:
    pivots: dict = {}
    for row in rows:
        row = dict(row)
        while row:
            c = min(row)
            prow = pivots.get(c)
            if prow is None:
                inv = pow(row[c], -1, p)
                pivots[c] = {k: v * inv % p for k, v in row.items()}
                break
            k = row[c]
            for col, v in prow.items():
                nv = (row.get(col, 0) - k * v) % p
                if nv:
                    row[col] = nv
                else:
                    row.pop(col, None)
    return len(pivots)


def box_quotient_length(generators: Sequence[Polynomial], box: Sequence[int]) -> int:
    """``dim S/((x_i^box_i) + (generators))`` by graded Macaulay-matrix ranks."""
    box = tuple(box)
    volume = 1
    for b in box:
        volume *= b
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        return volume
    p = gens[0].ring.p
    weights = homogenizing_weights(gens)
    groups: dict = defaultdict(list)
    for g in gens:
        terms = list(g.terms.items())
        lows = tuple(min(e[i] for e, _ in terms) for i in range(len(box)))
        ranges = [range(0, b - lo) for b, lo in zip(box, lows)]
        for beta in product(*ranges):
            row = {}
            for e, c in terms:
                m = tuple(a + b for a, b in zip(e, beta))
                if all(x < b for x, b in zip(m, box)):
                    row[m] = c
            if not row:
                continue
            m0 = next(iter(row))
            key = tuple(sum(w * x for w, x in zip(wv, m0)) for wv in weights)
            groups[key].append(row)
    rank = 0
    for rows in groups.values():
        index: dict = {}
        int_rows = []
        for row in rows:
            int_rows.append({index.setdefault(m, len(index)): c for m, c in row.items()})
        rank += _rank_mod_p(int_rows, p)
    return volume - rank


def frobenius_colon_length(h: Polynomial, q: int) -> int:
    """``dim S/(m^[q] : h)``, i.e. the rank of multiplication by ``h`` on ``S/m^[q]``."""
    n = h.ring.nvars
    box = (q,) * n
    return q**n - box_quotient_length([h], box)

"""Ideals over F_p[x_1..x_N]: Buchberger bases, colons, lengths, dimension.

All heavy loops run on raw ``{exponent: coeff}`` dicts; :class:`Ideal` wraps
them with a per-order cache of reduced Groebner bases.
"""

from __future__ import annotations

import heapq
import itertools
import os
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .ffpoly import (
    GREVLEX,
    MonomialOrder,
    Polynomial,
    Ring,
    block_order,
    frobenius_power,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)

DEFAULT_BUDGET = 50_000_000
DEFAULT_BOX_CAP = 10**15
DEFAULT_SATURATION_CAP = 64


class BudgetExceeded(RuntimeError):
    """A Groebner computation ran past its configured work budget."""


class Budget:
    """Counts reduction steps and processed pairs across one computation."""

    def __init__(self, limit: int | None = None):
        if limit is None:
            limit = int(os.environ.get("FSIG_BUDGET", DEFAULT_BUDGET))
        self.limit = limit
        self.used = 0

    def charge(self, n: int = 1):
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(f"work budget of {self.limit} steps exhausted")


def _budget(b: Budget | int | None) -> Budget:
    if isinstance(b, Budget):
        return b
    return Budget(b)


# --------------------------------------------------------------------------
# Engine on raw dicts

class _Elem:
    __slots__ = ("lead", "tail", "terms")

    def __init__(self, lead, terms: dict):
        self.lead = lead
        self.terms = terms
        self.tail = [(e, c) for e, c in terms.items() if e != lead]


def _monic(terms: dict, order: MonomialOrder, p: int) -> tuple:
    lead = min(terms, key=order.rank)
    c = terms[lead]
    if c != 1:
        inv = pow(c, -1, p)
        terms = {e: v * inv % p for e, v in terms.items()}
    return lead, terms


class _DivisorIndex:
    """Trie over leading exponents for fast "which lead divides m" queries."""

    __slots__ = ("root", "n")

    def __init__(self, elems: Sequence[_Elem]):
        self.root: dict = {}
        self.n = 0
        for g in elems:
            self.insert(g)

    def insert(self, g: _Elem):
        node = self.root
        lead = g.lead
        for x in lead[:-1]:
            node = node.setdefault(x, {})
        # last level maps exponent -> element; keep the first inserted
        node.setdefault(lead[-1], g)
        self.n += 1

    def find(self, m):
        return _trie_find(self.root, m, 0, len(m) - 1)


def _trie_find(node: dict, m, i: int, last: int):
    mi = m[i]
    if i == last:
        for x, g in node.items():
            if x <= mi:
                return g
        return None
    for x, child in node.items():
        if x <= mi:
            g = _trie_find(child, m, i + 1, last)
            if g is not None:
                return g
    return None


def _index(elems) -> _DivisorIndex:
    return elems if isinstance(elems, _DivisorIndex) else _DivisorIndex(elems)


def _reduce(f: dict, elems, order: MonomialOrder, p: int, budget: Budget) -> dict:
    """Fully reduce ``f`` modulo monic ``elems``; returns the remainder dict."""
    elems = _index(elems)
    if not f or not elems.n:
        return dict(f)
    find = elems.find
    rank = order.rank
    f = dict(f)
    heap = [(rank(m), m) for m in f]
    heapq.heapify(heap)
    rem = {}
    steps = 0
    push = heapq.heappush
    pop = heapq.heappop
    while heap:
        _, m = pop(heap)
        c = f.pop(m, 0)
        if not c:
            continue
        g = find(m)
        if g is None:
            rem[m] = c
            continue
        steps += 1
        q = tuple(x - y for x, y in zip(m, g.lead))
        for t, tc in g.tail:
            mm = tuple(x + y for x, y in zip(t, q))
            v = f.get(mm)
            if v is None:
                f[mm] = (-c * tc) % p
                push(heap, (rank(mm), mm))
            else:
                v = (v - c * tc) % p
                if v:
                    f[mm] = v
                else:
                    del f[mm]
        if steps >= 4096:
            budget.charge(steps)
            steps = 0
    budget.charge(steps)
    return rem


def _spoly(a: _Elem, b: _Elem, p: int) -> dict:
    L = mono_lcm(a.lead, b.lead)
    qa = mono_div(L, a.lead)
    qb = mono_div(L, b.lead)
    out = {}
    for t, c in a.tail:
        out[mono_mul(t, qa)] = c
    for t, c in b.tail:
        e = mono_mul(t, qb)
        v = (out.get(e, 0) - c) % p
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _coprime(a, b) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def buchberger(polys: Iterable[dict], order: MonomialOrder, p: int, budget: Budget | None = None) -> list[dict]:
    """Reduced Groebner basis of the dicts ``polys`` (monic, sorted descending)."""
    budget = _budget(budget)
    rank = order.rank
    inputs = []
    for f in polys:
        if f:
            inputs.append(_monic(dict(f), order, p))
    if not inputs:
        return []
    # deterministic processing order: smallest leading monomial first
    inputs.sort(key=lambda lt: (rank(lt[0]), sorted(lt[1].items())), reverse=True)
    G: list[_Elem] = []
    active: list[bool] = []
    pairs: list = []  # heap of (deg(lcm), rank(lcm), j, i)

    def add(terms: dict):
        lead, terms = _monic(terms, order, p)
        h = _Elem(lead, terms)
        if all(x == 0 for x in lead):
            return True
        hi = len(G)
        # Gebauer-Moeller update
        cands = [(i, mono_lcm(lead, G[i].lead)) for i in range(hi) if active[i]]
        keep = []
        for idx, (i, L) in enumerate(cands):
            if _coprime(lead, G[i].lead):
                keep.append((i, L, True))
                continue
            redundant = False
            for j, (i2, L2) in enumerate(cands):
                if j != idx and mono_divides(L2, L) and (L2 != L or j < idx):
                    redundant = True
                    break
            if not redundant:
                keep.append((i, L, False))
        new_pairs = [(i, L) for i, L, cop in keep if not cop]
        # drop old pairs killed by the chain criterion
        survivors = []
        for item in pairs:
            _, _, j, i = item
            L = mono_lcm(G[i].lead, G[j].lead)
            if (
                mono_divides(lead, L)
                and mono_lcm(G[i].lead, lead) != L
                and mono_lcm(G[j].lead, lead) != L
            ):
                continue
            survivors.append(item)
        if len(survivors) != len(pairs):
            pairs[:] = survivors
            heapq.heapify(pairs)
        for i in range(hi):
            if active[i] and mono_divides(lead, G[i].lead):
                active[i] = False
        G.append(h)
        active.append(True)
        for i, L in new_pairs:
            heapq.heappush(pairs, (sum(L), rank(L), hi, i))
        return False

    index = _DivisorIndex([])
    for _, terms in inputs:
        r = _reduce(terms, index, order, p, budget)
        if r:
            if add(r):
                return [{(0,) * len(next(iter(r))): 1}]
            index = _DivisorIndex([g for g, a in zip(G, active) if a])
    while pairs:
        _, _, j, i = heapq.heappop(pairs)
        budget.charge()
        s = _spoly(G[i], G[j], p)
        if not s:
            continue
        r = _reduce(s, index, order, p, budget)
        if r:
            if add(r):
                return [{(0,) * len(next(iter(r))): 1}]
            index = _DivisorIndex([g for g, a in zip(G, active) if a])
    basis = [g for g, a in zip(G, active) if a]
    basis.sort(key=lambda g: rank(g.lead))
    # inter-reduce tails
    out = []
    for idx, g in enumerate(basis):
        others = basis[:idx] + basis[idx + 1:]
        tail = _reduce(dict(g.tail), others, order, p, budget)
        tail[g.lead] = 1
        out.append(tail)
    return out


# --------------------------------------------------------------------------
# Ideals

def _as_dict(f: Polynomial) -> dict:
    return f.terms


class Ideal:
    """An ideal given by generators, with cached reduced Groebner bases."""

    def __init__(self, ring: Ring, generators: Iterable[Polynomial] = ()):
        self.ring = ring
        gens = []
        for g in generators:
            if g.ring != ring:
                raise ValueError("generator from a different ring")
            if not g.is_zero():
                gens.append(g)
        self.generators = tuple(gens)
        self._cache: dict = {}
        self._lock = threading.Lock()

    @classmethod
    def unit(cls, ring: Ring) -> Ideal:
        return cls(ring, [ring.one()])

    @classmethod
    def maximal(cls, ring: Ring) -> Ideal:
        """The ideal of the origin, (x_1, ..., x_N)."""
        ideal = cls(ring, ring.gens())
        ideal._cache[GREVLEX] = tuple(sorted(ring.gens(), key=lambda g: GREVLEX.rank(g.lead_monomial())))
        return ideal

    @classmethod
    def from_strings(cls, ring: Ring, sources: Iterable[str]) -> Ideal:
        return cls(ring, [ring.parse(s) for s in sources])

    def groebner_basis(self, order: MonomialOrder = GREVLEX, budget: Budget | int | None = None) -> tuple:
        gb = self._cache.get(order)
        if gb is not None:
            return gb
        raw = buchberger((_as_dict(g) for g in self.generators), order, self.ring.p, _budget(budget))
        gb = tuple(Polynomial(self.ring, t, _clean=True) for t in raw)
        with self._lock:
            # another thread may have raced us; both results are identical
            self._cache.setdefault(order, gb)
        return self._cache[order]

    def set_basis(self, order: MonomialOrder, basis: Sequence[Polynomial]):
        """Install a basis already known to be reduced for ``order``."""
        with self._lock:
            self._cache[order] = tuple(basis)

    def leading_monomials(self, order: MonomialOrder = GREVLEX, budget=None) -> list:
        return [g.lead_monomial(order) for g in self.groebner_basis(order, budget)]

    def normal_form(self, f: Polynomial, order: MonomialOrder = GREVLEX, budget=None) -> Polynomial:
        return normal_form(f, self, order, budget)

    def contains(self, f: Polynomial, order: MonomialOrder = GREVLEX, budget=None) -> bool:
        return normal_form(f, self, order, budget).is_zero()

    def __contains__(self, f: Polynomial) -> bool:
        return self.contains(f)

    def contains_ideal(self, other: Ideal, order: MonomialOrder = GREVLEX) -> bool:
        return all(self.contains(g, order) for g in other.generators)

    def is_unit(self, order: MonomialOrder = GREVLEX) -> bool:
        gb = self.groebner_basis(order)
        return len(gb) == 1 and gb[0].is_constant()

    def is_zero(self) -> bool:
        return not self.generators

    def is_monomial(self) -> bool:
        return all(len(g) == 1 for g in self.generators)

    def equals(self, other: Ideal, order: MonomialOrder = GREVLEX) -> bool:
        return self.groebner_basis(order) == other.groebner_basis(order)

    def __add__(self, other: Ideal) -> Ideal:
        return ideal_sum(self, other)

    def __mul__(self, other: Ideal) -> Ideal:
        return ideal_product(self, other)

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"Ideal({gens})"


def normal_form(f: Polynomial, I: Ideal, order: MonomialOrder = GREVLEX, budget=None) -> Polynomial:
    """Remainder of ``f`` modulo the reduced basis of ``I``; zero iff ``f`` in ``I``."""
    budget = _budget(budget)
    gb = I.groebner_basis(order, budget)
    elems = [_Elem(g.lead_monomial(order), dict(g.terms)) for g in gb]
    r = _reduce(f.terms, elems, order, I.ring.p, budget)
    return Polynomial(I.ring, r, _clean=True)


def groebner_basis(I: Ideal, order: MonomialOrder = GREVLEX, budget=None) -> tuple:
    return I.groebner_basis(order, budget)


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    _same(I, J)
    return Ideal(I.ring, I.generators + J.generators)


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    _same(I, J)
    return Ideal(I.ring, [a * b for a in I.generators for b in J.generators])


def ideal_power(I: Ideal, n: int) -> Ideal:
    if n < 0:
        raise ValueError("negative ideal power")
    out = Ideal.unit(I.ring)
    for _ in range(n):
        out = ideal_product(out, I)
    return out


def _same(I: Ideal, J: Ideal):
    if I.ring != J.ring:
        raise ValueError("ideals in different rings")


def frobenius_power_ideal(I: Ideal, e: int) -> Ideal:
    """``I^[p^e]``; Frobenius powers of cached bases are installed as bases."""
    if e < 0:
        raise ValueError("Frobenius level must be non-negative")
    if e == 0:
        return I
    out = Ideal(I.ring, [frobenius_power(g, e) for g in I.generators])
    for order, gb in list(I._cache.items()):
        # a reduced basis stays reduced under exponent scaling
        out.set_basis(order, [frobenius_power(g, e) for g in gb])
    return out


# --------------------------------------------------------------------------
# Elimination-based constructions

def _lift_t(g: Polynomial, ring_t: Ring, factor: str) -> dict:
    """Embed ``g`` into F_p[t, vars] multiplied by ``t`` or ``1 - t``."""
    p = ring_t.p
    out = {}
    for e, c in g.terms.items():
        if factor == "t":
            out[(1,) + e] = c
        else:
            out[(0,) + e] = c
            out[(1,) + e] = (p - c) % p
    return out


def _eliminate_t(polys: list[dict], ring: Ring, budget: Budget) -> list[Polynomial]:
    order = block_order(1)
    basis = buchberger(polys, order, ring.p, budget)
    return [Polynomial(ring, {e[1:]: c for e, c in g.items()}, _clean=True)
            for g in basis if all(e[0] == 0 for e in g)]


def intersection(I: Ideal, J: Ideal, budget=None) -> Ideal:
    """``I ∩ J`` as the t-free part of a basis of ``t*I + (1-t)*J``."""
    _same(I, J)
    budget = _budget(budget)
    if I.is_zero() or J.is_zero():
        return Ideal(I.ring)
    if I.is_monomial() and J.is_monomial():
        gens = {
            mono_lcm(a.lead_monomial(), b.lead_monomial())
            for a in I.generators for b in J.generators
        }
        return Ideal(I.ring, [I.ring.monomial(m) for m in sorted(gens)])
    ring_t = I.ring.extend(["_t"])
    polys = [_lift_t(g, ring_t, "t") for g in I.generators]
    polys += [_lift_t(g, ring_t, "1-t") for g in J.generators]
    return Ideal(I.ring, _eliminate_t(polys, I.ring, budget))


def colon_poly(I: Ideal, g: Polynomial, budget=None) -> Ideal:
    """``(I : g)`` computed as ``(I ∩ (g)) / g``."""
    if g.is_zero():
        raise ValueError("colon by the zero polynomial")
    budget = _budget(budget)
    ring = I.ring
    if g.is_constant():
        return I
    if I.is_zero():
        return Ideal(ring)
    if I.is_monomial() and len(g) == 1:
        (b, _), = g.terms.items()
        gens = {tuple(max(x - y, 0) for x, y in zip(a.lead_monomial(), b)) for a in I.generators}
        return Ideal(ring, [ring.monomial(m) for m in sorted(gens)])
    if I.contains(g, budget=budget):
        return Ideal.unit(ring)
    inter = intersection(I, Ideal(ring, [g]), budget)
    return Ideal(ring, [h.divide_exact(g) for h in inter.generators])


def colon_ideal(I: Ideal, J: Ideal, budget=None) -> Ideal:
    """``(I : J)`` as the intersection of the colons by generators of ``J``."""
    _same(I, J)
    if J.is_zero():
        raise ValueError("colon by the zero ideal")
    budget = _budget(budget)
    result = None
    for g in J.generators:
        c = colon_poly(I, g, budget)
        result = c if result is None else intersection(result, c, budget)
        if result.is_zero():
            break
    return result


def saturation(I: Ideal, g: Polynomial, cap: int = DEFAULT_SATURATION_CAP, budget=None) -> Ideal:
    """``(I : g^inf)`` by iterated colon until the basis stabilises."""
    budget = _budget(budget)
    current = I
    for _ in range(cap):
        nxt = colon_poly(current, g, budget)
        if nxt.groebner_basis(budget=budget) == current.groebner_basis(budget=budget):
            return nxt
        current = nxt
    raise BudgetExceeded(f"saturation did not stabilise within {cap} colon steps")


# --------------------------------------------------------------------------
# Lengths and dimension

@dataclass(frozen=True)
class StaircaseCount:
    """Number of standard monomials; ``colength is None`` means infinite."""

    colength: int | None
    box: tuple

    @property
    def finite(self) -> bool:
        return self.colength is not None

    def __int__(self):
        if self.colength is None:
            raise ValueError("infinite colength")
        return self.colength


def minimalize(monos: Iterable[tuple]) -> list[tuple]:
    """Minimal generators of the monomial ideal spanned by ``monos``."""
    ms = sorted(set(monos), key=sum)
    out: list = []
    for m in ms:
        if not any(mono_divides(a, m) for a in out):
            out.append(m)
    return out


def count_standard_monomials(leads: Iterable[tuple], nvars: int, box_cap: int = DEFAULT_BOX_CAP) -> StaircaseCount:
    """Count monomials outside the monomial ideal generated by ``leads``."""
    gens = minimalize(leads)
    if nvars == 0:
        return StaircaseCount(0 if gens else 1, ())
    if any(sum(g) == 0 for g in gens):
        return StaircaseCount(0, (0,) * nvars)
    box = []
    for i in range(nvars):
        pure = [g[i] for g in gens if g[i] > 0 and all(g[j] == 0 for j in range(nvars) if j != i)]
        if not pure:
            return StaircaseCount(None, ())
        box.append(min(pure))
    volume = 1
    for b in box:
        volume *= b
    if volume > box_cap:
        raise BudgetExceeded(f"staircase box volume {volume} exceeds cap {box_cap}")
    return StaircaseCount(_slice_count(tuple(sorted(gens))), tuple(box))


@lru_cache(maxsize=200_000)
def _slice_count(gens: tuple) -> int:
    # gens: minimal-ish exponent tuples over the remaining variables, Artinian
    if any(not any(g) for g in gens):
        return 0
    if len(gens[0]) == 1:
        return min(g[0] for g in gens)
    bound = min(g[0] for g in gens if not any(g[1:]))
    cuts = sorted({g[0] for g in gens if g[0] < bound} | {0, bound})
    total = 0
    for a, b in zip(cuts, cuts[1:]):
        active = minimalize(g[1:] for g in gens if g[0] <= a)
        total += (b - a) * _slice_count(tuple(sorted(active)))
    return total


def artinian_length(J: Ideal, order: MonomialOrder = GREVLEX, budget=None, box_cap: int = DEFAULT_BOX_CAP) -> StaircaseCount:
    """Colength of ``J`` by counting the staircase of its leading-term ideal."""
    leads = J.leading_monomials(order, budget)
    return count_standard_monomials(leads, J.ring.nvars, box_cap)


def krull_dimension(J: Ideal, order: MonomialOrder = GREVLEX, budget=None) -> int:
    """Dimension of F_p[x]/J via maximal independent sets of the lead ideal."""
    n = J.ring.nvars
    if J.is_zero():
        return n
    leads = minimalize(J.leading_monomials(order, budget))
    if any(not any(m) for m in leads):
        raise ValueError("the unit ideal has no Krull dimension")
    supports = [frozenset(i for i, x in enumerate(m) if x) for m in leads]
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            s = frozenset(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0

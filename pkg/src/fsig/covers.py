"""Cyclic covers: symbolic powers and numerical checks of cover presentations.

The cover ring is never constructed automatically.  A presentation is supplied
by the user (a ring, the images of the base variables, the index m and an
element u whose divisor is the pulled-back D) and the checks here confirm it
numerically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .ffpoly import GREVLEX, MonomialOrder, Polynomial, binary_pow
from .fsing import (
    BasePresentation,
    PairSpec,
    PresentationError,
    QDivisor,
    RingPresentation,
    base_splitting_length,
    different_hypersurface,
    splitting_length,
)
from .groebner import Ideal, ideal_power, ideal_sum, saturation


def symbolic_power(P: Ideal, i: int, witness: Polynomial, modulus: Polynomial | None = None) -> Ideal:
    """``(P^i + (f)) : s^infinity`` for a witness ``s`` outside ``P``.

    Correct when ``s`` lies in every associated prime of ``P^i`` other than
    ``P`` itself; choosing such a witness is the caller's responsibility.
    ``modulus`` is the hypersurface equation when P lives on S/f.
    """
    if i < 1:
        raise ValueError("symbolic powers need i >= 1")
    rel = Ideal(P.ring, [modulus] if modulus is not None else [])
    if ideal_sum(P, rel).contains(witness):
        raise ValueError("witness lies in P")
    return saturation(ideal_sum(ideal_power(P, i), rel), witness)


@dataclass(frozen=True)
class CoverPresentation:
    """``inclusion[j]`` is the image of the j-th base variable in the cover ring."""

    cover_ring: RingPresentation
    inclusion: tuple
    index: int
    cartier_witness: Polynomial

    def __post_init__(self):
        if self.index < 1:
            raise PresentationError("cover index must be positive")
        for g in self.inclusion:
            if g.ring != self.cover_ring.ring:
                raise PresentationError("inclusion images must live in the cover ring")
        if self.cartier_witness.ring != self.cover_ring.ring:
            raise PresentationError("witness must live in the cover ring")

    def push(self, g: Polynomial) -> Polynomial:
        """Image of a base-ring element in the cover ring."""
        if len(self.inclusion) != g.ring.nvars:
            raise PresentationError("inclusion needs one image per base variable")
        return g.substitute(self.inclusion, self.cover_ring.ring)

    def relations_respected(self, base: RingPresentation) -> bool:
        f = base.hypersurface
        if f is None:
            return True
        return self.cover_ring.relations().contains(self.push(f))

    def witness_respected(self, x: Polynomial) -> bool:
        """Whether ``u^m`` and the image of ``x`` generate the same ideal mod relations."""
        rel = self.cover_ring.relations()
        um = binary_pow(self.cartier_witness, self.index)
        a = ideal_sum(Ideal(self.cover_ring.ring, [um]), rel)
        b = ideal_sum(Ideal(self.cover_ring.ring, [self.push(x)]), rel)
        return a.equals(b)

    def cover_pair(self, pair: PairSpec) -> PairSpec:
        delta = QDivisor(tuple((self.push(g), c) for g, c in pair.delta.components))
        return PairSpec(self.cover_ring, delta, pair.rounding)


@dataclass
class CoverLevel:
    e: int
    q: int
    s_base: Fraction
    s_cover: Fraction
    scaled_base: Fraction
    gap: Fraction


@dataclass
class CoverReport:
    index: int
    relations_ok: bool
    witness_ok: bool | None
    levels: list = field(default_factory=list)
    messages: list = field(default_factory=list)

    @property
    def gaps(self) -> list[Fraction]:
        return [lv.gap for lv in self.levels]

    @property
    def gaps_non_increasing(self) -> bool:
        tail = [lv.gap for lv in self.levels if lv.e >= 2]
        return all(a >= b for a, b in zip(tail, tail[1:]))

    @property
    def ok(self) -> bool:
        return self.relations_ok and self.witness_ok is not False and self.gaps_non_increasing


def verify_cover(cover: CoverPresentation, pair: PairSpec, e_max: int, D: QDivisor | None = None,
                 order: MonomialOrder = GREVLEX) -> CoverReport:
    """Compare ``m * s_e(R, Delta)`` with ``s_e(C, pi^* Delta)`` for e = 1..e_max.

    ``D`` (a single component ``(x, 1/m)``) enables the witness check.
    """
    messages = []
    relations_ok = cover.relations_respected(pair.ring)
    if not relations_ok:
        messages.append("inclusion does not respect relations")
    witness_ok = None
    if D is not None:
        x, c = D.single()
        if c.denominator != cover.index:
            messages.append(f"divisor index {c.denominator} differs from cover index {cover.index}")
        witness_ok = cover.witness_respected(x)
        if not witness_ok:
            messages.append("witness power is not a unit times the image of x")
    cpair = cover.cover_pair(pair)
    levels = []
    for e in range(1, e_max + 1):
        base = splitting_length(pair, e, order).s_e
        up = splitting_length(cpair, e, order).s_e
        scaled = cover.index * base
        levels.append(CoverLevel(e, pair.p**e, base, up, scaled, abs(scaled - up)))
    report = CoverReport(cover.index, relations_ok, witness_ok, levels, messages)
    if not report.gaps_non_increasing:
        report.messages.append("gap sequence increases after e=2")
    return report


@dataclass
class CoverDifferentReport:
    e: int
    q: int
    base_coefficients: tuple
    cover_coefficients: tuple
    s_base: Fraction
    s_cover: Fraction
    scaled_base: Fraction
    gap: Fraction


def verify_cover_different(cover: CoverPresentation, pair: PairSpec, D: QDivisor, base_D: BasePresentation,
                           base_cover: BasePresentation, e: int,
                           order: MonomialOrder = GREVLEX) -> CoverDifferentReport:
    """``m * s_e(D, Diff_D)`` against ``s_e(D', Diff_D')`` with ``D' = div(u)``."""
    diff = different_hypersurface(pair, D, e, base_D)
    cpair = cover.cover_pair(pair)
    D_up = QDivisor(((cover.cartier_witness, Fraction(1)),))
    diff_up = different_hypersurface(cpair, D_up, e, base_cover)
    q = pair.p**e
    s_base = Fraction(base_splitting_length(base_D.ring, diff.h, e, order), q**base_D.ring.nvars)
    s_up = Fraction(base_splitting_length(base_cover.ring, diff_up.h, e, order), q**base_cover.ring.nvars)
    scaled = cover.index * s_base
    return CoverDifferentReport(e, q, diff.coefficients, diff_up.coefficients, s_base, s_up, scaled,
                                abs(scaled - s_up))


def cover_from_strings(cover_ring: RingPresentation, base_names: Sequence[str], images: dict, index: int,
                       witness: str) -> CoverPresentation:
    imgs = []
    for name in base_names:
        if name not in images:
            raise PresentationError(f"no image given for base variable {name!r}")
        imgs.append(cover_ring.parse(str(images[name])))
    return CoverPresentation(cover_ring, tuple(imgs), index, cover_ring.parse(witness))

"""F-signature style invariants of hypersurface pairs over F_p.

Everything is computed in the ambient polynomial ring S = F_p[x_1..x_N] with
the origin playing the role of the maximal ideal.  For R = S/f the Cartier
algebra is generated by ``Phi^e(f^(q-1) * -)``, so the degeneracy ideal of a
pair (R, Delta) has ambient preimage

    J_e = (m^[q] : f^(q-1) * prod g_i^round(c_i))

and every length below is the colength of such an m-primary ideal.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Sequence

from .ffpoly import (
    GREVLEX,
    MonomialOrder,
    Polynomial,
    Ring,
    binary_pow,
    frobenius_power,
    power_q_minus_one,
)
from .groebner import Ideal, artinian_length, colon_poly, frobenius_power_ideal, ideal_sum, krull_dimension

ROUNDING_MODES = ("qm1", "q")


class InvariantError(AssertionError):
    """A mathematical invariant that every computation must satisfy failed."""


class PresentationError(ValueError):
    """A user-supplied ring or divisor presentation is inconsistent."""


class NotCoprimeIndex(ValueError):
    """The divisor index does not divide p^e - 1 at the requested level."""


# --------------------------------------------------------------------------
# Data types

@dataclass(frozen=True)
class RingPresentation:
    """S/f with S = F_p[vars]; ``hypersurface=None`` is the regular ring S."""

    ring: Ring
    hypersurface: Polynomial | None = None
    dimension: int | None = None

    def __post_init__(self):
        f = self.hypersurface
        if f is not None:
            if f.ring != self.ring:
                raise PresentationError("hypersurface lives in a different ring")
            if f.is_zero() or f.is_constant():
                raise PresentationError("hypersurface must be a nonzero non-unit")
            if not f.in_maximal_ideal():
                raise PresentationError("hypersurface does not pass through the origin")
            computed = krull_dimension(Ideal(self.ring, [f]))
        else:
            computed = self.ring.nvars
        if self.dimension is None:
            object.__setattr__(self, "dimension", computed)
        elif self.dimension != computed:
            raise PresentationError(f"declared dimension {self.dimension} != computed {computed}")

    @classmethod
    def from_strings(cls, p: int, names: Sequence[str], hypersurface: str | None = None,
                     dimension: int | None = None) -> RingPresentation:
        ring = Ring(p, tuple(names))
        f = ring.parse(hypersurface) if hypersurface else None
        return cls(ring, f, dimension)

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    @property
    def is_regular(self) -> bool:
        return self.hypersurface is None

    def parse(self, src: str) -> Polynomial:
        return self.ring.parse(src)

    def relations(self) -> Ideal:
        return Ideal(self.ring, [self.hypersurface] if self.hypersurface is not None else [])

    def maximal_ideal(self) -> Ideal:
        return Ideal.maximal(self.ring)

    def frobenius_box(self, q: int) -> Ideal:
        """``m^[q]`` in the ambient ring."""
        ideal = Ideal(self.ring, [self.ring.monomial(_unit_vec(self.nvars, i, q)) for i in range(self.nvars)])
        ideal.set_basis(GREVLEX, sorted(ideal.generators, key=lambda g: GREVLEX.rank(g.lead_monomial())))
        return ideal


def _unit_vec(n: int, i: int, k: int) -> tuple:
    v = [0] * n
    v[i] = k
    return tuple(v)


@dataclass(frozen=True)
class QDivisor:
    """Formal sum of ``c * div(g)`` with exact non-negative rational ``c``."""

    components: tuple = ()

    def __post_init__(self):
        comps = []
        for g, c in self.components:
            c = Fraction(c)
            if c < 0:
                raise PresentationError("divisor coefficients must be non-negative")
            if g.is_zero() or g.is_constant():
                raise PresentationError("divisor components must be nonzero non-units")
            comps.append((g, c))
        object.__setattr__(self, "components", tuple(comps))

    @classmethod
    def of(cls, *pairs) -> QDivisor:
        return cls(tuple(pairs))

    @classmethod
    def cartier_index(cls, x: Polynomial, m: int) -> QDivisor:
        """The divisor D with ``m * D = div(x)``."""
        return cls(((x, Fraction(1, m)),))

    def __bool__(self):
        return bool(self.components)

    def __add__(self, other: QDivisor) -> QDivisor:
        return QDivisor(self.components + other.components)

    def single(self) -> tuple[Polynomial, Fraction]:
        if len(self.components) != 1:
            raise PresentationError("expected a single-component divisor")
        return self.components[0]

    @property
    def index(self) -> int:
        """Least m with m*D integral, for a single-component divisor."""
        return self.single()[1].denominator

    def pullback(self, images: Sequence[Polynomial], target: Ring) -> QDivisor:
        return QDivisor(tuple((g.substitute(images, target), c) for g, c in self.components))

    def scaled(self, t) -> QDivisor:
        return QDivisor(tuple((g, c * Fraction(t)) for g, c in self.components))


@dataclass(frozen=True)
class PairSpec:
    ring: RingPresentation
    delta: QDivisor = QDivisor()
    rounding: str = "qm1"

    def __post_init__(self):
        if self.rounding not in ROUNDING_MODES:
            raise PresentationError(f"rounding must be one of {ROUNDING_MODES}")
        for g, _ in self.delta.components:
            if g.ring != self.ring.ring:
                raise PresentationError("divisor component lives in a different ring")

    @property
    def p(self) -> int:
        return self.ring.p

    def with_rounding(self, rounding: str) -> PairSpec:
        return PairSpec(self.ring, self.delta, rounding)

    def with_delta(self, delta: QDivisor) -> PairSpec:
        return PairSpec(self.ring, delta, self.rounding)


def round_exponent(c, q: int, mode: str = "qm1") -> int:
    """``ceil(c (q-1))`` or ``ceil(c q)``."""
    c = Fraction(c)
    if mode == "qm1":
        return math.ceil(c * (q - 1))
    if mode == "q":
        return math.ceil(c * q)
    raise ValueError(f"unknown rounding mode {mode!r}")


@dataclass
class SplittingRecord:
    e: int
    q: int
    length: int
    s_e: Fraction
    ideal: Ideal | None = field(default=None, repr=False, compare=False)

    @property
    def is_unit(self) -> bool:
        return self.length == 0


@dataclass
class Estimate:
    """A finite-level sequence together with its extrapolated limit."""

    records: list
    extrapolated: Fraction

    @property
    def values(self) -> list[Fraction]:
        return [r.s_e for r in self.records]


@dataclass
class SignatureCurve:
    e: int
    samples: list  # (t, value, length, exponent)

    def points(self) -> list[tuple[Fraction, Fraction]]:
        return [(t, v) for t, v, _, _ in self.samples]

    def is_non_increasing(self) -> bool:
        pts = sorted(self.points())
        return all(a[1] >= b[1] for a, b in zip(pts, pts[1:]))


# --------------------------------------------------------------------------
# Degeneracy ideals and lengths

def _factor_list(pair: PairSpec, q: int, extra=None, mode: str | None = None) -> list:
    mode = mode or pair.rounding
    factors = []
    f = pair.ring.hypersurface
    if f is not None:
        factors.append((f, q - 1))
    for g, c in pair.delta.components:
        k = round_exponent(c, q, mode)
        if k:
            factors.append((g, k))
    if extra is not None:
        g, k = extra
        if k < 0:
            raise ValueError("negative extra exponent")
        if k:
            factors.append((g, k))
    return factors


def _factor_product(factors: list, q: int) -> tuple[tuple, Polynomial | None]:
    """Split into a monomial exponent and the remaining polynomial product."""
    mono = None
    h = None
    p = None
    for g, k in factors:
        p = g.ring.p
        if len(g) == 1:
            (exp, _), = g.terms.items()
            scaled = tuple(x * k for x in exp)
            mono = scaled if mono is None else tuple(a + b for a, b in zip(mono, scaled))
            continue
        if k == q - 1 and q > 1:
            gk = power_q_minus_one(g, _log(q, p))
        else:
            gk = binary_pow(g, k)
        h = gk if h is None else h * gk
    return mono, h


def _log(q: int, p: int) -> int:
    e = 0
    while q > 1:
        q //= p
        e += 1
    return e


def _colon_box(ring: Ring, q: int, factors: list, budget=None) -> Ideal:
    """``(m^[q] : prod g^k)`` for a list of ``(g, k)`` factors."""
    n = ring.nvars
    mono, h = _factor_product(factors, q)
    if mono is None:
        mono = (0,) * n
    exps = [q - a for a in mono]
    if any(x <= 0 for x in exps):
        return Ideal.unit(ring)
    base = Ideal(ring, [ring.monomial(_unit_vec(n, i, x)) for i, x in enumerate(exps)])
    base.set_basis(GREVLEX, sorted(base.generators, key=lambda g: GREVLEX.rank(g.lead_monomial())))
    if h is None or h.is_constant():
        return base
    return colon_poly(base, h, budget)


def degeneracy_ideal(pair: PairSpec, e: int, extra: tuple | None = None, budget=None,
                     mode: str | None = None) -> Ideal:
    """Ambient preimage of ``I_e`` for the pair, optionally twisted by ``g^k``.

    ``extra=(g, k)`` adds the factor ``g^k`` to the colon; ``mode`` overrides
    the pair's rounding of the divisor coefficients.
    """
    if e < 0:
        raise ValueError("level must be non-negative")
    q = pair.p**e
    return _colon_box(pair.ring.ring, q, _factor_list(pair, q, extra, mode), budget)


def _length(J: Ideal, order: MonomialOrder, budget=None) -> int:
    count = artinian_length(J, order, budget)
    if not count.finite:
        raise InvariantError("degeneracy ideal is not m-primary")
    return count.colength


def _check_length(length: int, q: int, n: int):
    if not 0 <= length <= q**n:
        raise InvariantError(f"length {length} outside [0, q^N]")


def splitting_length(pair: PairSpec, e: int, order: MonomialOrder = GREVLEX, budget=None) -> SplittingRecord:
    """Colength of the level-e degeneracy ideal and ``s_e = length / p^(e d)``."""
    q = pair.p**e
    J = degeneracy_ideal(pair, e, budget=budget)
    length = _length(J, order, budget)
    _check_length(length, q, pair.ring.nvars)
    return SplittingRecord(e, q, length, Fraction(length, q**pair.ring.dimension), J)


def extrapolate(values: Sequence[Fraction], p: int) -> Fraction:
    """Limit under the model ``s_e = s + c p^-e`` fitted to the last two values."""
    if not values:
        raise ValueError("nothing to extrapolate")
    if len(values) == 1:
        return Fraction(values[-1])
    a, b = Fraction(values[-2]), Fraction(values[-1])
    return (p * b - a) / (p - 1)


def _pmap(fn: Callable, items: Sequence, workers: int = 1) -> list:
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(*it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *it) for it in items]
        return [fut.result() for fut in futures]


def _splitting_cell(pair: PairSpec, e: int, order: MonomialOrder):
    rec = splitting_length(pair, e, order)
    rec.ideal = None
    return rec


def fsignature_estimate(pair: PairSpec, e_max: int, order: MonomialOrder = GREVLEX,
                        workers: int = 1) -> Estimate:
    """Records for e = 1..e_max and the two-point extrapolation."""
    if e_max < 1:
        raise ValueError("e_max must be at least 1")
    records = _pmap(_splitting_cell, [(pair, e, order) for e in range(1, e_max + 1)], workers)
    return Estimate(records, extrapolate([r.s_e for r in records], pair.p))


# --------------------------------------------------------------------------
# Signature curves and the slope at t = 1

def _curve_cell(pair: PairSpec, x: Polynomial, c: Fraction, e: int, t: Fraction, mode: str,
                order: MonomialOrder):
    q = pair.p**e
    k = round_exponent(Fraction(t) * c, q, mode)
    J = degeneracy_ideal(pair, e, extra=(x, k))
    length = _length(J, order)
    return Fraction(length, q**pair.ring.dimension), length, k


def signature_curve(pair: PairSpec, D: QDivisor, e: int, grid: Iterable, order: MonomialOrder = GREVLEX,
                    workers: int = 1, mode: str | None = None) -> SignatureCurve:
    """Sample ``t -> s_e(R, Delta + t D)`` on exact rational ``t`` in [0, 1]."""
    x, c = D.single()
    mode = mode or pair.rounding
    ts = [Fraction(t) for t in grid]
    for t in ts:
        if not 0 <= t <= 1:
            raise ValueError(f"grid value {t} outside [0, 1]")
    cells = _pmap(_curve_cell, [(pair, x, c, e, t, mode, order) for t in ts], workers)
    curve = SignatureCurve(e, [(t, v, ln, k) for t, (v, ln, k) in zip(ts, cells)])
    if not curve.is_non_increasing():
        raise InvariantError("signature curve is not non-increasing")
    return curve


def _require_index(m: int, q: int):
    if (q - 1) % m:
        raise NotCoprimeIndex(f"index {m} does not divide {q} - 1")


def left_derivative_at_one(pair: PairSpec, D: QDivisor, e: int, r: int, order: MonomialOrder = GREVLEX) -> Fraction:
    """``p^e (s_r(1) - s_r(1 - p^-e))`` with exponents ``ceil(t q_r / m)``.

    The ``ceil(t q)`` form keeps the two sample points distinct even when
    ``r == e``.
    """
    if not 1 <= e <= r:
        raise ValueError("need 1 <= e <= r")
    x, c = D.single()
    p = pair.p
    qr = p**r
    _require_index(c.denominator, qr)
    t_lo = 1 - Fraction(1, p**e)
    k_lo = round_exponent(t_lo * c, qr, "q")
    k_hi = round_exponent(c, qr, "q")
    d = pair.ring.dimension
    s_lo = Fraction(_length(degeneracy_ideal(pair, r, extra=(x, k_lo)), order), qr**d)
    s_hi = Fraction(_length(degeneracy_ideal(pair, r, extra=(x, k_hi)), order), qr**d)
    return p**e * (s_hi - s_lo)


# --------------------------------------------------------------------------
# Differents

@dataclass(frozen=True)
class BasePresentation:
    """O_D presented as a polynomial ring, with projection and lifts.

    ``images[i]`` is the image in ``ring`` of the i-th ambient variable;
    ``lifts[j]`` is an ambient polynomial mapping to the j-th base variable.
    """

    ring: Ring
    images: tuple
    lifts: tuple

    @classmethod
    def coordinate(cls, ambient: Ring, base_vars: Sequence[str], images: dict) -> BasePresentation:
        base = Ring(ambient.p, tuple(base_vars))
        imgs = []
        for name in ambient.names:
            src = images.get(name)
            if src is None:
                raise PresentationError(f"no image given for ambient variable {name!r}")
            imgs.append(src if isinstance(src, Polynomial) else base.parse(str(src)))
        lifts = []
        for v in base_vars:
            if v not in ambient.names:
                raise PresentationError(f"base variable {v!r} is not an ambient variable")
            lifts.append(ambient.var(v))
        return cls(base, tuple(imgs), tuple(lifts))

    def project(self, f: Polynomial) -> Polynomial:
        return f.substitute(self.images, self.ring)

    def validate(self, ambient: RingPresentation, x: Polynomial):
        if len(self.images) != ambient.nvars:
            raise PresentationError("need one image per ambient variable")
        if ambient.hypersurface is not None and not self.project(ambient.hypersurface).is_zero():
            raise PresentationError("base presentation inconsistent: hypersurface does not vanish on D")
        if not self.project(x).is_zero():
            raise PresentationError("base presentation inconsistent: divisor equation does not vanish on D")
        for j, lift in enumerate(self.lifts):
            if self.project(lift) != self.ring.var(j):
                raise PresentationError("base presentation inconsistent: lift does not project back")


def frobenius_trace(f: Polynomial, q: int) -> Polynomial:
    """The generator ``Phi^e`` of Hom(F^e_* S, S): x^(q-1) -> 1, other basis monomials -> 0."""
    out = {}
    top = q - 1
    for e, c in f.terms.items():
        if all(x % q == top for x in e):
            out[tuple((x - top) // q for x in e)] = c
    return Polynomial(f.ring, out, _clean=True)


@dataclass
class DifferentResult:
    h: Polynomial
    e: int
    q: int
    coefficients: tuple  # ((variable, Fraction), ...)
    residual: Polynomial
    values: dict = field(repr=False, default_factory=dict)

    @property
    def residual_is_unit(self) -> bool:
        return self.residual.is_unit()

    def coefficient(self, name: str) -> Fraction:
        return dict(self.coefficients)[name]

    @property
    def is_zero(self) -> bool:
        return self.residual_is_unit and all(c == 0 for _, c in self.coefficients)


def different_hypersurface(pair: PairSpec, D: QDivisor, e: int, base: BasePresentation) -> DifferentResult:
    """Push ``Phi^e(f^(q-1) x^((q-1)/m) prod g_i^.. -)`` down to O_D and read its divisor."""
    x, c = D.single()
    R = pair.ring
    q = pair.p**e
    _require_index(c.denominator, q)
    base.validate(R, x)
    H = R.ring.one()
    if R.hypersurface is not None:
        H = power_q_minus_one(R.hypersurface, e)
    H = H * binary_pow(x, int(c * (q - 1)))
    for g, cg in pair.delta.components:
        H = H * binary_pow(g, round_exponent(cg, q, "qm1"))
    k = base.ring.nvars
    values = {}
    for alpha in product(range(q), repeat=k):
        u = R.ring.one()
        for lift, a in zip(base.lifts, alpha):
            if a:
                u = u * binary_pow(lift, a)
        values[alpha] = base.project(frobenius_trace(H * u, q))
    h = base.ring.zero()
    for alpha, val in values.items():
        if val.is_zero():
            continue
        comp = tuple(q - 1 - a for a in alpha)
        h = h + frobenius_power(val, e).mul_monomial(comp)
    if h.is_zero():
        raise InvariantError("pushed-down map is zero: D is not an F-pure center of the pair")
    # the map y^alpha -> Phi_D(h y^alpha) must reproduce the recorded values
    for alpha, val in values.items():
        if frobenius_trace(h.mul_monomial(alpha), q) != val:
            raise InvariantError("different reconstruction failed")
    content = h.monomial_content()
    coeffs = tuple((name, Fraction(o, q - 1)) for name, o in zip(base.ring.names, content))
    residual = h.divide_exact(base.ring.monomial(content))
    return DifferentResult(h, e, q, coeffs, residual, values)


def base_splitting_length(base_ring: Ring, h: Polynomial, e: int, order: MonomialOrder = GREVLEX) -> int:
    """Colength of ``(m^[q] : h)`` on a polynomial base ring."""
    q = base_ring.p**e
    return _length(_colon_box(base_ring, q, [(h, 1)]), order)


def different_signature(diff: DifferentResult, order: MonomialOrder = GREVLEX) -> Fraction:
    """``s_e(O_D, Diff)`` for the map recorded in ``diff``."""
    ring = diff.h.ring
    length = base_splitting_length(ring, diff.h, diff.e, order)
    return Fraction(length, diff.q**ring.nvars)


# --------------------------------------------------------------------------
# Adjunction verifier

@dataclass
class AdjunctionLevel:
    e: int
    q: int
    admissible: bool
    s_pair: Fraction | None = None
    slope: Fraction | None = None
    rhs_direct: Fraction | None = None
    rhs_formula: Fraction | None = None
    different: tuple = ()
    different_unit: bool | None = None
    routes_agree: bool | None = None
    corollary_holds: bool | None = None
    equality_case: bool | None = None
    slack: Fraction | None = None


@dataclass
class AdjunctionReport:
    levels: list

    @property
    def admissible(self) -> list:
        return [lv for lv in self.levels if lv.admissible]

    @property
    def routes_agree(self) -> bool:
        return all(lv.routes_agree for lv in self.admissible)

    @property
    def top(self) -> AdjunctionLevel | None:
        adm = self.admissible
        return adm[-1] if adm else None

    @property
    def corollary_holds(self) -> bool:
        top = self.top
        return top is not None and bool(top.corollary_holds)

    @property
    def equality_case(self) -> bool:
        top = self.top
        return top is not None and bool(top.equality_case)


def adjunction_check(pair: PairSpec, D: QDivisor, base: BasePresentation, e_max: int,
                     order: MonomialOrder = GREVLEX, slack: Callable | None = None) -> AdjunctionReport:
    """Compare the slope at t=1, both routes to s(O_D, Diff), and the corollary bound."""
    from . import config

    slack = slack or config.corollary_slack
    x, c = D.single()
    m = c.denominator
    p = pair.p
    d = pair.ring.dimension
    levels = []
    for e in range(1, e_max + 1):
        q = p**e
        if (q - 1) % m:
            levels.append(AdjunctionLevel(e, q, False))
            continue
        s_pair = splitting_length(pair, e, order).s_e
        slope = left_derivative_at_one(pair, D, e, e, order)
        diff = different_hypersurface(pair, D, e, base)
        rhs_direct = Fraction(base_splitting_length(base.ring, diff.h, e, order), q**base.ring.nvars)
        J = degeneracy_ideal(pair, e, extra=(x, int(c * (q - 1))), mode="qm1")
        rhs_formula = Fraction(_length(J, order), q ** (d - 1))
        tol = slack(p, e)
        rhs = rhs_direct
        levels.append(AdjunctionLevel(
            e, q, True,
            s_pair=s_pair,
            slope=slope,
            rhs_direct=rhs_direct,
            rhs_formula=rhs_formula,
            different=diff.coefficients,
            different_unit=diff.residual_is_unit,
            routes_agree=rhs_direct == rhs_formula,
            corollary_holds=s_pair >= rhs - tol,
            equality_case=abs(s_pair - rhs) <= tol,
            slack=tol,
        ))
    return AdjunctionReport(levels)


# --------------------------------------------------------------------------
# Hilbert-Kunz, F-pure thresholds, splitting ratios

@dataclass
class LevelValue:
    e: int
    q: int
    length: int
    s_e: Fraction


class NotArtinian(ValueError):
    pass


def hilbert_kunz(ring: RingPresentation, I: Ideal, e_max: int, order: MonomialOrder = GREVLEX) -> Estimate:
    """``length(R / I^[q]) / q^d`` for e = 1..e_max, plus extrapolation."""
    rel = ring.relations()
    if not artinian_length(ideal_sum(I, rel), order).finite:
        raise NotArtinian("I + (f) is not m-primary")
    records = []
    for e in range(1, e_max + 1):
        q = ring.p**e
        J = ideal_sum(frobenius_power_ideal(I, e), rel)
        length = _length(J, order)
        records.append(LevelValue(e, q, length, Fraction(length, q**ring.dimension)))
    return Estimate(records, extrapolate([r.s_e for r in records], ring.p))


def _pow_truncated(g: Polynomial, k: int, bounds) -> Polynomial:
    result = g.ring.one().truncated(bounds)
    base = g.truncated(bounds)
    while k:
        if k & 1:
            result = result.mul_truncated(base, bounds)
        k >>= 1
        if k:
            base = base.mul_truncated(base, bounds)
    return result


@dataclass
class FptLevel:
    e: int
    q: int
    nu: int
    ratio: Fraction


def fpt_estimate(ring: RingPresentation, g: Polynomial, e_max: int) -> list[FptLevel]:
    """``nu_g(q)/q``: the largest k with ``g^k f^(q-1)`` (or ``g^k``) outside m^[q]."""
    if g.is_zero() or not g.in_maximal_ideal():
        raise ValueError("g must be a nonzero element of the maximal ideal")
    n = ring.nvars
    out = []
    for e in range(1, e_max + 1):
        q = ring.p**e
        bounds = (q,) * n
        base = ring.ring.one()
        if ring.hypersurface is not None:
            base = power_q_minus_one(ring.hypersurface, e).truncated(bounds)

        def outside(k: int) -> bool:
            return not base.mul_truncated(_pow_truncated(g, k, bounds), bounds).is_zero()

        lo, hi = 0, n * (q - 1) + 1  # g^hi lies in m^[q]
        if not outside(0):
            raise ValueError("the pair is not F-pure at this level")
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if outside(mid):
                lo = mid
            else:
                hi = mid
        out.append(FptLevel(e, q, lo, Fraction(lo, q)))
    return out


def splitting_ratio_estimate(pair: PairSpec, splitting_dimension: int, e_max: int,
                             order: MonomialOrder = GREVLEX) -> Estimate:
    """``length(R/I_e) / p^(e * sdim)`` for e = 1..e_max."""
    records = []
    for e in range(1, e_max + 1):
        rec = splitting_length(pair, e, order)
        records.append(LevelValue(e, rec.q, rec.length, Fraction(rec.length, rec.q**splitting_dimension)))
    return Estimate(records, extrapolate([r.s_e for r in records], pair.p))


# --------------------------------------------------------------------------
# Membership helpers

def in_degeneracy_colon(pair: PairSpec, e: int, a: Polynomial, g: Polynomial, g_power: int = 1,
                        extra=None) -> bool:
    """Whether ``a`` lies in ``(J_e : g^g_power)``, decided inside ``m^[q]``."""
    q = pair.p**e
    bounds = (q,) * pair.ring.nvars
    mono, h = _factor_product(_factor_list(pair, q, extra), q)
    prod = a.mul_truncated(_pow_truncated(g, g_power, bounds), bounds)
    if mono is not None:
        if any(x >= q for x in mono):
            return True
        prod = prod.mul_monomial(mono).truncated(bounds)
    if h is not None:
        prod = prod.mul_truncated(h.truncated(bounds), bounds)
    return prod.is_zero()


def frobenius_colon_containment(pair: PairSpec, g: Polynomial, e: int, r: int) -> bool:
    """Check ``(I_e : g)^[p^(r-e)] ⊆ (I_r : g^(p^(r-e)))`` on generators."""
    if not 1 <= e <= r:
        raise ValueError("need 1 <= e <= r")
    colon = colon_poly(degeneracy_ideal(pair, e), g)
    k = r - e
    pk = pair.p**k
    return all(in_degeneracy_colon(pair, r, frobenius_power(a, k), g, pk) for a in colon.generators)

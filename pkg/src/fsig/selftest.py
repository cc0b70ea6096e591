"""Quick invariant checks run by ``fsig selftest``."""

from __future__ import annotations

from fractions import Fraction
from importlib import resources

from .ffpoly import Ring
from .fsing import (
    BasePresentation,
    PairSpec,
    QDivisor,
    RingPresentation,
    degeneracy_ideal,
    different_hypersurface,
    frobenius_colon_containment,
    signature_curve,
    splitting_length,
)
from .groebner import Ideal, artinian_length, colon_poly
from .oracle import box_quotient_length


def problem_files() -> list:
    """Paths of the shipped example problems, sorted by name."""
    root = resources.files("fsig") / "problems"
    return sorted((p for p in root.iterdir() if p.name.endswith(".toml")), key=lambda p: p.name)


def _regular():
    ok = True
    for p in (2, 3, 5):
        for n in (1, 2):
            rp = RingPresentation(Ring(p, tuple("xyz"[:n])))
            for e in (1, 2):
                ok &= splitting_length(PairSpec(rp), e).s_e == 1
    return ok, "s_e = 1 for p in {2,3,5}, N <= 2, e <= 2"


def _oracle():
    rp = RingPresentation.from_strings(5, "xyz", "x*y - z^2")
    pair = PairSpec(rp)
    ok = True
    for e in (1, 2):
        q = 5**e
        J = degeneracy_ideal(pair, e)
        ok &= artinian_length(J).colength == box_quotient_length(J.generators, (q, q, q))
    return ok, "A_1 lengths agree with the Macaulay-matrix count at e <= 2"


def _length_lemma():
    ring = Ring(3, ("x", "y"))
    I = Ideal.from_strings(ring, ["x^3", "y^4", "x*y^2 + x^2*y"])
    g = ring.parse("x + y")
    lhs = artinian_length(I).colength
    rhs = artinian_length(colon_poly(I, g)).colength + artinian_length(I + Ideal(ring, [g])).colength
    return lhs == rhs, "length(S/I) = length(S/(I:g)) + length(S/(I+g))"


def _curve():
    rp = RingPresentation.from_strings(5, "xyz", "x*y - z^2")
    curve = signature_curve(PairSpec(rp), QDivisor.cartier_index(rp.parse("x"), 2), 1,
                            [Fraction(k, 4) for k in range(5)])
    return curve.is_non_increasing(), "signature curve of A_1 is non-increasing"


def _containment():
    rp = RingPresentation.from_strings(3, "xyz", "x*y - z^2")
    pair = PairSpec(rp)
    ok = frobenius_colon_containment(pair, rp.parse("x"), 1, 2)
    return ok, "(I_1 : x)^[p] is contained in (I_2 : x^p) on A_1 over F_3"


def _different():
    rp = RingPresentation.from_strings(5, "xyz", "x*y - z^2")
    base = BasePresentation.coordinate(rp.ring, ["y"], {"x": "0", "y": "y", "z": "0"})
    res = different_hypersurface(PairSpec(rp), QDivisor.cartier_index(rp.parse("x"), 2), 1, base)
    return res.coefficient("y") == Fraction(1, 2) and res.residual_is_unit, "A_1 different is (1/2)[0]"


def _corpus():
    from .cli import load_problem

    names = []
    for path in problem_files():
        load_problem(path)
        names.append(path.name)
    return bool(names), f"{len(names)} shipped problem files parse"


CHECKS = (_regular, _oracle, _length_lemma, _curve, _containment, _different, _corpus)


def run_selftest() -> list[tuple[str, bool, str]]:
    out = []
    for fn in CHECKS:
        try:
            passed, detail = fn()
        except Exception as exc:  # reported as a failed check
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        out.append((fn.__name__.lstrip("_"), bool(passed), detail))
    return out

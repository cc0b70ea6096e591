"""Command line front end: ``fsig COMMAND [problem.toml] [flags]``.

Exit status is 0 on success, 2 when a checked invariant or inequality fails,
and 1 on input or resource errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import config
from .covers import CoverPresentation, cover_from_strings, verify_cover, verify_cover_different
from .ffpoly import ExponentOverflow, ParseError, Polynomial, Ring, order_from_name
from .fsing import (
    BasePresentation,
    InvariantError,
    NotArtinian,
    NotCoprimeIndex,
    PairSpec,
    PresentationError,
    QDivisor,
    RingPresentation,
    adjunction_check,
    degeneracy_ideal,
    different_hypersurface,
    different_signature,
    extrapolate,
    fpt_estimate,
    hilbert_kunz,
    round_exponent,
    splitting_length,
)
from .groebner import BudgetExceeded, Ideal

COMMANDS = ("fsig", "curve", "diff", "hk", "fpt", "ratio", "adjoint-check", "verify-cover", "selftest")


class ProblemError(ValueError):
    """Malformed or inconsistent problem file."""


# --------------------------------------------------------------------------
# Problem files

@dataclass
class Problem:
    name: str
    ring: RingPresentation
    divisors: dict
    pair: PairSpec
    D: QDivisor | None
    bases: dict
    cover: CoverPresentation | None
    task: dict = field(default_factory=dict)


class _Source:
    """Maps polynomial parse failures back to a line and column of the file."""

    def __init__(self, text: str, name: str):
        self.lines = text.splitlines()
        self.name = name

    def parse(self, ring: Ring, src, where: str) -> Polynomial:
        if not isinstance(src, (str, int)):
            raise ProblemError(f"{self.name}: {where}: expected a polynomial string")
        src = str(src)
        try:
            return ring.parse(src)
        except ParseError as exc:
            line, col = self._locate(src, exc.pos or 0)
            raise ProblemError(f"{self.name}:{line}:{col}: {where}: {exc}") from exc

    def _locate(self, src: str, pos: int) -> tuple[int, int]:
        for i, text in enumerate(self.lines, 1):
            j = text.find(src)
            if j >= 0 and src:
                return i, j + pos + 1
        return 0, pos + 1


def _fraction(entry: dict, where: str) -> Fraction:
    num, den = entry.get("num", 1), entry.get("den", 1)
    if not isinstance(num, int) or not isinstance(den, int) or isinstance(num, bool) or isinstance(den, bool):
        raise ProblemError(f"{where}: num and den must be integers")
    if den < 1:
        raise ProblemError(f"{where}: den must be positive")
    return Fraction(num, den)


def _divisor(ring: Ring, spec: dict, src: _Source, where: str) -> QDivisor:
    comps = spec.get("components")
    if not isinstance(comps, list):
        raise ProblemError(f"{where}: missing components list")
    out = []
    for k, entry in enumerate(comps):
        if not isinstance(entry, dict) or "poly" not in entry:
            raise ProblemError(f"{where}[{k}]: expected {{poly, num, den}}")
        out.append((src.parse(ring, entry["poly"], f"{where}[{k}]"), _fraction(entry, f"{where}[{k}]")))
    return QDivisor(tuple(out))


def _ring(section: dict, src: _Source, where: str) -> RingPresentation:
    try:
        p, names = section["p"], section["vars"]
    except KeyError as exc:
        raise ProblemError(f"{where}: missing key {exc.args[0]!r}") from None
    ring = Ring(p, tuple(names))
    f = section.get("f")
    hyp = src.parse(ring, f, f"{where}.f") if f else None
    return RingPresentation(ring, hyp, section.get("dimension"))


def load_problem(path: str | Path, rounding: str | None = None) -> Problem:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ProblemError(f"cannot read {path}: {exc.strerror}") from None
    return parse_problem(text, path.name, rounding)


def parse_problem(text: str, name: str = "<string>", rounding: str | None = None) -> Problem:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ProblemError(f"{name}: {exc}") from None
    src = _Source(text, name)
    if "ring" not in data:
        raise ProblemError(f"{name}: missing [ring] section")
    ring = _ring(data["ring"], src, "ring")
    cover_sec = data.get("cover")
    cover_ring = _ring(cover_sec, src, "cover") if cover_sec else None

    divisors = {}
    for dname, spec in data.get("divisors", {}).items():
        target = cover_ring.ring if spec.get("ring") == "cover" and cover_ring else ring.ring
        divisors[dname] = _divisor(target, spec, src, f"divisors.{dname}")

    def lookup(kind: str, table: dict, key):
        if key is None:
            return None
        if key not in table:
            raise ProblemError(f"{name}: {kind} {key!r} is not defined")
        return table[key]

    pair_sec = data.get("pair", {})
    delta = lookup("divisor", divisors, pair_sec.get("delta")) or QDivisor()
    D = lookup("divisor", divisors, pair_sec.get("D"))
    mode = rounding or pair_sec.get("rounding", "qm1")
    pair = PairSpec(ring, delta, mode)

    bases = {}
    for bname, spec in data.get("bases", {}).items():
        on_cover = spec.get("ring") == "cover"
        if on_cover and cover_ring is None:
            raise ProblemError(f"{name}: bases.{bname} refers to a missing [cover]")
        amb = cover_ring if on_cover else ring
        base_ring = Ring(amb.p, tuple(spec.get("vars", ())))
        images = spec.get("images", {})
        imgs = {k: src.parse(base_ring, v, f"bases.{bname}.images.{k}") for k, v in images.items()}
        bases[bname] = BasePresentation.coordinate(amb.ring, base_ring.names, imgs)

    cover = None
    if cover_sec:
        inclusion = cover_sec.get("inclusion", {})
        for k, v in inclusion.items():
            src.parse(cover_ring.ring, v, f"cover.inclusion.{k}")
        src.parse(cover_ring.ring, cover_sec.get("witness", ""), "cover.witness")
        cover = cover_from_strings(cover_ring, ring.ring.names, inclusion, cover_sec.get("index", 1),
                                   cover_sec["witness"])

    task = dict(data.get("task", {}))
    for key in ("base", "cover_base"):
        lookup("base", bases, task.get(key))
    return Problem(task.get("name", Path(name).stem), ring, divisors, pair, D, bases, cover, task)


# --------------------------------------------------------------------------
# Result documents

def frac(x) -> dict:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def decimal12(x) -> str:
    x = Fraction(x)
    scaled = round(x * 10**12)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    return f"{sign}{scaled // 10**12}.{scaled % 10**12:012d}"


def _divisor_echo(D: QDivisor | None) -> list:
    if D is None:
        return []
    return [{"poly": str(g), "num": str(c.numerator), "den": str(c.denominator)} for g, c in D.components]


class Document:
    def __init__(self, command: str, problem: Problem | None, flags: dict):
        self.command = command
        self.inputs = {"command": command}
        if problem is not None:
            rp = problem.ring
            self.inputs.update({
                "problem": problem.name,
                "p": rp.p,
                "vars": list(rp.ring.names),
                "hypersurface": str(rp.hypersurface) if rp.hypersurface is not None else None,
                "dimension": rp.dimension,
                "delta": _divisor_echo(problem.pair.delta),
                "D": _divisor_echo(problem.D),
                "rounding": problem.pair.rounding,
            })
        self.inputs.update(flags)
        self.records: list[dict] = []
        self.summary: dict = {}
        self.checks: list[dict] = []
        self.status = "ok"
        self.error: str | None = None
        self.elapsed = 0.0

    def check(self, name: str, passed: bool, detail: str = ""):
        self.checks.append({"name": name, "passed": bool(passed), "detail": detail})

    @property
    def failed(self) -> bool:
        return any(not c["passed"] for c in self.checks)

    def as_json(self) -> dict:
        doc = {
            "inputs": self.inputs,
            "status": self.status,
            "records": [_jsonable(r) for r in self.records],
            "summary": _jsonable(self.summary),
            "checks": self.checks,
        }
        if self.error:
            doc["error"] = self.error
        doc["timing"] = {"elapsed_seconds": f"{self.elapsed:.3f}"}
        return doc


def _jsonable(v):
    if isinstance(v, Fraction):
        return frac(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, Polynomial):
        return str(v)
    return v


def emit(doc: Document, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc.as_json(), indent=2) + "\n"
    if fmt == "csv":
        return _emit_csv(doc)
    raise ValueError(f"unknown format {fmt!r}")


def _emit_csv(doc: Document) -> str:
    columns: list[str] = []
    for rec in doc.records:
        for k, v in rec.items():
            if isinstance(v, (dict, list, tuple)):
                continue
            names = [k, f"{k}_decimal"] if isinstance(v, Fraction) else [k]
            for n in names:
                if n not in columns:
                    columns.append(n)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in doc.records:
        row = []
        for col in columns:
            if col.endswith("_decimal") and isinstance(rec.get(col[:-8]), Fraction):
                row.append(decimal12(rec[col[:-8]]))
                continue
            v = rec.get(col, "")
            if isinstance(v, Fraction):
                v = f"{v.numerator}/{v.denominator}"
            elif isinstance(v, bool):
                v = "true" if v else "false"
            elif v is None:
                v = ""
            row.append(v)
        writer.writerow(row)
    return buf.getvalue()


# --------------------------------------------------------------------------
# Commands

def _cells(fn, args: list, threads: int, doc: Document) -> list:
    """Evaluate independent cells in order; stop at the first budget overrun."""
    results = []
    try:
        if threads <= 1 or len(args) <= 1:
            for a in args:
                results.append(fn(*a))
        else:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                futures = [pool.submit(fn, *a) for a in args]
                for fut in futures:
                    results.append(fut.result())
    except BudgetExceeded as exc:
        doc.status = "partial"
        doc.error = str(exc)
    return results


def _level_cell(pair: PairSpec, e: int, order_name: str):
    rec = splitting_length(pair, e, order_from_name(order_name))
    return rec.length, rec.s_e


def _curve_cell(pair: PairSpec, x: Polynomial, c: Fraction, e: int, t: Fraction, order_name: str):
    from .groebner import artinian_length

    q = pair.p**e
    k = round_exponent(t * c, q, pair.rounding)
    count = artinian_length(degeneracy_ideal(pair, e, extra=(x, k)), order_from_name(order_name))
    if not count.finite:
        raise InvariantError("degeneracy ideal is not m-primary")
    return k, count.colength, Fraction(count.colength, q**pair.ring.dimension)


def _expectation(doc: Document, task: dict, value: Fraction, default_tol: Fraction, label: str):
    exp = task.get("expect")
    if exp is None:
        return
    target = _fraction(exp, "task.expect")
    tol = _fraction(task["tolerance"], "task.tolerance") if "tolerance" in task else default_tol
    doc.check(label, abs(value - target) <= tol, f"|{value} - {target}| <= {tol}")


def _need(obj, what: str):
    if obj is None:
        raise ProblemError(f"this command needs {what}")
    return obj


def cmd_fsig(prob: Problem, args, doc: Document):
    levels = range(1, args.emax + 1)
    res = _cells(_level_cell, [(prob.pair, e, args.order) for e in levels], args.threads, doc)
    for e, (length, s) in zip(levels, res):
        doc.records.append({"e": e, "q": prob.ring.p**e, "length": length, "s_e": s})
        doc.check(f"length bound e={e}", 0 <= length <= (prob.ring.p**e) ** prob.ring.nvars)
    if res:
        ext = extrapolate([s for _, s in res], prob.ring.p)
        doc.summary["extrapolated"] = ext
        _expectation(doc, prob.task, ext, config.AN_EXTRAPOLATION, "extrapolation matches expectation")


def cmd_curve(prob: Problem, args, doc: Document):
    x, c = _need(prob.D, "a divisor D in [pair]").single()
    grid = args.grid or prob.task.get("grid") or ["0", "1/4", "1/2", "3/4", "1"]
    ts = [Fraction(str(t)) for t in grid]
    if any(not 0 <= t <= 1 for t in ts):
        raise ProblemError("grid values must lie in [0, 1]")
    cells = [(prob.pair, x, c, e, t, args.order) for e in range(1, args.emax + 1) for t in ts]
    res = _cells(_curve_cell, cells, args.threads, doc)
    for (_, _, _, e, t, _), (k, length, s) in zip(cells, res):
        doc.records.append({"e": e, "t": t, "exponent": k, "length": length, "s_e": s})
    for e in range(1, args.emax + 1):
        vals = [(r["t"], r["s_e"]) for r in doc.records if r["e"] == e]
        vals.sort()
        doc.check(f"non-increasing e={e}", all(a[1] >= b[1] for a, b in zip(vals, vals[1:])))


def cmd_diff(prob: Problem, args, doc: Document):
    D = _need(prob.D, "a divisor D in [pair]")
    base = prob.bases[_need(prob.task.get("base"), "task.base")]
    m = D.index
    for e in range(1, args.emax + 1):
        q = prob.ring.p**e
        if (q - 1) % m:
            doc.records.append({"e": e, "q": q, "admissible": False})
            continue
        res = different_hypersurface(prob.pair, D, e, base)
        rec = {"e": e, "q": q, "admissible": True, "h": str(res.h),
               "residual": str(res.residual), "residual_unit": res.residual_is_unit,
               "s_e_base": different_signature(res, order_from_name(args.order))}
        for v, coef in res.coefficients:
            rec[f"coefficient_{v}"] = coef
        doc.records.append(rec)
        doc.check(f"coefficients in [0,1] e={e}", all(0 <= cf <= 1 for _, cf in res.coefficients))
    if not any(r["admissible"] for r in doc.records):
        raise NotCoprimeIndex(f"index {m} divides no p^e - 1 with e <= {args.emax}")


def cmd_hk(prob: Problem, args, doc: Document):
    gens = prob.task.get("ideal")
    if gens:
        I = Ideal(prob.ring.ring, [prob.ring.parse(g) for g in gens])
    else:
        I = Ideal.maximal(prob.ring.ring)
    est = hilbert_kunz(prob.ring, I, args.emax, order_from_name(args.order))
    for r in est.records:
        doc.records.append({"e": r.e, "q": r.q, "length": r.length, "value": r.s_e})
    doc.summary["extrapolated"] = est.extrapolated
    _expectation(doc, prob.task, est.extrapolated, config.HILBERT_KUNZ, "extrapolation matches expectation")


def cmd_fpt(prob: Problem, args, doc: Document):
    g = prob.ring.parse(_need(prob.task.get("g"), "task.g"))
    levels = fpt_estimate(prob.ring, g, args.emax)
    for lv in levels:
        doc.records.append({"e": lv.e, "q": lv.q, "nu": lv.nu, "ratio": lv.ratio})
    if levels:
        doc.summary["last_ratio"] = levels[-1].ratio
        _expectation(doc, prob.task, levels[-1].ratio, Fraction(1, 10), "ratio matches expectation")


def cmd_ratio(prob: Problem, args, doc: Document):
    sdim = prob.task.get("sdim", prob.ring.dimension)
    pair = prob.pair
    if prob.task.get("include_D"):
        pair = pair.with_delta(pair.delta + _need(prob.D, "a divisor D in [pair]"))
    levels = range(1, args.emax + 1)
    res = _cells(_level_cell, [(pair, e, args.order) for e in levels], args.threads, doc)
    values = []
    for e, (length, _) in zip(levels, res):
        q = prob.ring.p**e
        v = Fraction(length, q**sdim)
        values.append(v)
        doc.records.append({"e": e, "q": q, "length": length, "value": v})
    if values:
        doc.summary["extrapolated"] = extrapolate(values, prob.ring.p)
        _expectation(doc, prob.task, doc.summary["extrapolated"], config.AN_EXTRAPOLATION,
                     "extrapolation matches expectation")


def cmd_adjoint(prob: Problem, args, doc: Document):
    D = _need(prob.D, "a divisor D in [pair]")
    base = prob.bases[_need(prob.task.get("base"), "task.base")]
    order = order_from_name(args.order)
    rep = adjunction_check(prob.pair, D, base, args.emax, order)
    for lv in rep.levels:
        rec = {"e": lv.e, "q": lv.q, "admissible": lv.admissible}
        if lv.admissible:
            rec.update({"s_pair": lv.s_pair, "slope": lv.slope, "rhs_direct": lv.rhs_direct,
                        "rhs_formula": lv.rhs_formula, "routes_agree": lv.routes_agree,
                        "corollary_holds": lv.corollary_holds, "equality_case": lv.equality_case})
            doc.check(f"routes agree e={lv.e}", lv.routes_agree)
        doc.records.append(rec)
    top = rep.top
    if top is None:
        raise NotCoprimeIndex(f"index {D.index} divides no p^e - 1 with e <= {args.emax}")
    doc.summary.update({"level": top.e, "slope": top.slope, "rhs": top.rhs_direct,
                        "equality_case": top.equality_case})
    doc.check("corollary inequality at top level", top.corollary_holds)


def cmd_verify_cover(prob: Problem, args, doc: Document):
    cover = _need(prob.cover, "a [cover] section")
    rep = verify_cover(cover, prob.pair, args.emax, prob.D, order_from_name(args.order))
    for lv in rep.levels:
        doc.records.append({"e": lv.e, "q": lv.q, "s_base": lv.s_base, "s_cover": lv.s_cover,
                            "scaled_base": lv.scaled_base, "gap": lv.gap})
    doc.check("inclusion respects relations", rep.relations_ok)
    if rep.witness_ok is not None:
        doc.check("witness power matches the image of x", rep.witness_ok)
    doc.check("gaps non-increasing from e=2", rep.gaps_non_increasing)
    doc.summary["messages"] = rep.messages
    cb, bb = prob.task.get("cover_base"), prob.task.get("base")
    if cb and bb and prob.D is not None:
        diffs = []
        for e in range(1, args.emax + 1):
            q = prob.ring.p**e
            if (q - 1) % prob.D.index:
                continue
            r = verify_cover_different(cover, prob.pair, prob.D, prob.bases[bb], prob.bases[cb], e,
                                       order_from_name(args.order))
            diffs.append({"e": e, "scaled_base": r.scaled_base, "s_cover": r.s_cover, "gap": r.gap})
            doc.check(f"different comparison e={e}", r.gap <= config.cover_different_gap(prob.ring.p, e))
        doc.summary["different_comparison"] = diffs


def cmd_selftest(args, doc: Document):
    from .selftest import run_selftest

    for name, passed, detail in run_selftest():
        doc.check(name, passed, detail)
        doc.records.append({"check": name, "passed": passed, "detail": detail})


HANDLERS = {
    "fsig": cmd_fsig,
    "curve": cmd_curve,
    "diff": cmd_diff,
    "hk": cmd_hk,
    "fpt": cmd_fpt,
    "ratio": cmd_ratio,
    "adjoint-check": cmd_adjoint,
    "verify-cover": cmd_verify_cover,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fsig", description="F-signature and adjunction computations over F_p")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("file", nargs="?")
    ap.add_argument("--emax", type=int)
    ap.add_argument("--grid", type=lambda s: [x.strip() for x in s.split(",") if x.strip()])
    ap.add_argument("--rounding", choices=("qm1", "q"))
    ap.add_argument("--order", choices=("grevlex", "lex"), default="grevlex")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--budget", type=int)
    return ap


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    if args.budget is None:
        return _run(args, out, err)
    if args.budget < 1:
        print("error: --budget must be positive", file=err)
        return 1
    # worker processes inherit the cap through the environment
    saved = os.environ.get("FSIG_BUDGET")
    os.environ["FSIG_BUDGET"] = str(args.budget)
    try:
        return _run(args, out, err)
    finally:
        if saved is None:
            os.environ.pop("FSIG_BUDGET", None)
        else:
            os.environ["FSIG_BUDGET"] = saved


def _run(args, out, err) -> int:
    start = time.perf_counter()
    prob = None
    try:
        if args.command != "selftest":
            if not args.file:
                raise ProblemError(f"{args.command} needs a problem file")
            prob = load_problem(args.file, args.rounding)
            if args.emax is None:
                args.emax = int(prob.task.get("emax", 2))
            if args.emax < 1:
                raise ProblemError("--emax must be at least 1")
        flags = {"emax": args.emax, "order": args.order}
        if args.command == "curve":
            flags["grid"] = args.grid or (prob.task.get("grid") if prob else None)
        doc = Document(args.command, prob, flags)
        if args.command == "selftest":
            cmd_selftest(args, doc)
        else:
            HANDLERS[args.command](prob, args, doc)
    except (ProblemError, PresentationError, ParseError, NotArtinian, NotCoprimeIndex, ExponentOverflow,
            BudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return 1
    except InvariantError as exc:
        print(f"check failed: {exc}", file=err)
        return 2
    doc.elapsed = time.perf_counter() - start
    if doc.failed and doc.status == "ok":
        doc.status = "check-failed"
    out.write(emit(doc, args.format))
    if doc.status == "partial":
        print(f"error: {doc.error} (partial results)", file=err)
        return 1
    if doc.failed:
        for c in doc.checks:
            if not c["passed"]:
                print(f"check failed: {c['name']} {c['detail']}".rstrip(), file=err)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

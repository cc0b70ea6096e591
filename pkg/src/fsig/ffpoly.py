"""Sparse multivariate polynomials over a prime field F_p.

Polynomials are immutable.  Terms live in a dict mapping exponent tuples to
coefficients in ``range(1, p)``; ordering is applied on demand through a
:class:`MonomialOrder`, so one polynomial can be viewed under grevlex, lex or
a block order without copying.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from operator import le
from typing import Iterable, Iterator, Mapping, Sequence

MAX_EXP = 2**63 - 1

Exp = tuple  # tuple[int, ...]


class ExponentOverflow(OverflowError):
    """An exponent would leave the checked 64-bit range."""


class ParseError(ValueError):
    def __init__(self, message: str, src: str = "", pos: int | None = None):
        self.src = src
        self.pos = pos
        if pos is not None:
            message = f"{message} (column {pos + 1})"
        super().__init__(message)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# --------------------------------------------------------------------------
# Monomial orders

class MonomialOrder:
    """A monomial order, exposed through ``rank``.

    ``rank(a) < rank(b)`` means ``a`` is *larger* than ``b``; sorting by rank
    therefore lists terms in descending order, and a min-heap keyed by rank
    pops the leading term first.
    """

    __slots__ = ("kind", "k")

    def __init__(self, kind: str, k: int = 0):
        if kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {kind!r}")
        if kind == "block" and k < 1:
            raise ValueError("block order needs k >= 1")
        self.kind = kind
        self.k = k if kind == "block" else 0

    def rank(self, a: Exp):
        if self.kind == "grevlex":
            return (-sum(a), a[::-1])
        if self.kind == "lex":
            return tuple(-x for x in a)
        k = self.k
        head, tail = a[:k], a[k:]
        return (-sum(head), head[::-1], -sum(tail), tail[::-1])

    def greater(self, a: Exp, b: Exp) -> bool:
        return self.rank(a) < self.rank(b)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.k) == (other.kind, other.k)

    def __hash__(self):
        return hash((self.kind, self.k))

    def __repr__(self):
        return f"block({self.k})" if self.kind == "block" else self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def block_order(k: int) -> MonomialOrder:
    """Eliminate the first ``k`` variables (grevlex inside each block)."""
    return MonomialOrder("block", k)


def order_from_name(name: str) -> MonomialOrder:
    if name == "grevlex":
        return GREVLEX
    if name == "lex":
        return LEX
    m = re.fullmatch(r"block\((\d+)\)", name)
    if m:
        return block_order(int(m.group(1)))
    raise ValueError(f"unknown monomial order {name!r}")


# --------------------------------------------------------------------------
# Monomial helpers

def mono_mul(a: Exp, b: Exp) -> Exp:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Exp, b: Exp) -> Exp:
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Exp, b: Exp) -> bool:
    return all(map(le, a, b))


def mono_lcm(a: Exp, b: Exp) -> Exp:
    return tuple(x if x > y else y for x, y in zip(a, b))


def total_degree(a: Exp) -> int:
    d = sum(a)
    if d > MAX_EXP:
        raise ExponentOverflow(f"total degree {d} exceeds 2^63-1")
    return d


# --------------------------------------------------------------------------
# Field and ring

@dataclass(frozen=True)
class Fp:
    """An element of the prime field F_p."""

    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _check(self, other: Fp):
        if other.p != self.p:
            raise ValueError("elements of different prime fields")

    def __add__(self, other: Fp) -> Fp:
        self._check(other)
        return Fp(self.value + other.value, self.p)

    def __sub__(self, other: Fp) -> Fp:
        self._check(other)
        return Fp(self.value - other.value, self.p)

    def __mul__(self, other: Fp) -> Fp:
        self._check(other)
        return Fp(self.value * other.value, self.p)

    def __neg__(self) -> Fp:
        return Fp(-self.value, self.p)

    def inv(self) -> Fp:
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return Fp(pow(self.value, -1, self.p), self.p)


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Ring:
    """The polynomial ring F_p[vars]."""

    p: int
    names: tuple

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"characteristic {self.p!r} is not prime")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        for n in self.names:
            if not _IDENT.match(n):
                raise ValueError(f"invalid variable name {n!r}")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return self.const(1)

    def const(self, c: int) -> Polynomial:
        return Polynomial(self, {(0,) * self.nvars: c})

    def var(self, name: str | int) -> Polynomial:
        i = name if isinstance(name, int) else self.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> list[Polynomial]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exp: Sequence[int], coeff: int = 1) -> Polynomial:
        return Polynomial(self, {tuple(exp): coeff})

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return pow(a, -1, self.p)

    def parse(self, src: str) -> Polynomial:
        return parse_polynomial(src, self)

    def extend(self, new_names: Sequence[str], front: bool = True) -> Ring:
        names = tuple(new_names) + self.names if front else self.names + tuple(new_names)
        return Ring(self.p, names)


# --------------------------------------------------------------------------
# Polynomials

class Polynomial:
    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Exp, int] | None = None, *, _clean: bool = False):
        self.ring = ring
        self._hash = None
        if _clean:
            self._terms = terms
            return
        p = ring.p
        n = ring.nvars
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"monomial arity {len(e)} != {n}")
            for x in e:
                if x < 0:
                    raise ValueError("negative exponent")
                if x > MAX_EXP:
                    raise ExponentOverflow(f"exponent {x} exceeds 2^63-1")
            c %= p
            if c:
                clean[e] = (clean.get(e, 0) + c) % p
                if not clean[e]:
                    del clean[e]
        self._terms = clean

    # -- basic access ---------------------------------------------------
    @property
    def terms(self) -> dict:
        """Read-only view of the exponent -> coefficient map (do not mutate)."""
        return self._terms

    def items(self, order: MonomialOrder = GREVLEX) -> list[tuple[Exp, int]]:
        """Terms in strictly descending order."""
        return sorted(self._terms.items(), key=lambda t: order.rank(t[0]))

    def __iter__(self) -> Iterator[tuple[Exp, int]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def constant_coeff(self) -> int:
        return self._terms.get((0,) * self.ring.nvars, 0)

    def in_maximal_ideal(self) -> bool:
        """True when the polynomial vanishes at the origin."""
        return self.constant_coeff() == 0

    def is_unit(self) -> bool:
        return self.is_constant() and not self.is_zero()

    def lead(self, order: MonomialOrder = GREVLEX) -> tuple[Exp, int]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = min(self._terms, key=order.rank)
        return e, self._terms[e]

    def lead_monomial(self, order: MonomialOrder = GREVLEX) -> Exp:
        return self.lead(order)[0]

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(total_degree(e) for e in self._terms)

    def max_exponents(self) -> tuple:
        n = self.ring.nvars
        if not self._terms:
            return (0,) * n
        return tuple(max(e[i] for e in self._terms) for i in range(n))

    def monic(self, order: MonomialOrder = GREVLEX) -> Polynomial:
        if not self._terms:
            return self
        _, c = self.lead(order)
        return self.scale(self.ring.inv(c))

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = (out.get(e, 0) + c) % p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial(self.ring, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {e: p - c for e, c in self._terms.items()}, _clean=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c: int) -> Polynomial:
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {e: v * c % p for e, v in self._terms.items()}, _clean=True)

    def mul_monomial(self, exp: Exp, c: int = 1) -> Polynomial:
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        _check_sum(self.max_exponents(), exp)
        return Polynomial(
            self.ring, {mono_mul(e, exp): v * c % p for e, v in self._terms.items()}, _clean=True
        )

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return self.ring.zero()
        _check_sum(self.max_exponents(), other.max_exponents())
        return Polynomial(self.ring, _mul_terms(self._terms, other._terms, self.ring.p), _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Polynomial:
        return binary_pow(self, n)

    def mul_truncated(self, other: Polynomial, bounds: Sequence[int]) -> Polynomial:
        """Product modulo the monomial ideal (x_1^b_1, ..., x_N^b_N)."""
        return Polynomial(
            self.ring, _mul_terms(self._terms, other._terms, self.ring.p, tuple(bounds)), _clean=True
        )

    def truncated(self, bounds: Sequence[int]) -> Polynomial:
        """Drop every term lying in (x_1^b_1, ..., x_N^b_N)."""
        b = tuple(bounds)
        return Polynomial(
            self.ring,
            {e: c for e, c in self._terms.items() if all(map(_lt, e, b))},
            _clean=True,
        )

    def frobenius_power(self, e: int) -> Polynomial:
        return frobenius_power(self, e)

    def substitute(self, images: Sequence[Polynomial], target: Ring | None = None) -> Polynomial:
        """Ring map sending the i-th variable to ``images[i]``."""
        if len(images) != self.ring.nvars:
            raise ValueError("need one image per variable")
        if target is None:
            target = images[0].ring if images else self.ring
        out = target.zero()
        cache: dict = {}
        for e, c in self._terms.items():
            term = target.const(c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = binary_pow(images[i], k)
                    term = term * cache[key]
            out = out + term
        return out

    def divide_exact(self, divisor: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
        """Quotient of an exact division; raises if the remainder is nonzero."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        p = self.ring.p
        lm, lc = divisor.lead(order)
        inv = self.ring.inv(lc)
        rest = dict(self._terms)
        quot = {}
        dterms = list(divisor._terms.items())
        while rest:
            m = min(rest, key=order.rank)
            if not mono_divides(lm, m):
                raise ArithmeticError("division is not exact")
            qe = mono_div(m, lm)
            qc = rest[m] * inv % p
            quot[qe] = qc
            for t, tc in dterms:
                mm = mono_mul(t, qe)
                v = (rest.get(mm, 0) - qc * tc) % p
                if v:
                    rest[mm] = v
                else:
                    rest.pop(mm, None)
        return Polynomial(self.ring, quot, _clean=True)

    def monomial_content(self) -> Exp:
        """Componentwise minimum exponent (the gcd of the monomials)."""
        if not self._terms:
            return (0,) * self.ring.nvars
        return tuple(min(e[i] for e in self._terms) for i in range(self.ring.nvars))

    # -- comparison / printing -----------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r}, p={self.ring.p})"


def _lt(a, b):
    return a < b


def _check_sum(a: Exp, b: Exp):
    for x, y in zip(a, b):
        if x + y > MAX_EXP:
            raise ExponentOverflow("exponent overflow in product")


def _mul_terms(a: dict, b: dict, p: int, bounds: tuple | None = None) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    for eb, cb in b.items():
        for ea, ca in a.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            if bounds is not None and not all(map(_lt, e, bounds)):
                continue
            out[e] = (get(e, 0) + ca * cb) % p
    return {e: c for e, c in out.items() if c}


def add(f: Polynomial, g: Polynomial) -> Polynomial:
    return f + g


def mul(f: Polynomial, g: Polynomial) -> Polynomial:
    return f * g


def binary_pow(f: Polynomial, n: int) -> Polynomial:
    """``f**n`` by square-and-multiply."""
    if n < 0:
        raise ValueError("negative exponent")
    ring = f.ring
    if n == 0:
        return ring.one()
    for x in f.max_exponents():
        if x * n > MAX_EXP:
            raise ExponentOverflow("exponent overflow in power")
    result = None
    base = f
    while True:
        if n & 1:
            result = base if result is None else result * base
        n >>= 1
        if not n:
            break
        base = base * base
    return result


def frobenius_power(f: Polynomial, e: int) -> Polynomial:
    """``f**(p**e)`` computed by scaling exponents (coefficients are fixed)."""
    if e < 0:
        raise ValueError("Frobenius level must be non-negative")
    if e == 0:
        return f
    q = f.ring.p**e
    if max(f.max_exponents(), default=0) * q > MAX_EXP:
        raise ExponentOverflow(f"Frobenius power p^{e} overflows the exponent range")
    return Polynomial(f.ring, {tuple(x * q for x in m): c for m, c in f.terms.items()}, _clean=True)


def power_q_minus_one(f: Polynomial, e: int) -> Polynomial:
    """``f**(p**e - 1)`` via ``p^e - 1 = (p-1)(1 + p + ... + p^(e-1))``."""
    if e < 1:
        raise ValueError("level must be at least 1")
    p = f.ring.p
    q = p**e
    for x in f.max_exponents():
        if x * (q - 1) > MAX_EXP:
            raise ExponentOverflow("exponent overflow in f^(q-1)")
    g = binary_pow(f, p - 1)
    result = g
    for k in range(1, e):
        result = result * frobenius_power(g, k)
    return result


# --------------------------------------------------------------------------
# Printing and parsing

def format_polynomial(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    names = f.ring.names
    parts = []
    for e, c in f.items(GREVLEX):
        factors = []
        for name, k in zip(names, e):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        else:
            parts.append(f"{c}*" + "*".join(factors))
    return " + ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*^()]))")


def _tokenize(src: str):
    pos = 0
    tokens = []
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            break
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", src, pos)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append(("ident", m.group(2), start))
        else:
            op = m.group(3)
            tokens.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    tokens.append(("end", None, len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, ring: Ring):
        self.src = src
        self.ring = ring
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.src, tok[2])

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.error("empty expression")
        f = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return f

    def expr(self):
        f = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self):
        f = self.unary()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            f = f * self.unary()
        return f

    def unary(self):
        tok = self.peek()
        if tok[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if tok[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.peek()
            if tok[:2] == ("op", "-"):
                self.error("negative exponent")
            if tok[0] != "int":
                self.error("exponent must be a non-negative integer literal")
            self.take()
            base = binary_pow(base, tok[1])
            if self.peek()[:2] == ("op", "^"):
                self.error("chained exponents need parentheses")
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "int":
            return self.ring.const(val)
        if kind == "ident":
            if val not in self.ring.names:
                self.error(f"unknown identifier {val!r}", tok)
            return self.ring.var(val)
        if tok[:2] == ("op", "("):
            f = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.error("expected ')'")
            self.take()
            return f
        self.error(f"unexpected token {val!r}" if kind != "end" else "unexpected end of input", tok)


def parse_polynomial(src: str, ring: Ring) -> Polynomial:
    """Parse ``src`` (integers, variables, + - * ^ and parentheses) in ``ring``."""
    return _Parser(src, ring).parse()


def polynomials(ring: Ring, sources: Iterable[str]) -> list[Polynomial]:
    return [parse_polynomial(s, ring) for s in sources]

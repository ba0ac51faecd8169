"""Integer Laurent polynomials in d commuting variables.

A polynomial is an immutable map from exponent tuples to nonzero Python
integers, so coefficient growth never overflows.  The module also holds
the direction machinery used everywhere else: ``Direction`` values and
the exposed-vertex / H-monic tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Mapping, Sequence

DEFAULT_VARS = {1: ("u",), 2: ("u", "v"), 3: ("u", "v", "w")}

# Ties in n.v closer than this count as ties for float-only directions.
TIE_TOL = 1e-9


def default_vars(d: int) -> tuple[str, ...]:
    if d in DEFAULT_VARS:
        return DEFAULT_VARS[d]
    return tuple(f"u{i + 1}" for i in range(d))


class ParseError(ValueError):
    """Raised for malformed polynomial text; ``pos`` is the 0-based offset
    (or a line number when ``line`` is set)."""

    def __init__(self, msg: str, pos: int, line: bool = False):
        super().__init__(msg if line else f"{msg} at position {pos}")
        self.pos = pos


class LaurentPoly:
    __slots__ = ("dim", "terms", "_hash")

    def __init__(self, dim: int, terms: Mapping[tuple, int] | None = None):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = dim
        clean = {}
        for n, c in (terms or {}).items():
            n = tuple(int(x) for x in n)
            if len(n) != dim:
                raise ValueError(f"exponent {n} does not have length {dim}")
            c = int(c)
            if c:
                clean[n] = clean.get(n, 0) + c
                if not clean[n]:
                    del clean[n]
        self.terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, d: int) -> "LaurentPoly":
        return cls(d)

    @classmethod
    def const(cls, d: int, c: int) -> "LaurentPoly":
        return cls(d, {(0,) * d: c})

    @classmethod
    def monomial(cls, exps: Sequence[int], c: int = 1) -> "LaurentPoly":
        return cls(len(exps), {tuple(exps): c})

    @classmethod
    def var(cls, d: int, i: int) -> "LaurentPoly":
        e = [0] * d
        e[i] = 1
        return cls(d, {tuple(e): 1})

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list[tuple]:
        return sorted(self.terms)

    def coeff(self, n: Sequence[int]) -> int:
        return self.terms.get(tuple(n), 0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_unit(self) -> bool:
        return len(self.terms) == 1 and abs(next(iter(self.terms.values()))) == 1

    def content(self) -> int:
        return reduce(math.gcd, (abs(c) for c in self.terms.values()), 0)

    def involves(self, i: int) -> bool:
        """True when the polynomial is not a monomial multiple in variable i."""
        return len({n[i] for n in self.terms}) > 1

    def min_exponents(self) -> tuple:
        if not self.terms:
            return (0,) * self.dim
        return tuple(min(n[i] for n in self.terms) for i in range(self.dim))

    def normalize_shift(self) -> "LaurentPoly":
        """Multiply by a monomial so every exponent is >= 0 and each variable's
        minimum exponent is exactly 0."""
        lo = self.min_exponents()
        return self.shift(tuple(-x for x in lo))

    # arithmetic
    def _check(self, other: "LaurentPoly"):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, int):
            return LaurentPoly.const(self.dim, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for n, c in other.terms.items():
            s = out.get(n, 0) + c
            if s:
                out[n] = s
            else:
                out.pop(n, None)
        return _raw(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return _raw(self.dim, {n: -c for n, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for n1, c1 in self.terms.items():
            for n2, c2 in other.terms.items():
                n = tuple(a + b for a, b in zip(n1, n2))
                s = out.get(n, 0) + c1 * c2
                if s:
                    out[n] = s
                else:
                    out.pop(n, None)
        return _raw(self.dim, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial")
            (n, c), = self.terms.items()
            if abs(c) != 1:
                raise ValueError("negative power of a non-unit monomial")
            return LaurentPoly(self.dim, {tuple(k * x for x in n): c ** (-k)})
        out = LaurentPoly.const(self.dim, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c: int) -> "LaurentPoly":
        return LaurentPoly(self.dim, {n: c * x for n, x in self.terms.items()})

    def shift(self, k: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial u^k."""
        return _raw(self.dim, {tuple(a + b for a, b in zip(n, k)): c
                               for n, c in self.terms.items()})

    def substitute_monomial_map(self, matrix: Sequence[Sequence[int]]) -> "LaurentPoly":
        """Exponent change n -> matrix @ n (matrix is e x d, result has dim e)."""
        e = len(matrix)
        out: dict = {}
        for n, c in self.terms.items():
            m = tuple(sum(row[j] * n[j] for j in range(self.dim)) for row in matrix)
            out[m] = out.get(m, 0) + c
        return LaurentPoly(e, out)

    def flip(self, signs: Sequence[int]) -> "LaurentPoly":
        """Substitute u_j -> u_j^{signs[j]} (signs are +-1)."""
        return _raw(self.dim, {tuple(s * x for s, x in zip(signs, n)): c
                               for n, c in self.terms.items()})

    def reduce_mod(self, p: int) -> "LaurentPoly":
        return LaurentPoly(self.dim, {n: c % p for n, c in self.terms.items()})

    # comparisons
    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.dim, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dim, frozenset(self.terms.items())))
        return self._hash

    # evaluation
    def evaluate(self, z: Sequence[complex]) -> complex:
        return evaluate(self, z)

    # printing
    def to_str(self, names: Sequence[str] | None = None) -> str:
        return format_poly(self, names)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"LaurentPoly({self.dim}, {self.to_str()!r})"


def _raw(dim: int, terms: dict) -> LaurentPoly:
    # skips validation for internally produced clean dicts
    p = LaurentPoly.__new__(LaurentPoly)
    p.dim = dim
    p.terms = terms
    p._hash = None
    return p


def multiply(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    return f * g


def evaluate(f: LaurentPoly, z: Sequence[complex]) -> complex:
    if len(z) != f.dim:
        raise ValueError(f"expected {f.dim} coordinates, got {len(z)}")
    if any(x == 0 for x in z):
        raise ValueError("Laurent polynomials cannot be evaluated at a zero coordinate")
    total = 0j
    for n, c in f.terms.items():
        term = complex(c)
        for zj, e in zip(z, n):
            if e:
                term *= zj ** e
        total += term
    return total


def evaluate_many(f: LaurentPoly, z):
    """Vectorised evaluation; ``z`` is an array of shape (..., d)."""
    import numpy as np

    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape[:-1], dtype=complex)
    # far out on the torus terms overflow to inf/nan; callers treat
    # non-finite values as failed samples
    with np.errstate(over="ignore", invalid="ignore"):
        for n, c in f.terms.items():
            term = np.full(z.shape[:-1], complex(c))
            for j, e in enumerate(n):
                if e:
                    term = term * z[..., j] ** e
            out = out + term
    return out


# Directions ---------------------------------------------------------------

def primitive(vec: Sequence[int]) -> tuple:
    g = reduce(math.gcd, (abs(int(x)) for x in vec), 0)
    if g == 0:
        raise ValueError("zero vector has no direction")
    return tuple(int(x) // g for x in vec)


@dataclass(frozen=True)
class Direction:
    """A point of the unit sphere, optionally carrying an exact integer witness."""

    unit: tuple
    witness: tuple | None = None

    def __post_init__(self):
        norm = math.sqrt(sum(x * x for x in self.unit))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"direction is not a unit vector (norm {norm})")
        if self.witness is not None:
            w = tuple(int(x) for x in self.witness)
            if primitive(w) != w:
                raise ValueError("rational witness must be primitive")
            wn = math.sqrt(sum(x * x for x in w))
            if any(abs(a / wn - b) > 1e-9 for a, b in zip(w, self.unit)):
                raise ValueError("witness is not parallel to the unit vector")

    @property
    def dim(self) -> int:
        return len(self.unit)

    @property
    def rational(self) -> bool:
        return self.witness is not None

    @classmethod
    def from_ints(cls, vec: Sequence[int]) -> "Direction":
        w = primitive(vec)
        n = math.sqrt(sum(x * x for x in w))
        return cls(tuple(x / n for x in w), w)

    @classmethod
    def from_vector(cls, vec: Sequence[float]) -> "Direction":
        n = math.sqrt(sum(float(x) ** 2 for x in vec))
        if n == 0:
            raise ValueError("zero vector has no direction")
        return cls(tuple(float(x) / n for x in vec))

    @classmethod
    def from_angle(cls, theta: float) -> "Direction":
        return cls.from_vector((math.cos(theta), math.sin(theta)))

    def approximate(self, scale: int = 1000) -> "Direction":
        """Rational direction within roughly 1/scale radians of this one."""
        if self.witness is not None:
            return self
        return Direction.from_ints([round(x * scale) for x in self.unit])

    def angle(self) -> float:
        if self.dim != 2:
            raise ValueError("angle is only defined on the circle")
        return math.atan2(self.unit[1], self.unit[0]) % (2 * math.pi)

    def __neg__(self):
        w = None if self.witness is None else tuple(-x for x in self.witness)
        return Direction(tuple(-x for x in self.unit), w)

    def __str__(self):
        if self.witness is not None:
            return "(" + ",".join(str(x) for x in self.witness) + ")"
        return "(" + ",".join(f"{x:.6g}" for x in self.unit) + ")"


def as_direction(v) -> Direction:
    if isinstance(v, Direction):
        return v
    if all(isinstance(x, int) for x in v):
        return Direction.from_ints(v)
    return Direction.from_vector(v)


def exposed_vertex(f: LaurentPoly, v, tol: float = TIE_TOL) -> tuple | None:
    """The unique support point maximising n.v, or None on a tie."""
    if f.is_zero():
        raise ValueError("zero polynomial has no support")
    v = as_direction(v)
    if v.dim != f.dim:
        raise ValueError("direction and polynomial dimensions differ")
    if v.witness is not None:
        scores = [(sum(a * b for a, b in zip(n, v.witness)), n) for n in f.terms]
        scores.sort(reverse=True)
        if len(scores) > 1 and scores[0][0] == scores[1][0]:
            return None
        return scores[0][1]
    scores = sorted(((sum(a * b for a, b in zip(n, v.unit)), n) for n in f.terms),
                    reverse=True)
    if len(scores) > 1 and scores[0][0] - scores[1][0] <= tol:
        return None
    return scores[0][1]


def is_h_monic(f: LaurentPoly, v, tol: float = TIE_TOL) -> bool:
    """Exposed coefficient must be a unit; -f lies in any ideal holding f."""
    n = exposed_vertex(f, v, tol)
    return n is not None and abs(f.terms[n]) == 1


def exposed_margin(f: LaurentPoly, v) -> float:
    """Gap between the best and second-best value of n.v over the support
    (in units of the unit vector); infinite for monomials."""
    v = as_direction(v)
    scores = sorted((sum(a * b for a, b in zip(n, v.unit)) for n in f.terms), reverse=True)
    if len(scores) < 2:
        return math.inf
    return scores[0] - scores[1]


# Parsing and printing ------------------------------------------------------

class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.toks = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.toks.append(("int", int(text[i:j]), i))
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.toks.append(("name", text[i:j], i))
                i = j
            elif ch in "+-*^()/":
                self.toks.append((ch, ch, i))
                i += 1
            else:
                raise ParseError(f"unexpected character {ch!r}", i)
        self.toks.append(("end", None, len(text)))
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self, kind=None):
        tok = self.toks[self.k]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        self.k += 1
        return tok


class _Parser:
    """Recursive-descent parser producing values of a caller-supplied ring.

    ``atom_var(name, pos)`` and ``atom_int(n)`` build leaves; ``allow_div``
    enables '/' (used for rational parameter maps).
    """

    def __init__(self, text, atom_var, atom_int, allow_div=False):
        self.lx = _Lexer(text)
        self.atom_var = atom_var
        self.atom_int = atom_int
        self.allow_div = allow_div

    def parse(self):
        if self.lx.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        val = self.expr()
        tok = self.lx.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])
        return val

    def expr(self):
        val = self.term()
        while self.lx.peek()[0] in "+-":
            op = self.lx.take()[0]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.lx.peek()[0] in ("*", "/"):
            op, _, pos = self.lx.take()
            rhs = self.unary()
            if op == "*":
                val = val * rhs
            elif self.allow_div:
                val = val / rhs
            else:
                raise ParseError("division is not allowed here", pos)
        return val

    def unary(self):
        tok = self.lx.peek()
        if tok[0] == "-":
            self.lx.take()
            return -self.unary()
        if tok[0] == "+":
            self.lx.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.lx.peek()[0] == "^":
            self.lx.take()
            sign = 1
            while self.lx.peek()[0] in "+-":
                if self.lx.take()[0] == "-":
                    sign = -sign
            tok = self.lx.peek()
            if tok[0] == "(":
                self.lx.take()
                s2 = 1
                while self.lx.peek()[0] in "+-":
                    if self.lx.take()[0] == "-":
                        s2 = -s2
                k = self.lx.take("int")[1] * s2
                self.lx.take(")")
            else:
                k = self.lx.take("int")[1]
            try:
                return base ** (sign * k)
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(str(exc), tok[2]) from None
        return base

    def atom(self):
        tok = self.lx.take()
        kind, val, pos = tok
        if kind == "int":
            return self.atom_int(val)
        if kind == "name":
            return self.atom_var(val, pos)
        if kind == "(":
            inner = self.expr()
            self.lx.take(")")
            return inner
        raise ParseError(f"unexpected token {val!r}", pos)


def parse_poly(text: str, vars: Sequence[str] | None = None, dim: int | None = None) -> LaurentPoly:
    if vars is None:
        vars = default_vars(dim or 1)
    vars = tuple(vars)
    d = len(vars)
    index = {name: i for i, name in enumerate(vars)}

    def atom_var(name, pos):
        if name not in index:
            raise ParseError(f"unknown variable {name!r}", pos)
        return LaurentPoly.var(d, index[name])

    return _Parser(text, atom_var, lambda n: LaurentPoly.const(d, n)).parse()


def _grlex_key(n):
    return (sum(n), n)


def format_poly(f: LaurentPoly, names: Sequence[str] | None = None) -> str:
    names = tuple(names) if names else default_vars(f.dim)
    if f.is_zero():
        return "0"
    parts = []
    for n in sorted(f.terms, key=_grlex_key, reverse=True):
        c = f.terms[n]
        mono = "*".join(names[j] if e == 1 else f"{names[j]}^{e}"
                        for j, e in enumerate(n) if e)
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)

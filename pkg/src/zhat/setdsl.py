"""Set-definition language: parser, compiler, and residue-image engine.

An expression denotes a subset of Z^n. Compilation yields a total
membership oracle plus the ability to compute finite-level residue images
pi_m(X) in (Z/m)^n, exactly when every node admits an exact rule, by
truncated enumeration otherwise. Truncated images are certified subsets of
the true image.

Grammar (operators left-associative, equal precedence, '!' binds tightest)::

    set  := term (('|' | '&' | '\\') term)*
    term := '!' term | atom
    atom := 'cong(' int ',' posint ')' | 'kfree(' int ')' | 'primes'
          | 'coprime(' int ')' | 'image(' poly ')'
          | 'multiples(' posint {',' posint} ')'
          | 'leadingdigit(' digit ',' base ')' | 'seq(' ident ')'
          | 'finite(' int {',' int} ')' | '(' set ')'

Polynomials use variables x, y, z with integer coefficients and '^' for
powers.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as _iproduct
from typing import Callable, Iterable, Optional

import numpy as np

from . import _primes

EXACT = "exact"
TRUNCATED = "truncated"

ASSUMES_DIRICHLET = "assumes-dirichlet"

DEFAULT_RESIDUE_BUDGET = 10**8
DEFAULT_BOX_BUDGET = 2 * 10**8


class DslError(Exception):
    pass


class DslSyntaxError(DslError):
    def __init__(self, message: str, pos: int, expected: tuple[str, ...] = ()):
        detail = f"syntax error at position {pos}: {message}"
        if expected:
            detail += f" (expected {', '.join(expected)})"
        super().__init__(detail)
        self.pos = pos
        self.expected = expected


class DslValueError(DslError, ValueError):
    pass


class DimensionMismatch(DslValueError):
    pass


class BudgetExceeded(DslError):
    def __init__(self, message: str):
        super().__init__(message)


class ModeError(DslError):
    pass


# ------------------------------------------------------------- polynomials

_VAR_NAMES = ("x", "y", "z")


@dataclass(frozen=True)
class Polynomial:
    """Sparse integer polynomial in x, y, z: terms maps exponent triples to
    nonzero coefficients."""

    terms: tuple[tuple[tuple[int, int, int], int], ...]

    @classmethod
    def from_dict(cls, d: dict[tuple[int, int, int], int]) -> "Polynomial":
        clean = {e: c for e, c in d.items() if c != 0}
        order = sorted(clean, key=lambda e: (-sum(e), tuple(-v for v in e)))
        return cls(tuple((e, clean[e]) for e in order))

    @property
    def arity(self) -> int:
        a = 0
        for e, _ in self.terms:
            for i in range(3):
                if e[i] > 0:
                    a = max(a, i + 1)
        return a

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def evaluate(self, args: tuple[int, ...], mod: int | None = None) -> int:
        full = tuple(args) + (0, 0, 0)
        total = 0
        for e, c in self.terms:
            t = c
            for i in range(3):
                if e[i]:
                    t *= pow(full[i], e[i], mod) if mod else full[i] ** e[i]
            total += t
        return total % mod if mod else total

    def univariate_coeffs(self) -> list[int]:
        """Coefficients c_0..c_d when arity <= 1."""
        if self.arity > 1:
            raise ValueError("not univariate")
        coeffs = [0] * (self.degree + 1)
        for e, c in self.terms:
            coeffs[e[0]] += c
        return coeffs

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for i, (e, c) in enumerate(self.terms):
            body = []
            for v, name in zip(e, _VAR_NAMES):
                if v == 1:
                    body.append(name)
                elif v > 1:
                    body.append(f"{name}^{v}")
            mag = abs(c)
            if not body or mag != 1:
                body.insert(0, str(mag))
            txt = "*".join(body)
            if i == 0:
                out.append(f"-{txt}" if c < 0 else txt)
            else:
                out.append(f"- {txt}" if c < 0 else f"+ {txt}")
        return " ".join(out)


# ------------------------------------------------------------- expression AST


class SetExpr:
    """Base class for expression nodes. `dim_spec` is the fixed dimension of
    the node, or None when the node is valid in any dimension."""

    def dim_spec(self) -> Optional[int]:
        return 1

    def children(self) -> tuple["SetExpr", ...]:
        return ()


@dataclass(frozen=True)
class Cong(SetExpr):
    r: int
    m0: int

    def __post_init__(self):
        if self.m0 < 1:
            raise DslValueError(f"cong modulus must be >= 1, got {self.m0}")


@dataclass(frozen=True)
class KFree(SetExpr):
    k: int

    def __post_init__(self):
        if self.k < 2:
            raise DslValueError(f"kfree exponent must be >= 2, got {self.k}")


@dataclass(frozen=True)
class Primes(SetExpr):
    pass


@dataclass(frozen=True)
class Coprime(SetExpr):
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= 3:
            raise DslValueError(f"coprime dimension must be 1..3, got {self.n}")

    def dim_spec(self) -> Optional[int]:
        return self.n


@dataclass(frozen=True)
class PolyImage(SetExpr):
    poly: Polynomial

    @property
    def arity(self) -> int:
        return max(self.poly.arity, 1)


@dataclass(frozen=True)
class Multiples(SetExpr):
    moduli: tuple[int, ...]

    def __post_init__(self):
        if not self.moduli or any(a < 1 for a in self.moduli):
            raise DslValueError("multiples needs positive moduli")

    def dim_spec(self) -> Optional[int]:
        return None  # a*Z^n makes sense in every dimension


@dataclass(frozen=True)
class LeadingDigit(SetExpr):
    d: int
    base: int

    def __post_init__(self):
        if self.base < 2 or not 1 <= self.d < self.base:
            raise DslValueError(f"leadingdigit needs 1 <= d < base, got d={self.d} base={self.base}")


@dataclass(frozen=True)
class Seq(SetExpr):
    name: str


@dataclass(frozen=True)
class FiniteSet(SetExpr):
    values: tuple[int, ...]


@dataclass(frozen=True)
class Union(SetExpr):
    a: SetExpr
    b: SetExpr

    def children(self):
        return (self.a, self.b)

    def dim_spec(self):
        return _unify_dims(self.a, self.b)


@dataclass(frozen=True)
class Intersection(SetExpr):
    a: SetExpr
    b: SetExpr

    def children(self):
        return (self.a, self.b)

    def dim_spec(self):
        return _unify_dims(self.a, self.b)


@dataclass(frozen=True)
class Difference(SetExpr):
    a: SetExpr
    b: SetExpr

    def children(self):
        return (self.a, self.b)

    def dim_spec(self):
        return _unify_dims(self.a, self.b)


@dataclass(frozen=True)
class Complement(SetExpr):
    a: SetExpr

    def children(self):
        return (self.a,)

    def dim_spec(self):
        return self.a.dim_spec()


def _unify_dims(a: SetExpr, b: SetExpr) -> Optional[int]:
    da, db = a.dim_spec(), b.dim_spec()
    if da is None:
        return db
    if db is None or da == db:
        return da
    raise DimensionMismatch(f"dimension mismatch: {da} vs {db} in {to_text(a)!r} / {to_text(b)!r}")


def expr_dim(expr: SetExpr) -> int:
    """Resolved dimension (flexible nodes default to 1)."""
    d = expr.dim_spec()
    return 1 if d is None else d


# ------------------------------------------------------------- sequences

_SEQUENCES: dict[str, Callable[[int], list[int]]] = {}


def register_sequence(name: str, members_upto: Callable[[int], list[int]]) -> None:
    """Register a named positive integer sequence; the callable returns the
    ascending members <= N."""
    _SEQUENCES[name] = members_upto


def registered_sequences() -> tuple[str, ...]:
    return tuple(sorted(_SEQUENCES))


def _factorial_shift_upto(n: int) -> list[int]:
    out, k, fact = [], 1, 1
    while True:
        fact *= k
        v = fact + k
        if v > n:
            return out
        out.append(v)
        k += 1


def _factorials_upto(n: int) -> list[int]:
    out, k, fact = [], 1, 1
    while True:
        fact *= k
        if fact > n:
            return out
        if not out or fact != out[-1]:
            out.append(fact)
        k += 1


def _primorials_upto(n: int) -> list[int]:
    out, acc = [], 1
    for p in _primes.iter_primes():
        acc *= p
        if acc > n:
            return out
        out.append(acc)


register_sequence("factorial_shift", _factorial_shift_upto)
register_sequence("factorials", _factorials_upto)
register_sequence("primorials", _primorials_upto)


# ------------------------------------------------------------- tokenizer

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<int>\d+)|(?P<sym>[|&\\!(),^*+\-])"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # ident | int | sym | end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    toks, i = [], 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            raise DslSyntaxError(f"unexpected character {text[i]!r}", i)
        i = m.end()
        if m.lastgroup != "ws":
            toks.append(_Token(m.lastgroup, m.group(), m.start()))
    toks.append(_Token("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.toks[self.i]

    def advance(self) -> _Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_sym(self, sym: str) -> _Token:
        t = self.peek()
        if t.kind == "sym" and t.text == sym:
            return self.advance()
        raise DslSyntaxError(f"found {t.text or 'end of input'!r}", t.pos, (repr(sym),))

    def parse_int(self) -> int:
        neg = False
        t = self.peek()
        if t.kind == "sym" and t.text == "-":
            self.advance()
            neg = True
            t = self.peek()
        if t.kind != "int":
            raise DslSyntaxError(f"found {t.text or 'end of input'!r}", t.pos, ("integer",))
        self.advance()
        v = int(t.text)
        return -v if neg else v

    # set := term (op term)*
    def parse_set(self) -> SetExpr:
        node = self.parse_term()
        while True:
            t = self.peek()
            if t.kind == "sym" and t.text in "|&\\":
                self.advance()
                rhs = self.parse_term()
                cls = {"|": Union, "&": Intersection, "\\": Difference}[t.text]
                try:
                    node = cls(node, rhs)
                except DimensionMismatch:
                    raise
            else:
                return node

    def parse_term(self) -> SetExpr:
        t = self.peek()
        if t.kind == "sym" and t.text == "!":
            self.advance()
            return Complement(self.parse_term())
        return self.parse_atom()

    def parse_atom(self) -> SetExpr:
        t = self.peek()
        if t.kind == "sym" and t.text == "(":
            self.advance()
            node = self.parse_set()
            self.expect_sym(")")
            return node
        if t.kind != "ident":
            raise DslSyntaxError(
                f"found {t.text or 'end of input'!r}", t.pos,
                ("atom", "'('", "'!'"),
            )
        name = t.text
        self.advance()
        if name == "primes":
            return Primes()
        builders = {
            "cong": self._parse_cong,
            "kfree": self._parse_kfree,
            "coprime": self._parse_coprime,
            "image": self._parse_image,
            "multiples": self._parse_multiples,
            "leadingdigit": self._parse_leadingdigit,
            "seq": self._parse_seq,
            "finite": self._parse_finite,
        }
        if name not in builders:
            raise DslSyntaxError(
                f"unknown atom {name!r}", t.pos,
                tuple(sorted(builders) + ["primes"]),
            )
        self.expect_sym("(")
        node = builders[name]()
        self.expect_sym(")")
        return node

    def _parse_cong(self) -> SetExpr:
        r = self.parse_int()
        self.expect_sym(",")
        m0 = self.parse_int()
        return Cong(r, m0)

    def _parse_kfree(self) -> SetExpr:
        return KFree(self.parse_int())

    def _parse_coprime(self) -> SetExpr:
        return Coprime(self.parse_int())

    def _parse_multiples(self) -> SetExpr:
        vals = [self.parse_int()]
        while self.peek().kind == "sym" and self.peek().text == ",":
            self.advance()
            vals.append(self.parse_int())
        return Multiples(tuple(vals))

    def _parse_leadingdigit(self) -> SetExpr:
        d = self.parse_int()
        self.expect_sym(",")
        base = self.parse_int()
        return LeadingDigit(d, base)

    def _parse_seq(self) -> SetExpr:
        t = self.peek()
        if t.kind != "ident":
            raise DslSyntaxError(f"found {t.text or 'end of input'!r}", t.pos, ("sequence name",))
        self.advance()
        return Seq(t.text)

    def _parse_finite(self) -> SetExpr:
        vals = [self.parse_int()]
        while self.peek().kind == "sym" and self.peek().text == ",":
            self.advance()
            vals.append(self.parse_int())
        return FiniteSet(tuple(vals))

    def _parse_image(self) -> SetExpr:
        return PolyImage(self._parse_poly())

    # poly := pterm (('+'|'-') pterm)* ; pterm := pfac ('*' pfac)* ;
    # pfac := int | var ('^' int)? | '(' poly ')' | '-' pfac
    def _parse_poly(self) -> Polynomial:
        acc: dict[tuple[int, int, int], int] = {}

        def add(d: dict, sign: int):
            for e, c in d.items():
                acc[e] = acc.get(e, 0) + sign * c

        add(self._parse_pterm(), 1)
        while True:
            t = self.peek()
            if t.kind == "sym" and t.text in "+-":
                self.advance()
                add(self._parse_pterm(), 1 if t.text == "+" else -1)
            else:
                return Polynomial.from_dict(acc)

    def _parse_pterm(self) -> dict:
        d = self._parse_pfactor()
        while self.peek().kind == "sym" and self.peek().text == "*":
            self.advance()
            d = _poly_mul(d, self._parse_pfactor())
        return d

    def _parse_pfactor(self) -> dict:
        t = self.peek()
        if t.kind == "sym" and t.text == "-":
            self.advance()
            return {e: -c for e, c in self._parse_pfactor().items()}
        if t.kind == "sym" and t.text == "(":
            self.advance()
            inner = self._parse_poly()
            self.expect_sym(")")
            return {e: c for e, c in inner.terms}
        if t.kind == "int":
            self.advance()
            return {(0, 0, 0): int(t.text)}
        if t.kind == "ident" and t.text in _VAR_NAMES:
            self.advance()
            idx = _VAR_NAMES.index(t.text)
            e = [0, 0, 0]
            if self.peek().kind == "sym" and self.peek().text == "^":
                self.advance()
                pt = self.peek()
                if pt.kind != "int":
                    raise DslSyntaxError(f"found {pt.text or 'end of input'!r}", pt.pos, ("exponent",))
                self.advance()
                e[idx] = int(pt.text)
            else:
                e[idx] = 1
            return {tuple(e): 1}
        raise DslSyntaxError(
            f"found {t.text or 'end of input'!r}", t.pos,
            ("integer", "variable x/y/z", "'('"),
        )


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict[tuple[int, int, int], int] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])
            out[e] = out.get(e, 0) + ca * cb
    return out


def parse(text: str) -> SetExpr:
    """Parse an expression; raises DslSyntaxError with a position on bad
    input and DimensionMismatch on incompatible combinator dimensions."""
    p = _Parser(text)
    node = p.parse_set()
    t = p.peek()
    if t.kind != "end":
        raise DslSyntaxError(f"trailing input {t.text!r}", t.pos)
    expr_dim(node)  # force dimension resolution errors now
    return node


def to_text(expr: SetExpr) -> str:
    """Canonical form; parse(to_text(e)) reproduces e."""
    def binary(e: SetExpr) -> bool:
        return isinstance(e, (Union, Intersection, Difference))

    if isinstance(expr, Cong):
        return f"cong({expr.r},{expr.m0})"
    if isinstance(expr, KFree):
        return f"kfree({expr.k})"
    if isinstance(expr, Primes):
        return "primes"
    if isinstance(expr, Coprime):
        return f"coprime({expr.n})"
    if isinstance(expr, PolyImage):
        return f"image({expr.poly})"
    if isinstance(expr, Multiples):
        return f"multiples({','.join(map(str, expr.moduli))})"
    if isinstance(expr, LeadingDigit):
        return f"leadingdigit({expr.d},{expr.base})"
    if isinstance(expr, Seq):
        return f"seq({expr.name})"
    if isinstance(expr, FiniteSet):
        return f"finite({','.join(map(str, expr.values))})"
    if isinstance(expr, Complement):
        inner = to_text(expr.a)
        return f"!({inner})" if binary(expr.a) else f"!{inner}"
    if isinstance(expr, (Union, Intersection, Difference)):
        op = {"Union": "|", "Intersection": "&", "Difference": "\\"}[type(expr).__name__]
        lhs = to_text(expr.a)
        rhs = to_text(expr.b)
        if binary(expr.b):
            rhs = f"({rhs})"
        return f"{lhs} {op} {rhs}"
    raise TypeError(f"unknown node {expr!r}")


# ------------------------------------------------------------- residue image


@dataclass(frozen=True)
class ResidueImage:
    """pi_m(X) at level m: exact, or the image of the box truncation."""

    m: int
    dim: int
    residues: frozenset
    mode: str
    truncation: int | None = None
    assumptions: frozenset = frozenset()

    def __post_init__(self):
        if len(self.residues) > self.m**self.dim:
            raise ValueError("more residues than classes")

    @property
    def count(self) -> int:
        return len(self.residues)

    def level_measure(self) -> Fraction:
        """|pi_m(X)| / m^n, the Haar measure of the level set X_m."""
        return Fraction(self.count, self.m**self.dim)

    def sorted_residues(self) -> list:
        return sorted(self.residues)


@dataclass(frozen=True)
class CrtSplit:
    parts: dict
    is_product: bool


# ------------------------------------------------------------- compiled set


def _rule_exact(expr: SetExpr) -> bool:
    if isinstance(expr, (Cong, KFree, Primes, Coprime, PolyImage, Multiples, FiniteSet)):
        return True
    if isinstance(expr, (LeadingDigit, Seq)):
        return False
    if isinstance(expr, Union):
        return _rule_exact(expr.a) and _rule_exact(expr.b)
    # intersection/difference/complement: pi_m does not commute with them
    return False


def clopen_modulus(expr: SetExpr) -> Optional[int]:
    """When membership in expr is determined by the residue mod L, return the
    smallest such L derivable from the structure; else None. Cong and
    Multiples atoms are determined mod their moduli and the property is
    closed under all four combinators."""
    if isinstance(expr, Cong):
        return expr.m0
    if isinstance(expr, Multiples):
        return math.lcm(*expr.moduli)
    if isinstance(expr, Complement):
        return clopen_modulus(expr.a)
    if isinstance(expr, (Union, Intersection, Difference)):
        la, lb = clopen_modulus(expr.a), clopen_modulus(expr.b)
        if la is None or lb is None:
            return None
        return math.lcm(la, lb)
    return None


@dataclass
class CompiledSet:
    expr: SetExpr
    dim: int
    mode: str
    positive_only: bool
    residue_budget: int = DEFAULT_RESIDUE_BUDGET
    box_budget: int = DEFAULT_BOX_BUDGET
    assumptions: frozenset = frozenset()

    # -- membership -------------------------------------------------------
    def contains(self, x) -> bool:
        if self.dim == 1:
            if not isinstance(x, int):
                (x,) = x
            return _contains(self.expr, (x,))
        t = tuple(x)
        if len(t) != self.dim:
            raise DslValueError(f"point arity {len(t)} != dimension {self.dim}")
        return _contains(self.expr, t)

    __contains__ = contains

    # -- enumeration ------------------------------------------------------
    def mask_upto(self, n: int) -> np.ndarray:
        """Dimension-1 membership table for 1..n (index 0 is always False)."""
        if self.dim != 1:
            raise DslValueError("mask_upto is dimension-1 only")
        if n + 1 > self.box_budget:
            raise BudgetExceeded(f"box [1,{n}] exceeds box budget {self.box_budget}")
        m = _mask_raw(self.expr, n, +1)
        m[0] = False
        return m

    def members_in_box(self, n: int) -> list:
        """X ∩ [1,N] in positive mode, X ∩ [-N,N]^dim otherwise; sorted."""
        if self.dim == 1:
            pos = self.mask_upto(n)
            out = np.nonzero(pos)[0].tolist()
            if self.positive_only:
                return out
            negm = _mask_raw(self.expr, n, -1)
            negm[0] = False
            neg = (-np.nonzero(negm)[0][::-1]).tolist()
            mid = [0] if _contains(self.expr, (0,)) else []
            return neg + mid + out
        lo = 1 if self.positive_only else -n
        if (n - lo + 1) ** self.dim > self.box_budget:
            raise BudgetExceeded(f"box [{lo},{n}]^{self.dim} exceeds box budget {self.box_budget}")
        grid = _mask_nd(self.expr, n, self.dim, lo)
        pts = np.argwhere(grid) + lo
        return sorted(map(tuple, pts.tolist()))

    # -- residue images ---------------------------------------------------
    def residue_image(self, m: int, truncation: int | None = None) -> ResidueImage:
        if m < 1:
            raise DslValueError("modulus must be >= 1")
        if m**self.dim > self.residue_budget:
            raise BudgetExceeded(
                f"residue enumeration at level m={m}, dim={self.dim} exceeds budget {self.residue_budget}"
            )
        if self.mode == EXACT:
            residues = _exact_image(self.expr, m, self.dim, self.residue_budget)
            return ResidueImage(m, self.dim, frozenset(residues), EXACT, None, self.assumptions)
        n = truncation if truncation is not None else max(m, 10**6)
        if n < m:
            raise DslValueError(f"truncation bound {n} < modulus {m}")
        if self.dim == 1:
            members = self.members_in_box(n)
            residues = frozenset(int(x) % m for x in members)
        else:
            residues = frozenset(tuple(c % m for c in pt) for pt in self.members_in_box(n))
        return ResidueImage(m, self.dim, residues, TRUNCATED, n, self.assumptions)

    def clopen_image_exact(self, m: int) -> ResidueImage | None:
        """Exact pi_m(X) for clopen-structured expressions (Cong/Multiples
        trees under any combinators), at any level m: membership is decided
        by the residue mod L, so the image is computed by evaluating one
        period mod lcm(m, L). Returns None when the structure is not clopen
        or the set is not one-dimensional."""
        if self.dim != 1:
            return None
        level = clopen_modulus(self.expr)
        if level is None:
            return None
        big = math.lcm(m, level)
        if big > self.residue_budget:
            raise BudgetExceeded(f"clopen evaluation at lcm({m},{level})={big} exceeds budget")
        period = _mask_raw(self.expr, big - 1, +1)
        hits = np.unique(np.nonzero(period)[0] % m)
        residues = frozenset(int(v) for v in hits)
        return ResidueImage(m, self.dim, residues, EXACT, None, self.assumptions)

    def residue_count(self, m: int) -> int:
        """|pi_m(X)| without materializing the image, using closed-form
        per-prime counts where the structure allows (CRT product sizes,
        inclusion-exclusion for multiples). Falls back to enumeration."""
        if self.mode != EXACT:
            raise ModeError("residue_count needs an exact-mode set")
        c = _exact_count(self.expr, m, self.dim, self.residue_budget)
        if c is not None:
            return c
        return len(_exact_image(self.expr, m, self.dim, self.residue_budget))

    # -- structure views for estimator fast paths ------------------------
    def interval_view(self, r: int) -> list[tuple[int, int]] | None:
        """X ∩ [1,r] as a short list of disjoint intervals, when the
        structure supports it (LeadingDigit, FiniteSet, unions of those)."""
        return _interval_view(self.expr, r)

    def ie_view(self) -> tuple[str, tuple[int, ...]] | None:
        """('multiples', moduli) or ('complement', moduli) when the set is a
        set of multiples or its complement; None otherwise."""
        if isinstance(self.expr, Multiples):
            return ("multiples", self.expr.moduli)
        if isinstance(self.expr, Complement) and isinstance(self.expr.a, Multiples):
            return ("complement", self.expr.a.moduli)
        return None


def compile_set(expr: SetExpr | str, positive_only: bool | None = None,
                residue_budget: int = DEFAULT_RESIDUE_BUDGET,
                box_budget: int = DEFAULT_BOX_BUDGET) -> CompiledSet:
    """Compile an expression (or source text) to a CompiledSet."""
    if isinstance(expr, str):
        expr = parse(expr)
    _check_sequences(expr)
    dim = expr_dim(expr)
    if positive_only is None:
        positive_only = dim == 1
    mode = EXACT if _rule_exact(expr) else TRUNCATED
    assumptions = frozenset([ASSUMES_DIRICHLET]) if _mentions_primes(expr) else frozenset()
    return CompiledSet(expr, dim, mode, positive_only, residue_budget, box_budget, assumptions)


def _check_sequences(expr: SetExpr) -> None:
    if isinstance(expr, Seq) and expr.name not in _SEQUENCES:
        raise DslValueError(
            f"unknown sequence {expr.name!r}; registered: {', '.join(registered_sequences())}"
        )
    for c in expr.children():
        _check_sequences(c)


def _mentions_primes(expr: SetExpr) -> bool:
    if isinstance(expr, Primes):
        return True
    return any(_mentions_primes(c) for c in expr.children())


# ------------------------------------------------------------- membership


def _contains(expr: SetExpr, x: tuple[int, ...]) -> bool:
    if isinstance(expr, Cong):
        return all(c % expr.m0 == expr.r % expr.m0 for c in x)
    if isinstance(expr, KFree):
        v = x[0]
        if v == 0:
            return False
        v = abs(v)
        if v == 1:
            return True
        return all(e < expr.k for e in _primes.factorize(v).values())
    if isinstance(expr, Primes):
        return x[0] > 0 and _primes.is_prime(x[0])
    if isinstance(expr, Coprime):
        return math.gcd(*(abs(c) for c in x)) == 1 if len(x) > 1 else abs(x[0]) == 1
    if isinstance(expr, PolyImage):
        return _poly_image_contains(expr.poly, x[0])
    if isinstance(expr, Multiples):
        return any(all(c % a == 0 for c in x) for a in expr.moduli)
    if isinstance(expr, LeadingDigit):
        v = abs(x[0])
        if v == 0:
            return False
        while v >= expr.base:
            v //= expr.base
        return v == expr.d
    if isinstance(expr, Seq):
        v = x[0]
        return v > 0 and v in _SEQUENCES[expr.name](v)
    if isinstance(expr, FiniteSet):
        return x[0] in expr.values
    if isinstance(expr, Union):
        return _contains(expr.a, x) or _contains(expr.b, x)
    if isinstance(expr, Intersection):
        return _contains(expr.a, x) and _contains(expr.b, x)
    if isinstance(expr, Difference):
        return _contains(expr.a, x) and not _contains(expr.b, x)
    if isinstance(expr, Complement):
        return not _contains(expr.a, x)
    raise TypeError(f"unknown node {expr!r}")


def _univariate_preimage_bound(coeffs: list[int], n: int) -> int:
    """T such that |f(t)| > n for every |t| > T (degree >= 1)."""
    d = len(coeffs) - 1
    lead = abs(coeffs[-1])
    lower = sum(abs(c) for c in coeffs[:-1])
    r = max(1, (2 * lower + lead - 1) // lead)
    t = max(r, math.ceil((2 * n / lead) ** (1.0 / d)) + 1)
    return t + 1


def _poly_image_contains(poly: Polynomial, v: int) -> bool:
    arity = max(poly.arity, 1)
    if arity == 1:
        coeffs = poly.univariate_coeffs()
        if len(coeffs) == 1:
            return v == coeffs[0]
        t = _univariate_preimage_bound(coeffs, abs(v))
        return any(poly.evaluate((s,)) == v for s in range(-t, t + 1))
    raise DslValueError(
        "membership for multivariate polynomial images is not decidable by bounded search; "
        "use residue images"
    )


# ------------------------------------------------------------- masks


def _mask_raw(expr: SetExpr, n: int, sign: int) -> np.ndarray:
    """Membership table of sign*k for k in 0..n (dimension 1)."""
    z = np.zeros(n + 1, dtype=bool)
    if isinstance(expr, Cong):
        start = (sign * expr.r) % expr.m0
        if start <= n:
            z[start:: expr.m0] = True
        return z
    if isinstance(expr, KFree):
        z[:] = True
        z[0] = False
        k = expr.k
        top = int(round(n ** (1.0 / k))) + 2
        for p in _primes.primes_upto(top):
            q = int(p) ** k
            if q <= n:
                z[q::q] = False
        return z
    if isinstance(expr, Primes):
        if sign > 0:
            return _primes.prime_mask_upto(n)
        return z
    if isinstance(expr, PolyImage):
        poly = expr.poly
        if max(poly.arity, 1) != 1:
            raise DslValueError("multivariate polynomial images have no box enumeration")
        coeffs = poly.univariate_coeffs()
        if len(coeffs) == 1:
            v = coeffs[0]
            if v * sign >= 0 and abs(v) <= n:
                z[abs(v)] = True
            return z
        t = _univariate_preimage_bound(coeffs, n)
        for s in range(-t, t + 1):
            v = poly.evaluate((s,))
            if abs(v) <= n and (v >= 0) == (sign > 0 or v == 0):
                z[abs(v)] = True
        return z
    if isinstance(expr, Multiples):
        z[0] = True
        for a in expr.moduli:
            if a <= n:
                z[a::a] = True
        return z
    if isinstance(expr, LeadingDigit):
        lo = expr.d
        while lo <= n:
            hi = min(lo + lo // expr.d - 1, n)
            z[lo: hi + 1] = True
            lo *= expr.base
        return z
    if isinstance(expr, Seq):
        if sign > 0:
            for v in _SEQUENCES[expr.name](n):
                z[v] = True
        return z
    if isinstance(expr, FiniteSet):
        for v in expr.values:
            if v * sign >= 0 and abs(v) <= n:
                z[abs(v)] = True
        return z
    if isinstance(expr, Union):
        return _mask_raw(expr.a, n, sign) | _mask_raw(expr.b, n, sign)
    if isinstance(expr, Intersection):
        return _mask_raw(expr.a, n, sign) & _mask_raw(expr.b, n, sign)
    if isinstance(expr, Difference):
        return _mask_raw(expr.a, n, sign) & ~_mask_raw(expr.b, n, sign)
    if isinstance(expr, Complement):
        return ~_mask_raw(expr.a, n, sign)
    if isinstance(expr, Coprime):
        raise DslValueError("coprime sets live in dimension >= 2")
    raise TypeError(f"unknown node {expr!r}")


def _mask_nd(expr: SetExpr, n: int, dim: int, lo: int) -> np.ndarray:
    """Membership over the box [lo,n]^dim as a dense boolean grid."""
    ax = np.arange(lo, n + 1, dtype=np.int64)
    side = len(ax)
    mag = np.abs(ax)

    def axis(i: int, arr: np.ndarray) -> np.ndarray:
        shape = [1] * dim
        shape[i] = side
        return arr.reshape(shape)

    if isinstance(expr, Coprime):
        g = axis(0, mag)
        for i in range(1, dim):
            g = np.gcd(g, axis(i, mag))
        return g == 1
    if isinstance(expr, Multiples):
        out = np.zeros((side,) * dim, dtype=bool)
        for a in expr.moduli:
            hit = axis(0, ax) % a == 0
            for i in range(1, dim):
                hit = hit & (axis(i, ax) % a == 0)
            out |= hit
        return out
    if isinstance(expr, Cong):
        hit = axis(0, ax) % expr.m0 == expr.r % expr.m0
        for i in range(1, dim):
            hit = hit & (axis(i, ax) % expr.m0 == expr.r % expr.m0)
        return np.broadcast_to(hit, (side,) * dim).copy()
    if isinstance(expr, Union):
        return _mask_nd(expr.a, n, dim, lo) | _mask_nd(expr.b, n, dim, lo)
    if isinstance(expr, Intersection):
        return _mask_nd(expr.a, n, dim, lo) & _mask_nd(expr.b, n, dim, lo)
    if isinstance(expr, Difference):
        return _mask_nd(expr.a, n, dim, lo) & ~_mask_nd(expr.b, n, dim, lo)
    if isinstance(expr, Complement):
        return ~_mask_nd(expr.a, n, dim, lo)
    raise DslValueError(f"no box enumeration for {type(expr).__name__} in dimension {dim}")


def _interval_view(expr: SetExpr, r: int) -> list[tuple[int, int]] | None:
    if isinstance(expr, LeadingDigit):
        out = []
        lo = expr.d
        while lo <= r:
            out.append((lo, min(lo + lo // expr.d - 1, r)))
            lo *= expr.base
        return out
    if isinstance(expr, FiniteSet):
        return [(v, v) for v in sorted(set(expr.values)) if 1 <= v <= r]
    if isinstance(expr, Union):
        a = _interval_view(expr.a, r)
        b = _interval_view(expr.b, r)
        if a is None or b is None:
            return None
        merged: list[tuple[int, int]] = []
        for lo, hi in sorted(a + b):
            if merged and lo <= merged[-1][1] + 1:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        return merged
    return None


# ------------------------------------------------------------- exact engine


def _crt_coefficients(locals_: list[tuple[int, object]], m: int) -> list[int]:
    coeffs = []
    for q, _ in locals_:
        rest = m // q
        coeffs.append(rest * pow(rest, -1, q) % m)
    return coeffs


def _exact_image(expr: SetExpr, m: int, dim: int, budget: int) -> set:
    if isinstance(expr, Cong):
        g = math.gcd(m, expr.m0)
        base = {s for s in range(expr.r % g, m, g)}
        if dim == 1:
            return base
        if len(base) ** dim > budget:
            raise BudgetExceeded(f"cong image at m={m} dim={dim} exceeds budget")
        return set(_iproduct(sorted(base), repeat=dim))
    if isinstance(expr, Multiples):
        out: set = set()
        for a in expr.moduli:
            g = math.gcd(m, a)
            scal = list(range(0, m, g))
            if dim == 1:
                out.update(scal)
            else:
                if len(out) + len(scal) ** dim > budget:
                    raise BudgetExceeded(f"multiples image at m={m} dim={dim} exceeds budget")
                out.update(_iproduct(scal, repeat=dim))
        return out
    if isinstance(expr, KFree):
        locals_ = []
        for p, j, q in _primes.prime_powers_of(m):
            if j >= expr.k:
                pk = p**expr.k
                allowed = [r for r in range(q) if r % pk != 0]
            else:
                allowed = list(range(q))
            locals_.append((q, allowed))
        return _crt_scalar(locals_, m, budget)
    if isinstance(expr, Primes):
        # every prime not dividing m is a unit mod m (assumes-dirichlet: each
        # unit class is actually hit); primes dividing m contribute themselves
        ar = np.arange(m, dtype=np.int64)
        units = set(np.nonzero(np.gcd(ar, m) == 1)[0].tolist())
        if m > 1:
            units.update(p % m for p in _primes.factorize(m))
        return units
    if isinstance(expr, Coprime):
        locals_ = []
        for p, j, q in _primes.prime_powers_of(m):
            allowed = [t for t in _iproduct(range(q), repeat=dim) if any(c % p != 0 for c in t)]
            locals_.append((q, allowed))
        if not locals_:  # m = 1
            return {tuple([0] * dim)} if dim > 1 else {0}
        return _crt_tuple(locals_, m, dim, budget)
    if isinstance(expr, PolyImage):
        arity = max(expr.poly.arity, 1)
        if m**arity > budget:
            raise BudgetExceeded(f"polynomial image at m={m} arity={arity} exceeds budget")
        vals = set()
        for args in _iproduct(range(m), repeat=arity):
            vals.add(expr.poly.evaluate(args, mod=m))
        return vals
    if isinstance(expr, FiniteSet):
        return {v % m for v in expr.values}
    if isinstance(expr, Union):
        return _exact_image(expr.a, m, dim, budget) | _exact_image(expr.b, m, dim, budget)
    raise ModeError(f"no exact residue rule for {type(expr).__name__}")


def _crt_scalar(locals_: list[tuple[int, list[int]]], m: int, budget: int) -> set:
    if not locals_:
        return {0}
    total = math.prod(len(s) for _, s in locals_)
    if total > budget:
        raise BudgetExceeded(f"CRT enumeration of {total} residues at m={m} exceeds budget")
    coeffs = _crt_coefficients(locals_, m)
    out = set()
    for combo in _iproduct(*(s for _, s in locals_)):
        out.add(sum(s * c for s, c in zip(combo, coeffs)) % m)
    return out


def _crt_tuple(locals_: list[tuple[int, list[tuple[int, ...]]]], m: int, dim: int, budget: int) -> set:
    total = math.prod(len(s) for _, s in locals_)
    if total > budget:
        raise BudgetExceeded(f"CRT enumeration of {total} residue tuples at m={m} exceeds budget")
    coeffs = _crt_coefficients(locals_, m)
    out = set()
    for combo in _iproduct(*(s for _, s in locals_)):
        out.add(tuple(sum(t[i] * c for t, c in zip(combo, coeffs)) % m for i in range(dim)))
    return out


def _exact_count(expr: SetExpr, m: int, dim: int, budget: int) -> int | None:
    """Closed-form |pi_m(expr)| where available, None to fall back on
    enumeration. The CRT combination is a bijection, so product-of-local
    sizes is exact."""
    if isinstance(expr, Cong):
        return (m // math.gcd(m, expr.m0)) ** dim
    if isinstance(expr, Multiples):
        mods = expr.moduli
        if len(mods) > 20:
            return None
        total = 0
        for bits in range(1, 1 << len(mods)):
            sel = [mods[i] for i in range(len(mods)) if bits >> i & 1]
            g = math.gcd(m, math.lcm(*sel))
            total += (-1) ** (len(sel) + 1) * (m // g) ** dim
        return total
    if isinstance(expr, KFree):
        c = 1
        for p, j, q in _primes.prime_powers_of(m):
            c *= q - q // p**expr.k if j >= expr.k else q
        return c
    if isinstance(expr, Primes):
        if m == 1:
            return 1
        fac = _primes.factorize(m)
        phi = m
        for p in fac:
            phi = phi // p * (p - 1)
        return phi + len(fac)
    if isinstance(expr, Coprime):
        c = 1
        for p, j, q in _primes.prime_powers_of(m):
            c *= q**dim - (q // p) ** dim
        return c
    if isinstance(expr, FiniteSet):
        return len({v % m for v in expr.values})
    return None


# ------------------------------------------------------------- CRT split


def crt_split(img: ResidueImage) -> CrtSplit:
    """Project an exact image to its prime-power components and report
    whether the image equals the full product of the projections."""
    if img.mode != EXACT:
        raise ModeError("crt_split needs an EXACT residue image")
    pps = _primes.prime_powers_of(img.m)
    if not pps:
        return CrtSplit({}, True)
    parts: dict[int, ResidueImage] = {}
    sizes = []
    for _, _, q in pps:
        if img.dim == 1:
            proj = frozenset(r % q for r in img.residues)
        else:
            proj = frozenset(tuple(c % q for c in r) for r in img.residues)
        parts[q] = ResidueImage(q, img.dim, proj, EXACT, None, img.assumptions)
        sizes.append(len(proj))
    return CrtSplit(parts, math.prod(sizes) == len(img.residues))

"""Prime-field coefficients, sparse homogeneous polynomials and monomial orders.

Everything downstream works over R = F_p[x_1..x_r] with a global monomial
order.  Monomials are exponent tuples, polynomials are sparse maps from
exponent tuples to nonzero coefficients in 0..p-1.  All values are immutable
after construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator


class AlgebraError(Exception):
    """Base class for errors raised by the engine."""


class DegreeError(AlgebraError):
    """Incompatible homogeneous degrees."""


class ParseError(AlgebraError):
    """Malformed polynomial or job text."""


GREVLEX = "grevlex"
LEX = "lex"
ORDERS = (GREVLEX, LEX)

TOP = "term-over-position"
POT = "position-over-term"
SCHREYER = "schreyer-induced"
MODULE_ORDERS = (TOP, POT, SCHREYER)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# -- monomials ---------------------------------------------------------------
# A monomial is a tuple of non-negative exponents, one per ring variable.

def mono_degree(m: tuple) -> int:
    return sum(m)


def mono_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: tuple, b: tuple) -> bool:
    """True when a divides b."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: tuple, b: tuple) -> tuple:
    """a / b, assuming b divides a."""
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomials_of_degree(nvars: int, d: int) -> Iterator[tuple]:
    """All exponent tuples of total degree d, deterministic order."""
    if nvars == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(nvars - 1, d - first):
            yield (first,) + rest


@dataclass(frozen=True)
class RingContext:
    """Ambient ring F_p[x_1..x_r] with a fixed monomial order.

    ``module_order`` picks the default order on free-module terms; Schreyer
    orders are induced internally during syzygy computations.
    """

    characteristic: int = 101
    variables: tuple = ("x", "y")
    order: str = GREVLEX
    module_order: str = TOP

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if not is_prime(self.characteristic):
            raise AlgebraError(
                f"characteristic {self.characteristic} is not prime")
        if len(self.variables) < 1:
            raise AlgebraError("need at least one variable")
        if len(set(self.variables)) != len(self.variables):
            raise AlgebraError("duplicate variable")
        if self.order not in ORDERS:
            raise AlgebraError(f"unknown order {self.order!r}")
        if self.module_order not in MODULE_ORDERS:
            raise AlgebraError(f"unknown module order {self.module_order!r}")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def inv(self, a: int) -> int:
        a %= self.characteristic
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.characteristic - 2, self.characteristic)

    def mono_key(self, m: tuple):
        """Sort key: larger key = larger monomial in the ring order."""
        if self.order == GREVLEX:
            return (sum(m), tuple(-e for e in reversed(m)))
        return tuple(m)

    # -- element constructors ------------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: int) -> "Polynomial":
        c %= self.characteristic
        if c == 0:
            return Polynomial(self, {})
        return Polynomial(self, {(0,) * self.nvars: c})

    def variable(self, name: str) -> "Polynomial":
        if name not in self.variables:
            raise AlgebraError(f"unknown variable {name!r}")
        i = self.variables.index(name)
        exps = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, {exps: 1})


def monomial_cmp(a: tuple, b: tuple, ctx: RingContext) -> int:
    """-1, 0 or 1 comparing a against b in the ring order."""
    if len(a) != len(b):
        raise AlgebraError("monomials from different rings")
    ka, kb = ctx.mono_key(a), ctx.mono_key(b)
    return (ka > kb) - (ka < kb)


class Polynomial:
    """Sparse polynomial with coefficients in F_p.

    ``terms`` maps exponent tuples to coefficients in 1..p-1; zero
    coefficients are never stored.  Instances are not mutated after
    construction.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: RingContext, terms: dict):
        p = ctx.characteristic
        clean = {}
        for m, c in terms.items():
            c %= p
            if c:
                clean[tuple(m)] = c
        self.ctx = ctx
        self.terms = clean

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self):
        """Common total degree, or None for the zero polynomial."""
        if not self.terms:
            return None
        return max(mono_degree(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {mono_degree(m) for m in self.terms}
        return len(degs) <= 1

    def is_constant(self) -> bool:
        return all(mono_degree(m) == 0 for m in self.terms)

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.ctx.nvars, 0)

    def leading_monomial(self) -> tuple:
        if not self.terms:
            raise AlgebraError("zero polynomial has no leading monomial")
        return max(self.terms, key=self.ctx.mono_key)

    def leading_coefficient(self) -> int:
        return self.terms[self.leading_monomial()]

    # -- arithmetic ----------------------------------------------------------

    def _check_ctx(self, other: "Polynomial"):
        if self.ctx != other.ctx:
            raise AlgebraError("polynomials from different rings")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_ctx(other)
        if (not self.is_zero() and not other.is_zero()
                and self.is_homogeneous() and other.is_homogeneous()
                and self.degree != other.degree):
            raise DegreeError(
                f"cannot add homogeneous degrees {self.degree} and {other.degree}")
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(self.ctx, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return Polynomial(
                self.ctx, {m: c * other for m, c in self.terms.items()})
        self._check_ctx(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(self.ctx, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def scale_monomial(self, coeff: int, mono: tuple) -> "Polynomial":
        """coeff * x^mono * self."""
        return Polynomial(self.ctx, {
            mono_mul(m, mono): c * coeff for m, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, Polynomial) and self.ctx == other.ctx
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    # -- printing ------------------------------------------------------------

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"


def poly_add(f: Polynomial, g: Polynomial) -> Polynomial:
    return f + g


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    return f * g


# -- text grammar ------------------------------------------------------------
# term = optional integer coefficient, '*'-separated powers like x^2*y;
# terms joined by '+'/'-'.  Canonical form: terms in descending monomial
# order, coefficients reduced to 0..p-1, so canonical text only uses '+'.

_VAR_RE = re.compile(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?\Z")
_INT_RE = re.compile(r"\d+\Z")


def format_polynomial(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    parts = []
    for m in sorted(f.terms, key=f.ctx.mono_key, reverse=True):
        c = f.terms[m]
        factors = []
        for name, e in zip(f.ctx.variables, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        else:
            parts.append(f"{c}*" + "*".join(factors))
    return " + ".join(parts)


def parse_polynomial(text: str, ctx: RingContext) -> Polynomial:
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty polynomial text")
    # split into signed terms
    chunks = []
    sign = 1
    start = 0
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        start = 1
    cur = start
    pieces = []
    for i in range(start, len(s)):
        if s[i] in "+-":
            pieces.append((sign, s[cur:i]))
            sign = -1 if s[i] == "-" else 1
            cur = i + 1
    pieces.append((sign, s[cur:]))
    terms: dict = {}
    for sgn, term in pieces:
        if not term:
            raise ParseError(f"empty term in {text!r}")
        coeff = sgn
        exps = [0] * ctx.nvars
        for idx, part in enumerate(term.split("*")):
            if _INT_RE.match(part):
                if idx != 0:
                    raise ParseError(
                        f"integer coefficient must come first in {term!r}")
                coeff *= int(part)
                continue
            m = _VAR_RE.match(part)
            if not m:
                raise ParseError(f"bad factor {part!r} in {text!r}")
            name, power = m.group(1), m.group(2)
            if name not in ctx.variables:
                raise ParseError(f"unknown variable {name!r}")
            exps[ctx.variables.index(name)] += int(power) if power else 1
        mono = tuple(exps)
        terms[mono] = terms.get(mono, 0) + coeff
    chunks = terms
    return Polynomial(ctx, chunks)

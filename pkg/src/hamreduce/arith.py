"""Exact multivariate polynomial arithmetic over the rationals.

A polynomial is a dict mapping exponent tuples to ``Fraction`` coefficients.
Exponent tuples are dense: entry ``i`` is the exponent of variable ``i`` of
the ambient :class:`VarList`.  The zero polynomial is the empty dict, and no
zero coefficient is ever stored, so two polynomials are equal iff their term
dicts are equal.

Rational scalars are ``fractions.Fraction`` throughout: arbitrary-precision,
always in lowest terms with a positive denominator, and exact.

Monomial orders are small frozen objects exposing a sort ``key``; the leading
monomial of ``f`` under ``order`` is ``max(f.terms, key=order.key)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

Exponents = tuple[int, ...]


class VarList:
    """An ordered list of interned variable names.

    Declaration order is significant: it fixes the variable enumeration used
    by every monomial order, so two VarLists are equal iff they list the same
    names in the same order.
    """

    __slots__ = ("names", "index", "_hash")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        index: dict[str, int] = {}
        for i, name in enumerate(names):
            if name in index:
                raise ValueError(f"duplicate variable name {name!r}")
            index[name] = i
        self.names = names
        self.index = index
        self._hash = hash(names)

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self.index

    def __eq__(self, other) -> bool:
        return isinstance(other, VarList) and self.names == other.names

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"VarList({', '.join(self.names)})"


# ---------------------------------------------------------------------------
# Monomial orders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lex:
    """Lexicographic order; earlier variables dominate."""

    def key(self, exps: Exponents):
        return exps

    @property
    def name(self) -> str:
        return "lex"


@dataclass(frozen=True)
class GrevLex:
    """Graded reverse lexicographic order.

    Higher total degree wins; among equal degrees, the monomial with the
    smaller exponent on the last differing variable wins.
    """

    def key(self, exps: Exponents):
        return (sum(exps), tuple(-e for e in reversed(exps)))

    @property
    def name(self) -> str:
        return "grevlex"


@dataclass(frozen=True)
class Block:
    """Block (elimination) order: compare the first ``split`` exponents under
    ``first``, break ties on the rest under ``second``.

    Any monomial involving a first-block variable is larger than any monomial
    free of them, so a Groebner basis under this order intersects down to the
    second block.
    """

    split: int
    first: "MonomialOrder"
    second: "MonomialOrder"

    def key(self, exps: Exponents):
        return (self.first.key(exps[: self.split]), self.second.key(exps[self.split :]))

    @property
    def name(self) -> str:
        return f"block({self.split},{self.first.name},{self.second.name})"


MonomialOrder = Lex | GrevLex | Block

lex = Lex()
grevlex = GrevLex()


def block_order(split: int, first: MonomialOrder = grevlex, second: MonomialOrder = grevlex) -> Block:
    return Block(split, first, second)


def compare(m1: Exponents, m2: Exponents, order: MonomialOrder) -> int:
    """Total-order comparison of two exponent tuples: -1, 0, or +1."""
    if len(m1) != len(m2):
        raise VariableMismatchError("monomials over different variable lists")
    k1, k2 = order.key(m1), order.key(m2)
    if k1 < k2:
        return -1
    if k1 > k2:
        return 1
    return 0


def monomial_mul(m1: Exponents, m2: Exponents) -> Exponents:
    return tuple(a + b for a, b in zip(m1, m2))


def monomial_divides(m1: Exponents, m2: Exponents) -> bool:
    return all(a <= b for a, b in zip(m1, m2))


def monomial_div(m1: Exponents, m2: Exponents) -> Exponents:
    return tuple(a - b for a, b in zip(m1, m2))


def monomial_lcm(m1: Exponents, m2: Exponents) -> Exponents:
    return tuple(max(a, b) for a, b in zip(m1, m2))


def monomial_degree(m: Exponents) -> int:
    return sum(m)


class VariableMismatchError(ValueError):
    """Operation mixed polynomials over different variable lists, or a
    substitution image was missing."""


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class Polynomial:
    """An exact multivariate polynomial over the rationals.

    Immutable after construction; all operations return new objects, so
    sharing across threads is safe.
    """

    __slots__ = ("ambient", "terms")

    def __init__(self, ambient: VarList, terms: Mapping[Exponents, Fraction] | None = None, *, _clean: bool = False):
        self.ambient = ambient
        if terms is None:
            self.terms: dict[Exponents, Fraction] = {}
        elif _clean:
            self.terms = dict(terms)
        else:
            clean: dict[Exponents, Fraction] = {}
            n = len(ambient)
            for m, c in terms.items():
                c = Fraction(c)
                if c == 0:
                    continue
                if len(m) != n or any(e < 0 for e in m):
                    raise ValueError(f"bad exponent tuple {m} for {ambient}")
                clean[m] = c
            self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ambient: VarList) -> "Polynomial":
        return cls(ambient, None)

    @classmethod
    def constant(cls, ambient: VarList, value) -> "Polynomial":
        c = Fraction(value)
        if c == 0:
            return cls(ambient, None)
        return cls(ambient, {(0,) * len(ambient): c}, _clean=True)

    @classmethod
    def variable(cls, ambient: VarList, name: str) -> "Polynomial":
        i = ambient.index[name]
        exps = [0] * len(ambient)
        exps[i] = 1
        return cls(ambient, {tuple(exps): Fraction(1)}, _clean=True)

    @classmethod
    def one(cls, ambient: VarList) -> "Polynomial":
        return cls.constant(ambient, 1)

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(monomial_degree(m) == 0 for m in self.terms)

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(monomial_degree(m) for m in self.terms)

    def variables_used(self) -> set[int]:
        used: set[int] = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(i)
        return used

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if self.ambient != other.ambient:
            raise VariableMismatchError(
                f"polynomials over different variable lists: {self.ambient} vs {other.ambient}"
            )

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s == 0:
                    del out[m]
                else:
                    out[m] = s
        return Polynomial(self.ambient, out, _clean=True)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = -c
            else:
                s = s - c
                if s == 0:
                    del out[m]
                else:
                    out[m] = s
        return Polynomial(self.ambient, out, _clean=True)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ambient, {m: -c for m, c in self.terms.items()}, _clean=True)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        if not self.terms or not other.terms:
            return Polynomial.zero(self.ambient)
        out: dict[Exponents, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = monomial_mul(m1, m2)
                s = out.get(m)
                if s is None:
                    out[m] = c1 * c2
                else:
                    s = s + c1 * c2
                    if s == 0:
                        del out[m]
                    else:
                        out[m] = s
        return Polynomial(self.ambient, out, _clean=True)

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.one(self.ambient)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return Polynomial.zero(self.ambient)
        return Polynomial(self.ambient, {m: c * k for m, k in self.terms.items()}, _clean=True)

    def mul_term(self, coeff: Fraction, mono: Exponents) -> "Polynomial":
        if coeff == 0:
            return Polynomial.zero(self.ambient)
        return Polynomial(
            self.ambient,
            {monomial_mul(m, mono): c * coeff for m, c in self.terms.items()},
            _clean=True,
        )

    def diff(self, var_index: int) -> "Polynomial":
        """Formal partial derivative with respect to variable ``var_index``."""
        out: dict[Exponents, Fraction] = {}
        for m, c in self.terms.items():
            e = m[var_index]
            if e == 0:
                continue
            dm = list(m)
            dm[var_index] = e - 1
            out[tuple(dm)] = c * e
        return Polynomial(self.ambient, out, _clean=True)

    # -- leading data ------------------------------------------------------

    def leading_monomial(self, order: MonomialOrder) -> Exponents:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder) -> Fraction:
        return self.terms[self.leading_monomial(order)]

    def monic(self, order: MonomialOrder) -> "Polynomial":
        lc = self.leading_coefficient(order)
        if lc == 1:
            return self
        return self.scale(Fraction(1) / lc)

    def primitive(self, order: MonomialOrder) -> "Polynomial":
        """Clear denominators and content; make leading coefficient positive."""
        if not self.terms:
            return self
        from math import gcd

        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            num_gcd = gcd(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // gcd(den_lcm, c.denominator)
        factor = Fraction(den_lcm, num_gcd)
        if self.leading_coefficient(order) < 0:
            factor = -factor
        return self.scale(factor)

    # -- substitution ------------------------------------------------------

    def substitute(self, images: Mapping[str, "Polynomial"], target: VarList | None = None) -> "Polynomial":
        """Apply the algebra map sending each variable to its image.

        Every variable actually appearing in ``self`` must have an image; all
        images must share one target variable list.
        """
        if target is None:
            for img in images.values():
                target = img.ambient
                break
            if target is None:
                if self.is_constant():
                    raise VariableMismatchError("substitute needs a target variable list for constants")
                raise VariableMismatchError("no images given")
        for name, img in images.items():
            if img.ambient != target:
                raise VariableMismatchError(f"image of {name!r} lives over a different variable list")

        image_by_index: dict[int, Polynomial] = {}
        for i in self.variables_used():
            name = self.ambient.names[i]
            if name not in images:
                raise VariableMismatchError(f"no image for variable {name!r}")
            image_by_index[i] = images[name]

        power_cache: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, e: int) -> Polynomial:
            p = power_cache.get((i, e))
            if p is None:
                p = image_by_index[i] ** e
                power_cache[(i, e)] = p
            return p

        result = Polynomial.zero(target)
        for m, c in self.terms.items():
            term = Polynomial.constant(target, c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    # -- equality / hashing / printing -------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.ambient == other.ambient
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.ambient, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)})"


def poly_arith(f: Polynomial, g: Polynomial, op: str) -> Polynomial:
    """Dispatch form of +, -, *; kept for symmetry with the text interface."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown op {op!r}")


def substitute(f: Polynomial, images: Mapping[str, Polynomial], target: VarList | None = None) -> Polynomial:
    return f.substitute(images, target)


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------


def _format_monomial(ambient: VarList, m: Exponents) -> str:
    parts = []
    for name, e in zip(ambient.names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(f: Polynomial) -> str:
    """Canonical text form: terms in descending grevlex order.

    Grammar (round-trips through :func:`parse_polynomial`): terms joined by
    ``+``/``-``; a term is ``coeff``, ``coeff*mono``, or ``mono``; coeff is
    ``int`` or ``int/int``; mono is ``var`` or ``var^int`` factors joined by
    ``*``.
    """
    if not f.terms:
        return "0"
    out: list[str] = []
    for m in sorted(f.terms, key=grevlex.key, reverse=True):
        c = f.terms[m]
        mono = _format_monomial(f.ambient, m)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(out)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


class PolynomialSyntaxError(ValueError):
    """Syntax error in the polynomial grammar, with a column offset."""

    def __init__(self, message: str, column: int):
        super().__init__(f"{message} (column {column})")
        self.column = column
        self.message = message


def parse_polynomial(text: str, ambient: VarList) -> Polynomial:
    """Parse the polynomial text grammar over the given variable list.

    Terms joined by ``+``/``-``; a term is ``coeff``, ``coeff*mono``, or
    ``mono``; coeff is ``int`` or ``int/int``; mono is ``var`` or ``var^int``
    factors joined by ``*``.  Whitespace is insignificant.
    Example: ``3/2*q1^2*p2 - q2 + 1``.
    """
    pos = 0
    n = len(text)

    def skip_ws() -> None:
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def peek() -> str:
        return text[pos] if pos < n else ""

    def read_int() -> int:
        nonlocal pos
        start = pos
        while pos < n and text[pos].isdigit():
            pos += 1
        if start == pos:
            raise PolynomialSyntaxError("expected an integer", start + 1)
        return int(text[start:pos])

    def read_name() -> str:
        nonlocal pos
        start = pos
        if pos < n and (text[pos].isalpha()):
            pos += 1
            while pos < n and (text[pos].isalnum() or text[pos] == "_"):
                pos += 1
            return text[start:pos]
        raise PolynomialSyntaxError("expected a variable name", start + 1)

    def read_factor() -> tuple[str, int]:
        nonlocal pos
        where = pos
        name = read_name()
        if name not in ambient:
            raise PolynomialSyntaxError(f"unknown variable {name!r}", where + 1)
        skip_ws()
        exp = 1
        if peek() == "^":
            pos += 1
            skip_ws()
            exp = read_int()
        return name, exp

    def read_term() -> Polynomial:
        nonlocal pos
        skip_ws()
        coeff = Fraction(1)
        exps = [0] * len(ambient)
        if peek().isdigit():
            num = read_int()
            skip_ws()
            if peek() == "/":
                pos += 1
                skip_ws()
                where = pos
                den = read_int()
                if den == 0:
                    raise PolynomialSyntaxError("zero denominator", where + 1)
                coeff = Fraction(num, den)
            else:
                coeff = Fraction(num)
            skip_ws()
            if peek() == "*":
                pos += 1
                skip_ws()
            else:
                return Polynomial.constant(ambient, coeff)
        elif not peek().isalpha():
            raise PolynomialSyntaxError("expected a term", pos + 1)
        while True:
            name, exp = read_factor()
            exps[ambient.index[name]] += exp
            skip_ws()
            if peek() == "*":
                pos += 1
                skip_ws()
                if not peek().isalpha():
                    raise PolynomialSyntaxError("expected a variable after '*'", pos + 1)
                continue
            break
        return Polynomial(ambient, {tuple(exps): coeff})

    skip_ws()
    if pos >= n:
        raise PolynomialSyntaxError("empty polynomial", pos + 1)
    sign = 1
    if peek() == "+":
        pos += 1
    elif peek() == "-":
        sign = -1
        pos += 1
    result = read_term().scale(sign)
    skip_ws()
    while pos < n:
        op = peek()
        if op == "+":
            sign = 1
        elif op == "-":
            sign = -1
        else:
            raise PolynomialSyntaxError(f"unexpected character {op!r}", pos + 1)
        pos += 1
        result = result + read_term().scale(sign)
        skip_ws()
    return result

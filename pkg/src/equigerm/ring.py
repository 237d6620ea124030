"""Multivariate polynomials over Q with the two monomial orders the engine needs.

Everything downstream (standard bases, arc pullbacks, invariants) works with
exact rational arithmetic.  A polynomial is stored in canonical form: terms
sorted in decreasing local order, zero coefficients dropped.  The local order
is negative degree reverse lexicographic (1 is the largest monomial), the
right order for computations in the local ring at the origin; the global
order is plain degree reverse lexicographic.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


class ParseError(ValueError):
    """Malformed textual input; carries a 1-based source location."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.reason = message
        self.line = line
        self.column = column


def local_key(mono: Monomial):
    """Sort key for the local order; larger key means larger monomial.

    a > b iff deg a < deg b, or degrees tie and the last nonzero entry of
    a - b is negative.  In particular 1 > v > v^2 and v > w for v first.
    """
    return (-sum(mono), tuple(-e for e in reversed(mono)))


def global_key(mono: Monomial):
    """Sort key for degree reverse lexicographic order (1 is smallest)."""
    return (sum(mono), tuple(-e for e in reversed(mono)))


class RingSpec:
    """A named tuple of variables; the coefficient field is always Q here.

    Finite-field arithmetic is an engine-level option (see basis.BasisConfig):
    user-facing polynomials stay rational so reports are exact.
    """

    __slots__ = ("variables", "_index")

    def __init__(self, variables: Iterable[str]):
        variables = tuple(variables)
        index: dict[str, int] = {}
        for i, name in enumerate(variables):
            if not _NAME_RE.fullmatch(name):
                raise ValueError(f"bad variable name {name!r}")
            if name in index:
                raise ValueError(f"duplicate variable {name!r}")
            index[name] = i
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "_index", index)

    def __setattr__(self, name, value):
        raise AttributeError("RingSpec is immutable")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"{name!r} is not a variable of {self}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __eq__(self, other):
        return isinstance(other, RingSpec) and self.variables == other.variables

    def __hash__(self):
        return hash(self.variables)

    def __repr__(self):
        return f"RingSpec({', '.join(self.variables)})"


def _as_fraction(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected int or Fraction, got {type(value).__name__}")


class Polynomial:
    """Immutable polynomial; `terms` is the canonical decreasing-local-order form."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingSpec, terms: Iterable[tuple[Monomial, Scalar]]):
        acc: dict[Monomial, Fraction] = {}
        n = ring.nvars
        for mono, coeff in terms:
            mono = tuple(mono)
            if len(mono) != n or any(e < 0 for e in mono):
                raise ValueError(f"bad monomial {mono} for {ring}")
            c = acc.get(mono, _ZERO_FRACTION) + _as_fraction(coeff)
            if c:
                acc[mono] = c
            else:
                acc.pop(mono, None)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(
            self,
            "terms",
            tuple(sorted(acc.items(), key=lambda t: local_key(t[0]), reverse=True)),
        )
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def constant(ring: RingSpec, value: Scalar) -> "Polynomial":
        value = _as_fraction(value)
        if not value:
            return Polynomial(ring, ())
        return Polynomial(ring, (((0,) * ring.nvars, value),))

    @staticmethod
    def variable(ring: RingSpec, name: str) -> "Polynomial":
        mono = [0] * ring.nvars
        mono[ring.index(name)] = 1
        return Polynomial(ring, ((tuple(mono), Fraction(1)),))

    @staticmethod
    def monomial(ring: RingSpec, mono: Monomial, coeff: Scalar = 1) -> "Polynomial":
        return Polynomial(ring, ((tuple(mono), coeff),))

    # -- predicates and views ----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        zero = (0,) * self.ring.nvars
        for mono, coeff in self.terms:
            if mono == zero:
                return coeff
        return _ZERO_FRACTION

    def total_degree(self) -> int:
        """Largest total degree of a term; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m, _ in self.terms)

    def order(self) -> int:
        """Smallest total degree of a term (the local multiplicity of vanishing).

        Returns -1 for the zero polynomial, by analogy with total_degree.
        """
        if not self.terms:
            return -1
        # terms are sorted in decreasing local order: the first has least degree
        return sum(self.terms[0][0])

    def leading_term_local(self) -> tuple[Monomial, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return self.terms[0]

    def coefficient(self, mono: Monomial) -> Fraction:
        for m, c in self.terms:
            if m == tuple(mono):
                return c
        return _ZERO_FRACTION

    # -- arithmetic ----------------------------------------------------------

    def _check_same_ring(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.ring, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_same_ring(other)
        return Polynomial(self.ring, self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.ring, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                return Polynomial(self.ring, ())
            return Polynomial(self.ring, tuple((m, co * c) for m, co in self.terms))
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_same_ring(other)
        acc: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = tuple(a + b for a, b in zip(m1, m2))
                c = acc.get(m, _ZERO_FRACTION) + c1 * c2
                if c:
                    acc[m] = c
                else:
                    acc.pop(m, None)
        return Polynomial(self.ring, tuple(acc.items()))

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.constant(self.ring, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.ring, self.terms))
            object.__setattr__(self, "_hash", h)
        return h

    # -- calculus and substitution -----------------------------------------

    def derivative(self, var: str) -> "Polynomial":
        i = self.ring.index(var)
        out = []
        for mono, coeff in self.terms:
            e = mono[i]
            if e:
                m = list(mono)
                m[i] = e - 1
                out.append((tuple(m), coeff * e))
        return Polynomial(self.ring, out)

    def substitute(
        self,
        target: RingSpec,
        images: Mapping[str, Union["Polynomial", Scalar]],
    ) -> "Polynomial":
        """Ring map determined by `images`; unmapped variables must exist in
        `target` and go to themselves."""
        cache: dict[str, Polynomial] = {}
        for name in self.ring.variables:
            if name in images:
                img = images[name]
                if isinstance(img, (int, Fraction)):
                    img = Polynomial.constant(target, img)
                elif img.ring != target:
                    raise ValueError(f"image of {name!r} lives in {img.ring}, not {target}")
                cache[name] = img
            else:
                cache[name] = Polynomial.variable(target, name)
        result = Polynomial.constant(target, 0)
        for mono, coeff in self.terms:
            term = Polynomial.constant(target, coeff)
            for name, e in zip(self.ring.variables, mono):
                if e:
                    term = term * cache[name] ** e
            result = result + term
        return result

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        value = _ZERO_FRACTION
        for mono, coeff in self.terms:
            v = coeff
            for name, e in zip(self.ring.variables, mono):
                if e:
                    v = v * _as_fraction(point[name]) ** e
            value += v
        return value

    # -- printing ------------------------------------------------------------

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"<{format_polynomial(self)}>"


_ZERO_FRACTION = Fraction(0)


def format_polynomial(p: Polynomial) -> str:
    """Canonical text form: terms in decreasing local order.

    Round-trips through parse_polynomial for every polynomial.
    """
    if not p.terms:
        return "0"
    pieces = []
    for mono, coeff in p.terms:
        factors = []
        for name, e in zip(p.ring.variables, mono):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(coeff)
        if not factors or mag != 1:
            factors.insert(0, _format_fraction(mag))
        body = "*".join(factors)
        if not pieces:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(pieces)


def _format_fraction(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# -- parsing ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()/])"
)


class _Tokenizer:
    def __init__(self, text: str, line: int, column: int):
        self.text = text
        self.line = line
        self.column = column  # 1-based column of text[0] in the source line
        self.pos = 0
        self.tokens: list[tuple[str, str, int]] = []  # (kind, value, column)
        self._scan()
        self.cursor = 0

    def _scan(self):
        pos = 0
        while pos < len(self.text):
            m = _TOKEN_RE.match(self.text, pos)
            if not m:
                raise ParseError(
                    f"unexpected character {self.text[pos]!r}",
                    self.line,
                    self.column + pos,
                )
            if m.lastgroup != "ws":
                self.tokens.append((m.lastgroup, m.group(), self.column + pos))
            pos = m.end()
        self.tokens.append(("end", "", self.column + len(self.text)))

    def peek(self):
        return self.tokens[self.cursor]

    def advance(self):
        tok = self.tokens[self.cursor]
        if tok[0] != "end":
            self.cursor += 1
        return tok

    def error(self, message: str, tok=None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, self.line, tok[2])


def parse_polynomial(
    text: str, ring: RingSpec, *, line: int = 1, column: int = 1
) -> Polynomial:
    """Parse `text` in the variables of `ring`.

    Grammar: integers, rationals p/q, + - * ^, parentheses.  No implicit
    multiplication, no division except between integer literals.  Raises
    ParseError with a 1-based (line, column) location.
    """
    tz = _Tokenizer(text, line, column)
    poly = _parse_expr(tz, ring)
    tok = tz.peek()
    if tok[0] != "end":
        raise tz.error(f"unexpected {tok[1]!r}")
    return poly


def _parse_expr(tz: _Tokenizer, ring: RingSpec) -> Polynomial:
    sign = 1
    kind, value, _ = tz.peek()
    if kind == "op" and value in "+-":
        tz.advance()
        sign = -1 if value == "-" else 1
    result = _parse_term(tz, ring) * sign
    while True:
        kind, value, _ = tz.peek()
        if kind == "op" and value in "+-":
            tz.advance()
            term = _parse_term(tz, ring)
            result = result + term if value == "+" else result - term
        else:
            return result


def _parse_term(tz: _Tokenizer, ring: RingSpec) -> Polynomial:
    result = _parse_factor(tz, ring)
    while True:
        kind, value, _ = tz.peek()
        if kind == "op" and value == "*":
            tz.advance()
            result = result * _parse_factor(tz, ring)
        else:
            return result


def _parse_factor(tz: _Tokenizer, ring: RingSpec) -> Polynomial:
    base = _parse_base(tz, ring)
    kind, value, _ = tz.peek()
    if kind == "op" and value == "^":
        tz.advance()
        ekind, evalue, _ = tz.peek()
        if ekind != "int":
            raise tz.error("exponent must be a nonnegative integer")
        tz.advance()
        return base ** int(evalue)
    return base


def _parse_base(tz: _Tokenizer, ring: RingSpec) -> Polynomial:
    kind, value, col = tz.peek()
    if kind == "int":
        tz.advance()
        numerator = int(value)
        kind2, value2, _ = tz.peek()
        if kind2 == "op" and value2 == "/":
            tz.advance()
            dkind, dvalue, _ = tz.peek()
            if dkind != "int":
                raise tz.error("denominator must be an integer literal")
            tz.advance()
            if int(dvalue) == 0:
                raise tz.error("zero denominator")
            return Polynomial.constant(ring, Fraction(numerator, int(dvalue)))
        return Polynomial.constant(ring, numerator)
    if kind == "name":
        if value not in ring:
            raise tz.error(f"unknown variable {value!r}")
        tz.advance()
        return Polynomial.variable(ring, value)
    if kind == "op" and value == "(":
        tz.advance()
        inner = _parse_expr(tz, ring)
        ckind, cvalue, _ = tz.peek()
        if not (ckind == "op" and cvalue == ")"):
            raise tz.error("expected ')'")
        tz.advance()
        return inner
    if kind == "op" and value == "/":
        raise tz.error("division is only allowed between integer literals")
    if kind == "end":
        raise tz.error("unexpected end of input")
    raise tz.error(f"unexpected {value!r}")

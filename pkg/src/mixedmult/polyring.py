"""Exact multivariate polynomials over QQ or a prime field, monomial orders, and a parser.

Rings are presented as k[x1..xn]/H with homogeneous relations H; all values
are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "FieldSpec", "QQ", "prime_field",
    "MonomialOrder", "GREVLEX", "LEX", "elimination_order", "compare_monomials",
    "mono_mul", "mono_div", "mono_divides", "mono_lcm", "mono_degree",
    "monomials_of_degree",
    "Polynomial", "RingPresentation", "ParseError", "parse_polynomial",
]


def _is_prime(n: int) -> bool:
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


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: the rationals (char == 0) or Z/p for a prime p.

    Rational coefficients are normalized Fractions with arbitrary-precision
    integers; prime-field elements are ints in [0, p), displayed with the
    symmetric representative of least absolute value.
    """

    char: int = 0

    def __post_init__(self):
        if self.char != 0 and not _is_prime(self.char):
            raise ValueError(f"field characteristic must be 0 or a prime, got {self.char}")

    def coerce(self, value):
        """Map an int, Fraction, or field element to canonical form."""
        if self.char == 0:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % self.char == 0:
                raise ValueError(f"denominator {value.denominator} is zero mod {self.char}")
            return value.numerator * pow(value.denominator, -1, self.char) % self.char
        return int(value) % self.char

    def reduce(self, value):
        """Renormalize after native int/Fraction arithmetic."""
        return value if self.char == 0 else value % self.char

    def div(self, a, b):
        if self.char == 0:
            return Fraction(a) / b
        b %= self.char
        if b == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.char})")
        return a * pow(b, -1, self.char) % self.char

    def display(self, value) -> str:
        if self.char == 0:
            return str(value)
        v = value % self.char
        if v > self.char // 2:
            v -= self.char
        return str(v)

    def __str__(self):
        return "QQ" if self.char == 0 else f"Fp({self.char})"


QQ = FieldSpec(0)


def prime_field(p: int) -> FieldSpec:
    return FieldSpec(p)


# ---------------------------------------------------------------------------
# Monomials are plain exponent tuples.

def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a, b):
    """True if a | b, i.e. a's exponents are <= b's componentwise."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_div(a, b):
    """a / b; caller must ensure b | a."""
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_degree(a):
    return sum(a)


def monomials_of_degree(nvars: int, degree: int):
    """All exponent tuples of the given total degree, lexicographic order."""
    if nvars == 1:
        yield (degree,)
        return
    for head in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - head):
            yield (head,) + rest


def _grevlex_key(mono):
    return (sum(mono), tuple(-e for e in reversed(mono)))


def _grevlex_neg_key(mono):
    return (-sum(mono), tuple(reversed(mono)))


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order: grevlex, lex, or an elimination block order.

    Elimination orders compare the first `block` variables by grevlex, then
    the remaining ones; any monomial involving a leading variable is larger
    than any monomial free of them.
    """

    kind: str
    block: int = 0

    def key(self, mono):
        if self.kind == "grevlex":
            return _grevlex_key(mono)
        if self.kind == "lex":
            return mono
        return (_grevlex_key(mono[:self.block]), _grevlex_key(mono[self.block:]))

    def neg_key(self, mono):
        """A key whose ascending order is the descending order of `key`."""
        if self.kind == "grevlex":
            return _grevlex_neg_key(mono)
        if self.kind == "lex":
            return tuple(-e for e in mono)
        return (_grevlex_neg_key(mono[:self.block]), _grevlex_neg_key(mono[self.block:]))

    def __str__(self):
        if self.kind == "elim":
            return f"elim({self.block})"
        return self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def elimination_order(k: int) -> MonomialOrder:
    if k < 0:
        raise ValueError("elimination block size must be >= 0")
    return MonomialOrder("elim", k)


def compare_monomials(a, b, order: MonomialOrder) -> int:
    """Three-way comparison: -1 if a < b, 0 if equal, 1 if a > b."""
    if len(a) != len(b):
        raise ValueError(f"exponent vectors have different lengths: {len(a)} vs {len(b)}")
    ka, kb = order.key(a), order.key(b)
    return (ka > kb) - (ka < kb)


# ---------------------------------------------------------------------------
# Polynomials.

class Polynomial:
    """Element of a polynomial ring: a map from exponent tuples to nonzero scalars.

    Arithmetic is in the free polynomial ring; quotient relations are applied
    only through explicit normal forms, never implicitly.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        cleaned = {}
        coerce = ring.field.coerce
        for mono, coeff in terms.items():
            c = coerce(coeff)
            if c != 0:
                cleaned[tuple(mono)] = c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def _raw(cls, ring, terms):
        """Trusted constructor: terms already canonical (no zeros, coerced)."""
        self = object.__new__(cls)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", terms)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    def _check_ring(self, other):
        if self.ring != other.ring:
            raise ValueError("polynomials come from different ambient rings")

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    def __add__(self, other):
        other = self._coerce_operand(other)
        self._check_ring(other)
        reduce = self.ring.field.reduce
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = reduce(out.get(m, 0) + c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(self.ring, out)

    def __sub__(self, other):
        other = self._coerce_operand(other)
        self._check_ring(other)
        reduce = self.ring.field.reduce
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = reduce(out.get(m, 0) - c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(self.ring, out)

    def __neg__(self):
        reduce = self.ring.field.reduce
        return Polynomial._raw(self.ring, {m: reduce(-c) for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        self._check_ring(other)
        reduce = self.ring.field.reduce
        out = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                out[m] = out.get(m, 0) + ca * cb
        return Polynomial._raw(self.ring, {m: reduce(c) for m, c in out.items() if reduce(c)})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial exponents must be nonnegative integers")
        result = self.ring.one()
        for _ in range(n):
            result = result * self
        return result

    def scaled(self, c):
        c = self.ring.field.coerce(c)
        if c == 0:
            return self.ring.zero()
        reduce = self.ring.field.reduce
        return Polynomial._raw(self.ring, {m: reduce(v * c) for m, v in self.terms.items()})

    def _coerce_operand(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def leading(self, order: MonomialOrder = GREVLEX):
        """(monomial, coefficient) of the largest term under `order`."""
        if not self.terms:
            raise ValueError("the zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def monic(self, order: MonomialOrder = GREVLEX):
        if not self.terms:
            return self
        _, lc = self.leading(order)
        if lc == 1:
            return self
        field = self.ring.field
        return Polynomial._raw(self.ring, {m: field.div(c, lc) for m, c in self.terms.items()})

    def in_ring(self, ring) -> "Polynomial":
        """Reinterpret the same term data in another presentation (same variables)."""
        if ring.variables != self.ring.variables or ring.field != self.ring.field:
            raise ValueError("cannot reinterpret polynomial: variables or field differ")
        return Polynomial._raw(ring, dict(self.terms))

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def __str__(self):
        return _poly_str(self)

    def __repr__(self):
        return f"Polynomial({_poly_str(self)!r})"


def _term_str(ring, mono, coeff) -> str:
    field = ring.field
    text = field.display(coeff)
    negative = text.startswith("-")
    if negative:
        text = text[1:]
    factors = [f"{name}^{e}" if e > 1 else name
               for name, e in zip(ring.variables, mono) if e > 0]
    if not factors:
        body = text
    elif text == "1":
        body = "*".join(factors)
    else:
        body = "*".join([text] + factors)
    return ("-" if negative else "+"), body


def _poly_str(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    pieces = []
    for mono, coeff in p.sorted_terms():
        sign, body = _term_str(p.ring, mono, coeff)
        if not pieces:
            pieces.append(body if sign == "+" else "-" + body)
        else:
            pieces.append(("+ " if sign == "+" else "- ") + body)
    return " ".join(pieces)


# ---------------------------------------------------------------------------
# Ring presentations.

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


class RingPresentation:
    """A standard-graded quotient k[x1..xn]/H given by homogeneous relations H.

    The presentation with a degree-0 relation is the zero ring; it is legal
    only as the target of dimension and length computations.
    """

    __slots__ = ("field", "variables", "relations", "_free", "_relations_gb")

    def __init__(self, field: FieldSpec, variables, relations=()):
        variables = tuple(variables)
        if not variables:
            raise ValueError("a ring needs at least one variable")
        if len(set(variables)) != len(variables):
            raise ValueError("variable names must be distinct")
        for name in variables:
            if not _NAME_RE.match(name):
                raise ValueError(f"bad variable name: {name!r}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "_relations_gb", None)
        relations = tuple(relations)
        free = RingPresentation(field, variables) if relations else self
        object.__setattr__(self, "_free", free)
        bound = []
        for rel in relations:
            if rel.ring.variables != variables or rel.ring.field != field:
                raise ValueError("relation is over a different variable set or field")
            rel = Polynomial._raw(free, dict(rel.terms))
            if not rel:
                raise ValueError("ring relations must be nonzero")
            if not rel.is_homogeneous():
                raise ValueError(f"ring relations must be homogeneous: {rel}")
            bound.append(rel)
        object.__setattr__(self, "relations", tuple(bound))

    def __setattr__(self, name, value):
        raise AttributeError("RingPresentation is immutable")

    @property
    def free(self) -> "RingPresentation":
        """The same variables with no relations."""
        return self._free

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def is_zero_ring(self) -> bool:
        return any(r.degree() == 0 for r in self.relations)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, RingPresentation):
            return NotImplemented
        return (self.field == other.field
                and self.variables == other.variables
                and len(self.relations) == len(other.relations)
                and all(a.terms == b.terms for a, b in zip(self.relations, other.relations)))

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None

    def zero(self) -> Polynomial:
        return Polynomial._raw(self, {})

    def one(self) -> Polynomial:
        return self.constant(1)

    def constant(self, c) -> Polynomial:
        return Polynomial(self, {(0,) * self.nvars: c})

    def var(self, name: str) -> Polynomial:
        try:
            i = self.variables.index(name)
        except ValueError:
            raise ValueError(f"unknown variable {name!r}") from None
        mono = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, {mono: 1})

    def gens(self):
        """The variable polynomials, in declaration order."""
        return tuple(self.var(name) for name in self.variables)

    def monomial(self, exponents, coeff=1) -> Polynomial:
        exponents = tuple(exponents)
        if len(exponents) != self.nvars or any(e < 0 for e in exponents):
            raise ValueError(f"bad exponent vector {exponents}")
        return Polynomial(self, {exponents: coeff})

    def parse(self, text: str) -> Polynomial:
        return parse_polynomial(text, self)

    def quotient(self, extra_relations) -> "RingPresentation":
        """Append relations, accumulating the presentation literally."""
        return RingPresentation(self.field, self.variables, self.relations + tuple(extra_relations))

    def __str__(self):
        base = f"{self.field}[{','.join(self.variables)}]"
        if not self.relations:
            return base
        return base + " / (" + ", ".join(str(r) for r in self.relations) + ")"

    def __repr__(self):
        return f"RingPresentation({self})"


# ---------------------------------------------------------------------------
# Parser.  Grammar: integer literals, variables, + - * ^ and / by an integer
# constant, unary minus, parentheses.  Implicit multiplication is an error.

class ParseError(ValueError):
    """Syntax or semantic error in polynomial text, with a character offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([-+*/^(),])|(\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        if m.group(4):
            raise ParseError(f"unexpected character {m.group(4)!r}", m.start(4))
        if m.group(1):
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2):
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: RingPresentation):
        self.ring = ring
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, value, pos = self.next()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse(self) -> Polynomial:
        p = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {value!r}", pos)
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.next()
                q = self.term()
                p = p + q if value == "+" else p - q
            else:
                return p

    def term(self) -> Polynomial:
        p = self.factor()
        while True:
            kind, value, pos = self.peek()
            if kind == "op" and value == "*":
                self.next()
                p = p * self.factor()
            elif kind == "op" and value == "/":
                self.next()
                q = self.factor()
                if q.degree() > 0:
                    raise ParseError("division is only allowed by integer constants", pos)
                if not q:
                    raise ParseError("division by zero", pos)
                c = next(iter(q.terms.values()))
                try:
                    p = p.scaled(self.ring.field.div(1, c))
                except ZeroDivisionError:
                    raise ParseError(f"constant {c} is not invertible in {self.ring.field}", pos) from None
            elif kind in ("int", "name"):
                raise ParseError("implicit multiplication is not allowed", pos)
            else:
                return p

    def factor(self) -> Polynomial:
        kind, value, pos = self.peek()
        if kind == "op" and value == "-":
            self.next()
            return -self.factor()
        return self.power()

    def power(self) -> Polynomial:
        p = self.atom()
        kind, value, pos = self.peek()
        if kind == "op" and value == "^":
            self.next()
            kind, value, pos = self.next()
            if kind != "int":
                raise ParseError("exponent must be a nonnegative integer literal", pos)
            return p ** int(value)
        return p

    def atom(self) -> Polynomial:
        kind, value, pos = self.next()
        if kind == "int":
            return self.ring.constant(int(value))
        if kind == "name":
            try:
                return self.ring.var(value)
            except ValueError:
                raise ParseError(f"unknown variable {value!r}", pos) from None
        if kind == "op" and value == "(":
            p = self.expr()
            self.expect_op(")")
            return p
        raise ParseError(f"unexpected {value!r}" if value else "unexpected end of input", pos)


def parse_polynomial(text: str, ring: RingPresentation) -> Polynomial:
    """Parse polynomial text; parsing, printing, and re-parsing is a fixed point."""
    return _Parser(text, ring).parse()

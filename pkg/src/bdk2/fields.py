"""Ground fields, their places, valuations and residue fields.

Two kinds of field are supported: the rationals ``Q`` (elements are
``fractions.Fraction``) and rational function fields ``F_p(t)`` (elements are
``RatFunc``).  Places over Q are the primes plus the real place; places of
F_p(t) are monic irreducible polynomials plus the place at infinity.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .poly import Poly, factor as factor_poly, invmod, is_irreducible

MAX_CHARACTERISTIC = 97


class ParseError(ValueError):
    """Raised for malformed element, place, field or matrix syntax."""

    def __init__(self, message: str, token: str | None = None):
        super().__init__(message if token is None else f"{message}: {token!r}")
        self.token = token


# -- places -------------------------------------------------------------------

@dataclass(frozen=True)
class Place:
    kind: str  # "finite", "inf" (function fields) or "real" (Q)
    prime: int | None = None
    poly: Poly | None = None

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def degree(self) -> int:
        if self.poly is not None:
            return self.poly.deg
        return 1

    def sort_key(self):
        if self.kind == "finite":
            if self.prime is not None:
                return (0, self.prime, ())
            return (0, self.poly.deg, tuple(reversed(self.poly.coeffs)))
        return (1, 0, ())

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        if self.kind == "inf":
            return "inf"
        if self.kind == "real":
            return "real"
        if self.prime is not None:
            return f"p:{self.prime}"
        return str(self.poly)


INF = Place("inf")
REAL = Place("real")


# -- residue fields -----------------------------------------------------------

@dataclass(frozen=True)
class ResidueField:
    p: int
    modulus: Poly | None = None  # None: the prime field itself

    @property
    def degree(self) -> int:
        return 1 if self.modulus is None else self.modulus.deg

    @property
    def size(self) -> int:
        return self.p ** self.degree

    def __call__(self, value) -> "ResidueElement":
        if isinstance(value, int):
            value = Poly.const(self.p, value)
        if self.modulus is not None:
            value = value % self.modulus
        elif value.deg > 0:
            raise ValueError("prime residue field needs a constant")
        return ResidueElement(self, value)

    def one(self) -> "ResidueElement":
        return self(1)

    def elements(self):
        """All nonzero elements, in a fixed order."""
        d = self.degree
        for n in range(1, self.size):
            digits = []
            for _ in range(d):
                n, r = divmod(n, self.p)
                digits.append(r)
            yield self(Poly(self.p, digits))

    @property
    def generator(self) -> "ResidueElement":
        return _residue_generator(self)

    def log(self, x: "ResidueElement") -> int:
        """Discrete logarithm of x to the base ``generator``."""
        return _residue_log_table(self)[x.value]

    def __str__(self):
        if self.modulus is None:
            return f"F{self.p}"
        return f"F{self.p}[t]/({self.modulus})"


@lru_cache(maxsize=None)
def _residue_generator(f: ResidueField) -> "ResidueElement":
    order = f.size - 1
    primes = _prime_factors(order)
    for g in f.elements():
        if all(g ** (order // q) != f.one() for q in primes):
            return g
    raise AssertionError("multiplicative group of a finite field is cyclic")


@lru_cache(maxsize=None)
def _residue_log_table(f: ResidueField) -> dict:
    g = _residue_generator(f)
    table = {}
    x = f.one()
    for k in range(f.size - 1):
        table[x.value] = k
        x = x * g
    return table


@dataclass(frozen=True)
class ResidueElement:
    field: ResidueField
    value: Poly

    def _check(self, other):
        if not isinstance(other, ResidueElement) or other.field != self.field:
            raise ValueError("residue elements from different fields")

    def __mul__(self, other):
        self._check(other)
        v = self.value * other.value
        if self.field.modulus is not None:
            v = v % self.field.modulus
        return ResidueElement(self.field, v)

    def inverse(self) -> "ResidueElement":
        if self.value.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        if self.field.modulus is None:
            return ResidueElement(self.field, Poly.const(self.field.p, pow(self.value.lc, -1, self.field.p)))
        return ResidueElement(self.field, invmod(self.value, self.field.modulus))

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if self.field.modulus is None:
            c = self.value.lc if self.value else 0
            return ResidueElement(self.field, Poly.const(self.field.p, pow(c, n, self.field.p)))
        return ResidueElement(self.field, self.value.powmod(n, self.field.modulus))

    def __neg__(self):
        return ResidueElement(self.field, -self.value)

    def is_one(self) -> bool:
        return self.value == 1

    def order(self) -> int:
        n = self.field.size - 1
        for q in _prime_factors(n):
            while n % q == 0 and self ** (n // q) == self.field.one():
                n //= q
        return n

    def norm(self) -> int:
        """Norm down to the prime field, as an integer in [1, p)."""
        f = self.field
        e = (f.size - 1) // (f.p - 1)
        return (self ** e).value.lc

    def __str__(self):
        return str(self.value)


# -- integer helpers ----------------------------------------------------------

@lru_cache(maxsize=65536)
def factor_int(n: int) -> tuple[tuple[int, int], ...]:
    """Trial-division factorization of |n| (n != 0)."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def _prime_factors(n: int) -> list[int]:
    return [q for q, _ in factor_int(n)] if n > 1 else []


def is_prime(n: int) -> bool:
    return n >= 2 and factor_int(n) == ((n, 1),)


def primitive_root(p: int) -> int:
    if p == 2:
        return 1
    qs = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise AssertionError(p)


# -- rational functions -------------------------------------------------------

class RatFunc:
    """An element num/den of F_p(t): coprime, den monic."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly | None = None, *, _normalized: bool = False):
        if den is None:
            den = Poly.const(num.p, 1)
        if not _normalized:
            if den.is_zero():
                raise ZeroDivisionError("zero denominator")
            from .poly import gcd
            g = gcd(num, den)
            if g.deg > 0:
                num, den = num // g, den // g
            c = pow(den.lc, -1, den.p)
            num, den = num.scale(c), den.scale(c)
            if num.is_zero():
                den = Poly.const(num.p, 1)
        self.num = num
        self.den = den
        self._hash = None

    @property
    def p(self) -> int:
        return self.num.p

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, int):
            return RatFunc(Poly.const(self.p, other))
        if isinstance(other, Poly):
            return RatFunc(other)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _normalized=True)

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
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n, _normalized=True)

    def __bool__(self):
        return not self.num.is_zero()

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc({self})"


# -- expression parsing -------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(t)|([-+*/^()]))")


def _tokenize(text: str):
    text = text.replace("−", "-")
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected token", text[pos:].strip().split()[0][:8])
        out.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, field: "Field", text: str):
        self.field = field
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.text)
        self.i += 1
        return tok

    def parse(self):
        if not self.toks:
            raise ParseError("empty element", self.text)
        value = self.expr()
        if self.peek() is not None:
            raise ParseError("unexpected token", self.peek())
        return value

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if self.field.is_zero(rhs):
                    raise ParseError("division by zero", self.text)
                value = value / rhs
        return value

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            tok = self.take()
            if not tok.isdigit():
                raise ParseError("exponent must be an integer", tok)
            n = sign * int(tok)
            if n < 0 and self.field.is_zero(base):
                raise ParseError("division by zero", self.text)
            base = base ** n
        return base

    def atom(self):
        tok = self.take()
        if tok.isdigit():
            return self.field.from_int(int(tok))
        if tok == "t":
            return self.field.gen()
        if tok == "(":
            value = self.expr()
            if self.take() != ")":
                raise ParseError("expected ')'", self.text)
            return value
        raise ParseError("unexpected token", tok)


# -- fields -------------------------------------------------------------------

class Field:
    kind: str
    p: int | None
    name: str

    def __eq__(self, other):
        return isinstance(other, Field) and (self.kind, self.p) == (other.kind, other.p)

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return f"<field {self.name}>"

    def parse(self, text: str):
        return _Parser(self, str(text)).parse()

    def format(self, x) -> str:
        return str(x)

    def places_of(self, u) -> list[tuple[Place, int]]:
        """All places where u has nonzero valuation (the real place is never listed)."""
        _, facs = self.factor(u)
        return list(facs)

    def valuation(self, u, place: Place) -> int:
        if self.is_zero(u):
            raise ValueError("valuation of zero")
        self._check_place(place)
        return self._valuation(u, place)

    def residue(self, u, place: Place) -> ResidueElement:
        """Image of a unit u in the residue field at ``place``."""
        if self.is_zero(u):
            raise ValueError("residue of zero")
        if self.valuation(u, place) != 0:
            raise ValueError(f"{self.format(u)} is not a unit at {place}")
        return self._residue(u, place)

    def unit_residue(self, u, place: Place) -> ResidueElement:
        """Residue of u divided by the uniformizer to the power val(u)."""
        v = self.valuation(u, place)
        return self._residue(u / self.uniformizer(place) ** v, place)


class RationalField(Field):
    kind = "rational"
    p = None
    name = "Q"

    def from_int(self, n: int):
        return Fraction(n)

    def gen(self):
        raise ParseError("the rationals have no generator", "t")

    def one(self):
        return Fraction(1)

    def is_zero(self, x) -> bool:
        return x == 0

    def format(self, x) -> str:
        return str(Fraction(x))

    def _check_place(self, place: Place):
        if not (place.kind == "finite" and place.prime is not None):
            raise ValueError(f"{place} is not a finite place of Q")

    def factor(self, u):
        """(sign, ((Place, exponent), ...)) with u = sign * prod p^e."""
        if u == 0:
            raise ValueError("cannot factor zero")
        u = Fraction(u)
        facs = {}
        for q, e in factor_int(u.numerator) if abs(u.numerator) > 1 else ():
            facs[q] = facs.get(q, 0) + e
        for q, e in factor_int(u.denominator) if u.denominator > 1 else ():
            facs[q] = facs.get(q, 0) - e
        sign = Fraction(1 if u > 0 else -1)
        return sign, tuple((Place("finite", prime=q), e) for q, e in sorted(facs.items()) if e)

    def _valuation(self, u, place):
        u = Fraction(u)
        q = place.prime
        v = 0
        n, d = u.numerator, u.denominator
        while n % q == 0:
            n //= q
            v += 1
        while d % q == 0:
            d //= q
            v -= 1
        return v

    def uniformizer(self, place: Place):
        self._check_place(place)
        return Fraction(place.prime)

    def residue_field(self, place: Place) -> ResidueField:
        self._check_place(place)
        return ResidueField(place.prime)

    def _residue(self, u, place):
        u = Fraction(u)
        q = place.prime
        return self.residue_field(place)(u.numerator * pow(u.denominator, -1, q) % q)

    def lift(self, r: ResidueElement, place: Place):
        return Fraction(r.value.lc if r.value else 0)

    def parse_place(self, text: str) -> Place:
        text = text.strip()
        if text == "real":
            return REAL
        m = re.fullmatch(r"p:(\d+)", text)
        if not m or not is_prime(int(m.group(1))):
            raise ParseError("not a place of Q", text)
        return Place("finite", prime=int(m.group(1)))

    # torsion of Q^x is {+1, -1}
    torsion_order = 2

    def torsion_generator(self):
        return Fraction(-1)

    def torsion_log(self, c) -> int:
        return 0 if c == 1 else 1

    def random_element(self, rng: random.Random, size: int = 30, nonzero: bool = True):
        while True:
            x = Fraction(rng.randint(-size, size), rng.randint(1, size))
            if x or not nonzero:
                return x


class FunctionField(Field):
    kind = "function"

    def __init__(self, p: int, max_characteristic: int = MAX_CHARACTERISTIC):
        if not is_prime(p) or p > max_characteristic:
            raise ParseError("characteristic must be a prime at most %d" % max_characteristic, str(p))
        self.p = p
        self.name = f"F{p}t"

    def from_int(self, n: int):
        return RatFunc(Poly.const(self.p, n))

    def gen(self):
        return RatFunc(Poly.x(self.p))

    def one(self):
        return self.from_int(1)

    def is_zero(self, x) -> bool:
        return not x

    def poly(self, coeffs) -> RatFunc:
        return RatFunc(Poly(self.p, coeffs))

    def _check_place(self, place: Place):
        if place.kind == "inf":
            return
        if place.kind != "finite" or place.poly is None or place.poly.p != self.p:
            raise ValueError(f"{place} is not a place of {self.name}")

    def factor(self, u):
        """(constant, ((Place, exponent), ...)) including the place at infinity."""
        if not u:
            raise ValueError("cannot factor zero")
        lc_n, fn = factor_poly(u.num)
        lc_d, fd = factor_poly(u.den)
        facs = {}
        for g, e in fn:
            facs[g] = facs.get(g, 0) + e
        for g, e in fd:
            facs[g] = facs.get(g, 0) - e
        out = [(Place("finite", poly=g), e) for g, e in sorted(facs.items(), key=lambda kv: kv[0].sort_key()) if e]
        vinf = u.den.deg - u.num.deg
        if vinf:
            out.append((INF, vinf))
        return self.from_int(lc_n * pow(lc_d, -1, self.p)), tuple(out)

    def _valuation(self, u, place):
        if place.kind == "inf":
            return u.den.deg - u.num.deg
        pi = place.poly
        v = 0
        n = u.num
        while True:
            q, r = divmod(n, pi)
            if r:
                break
            n, v = q, v + 1
        d = u.den
        while True:
            q, r = divmod(d, pi)
            if r:
                break
            d, v = q, v - 1
        return v

    def uniformizer(self, place: Place):
        self._check_place(place)
        if place.kind == "inf":
            return RatFunc(Poly.const(self.p, 1), Poly.x(self.p))
        return RatFunc(place.poly)

    def residue_field(self, place: Place) -> ResidueField:
        self._check_place(place)
        if place.kind == "inf":
            return ResidueField(self.p)
        return ResidueField(self.p, place.poly)

    def unit_residue(self, u, place: Place) -> ResidueElement:
        # strip the uniformizer from numerator and denominator directly,
        # avoiding a normalized quotient u / pi^v
        if self.is_zero(u):
            raise ValueError("residue of zero")
        self._check_place(place)
        if place.kind == "inf":
            return self._residue(u, place)
        pi = place.poly
        parts = []
        for g in (u.num, u.den):
            q, r = divmod(g, pi)
            while not r:
                g = q
                q, r = divmod(g, pi)
            parts.append(r)
        return self.residue_field(place)(parts[0] * invmod(parts[1], pi))

    def _residue(self, u, place):
        f = self.residue_field(place)
        if place.kind == "inf":
            return f(u.num.lc * pow(u.den.lc, -1, self.p) % self.p)
        pi = place.poly
        return f((u.num % pi) * invmod(u.den % pi, pi))

    def lift(self, r: ResidueElement, place: Place):
        """A polynomial of degree < deg(place) reducing to r."""
        return RatFunc(r.value)

    def parse_place(self, text: str) -> Place:
        text = text.strip()
        if text == "inf":
            return INF
        try:
            x = self.parse(text)
        except ParseError:
            raise ParseError("not a place of %s" % self.name, text) from None
        if x.den != 1 or not x.num.is_monic() or not is_irreducible(x.num):
            raise ParseError("place must be a monic irreducible polynomial", text)
        return Place("finite", poly=x.num)

    @property
    def torsion_order(self) -> int:
        return self.p - 1

    def torsion_generator(self):
        return self.from_int(primitive_root(self.p))

    def torsion_log(self, c) -> int:
        g = primitive_root(self.p)
        target = c.num.lc
        x = 1
        for k in range(self.p - 1):
            if x == target:
                return k
            x = x * g % self.p
        raise ValueError(f"{c} is not a nonzero constant")

    def random_poly(self, rng: random.Random, degree: int, monic: bool = False) -> Poly:
        coeffs = [rng.randrange(self.p) for _ in range(degree)]
        coeffs.append(1 if monic else rng.randrange(1, self.p))
        return Poly(self.p, coeffs)

    def random_element(self, rng: random.Random, degree: int = 4, nonzero: bool = True):
        while True:
            num = self.random_poly(rng, rng.randint(0, degree))
            den = self.random_poly(rng, rng.randint(0, degree), monic=True)
            x = RatFunc(num, den)
            if x or not nonzero:
                return x


def field_from_name(name: str) -> Field:
    name = name.strip()
    if name == "Q":
        return RationalField()
    m = re.fullmatch(r"F(\d+)t", name)
    if not m:
        raise ParseError("unknown field (use Q or F<p>t)", name)
    return FunctionField(int(m.group(1)))


def places_of(field: Field, u) -> list[tuple[Place, int]]:
    return field.places_of(u)


def valuation(field: Field, u, place: Place) -> int:
    return field.valuation(u, place)


def residue(field: Field, u, place: Place) -> ResidueElement:
    return field.residue(u, place)

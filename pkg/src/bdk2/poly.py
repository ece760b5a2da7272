"""Dense univariate polynomials over a prime field F_p, with factorization.

Coefficients are stored low degree first and always reduced into [0, p).
Factorization uses square-free decomposition, distinct-degree splitting and
Cantor-Zassenhaus equal-degree splitting driven by a fixed-seed RNG, so the
output is deterministic.
"""

from __future__ import annotations

import random
from functools import lru_cache


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    __slots__ = ("p", "coeffs", "_hash")

    def __init__(self, p: int, coeffs=()):
        out = [c % p for c in coeffs]
        while out and not out[-1]:
            out.pop()
        self.p = p
        self.coeffs = tuple(out)
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, p: int, c: int) -> "Poly":
        return cls(p, (c,))

    @classmethod
    def x(cls, p: int) -> "Poly":
        return cls(p, (0, 1))

    @classmethod
    def monomial(cls, p: int, n: int, c: int = 1) -> "Poly":
        return cls(p, (0,) * n + (c,))

    # -- basic structure --------------------------------------------------
    @property
    def deg(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def is_monic(self) -> bool:
        return self.lc == 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coeffs == _trim((other % self.p,))
        return isinstance(other, Poly) and self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.coeffs))
        return self._hash

    def sort_key(self):
        # degree first, then coefficients from the top down
        return (self.deg, tuple(reversed(self.coeffs)))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"Poly({self.p}, {self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for n in range(self.deg, -1, -1):
            c = self.coeffs[n]
            if c == 0:
                continue
            if n == 0:
                parts.append(str(c))
            else:
                mono = "t" if n == 1 else f"t^{n}"
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(parts)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.p != self.p:
                raise ValueError("characteristic mismatch")
            return other
        if isinstance(other, int):
            return Poly(self.p, (other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(self.p, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.p, (-c for c in self.coeffs))

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
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(self.p)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly(self.p, out)

    __rmul__ = __mul__

    def scale(self, c: int) -> "Poly":
        return Poly(self.p, (c * x for x in self.coeffs))

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        rem = list(self.coeffs)
        db = other.deg
        inv = pow(other.lc, -1, p)
        if len(rem) <= db:
            return Poly(p), self
        quot = [0] * (len(rem) - db)
        bc = other.coeffs
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] * inv % p
            quot[k] = c
            if c:
                # entries below the leading one are reduced lazily by the constructor
                for j in range(db):
                    rem[k + j] -= c * bc[j]
        return Poly(p, quot), Poly(p, rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly(self.p, (1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def powmod(self, n: int, mod: "Poly") -> "Poly":
        result = Poly(self.p, (1,)) % mod
        base = self % mod
        while n:
            if n & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            n >>= 1
        return result

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(pow(self.lc, -1, self.p))

    def derivative(self) -> "Poly":
        return Poly(self.p, (i * c for i, c in enumerate(self.coeffs) if i > 0))

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc


def gcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, a % b
    return a.monic()


def xgcd(a: Poly, b: Poly):
    """Return (g, s, t) with s*a + t*b = g monic."""
    p = a.p
    r0, r1 = a, b
    s0, s1 = Poly(p, (1,)), Poly(p)
    t0, t1 = Poly(p), Poly(p, (1,))
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0:
        return r0, s0, t0
    inv = pow(r0.lc, -1, p)
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def invmod(a: Poly, m: Poly) -> Poly:
    if m.deg == 1:  # residue field F_p: invert the value at the root
        root = -m.coeffs[0] * pow(m.coeffs[1], -1, m.p)
        value = a(root)
        if not value:
            raise ZeroDivisionError(f"{a} is not invertible modulo {m}")
        return Poly(m.p, (pow(value, -1, m.p),))
    g, s, _ = xgcd(a % m, m)
    if g.deg != 0:
        raise ZeroDivisionError(f"{a} is not invertible modulo {m}")
    return s % m


# -- factorization ---------------------------------------------------------

def _pth_root(f: Poly) -> Poly:
    p = f.p
    return Poly(p, f.coeffs[::p])


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Monic square-free factors with multiplicities (f monic, nonconstant)."""
    out: dict[Poly, int] = {}

    def rec(g: Poly, mult: int):
        if g.deg <= 0:
            return
        d = g.derivative()
        if d.is_zero():
            rec(_pth_root(g), mult * g.p)
            return
        c = gcd(g, d)
        w = g // c
        i = 1
        while w.deg > 0:
            y = gcd(w, c)
            z = w // y
            if z.deg > 0:
                out[z.monic()] = out.get(z.monic(), 0) + i * mult
            i += 1
            w = y
            c = c // y
        if c.deg > 0:
            rec(_pth_root(c), mult * g.p)

    rec(f.monic(), 1)
    return sorted(out.items(), key=lambda kv: kv[0].sort_key())


def distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    """Split a monic square-free f into products of equal-degree irreducibles."""
    p = f.p
    out = []
    x = Poly.x(p)
    h = x
    i = 0
    while f.deg >= 2 * (i + 1):
        i += 1
        h = h.powmod(p, f)
        g = gcd(f, h - x)
        if g.deg > 0:
            out.append((g, i))
            f = f // g
            h = h % f
    if f.deg > 0:
        out.append((f.monic(), f.deg))
    return out


def equal_degree(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Cantor-Zassenhaus splitting of f, a product of distinct degree-d irreducibles."""
    if f.deg == d:
        return [f.monic()]
    p = f.p
    while True:
        a = Poly(p, [rng.randrange(p) for _ in range(f.deg)])
        if a.deg < 1:
            continue
        if p == 2:
            # trace map onto F_2
            t = a % f
            acc = t
            for _ in range(d - 1):
                t = (t * t) % f
                acc = acc + t
            b = acc
        else:
            b = a.powmod((p ** d - 1) // 2, f) - 1
        g = gcd(f, b)
        if 0 < g.deg < f.deg:
            return equal_degree(g, d, rng) + equal_degree(f // g, d, rng)


@lru_cache(maxsize=65536)
def factor(f: Poly) -> tuple[int, tuple[tuple[Poly, int], ...]]:
    """Return (leading coefficient, sorted ((monic irreducible, multiplicity), ...))."""
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    lc = f.lc
    if f.deg == 0:
        return lc, ()
    rng = random.Random(0x5EED ^ f.p ^ f.deg)
    mult: dict[Poly, int] = {}
    for sq, m in squarefree_decomposition(f):
        for g, d in distinct_degree(sq):
            for irr in equal_degree(g, d, rng):
                mult[irr] = mult.get(irr, 0) + m
    return lc, tuple(sorted(mult.items(), key=lambda kv: kv[0].sort_key()))


def is_irreducible(f: Poly) -> bool:
    if f.deg < 1:
        return False
    _, facs = factor(f)
    return len(facs) == 1 and facs[0][1] == 1


def parse_poly(p: int, text: str) -> Poly:
    """Parse a polynomial such as ``t^2+3*t+1``; see ``fields`` for full expressions."""
    from .fields import FunctionField  # local import: the expression parser lives there

    value = FunctionField(p).parse(text)
    if not value.den == 1:
        raise ValueError(f"not a polynomial: {text!r}")
    return value.num

"""K2 of the ground fields through symbol expressions and tame-symbol coordinates.

A class in K2(F) is never normalized as a word in symbols.  Instead it is
identified by its coordinates: the tame symbols at all finite places (and at
infinity for F_p(t)), plus for Q the 2-adic Hilbert symbol and the real sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .fields import Field, Place, RationalField, ResidueElement


@dataclass(frozen=True)
class SymbolExpression:
    """prod {u, v}^e over ``terms``."""

    field: Field
    terms: tuple = ()

    @classmethod
    def symbol(cls, field: Field, u, v, e: int = 1) -> "SymbolExpression":
        if field.is_zero(u) or field.is_zero(v):
            raise ValueError("symbols need nonzero entries")
        return cls(field, ((u, v, e),) if e else ())

    @classmethod
    def identity(cls, field: Field) -> "SymbolExpression":
        return cls(field, ())

    def __mul__(self, other: "SymbolExpression") -> "SymbolExpression":
        if other.field != self.field:
            raise ValueError("symbols over different fields")
        return SymbolExpression(self.field, self.terms + other.terms)

    def __pow__(self, n: int) -> "SymbolExpression":
        if n == 0:
            return SymbolExpression(self.field, ())
        return SymbolExpression(self.field, tuple((u, v, e * n) for u, v, e in self.terms))

    def inverse(self) -> "SymbolExpression":
        return self ** -1

    def __str__(self):
        if not self.terms:
            return "1"
        fmt = self.field.format
        return "*".join(
            "{%s, %s}" % (fmt(u), fmt(v)) + (f"^{e}" if e != 1 else "") for u, v, e in self.terms
        )


@dataclass(frozen=True)
class K2Coordinates:
    coords: tuple = ()  # sorted ((Place, ResidueElement), ...) with values != 1
    sign2: int | None = None
    signReal: int | None = None

    def as_dict(self) -> dict:
        return dict(self.coords)

    def at(self, place: Place) -> ResidueElement | None:
        return self.as_dict().get(place)

    def is_trivial(self) -> bool:
        return not self.coords and self.sign2 in (None, 1) and self.signReal in (None, 1)

    def restricted(self, keep) -> "K2Coordinates":
        return K2Coordinates(tuple((p, r) for p, r in self.coords if keep(p)), self.sign2, self.signReal)

    def __mul__(self, other: "K2Coordinates") -> "K2Coordinates":
        acc = self.as_dict()
        for place, r in other.coords:
            acc[place] = acc[place] * r if place in acc else r
        s2 = None if self.sign2 is None else self.sign2 * other.sign2
        sr = None if self.signReal is None else self.signReal * other.signReal
        return K2Coordinates(_normalize(acc), s2, sr)

    def to_json(self) -> dict:
        out = {"coords": [{"place": str(p), "value": str(r)} for p, r in self.coords]}
        out["sign2"] = self.sign2
        out["signReal"] = self.signReal
        return out


def _normalize(acc: Mapping) -> tuple:
    return tuple(sorted(((p, r) for p, r in acc.items() if not r.is_one()), key=lambda pr: pr[0].sort_key()))


# -- tame symbols -------------------------------------------------------------

def tame_symbol(field: Field, u, v, place: Place) -> ResidueElement:
    """(-1)^{a b} * residue(u^b / v^a) at ``place``, a = val(u), b = val(v)."""
    if field.is_zero(u) or field.is_zero(v):
        raise ValueError("tame symbol of zero")
    if place.kind == "real":
        raise ValueError("no tame symbol at the real place")
    a = field.valuation(u, place)
    b = field.valuation(v, place)
    r = field.unit_residue(u, place) ** b * field.unit_residue(v, place) ** (-a)
    return -r if (a * b) % 2 else r


def _hilbert_parts(x: Fraction):
    """(val_2 x, x' mod 8) with x = 2^val * x', x' a 2-adic unit."""
    n, d = x.numerator, x.denominator
    k = 0
    while n % 2 == 0:
        n //= 2
        k += 1
    while d % 2 == 0:
        d //= 2
        k -= 1
    return k, n * pow(d, -1, 8) % 8


def hilbert2(u, v) -> int:
    a, u1 = _hilbert_parts(Fraction(u))
    b, v1 = _hilbert_parts(Fraction(v))
    eps = lambda x: ((x - 1) // 2) % 2
    omega = lambda x: ((x * x - 1) // 8) % 2
    e = eps(u1) * eps(v1) + a * omega(v1) + b * omega(u1)
    return -1 if e % 2 else 1


def hilbert_real(u, v) -> int:
    return -1 if u < 0 and v < 0 else 1


def _tame_places(field: Field, u, v) -> set:
    places = {p for p, _ in field.places_of(u)} | {p for p, _ in field.places_of(v)}
    if isinstance(field, RationalField):
        places = {p for p in places if p.prime != 2}
    return places


def k2_coordinates(sym: SymbolExpression) -> K2Coordinates:
    field = sym.field
    acc: dict = {}
    rational = isinstance(field, RationalField)
    s2 = sr = 1
    for u, v, e in sym.terms:
        if e == 0:
            continue
        for place in _tame_places(field, u, v):
            r = tame_symbol(field, u, v, place) ** e
            acc[place] = acc[place] * r if place in acc else r
        if rational and e % 2:
            s2 *= hilbert2(u, v)
            sr *= hilbert_real(u, v)
    if rational:
        return K2Coordinates(_normalize(acc), s2, sr)
    return K2Coordinates(_normalize(acc))


def is_trivial(sym: SymbolExpression) -> bool:
    return k2_coordinates(sym).is_trivial()


def k2_equal(a: SymbolExpression, b: SymbolExpression) -> bool:
    return k2_coordinates(a) == k2_coordinates(b)


def is_integral(sym: SymbolExpression, S: Iterable[Place]) -> bool:
    """All tame coordinates outside S vanish, i.e. sym comes from K2(O_S)."""
    S = set(S)
    return all(place in S for place, _ in k2_coordinates(sym).coords)


def lift_residues(field: Field, target, S: Iterable[Place]) -> SymbolExpression:
    """A symbol expression with the prescribed tame coordinates outside S.

    Works by descent on the degree of the place: a mismatch r at the highest
    remaining place pi is removed by {pi, g} with g = r^{-1} mod pi and
    deg g < deg pi, which only disturbs places of lower degree and infinity.
    """
    if isinstance(field, RationalField):
        raise ValueError("lift_residues is implemented for function fields")
    S = set(S)
    if not any(p.kind == "inf" for p in S):
        raise ValueError("S must contain the place at infinity")
    wanted = dict(target.coords) if isinstance(target, K2Coordinates) else dict(target)
    for place, r in wanted.items():
        if place in S:
            raise ValueError(f"target is supported at {place}, which lies in S")
        if place.kind != "finite":
            raise ValueError(f"{place} is not a finite place")
        if r.value.is_zero():
            raise ValueError("residue targets must be nonzero")
    expr = SymbolExpression.identity(field)
    current: dict = {}
    while True:
        candidates = set(wanted) | {p for p in current if p not in S and p.kind == "finite"}
        mismatched = []
        for place in candidates:
            want = wanted.get(place)
            have = current.get(place)
            if want is None:
                ratio = have.inverse()
            elif have is None:
                ratio = want
            else:
                ratio = want / have
            if not ratio.is_one():
                mismatched.append((place.sort_key(), place, ratio))
        if not mismatched:
            return expr
        _, place, ratio = max(mismatched, key=lambda m: m[0])
        pi = field.uniformizer(place)
        g = field.lift(ratio.inverse(), place)
        step = SymbolExpression.symbol(field, pi, g)
        expr = expr * step
        for q, r in k2_coordinates(step).coords:
            current[q] = current[q] * r if q in current else r


def reciprocity_check(field: Field, u, v) -> bool:
    """Weil reciprocity over F_p(t); Hilbert reciprocity over Q."""
    coords = k2_coordinates(SymbolExpression.symbol(field, u, v))
    if isinstance(field, RationalField):
        prod = coords.sign2 * coords.signReal
        for place, r in coords.coords:
            q = place.prime
            prod *= 1 if pow(r.value.lc, (q - 1) // 2, q) == 1 else -1
        return prod == 1
    p = field.p
    prod = 1
    for _, r in coords.coords:
        prod = prod * r.norm() % p
    return prod == 1

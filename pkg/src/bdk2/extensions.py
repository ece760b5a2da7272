"""Central extensions of a lattice Y by an abelian group, via monomial cocycles.

An extension is a list of terms (a, B) with a in the coefficient group and B
an integer bilinear form; the cocycle is sigma(y1, y2) = prod a^{y1^T B y2}.
Cochains are lists of terms (a, S, l) with S symmetric, evaluating to
prod a^{q(y)} where q(y) = (y^T S y - sum_i S_ii y_i) / 2 + l.y.

Splitting is exact: every coefficient group used here decomposes as a finite
cyclic torsion part times a free abelian group on named generators, and a
monomial cocycle is a coboundary iff each generator's total form is
symmetric (modulo the torsion order for the torsion part).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable

from .fields import Field, Place, RationalField, ResidueElement, ResidueField
from .lattice import LatticeMap, Matrix, as_matrix, matmul, transpose, zeros


# -- coefficient groups -------------------------------------------------------

class CoefficientGroup:
    """Abelian group written multiplicatively, with a generator decomposition.

    ``decompose(a)`` returns (k, gens) with a = g^k * prod gen^e, where g is
    ``torsion_generator`` of order ``torsion_order`` and gens maps hashable
    generator keys to exponents.
    """

    kind: str
    torsion_order: int

    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def pow(self, a, n: int):
        raise NotImplementedError

    def eq(self, a, b) -> bool:
        return a == b

    def is_identity(self, a) -> bool:
        return self.eq(a, self.identity())

    def order(self, a) -> int | None:
        """Element order, or None for infinite order."""
        k, gens = self.decompose(a)
        if any(gens.values()):
            return None
        n = self.torsion_order
        return n // gcd(n, k) if n else 1

    def decompose(self, a):
        raise NotImplementedError

    def generator(self, key):
        raise NotImplementedError

    def torsion_generator(self):
        raise NotImplementedError

    def format(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class FieldUnits(CoefficientGroup):
    field: Field
    kind = "Fx"

    @property
    def torsion_order(self) -> int:
        return self.field.torsion_order

    def identity(self):
        return self.field.one()

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return 1 / a if isinstance(self.field, RationalField) else a.inverse()

    def pow(self, a, n):
        return a ** n

    def torsion_generator(self):
        return self.field.torsion_generator()

    def decompose(self, a):
        if self.field.is_zero(a):
            raise ValueError("zero is not a unit")
        unit, facs = self.field.factor(a)
        gens = {}
        for place, e in facs:
            if place.kind != "finite":
                continue
            gens[place.prime if place.prime is not None else place.poly] = e
        return self.field.torsion_log(unit), gens

    def generator(self, key):
        if isinstance(self.field, RationalField):
            return Fraction(key)
        from .fields import RatFunc
        return RatFunc(key)

    def format(self, a) -> str:
        return self.field.format(a)

    def parse(self, text: str):
        a = self.field.parse(text)
        if self.field.is_zero(a):
            from .fields import ParseError
            raise ParseError("coefficient must be nonzero", text)
        return a

    def to_json(self) -> dict:
        return {"kind": "Fx", "field": self.field.name}


@dataclass(frozen=True)
class IntegersAdditive(CoefficientGroup):
    kind = "Z"
    torsion_order = 1

    def identity(self):
        return 0

    def mul(self, a, b):
        return a + b

    def inv(self, a):
        return -a

    def pow(self, a, n):
        return a * n

    def torsion_generator(self):
        return 0

    def decompose(self, a):
        return 0, ({1: a} if a else {})

    def generator(self, key):
        return 1

    def parse(self, text: str):
        try:
            return int(text)
        except ValueError:
            from .fields import ParseError
            raise ParseError("expected an integer", text) from None

    def to_json(self) -> dict:
        return {"kind": "Z"}


@dataclass(frozen=True)
class ResidueUnits(CoefficientGroup):
    field: Field
    place: Place
    kind = "resx"

    @property
    def residue_field(self) -> ResidueField:
        return self.field.residue_field(self.place)

    @property
    def torsion_order(self) -> int:
        return self.residue_field.size - 1

    def identity(self):
        return self.residue_field.one()

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inverse()

    def pow(self, a, n):
        return a ** n

    def torsion_generator(self):
        return self.residue_field.generator

    def decompose(self, a: ResidueElement):
        return self.residue_field.log(a), {}

    def parse(self, text: str):
        from .fields import ParseError, RatFunc
        x = self.field.parse(text)
        if isinstance(x, RatFunc):
            if x.den != 1:
                raise ParseError("residue elements are written as polynomials", text)
            value = x.num
        else:
            if x.denominator != 1:
                raise ParseError("residue elements are written as integers", text)
            value = int(x)
        r = self.residue_field(value)
        if r.value.is_zero():
            raise ParseError("residue unit must be nonzero", text)
        return r

    def to_json(self) -> dict:
        return {"kind": "resx", "field": self.field.name, "place": str(self.place)}


@dataclass(frozen=True)
class Mu2(CoefficientGroup):
    kind = "mu2"
    torsion_order = 2

    def identity(self):
        return 1

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a

    def pow(self, a, n):
        return a ** (n % 2)

    def torsion_generator(self):
        return -1

    def decompose(self, a):
        return (0 if a == 1 else 1), {}

    def parse(self, text: str):
        if text.strip() not in ("1", "-1"):
            from .fields import ParseError
            raise ParseError("mu2 elements are 1 or -1", text)
        return int(text)

    def to_json(self) -> dict:
        return {"kind": "mu2"}


@dataclass(frozen=True, eq=False)
class CoefficientHom:
    source: CoefficientGroup
    target: CoefficientGroup
    fn: Callable
    name: str = ""

    def __call__(self, a):
        return self.fn(a)


def valuation_hom(field: Field, place: Place) -> CoefficientHom:
    return CoefficientHom(FieldUnits(field), IntegersAdditive(), lambda a: field.valuation(a, place), f"val_{place}")


def residue_hom(field: Field, place: Place) -> CoefficientHom:
    return CoefficientHom(FieldUnits(field), ResidueUnits(field, place), lambda a: field.residue(a, place), f"res_{place}")


def sign_inclusion(field: Field) -> CoefficientHom:
    return CoefficientHom(Mu2(), FieldUnits(field), lambda a: field.from_int(a), "mu2->Fx")


# -- matrix helpers -----------------------------------------------------------

def _add(a: Matrix, b: Matrix, k: int = 1) -> Matrix:
    return tuple(tuple(x + k * y for x, y in zip(r, s)) for r, s in zip(a, b))


def _scale(a: Matrix, k: int) -> Matrix:
    return tuple(tuple(k * x for x in r) for r in a)


def _mod(a: Matrix, n: int) -> Matrix:
    return tuple(tuple(x % n for x in r) for r in a)


def _bil(b: Matrix, y1, y2) -> int:
    return sum(b[i][j] * y1[i] * y2[j] for i in range(len(y1)) for j in range(len(y2)) if b[i][j])


def _quad(s: Matrix, lin, y) -> int:
    n = len(y)
    twice = sum(s[i][j] * y[i] * y[j] for i in range(n) for j in range(n) if s[i][j])
    twice -= sum(s[i][i] * y[i] for i in range(n))
    return twice // 2 + sum(l * x for l, x in zip(lin, y))


def _is_symmetric(a: Matrix) -> bool:
    return all(a[i][j] == a[j][i] for i in range(len(a)) for j in range(i))


# -- extensions ---------------------------------------------------------------

@dataclass(frozen=True)
class MonomialCocycleExtension:
    rank: int
    coeff: CoefficientGroup
    terms: tuple = ()  # ((a, B), ...)

    def __post_init__(self):
        terms = tuple((a, as_matrix(b)) for a, b in self.terms)
        for _, b in terms:
            if len(b) != self.rank or any(len(r) != self.rank for r in b):
                raise ValueError("bilinear form has the wrong shape")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def split_extension(cls, rank: int, coeff: CoefficientGroup) -> "MonomialCocycleExtension":
        return cls(rank, coeff, ())

    def sigma(self, y1, y2):
        c = self.coeff
        out = c.identity()
        for a, b in self.terms:
            e = _bil(b, y1, y2)
            if e:
                out = c.mul(out, c.pow(a, e))
        return out

    def generator_forms(self):
        """(torsion form mod N, {generator: total form}) with zero forms dropped."""
        return _generator_forms(self.coeff, self.rank, ((a, b) for a, b in self.terms))

    def is_trivial_cocycle(self) -> bool:
        tors, free = self.generator_forms()
        return not any(any(r) for r in tors) and not free


def _generator_forms(coeff: CoefficientGroup, rank: int, items):
    n = coeff.torsion_order
    tors = zeros(rank, rank)
    free: dict = {}
    for a, b in items:
        k, gens = coeff.decompose(a)
        if k:
            tors = _add(tors, b, k)
        for g, e in gens.items():
            free[g] = _add(free.get(g, zeros(rank, rank)), b, e)
    tors = _mod(tors, n) if n > 1 else zeros(rank, rank)
    free = {g: f for g, f in free.items() if any(any(r) for r in f)}
    return tors, free


def multiply(E: MonomialCocycleExtension, x, y):
    (y1, a1), (y2, a2) = x, y
    c = E.coeff
    return tuple(p + q for p, q in zip(y1, y2)), c.mul(c.mul(a1, a2), E.sigma(y1, y2))


def element_inverse(E: MonomialCocycleExtension, x):
    y, a = x
    neg = tuple(-v for v in y)
    c = E.coeff
    return neg, c.inv(c.mul(a, E.sigma(y, neg)))


def _check_compatible(E1, E2):
    if E1.rank != E2.rank or E1.coeff != E2.coeff:
        raise ValueError("extensions have different base lattices or coefficients")


def baer_sum(E1: MonomialCocycleExtension, E2: MonomialCocycleExtension) -> MonomialCocycleExtension:
    _check_compatible(E1, E2)
    return MonomialCocycleExtension(E1.rank, E1.coeff, E1.terms + E2.terms)


def inverse(E: MonomialCocycleExtension) -> MonomialCocycleExtension:
    """The Baer inverse: termwise inverted bases."""
    return MonomialCocycleExtension(E.rank, E.coeff, tuple((E.coeff.inv(a), b) for a, b in E.terms))


def commutator(E: MonomialCocycleExtension, y1, y2):
    c = E.coeff
    out = c.identity()
    for a, b in E.terms:
        e = _bil(b, y1, y2) - _bil(b, y2, y1)
        if e:
            out = c.mul(out, c.pow(a, e))
    return out


def pushout(E: MonomialCocycleExtension, h: CoefficientHom) -> MonomialCocycleExtension:
    if h.source != E.coeff:
        raise ValueError("homomorphism does not start at the coefficient group")
    terms = []
    for a, b in E.terms:
        try:
            terms.append((h(a), b))
        except ValueError as exc:
            raise ValueError(f"{h.name} is undefined on {E.coeff.format(a)}: {exc}") from None
    return MonomialCocycleExtension(E.rank, h.target, tuple(terms))


def pullback(E: MonomialCocycleExtension, m: LatticeMap) -> MonomialCocycleExtension:
    if m.target.rank != E.rank:
        raise ValueError("map does not land in the base lattice")
    M = m.matrix
    Mt = transpose(M, m.source.rank)
    r = m.source.rank
    terms = []
    for a, b in E.terms:
        pb = matmul(matmul(Mt, b), M) if E.rank else zeros(r, r)
        terms.append((a, pb))
    return MonomialCocycleExtension(r, E.coeff, tuple(terms))


# -- cochains -----------------------------------------------------------------

@dataclass(frozen=True)
class MonomialCochain:
    rank: int
    coeff: CoefficientGroup
    terms: tuple = ()  # ((a, S symmetric, l), ...)

    def __post_init__(self):
        terms = []
        for a, s, lin in self.terms:
            s = as_matrix(s) if s else zeros(self.rank, self.rank)
            lin = tuple(int(x) for x in lin) if lin else (0,) * self.rank
            if not _is_symmetric(s):
                raise ValueError("cochain forms must be symmetric")
            if len(s) != self.rank or len(lin) != self.rank:
                raise ValueError("cochain term has the wrong shape")
            terms.append((a, s, lin))
        object.__setattr__(self, "terms", tuple(terms))

    @classmethod
    def zero(cls, rank: int, coeff: CoefficientGroup) -> "MonomialCochain":
        return cls(rank, coeff, ())

    @classmethod
    def character(cls, rank: int, coeff: CoefficientGroup, a, lin) -> "MonomialCochain":
        """y -> a^{lin.y}."""
        return cls(rank, coeff, ((a, zeros(rank, rank), tuple(lin)),))

    def __call__(self, y):
        c = self.coeff
        out = c.identity()
        for a, s, lin in self.terms:
            e = _quad(s, lin, y)
            if e:
                out = c.mul(out, c.pow(a, e))
        return out

    def __mul__(self, other: "MonomialCochain") -> "MonomialCochain":
        if self.rank != other.rank or self.coeff != other.coeff:
            raise ValueError("cochains on different lattices or coefficients")
        return MonomialCochain(self.rank, self.coeff, self.terms + other.terms)

    def inverse(self) -> "MonomialCochain":
        return MonomialCochain(
            self.rank, self.coeff, tuple((a, _scale(s, -1), tuple(-x for x in lin)) for a, s, lin in self.terms)
        )

    def coboundary(self) -> MonomialCocycleExtension:
        """d phi (y1, y2) = phi(y1 + y2) / (phi(y1) phi(y2))."""
        return MonomialCocycleExtension(self.rank, self.coeff, tuple((a, s) for a, s, _ in self.terms))

    def pullback(self, m: LatticeMap) -> "MonomialCochain":
        """phi o m."""
        M = m.matrix
        r = m.source.rank
        Mt = transpose(M, r)
        terms = []
        for a, s, lin in self.terms:
            s2 = matmul(matmul(Mt, s), M) if self.rank else zeros(r, r)
            diag = [s[i][i] for i in range(self.rank)]
            mt_diag = [sum(M[i][k] * diag[i] for i in range(self.rank)) for k in range(r)]
            mt_lin = [sum(M[i][k] * lin[i] for i in range(self.rank)) for k in range(r)]
            new_lin = tuple(mt_lin[k] + (s2[k][k] - mt_diag[k]) // 2 for k in range(r))
            terms.append((a, s2, new_lin))
        return MonomialCochain(r, self.coeff, tuple(terms))

    def pushout(self, h: CoefficientHom) -> "MonomialCochain":
        return MonomialCochain(self.rank, h.target, tuple((h(a), s, lin) for a, s, lin in self.terms))

    def generator_data(self):
        """Per generator: (S, l) totals; the torsion part is left unreduced."""
        c = self.coeff
        r = self.rank
        tors = (zeros(r, r), (0,) * r)
        free: dict = {}
        for a, s, lin in self.terms:
            k, gens = c.decompose(a)
            if k:
                tors = (_add(tors[0], s, k), tuple(x + k * y for x, y in zip(tors[1], lin)))
            for g, e in gens.items():
                cur = free.get(g, (zeros(r, r), (0,) * r))
                free[g] = (_add(cur[0], s, e), tuple(x + e * y for x, y in zip(cur[1], lin)))
        free = {g: v for g, v in free.items() if any(any(row) for row in v[0]) or any(v[1])}
        return tors, free

    def is_trivial(self) -> bool:
        """phi(y) = 1 for every y (exact, via binomial coefficients)."""
        tors, free = self.generator_data()
        if free:
            return False
        n = self.coeff.torsion_order
        if n <= 1:
            return True
        s, lin = tors
        r = self.rank
        # basis of integer-valued quadratics: y_i y_j (i < j), C(y_i, 2), y_i
        return all(s[i][j] % n == 0 for i in range(r) for j in range(i, r)) and all(x % n == 0 for x in lin)

    def linear_part(self) -> tuple[int, ...] | None:
        """For Z coefficients with vanishing quadratic part: the row vector l with phi(y) = l.y."""
        if self.coeff.kind != "Z":
            raise ValueError("linear_part needs integer coefficients")
        total = [0] * self.rank
        for a, s, lin in self.terms:
            if any(any(row) for row in s):
                return None
            total = [x + a * y for x, y in zip(total, lin)]
        return tuple(total)


def cochains_equal(phi1: MonomialCochain, phi2: MonomialCochain) -> bool:
    return (phi1 * phi2.inverse()).is_trivial()


def canonical_exponent(b: Matrix, y) -> int:
    """q(y) = (y^T B y - sum B_ii y_i) / 2 for a symmetric integer B."""
    return _quad(b, (0,) * len(y), y)


@dataclass(frozen=True)
class SplitResult:
    cochain: MonomialCochain | None
    witness: tuple | None = None  # basis indices (i, j) with nontrivial commutator

    @property
    def splits(self) -> bool:
        return self.cochain is not None


def split(E: MonomialCocycleExtension) -> SplitResult:
    """Return phi with d(phi) * sigma = 1, or a basis pair with nontrivial commutator."""
    c = E.coeff
    n = E.rank
    N = c.torsion_order
    tors, free = E.generator_forms()
    for i in range(n):
        for j in range(i + 1, n):
            if tors[i][j] != tors[j][i] or any(f[i][j] != f[j][i] for f in free.values()):
                return SplitResult(None, (i, j))
    terms = []
    if any(any(r) for r in tors):
        d = N
        for r in tors:
            for x in r:
                d = gcd(d, x)
        m = N // d
        h = c.pow(c.torsion_generator(), d)
        # h = g^d has order m; when m = 2 this is the element -1
        terms.append((h, _mod(tuple(tuple(-(x // d) for x in r) for r in tors), m), ()))
    for g in sorted(free, key=_gen_key):
        terms.append((c.generator(g), _scale(free[g], -1), ()))
    return SplitResult(MonomialCochain(n, c, tuple(terms)))


def _gen_key(g):
    if hasattr(g, "sort_key"):
        return (1, g.sort_key())
    return (0, g)


def is_isomorphic(E1: MonomialCocycleExtension, E2: MonomialCocycleExtension) -> SplitResult:
    """phi with d(phi) = sigma2 / sigma1, so (y, a) -> (y, a phi(y)) maps E1 to E2."""
    _check_compatible(E1, E2)
    return split(baer_sum(E1, inverse(E2)))


def cocycles_equal(E1: MonomialCocycleExtension, E2: MonomialCocycleExtension) -> bool:
    _check_compatible(E1, E2)
    return baer_sum(E1, inverse(E2)).is_trivial_cocycle()

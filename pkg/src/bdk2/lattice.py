"""Lattices, integer linear algebra, split root data and quadratic forms.

X and Y are both coordinate lattices Z^n paired by the dot product.  Matrices
are tuples of integer rows; a ``LatticeMap`` from a rank-m lattice to a rank-n
lattice has an n x m matrix acting on column vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

Matrix = tuple  # tuple[tuple[int, ...], ...]


# -- plain matrix helpers -----------------------------------------------------

def as_matrix(rows) -> Matrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(n: int, m: int) -> Matrix:
    return tuple((0,) * m for _ in range(n))


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    if not a:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*a))


def matmul(a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    bt = transpose(b)
    ncols = len(b[0]) if b else 0
    if not bt:
        return tuple((0,) * ncols for _ in a)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Matrix, v) -> tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def dot(u, v) -> int:
    return sum(x * y for x, y in zip(u, v))


def unit_vector(n: int, i: int) -> tuple[int, ...]:
    return tuple(int(k == i) for k in range(n))


def inverse_unimodular(a: Matrix) -> Matrix:
    """Inverse of an integer matrix with determinant +-1."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    out = []
    for row in m:
        vals = row[n:]
        if any(v.denominator != 1 for v in vals):
            raise ValueError("matrix is not unimodular")
        out.append(tuple(int(v) for v in vals))
    return tuple(out)


def smith_normal_form(m) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U*m*V = D, U and V unimodular, D diagonal, d1 | d2 | ...."""
    a = [list(r) for r in as_matrix(m)]
    n = len(a)
    k = len(a[0]) if n else 0
    u = [list(r) for r in identity(n)]
    v = [list(r) for r in identity(k)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst += q * row src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    t = 0
    while t < min(n, k):
        entries = [(abs(a[i][j]), i, j) for i in range(t, n) for j in range(t, k) if a[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            for i in range(t + 1, n):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
            for j in range(t + 1, k):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
            rest = [(abs(a[i][t]), i, None) for i in range(t + 1, n) if a[i][t]]
            rest += [(abs(a[t][j]), None, j) for j in range(t + 1, k) if a[t][j]]
            if rest:
                _, i, j = min(rest, key=lambda e: e[0])
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, k) if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return as_matrix(u), as_matrix(a), as_matrix(v)


def solve_left(mat, rhs):
    """Integer solution H of H*mat = rhs (rows of rhs solved independently), or None.

    Returns (H, kernel_rows, failures) where failures lists (row, column, d, value)
    for each diagonal equation d*g = value with no integer solution.
    """
    mat = as_matrix(mat)
    rhs = as_matrix(rhs)
    n = len(mat)
    k = len(mat[0]) if n else (len(rhs[0]) if rhs else 0)
    u, d, v = smith_normal_form(mat) if n and k else (identity(n), mat, identity(k))
    r = sum(1 for i in range(min(n, k)) if d[i][i])
    rv = matmul(rhs, v) if k else tuple(() for _ in rhs)
    failures = []
    g_rows = []
    for row_idx, row in enumerate(rv):
        g = [0] * n
        for j in range(k):
            dj = d[j][j] if j < min(n, k) else 0
            if j < r:
                if row[j] % dj:
                    failures.append((row_idx, j, dj, row[j]))
                else:
                    g[j] = row[j] // dj
            elif row[j]:
                failures.append((row_idx, j, 0, row[j]))
        g_rows.append(g)
    kernel = tuple(u[j] for j in range(r, n))
    if failures:
        return None, kernel, failures
    h = matmul(as_matrix(g_rows), u) if n else as_matrix(g_rows)
    return h, kernel, failures


def integer_left_kernel(mat) -> tuple[tuple[int, ...], ...]:
    """A basis of {h : h*mat = 0} over Z."""
    mat = as_matrix(mat)
    n = len(mat)
    if not n:
        return ()
    if not mat[0]:
        return identity(n)
    u, d, _ = smith_normal_form(mat)
    r = sum(1 for i in range(min(n, len(mat[0]))) if d[i][i])
    return tuple(u[j] for j in range(r, n))


def matrix_rank(mat) -> int:
    mat = as_matrix(mat)
    if not mat or not mat[0]:
        return 0
    _, d, _ = smith_normal_form(mat)
    return sum(1 for i in range(min(len(d), len(d[0]))) if d[i][i])


# -- lattices and maps --------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    rank: int
    label: str = ""

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be non-negative")

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def basis(self):
        return [unit_vector(self.rank, i) for i in range(self.rank)]


Z = Lattice(1, "Z")


@dataclass(frozen=True)
class LatticeMap:
    source: Lattice
    target: Lattice
    matrix: Matrix

    def __post_init__(self):
        mat = as_matrix(self.matrix)
        object.__setattr__(self, "matrix", mat)
        if len(mat) != self.target.rank or any(len(r) != self.source.rank for r in mat):
            raise ValueError(f"matrix shape does not match {self.target.rank} x {self.source.rank}")

    @classmethod
    def identity(cls, lat: Lattice) -> "LatticeMap":
        return cls(lat, lat, identity(lat.rank))

    def __call__(self, y) -> tuple[int, ...]:
        return matvec(self.matrix, y)

    def compose(self, other: "LatticeMap") -> "LatticeMap":
        """self after other."""
        if other.target.rank != self.source.rank:
            raise ValueError("composition of incompatible maps")
        return LatticeMap(other.source, self.target, matmul(self.matrix, other.matrix) if self.matrix else ())

    def columns(self):
        return transpose(self.matrix, self.source.rank)

    def is_injective(self) -> bool:
        return matrix_rank(self.matrix) == self.source.rank


@dataclass(frozen=True)
class ExtendHomResult:
    """Solution set of h*p = psi: ``solution`` + span(``kernel``), or an obstruction."""

    solution: LatticeMap | None
    kernel: tuple  # rows h with h*p = 0 (maps Y -> Z)
    complement: tuple  # vectors of Y spanning a complement of p(Y_SC) up to finite index
    obstruction: tuple  # (d, value) pairs: d*h = value has no integer solution
    snf: tuple  # (U, D, V) of p

    @property
    def solvable(self) -> bool:
        return self.solution is not None

    def describe_obstruction(self) -> str:
        return "; ".join(f"{d}·h = {val}" for d, val in self.obstruction)


def extend_hom(p: LatticeMap, psi: LatticeMap) -> ExtendHomResult:
    """Solve h o p = psi for h: Y -> target(psi), given p: Y_SC -> Y injective."""
    if psi.source != p.source and psi.source.rank != p.source.rank:
        raise ValueError("psi and p must share their source")
    if not p.is_injective():
        raise ValueError("p is not injective")
    n, m = p.target.rank, p.source.rank
    if m == 0:
        u, d, v = identity(n), p.matrix, ()
    else:
        u, d, v = smith_normal_form(p.matrix)
    uinv = inverse_unimodular(u) if n else ()
    complement = tuple(tuple(uinv[i][j] for i in range(n)) for j in range(m, n))
    kernel = tuple(u[j] for j in range(m, n))
    rows = psi.matrix
    pv = matmul(rows, v) if m else tuple(() for _ in rows)
    obstruction = []
    g_rows = []
    for row in pv:
        g = [0] * n
        for j in range(m):
            dj = d[j][j]
            if row[j] % dj:
                obstruction.append((dj, row[j]))
            else:
                g[j] = row[j] // dj
        g_rows.append(g)
    if obstruction:
        return ExtendHomResult(None, kernel, complement, tuple(obstruction), (u, d, v))
    h = matmul(as_matrix(g_rows), u) if n else tuple(() for _ in g_rows)
    return ExtendHomResult(LatticeMap(p.target, psi.target, h), kernel, complement, (), (u, d, v))


def extend_hom_bruteforce(p: LatticeMap, psi: LatticeMap, bound: int = 10):
    """All h with entries in [-bound, bound] and h o p = psi (target rank 1)."""
    n = p.target.rank
    sols = []
    for h in product(range(-bound, bound + 1), repeat=n):
        if matmul((h,), p.matrix) == psi.matrix if p.source.rank else True:
            sols.append(h)
    return sols


# -- root data ----------------------------------------------------------------

@dataclass(frozen=True)
class RootDatum:
    rank: int
    roots: Matrix  # simple roots, vectors in X
    coroots: Matrix  # simple coroots, vectors in Y
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "roots", as_matrix(self.roots))
        object.__setattr__(self, "coroots", as_matrix(self.coroots))
        if len(self.roots) != len(self.coroots):
            raise ValueError("roots and coroots must be in bijection")
        for a, c in zip(self.roots, self.coroots):
            if len(a) != self.rank or len(c) != self.rank:
                raise ValueError("root vector of the wrong length")
            if dot(a, c) != 2:
                raise ValueError(f"<{a}, {c}> must equal 2")
        if matrix_rank(self.coroots) != len(self.coroots):
            raise ValueError("coroots must be linearly independent")

    @property
    def y_lattice(self) -> Lattice:
        return Lattice(self.rank, "Y")

    @property
    def x_lattice(self) -> Lattice:
        return Lattice(self.rank, "X")

    @property
    def ysc_lattice(self) -> Lattice:
        return Lattice(len(self.coroots), "Y_SC")

    @property
    def semisimple_rank(self) -> int:
        return len(self.coroots)

    def coroot_inclusion(self) -> LatticeMap:
        """p: Y_SC -> Y; columns are the simple coroots."""
        return LatticeMap(self.ysc_lattice, self.y_lattice, transpose(self.coroots, 0) if self.coroots else zeros(self.rank, 0))

    def cartan_matrix(self) -> Matrix:
        return tuple(tuple(dot(a, c) for c in self.coroots) for a in self.roots)

    def coroot_system(self, limit: int = 500) -> frozenset:
        """The Weyl orbit of the simple coroots (all coroots)."""
        seen = set(self.coroots)
        frontier = list(seen)
        while frontier:
            y = frontier.pop()
            for a, c in zip(self.roots, self.coroots):
                k = dot(a, y)
                z = tuple(yi - k * ci for yi, ci in zip(y, c))
                if z not in seen:
                    seen.add(z)
                    frontier.append(z)
                    if len(seen) > limit:
                        raise ValueError("coroot orbit is not finite")
        return frozenset(seen)

    def reflections_preserve_coroots(self) -> bool:
        system = self.coroot_system()
        for i in range(len(self.roots)):
            s = weyl_reflection(self, i)
            if {s(y) for y in system} != system:
                return False
        return True


def weyl_reflection(rd: RootDatum, i: int) -> LatticeMap:
    if not 0 <= i < len(rd.roots):
        raise IndexError(f"root index {i} out of range")
    a, c = rd.roots[i], rd.coroots[i]
    n = rd.rank
    mat = tuple(tuple(int(r == k) - c[r] * a[k] for k in range(n)) for r in range(n))
    return LatticeMap(rd.y_lattice, rd.y_lattice, mat)


def weyl_invariant_homs(rd: RootDatum) -> tuple:
    """Basis of the W-invariant homomorphisms Y_SC -> Z (row vectors in the coroot basis)."""
    r = rd.semisimple_rank
    if r == 0:
        return ()
    cartan = rd.cartan_matrix()
    # s_i(a_j^v) = a_j^v - <a_i, a_j^v> a_i^v, so invariance of h reads <a_i, a_j^v> h_i = 0
    cols = []
    for i in range(r):
        for j in range(r):
            col = [0] * r
            col[i] = cartan[i][j]
            cols.append(col)
    return integer_left_kernel(transpose(as_matrix(cols)))


# -- quadratic forms ----------------------------------------------------------

@dataclass(frozen=True)
class QuadraticForm:
    """Q(y) = sum_{i <= j} q_ij y_i y_j; only nonzero coefficients are stored."""

    rank: int
    upper: tuple = ()  # sorted ((i, j), q) with i <= j, q != 0

    def __post_init__(self):
        acc: dict = {}
        items = self.upper.items() if isinstance(self.upper, dict) else self.upper
        for (i, j), q in items:
            i, j = int(i), int(j)
            if i > j:
                i, j = j, i
            if not (0 <= i and j < self.rank):
                raise ValueError(f"index ({i},{j}) out of range for rank {self.rank}")
            acc[(i, j)] = acc.get((i, j), 0) + int(q)
        object.__setattr__(self, "upper", tuple(sorted((k, q) for k, q in acc.items() if q)))

    @classmethod
    def zero(cls, rank: int) -> "QuadraticForm":
        return cls(rank)

    @classmethod
    def from_upper_matrix(cls, mat) -> "QuadraticForm":
        mat = as_matrix(mat)
        n = len(mat)
        return cls(n, {(i, j): mat[i][j] for i in range(n) for j in range(i, n)})

    def coeff(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return dict(self.upper).get((i, j), 0)

    def upper_matrix(self) -> Matrix:
        n = self.rank
        return tuple(tuple(self.coeff(i, j) if i <= j else 0 for j in range(n)) for i in range(n))

    def __call__(self, y) -> int:
        return sum(q * y[i] * y[j] for (i, j), q in self.upper)

    def gram(self) -> Matrix:
        """Matrix of B_Q: diagonal 2 q_ii, off-diagonal q_ij."""
        n = self.rank
        return tuple(
            tuple(2 * self.coeff(i, i) if i == j else self.coeff(i, j) for j in range(n)) for i in range(n)
        )

    def bilinear(self, y1, y2) -> int:
        return self(tuple(a + b for a, b in zip(y1, y2))) - self(y1) - self(y2)

    def __add__(self, other: "QuadraticForm") -> "QuadraticForm":
        if self.rank != other.rank:
            raise ValueError("rank mismatch")
        return QuadraticForm(self.rank, self.upper + other.upper)

    def __neg__(self):
        return QuadraticForm(self.rank, tuple((k, -q) for k, q in self.upper))

    def pullback(self, m: LatticeMap) -> "QuadraticForm":
        """Q o m on the source of m."""
        cols = m.columns()
        r = m.source.rank
        coeffs = {}
        for i in range(r):
            coeffs[(i, i)] = self(cols[i])
            for j in range(i + 1, r):
                coeffs[(i, j)] = self.bilinear(cols[i], cols[j])
        return QuadraticForm(r, coeffs)

    def is_zero(self) -> bool:
        return not self.upper


def is_weyl_invariant(q: QuadraticForm, rd: RootDatum) -> bool:
    if q.rank != rd.rank:
        raise ValueError("quadratic form and root datum live on different lattices")
    basis = rd.y_lattice.basis()
    for i in range(len(rd.roots)):
        s = weyl_reflection(rd, i)
        images = [s(e) for e in basis]
        for k, e in enumerate(basis):
            if q(images[k]) != q(e):
                return False
            for l in range(k + 1, len(basis)):
                if q.bilinear(images[k], images[l]) != q.bilinear(e, basis[l]):
                    return False
    return True


@dataclass(frozen=True)
class BilinearIncarnation:
    rank: int
    matrix: Matrix = field(default=())

    def __post_init__(self):
        mat = as_matrix(self.matrix) if self.matrix else zeros(self.rank, self.rank)
        if len(mat) != self.rank or any(len(r) != self.rank for r in mat):
            raise ValueError(f"incarnation must be {self.rank} x {self.rank}")
        object.__setattr__(self, "matrix", mat)

    def __call__(self, y1, y2) -> int:
        return sum(self.matrix[i][j] * y1[i] * y2[j] for i in range(self.rank) for j in range(self.rank))

    def __add__(self, other: "BilinearIncarnation") -> "BilinearIncarnation":
        return BilinearIncarnation(self.rank, tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.matrix, other.matrix)))

    def __sub__(self, other: "BilinearIncarnation") -> "BilinearIncarnation":
        return BilinearIncarnation(self.rank, tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.matrix, other.matrix)))

    def vanishes_on_diagonal(self) -> bool:
        """A(y, y) = 0 for all y: zero diagonal and antisymmetric."""
        a = self.matrix
        n = self.rank
        return all(a[i][i] == 0 for i in range(n)) and all(a[i][j] == -a[j][i] for i in range(n) for j in range(n))

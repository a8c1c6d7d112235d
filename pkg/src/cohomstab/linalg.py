"""Exact linear algebra kernels: elimination, Smith normal form, solvers.

All computations are exact over the rings in :mod:`cohomstab.rings`.
Matrices are dense; at desk scale (a few hundred rows) this is fast enough
and keeps the pivoting logic simple and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatch, NoSolution, UnsupportedRing
from .rings import (
    ZZ,
    CoeffRing,
    IntegerRing,
    IntegersMod,
    LocalizedIntegers,
)


class Matrix:
    """Matrix over a CoeffRing; rows is a list of lists of ring elements."""

    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring: CoeffRing, rows, nrows=None, ncols=None):
        self.ring = ring
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows) if nrows is None else nrows
        self.ncols = (len(self.rows[0]) if self.rows else 0) if ncols is None else ncols
        for r in self.rows:
            if len(r) != self.ncols:
                raise DimensionMismatch("ragged rows")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zeros(cls, ring, nrows, ncols):
        z = ring.zero()
        return cls(ring, [[z] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, ring, n):
        m = cls.zeros(ring, n, n)
        one = ring.one()
        for i in range(n):
            m.rows[i][i] = one
        return m

    @classmethod
    def from_int_rows(cls, ring, rows):
        return cls(ring, [[ring.from_int(x) for x in r] for r in rows])

    @classmethod
    def column(cls, ring, entries):
        return cls(ring, [[e] for e in entries])

    # -- basics ---------------------------------------------------------------

    def copy(self):
        return Matrix(self.ring, [list(r) for r in self.rows], self.nrows, self.ncols)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.ring == other.ring
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.ring, tuple(tuple(r) for r in self.rows)))

    def __repr__(self):
        return f"Matrix({self.ring}, {self.nrows}x{self.ncols})"

    def is_zero(self):
        R = self.ring
        return all(R.is_zero(x) for r in self.rows for x in r)

    def transpose(self):
        return Matrix(
            self.ring,
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            self.ncols,
            self.nrows,
        )

    def __add__(self, other):
        R = self.ring
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionMismatch("matrix add shape mismatch")
        return Matrix(
            R,
            [
                [R.add(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
            self.nrows,
            self.ncols,
        )

    def __sub__(self, other):
        return self + other.scale(self.ring.from_int(-1))

    def scale(self, c):
        R = self.ring
        return Matrix(
            R,
            [[R.mul(c, x) for x in r] for r in self.rows],
            self.nrows,
            self.ncols,
        )

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise DimensionMismatch(
                f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}"
            )
        R = self.ring
        zero = R.zero()
        ot = other.transpose().rows
        out = []
        for ra in self.rows:
            row = []
            for cb in ot:
                acc = zero
                for a, b in zip(ra, cb):
                    if not R.is_zero(a) and not R.is_zero(b):
                        acc = R.add(acc, R.mul(a, b))
                row.append(acc)
            out.append(row)
        return Matrix(R, out, self.nrows, other.ncols)

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise DimensionMismatch("hstack row mismatch")
        return Matrix(
            self.ring,
            [ra + rb for ra, rb in zip(self.rows, other.rows)],
            self.nrows,
            self.ncols + other.ncols,
        )

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise DimensionMismatch("vstack col mismatch")
        return Matrix(self.ring, self.rows + other.rows, self.nrows + other.nrows, self.ncols)

    def col(self, j):
        return [self.rows[i][j] for i in range(self.nrows)]

    def submatrix(self, row_idx, col_idx):
        return Matrix(
            self.ring,
            [[self.rows[i][j] for j in col_idx] for i in row_idx],
            len(row_idx),
            len(col_idx),
        )

    def change_ring(self, ring: CoeffRing, convert):
        """Apply ``convert`` entrywise into ``ring``."""
        return Matrix(
            ring,
            [[convert(x) for x in r] for r in self.rows],
            self.nrows,
            self.ncols,
        )


# ---------------------------------------------------------------------------
# Field elimination
# ---------------------------------------------------------------------------


class FieldSolver:
    """Row-reduce A once over a field; answer many solve/membership queries.

    Solves A x = b by reducing the augmented system against the cached RREF.
    """

    def __init__(self, A: Matrix):
        if not A.ring.is_field:
            raise UnsupportedRing(f"FieldSolver needs a field, got {A.ring}")
        self.A = A
        self.ring = A.ring
        R, pivots, T = rref(A, transform=True)
        self.R = R
        self.pivots = pivots  # list of (row, col)
        self.T = T
        self.rank = len(pivots)
        self.pivot_cols = [c for (_, c) in pivots]

    def solve(self, b):
        """Return one solution x (list) of A x = b, or raise NoSolution."""
        R = self.ring
        if len(b) != self.A.nrows:
            raise DimensionMismatch("rhs length mismatch")
        # c = T b
        c = []
        for i in range(self.T.nrows):
            acc = R.zero()
            for t, x in zip(self.T.rows[i], b):
                if not R.is_zero(t) and not R.is_zero(x):
                    acc = R.add(acc, R.mul(t, x))
            c.append(acc)
        for i in range(self.rank, len(c)):
            if not R.is_zero(c[i]):
                raise NoSolution("inconsistent linear system")
        x = [R.zero()] * self.A.ncols
        for (i, j) in self.pivots:
            x[j] = c[i]
        return x

    def in_image(self, b) -> bool:
        try:
            self.solve(b)
            return True
        except NoSolution:
            return False

    def kernel_basis(self):
        """Basis of the null space, as a list of column vectors."""
        R = self.ring
        free_cols = [j for j in range((self.A.ncols)) if j not in self.pivot_cols]
        basis = []
        for fc in free_cols:
            v = [R.zero()] * self.A.ncols
            v[fc] = R.one()
            for (i, j) in self.pivots:
                v[j] = R.neg(self.R.rows[i][fc])
            basis.append(v)
        return basis


def rref(A: Matrix, transform=False):
    """Reduced row echelon form over a field.

    Returns (R, pivots) or (R, pivots, T) with T A = R; pivots are (row, col)
    pairs in order.
    """
    Rng = A.ring
    if not Rng.is_field:
        raise UnsupportedRing("rref requires a field")
    M = [list(r) for r in A.rows]
    n, m = A.nrows, A.ncols
    T = Matrix.identity(Rng, n).rows if transform else None
    pivots = []
    r = 0
    for c in range(m):
        # find pivot in column c at or below row r
        prow = None
        for i in range(r, n):
            if not Rng.is_zero(M[i][c]):
                prow = i
                break
        if prow is None:
            continue
        M[r], M[prow] = M[prow], M[r]
        if T is not None:
            T[r], T[prow] = T[prow], T[r]
        inv = Rng.inv(M[r][c])
        M[r] = [Rng.mul(inv, x) for x in M[r]]
        if T is not None:
            T[r] = [Rng.mul(inv, x) for x in T[r]]
        for i in range(n):
            if i != r and not Rng.is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [Rng.sub(x, Rng.mul(f, y)) for x, y in zip(M[i], M[r])]
                if T is not None:
                    T[i] = [Rng.sub(x, Rng.mul(f, y)) for x, y in zip(T[i], T[r])]
        pivots.append((r, c))
        r += 1
        if r == n:
            break
    Rm = Matrix(Rng, M, n, m)
    if transform:
        return Rm, pivots, Matrix(Rng, T, n, n)
    return Rm, pivots


def rank(A: Matrix) -> int:
    Rng = A.ring
    if Rng.is_field:
        _, pivots = rref(A)
        return len(pivots)
    if isinstance(Rng, (IntegerRing, LocalizedIntegers)):
        # rank over the fraction field
        from .rings import QQ

        B = A.change_ring(QQ, lambda x: Fraction(x))
        _, pivots = rref(B)
        return len(pivots)
    raise UnsupportedRing(f"rank over {Rng}")


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass
class SmithDecomposition:
    U: Matrix
    A: Matrix
    V: Matrix
    D: Matrix
    elementary_divisors: list

    def verify(self) -> bool:
        if (self.U * self.A * self.V) != self.D:
            return False
        R = self.D.ring
        # D diagonal with divisibility chain
        for i in range(self.D.nrows):
            for j in range(self.D.ncols):
                if i != j and not R.is_zero(self.D.rows[i][j]):
                    return False
        ds = self.elementary_divisors
        for a, b in zip(ds, ds[1:]):
            if not R.is_zero(a) and not R.divides(a, b):
                return False
        return True

    @property
    def rank(self):
        R = self.D.ring
        return sum(1 for d in self.elementary_divisors if not R.is_zero(d))


def _snf_int_core(rows, m, n):
    """In-place integer SNF; returns (U_rows, D_rows, V_rows)."""
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    D = rows

    def row_op(i, k, q):  # row i -= q * row k
        D[i] = [a - q * b for a, b in zip(D[i], D[k])]
        U[i] = [a - q * b for a, b in zip(U[i], U[k])]

    def col_op(j, k, q):  # col j -= q * col k
        for r in D:
            r[j] -= q * r[k]
        for r in V:
            r[j] -= q * r[k]

    def swap_rows(i, k):
        D[i], D[k] = D[k], D[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for r in D:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]

    def rdiv(a, p):
        # quotient with remainder of minimal absolute value
        q, r = divmod(a, p)
        if 2 * abs(r) > abs(p):
            q += 1 if (r > 0) == (p > 0) else -1
        return q

    t = 0
    while t < min(m, n):
        # locate smallest nonzero entry in the remaining block; rounded
        # quotients + reselecting the pivot every pass keeps entries small
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = D[i][j]
                if a and (best is None or abs(a) < best):
                    best = abs(a)
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        p = D[t][t]
        for i in range(t + 1, m):
            a = D[i][t]
            if a:
                q = rdiv(a, p)
                if q:
                    row_op(i, t, q)
        for j in range(t + 1, n):
            a = D[t][j]
            if a:
                q = rdiv(a, p)
                if q:
                    col_op(j, t, q)
        if any(D[i][t] for i in range(t + 1, m)) or any(
            D[t][j] for j in range(t + 1, n)
        ):
            continue
        # pivot must divide the remaining block
        bad = None
        for i in range(t + 1, m):
            if any(D[i][j] % p for j in range(t + 1, n)):
                bad = i
                break
        if bad is not None:
            row_op(t, bad, -1)  # pull the offending row in, then re-clear
            continue
        if p < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return U, D, V


def smith_normal_form(A: Matrix) -> SmithDecomposition:
    """Smith normal form over Z, Z_(p), or a field.

    Returns U, V invertible with U A V = D diagonal, divisors in a chain.
    """
    Rng = A.ring
    if isinstance(Rng, IntegersMod):
        raise UnsupportedRing("no Smith normal form over Z/m")
    if isinstance(Rng, IntegerRing):
        rows = [[int(x) for x in r] for r in A.rows]
        Ur, Dr, Vr = _snf_int_core(rows, A.nrows, A.ncols)
        U = Matrix(ZZ, Ur)
        V = Matrix(ZZ, Vr)
        D = Matrix(ZZ, Dr, A.nrows, A.ncols)
        divs = [D.rows[i][i] for i in range(min(A.nrows, A.ncols))]
        return SmithDecomposition(U, A, V, D, divs)
    if isinstance(Rng, LocalizedIntegers):
        return _snf_dvr(A)
    if Rng.is_field:
        return _snf_field(A)
    raise UnsupportedRing(f"no Smith normal form over {Rng}")


def _snf_field(A: Matrix) -> SmithDecomposition:
    Rng = A.ring
    R1, pivots, T = rref(A, transform=True)
    r = len(pivots)
    # column-permute pivots to the front
    n = A.ncols
    perm = [c for (_, c) in pivots] + [c for c in range(n) if c not in [c2 for (_, c2) in pivots]]
    V = Matrix.zeros(Rng, n, n)
    for new_j, old_j in enumerate(perm):
        V.rows[old_j][new_j] = Rng.one()
    M = R1 * V
    # clear entries right of each pivot (column ops)
    Vr = Matrix.identity(Rng, n)
    for i in range(r):
        for j in range(r, n):
            f = M.rows[i][j]
            if not Rng.is_zero(f):
                for k in range(n):
                    Vr.rows[k][j] = Rng.sub(Vr.rows[k][j], Rng.mul(f, Vr.rows[k][i]))
                for k in range(M.nrows):
                    M.rows[k][j] = Rng.sub(M.rows[k][j], Rng.mul(f, M.rows[k][i]))
    Vfull = V * Vr
    D = T * A * Vfull
    divs = [D.rows[i][i] for i in range(min(A.nrows, A.ncols))]
    return SmithDecomposition(T, A, Vfull, D, divs)


def _snf_dvr(A: Matrix) -> SmithDecomposition:
    """SNF over Z_(p): pivot on the entry of least p-valuation."""
    Rng: LocalizedIntegers = A.ring  # type: ignore[assignment]
    m, n = A.nrows, A.ncols
    D = [list(r) for r in A.rows]
    U = Matrix.identity(Rng, m).rows
    V = Matrix.identity(Rng, n).rows
    t = 0
    while t < min(m, n):
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = D[i][j]
                if a != 0:
                    v = Rng.valuation(a)
                    if best is None or v < best:
                        best = v
                        piv = (i, j)
        if piv is None:
            break
        i0, j0 = piv
        D[t], D[i0] = D[i0], D[t]
        U[t], U[i0] = U[i0], U[t]
        for r in D:
            r[t], r[j0] = r[j0], r[t]
        for r in V:
            r[t], r[j0] = r[j0], r[t]
        # normalize pivot to p^v by a unit row scaling
        a = D[t][t]
        target = Fraction(Rng.p) ** best
        u = target / a
        D[t] = [u * x for x in D[t]]
        U[t] = [u * x for x in U[t]]
        # clear column and row; everything is divisible by the pivot
        for i in range(m):
            if i != t and D[i][t] != 0:
                q = D[i][t] / D[t][t]
                D[i] = [x - q * y for x, y in zip(D[i], D[t])]
                U[i] = [x - q * y for x, y in zip(U[i], U[t])]
        for j in range(n):
            if j != t and D[t][j] != 0:
                q = D[t][j] / D[t][t]
                for r in D:
                    r[j] -= q * r[t]
                for r in V:
                    r[j] -= q * r[t]
        t += 1
    Dm = Matrix(Rng, D, m, n)
    divs = [Dm.rows[i][i] for i in range(min(m, n))]
    return SmithDecomposition(Matrix(Rng, U), A, Matrix(Rng, V), Dm, divs)


# ---------------------------------------------------------------------------
# Solvers
# ---------------------------------------------------------------------------


class SNFSolver:
    """Solve A x = b repeatedly over Z or Z_(p) from one SNF factorization."""

    def __init__(self, A: Matrix):
        self.snf = smith_normal_form(A)
        self.ring = A.ring
        self.A = A

    def solve(self, b):
        R = self.ring
        snf = self.snf
        if len(b) != self.A.nrows:
            raise DimensionMismatch("rhs length mismatch")
        c = [
            _dot(R, snf.U.rows[i], b) for i in range(snf.U.nrows)
        ]
        n = self.A.ncols
        y = [R.zero()] * n
        k = min(self.A.nrows, n)
        for i in range(len(c)):
            d = snf.D.rows[i][i] if i < k else R.zero()
            if R.is_zero(d):
                if not R.is_zero(c[i]):
                    raise NoSolution("inconsistent or non-divisible system")
            else:
                if not R.divides(d, c[i]):
                    raise NoSolution("divisibility obstruction")
                y[i] = R.exact_div(c[i], d)
        return [
            _dot(R, snf.V.rows[i], y) for i in range(n)
        ]

    def in_image(self, b) -> bool:
        try:
            self.solve(b)
            return True
        except NoSolution:
            return False

    def kernel_basis(self):
        """Basis of the kernel (a pure sublattice): columns of V past the rank."""
        R = self.ring
        snf = self.snf
        n = self.A.ncols
        r = snf.rank
        return [[snf.V.rows[i][j] for i in range(n)] for j in range(r, n)]


def _dot(R, row, vec):
    acc = R.zero()
    for a, b in zip(row, vec):
        if not R.is_zero(a) and not R.is_zero(b):
            acc = R.add(acc, R.mul(a, b))
    return acc


def make_solver(A: Matrix):
    """Solver appropriate for the ring of A (field, Z, Z_(p), or Z/m)."""
    Rng = A.ring
    if Rng.is_field:
        return FieldSolver(A)
    if isinstance(Rng, (IntegerRing, LocalizedIntegers)):
        return SNFSolver(A)
    if isinstance(Rng, IntegersMod):
        return ZmodSolver(A)
    raise UnsupportedRing(f"no solver over {Rng}")


class ZmodSolver:
    """Solve A x = b over Z/m by lifting to [A | mI] over Z."""

    def __init__(self, A: Matrix):
        Rng = A.ring
        assert isinstance(Rng, IntegersMod)
        self.m = Rng.m
        self.ring = Rng
        self.A = A
        lifted = Matrix.from_int_rows(ZZ, [[int(x) for x in r] for r in A.rows])
        aug = lifted.hstack(Matrix.identity(ZZ, A.nrows).scale(self.m))
        self.inner = SNFSolver(aug)

    def solve(self, b):
        x = self.inner.solve([int(v) for v in b])
        return [xi % self.m for xi in x[: self.A.ncols]]

    def in_image(self, b):
        try:
            self.solve(b)
            return True
        except NoSolution:
            return False

    def kernel_basis(self):
        ker = self.inner.kernel_basis()
        n = self.A.ncols
        out = []
        for v in ker:
            w = [x % self.m for x in v[:n]]
            if any(w):
                out.append(w)
        return out


def solve_linear(A: Matrix, b):
    """One-shot A x = b over the ring of A; raises NoSolution if unsolvable."""
    return make_solver(A).solve(list(b))


def kernel(A: Matrix):
    """Kernel basis vectors of A (as lists); pure/saturated over Z and Z_(p)."""
    return make_solver(A).kernel_basis()


# ---------------------------------------------------------------------------
# Abelian-group descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AbGroup:
    """Finitely generated abelian group, as invariant factors.

    ``factors`` is a tuple of invariant factors in a divisibility chain with
    entries > 1 or 0 (0 = an infinite cyclic summand).  For vector spaces over
    a field use :meth:`vector_space`, which records the dimension via factors
    all equal to the characteristic (or 0 in characteristic 0).
    """

    factors: tuple
    field_dim: int | None = None

    @classmethod
    def trivial(cls):
        return cls(())

    @classmethod
    def free(cls, rank):
        return cls((0,) * rank)

    @classmethod
    def vector_space(cls, dim, char):
        if char == 0:
            return cls((0,) * dim, field_dim=dim)
        return cls((char,) * dim, field_dim=dim)

    def is_trivial(self):
        return not self.factors

    def order(self):
        """Order, or 0 if infinite."""
        n = 1
        for f in self.factors:
            if f == 0:
                return 0
            n *= f
        return n

    def annihilated_by(self, k: int) -> bool:
        return all(f != 0 and k % f == 0 for f in self.factors)

    def __str__(self):
        if not self.factors:
            return "0"
        parts = []
        for f in self.factors:
            parts.append("Z" if f == 0 else f"Z/{f}")
        return " + ".join(parts)

    def to_json(self):
        return {"invariant_factors": list(self.factors)}


def cokernel_invariants(A: Matrix) -> AbGroup:
    """Invariant factors of R^m / column-span(A) for R = Z or Z_(p)."""
    snf = smith_normal_form(A)
    R = A.ring
    facts = []
    k = min(A.nrows, A.ncols)
    for i in range(A.nrows):
        d = snf.D.rows[i][i] if i < k else R.zero()
        if R.is_zero(d):
            facts.append(0)
        else:
            dn = _divisor_to_int(R, d)
            if dn != 1:
                facts.append(dn)
    facts.sort(key=lambda f: (f == 0, f))
    return AbGroup(tuple(facts))


def _divisor_to_int(R, d) -> int:
    if isinstance(R, IntegerRing):
        return abs(int(d))
    if isinstance(R, LocalizedIntegers):
        return R.p ** R.valuation(d)
    raise UnsupportedRing(f"divisor normalization over {R}")


def quotient_invariants(ambient_dim: int, sub_gens: list) -> AbGroup:
    """Invariant factors of Z^ambient_dim modulo the span of sub_gens.

    ``sub_gens`` are vectors of length ambient_dim over Z (or Z_(p) Fractions).
    """
    if not sub_gens:
        return AbGroup.free(ambient_dim)
    ring = ZZ if all(isinstance(x, int) for v in sub_gens for x in v) else None
    if ring is None:
        from .rings import Zloc  # caller passes Fractions only for Z_(p)

        raise UnsupportedRing("quotient_invariants expects integer vectors")
    A = Matrix(ZZ, [[v[i] for v in sub_gens] for i in range(ambient_dim)])
    return cokernel_invariants(A)

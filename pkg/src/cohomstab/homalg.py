"""Free resolutions over group rings, Tate complete resolutions, cohomology
of lattices, cup products and restriction maps.

Conventions
-----------
Resolutions consist of free left R[G]-modules F_n of rank r_n with
differentials d_n : F_n -> F_{n-1} written as r_{n-1} x r_n matrices over
R[G] acting on column vectors.  Every strategy produces F_0 = R[G] with the
augmentation sending the free generator to 1; the Tate splice in degree 0 is
then multiplication by the norm element.

A free module R[G]^r "unrolls" to R^{r|G|} with basis (i, g) ordered by
i * |G| + g; left multiplication by a group-ring element becomes a block
matrix in that basis, which is where all linear algebra happens.
"""

from __future__ import annotations

from .errors import (
    CapTooSmall,
    GroupMismatch,
    LiftFailed,
    RingMismatch,
    StrategyUnavailable,
    ZeroClass,
)
from .groups import FiniteGroup, Subgroup
from .lattices import Lattice, generating_set, trivial_lattice
from .linalg import (
    AbGroup,
    FieldSolver,
    Matrix,
    cokernel_invariants,
    make_solver,
    rank as matrix_rank,
)
from .rings import (
    CoeffRing,
    IntegerRing,
    IntegersMod,
    LocalizedIntegers,
    PrimeField,
    ZZ,
)


# ---------------------------------------------------------------------------
# Matrices over the group ring
# ---------------------------------------------------------------------------


class GMat:
    """Matrix over R[G]; entries are dicts mapping group element -> R scalar."""

    def __init__(self, group: FiniteGroup, ring: CoeffRing, rows):
        self.group = group
        self.ring = ring
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0

    @classmethod
    def zeros(cls, group, ring, nrows, ncols):
        return cls(group, ring, [[{} for _ in range(ncols)] for _ in range(nrows)])

    def entry_clean(self):
        R = self.ring
        for row in self.rows:
            for e in row:
                for g in [g for g, c in e.items() if R.is_zero(c)]:
                    del e[g]
        return self

    def __mul__(self, other: "GMat") -> "GMat":
        if self.ncols != other.nrows:
            raise GroupMismatch("group-ring matrix shape mismatch")
        G, R = self.group, self.ring
        out = GMat.zeros(G, R, self.nrows, other.ncols)
        for i in range(self.nrows):
            for k in range(self.ncols):
                a = self.rows[i][k]
                if not a:
                    continue
                for j in range(other.ncols):
                    b = other.rows[k][j]
                    if not b:
                        continue
                    tgt = out.rows[i][j]
                    # composite entry is sum_k b_kj a_ik in R[G]: the second
                    # map's coefficients multiply from the left
                    for g, c in a.items():
                        for h, d in b.items():
                            gh = G.mul(h, g)
                            cur = tgt.get(gh, R.zero())
                            tgt[gh] = R.add(cur, R.mul(c, d))
        return out.entry_clean()

    def is_zero(self):
        return all(not e for row in self.rows for e in row)

    def antipode_transpose(self) -> "GMat":
        """Transpose with g -> g^{-1} applied to every entry (module dual)."""
        G = self.group
        rows = [
            [
                {G.inv(g): c for g, c in self.rows[i][j].items()}
                for i in range(self.nrows)
            ]
            for j in range(self.ncols)
        ]
        return GMat(G, self.ring, rows)

    def unroll(self) -> Matrix:
        """R-matrix of the map in the basis (i, g).

        The image of the basis vector g'' e_j is sum_i g'' a_ij e_i, so each
        block is right multiplication: block(i,j)[g', g''] = entry(i,j) at
        g''^{-1} g'.
        """
        G, R = self.group, self.ring
        n = G.order
        M = Matrix.zeros(R, self.nrows * n, self.ncols * n)
        for i in range(self.nrows):
            for j in range(self.ncols):
                a = self.rows[i][j]
                for g, c in a.items():
                    # g' = g'' * g as g'' runs over G
                    for g2 in range(n):
                        M.rows[i * n + G.mul(g2, g)][j * n + g2] = c
        return M

    def cochain_map(self, M: Lattice) -> Matrix:
        """Map induced on Hom_{R[G]}(-, M) = M^rank.

        For d : F_n -> F_{n-1} this is delta : M^{r_{n-1}} -> M^{r_n} with
        block (j, i) = sum_g c_g action_M(g) over the (i, j) entry of d.
        """
        R = self.ring
        if M.ring != R:
            raise RingMismatch("coefficient lattice over a different ring")
        r = M.rank
        out = Matrix.zeros(R, self.ncols * r, self.nrows * r)
        for i in range(self.nrows):
            for j in range(self.ncols):
                a = self.rows[i][j]
                for g, c in a.items():
                    A = M.act(g)
                    for s in range(r):
                        for t in range(r):
                            x = A.rows[s][t]
                            if not R.is_zero(x):
                                cur = out.rows[j * r + s][i * r + t]
                                out.rows[j * r + s][i * r + t] = R.add(cur, R.mul(c, x))
        return out

    def to_json(self):
        return [
            [
                {str(g): str(c) for g, c in sorted(e.items())}
                for e in row
            ]
            for row in self.rows
        ]


def translate_vec(G: FiniteGroup, g: int, vec, rank: int):
    """Left translation by g on an unrolled free module R[G]^rank."""
    n = G.order
    out = [None] * (rank * n)
    for i in range(rank):
        base = i * n
        for h in range(n):
            out[base + G.mul(g, h)] = vec[base + h]
    return out


def roll_vector(G: FiniteGroup, ring, vec, rank: int):
    """Unrolled vector -> list of group-ring entries (one per free basis)."""
    n = G.order
    out = []
    for i in range(rank):
        e = {}
        for g in range(n):
            c = vec[i * n + g]
            if not ring.is_zero(c):
                e[g] = c
        out.append(e)
    return out


# ---------------------------------------------------------------------------
# Resolutions
# ---------------------------------------------------------------------------


def _cyclic_generator(G: FiniteGroup):
    for g in range(1, G.order):
        if G.element_order(g) == G.order:
            return g
    return None


class Resolution:
    """Free resolution of the trivial module R over R[G].

    Strategies: periodic (cyclic groups), bar (any group), tensor_product
    (direct products), minimal (kernel generators computed degree by degree).
    """

    def __init__(self, group, ring, strategy):
        self.group = group
        self.ring = ring
        self.strategy = strategy
        self.ranks = [1]
        self.diffs = {}  # n >= 1 -> GMat r_{n-1} x r_n
        self.cap = 0
        self._unrolled = {}
        self._solvers = {}
        self._state = {}

    @classmethod
    def build(cls, group, ring, cap, strategy="auto"):
        if strategy == "auto":
            strategy = cls.pick_strategy(group)
        res = cls(group, ring, strategy)
        res.extend(cap)
        return res

    @staticmethod
    def pick_strategy(group):
        if _cyclic_generator(group) is not None:
            return "periodic"
        if getattr(group, "product_factors", None):
            return "tensor_product"
        return "minimal"

    def rank(self, n):
        return self.ranks[n]

    def diff(self, n) -> GMat:
        if n > self.cap:
            raise CapTooSmall(f"resolution computed to degree {self.cap}, need {n}")
        return self.diffs[n]

    def unrolled(self, n) -> Matrix:
        if n not in self._unrolled:
            self._unrolled[n] = self.diff(n).unroll()
        return self._unrolled[n]

    def solver(self, n):
        if n not in self._solvers:
            self._solvers[n] = make_solver(self.unrolled(n))
        return self._solvers[n]

    def extend(self, cap):
        while self.cap < cap:
            n = self.cap + 1
            fn = getattr(self, "_step_" + self.strategy, None)
            if fn is None:
                raise StrategyUnavailable(f"unknown strategy {self.strategy!r}")
            fn(n)
            self.cap = n
        return self

    # -- periodic ----------------------------------------------------------

    def _step_periodic(self, n):
        G, R = self.group, self.ring
        t = _cyclic_generator(G)
        if t is None:
            raise StrategyUnavailable("periodic strategy needs a cyclic group")
        if n % 2 == 1:
            entry = {t: R.one(), 0: R.from_int(-1)}
        else:
            entry = {g: R.one() for g in range(G.order)}
        self.ranks.append(1)
        self.diffs[n] = GMat(G, R, [[dict(entry)]])

    # -- normalized bar ----------------------------------------------------

    def _bar_basis(self, n):
        G = self.group
        if n == 0:
            return [()]
        nonid = list(range(1, G.order))
        basis = [()]
        for _ in range(n):
            basis = [t + (g,) for t in basis for g in nonid]
        return basis

    def _step_bar(self, n):
        G, R = self.group, self.ring
        src = self._bar_basis(n)
        tgt = self._bar_basis(n - 1)
        tindex = {t: i for i, t in enumerate(tgt)}
        d = GMat.zeros(G, R, len(tgt), len(src))
        one, none = R.one(), R.from_int(-1)
        for j, tup in enumerate(src):
            # g1 . [g2|...|gn]
            head = tup[1:]
            e = d.rows[tindex[head]][j]
            e[tup[0]] = R.add(e.get(tup[0], R.zero()), one)
            sign = none
            for i in range(len(tup) - 1):
                prod = G.mul(tup[i], tup[i + 1])
                if prod != 0:
                    merged = tup[:i] + (prod,) + tup[i + 2:]
                    e = d.rows[tindex[merged]][j]
                    e[0] = R.add(e.get(0, R.zero()), sign)
                sign = R.neg(sign)
            tail = tup[:-1]
            e = d.rows[tindex[tail]][j]
            e[0] = R.add(e.get(0, R.zero()), sign)
        self.ranks.append(len(src))
        self.diffs[n] = d.entry_clean()

    # -- tensor product over direct factors --------------------------------

    def _tensor_parts(self):
        if "parts" not in self._state:
            factors = getattr(self.group, "product_factors", None)
            if not factors:
                raise StrategyUnavailable("tensor_product needs a direct product")
            A, B = factors
            self._state["parts"] = (
                Resolution.build(A, self.ring, 1, "auto"),
                Resolution.build(B, self.ring, 1, "auto"),
                A,
                B,
            )
        return self._state["parts"]

    def _embed_a(self, entry, m):
        return {g * m: c for g, c in entry.items()}

    def _step_tensor_product(self, n):
        resA, resB, A, B = self._tensor_parts()
        resA.extend(n)
        resB.extend(n)
        G, R = self.group, self.ring
        m = B.order

        def basis(k):
            # (i, s, t) with i + j = k, ordered by i then s * rB + t
            out = []
            for i in range(k + 1):
                j = k - i
                for s in range(resA.rank(i)):
                    for t in range(resB.rank(j)):
                        out.append((i, s, t))
            return out

        src = basis(n)
        tgt = basis(n - 1)
        tindex = {b: i for i, b in enumerate(tgt)}
        d = GMat.zeros(G, R, len(tgt), len(src))
        for col, (i, s, t) in enumerate(src):
            j = n - i
            if i >= 1:
                dA = resA.diff(i)
                for s2 in range(resA.rank(i - 1)):
                    entry = dA.rows[s2][s]
                    if entry:
                        tgt_e = d.rows[tindex[(i - 1, s2, t)]][col]
                        for g, c in self._embed_a(entry, m).items():
                            tgt_e[g] = R.add(tgt_e.get(g, R.zero()), c)
            if j >= 1:
                dB = resB.diff(j)
                sign = R.one() if i % 2 == 0 else R.from_int(-1)
                for t2 in range(resB.rank(j - 1)):
                    entry = dB.rows[t2][t]
                    if entry:
                        tgt_e = d.rows[tindex[(i, s, t2)]][col]
                        for g, c in entry.items():
                            tgt_e[g] = R.add(tgt_e.get(g, R.zero()), R.mul(sign, c))
        self.ranks.append(len(src))
        self.diffs[n] = d.entry_clean()

    # -- minimal / small ---------------------------------------------------

    def _step_minimal(self, n):
        G, R = self.group, self.ring
        order = G.order
        if n == 1:
            # kernel of the augmentation (R[G])^1 -> R
            aug = Matrix(R, [[R.one()] * order])
            ker = make_solver(aug).kernel_basis()
            prev_rank = 1
        else:
            ker = self.solver(n - 1).kernel_basis()
            prev_rank = self.ranks[n - 1]
        gens = self._module_generators(ker, prev_rank)
        cols = [roll_vector(G, R, v, self.ranks[n - 1]) for v in gens]
        d = GMat(
            G,
            R,
            [[cols[j][i] for j in range(len(gens))] for i in range(self.ranks[n - 1])],
        )
        self.ranks.append(len(gens))
        self.diffs[n] = d.entry_clean()

    def _module_generators(self, kernel_basis, rank):
        """Small R[G]-generating set of the span of an R-basis of a kernel."""
        G, R = self.group, self.ring
        if not kernel_basis:
            return []
        if (
            isinstance(R, PrimeField)
            and _is_p_group(G, R.p)
        ):
            return self._radical_generators(kernel_basis, rank)
        gens = []
        span_cols = []
        solver = None
        for v in kernel_basis:
            if solver is not None and solver.in_image(v):
                continue
            gens.append(v)
            for g in range(G.order):
                span_cols.append(translate_vec(G, g, v, rank))
            S = Matrix(R, [[col[i] for col in span_cols] for i in range(len(v))])
            solver = make_solver(S)
        return gens

    def _radical_generators(self, kernel_basis, rank):
        """Minimal generators K/JK for a p-group algebra over F_p."""
        G, R = self.group, self.ring
        dim = len(kernel_basis[0])
        rad_cols = []
        for g in generating_set(G):
            for v in kernel_basis:
                w = translate_vec(G, g, v, rank)
                rad_cols.append([R.sub(a, b) for a, b in zip(w, v)])
        gens = []
        cols = list(rad_cols)
        solver = make_solver(Matrix(R, [[c[i] for c in cols] for i in range(dim)])) if cols else None
        for v in kernel_basis:
            if solver is not None and solver.in_image(v):
                continue
            gens.append(v)
            cols.append(v)
            solver = make_solver(Matrix(R, [[c[i] for c in cols] for i in range(dim)]))
        return gens

    # -- validation --------------------------------------------------------

    def validate(self, check_exactness=True):
        G, R = self.group, self.ring
        aug = GMat(G, R, [[{g: R.one() for g in range(G.order)} for _ in range(1)]])
        # aug here is the norm row only when r_0 = 1; the augmentation itself
        # is epsilon, and epsilon(d_1) = 0 iff every column sums to zero
        for j in range(self.diffs[1].ncols):
            total = R.zero()
            for c in self.diffs[1].rows[0][j].values():
                total = R.add(total, c)
            if not R.is_zero(total):
                raise LiftFailed("d_1 does not land in the augmentation ideal")
        for n in range(1, self.cap):
            if not (self.diff(n) * self.diff(n + 1)).is_zero():
                raise LiftFailed(f"d_{n} d_{n+1} != 0")
        if check_exactness:
            for n in range(1, self.cap):
                rn = matrix_rank(self.unrolled(n))
                rn1 = matrix_rank(self.unrolled(n + 1))
                if rn + rn1 != self.ranks[n] * G.order:
                    raise LiftFailed(f"resolution not exact at degree {n}")
            if matrix_rank(self.unrolled(1)) != G.order - 1:
                raise LiftFailed("image of d_1 is not the augmentation ideal")
        return True


def _is_p_group(G: FiniteGroup, p: int) -> bool:
    n = G.order
    while n % p == 0:
        n //= p
    return n == 1


class CompleteResolution:
    """Tate complete resolution: positive part a free resolution, negative
    part its antipode dual, spliced in degree 0 by the norm."""

    def __init__(self, res: Resolution):
        self.res = res
        self.group = res.group
        self.ring = res.ring

    def rank(self, n):
        return self.res.rank(n) if n >= 0 else self.res.rank(-n - 1)

    def diff(self, n) -> GMat:
        """d-hat_n : Q_n -> Q_{n-1}."""
        G, R = self.group, self.ring
        if n >= 1:
            return self.res.diff(n)
        if n == 0:
            norm = {g: R.one() for g in range(G.order)}
            return GMat(G, R, [[norm]])
        return self.res.diff(-n).antipode_transpose()

    def needed_cap(self, lo, hi):
        return max(hi + 1, -lo, 1)

    def validate(self, lo, hi):
        self.res.extend(self.needed_cap(lo, hi))
        for n in range(lo + 1, hi + 1):
            if not (self.diff(n) * self.diff(n + 1)).is_zero():
                raise LiftFailed(f"complete resolution fails d^2 = 0 at {n}")
        return True


# ---------------------------------------------------------------------------
# Cohomology
# ---------------------------------------------------------------------------


def _subquotient(ring, delta_cur: Matrix, delta_prev) -> AbGroup:
    """ker(delta_cur) / im(delta_prev) as an abstract abelian group."""
    if ring.is_field:
        k = len(make_solver(delta_cur).kernel_basis())
        r = matrix_rank(delta_prev) if delta_prev is not None else 0
        return AbGroup.vector_space(k - r, ring.characteristic)
    if isinstance(ring, (IntegerRing, LocalizedIntegers)):
        kb = make_solver(delta_cur).kernel_basis()
        if not kb:
            return AbGroup.trivial()
        K = Matrix(ring, [[v[i] for v in kb] for i in range(delta_cur.ncols)])
        if delta_prev is None:
            return AbGroup(tuple([0] * len(kb)))
        ksolve = make_solver(K)
        cols = [ksolve.solve(delta_prev.col(j)) for j in range(delta_prev.ncols)]
        if not cols:
            return AbGroup(tuple([0] * len(kb)))
        Y = Matrix(ring, [[c[i] for c in cols] for i in range(len(kb))])
        return cokernel_invariants(Y)
    if isinstance(ring, IntegersMod):
        raise RingMismatch("Z/m coefficients go through cohomology_mod")
    raise RingMismatch(f"no cohomology subquotient over {ring}")


def cohomology(G: FiniteGroup, M: Lattice, n: int, resolution=None, strategy="auto") -> AbGroup:
    """H^n(G; M) for a lattice M over Z, Z_(p), Q or a finite field."""
    if M.group != G:
        raise GroupMismatch("coefficient lattice over a different group")
    res = resolution or Resolution.build(G, M.ring, n + 1, strategy)
    res.extend(n + 1)
    delta_cur = res.diff(n + 1).cochain_map(M)
    delta_prev = res.diff(n).cochain_map(M) if n >= 1 else None
    return _subquotient(M.ring, delta_cur, delta_prev)


def tate_cohomology(G: FiniteGroup, M: Lattice, n: int, resolution=None, strategy="auto") -> AbGroup:
    """Tate cohomology H-hat^n(G; M) in any degree."""
    if M.group != G:
        raise GroupMismatch("coefficient lattice over a different group")
    res = resolution or Resolution.build(G, M.ring, max(n + 1, -n, 1), strategy)
    comp = CompleteResolution(res)
    res.extend(comp.needed_cap(n, n))
    delta_cur = comp.diff(n + 1).cochain_map(M)
    delta_prev = comp.diff(n).cochain_map(M)
    return _subquotient(M.ring, delta_cur, delta_prev)


def cohomology_mod(G: FiniteGroup, m: int, n: int, resolution=None, strategy="auto") -> AbGroup:
    """H^n(G; Z/m) with trivial action, computed from an integral resolution."""
    res = resolution or Resolution.build(G, ZZ, n + 1, strategy)
    res.extend(n + 1)
    triv = trivial_lattice(G, ZZ)
    A = res.diff(n + 1).cochain_map(triv)
    B = res.diff(n).cochain_map(triv) if n >= 1 else None
    return _mod_subquotient(A, B, m)


def _mod_subquotient(A: Matrix, B, m: int) -> AbGroup:
    """ker(A mod m) / (im(B) + m) inside (Z/m)^r, with A, B integral."""
    r = A.ncols
    aug = A.hstack(Matrix.identity(ZZ, A.nrows).scale(m))
    kb = make_solver(aug).kernel_basis()
    K = Matrix(ZZ, [[v[i] for v in kb] for i in range(r)])
    ksolve = make_solver(K)
    den = []
    if B is not None:
        den.extend(B.col(j) for j in range(B.ncols))
    for i in range(r):
        e = [0] * r
        e[i] = m
        den.append(e)
    cols = [ksolve.solve(d) for d in den]
    Y = Matrix(ZZ, [[c[i] for c in cols] for i in range(len(kb))])
    return cokernel_invariants(Y)


# ---------------------------------------------------------------------------
# Cocycles, cup products, chain-map lifting
# ---------------------------------------------------------------------------


class CohomologyClass:
    """Cocycle with trivial coefficients: a vector in R^{r_n}."""

    def __init__(self, res: Resolution, degree: int, vec, check=True):
        self.res = res
        self.degree = degree
        self.vec = list(vec)
        self.ring = res.ring
        if check:
            self._check_cocycle()

    def _check_cocycle(self):
        res, R = self.res, self.ring
        res.extend(self.degree + 1)
        d = res.diff(self.degree + 1)
        for j in range(d.ncols):
            acc = R.zero()
            for i in range(d.nrows):
                s = R.zero()
                for c in d.rows[i][j].values():
                    s = R.add(s, c)
                acc = R.add(acc, R.mul(s, self.vec[i]))
            if not R.is_zero(acc):
                raise ZeroClass("vector is not a cocycle")

    def is_zero_vector(self):
        return all(self.ring.is_zero(x) for x in self.vec)

    def is_coboundary(self):
        if self.degree == 0:
            return self.is_zero_vector()
        triv = trivial_lattice(self.res.group, self.ring)
        B = self.res.diff(self.degree).cochain_map(triv)
        return make_solver(B).in_image(self.vec)

    def chain_lift(self, steps):
        """Images of the free generators of P_{degree+k} in P_k, k <= steps."""
        return lift_cocycle(self.res, self.degree, self.vec, steps)

    def cup(self, other: "CohomologyClass") -> "CohomologyClass":
        if self.res is not other.res:
            raise GroupMismatch("cup product needs classes over one resolution")
        R = self.ring
        n, m = self.degree, other.degree
        self.res.extend(n + m + 1)
        imgs = self.chain_lift(m)[m]
        order = self.res.group.order
        out = []
        for j in range(self.res.rank(n + m)):
            acc = R.zero()
            v = imgs[j]
            for i in range(self.res.rank(m)):
                coeff = R.zero()
                for g in range(order):
                    coeff = R.add(coeff, v[i * order + g])
                acc = R.add(acc, R.mul(coeff, other.vec[i]))
            out.append(acc)
        return CohomologyClass(self.res, n + m, out, check=False)

    def __mul__(self, other):
        return self.cup(other)

    def __repr__(self):
        return f"CohomologyClass(deg={self.degree}, {[self.ring.element_str(x) for x in self.vec]})"


def apply_chain_level(G: FiniteGroup, imgs, vec, source_rank: int, ring):
    """Extend generator images R[G]-linearly: value on an unrolled vector."""
    order = G.order
    dim = len(imgs[0])
    out = [ring.zero()] * dim
    for i in range(source_rank):
        base = imgs[i]
        for g in range(order):
            c = vec[i * order + g]
            if ring.is_zero(c):
                continue
            shifted = translate_vec(G, g, base, dim // order)
            for t in range(dim):
                out[t] = ring.add(out[t], ring.mul(c, shifted[t]))
    return out


def lift_cocycle(res: Resolution, n: int, vec, steps: int):
    """Chain map lifting a degree-n cocycle u : P_n -> R over the identity.

    Returns levels[k] = list over generators of P_{n+k} of their images in
    the unrolled P_k, for 0 <= k <= steps.
    """
    G, R = res.group, res.ring
    order = G.order
    res.extend(n + steps)
    levels = []
    lvl0 = []
    for j in range(res.rank(n)):
        x = [R.zero()] * (res.rank(0) * order)
        x[0] = vec[j]
        lvl0.append(x)
    levels.append(lvl0)
    for k in range(1, steps + 1):
        dk_src = res.unrolled(n + k)
        solver = res.solver(k)
        prev = levels[k - 1]
        lvl = []
        for j in range(res.rank(n + k)):
            col = dk_src.col(j * order)  # image of e_j (identity coordinate)
            rhs = apply_chain_level(G, prev, col, res.rank(n + k - 1), R)
            try:
                lvl.append(solver.solve(rhs))
            except Exception as exc:
                raise LiftFailed(f"chain lift failed at step {k}") from exc
        levels.append(lvl)
    return levels


# ---------------------------------------------------------------------------
# Restriction along injective homomorphisms
# ---------------------------------------------------------------------------


def inclusion_map(H: Subgroup):
    """Element mapping of the standalone subgroup group into the parent."""
    return list(H.elements)


def conjugation_map(G: FiniteGroup, H: Subgroup, K: Subgroup, g: int):
    """Element mapping H.group -> K.group for conjugation h -> g h g^{-1}."""
    out = []
    for h in H.elements:
        out.append(K.index_of[G.conj(g, h)])
    return out


def compose_maps(first, second):
    return [second[x] for x in first]


class ComparisonMap:
    """Chain map between resolutions covering a group homomorphism.

    ``hom`` maps elements of res_src.group injectively into res_tgt.group.
    Applied to cocycles on the target resolution it computes the induced
    (restriction or conjugation) map on cohomology with trivial coefficients.
    """

    def __init__(self, res_src: Resolution, res_tgt: Resolution, hom):
        self.src = res_src
        self.tgt = res_tgt
        self.hom = list(hom)
        self._levels = None
        self._depth = -1
        self._validate_hom()

    def _validate_hom(self):
        Gs, Gt = self.src.group, self.tgt.group
        if len(self.hom) != Gs.order or len(set(self.hom)) != Gs.order:
            raise GroupMismatch("homomorphism must be injective")
        if self.hom[0] != 0:
            raise GroupMismatch("homomorphism must preserve the identity")
        for a in range(Gs.order):
            for b in range(Gs.order):
                if self.hom[Gs.mul(a, b)] != Gt.mul(self.hom[a], self.hom[b]):
                    raise GroupMismatch("not a homomorphism")

    def levels(self, depth):
        if self._depth >= depth:
            return self._levels
        Gs, Gt = self.src.group, self.tgt.group
        R = self.src.ring
        self.src.extend(depth)
        self.tgt.extend(depth)
        if self._levels is None:
            x = [R.zero()] * (self.tgt.rank(0) * Gt.order)
            x[0] = R.one()
            self._levels = [[x]]
            self._depth = 0
        for k in range(self._depth + 1, depth + 1):
            d_src = self.src.unrolled(k)
            solver = self.tgt.solver(k)
            prev = self._levels[k - 1]
            lvl = []
            for j in range(self.src.rank(k)):
                col = d_src.col(j * Gs.order)
                rhs = self._apply_semilinear(prev, col, self.src.rank(k - 1))
                try:
                    lvl.append(solver.solve(rhs))
                except Exception as exc:
                    raise LiftFailed(f"comparison lift failed at degree {k}") from exc
            self._levels.append(lvl)
            self._depth = k
        return self._levels

    def _apply_semilinear(self, imgs, vec, source_rank):
        Gs, Gt = self.src.group, self.tgt.group
        R = self.src.ring
        dim = len(imgs[0])
        out = [R.zero()] * dim
        for i in range(source_rank):
            base = imgs[i]
            for h in range(Gs.order):
                c = vec[i * Gs.order + h]
                if R.is_zero(c):
                    continue
                shifted = translate_vec(Gt, self.hom[h], base, dim // Gt.order)
                for t in range(dim):
                    out[t] = R.add(out[t], R.mul(c, shifted[t]))
        return out

    def apply(self, cls: CohomologyClass) -> CohomologyClass:
        """Pull a target-resolution class back to the source resolution."""
        if cls.res is not self.tgt:
            raise GroupMismatch("class lives on a different resolution")
        n = cls.degree
        lvl = self.levels(n)[n]
        R = self.src.ring
        order = self.tgt.group.order
        out = []
        for j in range(self.src.rank(n)):
            acc = R.zero()
            v = lvl[j]
            for i in range(self.tgt.rank(n)):
                coeff = R.zero()
                for g in range(order):
                    coeff = R.add(coeff, v[i * order + g])
                acc = R.add(acc, R.mul(coeff, cls.vec[i]))
            out.append(acc)
        return CohomologyClass(self.src, n, out, check=False)


def restriction_map(res_H: Resolution, res_G: Resolution, H: Subgroup) -> ComparisonMap:
    if res_G.group != H.parent or res_H.group != H.group:
        raise GroupMismatch("restriction data mismatched")
    return ComparisonMap(res_H, res_G, inclusion_map(H))


# ---------------------------------------------------------------------------
# Cohomology bases over a field (representative cocycles)
# ---------------------------------------------------------------------------


class CochainQuotient:
    """Basis and coordinates for H^n = ker(delta_n) / im(delta_{n-1})."""

    def __init__(self, ring, delta_cur: Matrix, delta_prev):
        if not ring.is_field:
            raise RingMismatch("cocycle bases need a field")
        self.ring = ring
        ker = FieldSolver(delta_cur).kernel_basis()
        im_cols = (
            [delta_prev.col(j) for j in range(delta_prev.ncols)]
            if delta_prev is not None
            else []
        )
        dim = delta_cur.ncols
        cols = im_cols + ker
        if cols:
            M = Matrix(ring, [[c[i] for c in cols] for i in range(dim)])
            _, pivots = _rref_of(M)
            chosen = [
                c - len(im_cols)
                for (_, c) in pivots
                if c >= len(im_cols)
            ]
        else:
            chosen = []
        self.reps = [ker[c] for c in chosen]
        self.dim = len(self.reps)
        sel_cols = im_cols + self.reps
        if sel_cols:
            S = Matrix(ring, [[c[i] for c in sel_cols] for i in range(dim)])
            self._solver = FieldSolver(S)
        else:
            self._solver = None
        self._n_im = len(im_cols)

    def coordinates(self, vec):
        """Coordinates of a cocycle in the chosen basis of H^n."""
        if self._solver is None:
            return []
        y = self._solver.solve(list(vec))
        return y[self._n_im:]


def _rref_of(M):
    from .linalg import rref

    return rref(M)


class ZmodCochainQuotient:
    """H^n with Z/m coefficients: representative cocycles, generator orders,
    and coordinates, computed by integer lifting."""

    def __init__(self, m: int, delta_cur: Matrix, delta_prev):
        from .linalg import smith_normal_form

        self.m = m
        self.ring = delta_cur.ring
        r = delta_cur.ncols
        A = Matrix.from_int_rows(ZZ, [[int(x) for x in row] for row in delta_cur.rows])
        aug = A.hstack(Matrix.identity(ZZ, A.nrows).scale(ZZ.from_int(m)))
        kb = make_solver(aug).kernel_basis()
        # mod-m cocycles = projection of ker[A | mI]; the projection is a
        # basis of a rank-r sublattice of Z^r containing m Z^r
        K = Matrix(ZZ, [[v[i] for v in kb] for i in range(r)], r, len(kb))
        self._K = K
        self._ksolve = make_solver(K)
        den = []
        if delta_prev is not None:
            B = Matrix.from_int_rows(
                ZZ, [[int(x) for x in row] for row in delta_prev.rows]
            )
            den.extend(B.col(j) for j in range(B.ncols))
        for i in range(r):
            e = [0] * r
            e[i] = m
            den.append(e)
        cols = [self._ksolve.solve(d) for d in den]
        k = len(kb)
        Y = Matrix(ZZ, [[c[i] for c in cols] for i in range(k)], k, len(cols))
        snf = smith_normal_form(Y)
        self._U = snf.U
        self._k = k
        self._divisors = [
            abs(int(snf.D.rows[i][i])) if i < min(Y.nrows, Y.ncols) else 0
            for i in range(k)
        ]
        uinv_solver = make_solver(snf.U)
        self.orders = []
        self.reps = []
        for i in range(k):
            d = self._divisors[i]
            if d == 1:
                continue
            e = [0] * k
            e[i] = 1
            u = uinv_solver.solve(e)
            vec = [sum(K.rows[t][s] * u[s] for s in range(k)) % m for t in range(r)]
            self.orders.append(d if d else m)
            self.reps.append(vec)

    @property
    def dim(self):
        return len(self.reps)

    def coordinates(self, vec):
        """Coordinates (one per generator, mod its order) of a cocycle."""
        lifted = [int(x) for x in vec]
        y = self._ksolve.solve(lifted)
        out = []
        for i in range(self._k):
            d = self._divisors[i]
            if d == 1:
                continue
            full = sum(self._U.rows[i][s] * y[s] for s in range(self._k))
            out.append(full % (d if d else self.m))
        return out

    def is_zero_class(self, vec):
        return all(c == 0 for c in self.coordinates(vec))


def cohomology_quotient(res: Resolution, n: int) -> CochainQuotient:
    res.extend(n + 1)
    triv = trivial_lattice(res.group, res.ring)
    cur = res.diff(n + 1).cochain_map(triv)
    prev = res.diff(n).cochain_map(triv) if n >= 1 else None
    return CochainQuotient(res.ring, cur, prev)


# ---------------------------------------------------------------------------
# Carlson lattices L_zeta
# ---------------------------------------------------------------------------


def kernel_sublattice(G: FiniteGroup, ring, vectors, free_rank):
    """Lattice structure on the span of G-stable vectors inside R[G]^free_rank."""
    dim = free_rank * G.order
    K = Matrix(ring, [[v[i] for v in vectors] for i in range(dim)])
    solver = make_solver(K)
    acts = []
    for g in range(G.order):
        cols = [solver.solve(translate_vec(G, g, v, free_rank)) for v in vectors]
        acts.append(Matrix(ring, [[c[i] for c in cols] for i in range(len(vectors))]))
    return Lattice(G, ring, acts, validate=True)


def carlson_lattice(E: FiniteGroup, ring, zeta: CohomologyClass) -> Lattice:
    """L_zeta: kernel of the map Omega^n(triv) -> R classified by zeta."""
    res = zeta.res
    n = zeta.degree
    if n < 1:
        raise ZeroClass("carlson lattice needs positive degree")
    res.extend(n + 1)
    R = ring
    G = E
    omega = res.solver(n - 1).kernel_basis() if n >= 2 else _aug_kernel(res)
    # zeta factors through Omega^n = im(d_n); evaluate via preimages
    dn_solver = res.solver(n)
    order = G.order
    vals = []
    for w in omega:
        x = dn_solver.solve(w)
        acc = R.zero()
        for i in range(res.rank(n)):
            coeff = R.zero()
            for g in range(order):
                coeff = R.add(coeff, x[i * order + g])
            acc = R.add(acc, R.mul(coeff, zeta.vec[i]))
        vals.append(acc)
    if all(R.is_zero(v) for v in vals):
        raise ZeroClass("class vanishes on the syzygy; L_zeta undefined")
    F = Matrix(R, [vals])
    ker_coords = make_solver(F).kernel_basis()
    vectors = []
    for c in ker_coords:
        v = [R.zero()] * len(omega[0])
        for coeff, w in zip(c, omega):
            if not R.is_zero(coeff):
                for t in range(len(v)):
                    v[t] = R.add(v[t], R.mul(coeff, w[t]))
        vectors.append(v)
    L = kernel_sublattice(G, R, vectors, res.rank(n - 1))
    L.name = f"L_zeta(deg {n})"
    return L


def _aug_kernel(res: Resolution):
    G, R = res.group, res.ring
    aug = Matrix(R, [[R.one()] * G.order])
    return make_solver(aug).kernel_basis()

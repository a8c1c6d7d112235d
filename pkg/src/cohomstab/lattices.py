"""R[G]-lattices: G-actions by invertible matrices on free R-modules.

Basis orderings and coset representatives follow a global least-index rule
so every construction is reproducible bit for bit.
"""

from __future__ import annotations

from .errors import (
    GroupMismatch,
    InvalidLattice,
    InvalidSubgroup,
    NotASubgroup,
    RingMismatch,
)
from .groups import FiniteGroup, Subgroup
from .linalg import Matrix
from .rings import CoeffRing, Fp, ZZ


def generating_set(G: FiniteGroup):
    """Small deterministic generating set (greedy by element index)."""
    gens = []
    current = (0,)
    for g in range(1, G.order):
        if g not in current:
            gens.append(g)
            current = G.closure(gens)
            if len(current) == G.order:
                break
    return gens


class Lattice:
    def __init__(self, group: FiniteGroup, ring: CoeffRing, action, validate=True, name=None):
        """action: list of rank x rank Matrices indexed by group element."""
        self.group = group
        self.ring = ring
        self.action = list(action)
        self.rank = self.action[0].nrows if self.action else 0
        self.name = name
        if len(self.action) != group.order:
            raise InvalidLattice("need one action matrix per group element")
        if validate:
            self.validate()

    def validate(self):
        ident = Matrix.identity(self.ring, self.rank)
        if self.action[0] != ident:
            raise InvalidLattice("identity element must act as the identity matrix")
        for s in generating_set(self.group):
            for h in range(self.group.order):
                if self.action[s] * self.action[h] != self.action[self.group.mul(s, h)]:
                    raise InvalidLattice(
                        f"action is not a homomorphism at ({s},{h})"
                    )

    def act(self, g):
        return self.action[g]

    def apply_group_element(self, g, vec):
        R = self.ring
        A = self.action[g]
        return [
            _rowdot(R, A.rows[i], vec) for i in range(self.rank)
        ]

    def change_ring(self, ring: CoeffRing, convert):
        return Lattice(
            self.group,
            ring,
            [A.change_ring(ring, convert) for A in self.action],
            validate=False,
            name=self.name,
        )

    def to_json(self):
        return {
            "ring": self.ring.tag,
            "rank": self.rank,
            "action": {
                str(g): [[str(x) for x in row] for row in self.action[g].rows]
                for g in range(self.group.order)
            },
        }

    def __repr__(self):
        nm = f" {self.name}" if self.name else ""
        return f"Lattice({self.group.name},{self.ring},rank={self.rank}{nm})"

    def __eq__(self, other):
        return (
            isinstance(other, Lattice)
            and self.group == other.group
            and self.ring == other.ring
            and self.action == other.action
        )


def _rowdot(R, row, vec):
    acc = R.zero()
    for a, b in zip(row, vec):
        if not R.is_zero(a) and not R.is_zero(b):
            acc = R.add(acc, R.mul(a, b))
    return acc


class EquivariantMap:
    def __init__(self, source: Lattice, target: Lattice, matrix: Matrix, validate=True):
        if source.group != target.group:
            raise GroupMismatch("source and target over different groups")
        if source.ring != target.ring:
            raise RingMismatch("source and target over different rings")
        self.source = source
        self.target = target
        self.matrix = matrix
        if validate:
            self.validate()

    def validate(self):
        for s in generating_set(self.source.group) or []:
            if self.matrix * self.source.act(s) != self.target.act(s) * self.matrix:
                raise InvalidLattice("map is not equivariant")

    def is_iso(self):
        from .linalg import smith_normal_form

        if self.matrix.nrows != self.matrix.ncols:
            return False
        snf = smith_normal_form(self.matrix)
        R = self.matrix.ring
        return snf.rank == self.matrix.nrows and all(
            R.is_unit(d) for d in snf.elementary_divisors
        )

    def __repr__(self):
        return f"EquivariantMap({self.source!r} -> {self.target!r})"


# ---------------------------------------------------------------------------
# Standard lattices
# ---------------------------------------------------------------------------


def trivial_lattice(G: FiniteGroup, ring: CoeffRing) -> Lattice:
    I = Matrix.identity(ring, 1)
    return Lattice(G, ring, [I] * G.order, validate=False, name="trivial")


def regular_lattice(G: FiniteGroup, ring: CoeffRing) -> Lattice:
    """Left translation on the group basis."""
    acts = []
    one = ring.one()
    for g in range(G.order):
        A = Matrix.zeros(ring, G.order, G.order)
        for h in range(G.order):
            A.rows[G.mul(g, h)][h] = one
        acts.append(A)
    return Lattice(G, ring, acts, validate=False, name="regular")


def coset_representatives(G: FiniteGroup, H: Subgroup):
    """Least-index representatives of the left cosets gH, identity coset first."""
    seen = set()
    reps = []
    for g in range(G.order):
        if g in seen:
            continue
        coset = {G.mul(g, h) for h in H.elements}
        reps.append(min(coset))
        seen |= coset
    return reps


def permutation_lattice(G: FiniteGroup, ring: CoeffRing, H: Subgroup) -> Lattice:
    """R[G/H] on the left cosets of H."""
    if H.parent != G:
        raise NotASubgroup("subgroup of a different group")
    reps = coset_representatives(G, H)
    coset_of = {}
    for i, t in enumerate(reps):
        for h in H.elements:
            coset_of[G.mul(t, h)] = i
    k = len(reps)
    one = ring.one()
    acts = []
    for g in range(G.order):
        A = Matrix.zeros(ring, k, k)
        for i, t in enumerate(reps):
            A.rows[coset_of[G.mul(g, t)]][i] = one
        acts.append(A)
    return Lattice(G, ring, acts, validate=False, name=f"perm[G/{H.order}]")


def sign_lattice(G: FiniteGroup, ring: CoeffRing, H: Subgroup) -> Lattice:
    """Rank-1 lattice where H acts trivially and the other coset by -1."""
    if H.parent != G:
        raise NotASubgroup("subgroup of a different group")
    if 2 * H.order != G.order:
        raise InvalidSubgroup("sign lattice needs an index-2 subgroup")
    plus = Matrix.identity(ring, 1)
    minus = plus.scale(ring.from_int(-1))
    acts = [plus if g in H.index_of else minus for g in range(G.order)]
    return Lattice(G, ring, acts, validate=True, name="sign")


def standard_lattice(G: FiniteGroup, ring: CoeffRing, kind: str, **kwargs) -> Lattice:
    """kinds: trivial | regular | permutation(H=) | sign(H=) | carlson_Lzeta(E=,zeta=)"""
    if kind == "trivial":
        return trivial_lattice(G, ring)
    if kind == "regular":
        return regular_lattice(G, ring)
    if kind == "permutation":
        return permutation_lattice(G, ring, kwargs["H"])
    if kind == "sign":
        return sign_lattice(G, ring, kwargs["H"])
    if kind == "carlson_Lzeta":
        from .homalg import carlson_lattice

        return carlson_lattice(kwargs["E"], ring, kwargs["zeta"])
    raise KeyError(f"unknown standard lattice kind {kind!r}")


# ---------------------------------------------------------------------------
# Functors
# ---------------------------------------------------------------------------


def _check_pair(M: Lattice, N: Lattice):
    if M.group != N.group:
        raise GroupMismatch("lattices over different groups")
    if M.ring != N.ring:
        raise RingMismatch("lattices over different rings")


def tensor(M: Lattice, N: Lattice, validate=False) -> Lattice:
    """M (x) N with the diagonal action; basis ordered (i_M, i_N) row-major."""
    _check_pair(M, N)
    R = M.ring
    acts = []
    for g in range(M.group.order):
        A, B = M.act(g), N.act(g)
        T = Matrix.zeros(R, M.rank * N.rank, M.rank * N.rank)
        for i in range(M.rank):
            for k in range(M.rank):
                a = A.rows[i][k]
                if R.is_zero(a):
                    continue
                for j in range(N.rank):
                    for l in range(N.rank):
                        b = B.rows[j][l]
                        if not R.is_zero(b):
                            T.rows[i * N.rank + j][k * N.rank + l] = R.mul(a, b)
        acts.append(T)
    return Lattice(M.group, R, acts, validate=validate)


def hom_lattice(M: Lattice, N: Lattice, validate=False) -> Lattice:
    """Hom_R(M, N) with conjugation action g.f = rho_N(g) f rho_M(g)^{-1}.

    Basis: matrix units E_{ij} (i in N, j in M), index i * rank(M) + j.
    """
    _check_pair(M, N)
    R = M.ring
    G = M.group
    acts = []
    for g in range(G.order):
        A = N.act(g)
        Binv = M.act(G.inv(g))
        T = Matrix.zeros(R, N.rank * M.rank, N.rank * M.rank)
        for i in range(N.rank):
            for k in range(N.rank):
                a = A.rows[i][k]
                if R.is_zero(a):
                    continue
                for j in range(M.rank):
                    for l in range(M.rank):
                        b = Binv.rows[l][j]
                        if not R.is_zero(b):
                            T.rows[i * M.rank + j][k * M.rank + l] = R.mul(a, b)
        acts.append(T)
    return Lattice(G, R, acts, validate=validate)


def dual(M: Lattice) -> Lattice:
    return hom_lattice(M, trivial_lattice(M.group, M.ring))


def restrict(M: Lattice, H: Subgroup) -> Lattice:
    """Same matrices, group reindexed to the subgroup."""
    if H.parent != M.group:
        raise NotASubgroup("restriction along a non-subgroup")
    acts = [M.act(H.elements[i]) for i in range(H.order)]
    return Lattice(H.group, M.ring, acts, validate=False, name=M.name)


def induce(M: Lattice, G: FiniteGroup, H: Subgroup) -> Lattice:
    """ind_H^G M, rank [G:H] * rank(M), block-permutation action.

    M must be a lattice over H.group.  Basis: (coset rep t_i, basis of M).
    """
    if H.parent != G:
        raise NotASubgroup("induction along a non-subgroup")
    if M.group != H.group:
        raise GroupMismatch("lattice is not over the subgroup")
    reps = coset_representatives(G, H)
    rep_index = {t: i for i, t in enumerate(reps)}
    coset_of = {}
    for t in reps:
        for h in H.elements:
            coset_of[G.mul(t, h)] = t
    R = M.ring
    k = len(reps)
    r = M.rank
    acts = []
    for g in range(G.order):
        A = Matrix.zeros(R, k * r, k * r)
        for i, t in enumerate(reps):
            gt = G.mul(g, t)
            t2 = coset_of[gt]
            j = rep_index[t2]
            h = G.mul(G.inv(t2), gt)  # in H
            B = M.act(H.index_of[h])
            for a in range(r):
                for b in range(r):
                    x = B.rows[a][b]
                    if not R.is_zero(x):
                        A.rows[j * r + a][i * r + b] = x
        acts.append(A)
    return Lattice(G, R, acts, validate=False)


def direct_sum(M: Lattice, N: Lattice) -> Lattice:
    _check_pair(M, N)
    R = M.ring
    acts = []
    for g in range(M.group.order):
        A, B = M.act(g), N.act(g)
        T = Matrix.zeros(R, M.rank + N.rank, M.rank + N.rank)
        for i in range(M.rank):
            for j in range(M.rank):
                T.rows[i][j] = A.rows[i][j]
        for i in range(N.rank):
            for j in range(N.rank):
                T.rows[M.rank + i][M.rank + j] = B.rows[i][j]
        acts.append(T)
    return Lattice(M.group, R, acts, validate=False)


def conjugate_basis(M: Lattice, P: Matrix) -> Lattice:
    """Same module in the basis P: action becomes P^{-1} rho P."""
    from .linalg import FieldSolver, SNFSolver, make_solver

    solver = make_solver(P)
    cols = []
    n = P.nrows
    for j in range(n):
        e = [M.ring.zero()] * n
        e[j] = M.ring.one()
        cols.append(solver.solve(e))
    Pinv = Matrix(M.ring, [[cols[j][i] for j in range(n)] for i in range(n)])
    acts = [Pinv * M.act(g) * P for g in range(M.group.order)]
    return Lattice(M.group, M.ring, acts, validate=False, name=M.name)


def projection_formula_iso(X: Lattice, Y: Lattice, G: FiniteGroup, H: Subgroup) -> EquivariantMap:
    """Explicit iso ind(res(X) (x) Y) -> X (x) ind(Y).

    Source basis: (t_i, x_a (x) y_b); target basis: (x_a, (t_i, y_b)).
    The map sends t_i (x) (x (x) y) to (t_i . x) (x) (t_i (x) y).
    """
    if X.group != G:
        raise GroupMismatch("X must be a G-lattice")
    if Y.group != H.group:
        raise GroupMismatch("Y must be a lattice over the subgroup")
    source = induce(tensor(restrict(X, H), Y), G, H)
    target = tensor(X, induce(Y, G, H))
    reps = coset_representatives(G, H)
    k = len(reps)
    rX, rY = X.rank, Y.rank
    R = X.ring
    Mtx = Matrix.zeros(R, target.rank, source.rank)
    for i, t in enumerate(reps):
        A = X.act(t)
        for a in range(rX):
            for b in range(rY):
                src = i * (rX * rY) + a * rY + b
                for c in range(rX):
                    x = A.rows[c][a]
                    if not R.is_zero(x):
                        tgt = c * (k * rY) + i * rY + b
                        Mtx.rows[tgt][src] = x
    return EquivariantMap(source, target, Mtx, validate=True)


# ---------------------------------------------------------------------------
# Pseudorandom lattices (seeded, reproducible)
# ---------------------------------------------------------------------------


def random_lattice(G: FiniteGroup, ring: CoeffRing, rng, max_rank=4) -> Lattice:
    """Pseudorandom lattice: a random basis change of a random direct sum of
    permutation and sign pieces of total rank <= max_rank.

    Random matrices assigned to generators essentially never satisfy the
    group relations, so sampling is done over structured summands and an
    unimodular change of basis; the result is validated regardless.
    """
    pieces = []
    total = 0
    # subgroups to draw permutation modules from
    subs = _some_subgroups(G)
    while total < max_rank:
        choices = ["trivial"]
        for H in subs:
            idx = G.order // H.order
            if total + idx <= max_rank:
                choices.append(("perm", H))
            if 2 * H.order == G.order:
                choices.append(("sign", H))
        pick = rng.choice(choices)
        if pick == "trivial":
            pieces.append(trivial_lattice(G, ring))
            total += 1
        elif pick[0] == "perm":
            L = permutation_lattice(G, ring, pick[1])
            pieces.append(L)
            total += L.rank
        else:
            pieces.append(sign_lattice(G, ring, pick[1]))
            total += 1
        if rng.random() < 0.3:
            break
    M = pieces[0]
    for L in pieces[1:]:
        M = direct_sum(M, L)
    P = _random_unimodular(ring, M.rank, rng)
    out = conjugate_basis(M, P)
    out.validate()
    return out


def _some_subgroups(G: FiniteGroup):
    """Deterministic sample of subgroups: cyclic ones plus elementary abelians."""
    from .groups import elementary_abelian_subgroups

    seen = {}
    for g in range(G.order):
        els = G.closure([g])
        seen.setdefault(els, G.subgroup(els))
    for E in elementary_abelian_subgroups(G):
        seen.setdefault(E.elements, E)
    return sorted(seen.values(), key=lambda s: (s.order, s.elements))


def _random_unimodular(ring: CoeffRing, n: int, rng) -> Matrix:
    """Product of random elementary matrices (unit determinant)."""
    A = Matrix.identity(ring, n)
    for _ in range(2 * n + 2):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        c = ring.from_int(rng.choice([-2, -1, 1, 2]))
        E = Matrix.identity(ring, n)
        E.rows[i][j] = c
        A = A * E
        if rng.random() < 0.3:
            # swap
            P = Matrix.identity(ring, n)
            P.rows[i][i] = ring.zero()
            P.rows[j][j] = ring.zero()
            P.rows[i][j] = ring.one()
            P.rows[j][i] = ring.one()
            A = A * P
    return A


def lattice_from_json(G: FiniteGroup, data) -> Lattice:
    from .rings import parse_ring

    ring = parse_ring(data["ring"])
    rank = data["rank"]
    acts = []
    for g in range(G.order):
        rows = data["action"][str(g)]
        acts.append(
            Matrix(
                ring,
                [[_parse_scalar(ring, x) for x in row] for row in rows],
                rank,
                rank,
            )
        )
    return Lattice(G, ring, acts, validate=True)


def _parse_scalar(ring, s):
    from fractions import Fraction

    if isinstance(s, int):
        return ring.from_int(s)
    if "/" in str(s):
        num, den = str(s).split("/")
        return ring.exact_div(ring.from_int(int(num)), ring.from_int(int(den)))
    return ring.from_int(int(s))

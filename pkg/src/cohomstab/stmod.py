"""Stable module category calculus: weak projectivity via transfer
certificates, stable Hom groups, syzygy functors, localization, and the
verification suites built on them (Maschke, Chouinard, fracture,
Tate-unit comparison, elementary abelian batteries, mod-p^2 shadows).
"""

from __future__ import annotations

from .errors import GroupMismatch, RingMismatch
from .groups import FiniteGroup, elementary_abelian_subgroups
from .homalg import (
    CohomologyClass,
    CochainQuotient,
    Resolution,
    ZmodCochainQuotient,
    kernel_sublattice,
    tate_cohomology,
)
from .lattices import (
    EquivariantMap,
    Lattice,
    dual,
    hom_lattice,
    restrict,
    trivial_lattice,
)
from .linalg import (
    AbGroup,
    Matrix,
    cokernel_invariants,
    make_solver,
    rank as matrix_rank,
)
from .linalg import NoSolution
from .rings import (
    Fp,
    IntegerRing,
    IntegersMod,
    LocalizedIntegers,
    PrimeField,
    RationalField,
    Zloc,
    Zmod,
    ZZ,
)


def _vec_of_matrix(A: Matrix):
    """Hom-lattice coordinates of an R-linear map: E_ij at i * ncols + j."""
    out = []
    for row in A.rows:
        out.extend(row)
    return out


def _matrix_of_vec(ring, vec, nrows, ncols):
    return Matrix(ring, [list(vec[i * ncols : (i + 1) * ncols]) for i in range(nrows)],
                  nrows, ncols)


def transfer_matrix(M: Lattice, N: Lattice) -> Matrix:
    """The transfer f -> sum_g g.f on Hom_R(M, N) coordinates."""
    H = hom_lattice(M, N)
    dim = H.rank
    R = M.ring
    T = Matrix.zeros(R, dim, dim)
    for g in range(M.group.order):
        A = H.act(g)
        for i in range(dim):
            for j in range(dim):
                T.rows[i][j] = R.add(T.rows[i][j], A.rows[i][j])
    return T


def invariant_hom_basis(M: Lattice, N: Lattice):
    """Basis (pure over Z) of Hom_{R[G]}(M, N) in hom-lattice coordinates."""
    from .lattices import generating_set

    H = hom_lattice(M, N)
    R = M.ring
    gens = generating_set(M.group)
    rows = []
    for s in gens:
        A = H.act(s)
        for i in range(H.rank):
            row = list(A.rows[i])
            row[i] = R.sub(row[i], R.one())
            rows.append(row)
    C = Matrix(R, rows, len(rows), H.rank)
    return make_solver(C).kernel_basis()


def is_weakly_projective(M: Lattice):
    """(flag, certificate): certificate f is R-linear with sum_g g.f = id."""
    T = transfer_matrix(M, M)
    ident = Matrix.identity(M.ring, M.rank)
    try:
        x = make_solver(T).solve(_vec_of_matrix(ident))
    except NoSolution:
        return False, None
    return True, _matrix_of_vec(M.ring, x, M.rank, M.rank)


def verify_projectivity_certificate(M: Lattice, f: Matrix) -> bool:
    """Check sum_g rho(g) f rho(g)^{-1} = id directly."""
    R = M.ring
    acc = Matrix.zeros(R, M.rank, M.rank)
    for g in range(M.group.order):
        term = M.act(g) * f * M.act(M.group.inv(g))
        acc = acc + term
    return acc == Matrix.identity(R, M.rank)


class StableHomSpace:
    """Hom_{R[G]}(M, N) modulo maps factoring through the transfer."""

    def __init__(self, M: Lattice, N: Lattice):
        if M.group != N.group:
            raise GroupMismatch("stable hom over different groups")
        if M.ring != N.ring:
            raise RingMismatch("stable hom over different rings")
        self.source = M
        self.target = N
        self.ring = M.ring
        self.invariants = invariant_hom_basis(M, N)
        self._transfer = transfer_matrix(M, N)
        k = len(self.invariants)
        dim = M.rank * N.rank
        K = Matrix(self.ring, [[v[i] for v in self.invariants] for i in range(dim)],
                   dim, k)
        ksolve = make_solver(K)
        cols = [ksolve.solve(self._transfer.col(j)) for j in range(dim)]
        Y = Matrix(self.ring, [[c[i] for c in cols] for i in range(k)], k, dim)
        self._Y = Y
        if isinstance(self.ring, (IntegerRing, LocalizedIntegers)):
            self.group = cokernel_invariants(Y)
        else:
            char = self.ring.p if isinstance(self.ring, PrimeField) else 0
            self.group = AbGroup.vector_space(k - matrix_rank(Y), char)

    def homotopic(self, f: Matrix, g: Matrix) -> bool:
        """Stable equality: f - g factors through the transfer."""
        return make_solver(self._transfer).in_image(_vec_of_matrix(f - g))


def stable_hom(M: Lattice, N: Lattice) -> StableHomSpace:
    return StableHomSpace(M, N)


def check_split_exact(f: EquivariantMap, g: EquivariantMap) -> bool:
    """Is 0 -> M' -f-> M -g-> M'' -> 0 exact and R-split?

    Criterion: g f = 0, g has an R-linear section s, and [f | s] is an
    R-isomorphism M' + M'' -> M.
    """
    R = f.source.ring
    M = f.target
    if g.source is not M and g.source.rank != M.rank:
        raise GroupMismatch("maps do not compose")
    comp = g.matrix * f.matrix
    if any(not R.is_zero(x) for row in comp.rows for x in row):
        return False
    solver = make_solver(g.matrix)
    cols = []
    for i in range(g.target.rank):
        e = [R.zero()] * g.target.rank
        e[i] = R.one()
        try:
            cols.append(solver.solve(e))
        except NoSolution:
            return False
    s = Matrix(R, [[c[i] for c in cols] for i in range(M.rank)],
               M.rank, g.target.rank)
    block = f.matrix.hstack(s)
    if block.nrows != block.ncols:
        return False
    from .linalg import smith_normal_form

    snf = smith_normal_form(block)
    return all(R.is_unit(d) for d in snf.elementary_divisors) and (
        len(snf.elementary_divisors) == block.nrows
    )


# ---------------------------------------------------------------------------
# Syzygies
# ---------------------------------------------------------------------------


def module_generators(L: Lattice):
    """Greedy R[G]-generating subset of the lattice basis (as vectors)."""
    R = L.ring
    G = L.group
    gens = []
    span_cols = []
    solver = None
    for t in range(L.rank):
        e = [R.zero()] * L.rank
        e[t] = R.one()
        if solver is not None and solver.in_image(e):
            continue
        gens.append(e)
        for g in range(G.order):
            span_cols.append(L.act(g) * Matrix.column(R, e))
        flat = [[c.rows[i][0] for c in span_cols] for i in range(L.rank)]
        solver = make_solver(Matrix(R, flat, L.rank, len(span_cols)))
    return gens


def free_cover(M: Lattice):
    """(generators, Omega M): kernel of the surjection R[G]^s -> M sending
    the basis element (t, g) to g . v_t."""
    R = M.ring
    G = M.group
    gens = module_generators(M)
    s = len(gens)
    cols = []
    for v in gens:
        vc = Matrix.column(R, v)
        for g in range(G.order):
            cols.append(M.act(g) * vc)
    Phi = Matrix(R, [[c.rows[i][0] for c in cols] for i in range(M.rank)],
                 M.rank, s * G.order)
    kvecs = make_solver(Phi).kernel_basis()
    if not kvecs:
        omega = Lattice(G, R, [Matrix.zeros(R, 0, 0)] * G.order,
                        validate=False, name="0")
        return gens, omega
    return gens, kernel_sublattice(G, R, kvecs, s)


def free_lattice(G: FiniteGroup, ring, s: int) -> Lattice:
    """R[G]^s with basis (t, h) at index t * |G| + h and left translation."""
    n = G.order
    acts = []
    for g in range(n):
        A = Matrix.zeros(ring, s * n, s * n)
        for t in range(s):
            for h in range(n):
                A.rows[t * n + G.mul(g, h)][t * n + h] = ring.one()
        acts.append(A)
    return Lattice(G, ring, acts, validate=False, name=f"free^{s}")


def free_cover_sequence(M: Lattice):
    """0 -> Omega M -> R[G]^s -> M -> 0 as a pair of equivariant maps."""
    R = M.ring
    G = M.group
    gens = module_generators(M)
    s = len(gens)
    cols = []
    for v in gens:
        vc = Matrix.column(R, v)
        for g in range(G.order):
            cols.append(M.act(g) * vc)
    Phi = Matrix(R, [[c.rows[i][0] for c in cols] for i in range(M.rank)],
                 M.rank, s * G.order)
    cover = free_lattice(G, R, s)
    kvecs = make_solver(Phi).kernel_basis()
    if kvecs:
        omega = kernel_sublattice(G, R, kvecs, s)
    else:
        omega = Lattice(G, R, [Matrix.zeros(R, 0, 0)] * G.order,
                        validate=False, name="0")
    dim = s * G.order
    incl = Matrix(R, [[v[i] for v in kvecs] for i in range(dim)], dim, len(kvecs))
    return (
        EquivariantMap(omega, cover, incl),
        EquivariantMap(cover, M, Phi),
    )


def syzygy(M: Lattice, n: int) -> Lattice:
    """Omega^n M (n may be negative: Omega^{-k} M = (Omega^k M*)*)."""
    if n == 0:
        return M
    if n < 0:
        return dual(syzygy(dual(M), -n))
    cur = M
    for _ in range(n):
        _, cur = free_cover(cur)
    return cur


# ---------------------------------------------------------------------------
# Localization
# ---------------------------------------------------------------------------


def localize_lattice(M: Lattice, p: int) -> Lattice:
    """Base change of a Z-lattice to Z_(p)."""
    if not isinstance(M.ring, IntegerRing):
        raise RingMismatch("localization starts from a Z-lattice")
    R = Zloc(p)
    return M.change_ring(R, lambda x: R.from_int(int(x)))


def rationalize(M: Lattice) -> Lattice:
    from .rings import QQ

    return M.change_ring(QQ, lambda x: QQ.from_int(int(x)))


# ---------------------------------------------------------------------------
# Verification suites
# ---------------------------------------------------------------------------


def chouinard_check(M: Lattice) -> dict:
    """Weak projectivity vs. weak projectivity on every elementary abelian
    subgroup (restricted to p-subgroups when the base is F_p)."""
    G = M.group
    if isinstance(M.ring, PrimeField):
        elabs = elementary_abelian_subgroups(G, M.ring.p)
    else:
        elabs = elementary_abelian_subgroups(G)
    wp_global, _ = is_weakly_projective(M)
    locals_ = {}
    for E in elabs:
        flag, _ = is_weakly_projective(restrict(M, E))
        locals_["{" + ",".join(map(str, E.elements)) + "}"] = flag
    agree = wp_global == all(locals_.values())
    return {
        "group": G.name,
        "ring": str(M.ring),
        "rank": M.rank,
        "weakly_projective": wp_global,
        "elementary_abelian": locals_,
        "biconditional": agree,
    }


def fracture_check(M: Lattice, control_prime=None) -> dict:
    """Weak projectivity over Z against all localizations at primes dividing
    |G|, plus one coprime control prime (where it must always hold)."""
    if not isinstance(M.ring, IntegerRing):
        raise RingMismatch("fracture check starts from a Z-lattice")
    G = M.group
    primes = [p for p in range(2, G.order + 1) if G.order % p == 0 and _is_prime(p)]
    wp_global, _ = is_weakly_projective(M)
    local = {}
    for p in primes:
        flag, _ = is_weakly_projective(localize_lattice(M, p))
        local[p] = flag
    if control_prime is None:
        control_prime = next(q for q in (5, 7, 11, 13) if G.order % q != 0)
    control, _ = is_weakly_projective(localize_lattice(M, control_prime))
    agree = wp_global == all(local.values())
    return {
        "group": G.name,
        "rank": M.rank,
        "weakly_projective": wp_global,
        "local": local,
        "control_prime": control_prime,
        "control": control,
        "biconditional": agree,
    }


def _is_prime(n):
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def tate_unit_check(G: FiniteGroup, n: int) -> dict:
    """Stable Hom(Omega^n 1, 1) against Tate cohomology H-hat^n(G; Z)."""
    triv = trivial_lattice(G, ZZ)
    om = syzygy(triv, n)
    sh = stable_hom(om, triv)
    th = tate_cohomology(G, triv, n)
    return {
        "group": G.name,
        "n": n,
        "stable_hom": list(sh.group.factors),
        "tate": list(th.factors),
        "match": sh.group.factors == th.factors,
    }


def maschke_check(M: Lattice) -> dict:
    """Weak projectivity over Q with an explicitly verified certificate."""
    if not isinstance(M.ring, RationalField):
        raise RingMismatch("Maschke check needs a Q-lattice")
    flag, cert = is_weakly_projective(M)
    verified = flag and verify_projectivity_certificate(M, cert)
    return {
        "group": M.group.name,
        "rank": M.rank,
        "weakly_projective": flag,
        "certificate_verified": verified,
    }


# ---------------------------------------------------------------------------
# Elementary abelian batteries
# ---------------------------------------------------------------------------


def _p_rank(E: FiniteGroup, p: int) -> int:
    r = 0
    n = E.order
    while n % p == 0:
        n //= p
        r += 1
    if n != 1:
        raise RingMismatch(f"{E.name} is not a p-group at {p}")
    return r


def verify_elab_suite(E: FiniteGroup, p: int, cap=8, tate_range=4) -> dict:
    """Battery over A = Z_(p): vanishing/torsion of H^*, Tate exponent and
    the order of H-hat^0, the p-adic filtration steps, and the mod-p^2
    shadow of the reduction map."""
    r = _p_rank(E, p)
    A = Zloc(p)
    triv = trivial_lattice(E, A)
    res = Resolution.build(E, A, cap + 1)
    from .homalg import cohomology

    checks = {}
    h0 = cohomology(E, triv, 0, resolution=res)
    checks["h0_is_base"] = h0.factors == (0,)
    h1 = cohomology(E, triv, 1, resolution=res)
    checks["h1_vanishes"] = h1.is_trivial()
    torsion = True
    for n in range(1, cap + 1):
        hn = cohomology(E, triv, n, resolution=res)
        if not hn.annihilated_by(p):
            torsion = False
    checks["p_torsion_through_cap"] = torsion
    exp = p**r
    tate_ok = True
    order_ok = True
    for n in range(-tate_range, tate_range + 1):
        tn = tate_cohomology(E, triv, n, resolution=res)
        if not tn.annihilated_by(exp):
            tate_ok = False
        if n == 0 and tn.order() != exp:
            order_ok = False
    checks["tate_exponent"] = tate_ok
    checks["tate_zero_order"] = order_ok
    filt = True
    for j in range(1, r + 1):
        # (Z/p^j) / image(Z/p^{j-1} --p--> Z/p^j) must be Z/p
        q = cokernel_invariants(Matrix.from_int_rows(ZZ, [[p, p**j]]))
        if q.factors != (p,):
            filt = False
    checks["filtration_steps"] = filt
    shadow = fiso_shadow(E, p, cap=min(cap, 6) if p == 2 else min(cap, 6))
    checks["fiso_kernel_nilpotent"] = shadow["kernel_nilpotent"]
    checks["fiso_frobenius_surjective"] = shadow["frobenius_surjective"]
    return {
        "group": E.name,
        "p": p,
        "rank": r,
        "checks": checks,
        "passed": all(checks.values()),
    }


def fiso_shadow(E: FiniteGroup, p: int, cap=6, nil_bound=None) -> dict:
    """The reduction H^*(E; Z/p^2) -> H^*(E; F_p): its kernel classes must be
    nilpotent (exponent at most p^3) and every mod-p class must have a
    p-power Frobenius image in the image of reduction."""
    if nil_bound is None:
        nil_bound = p**3
    m = p * p
    # squaring chains for nilpotence / Frobenius can reach degree cap * p^2
    max_deg = cap * min(nil_bound, p**2)
    res_m = Resolution.build(E, Zmod(m), cap + 1)
    res_p = Resolution.build(E, Fp(p), cap + 1)
    triv_m = trivial_lattice(E, Zmod(m))
    triv_p = trivial_lattice(E, Fp(p))
    kernel_ok = True
    exponents = []
    frob_ok = True
    for d in range(1, cap + 1):
        res_m.extend(d + 1)
        zq = ZmodCochainQuotient(
            m,
            res_m.diff(d + 1).cochain_map(triv_m),
            res_m.diff(d).cochain_map(triv_m) if d >= 1 else None,
        )
        res_p.extend(d + 1)
        fq = CochainQuotient(
            Fp(p),
            res_p.diff(d + 1).cochain_map(triv_p),
            res_p.diff(d).cochain_map(triv_p) if d >= 1 else None,
        )
        # matrix of the reduction map on this degree
        k = Fp(p)
        phi_cols = [fq.coordinates([k.from_int(int(x)) for x in rep]) for rep in zq.reps]
        # kernel generators: p * (each generator), plus lifts of ker(phi)
        kernel_vecs = []
        for rep in zq.reps:
            kernel_vecs.append([(p * int(x)) % m for x in rep])
        if phi_cols:
            Phi = Matrix(k, [[phi_cols[j][i] for j in range(len(phi_cols))]
                             for i in range(fq.dim)], fq.dim, len(phi_cols))
            for kv in make_solver(Phi).kernel_basis():
                vec = [0] * len(zq.reps[0]) if zq.reps else []
                for j, c in enumerate(kv):
                    ci = int(c)
                    vec = [(a + ci * int(b)) % m for a, b in zip(vec, zq.reps[j])]
                kernel_vecs.append(vec)
        for vec in kernel_vecs:
            if zq.is_zero_class(vec):
                continue
            e = _nilpotence_exponent(res_m, d, vec, p, nil_bound, max_deg)
            if e is None:
                kernel_ok = False
            else:
                exponents.append(e)
        # Frobenius-surjectivity of the induced map on reduced rings
        for y in fq.reps:
            if not _frobenius_hits_image(res_p, res_m, d, y, p, m, cap, max_deg):
                frob_ok = False
    return {
        "group": E.name,
        "p": p,
        "cap": cap,
        "kernel_nilpotent": kernel_ok,
        "kernel_exponents": sorted(set(exponents)),
        "frobenius_surjective": frob_ok,
    }


def _nilpotence_exponent(res_m, degree, vec, p, nil_bound, max_deg):
    """Smallest p-power e <= nil_bound with class^e = 0, else None."""
    R = res_m.ring
    cls = CohomologyClass(res_m, degree, [R.from_int(int(x)) for x in vec])
    if cls.is_coboundary():
        return 1
    e = 1
    while e < nil_bound:
        if cls.degree * p > max_deg:
            return None
        res_m.extend(cls.degree * p + 1)
        powered = cls
        for _ in range(p - 1):
            powered = powered.cup(cls)
        cls = powered
        e *= p
        if cls.is_coboundary():
            return e
    return None


def _frobenius_hits_image(res_p, res_m, degree, yvec, p, m, cap, max_deg):
    """Some p-power of the class of yvec lies in the image of reduction."""
    k = res_p.ring
    cls = CohomologyClass(res_p, degree, list(yvec))
    s = 0
    while cls.degree <= max_deg:
        if _in_reduction_image(res_p, res_m, cls, p, m):
            return True
        s += 1
        if cls.degree * p > max_deg:
            return False
        res_p.extend(cls.degree * p + 1)
        powered = cls
        for _ in range(p - 1):
            powered = powered.cup(cls)
        cls = powered
        if cls.is_coboundary():
            return True  # a vanishing power is trivially in the image
    return False


def _in_reduction_image(res_p, res_m, cls, p, m):
    d = cls.degree
    k = res_p.ring
    res_m.extend(d + 1)
    res_p.extend(d + 1)
    triv_m = trivial_lattice(res_m.group, res_m.ring)
    triv_p = trivial_lattice(res_p.group, k)
    zq = ZmodCochainQuotient(
        m,
        res_m.diff(d + 1).cochain_map(triv_m),
        res_m.diff(d).cochain_map(triv_m) if d >= 1 else None,
    )
    fq = CochainQuotient(
        k,
        res_p.diff(d + 1).cochain_map(triv_p),
        res_p.diff(d).cochain_map(triv_p) if d >= 1 else None,
    )
    target = fq.coordinates(cls.vec)
    if all(k.is_zero(c) for c in target):
        return True
    if not zq.reps:
        return False
    cols = [fq.coordinates([k.from_int(int(x)) for x in rep]) for rep in zq.reps]
    Phi = Matrix(k, [[cols[j][i] for j in range(len(cols))] for i in range(fq.dim)],
                 fq.dim, len(cols))
    return make_solver(Phi).in_image(target)

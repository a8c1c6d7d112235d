"""Cohomological support of lattices as V(Ann) inside the spectrum model,
with Carlson rank varieties as an independent oracle over elementary
abelian groups.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .cohomring import GradedModulePresentation
from .errors import CapExceeded, NotElementaryAbelian, RingMismatch
from .groups import FiniteGroup
from .homalg import ComparisonMap, Resolution
from .lattices import Lattice, generating_set, hom_lattice
from .linalg import FieldSolver, Matrix, rank as matrix_rank
from .polys import Ideal, Poly, PolyRing
from .rings import Fp, GF, IntegerRing, LocalizedIntegers, PrimeField
from .spectrum import SpecHModel, SpecializationClosedSubset, _drop_vars


@dataclass
class SupportResult:
    model: SpecHModel
    subset: SpecializationClosedSubset
    certified_cap: int

    def to_json(self):
        return {
            "support": self.subset.canonical(),
            "certified_cap": self.certified_cap,
        }


def cohomological_support(M: Lattice, model: SpecHModel, cap=None) -> SupportResult:
    """csupp(M) for a lattice over a prime field: V(Ann H*(G; End M))."""
    if not isinstance(M.ring, PrimeField):
        raise RingMismatch("cohomological_support needs a prime-field lattice")
    p = M.ring.p
    if p not in model.fibers:
        return SupportResult(model, model.empty_subset(), model.cap)
    fiber = model.fibers[p]
    pres = fiber.presentation
    if cap is not None and cap > pres.cap:
        raise CapExceeded(f"model built to cap {pres.cap}")
    if _projective_by_cyclic_sylow(M, p):
        return SupportResult(model, model.empty_subset(), pres.cap)
    endo = hom_lattice(M, M)
    ann = GradedModulePresentation(pres, endo).annihilator()
    keep_idx = [
        i for i, g in enumerate(pres.generators) if g.name in fiber.poly.names
    ]
    gens = []
    for f in ann.gens:
        img = _drop_vars(f, fiber.poly, keep_idx)
        if img is not None and not img.is_zero():
            gens.append(img)
    ideal = Ideal(fiber.poly, gens + list(fiber.ideal.gens))
    subset = SpecializationClosedSubset(model, [(p, ideal)])
    return SupportResult(model, subset, pres.cap)


def _projective_by_cyclic_sylow(M: Lattice, p: int) -> bool:
    """Projectivity test when the Sylow p-subgroup is cyclic of order q:
    M is projective iff it is free over k[u]/(u^q), u = g - 1 for a
    generator g, iff q | rank and rank(u^(q-1)) = rank/q."""
    G = M.group
    q = 1
    n = G.order
    while n % p == 0:
        n //= p
        q *= p
    gen = next((g for g in range(G.order) if G.element_order(g) == q), None)
    if gen is None:
        return False
    if M.rank % q != 0:
        return False
    K = M.ring
    U = M.act(gen) - Matrix.identity(K, M.rank)
    P = Matrix.identity(K, M.rank)
    for _ in range(q - 1):
        P = P * U
    return matrix_rank(P) == M.rank // q


def support_for_integral_lattice(M: Lattice, model: SpecHModel, cap=None) -> SupportResult:
    """Support of a Z- or Z_(p)-lattice: per-prime supports of its reductions."""
    if not isinstance(M.ring, (IntegerRing, LocalizedIntegers)):
        raise RingMismatch("expected a lattice over Z or Z_(p)")
    items = []
    certified = model.cap
    for p in sorted(model.fibers):
        k = Fp(p)
        Mp = M.change_ring(k, lambda x, k=k: _reduce_mod(x, k))
        res = cohomological_support(Mp, model, cap)
        items.extend(res.subset.items)
        certified = min(certified, res.certified_cap)
    return SupportResult(model, SpecializationClosedSubset(model, items), certified)


def _reduce_mod(x, k):
    from fractions import Fraction

    if isinstance(x, Fraction):
        num, den = x.numerator, x.denominator
        return k.exact_div(k.from_int(num), k.from_int(den))
    return k.from_int(int(x))


def classify(M: Lattice, model: SpecHModel, cap=None) -> SupportResult:
    """The classification-map value of the thick ideal generated by M."""
    if isinstance(M.ring, PrimeField):
        return cohomological_support(M, model, cap)
    return support_for_integral_lattice(M, model, cap)


# ---------------------------------------------------------------------------
# Rank varieties
# ---------------------------------------------------------------------------


def elementary_abelian_generators(E: FiniteGroup, p: int):
    gens = generating_set(E)
    if E.order != p ** len(gens):
        raise NotElementaryAbelian(f"{E.name} is not elementary abelian at {p}")
    for g in range(1, E.order):
        if E.element_order(g) != p:
            raise NotElementaryAbelian(f"element of order != {p}")
    if not E.is_abelian():
        raise NotElementaryAbelian("group is not abelian")
    return gens


def _poly_matrix_mul(ring: PolyRing, A, B):
    n = len(A)
    m = len(B[0])
    k = len(B)
    out = [[ring.zero() for _ in range(m)] for _ in range(n)]
    for i in range(n):
        for t in range(k):
            a = A[i][t]
            if a.is_zero():
                continue
            for j in range(m):
                b = B[t][j]
                if not b.is_zero():
                    out[i][j] = out[i][j] + a * b
    return out


def _poly_det(ring: PolyRing, rows):
    t = len(rows)
    acc = ring.zero()
    K = ring.coeff
    for perm in permutations(range(t)):
        sign = _perm_sign(perm)
        term = ring.one()
        zero = False
        for i in range(t):
            f = rows[i][perm[i]]
            if f.is_zero():
                zero = True
                break
            term = term * f
        if zero:
            continue
        if sign < 0:
            term = term.scale(K.from_int(-1))
        acc = acc + term
    return acc


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def rank_variety(E: FiniteGroup, p: int, M: Lattice, certify=True) -> Ideal:
    """Ideal in F_p[Y1..Yr] cutting out the non-free locus of shifted cyclic
    subgroups: alpha with M not free over k[u_alpha]/(u_alpha^p), where
    u_alpha = 1 + sum alpha_i (g_i - 1).
    """
    if M.group != E:
        raise RingMismatch("lattice over a different group")
    if not isinstance(M.ring, PrimeField) or M.ring.p != p:
        raise RingMismatch("rank variety needs an F_p lattice")
    gens = elementary_abelian_generators(E, p)
    r = len(gens)
    K = M.ring
    ring = PolyRing(K, [f"Y{i+1}" for i in range(r)], [1] * r)
    if M.rank % p != 0:
        ideal = Ideal(ring, [])  # never free: the whole space
    else:
        # N = sum Y_i (rho(g_i) - 1), then N^(p-1); free iff full rank t
        n = M.rank
        N = [[ring.zero() for _ in range(n)] for _ in range(n)]
        for i, g in enumerate(gens):
            A = M.act(g)
            Y = ring.var(i)
            for a in range(n):
                for b in range(n):
                    c = A.rows[a][b]
                    if a == b:
                        c = K.sub(c, K.one())
                    if not K.is_zero(c):
                        N[a][b] = N[a][b] + Y.scale(c)
        P = N
        for _ in range(p - 2):
            P = _poly_matrix_mul(ring, P, N)
        t = n * (p - 1) // p
        minors = []
        for rows in _combinations(range(n), t):
            for cols in _combinations(range(n), t):
                d = _poly_det(ring, [[P[i][j] for j in cols] for i in rows])
                if not d.is_zero():
                    minors.append(d)
        ideal = Ideal(ring, minors)
    if certify:
        _certify_rank_variety(E, p, M, gens, ideal, ring)
    return ideal


def _combinations(seq, t):
    from itertools import combinations

    return combinations(seq, t)


def _certify_rank_variety(E, p, M, gens, ideal, ring):
    """Check the ideal against brute-force freeness at F_p and F_p^2 points."""
    for field in (Fp(p), GF(p, 2)):
        pts = _all_points(field, len(gens))
        for alpha in pts:
            if all(field.is_zero(a) for a in alpha):
                continue
            free = _is_free_at(E, p, M, gens, alpha, field)
            on_variety = all(
                field.is_zero(_eval_over(g, alpha, field)) for g in ideal.gens
            )
            if ideal.is_zero():
                on_variety = True
            if free == on_variety:
                raise CapExceeded(
                    "rank variety certification failed at a rational point"
                )


def _all_points(field, r):
    pts = [[]]
    for _ in range(r):
        pts = [p + [a] for p in pts for a in field.elements()]
    return [tuple(p) for p in pts]


def _eval_over(f: Poly, alpha, field):
    acc = field.zero()
    for e, c in f.terms.items():
        term = field.from_int(int(c))
        for i, k in enumerate(e):
            for _ in range(k):
                term = field.mul(term, alpha[i])
        acc = field.add(acc, term)
    return acc


def _is_free_at(E, p, M, gens, alpha, field):
    """Freeness of M over k[u_alpha]/(u^p): rank of (u_alpha - 1)^(p-1)."""
    n = M.rank
    if n % p != 0:
        return False
    N = Matrix.zeros(field, n, n)
    for i, g in enumerate(gens):
        A = M.act(g)
        for a in range(n):
            for b in range(n):
                c = A.rows[a][b]
                if a == b:
                    c = M.ring.sub(c, M.ring.one())
                if not M.ring.is_zero(c):
                    N.rows[a][b] = field.add(
                        N.rows[a][b], field.mul(alpha[i], field.from_int(int(c)))
                    )
    P = N
    for _ in range(p - 2):
        P = P * N
    return matrix_rank(P) == n * (p - 1) // p


# ---------------------------------------------------------------------------
# Avrunin-Scott comparison
# ---------------------------------------------------------------------------


def avrunin_scott_check(E: FiniteGroup, M: Lattice, model: SpecHModel):
    """Compare csupp and the rank variety under the coordinate pairing
    between degree-1 fiber generators and the chosen group generators.

    Returns True/False/None (None = radical comparisons indeterminate).
    """
    p = M.ring.p
    fiber = model.fibers[p]
    pres = fiber.presentation
    gens = elementary_abelian_generators(E, p)
    if any(d != 1 for d in fiber.poly.degrees):
        raise NotElementaryAbelian("pairing needs degree-1 fiber generators")
    # pairing x_j(g_i) via restriction to the cyclic subgroup <g_i>
    rk = rank_variety(E, p, M)
    yring = rk.ring
    K = M.ring
    pairing = []
    for j, name in enumerate(fiber.poly.names):
        gi = [g.name for g in pres.generators].index(name)
        cls = pres.generators[gi].cls
        row = []
        for g in gens:
            C = E.subgroup(E.closure([g]))
            res_c = Resolution.build(C.group, K, 2)
            cm = ComparisonMap(res_c, pres.res, list(C.elements))
            restricted = cm.apply(cls)
            from .homalg import cohomology_quotient

            q = cohomology_quotient(res_c, 1)
            coords = q.coordinates(restricted.vec)
            row.append(coords[0] if coords else K.zero())
        pairing.append(row)
    # substitute x_j -> sum_i pairing[j][i] Y_i into the support ideal
    supp = cohomological_support(M, model)
    subs = [
        yring.from_terms(
            [(_unit_exp(len(gens), i), pairing[j][i]) for i in range(len(gens))]
        )
        for j in range(len(fiber.poly.names))
    ]
    mapped = []
    for p_, I in supp.subset.items:
        for f in I.gens:
            mapped.append(_substitute(f, subs, yring))
    csupp_ideal = Ideal(yring, [f for f in mapped if not f.is_zero()])
    if supp.subset.is_empty():
        # empty support: rank variety must be the origin only: ideal contains all Y_i
        verdict = True
        for i in range(len(gens)):
            r = rk.radical_contains(yring.var(i))
            if r is False:
                return False
            if r is None:
                verdict = None
        return verdict
    a = csupp_ideal.radical_includes(rk)
    b = rk.radical_includes(csupp_ideal)
    if a is True and b is True:
        return True
    if a is False or b is False:
        return False
    return None


def _unit_exp(n, i):
    e = [0] * n
    e[i] = 1
    return tuple(e)


def _substitute(f: Poly, subs, target: PolyRing):
    acc = target.zero()
    for e, c in f.terms.items():
        term = target.from_terms([((0,) * target.nvars, c)])
        for i, k in enumerate(e):
            for _ in range(k):
                term = term * subs[i]
        acc = acc + term
    return acc

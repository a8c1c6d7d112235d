"""Homogeneous-spectrum model: per-prime Proj fibers of the cohomology ring,
specialization-closed subsets, and the Quillen stratification desk checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ModelMismatch, PresentationMissing, RingMismatch
from .groups import FiniteGroup, Subgroup, orbit_category
from .homalg import (
    CohomologyClass,
    ComparisonMap,
    Resolution,
    cohomology,
    conjugation_map,
    inclusion_map,
)
from .cohomring import GradedRingPresentation, _monomials_of_weight, ring_presentation
from .lattices import trivial_lattice
from .linalg import FieldSolver, Matrix
from .polys import Ideal, Poly, PolyRing
from .rings import (
    CoeffRing,
    Fp,
    GF,
    IntegerRing,
    LocalizedIntegers,
    PrimeField,
    RationalField,
)


def _primes_of(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Fibers
# ---------------------------------------------------------------------------


@dataclass
class ProjFiber:
    """Coordinate data of one fiber: the reduced (even for odd p) cohomology
    ring of G over F_p, with nilpotent generators quotiented away."""

    prime: int
    presentation: GradedRingPresentation = field(repr=False)
    poly: PolyRing = field(repr=False)
    ideal: Ideal = field(repr=False)
    kept: list = field(default_factory=list)
    dropped: list = field(default_factory=list)
    reduction_indeterminate: bool = False

    def is_empty(self):
        return not self.poly.names

    def hilbert_function(self, d):
        leads = [g.lead()[0] for g in self.ideal.gb]
        count = 0
        for m in _monomials_of_weight(self.poly.degrees, d):
            if not any(all(a <= b for a, b in zip(l, m)) for l in leads):
                count += 1
        return count

    def point_count(self):
        """Number of Proj points, when finite: 0, 1, or None (not finite)."""
        if not self.poly.names:
            return 0
        if len(self.poly.names) == 1:
            return 1
        return None

    def to_json(self):
        return {
            "prime": self.prime,
            "generators": [
                {"name": n, "degree": d}
                for n, d in zip(self.poly.names, self.poly.degrees)
            ],
            "relations": self.ideal.canonical_strings(),
            "dropped_nilpotent": list(self.dropped),
        }


def fiber_presentation(G: FiniteGroup, p: int, cap: int, nil_bound=4) -> ProjFiber:
    """Reduced fiber coordinate ring at p.

    Built from H*(G; F_p) (even subring for odd p), then generators that are
    nilpotent modulo the relations are set to zero.  By the F-isomorphism
    between H*(G;Z)/(p) and this ring the Proj point sets agree.
    """
    pres = ring_presentation(G, p, cap, even_only=(p % 2 == 1))
    names, degs, keep_idx, dropped = [], [], [], []
    indeterminate = False
    for i, g in enumerate(pres.generators):
        v = pres.poly.var(i)
        r = pres.ideal.radical_contains(v, exponent_bound=nil_bound)
        if r is True:
            dropped.append(g.name)
        else:
            if r is None:
                indeterminate = True
            names.append(g.name)
            degs.append(g.degree)
            keep_idx.append(i)
    poly = PolyRing(pres.coeff, names, degs)
    rels = []
    for f in pres.ideal.gens:
        img = _drop_vars(f, poly, keep_idx)
        if img is not None and not img.is_zero():
            rels.append(img)
    fiber = ProjFiber(p, pres, poly, Ideal(poly, rels), names, dropped, indeterminate)
    # certification: kept generators must not be nilpotent in the quotient
    for i in range(len(names)):
        if fiber.ideal.radical_contains(poly.var(i), exponent_bound=nil_bound) is True:
            fiber.reduction_indeterminate = True
    return fiber


def _drop_vars(f: Poly, target: PolyRing, keep_idx):
    """Image of f under sending non-kept variables to zero."""
    terms = []
    for e, c in f.terms.items():
        if any(e[i] for i in range(len(e)) if i not in keep_idx):
            continue
        terms.append((tuple(e[i] for i in keep_idx), c))
    return target.from_terms(terms)


# ---------------------------------------------------------------------------
# Spectrum model
# ---------------------------------------------------------------------------


class SpecHModel:
    """Spec^h(H*(G;R)) minus the Spec(R) locus, fiber by fiber.

    Every homogeneous prime not containing all of H^{>0} lies over a unique
    prime dividing |G|, so the model is the disjoint union of per-prime Proj
    fibers; the removed locus is retained only as a marker.
    """

    def __init__(self, group: FiniteGroup, base: CoeffRing, cap: int, nil_bound=4):
        self.group = group
        self.base = base
        self.cap = cap
        self.fibers = {}
        self.specR_removed = True
        self.rational_checked_cap = None
        if isinstance(base, IntegerRing):
            primes = _primes_of(group.order)
        elif isinstance(base, LocalizedIntegers):
            primes = [base.p] if group.order % base.p == 0 else []
        elif isinstance(base, PrimeField):
            primes = [base.p] if group.order % base.p == 0 else []
        elif isinstance(base, RationalField):
            primes = []
            self._check_rational_vanishing()
        else:
            raise RingMismatch(f"no spectrum model over {base}")
        for p in primes:
            self.fibers[p] = fiber_presentation(group, p, cap, nil_bound)

    def _check_rational_vanishing(self):
        from .rings import QQ

        triv = trivial_lattice(self.group, QQ)
        res = Resolution.build(self.group, QQ, self.cap + 1)
        for d in range(1, self.cap + 1):
            H = cohomology(self.group, triv, d, resolution=res)
            if not H.is_trivial():
                raise PresentationMissing(
                    f"unexpected nonzero rational cohomology in degree {d}"
                )
        self.rational_checked_cap = self.cap

    def is_empty(self):
        return not self.fibers

    def empty_subset(self):
        return SpecializationClosedSubset(self, [])

    def full_subset(self):
        """The whole model: per fiber, V(0)."""
        items = [(p, Ideal(f.poly, [])) for p, f in self.fibers.items()]
        return SpecializationClosedSubset(self, items)

    def to_json(self):
        return {
            "group": self.group.name,
            "base": self.base.tag,
            "cap": self.cap,
            "fibers": {str(p): f.to_json() for p, f in sorted(self.fibers.items())},
            "specR_removed": True,
        }

    def __repr__(self):
        fs = ", ".join(f"p={p}" for p in sorted(self.fibers)) or "empty"
        return f"SpecHModel({self.group.name} over {self.base}; {fs})"


def stmod_spectrum(G: FiniteGroup, base: CoeffRing, cap: int) -> SpecHModel:
    return SpecHModel(G, base, cap)


# ---------------------------------------------------------------------------
# Specialization-closed subsets
# ---------------------------------------------------------------------------


class SpecializationClosedSubset:
    """Finite union of V(I) pieces, each inside one fiber of a model."""

    def __init__(self, model: SpecHModel, items):
        self.model = model
        self.items = self._reduce(list(items))

    def _reduce(self, items):
        # drop irrelevant pieces (V(I) empty in Proj) and inclusion-redundant ones
        kept = []
        for p, I in items:
            if p not in self.model.fibers:
                raise ModelMismatch(f"no fiber at {p}")
            if _is_irrelevant(self.model.fibers[p], I):
                continue
            kept.append((p, I))
        out = []
        for i, (p, I) in enumerate(kept):
            redundant = False
            for j, (q, J) in enumerate(kept):
                if i == j or p != q:
                    continue
                # V(I) subseteq V(J) iff J subseteq radical(I)
                inc = I.radical_includes(J)
                back = J.radical_includes(I)
                if inc is True and not (back is True and j < i):
                    if back is True:
                        # equal pieces: keep the earlier one
                        if j < i:
                            redundant = True
                            break
                    else:
                        redundant = True
                        break
            if not redundant:
                out.append((p, I))
        return out

    def _require_same_model(self, other):
        if self.model is not other.model:
            raise ModelMismatch("subsets of different spectrum models")

    def union(self, other):
        self._require_same_model(other)
        return SpecializationClosedSubset(self.model, self.items + other.items)

    def intersect(self, other):
        self._require_same_model(other)
        items = []
        for p, I in self.items:
            for q, J in other.items:
                if p == q:
                    items.append((p, I + J))
        return SpecializationClosedSubset(self.model, items)

    def includes(self, other):
        """True/False/None: whether other is contained in self."""
        self._require_same_model(other)
        verdict = True
        for q, J in other.items:
            covered = False
            for p, I in self.items:
                if p != q:
                    continue
                r = J.radical_includes(I)
                if r is True:
                    covered = True
                    break
            if not covered:
                return False if verdict is not None else None
        return verdict

    def same_as(self, other):
        a = self.includes(other)
        b = other.includes(self)
        if a is True and b is True:
            return True
        if a is False or b is False:
            return False
        return None

    def is_empty(self):
        return not self.items

    def canonical(self):
        out = []
        for p, I in self.items:
            out.append({"prime": p, "ideal": I.canonical_strings()})
        out.sort(key=lambda d: (d["prime"], d["ideal"]))
        return out

    def __repr__(self):
        if not self.items:
            return "SpecializationClosedSubset(empty)"
        parts = "; ".join(
            f"p={p}: V({', '.join(I.canonical_strings()) or '0'})" for p, I in self.items
        )
        return f"SpecializationClosedSubset({parts})"


def _is_irrelevant(fiber: ProjFiber, I: Ideal):
    """V(I) meets Proj iff I misses some variable up to radical."""
    if fiber.is_empty():
        return True
    for i in range(fiber.poly.nvars):
        if I.radical_contains(fiber.poly.var(i)) is not True:
            return False
    return True


# ---------------------------------------------------------------------------
# Quillen stratification desk check
# ---------------------------------------------------------------------------


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _subfield_elements(F, q, p):
    """Elements of GF(p, n) lying in the subfield of size q."""
    m = 0
    t = q
    while t > 1:
        t //= p
        m += 1
    return [a for a in F.elements() if F.in_subfield(a, m)]


def _eval_poly(f: Poly, point, F, embed):
    K = f.ring.coeff
    acc = F.zero()
    for e, c in f.terms.items():
        term = embed(c)
        for i, k in enumerate(e):
            for _ in range(k):
                term = F.mul(term, point[i])
        acc = F.add(acc, term)
    return acc


def _affine_points(poly: PolyRing, ideal: Ideal, coords, F, embed):
    """Nonzero tuples from coords^nvars where every relation vanishes."""
    pts = []

    def rec(i, cur):
        if i == poly.nvars:
            if any(not F.is_zero(c) for c in cur):
                if all(F.is_zero(_eval_poly(g, cur, F, embed)) for g in ideal.gens):
                    pts.append(tuple(cur))
            return
        for a in coords:
            rec(i + 1, cur + [a])

    rec(0, [])
    return pts


class QuillenReport:
    def __init__(self):
        self.kernel_nilpotence = None
        self.point_surjectivity = None
        self.orbit_identification = None
        self.details = []

    def passed(self):
        return (
            self.kernel_nilpotence is True
            and self.point_surjectivity is True
            and self.orbit_identification is True
        )

    def to_json(self):
        return {
            "kernel_nilpotence": self.kernel_nilpotence,
            "point_surjectivity": self.point_surjectivity,
            "orbit_identification": self.orbit_identification,
            "details": self.details,
        }


def quillen_check(G: FiniteGroup, p: int, cap: int = 8, nil_exponent_bound: int = 8) -> QuillenReport:
    """Desk-scale stratification check at one prime.

    (i) the kernel of restriction to all elementary abelians is nilpotent,
    (ii) every F_q-point (q in {p, p^2}) of the G-fiber cone pulls back from
    an elementary abelian fiber, (iii) points from different subgroups hit
    the same G-point exactly when an orbit-category morphism relates them.
    """
    report = QuillenReport()
    even = p % 2 == 1
    presG = ring_presentation(G, p, cap, even_only=even)
    cat = orbit_category(G, p)
    if not cat.objects:
        raise PresentationMissing(f"no elementary abelian {p}-subgroups")
    presE = []
    comparisons = []
    for E in cat.objects:
        pe = ring_presentation(E.group, p, cap, even_only=even)
        presE.append(pe)
        comparisons.append(ComparisonMap(pe.res, presG.res, inclusion_map(E)))

    report.kernel_nilpotence = _check_kernel_nilpotence(
        presG, presE, comparisons, cap, nil_exponent_bound, report
    )

    fibG = fiber_presentation(G, p, cap)
    fibE = [fiber_presentation(E.group, p, cap) for E in cat.objects]
    res_polys = _fiber_restriction_polys(presG, presE, comparisons, fibG, fibE)

    F = GF(p, 4)

    def embed(c):
        return F.from_int(int(c))

    surj = True
    point_map = {}  # (q, E index, point) -> G point
    all_pts = {}
    # coverage may need E-points in an extension (inseparable isogeny takes
    # p-power roots), so those are enumerated over all of GF(p, 4)
    full_coords = list(F.elements())
    covered = set()
    for i in range(len(fibE)):
        for b in _affine_points(fibE[i].poly, fibE[i].ideal, full_coords, F, embed):
            covered.add(tuple(_eval_poly(g, list(b), F, embed) for g in res_polys[i]))
    for q in (p, p * p):
        coords = _subfield_elements(F, q, p)
        gpts = _affine_points(fibG.poly, fibG.ideal, coords, F, embed)
        epts = {
            i: _affine_points(fibE[i].poly, fibE[i].ideal, coords, F, embed)
            for i in range(len(fibE))
        }
        for i, pts in epts.items():
            for b in pts:
                a = tuple(_eval_poly(g, list(b), F, embed) for g in res_polys[i])
                point_map[(q, i, b)] = a
        missing = [a for a in gpts if a not in covered]
        if missing:
            surj = False
            report.details.append(
                {"check": "point_surjectivity", "q": q, "missing": len(missing)}
            )
        all_pts[q] = epts
    report.point_surjectivity = surj

    report.orbit_identification = _check_orbit_identification(
        G, cat, presE, fibE, point_map, all_pts, F, embed, report
    )
    return report


def _check_kernel_nilpotence(presG, presE, comparisons, cap, bound, report):
    K = presG.coeff
    ok = True
    step = 2 if presG.even_only else 1
    for d in range(step, cap + 1, step):
        qG = presG.quotient(d)
        if qG.dim == 0:
            continue
        cols = []
        for rep in qG.reps:
            cls = CohomologyClass(presG.res, d, rep, check=False)
            coord = []
            for pe, cm in zip(presE, comparisons):
                restricted = cm.apply(cls)
                coord.extend(pe.quotient(d).coordinates(restricted.vec))
            cols.append(coord)
        if not cols[0]:
            continue
        M = Matrix(K, [[c[i] for c in cols] for i in range(len(cols[0]))], len(cols[0]), len(cols))
        for kv in FieldSolver(M).kernel_basis():
            vec = [K.zero()] * len(qG.reps[0])
            for c, rep in zip(kv, qG.reps):
                for t in range(len(vec)):
                    vec[t] = K.add(vec[t], K.mul(c, rep[t]))
            z = CohomologyClass(presG.res, d, vec, check=False)
            if not _is_nilpotent_class(z, presG, bound):
                ok = False if ok is not None else None
                report.details.append(
                    {"check": "kernel_nilpotence", "degree": d, "verdict": "not shown nilpotent"}
                )
    return ok


def _is_nilpotent_class(z, presG, bound):
    """Square/cube z until it vanishes; honest None only via a False here."""
    p = presG.coeff.p
    cur = z
    exponent = 1
    while exponent <= bound:
        if cur.is_coboundary() or cur.is_zero_vector():
            return True
        if cur.degree * p > presG.cap + 1:
            presG.res.extend(cur.degree * p + 1)
        nxt = cur
        for _ in range(p - 1):
            nxt = nxt.cup(cur)
        cur = nxt
        exponent *= p
    return cur.is_coboundary() or cur.is_zero_vector()


def _fiber_restriction_polys(presG, presE, comparisons, fibG, fibE):
    """For each E: images of the kept G-fiber generators as polynomials in
    the kept E-fiber variables."""
    out = []
    name_to_idx_G = {g.name: i for i, g in enumerate(presG.generators)}
    for pe, cm, fe in zip(presE, comparisons, fibE):
        keep_e = {n: j for j, n in enumerate(fe.poly.names)}
        e_idx_keep = [
            i for i, g in enumerate(pe.generators) if g.name in keep_e
        ]
        polys = []
        for name in fibG.poly.names:
            gi = name_to_idx_G[name]
            restricted = cm.apply(presG.generators[gi].cls)
            f = pe.coordinates_as_polynomial(restricted)
            img = _drop_vars(f, fe.poly, e_idx_keep)
            polys.append(img)
        out.append(polys)
    return out


def _check_orbit_identification(G, cat, presE, fibE, point_map, all_pts, F, embed, report):
    # pullback polynomials along each orbit morphism generator
    morph_polys = []
    for m in cat.morphisms:
        Es, Et = cat.objects[m.source], cat.objects[m.target]
        if m.kind == "inclusion":
            hom = [Et.index_of[x] for x in Es.elements]
        else:
            hom = [Et.index_of[G.conj(m.g, x)] for x in Es.elements]
        cm = ComparisonMap(presE[m.source].res, presE[m.target].res, hom)
        fe_s, fe_t = fibE[m.source], fibE[m.target]
        keep_s = [
            i for i, g in enumerate(presE[m.source].generators) if g.name in fe_s.poly.names
        ]
        polys = []
        for name in fe_t.poly.names:
            gi = [g.name for g in presE[m.target].generators].index(name)
            restricted = cm.apply(presE[m.target].generators[gi].cls)
            f = presE[m.source].coordinates_as_polynomial(restricted)
            polys.append(_drop_vars(f, fe_s.poly, keep_s))
        morph_polys.append((m, polys))

    ok = True
    for q, epts in all_pts.items():
        uf = _UnionFind()
        nodes = [(i, b) for i, pts in epts.items() for b in pts]
        for i, b in nodes:
            uf.find((i, b))
        for m, polys in morph_polys:
            # a source-fiber point b maps to the target point (polys evaluated at b)
            for b in epts.get(m.source, []):
                img = tuple(_eval_poly(g, list(b), F, embed) for g in polys)
                if any(not F.is_zero(c) for c in img) and img in set(epts.get(m.target, [])):
                    uf.union((m.source, b), (m.target, img))
        classes = {}
        for node in nodes:
            classes.setdefault(uf.find(node), []).append(node)
        # same G-point <=> same union-find class
        by_gpoint = {}
        for i, b in nodes:
            by_gpoint.setdefault(point_map[(q, i, b)], set()).add(uf.find((i, b)))
        for a, cls in by_gpoint.items():
            if len(cls) != 1:
                ok = False
                report.details.append(
                    {"check": "orbit_identification", "q": q, "classes": len(cls)}
                )
        # soundness: one class never maps to two G-points
        per_class = {}
        for i, b in nodes:
            root = uf.find((i, b))
            a = point_map[(q, i, b)]
            if root in per_class and per_class[root] != a:
                ok = False
                report.details.append(
                    {"check": "orbit_identification", "q": q, "error": "class maps to two points"}
                )
            per_class[root] = a
    return ok

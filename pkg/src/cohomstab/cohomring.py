"""Finite presentations of cohomology rings over finite fields, certified
degree by degree against the computed cohomology dimensions, plus graded
module structures and annihilator ideals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CapTooSmall, PresentationMissing, RingMismatch
from .groups import FiniteGroup
from .homalg import (
    CohomologyClass,
    CochainQuotient,
    Resolution,
    cohomology_quotient,
    lift_cocycle,
)
from .lattices import Lattice
from .linalg import FieldSolver, Matrix
from .polys import Ideal, Poly, PolyRing
from .rings import Fp, PrimeField


@dataclass
class GeneratorInfo:
    name: str
    degree: int
    cls: CohomologyClass = field(repr=False)


def _monomials_of_weight(degrees, target):
    """Exponent tuples with sum(e_i * degrees[i]) == target."""
    out = []

    def rec(i, rem, cur):
        if i == len(degrees):
            if rem == 0:
                out.append(tuple(cur))
            return
        d = degrees[i]
        top = rem // d if d else 0
        for k in range(top + 1):
            rec(i + 1, rem - k * d, cur + [k])

    rec(0, target, [])
    return sorted(out)


class GradedRingPresentation:
    """Generators and relations for H*(G; k) up to a degree cap.

    With ``even_only`` the presentation covers the (commutative) subring of
    even-degree classes; otherwise all degrees are used, which is only
    consistent for char 2 where the full ring is commutative.
    """

    def __init__(self, group: FiniteGroup, coeff: PrimeField, cap: int, even_only=False, resolution=None):
        self.group = group
        self.coeff = coeff
        self.cap = cap
        self.even_only = even_only
        self.res = resolution or Resolution.build(group, coeff, cap + 1)
        self.res.extend(cap + 1)
        self.generators: list[GeneratorInfo] = []
        self.hilbert = {0: 1}
        self._quotients = {}
        self._mono_cache = {}
        self._relation_polys = []
        self.poly = PolyRing(coeff, [], [])
        self.ideal = Ideal(self.poly, [])
        self.certified = False
        self._build()

    # -- construction ------------------------------------------------------

    def _degrees(self):
        step = 2 if self.even_only else 1
        return range(step, self.cap + 1, step)

    def quotient(self, d) -> CochainQuotient:
        if d not in self._quotients:
            self._quotients[d] = cohomology_quotient(self.res, d)
        return self._quotients[d]

    def _build(self):
        raw_relations = []  # (exponent-coeff term lists) pending final ring
        for d in self._degrees():
            q = self.quotient(d)
            self.hilbert[d] = q.dim
            degs = [g.degree for g in self.generators]
            monos = [m for m in _monomials_of_weight(degs, d) if any(m)]
            coords = []
            for m in monos:
                cls = self._evaluate(m)
                coords.append(q.coordinates(cls.vec))
            # relations: kernel of the evaluation matrix
            if monos:
                M = Matrix(
                    self.coeff,
                    [[c[i] for c in coords] for i in range(q.dim)],
                    q.dim,
                    len(monos),
                )
                solver = FieldSolver(M)
                for kv in solver.kernel_basis():
                    raw_relations.append(
                        [(monos[t], kv[t]) for t in range(len(monos)) if not self.coeff.is_zero(kv[t])]
                    )
                span_rank = solver.rank
            else:
                solver = None
                span_rank = 0
            if span_rank < q.dim:
                self._add_generators(d, q, coords)
        self._finalize(raw_relations)

    def _add_generators(self, d, q, span_coords):
        """New generators: quotient basis vectors outside the product span."""
        cols = list(span_coords)
        n_old = len(cols)
        for i in range(q.dim):
            e = [self.coeff.zero()] * q.dim
            e[i] = self.coeff.one()
            cols.append(e)
        M = Matrix(self.coeff, [[c[t] for c in cols] for t in range(q.dim)])
        from .linalg import rref

        _, pivots = rref(M)
        for (_, c) in pivots:
            if c >= n_old:
                rep = q.reps[c - n_old]
                name = f"x{len(self.generators) + 1}"
                cls = CohomologyClass(self.res, d, rep, check=False)
                self.generators.append(GeneratorInfo(name, d, cls))
                # old monomial exponent tuples gain a trailing zero
                self._mono_cache = {
                    m + (0,): v for m, v in self._mono_cache.items()
                }

    def _evaluate(self, mono) -> CohomologyClass:
        """Cohomology class of a monomial in the current generators."""
        mono = tuple(mono)
        if mono in self._mono_cache:
            return self._mono_cache[mono]
        nz = [i for i, e in enumerate(mono) if e]
        i = nz[-1]
        prev = list(mono)
        prev[i] -= 1
        prev = tuple(prev)
        if any(prev):
            cls = self._evaluate(prev).cup(self.generators[i].cls)
        else:
            cls = self.generators[i].cls
        self._mono_cache[mono] = cls
        return cls

    def _finalize(self, raw_relations):
        names = [g.name for g in self.generators]
        degs = [g.degree for g in self.generators]
        self.poly = PolyRing(self.coeff, names, degs)
        n = len(names)
        polys = []
        for terms in raw_relations:
            padded = [
                (tuple(m) + (0,) * (n - len(m)), c) for m, c in terms
            ]
            f = self.poly.from_terms(padded)
            if not f.is_zero():
                polys.append(f)
        self._relation_polys = polys
        self.ideal = Ideal(self.poly, polys)
        self.certified = self._certify()

    def _certify(self):
        leads = [g.lead()[0] for g in self.ideal.gb]
        for d in self._degrees():
            count = 0
            for m in _monomials_of_weight(self.poly.degrees, d):
                if not any(_divides(l, m) for l in leads):
                    count += 1
            if count != self.hilbert[d]:
                return False
        return True

    # -- queries -----------------------------------------------------------

    def generator_degrees(self):
        return [g.degree for g in self.generators]

    def hilbert_function(self, d):
        if d not in self.hilbert and d != 0:
            raise CapTooSmall(f"presentation certified only up to degree {self.cap}")
        return self.hilbert.get(d, 1 if d == 0 else 0)

    def class_of(self, f: Poly) -> CohomologyClass:
        """Cohomology class of a homogeneous polynomial in the generators."""
        if f.ring != self.poly:
            raise RingMismatch("polynomial from a different presentation")
        terms = sorted(f.terms.items())
        K = self.coeff
        deg = None
        acc = None
        for e, c in terms:
            cls = self._evaluate(e)
            if deg is None:
                deg = cls.degree
                acc = [K.zero()] * len(cls.vec)
            if cls.degree != deg:
                raise RingMismatch("class_of needs a homogeneous polynomial")
            for t in range(len(acc)):
                acc[t] = K.add(acc[t], K.mul(c, cls.vec[t]))
        return CohomologyClass(self.res, deg, acc, check=False)

    def coordinates_as_polynomial(self, cls: CohomologyClass) -> Poly:
        """Express a class in degree <= cap as a polynomial in the generators."""
        d = cls.degree
        q = self.quotient(d)
        target = q.coordinates(cls.vec)
        monos = [m for m in _monomials_of_weight(self.poly.degrees, d) if any(m)]
        cols = [q.coordinates(self._evaluate(m).vec) for m in monos]
        M = Matrix(self.coeff, [[c[i] for c in cols] for i in range(q.dim)])
        sol = FieldSolver(M).solve(target)
        return self.poly.from_terms(list(zip(monos, sol)))

    def to_json(self):
        return {
            "group": self.group.name,
            "field": self.coeff.tag,
            "cap": self.cap,
            "even_only": self.even_only,
            "generators": [
                {"name": g.name, "degree": g.degree} for g in self.generators
            ],
            "relations": self.ideal.canonical_strings(),
            "hilbert": {str(d): self.hilbert[d] for d in sorted(self.hilbert)},
            "certified": self.certified,
        }

    def __repr__(self):
        gens = ", ".join(f"{g.name}({g.degree})" for g in self.generators)
        rels = ", ".join(self.ideal.canonical_strings()) or "0"
        return f"{self.coeff}[{gens}] / ({rels})"


def _divides(lead, mono):
    return all(a <= b for a, b in zip(lead, mono))


def ring_presentation(G: FiniteGroup, p: int, cap: int, even_only=False) -> GradedRingPresentation:
    return GradedRingPresentation(G, Fp(p), cap, even_only=even_only)


# ---------------------------------------------------------------------------
# Graded modules over a presented cohomology ring
# ---------------------------------------------------------------------------


class GradedModulePresentation:
    """H*(G; L) for a lattice L, as a graded module over a ring presentation.

    Holds per-degree bases (up to the presentation cap) and the matrices by
    which each ring generator acts; the annihilator is assembled from the
    visible degrees, so it is an ideal certified up to the cap.
    """

    def __init__(self, pres: GradedRingPresentation, L: Lattice):
        if L.group != pres.group or L.ring != pres.coeff:
            raise RingMismatch("lattice does not match the presentation")
        self.pres = pres
        self.L = L
        self.cap = pres.cap
        res = pres.res
        from .lattices import trivial_lattice

        self.quotients = {}
        for d in range(self.cap + 1):
            cur = res.diff(d + 1).cochain_map(L)
            prev = res.diff(d).cochain_map(L) if d >= 1 else None
            self.quotients[d] = CochainQuotient(pres.coeff, cur, prev)
        self.dims = {d: self.quotients[d].dim for d in range(self.cap + 1)}
        self._gen_action = {}

    def dim(self, d):
        return self.dims.get(d, 0)

    def generator_action(self, gi: int):
        """Matrices of generator gi on coordinates, one per source degree."""
        if gi in self._gen_action:
            return self._gen_action[gi]
        pres = self.pres
        gen = pres.generators[gi]
        w = gen.degree
        res = pres.res
        G = pres.group
        order = G.order
        K = pres.coeff
        rL = self.L.rank
        levels = lift_cocycle(res, w, gen.cls.vec, self.cap - w if self.cap >= w else 0)
        mats = {}
        for d in range(0, self.cap - w + 1):
            src = self.quotients[d]
            tgt = self.quotients[d + w]
            lift = levels[d]
            cols = []
            for b in range(src.dim):
                v = src.reps[b]  # length r_d * rL
                out = [K.zero()] * (res.rank(d + w) * rL)
                for j in range(res.rank(d + w)):
                    vec = lift[j]
                    for i in range(res.rank(d)):
                        for g in range(order):
                            c = vec[i * order + g]
                            if K.is_zero(c):
                                continue
                            A = self.L.act(g)
                            for s in range(rL):
                                acc = K.zero()
                                for t in range(rL):
                                    x = A.rows[s][t]
                                    if not K.is_zero(x):
                                        acc = K.add(acc, K.mul(x, v[i * rL + t]))
                                out[j * rL + s] = K.add(out[j * rL + s], K.mul(c, acc))
                cols.append(tgt.coordinates(out))
            mats[d] = Matrix(
                K,
                [[cols[b][i] for b in range(src.dim)] for i in range(tgt.dim)],
                tgt.dim,
                src.dim,
            )
        self._gen_action[gi] = mats
        return mats

    def monomial_action(self, mono):
        """Per-degree action matrices of a generator monomial."""
        pres = self.pres
        K = pres.coeff
        w = sum(e * g.degree for e, g in zip(mono, pres.generators))
        mats = {
            d: Matrix.identity(K, self.dim(d)) for d in range(self.cap + 1)
        }
        shift = 0
        for gi, e in enumerate(mono):
            for _ in range(e):
                gw = pres.generators[gi].degree
                gm = self.generator_action(gi)
                new = {}
                for d in range(0, self.cap - shift - gw + 1):
                    new[d] = gm[d + shift] * mats[d]
                mats = new
                shift += gw
        return w, mats

    def annihilator(self) -> Ideal:
        """Homogeneous annihilator of the visible part of the module."""
        pres = self.pres
        K = pres.coeff
        leads = [g.lead()[0] for g in pres.ideal.gb]
        gens = list(pres.ideal.gens)
        if all(self.dim(d) == 0 for d in range(self.cap + 1)):
            # zero module: annihilated by everything
            return Ideal(pres.poly, pres.poly.gens() or [pres.poly.one()])
        for e in range(1, self.cap + 1):
            monos = [
                m
                for m in _monomials_of_weight(pres.poly.degrees, e)
                if any(m) and not any(_divides(l, m) for l in leads)
            ]
            if not monos:
                continue
            # stack the action of each monomial over all checkable degrees
            blocks = []
            for m in monos:
                _, mats = self.monomial_action(m)
                blocks.append(mats)
            degrees_checked = [d for d in range(self.cap - e + 1) if self.dim(d)]
            if not degrees_checked:
                continue
            col_vecs = []
            for mats in blocks:
                vec = []
                for d in degrees_checked:
                    M = mats[d]
                    for b in range(self.dim(d)):
                        for i in range(M.nrows):
                            vec.append(M.rows[i][b])
                col_vecs.append(vec)
            nrows = len(col_vecs[0])
            A = Matrix(
                K,
                [[c[i] for c in col_vecs] for i in range(nrows)],
                nrows,
                len(col_vecs),
            )
            for kv in FieldSolver(A).kernel_basis():
                f = pres.poly.from_terms(
                    [(monos[t], kv[t]) for t in range(len(monos))]
                )
                if not f.is_zero():
                    gens.append(f)
        return Ideal(pres.poly, gens)

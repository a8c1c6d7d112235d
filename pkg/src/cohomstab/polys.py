"""Graded polynomials over fields and reduced Groebner bases.

Variables carry degrees (weights); all ideal-theoretic routines assume
homogeneous input with respect to those weights.  The monomial order is
weighted-degree-graded, ties broken by lexicographic exponent comparison,
which makes every reduced basis deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NonHomogeneousInput, UnsupportedRing
from .rings import CoeffRing


class PolyRing:
    """Polynomial ring over a field with weighted variable degrees."""

    def __init__(self, coeff: CoeffRing, names, degrees=None):
        if not coeff.is_field:
            raise UnsupportedRing("polynomial ideals require a field of coefficients")
        self.coeff = coeff
        self.names = tuple(names)
        self.degrees = tuple(degrees) if degrees is not None else (1,) * len(self.names)
        if len(self.degrees) != len(self.names):
            raise ValueError("names/degrees length mismatch")
        self.nvars = len(self.names)

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.coeff == other.coeff
            and self.names == other.names
            and self.degrees == other.degrees
        )

    def __hash__(self):
        return hash((self.coeff, self.names, self.degrees))

    def __repr__(self):
        return f"{self.coeff}[{', '.join(self.names)}]"

    # -- constructors ---------------------------------------------------------

    def zero(self):
        return Poly(self, {})

    def one(self):
        return Poly(self, {(0,) * self.nvars: self.coeff.one()})

    def var(self, i):
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): self.coeff.one()})

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def from_terms(self, terms):
        """terms: iterable of (exponent tuple, coeff)."""
        d = {}
        K = self.coeff
        for e, c in terms:
            e = tuple(e)
            acc = K.add(d.get(e, K.zero()), c)
            if K.is_zero(acc):
                d.pop(e, None)
            else:
                d[e] = acc
        return Poly(self, d)

    def monomial_weight(self, e):
        return sum(x * d for x, d in zip(e, self.degrees))

    def order_key(self, e):
        # Higher key = bigger monomial: graded by weight, then lex.
        return (self.monomial_weight(e), e)


class Poly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, Poly) and self.ring == other.ring and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring, tuple(sorted(self.terms.items()))))

    def __add__(self, other):
        return self.ring.from_terms(list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self):
        K = self.ring.coeff
        return Poly(self.ring, {e: K.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        K = self.ring.coeff
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc = K.add(out.get(e, K.zero()), K.mul(c1, c2))
                if K.is_zero(acc):
                    out.pop(e, None)
                else:
                    out[e] = acc
        return Poly(self.ring, out)

    def scale(self, c):
        K = self.ring.coeff
        if K.is_zero(c):
            return self.ring.zero()
        return Poly(self.ring, {e: K.mul(c, x) for e, x in self.terms.items()})

    def pow(self, k: int):
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def lead(self):
        """(exponent, coeff) of the leading term."""
        e = max(self.terms, key=self.ring.order_key)
        return e, self.terms[e]

    def monic(self):
        if self.is_zero():
            return self
        _, c = self.lead()
        return self.scale(self.ring.coeff.inv(c))

    def weighted_degree(self):
        if self.is_zero():
            return -1
        return max(self.ring.monomial_weight(e) for e in self.terms)

    def is_homogeneous(self):
        if self.is_zero():
            return True
        ws = {self.ring.monomial_weight(e) for e in self.terms}
        return len(ws) == 1

    def evaluate(self, values, target: CoeffRing | None = None, convert=None):
        """Evaluate at a point; values live in ``target`` (default: coeff field).

        ``convert`` maps base-field coefficients into ``target``.
        """
        K = target if target is not None else self.ring.coeff
        if convert is None:
            if K == self.ring.coeff:
                convert = lambda c: c
            else:
                raise ValueError("conversion map required for a different target field")
        acc = K.zero()
        for e, c in self.terms.items():
            t = convert(c)
            for i, k in enumerate(e):
                for _ in range(k):
                    t = K.mul(t, values[i])
            acc = K.add(acc, t)
        return acc

    def __str__(self):
        if self.is_zero():
            return "0"
        K = self.ring.coeff
        items = sorted(self.terms.items(), key=lambda ec: self.ring.order_key(ec[0]), reverse=True)
        parts = []
        for e, c in items:
            factors = []
            for name, k in zip(self.ring.names, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            cs = K.element_str(c)
            if not factors:
                parts.append(cs)
            elif cs == "1":
                parts.append("*".join(factors))
            else:
                parts.append(cs + "*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({self})"


def _divides_mono(e1, e2):
    return all(a <= b for a, b in zip(e1, e2))


def _mono_div(e2, e1):
    return tuple(b - a for a, b in zip(e1, e2))


def normal_form(f: Poly, basis: list[Poly]) -> Poly:
    """Remainder of f on division by basis (each divisor taken monic)."""
    ring = f.ring
    K = ring.coeff
    rem = ring.zero()
    work = f
    lead_data = [(g.lead()[0], g) for g in basis if not g.is_zero()]
    while not work.is_zero():
        e, c = work.lead()
        hit = None
        for le, g in lead_data:
            if _divides_mono(le, e):
                hit = (le, g)
                break
        if hit is None:
            rem = rem + Poly(ring, {e: c})
            work = Poly(ring, {k: v for k, v in work.terms.items() if k != e})
        else:
            le, g = hit
            ge, gc = g.lead()
            factor = Poly(ring, {_mono_div(e, le): K.mul(c, K.inv(gc))})
            work = work - factor * g
    return rem


def _s_poly(f: Poly, g: Poly) -> Poly:
    ring = f.ring
    K = ring.coeff
    ef, cf = f.lead()
    eg, cg = g.lead()
    lcm = tuple(max(a, b) for a, b in zip(ef, eg))
    mf = Poly(ring, {_mono_div(lcm, ef): K.inv(cf)})
    mg = Poly(ring, {_mono_div(lcm, eg): K.inv(cg)})
    return mf * f - mg * g


def groebner_basis(gens: list[Poly], require_homogeneous=True) -> list[Poly]:
    """Reduced Groebner basis (Buchberger); deterministic for fixed input set."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    ring = gens[0].ring
    if require_homogeneous:
        for g in gens:
            if not g.is_homogeneous():
                raise NonHomogeneousInput(f"{g} is not homogeneous")
    basis = [g.monic() for g in gens]
    # deterministic processing order
    basis.sort(key=lambda g: (g.weighted_degree(), sorted(g.terms)))
    pairs = [(i, j) for i in range(len(basis)) for j in range(i)]
    while pairs:
        i, j = pairs.pop(0)
        s = _s_poly(basis[i], basis[j])
        r = normal_form(s, basis)
        if not r.is_zero():
            basis.append(r.monic())
            k = len(basis) - 1
            pairs.extend((k, t) for t in range(k))
    # minimalize by leading terms, then reduce tails
    basis.sort(key=lambda g: (g.ring.order_key(g.lead()[0]), sorted(g.terms)))
    minimal = []
    for g in basis:
        le = g.lead()[0]
        if any(_divides_mono(h.lead()[0], le) for h in minimal):
            continue
        minimal.append(g)
    out = []
    for g in minimal:
        r = normal_form(g, [h for h in minimal if h is not g])
        if not r.is_zero():
            out.append(r.monic())
    out.sort(key=lambda g: (g.weighted_degree(), sorted(g.terms)))
    return out


@dataclass
class GroebnerBasis:
    """Reduced Groebner basis of a homogeneous ideal, with its presentation."""

    ring: PolyRing
    generators: list
    basis: list = field(default_factory=list)
    monomial_order: str = "weighted-degrevlex(lex tiebreak)"

    def __post_init__(self):
        if not self.basis:
            self.basis = groebner_basis(self.generators)

    def contains(self, f: Poly) -> bool:
        return normal_form(f, self.basis).is_zero()

    def __eq__(self, other):
        return isinstance(other, GroebnerBasis) and self.ring == other.ring and [
            sorted(g.terms.items()) for g in self.basis
        ] == [sorted(g.terms.items()) for g in other.basis]


def groebner(generators: list[Poly], ring: PolyRing | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the homogeneous ideal the generators span."""
    if ring is None:
        if not generators:
            raise ValueError("need a ring or at least one generator")
        ring = generators[0].ring
    return GroebnerBasis(ring, list(generators))


class Ideal:
    """Homogeneous ideal with radical-aware comparisons."""

    def __init__(self, ring: PolyRing, gens):
        self.ring = ring
        self.gens = [g for g in gens if not g.is_zero()]
        self._gb = None

    @property
    def gb(self) -> list[Poly]:
        if self._gb is None:
            self._gb = groebner_basis(self.gens)
        return self._gb

    def contains(self, f: Poly) -> bool:
        return normal_form(f, self.gb).is_zero()

    def radical_contains(self, f: Poly, exponent_bound=4):
        """True/False/None; tries f^(p^s) for s <= exponent_bound.

        Powers are monotone (f^N in I implies f^(N+1) in I), so checking the
        top power decides membership for all exponents up to p^bound; beyond
        that the answer is None (indeterminate).
        """
        if f.is_zero():
            return True
        p = self.ring.coeff.characteristic
        base = p if p else 2
        g = f
        for _ in range(exponent_bound + 1):
            if self.contains(g):
                return True
            g = normal_form(g.pow(base), self.gb)
            if g.is_zero():
                return True
        return None

    def radical_includes(self, other: "Ideal", exponent_bound=4):
        """Whether other is contained in the radical of self (None = unknown)."""
        verdict = True
        for g in other.gens:
            r = self.radical_contains(g, exponent_bound)
            if r is False:
                return False
            if r is None:
                verdict = None
        return verdict

    def __add__(self, other: "Ideal"):
        return Ideal(self.ring, self.gens + other.gens)

    def product(self, other: "Ideal"):
        if not self.gens or not other.gens:
            return Ideal(self.ring, [])
        return Ideal(self.ring, [a * b for a in self.gens for b in other.gens])

    def is_zero(self):
        return not self.gb

    def canonical_strings(self):
        return sorted(str(g) for g in self.gb)

    def __repr__(self):
        gs = ", ".join(self.canonical_strings()) or "0"
        return f"Ideal({gs})"


def poly_from_string(ring: PolyRing, s: str) -> Poly:
    """Parse 'c*name^k*...+...' as produced by Poly.__str__ (prime fields only)."""
    K = ring.coeff
    s = s.strip()
    if s == "0":
        return ring.zero()
    terms = []
    for part in s.replace("- ", "+ -").split("+"):
        part = part.strip()
        if not part:
            continue
        coeff = K.one()
        exps = [0] * ring.nvars
        for factor in part.split("*"):
            factor = factor.strip()
            if not factor:
                continue
            if factor.lstrip("-").isdigit():
                coeff = K.mul(coeff, K.from_int(int(factor)))
                continue
            if "^" in factor:
                name, k = factor.split("^")
                k = int(k)
            else:
                name, k = factor, 1
            exps[ring.names.index(name)] += k
        terms.append((tuple(exps), coeff))
    return ring.from_terms(terms)

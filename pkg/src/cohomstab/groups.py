"""Finite groups as explicit multiplication tables.

Elements are 0..n-1 with 0 the identity.  Construction validates the group
axioms and names the failing one.  Subgroups remember their parent and the
inclusion map, and can be turned into standalone groups for functors that
change the group.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NoIdentity, NoInverse, NotASubgroup, NotAssociative


class FiniteGroup:
    def __init__(self, table, name: str | None = None, validate=True):
        self.table = [list(r) for r in table]
        self.order = len(self.table)
        self.name = name or f"G{self.order}"
        if validate:
            self._validate()
        self.inverse = [self._find_inverse(g) for g in range(self.order)]

    def _validate(self):
        n = self.order
        for r in self.table:
            if len(r) != n or any(not (0 <= x < n) for x in r):
                raise NotAssociative("table is not square over 0..n-1")
        for g in range(n):
            if self.table[0][g] != g or self.table[g][0] != g:
                raise NoIdentity("element 0 is not a two-sided identity")
        for g in range(n):
            if all(self.table[g][h] != 0 for h in range(n)):
                raise NoInverse(f"element {g} has no right inverse")
            if all(self.table[h][g] != 0 for h in range(n)):
                raise NoInverse(f"element {g} has no left inverse")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                        raise NotAssociative(
                            f"({a}*{b})*{c} != {a}*({b}*{c})"
                        )

    def _find_inverse(self, g):
        for h in range(self.order):
            if self.table[g][h] == 0 and self.table[h][g] == 0:
                return h
        raise NoInverse(f"element {g} has no two-sided inverse")

    # -- basic queries --------------------------------------------------------

    def mul(self, g, h):
        return self.table[g][h]

    def inv(self, g):
        return self.inverse[g]

    def conj(self, g, x):
        """g x g^{-1}."""
        return self.mul(self.mul(g, x), self.inv(g))

    def element_order(self, g):
        k, x = 1, g
        while x != 0:
            x = self.mul(x, g)
            k += 1
        return k

    def exponent_primes(self):
        primes = []
        n = self.order
        d = 2
        while d * d <= n:
            if n % d == 0:
                primes.append(d)
                while n % d == 0:
                    n //= d
            d += 1
        if n > 1:
            primes.append(n)
        return primes

    def is_abelian(self):
        return all(
            self.table[a][b] == self.table[b][a]
            for a in range(self.order)
            for b in range(a)
        )

    def closure(self, gens):
        """Subgroup elements generated by ``gens``, as a sorted tuple."""
        seen = {0}
        frontier = [0]
        gens = list(gens)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
                y = self.mul(g, x)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return tuple(sorted(seen))

    def subgroup(self, elements) -> "Subgroup":
        return Subgroup(self, tuple(sorted(set(elements) | {0})))

    def trivial_subgroup(self):
        return self.subgroup((0,))

    def full_subgroup(self):
        return self.subgroup(range(self.order))

    # -- serialization --------------------------------------------------------

    def to_json(self):
        return {"order": self.order, "table": self.table}

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.table))


class Subgroup:
    """Subset of a parent group, closed under multiplication and inverses."""

    def __init__(self, parent: FiniteGroup, elements):
        self.parent = parent
        self.elements = tuple(sorted(set(elements)))
        if 0 not in self.elements:
            raise NotASubgroup("missing identity")
        index = {g: i for i, g in enumerate(self.elements)}
        for a in self.elements:
            if parent.inv(a) not in index:
                raise NotASubgroup(f"not closed under inverse at {a}")
            for b in self.elements:
                if parent.mul(a, b) not in index:
                    raise NotASubgroup(f"not closed under product at ({a},{b})")
        if parent.order % len(self.elements):
            raise NotASubgroup("Lagrange violation")
        self.index_of = index
        # standalone group on the reindexed elements (identity first by sorting)
        n = len(self.elements)
        table = [
            [index[parent.mul(self.elements[i], self.elements[j])] for j in range(n)]
            for i in range(n)
        ]
        self.group = FiniteGroup(table, name=f"{parent.name}:sub{n}", validate=False)
        self.group.inverse = [index[parent.inv(g)] for g in self.elements]

    @property
    def order(self):
        return len(self.elements)

    def include(self, i):
        """Map a subgroup element index to the parent element."""
        return self.elements[i]

    def contains_subset(self, elements):
        return all(g in self.index_of for g in elements)

    def conjugate(self, g):
        """The subgroup g H g^{-1}."""
        return Subgroup(self.parent, tuple(self.parent.conj(g, x) for x in self.elements))

    def is_elementary_abelian(self, p=None):
        if self.order == 1:
            return False
        primes = {self.parent.element_order(g) for g in self.elements if g != 0}
        if len(primes) != 1:
            return False
        q = primes.pop()
        if p is not None and q != p:
            return False
        # prime exponent (q prime since all non-identity orders equal q and
        # the subgroup order is a power of q by Cauchy)
        for a in self.elements:
            for b in self.elements:
                if self.parent.mul(a, b) != self.parent.mul(b, a):
                    return False
        d = 2
        while d * d <= q:
            if q % d == 0:
                return False
            d += 1
        return True

    def rank(self, p):
        r = 0
        n = self.order
        while n % p == 0:
            n //= p
            r += 1
        return r

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.parent == other.parent
            and self.elements == other.elements
        )

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    def __repr__(self):
        return f"Subgroup(order={self.order}, elements={self.elements})"


def make_group(table, name=None) -> FiniteGroup:
    """Validate a multiplication table; errors name the failing axiom."""
    return FiniteGroup(table, name=name)


def from_permutation_generators(perms, name=None) -> FiniteGroup:
    """Group generated by permutations of {0..k-1}; identity gets index 0.

    Element order is deterministic: identity first, remaining elements sorted
    by their permutation tuple.
    """
    k = len(perms[0])
    for p in perms:
        if sorted(p) != list(range(k)):
            raise NotAssociative(f"{p} is not a permutation of 0..{k - 1}")
    ident = tuple(range(k))
    elems = {ident}
    frontier = [ident]
    gens = [tuple(p) for p in perms]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = tuple(x[g[i]] for i in range(k))
            if y not in elems:
                elems.add(y)
                frontier.append(y)
            y = tuple(g[x[i]] for i in range(k))
            if y not in elems:
                elems.add(y)
                frontier.append(y)
    ordered = [ident] + sorted(e for e in elems if e != ident)
    index = {e: i for i, e in enumerate(ordered)}
    # product = composition: (a*b)(i) = a(b(i))
    table = [
        [index[tuple(a[b[i]] for i in range(k))] for b in ordered] for a in ordered
    ]
    return FiniteGroup(table, name=name)


def cyclic_group(n, name=None) -> FiniteGroup:
    return FiniteGroup(
        [[(i + j) % n for j in range(n)] for i in range(n)],
        name=name or f"C{n}",
    )


def direct_product(G: FiniteGroup, H: FiniteGroup, name=None) -> FiniteGroup:
    n, m = G.order, H.order
    table = [
        [
            G.mul(a, c) * m + H.mul(b, d)
            for c in range(n)
            for d in range(m)
        ]
        for a in range(n)
        for b in range(m)
    ]
    out = FiniteGroup(table, name=name or f"{G.name}x{H.name}", validate=False)
    out.product_factors = (G, H)
    return out


def quaternion_group() -> FiniteGroup:
    # elements 1, -1, i, -i, j, -j, k, -k
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    base = {"1": (1, "1"), "i": (1, "i"), "j": (1, "j"), "k": (1, "k")}

    def mul(a, b):
        sa = -1 if a.startswith("-") else 1
        sb = -1 if b.startswith("-") else 1
        xa = a.lstrip("-")
        xb = b.lstrip("-")
        rules = {
            ("1", "1"): (1, "1"),
            ("1", "i"): (1, "i"),
            ("1", "j"): (1, "j"),
            ("1", "k"): (1, "k"),
            ("i", "1"): (1, "i"),
            ("j", "1"): (1, "j"),
            ("k", "1"): (1, "k"),
            ("i", "i"): (-1, "1"),
            ("j", "j"): (-1, "1"),
            ("k", "k"): (-1, "1"),
            ("i", "j"): (1, "k"),
            ("j", "i"): (-1, "k"),
            ("j", "k"): (1, "i"),
            ("k", "j"): (-1, "i"),
            ("k", "i"): (1, "j"),
            ("i", "k"): (-1, "j"),
        }
        s, x = rules[(xa, xb)]
        s *= sa * sb
        return ("" if s == 1 else "-") + x

    index = {nm: i for i, nm in enumerate(names)}
    table = [[index[mul(a, b)] for b in names] for a in names]
    return FiniteGroup(table, name="Q8")


_builtins: dict[str, FiniteGroup] = {}


def builtin_group(name: str) -> FiniteGroup:
    """Named groups used throughout: C2 C3 C4 C5 C6 V4 E9 S3 D4 Q8."""
    key = name.upper()
    if key in _builtins:
        return _builtins[key]
    if key.startswith("C") and key[1:].isdigit():
        g = cyclic_group(int(key[1:]), name=key)
    elif key == "V4":
        g = direct_product(cyclic_group(2), cyclic_group(2), name="V4")
    elif key == "E9":
        g = direct_product(cyclic_group(3), cyclic_group(3), name="E9")
    elif key == "E8":
        v = direct_product(cyclic_group(2), cyclic_group(2))
        g = direct_product(v, cyclic_group(2), name="E8")
    elif key == "S3":
        g = from_permutation_generators([(1, 0, 2), (1, 2, 0)], name="S3")
    elif key == "D4":
        g = from_permutation_generators([(1, 2, 3, 0), (1, 0, 3, 2)], name="D4")
    elif key == "Q8":
        g = quaternion_group()
    else:
        raise KeyError(f"unknown builtin group {name!r}")
    _builtins[key] = g
    return g


def group_from_json(data) -> FiniteGroup:
    if "table" in data:
        return make_group(data["table"], name=data.get("name"))
    if "permutation_generators" in data:
        return from_permutation_generators(
            [tuple(p) for p in data["permutation_generators"]], name=data.get("name")
        )
    raise KeyError("group JSON needs 'table' or 'permutation_generators'")


# ---------------------------------------------------------------------------
# Elementary abelian subgroups and the orbit category
# ---------------------------------------------------------------------------


def elementary_abelian_subgroups(G: FiniteGroup, p=None, include_trivial=False):
    """All subgroups isomorphic to (Z/q)^r (q = p when given), duplicate-free.

    Exhaustive: starts from cyclic subgroups of prime order and extends by
    commuting elements of the same order, so every elementary abelian
    subgroup of the (desk scale) group is found.
    """
    primes = [p] if p is not None else G.exponent_primes()
    found: dict[tuple, Subgroup] = {}
    for q in primes:
        order_q = [g for g in range(1, G.order) if G.element_order(g) == q]
        layer = []
        for g in order_q:
            els = G.closure([g])
            if els not in found:
                sub = G.subgroup(els)
                found[els] = sub
                layer.append(sub)
        # extend by commuting order-q elements until no new subgroups appear
        while layer:
            nxt = []
            for E in layer:
                for x in order_q:
                    if x in E.index_of:
                        continue
                    if all(G.mul(x, e) == G.mul(e, x) for e in E.elements):
                        els = G.closure(list(E.elements) + [x])
                        if els not in found:
                            sub = G.subgroup(els)
                            if sub.is_elementary_abelian(q):
                                found[els] = sub
                                nxt.append(sub)
            layer = nxt
    subs = sorted(found.values(), key=lambda s: (s.order, s.elements))
    if include_trivial:
        subs = [G.trivial_subgroup()] + subs
    return subs


@dataclass(frozen=True)
class OrbitMorphism:
    """Generator morphism of the orbit category on elementary abelians.

    ``kind`` is "inclusion" or "conjugation"; conjugation by g maps the
    source E into the target gEg^{-1} (possibly followed by inclusion).
    """

    source: int
    target: int
    kind: str
    g: int  # conjugating element (0 for pure inclusions)


class ElabOrbitCategory:
    def __init__(self, group: FiniteGroup, objects, morphisms):
        self.group = group
        self.objects = objects  # list of Subgroup
        self.morphisms = morphisms  # list of OrbitMorphism

    def __repr__(self):
        return (
            f"ElabOrbitCategory({self.group.name}, {len(self.objects)} objects, "
            f"{len(self.morphisms)} morphism generators)"
        )


def orbit_category(G: FiniteGroup, p=None) -> ElabOrbitCategory:
    """Orbit category generators: inclusions and conjugations between the
    elementary abelian subgroups (one prime, or all primes dividing |G|)."""
    objects = elementary_abelian_subgroups(G, p)
    index = {E.elements: i for i, E in enumerate(objects)}
    morphisms = []
    seen = set()
    for i, E in enumerate(objects):
        for j, F in enumerate(objects):
            if i != j and F.contains_subset(E.elements):
                key = (i, j, "inclusion", 0)
                if key not in seen:
                    seen.add(key)
                    morphisms.append(OrbitMorphism(i, j, "inclusion", 0))
        for g in range(1, G.order):
            conj_els = tuple(sorted(G.conj(g, x) for x in E.elements))
            j = index.get(conj_els)
            if j is None:
                # conjugation may land inside a larger listed subgroup only if
                # the conjugate itself is listed; ElabOrbitCategory invariants
                # require closure, so this must not happen
                raise NotASubgroup("elementary abelian family not conjugation closed")
            if conj_els != E.elements or any(
                G.conj(g, x) != x for x in E.elements
            ):
                key = (i, j, "conjugation", g)
                if key not in seen:
                    seen.add(key)
                    morphisms.append(OrbitMorphism(i, j, "conjugation", g))
    return ElabOrbitCategory(G, objects, morphisms)

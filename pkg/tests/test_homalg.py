import pytest

from cohomstab.groups import builtin_group
from cohomstab.homalg import (
    CohomologyClass,
    CompleteResolution,
    Resolution,
    ZmodCochainQuotient,
    carlson_lattice,
    cohomology,
    cohomology_mod,
    cohomology_quotient,
    restriction_map,
    tate_cohomology,
)
from cohomstab.lattices import trivial_lattice
from cohomstab.rings import Fp, QQ, ZZ, Zloc, Zmod

C2 = builtin_group("C2")
C4 = builtin_group("C4")
V4 = builtin_group("V4")
S3 = builtin_group("S3")
Q8 = builtin_group("Q8")
D4 = builtin_group("D4")


def H(G, ring, n, res=None):
    return cohomology(G, trivial_lattice(G, ring), n, resolution=res)


def test_periodic_resolution_c2():
    res = Resolution.build(C2, ZZ, 8)
    assert res.validate()
    assert [str(H(C2, ZZ, n, res)) for n in range(7)] == [
        "Z", "0", "Z/2", "0", "Z/2", "0", "Z/2",
    ]


def test_tensor_resolution_v4_ranks():
    res = Resolution.build(V4, Fp(2), 8)
    assert res.validate()
    assert [res.ranks[n] for n in range(9)] == [1, 2, 3, 4, 5, 6, 7, 8, 9]


def test_minimal_resolution_s3():
    res = Resolution.build(S3, ZZ, 7)
    assert res.validate()
    assert [str(H(S3, ZZ, n, res)) for n in range(7)] == [
        "Z", "0", "Z/2", "0", "Z/6", "0", "Z/2",
    ]


def test_s3_rational_cohomology_vanishes():
    res = Resolution.build(S3, QQ, 5)
    for n in range(1, 5):
        assert H(S3, QQ, n, res).is_trivial()


def test_q8_integral_oracle():
    res = Resolution.build(Q8, ZZ, 5)
    assert str(H(Q8, ZZ, 2, res)) == "Z/2 + Z/2"
    assert str(H(Q8, ZZ, 4, res)) == "Z/8"


def test_d4_mod2_dims():
    res = Resolution.build(D4, Fp(2), 7)
    for n in range(7):
        assert cohomology_quotient(res, n).dim == n + 1


def test_tate_cohomology_c2():
    res = Resolution.build(C2, ZZ, 5)
    vals = [str(tate_cohomology(C2, trivial_lattice(C2, ZZ), n, resolution=res))
            for n in range(-4, 5)]
    assert vals == ["Z/2", "0", "Z/2", "0", "Z/2", "0", "Z/2", "0", "Z/2"]


def test_tate_matches_ordinary_in_positive_degrees():
    res = Resolution.build(C4, ZZ, 5)
    t = trivial_lattice(C4, ZZ)
    for n in range(1, 4):
        assert tate_cohomology(C4, t, n, resolution=res).factors == H(
            C4, ZZ, n, res
        ).factors


def test_complete_resolution_validates():
    res = Resolution.build(C4, ZZ, 4)
    comp = CompleteResolution(res)
    assert comp.validate(-3, 4)


def test_cohomology_mod_v4():
    # H^n((Z/2)^2; Z/4) degreewise
    assert cohomology_mod(V4, 4, 0).factors == (4,)
    assert cohomology_mod(V4, 4, 1).factors == (2, 2)
    # universal coefficients: H^2 x Z/4 = (Z/2)^2 plus Tor(H^3, Z/4) = Z/2
    assert cohomology_mod(V4, 4, 2).factors == (2, 2, 2)


def test_cup_product_structure_v4():
    res = Resolution.build(V4, Fp(2), 6)
    q1 = cohomology_quotient(res, 1)
    assert q1.dim == 2
    a = CohomologyClass(res, 1, q1.reps[0])
    b = CohomologyClass(res, 1, q1.reps[1])
    q2 = cohomology_quotient(res, 2)
    coords = [q2.coordinates(x.vec) for x in (a.cup(a), a.cup(b), b.cup(b))]
    # a^2, ab, b^2 are a basis of H^2
    from cohomstab.linalg import Matrix, rank

    M = Matrix(Fp(2), [[c[i] for c in coords] for i in range(q2.dim)])
    assert rank(M) == 3
    # commutativity
    ab, ba = a.cup(b), b.cup(a)
    assert q2.coordinates(ab.vec) == q2.coordinates(ba.vec)


def test_restriction_to_subgroup():
    res_g = Resolution.build(S3, Fp(2), 3)
    H2 = S3.subgroup(S3.closure([1]))
    res_h = Resolution.build(H2.group, Fp(2), 3)
    cm = restriction_map(res_h, res_g, H2)
    qg = cohomology_quotient(res_g, 1)
    qh = cohomology_quotient(res_h, 1)
    assert qg.dim == 1 and qh.dim == 1
    x = CohomologyClass(res_g, 1, qg.reps[0])
    restricted = cm.apply(x)
    assert qh.coordinates(restricted.vec) != [Fp(2).zero()] * 1


def test_carlson_lattice_rank():
    res = Resolution.build(V4, Fp(2), 3)
    q1 = cohomology_quotient(res, 1)
    zeta = CohomologyClass(res, 1, q1.reps[0])
    L = carlson_lattice(V4, Fp(2), zeta)
    assert L.rank == 2  # rank of Omega^1(triv) is 3; kernel of zeta drops 1


def test_zmod_cochain_quotient_matches_mod_cohomology():
    res = Resolution.build(V4, Zmod(4), 3)
    triv = trivial_lattice(V4, Zmod(4))
    q = ZmodCochainQuotient(
        4, res.diff(2).cochain_map(triv), res.diff(1).cochain_map(triv)
    )
    assert sorted(q.orders) == [2, 2]  # H^1(V4; Z/4) = (Z/2)^2
    for rep in q.reps:
        coords = q.coordinates(rep)
        assert sum(1 for c in coords if c) == 1

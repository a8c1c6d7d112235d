import random

import pytest

from cohomstab.errors import InvalidLattice
from cohomstab.groups import builtin_group
from cohomstab.lattices import (
    Lattice,
    dual,
    hom_lattice,
    induce,
    lattice_from_json,
    permutation_lattice,
    projection_formula_iso,
    random_lattice,
    regular_lattice,
    restrict,
    sign_lattice,
    tensor,
    trivial_lattice,
)
from cohomstab.linalg import Matrix
from cohomstab.rings import Fp, QQ, ZZ


S3 = builtin_group("S3")
C6 = builtin_group("C6")


def test_lattice_validation_rejects_non_action():
    C2 = builtin_group("C2")
    bad = [Matrix.identity(ZZ, 1), Matrix.from_int_rows(ZZ, [[2]])]
    with pytest.raises(InvalidLattice):
        Lattice(C2, ZZ, bad)


def test_regular_lattice_is_left_translation():
    R = regular_lattice(S3, ZZ)
    for g in range(6):
        for h in range(6):
            col = R.act(g).col(h)
            assert col[S3.mul(g, h)] == 1 and sum(abs(int(x)) for x in col) == 1


def test_permutation_and_sign():
    H = S3.subgroup(S3.closure([4]))  # an order-3 subgroup
    P = permutation_lattice(S3, ZZ, H)
    assert P.rank == 2
    C2sub = S3.subgroup(S3.closure([1]))
    sgn = sign_lattice(S3, ZZ, S3.subgroup(S3.closure([4])))
    assert sgn.rank == 1
    assert int(sgn.act(1).rows[0][0]) == -1


def test_tensor_and_hom_ranks():
    A = permutation_lattice(C6, ZZ, C6.subgroup(C6.closure([3])))
    B = regular_lattice(C6, ZZ)
    assert tensor(A, B).rank == A.rank * B.rank
    assert hom_lattice(A, B).rank == A.rank * B.rank
    assert dual(A).rank == A.rank


def test_dual_action_is_inverse_transpose():
    M = permutation_lattice(S3, ZZ, S3.subgroup(S3.closure([1])))
    D = dual(M)
    for g in range(6):
        lhs = D.act(g)
        rhs = M.act(S3.inv(g))
        for i in range(M.rank):
            for j in range(M.rank):
                assert lhs.rows[i][j] == rhs.rows[j][i]


def test_induce_rank_and_validity():
    H = C6.subgroup(C6.closure([2]))  # order 3
    MH = trivial_lattice(H.group, ZZ)
    ind = induce(MH, C6, H)
    assert ind.rank == 2
    ind2 = induce(regular_lattice(H.group, ZZ), C6, H)
    assert ind2.rank == 6


def test_restrict_then_check():
    M = regular_lattice(S3, ZZ)
    H = S3.subgroup(S3.closure([4]))
    R = restrict(M, H)
    assert R.rank == 6
    assert R.group.order == 3


def test_projection_formula_iso():
    H = C6.subgroup(C6.closure([3]))  # order 2
    X = regular_lattice(C6, ZZ)
    Y = trivial_lattice(H.group, ZZ)
    f = projection_formula_iso(X, Y, C6, H)
    assert f.is_iso()


def test_random_lattice_deterministic_and_valid():
    rng1 = random.Random(42)
    rng2 = random.Random(42)
    for ring in (ZZ, QQ, Fp(2)):
        M1 = random_lattice(S3, ring, rng1)
        M2 = random_lattice(S3, ring, rng2)
        assert M1.rank == M2.rank
        for g in range(6):
            assert M1.act(g) == M2.act(g)
        assert M1.rank <= 4


def test_lattice_json_roundtrip():
    rng = random.Random(1)
    M = random_lattice(S3, ZZ, rng)
    M2 = lattice_from_json(S3, M.to_json())
    for g in range(6):
        assert M.act(g) == M2.act(g)

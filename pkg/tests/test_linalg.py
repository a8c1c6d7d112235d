import random

import pytest

from cohomstab.errors import NoSolution
from cohomstab.linalg import (
    AbGroup,
    Matrix,
    cokernel_invariants,
    kernel,
    make_solver,
    rank,
    smith_normal_form,
    solve_linear,
)
from cohomstab.rings import Fp, QQ, ZZ, Zloc, Zmod


def test_snf_integer_properties():
    rng = random.Random(0)
    for _ in range(20):
        m = rng.randrange(1, 6)
        n = rng.randrange(1, 6)
        A = Matrix.from_int_rows(
            ZZ, [[rng.randrange(-9, 10) for _ in range(n)] for _ in range(m)]
        )
        snf = smith_normal_form(A)
        assert snf.verify()


def test_snf_no_entry_explosion():
    # dense 16x16 with moderate entries must stay fast and exact
    rng = random.Random(3)
    A = Matrix.from_int_rows(
        ZZ, [[rng.randrange(-60, 61) for _ in range(16)] for _ in range(16)]
    )
    snf = smith_normal_form(A)
    assert snf.verify()


def test_known_invariant_factors():
    A = Matrix.from_int_rows(ZZ, [[2, 0], [0, 6]])
    snf = smith_normal_form(A)
    assert [abs(d) for d in snf.elementary_divisors] == [2, 6]
    assert cokernel_invariants(A).factors == (2, 6)


def test_integer_solver_and_kernel():
    A = Matrix.from_int_rows(ZZ, [[2, 4], [1, 2]])
    with pytest.raises(NoSolution):
        solve_linear(A, [1, 0])  # not divisible
    x = solve_linear(A, [6, 3])
    assert [2 * x[0] + 4 * x[1], x[0] + 2 * x[1]] == [6, 3]
    kb = kernel(A)
    assert len(kb) == 1
    v = kb[0]
    # saturated: content 1
    from math import gcd

    assert gcd(v[0], v[1]) == 1


def test_field_solver():
    F = Fp(3)
    A = Matrix.from_int_rows(F, [[1, 2], [2, 2]])
    x = solve_linear(A, [F.from_int(1), F.from_int(1)])
    assert len(x) == 2
    assert rank(A) == 2


def test_zmod_solver():
    R = Zmod(4)
    A = Matrix.from_int_rows(R, [[2]])
    s = make_solver(A)
    assert s.in_image([R.from_int(2)])
    assert not s.in_image([R.from_int(1)])
    kb = s.kernel_basis()
    assert any(int(v[0]) % 4 == 2 for v in kb)


def test_dvr_solver():
    R = Zloc(2)
    A = Matrix.from_int_rows(R, [[2, 3]])
    # 3 is a unit at p=2, so everything is solvable
    x = make_solver(A).solve([R.from_int(1)])
    assert R.add(R.mul(R.from_int(2), x[0]), R.mul(R.from_int(3), x[1])) == R.one()


def test_abgroup_descriptors():
    G = AbGroup((2, 6))
    assert G.order() == 12
    assert G.annihilated_by(6)
    assert not G.annihilated_by(4)
    assert str(AbGroup((0,))) == "Z"
    assert AbGroup.trivial().is_trivial()

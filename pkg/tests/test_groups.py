import pytest

from cohomstab.errors import NotASubgroup
from cohomstab.groups import (
    builtin_group,
    cyclic_group,
    direct_product,
    elementary_abelian_subgroups,
    from_permutation_generators,
    group_from_json,
    orbit_category,
)


def test_builtin_orders():
    for name, order in [
        ("C2", 2), ("C3", 3), ("C4", 4), ("C6", 6),
        ("V4", 4), ("E9", 9), ("E8", 8), ("S3", 6), ("D4", 8), ("Q8", 8),
    ]:
        G = builtin_group(name)
        assert G.order == order


def test_element_orders_s3():
    S3 = builtin_group("S3")
    orders = sorted(S3.element_order(g) for g in range(6))
    assert orders == [1, 2, 2, 2, 3, 3]


def test_direct_product_indexing():
    A = cyclic_group(2)
    B = cyclic_group(3)
    G = direct_product(A, B)
    assert G.order == 6
    assert G.product_factors == (A, B)
    # (a1, b1) * (a2, b2) index arithmetic: pair (a, b) at a*|B| + b
    assert G.mul(1 * 3 + 0, 0 * 3 + 1) == 1 * 3 + 1


def test_subgroup_rejects_non_closed():
    S3 = builtin_group("S3")
    with pytest.raises(NotASubgroup):
        S3.subgroup((0, 4))  # order-3 element without its square


def test_elementary_abelian_enumeration():
    Q8 = builtin_group("Q8")
    subs = elementary_abelian_subgroups(Q8, 2)
    nontrivial = [E for E in subs if len(E.elements) > 1]
    # Q8 has a unique subgroup of order 2 and no copy of V4
    assert len(nontrivial) == 1
    assert len(nontrivial[0].elements) == 2

    D4 = builtin_group("D4")
    subs = elementary_abelian_subgroups(D4, 2)
    by_order = sorted(len(E.elements) for E in subs)
    assert by_order.count(4) == 2  # two Klein subgroups
    assert by_order.count(2) == 5


def test_orbit_category_s3():
    S3 = builtin_group("S3")
    cat = orbit_category(S3, 2)
    assert len(cat.objects) >= 3  # three conjugate C2's
    kinds = {m.kind for m in cat.morphisms}
    assert kinds <= {"inclusion", "conjugation"}
    assert any(m.kind == "conjugation" for m in cat.morphisms)


def test_group_from_json_roundtrip():
    S3 = builtin_group("S3")
    G = group_from_json(S3.to_json())
    assert G.order == 6
    H = group_from_json({"permutation_generators": [[1, 0, 2], [1, 2, 0]]})
    assert H.order == 6

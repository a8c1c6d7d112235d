import pytest

from cohomstab.groups import builtin_group
from cohomstab.homalg import CohomologyClass, carlson_lattice
from cohomstab.lattices import regular_lattice, permutation_lattice, trivial_lattice
from cohomstab.rings import Fp, ZZ
from cohomstab.spectrum import stmod_spectrum
from cohomstab.stmod import syzygy
from cohomstab.support import (
    avrunin_scott_check,
    classify,
    rank_variety,
)

V4 = builtin_group("V4")
C6 = builtin_group("C6")
K = Fp(2)


@pytest.fixture(scope="module")
def v4_model():
    return stmod_spectrum(V4, K, 4)


@pytest.fixture(scope="module")
def v4_modules(v4_model):
    pres = v4_model.fibers[2].presentation
    g1, g2 = pres.generators[0].cls, pres.generators[1].cls
    gsum = CohomologyClass(
        pres.res, 1, [K.add(a, b) for a, b in zip(g1.vec, g2.vec)]
    )
    return {
        "trivial": trivial_lattice(V4, K),
        "regular": regular_lattice(V4, K),
        "L_x1": carlson_lattice(V4, K, g1),
        "L_x2": carlson_lattice(V4, K, g2),
        "L_x1+x2": carlson_lattice(V4, K, gsum),
        "omega": syzygy(trivial_lattice(V4, K), 1),
    }


def test_v4_supports(v4_model, v4_modules):
    expected = {
        "trivial": [{"prime": 2, "ideal": []}],
        "regular": [],
        "L_x1": [{"prime": 2, "ideal": ["x1"]}],
        "L_x2": [{"prime": 2, "ideal": ["x2"]}],
        "L_x1+x2": [{"prime": 2, "ideal": ["x1 + x2"]}],
        "omega": [{"prime": 2, "ideal": []}],
    }
    for name, M in v4_modules.items():
        assert classify(M, v4_model).subset.canonical() == expected[name], name


def test_v4_rank_varieties(v4_modules):
    rv = {n: rank_variety(V4, 2, M) for n, M in v4_modules.items()}
    assert rv["trivial"].canonical_strings() == []
    assert rv["L_x1"].canonical_strings() == ["Y1"]
    assert rv["L_x2"].canonical_strings() == ["Y2"]
    assert rv["L_x1+x2"].canonical_strings() == ["Y1 + Y2"]
    # regular module: variety is the origin only
    reg = rv["regular"]
    assert reg.radical_contains(reg.ring.var(0))
    assert reg.radical_contains(reg.ring.var(1))


def test_avrunin_scott_agreement(v4_model, v4_modules):
    for name, M in v4_modules.items():
        assert avrunin_scott_check(V4, M, v4_model) is True, name


def test_c6_integral_supports():
    model = stmod_spectrum(C6, ZZ, 4)
    subs = {}
    for g in range(1, 6):
        o = C6.element_order(g)
        if o in (2, 3) and o not in subs:
            subs[o] = C6.subgroup(C6.closure([g]))
    assert classify(trivial_lattice(C6, ZZ), model).subset.canonical() == [
        {"prime": 2, "ideal": []},
        {"prime": 3, "ideal": []},
    ]
    assert classify(regular_lattice(C6, ZZ), model).subset.canonical() == []
    # Z[C6/C2] restricts freely to C3 and trivially to C2: only the p=2 point
    assert classify(permutation_lattice(C6, ZZ, subs[2]), model).subset.canonical() == [
        {"prime": 2, "ideal": []}
    ]
    assert classify(permutation_lattice(C6, ZZ, subs[3]), model).subset.canonical() == [
        {"prime": 3, "ideal": []}
    ]


def test_cyclic_sylow_shortcut_consistency():
    # the fast projectivity path and the annihilator path must agree on C6
    model = stmod_spectrum(C6, ZZ, 2)
    M = permutation_lattice(
        C6, ZZ, C6.subgroup(C6.closure([next(g for g in range(1, 6) if C6.element_order(g) == 3)]))
    )
    # Z[C6/C3]: rank 2, free on restriction to C2 (shortcut fires at p=2),
    # trivial on restriction to C3
    assert classify(M, model).subset.canonical() == [{"prime": 3, "ideal": []}]

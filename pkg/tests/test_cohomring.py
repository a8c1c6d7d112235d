import pytest

from cohomstab.cohomring import GradedModulePresentation, ring_presentation
from cohomstab.groups import builtin_group
from cohomstab.lattices import hom_lattice, regular_lattice, trivial_lattice
from cohomstab.rings import Fp

V4 = builtin_group("V4")


def canon(pres):
    return (
        [(g.name, g.degree) for g in pres.generators],
        pres.ideal.canonical_strings(),
        pres.certified,
    )


def test_v4_mod2_presentation():
    pres = ring_presentation(V4, 2, 6)
    gens, rels, cert = canon(pres)
    assert gens == [("x1", 1), ("x2", 1)]
    assert rels == []
    assert cert
    assert [pres.hilbert[d] for d in range(7)] == [1, 2, 3, 4, 5, 6, 7]


def test_c2_c4_c6_presentations():
    C2 = builtin_group("C2")
    assert canon(ring_presentation(C2, 2, 6)) == ([("x1", 1)], [], True)
    C4 = builtin_group("C4")
    assert canon(ring_presentation(C4, 2, 6)) == ([("x1", 1), ("x2", 2)], ["x1^2"], True)
    C6 = builtin_group("C6")
    assert canon(ring_presentation(C6, 2, 6)) == ([("x1", 1)], [], True)
    assert canon(ring_presentation(C6, 3, 6, even_only=True)) == ([("x1", 2)], [], True)


def test_d4_mod2_presentation():
    pres = ring_presentation(builtin_group("D4"), 2, 6)
    gens, rels, cert = canon(pres)
    assert gens == [("x1", 1), ("x2", 1), ("x3", 2)]
    assert rels == ["x1*x2"]
    assert cert


def test_s3_presentations():
    pres2 = ring_presentation(builtin_group("S3"), 2, 6)
    assert canon(pres2) == ([("x1", 1)], [], True)
    pres3 = ring_presentation(builtin_group("S3"), 3, 8)
    gens, rels, cert = canon(pres3)
    assert gens == [("x1", 3), ("x2", 4)]
    assert rels == ["x1^2"]  # odd degree squares to zero in char 3
    assert cert


def test_q8_mod2_presentation():
    pres = ring_presentation(builtin_group("Q8"), 2, 6)
    gens, rels, cert = canon(pres)
    assert gens == [("x1", 1), ("x2", 1), ("x3", 4)]
    assert cert
    assert [pres.hilbert[d] for d in range(5)] == [1, 2, 2, 1, 1]


def test_e9_even_presentation():
    pres = ring_presentation(builtin_group("E9"), 3, 8, even_only=True)
    gens, rels, cert = canon(pres)
    assert [d for _, d in gens] == [2, 2, 2]
    assert cert
    # one nilpotent even generator (the product of the two degree-1 classes)
    assert any("^2" in r for r in rels)


def test_module_presentation_trivial_annihilator():
    pres = ring_presentation(V4, 2, 4)
    triv = trivial_lattice(V4, Fp(2))
    mp = GradedModulePresentation(pres, hom_lattice(triv, triv))
    ann = mp.annihilator()
    assert ann.canonical_strings() == []  # faithful module


def test_module_presentation_free_annihilator():
    pres = ring_presentation(V4, 2, 4)
    reg = regular_lattice(V4, Fp(2))
    mp = GradedModulePresentation(pres, hom_lattice(reg, reg))
    ann = mp.annihilator()
    # End of the free module is annihilated by everything positive
    assert ann.radical_contains(pres.poly.var(0))
    assert ann.radical_contains(pres.poly.var(1))

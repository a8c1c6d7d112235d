import pytest

from cohomstab.groups import builtin_group
from cohomstab.polys import Ideal, poly_from_string
from cohomstab.rings import Fp, QQ, ZZ
from cohomstab.spectrum import (
    SpecializationClosedSubset,
    quillen_check,
    stmod_spectrum,
)

V4 = builtin_group("V4")
C6 = builtin_group("C6")
S3 = builtin_group("S3")


def test_v4_integral_spectrum_shape():
    model = stmod_spectrum(V4, ZZ, 6)
    assert sorted(model.fibers) == [2]
    fib = model.fibers[2]
    assert sorted(fib.poly.names) == ["x1", "x2"]
    assert fib.ideal.canonical_strings() == []
    assert [fib.hilbert_function(d) for d in range(7)] == [1, 2, 3, 4, 5, 6, 7]


def test_c6_spectrum_two_point_fibers():
    model = stmod_spectrum(C6, ZZ, 4)
    assert sorted(model.fibers) == [2, 3]
    for p, fib in model.fibers.items():
        assert fib.point_count() == 1  # single homogeneous prime: Proj of k[x]


def test_s3_rational_spectrum_empty():
    model = stmod_spectrum(S3, QQ, 4)
    assert model.fibers == {}
    assert model.full_subset().is_empty()


def test_subset_algebra():
    model = stmod_spectrum(V4, Fp(2), 4)
    fib = model.fibers[2]
    x1 = poly_from_string(fib.poly, "x1")
    x2 = poly_from_string(fib.poly, "x2")
    a = SpecializationClosedSubset(model, [(2, Ideal(fib.poly, [x1]))])
    b = SpecializationClosedSubset(model, [(2, Ideal(fib.poly, [x2]))])
    full = model.full_subset()
    assert a.union(b).includes(a)
    assert full.includes(a)
    inter = a.intersect(b)  # V(x1, x2) is the irrelevant ideal: empty in Proj
    assert inter.is_empty()
    assert a.same_as(a.union(a)) is True


def test_quillen_s3_mod2():
    rep = quillen_check(S3, 2, cap=6)
    assert rep.passed()
    assert rep.kernel_nilpotence and rep.point_surjectivity
    assert rep.orbit_identification


def test_quillen_d4():
    rep = quillen_check(builtin_group("D4"), 2, cap=6)
    assert rep.passed()

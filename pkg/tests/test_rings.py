from fractions import Fraction

import pytest

from cohomstab.errors import UnsupportedRing
from cohomstab.rings import GF, Fp, QQ, ZZ, Zloc, Zmod, parse_ring


def test_parse_ring_variants():
    assert parse_ring("Z") is ZZ
    assert parse_ring("Q") is QQ
    assert parse_ring("F2") == Fp(2)
    assert parse_ring("Fp:5") == Fp(5)
    assert parse_ring("Zp:3") == Zloc(3)
    assert parse_ring("Zmod:4") == Zmod(4)
    assert parse_ring("Fq:2,2") == GF(2, 2)
    with pytest.raises(UnsupportedRing):
        parse_ring("nope")


def test_prime_field_arithmetic():
    F = Fp(5)
    a = F.from_int(3)
    b = F.from_int(4)
    assert F.mul(a, b) == F.from_int(12)
    assert F.is_zero(F.add(a, F.from_int(2)))
    assert F.mul(F.inv(a), a) == F.one()


def test_finite_field_subfield():
    F = GF(2, 4)
    els = list(F.elements())
    assert len(els) == 16
    # F_4 inside F_16: exactly 4 elements fixed by x -> x^4
    sub = [a for a in els if F.in_subfield(a, 2)]
    assert len(sub) == 4


def test_localized_integers_units():
    R = Zloc(2)
    assert R.is_unit(R.from_int(3))
    assert not R.is_unit(R.from_int(2))
    half = R.exact_div(R.from_int(1), R.from_int(3))
    assert half == Fraction(1, 3)


def test_zmod_arithmetic():
    R = Zmod(4)
    assert R.add(R.from_int(3), R.from_int(2)) == R.from_int(1)
    assert R.is_unit(R.from_int(3))
    assert not R.is_unit(R.from_int(2))

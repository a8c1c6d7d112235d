"""Acceptance gate: twelve primary criteria, one pass/fail line each.

Run with ``pytest -v tests/test_acceptance.py`` — each test prints a
``[criterion NN] PASS/FAIL`` line (visible with ``-s`` or on failure) and
the verbose test names mirror the same verdicts.
"""

import json
import random

import pytest

from cohomstab.cli import main as cli_main
from cohomstab.groups import builtin_group
from cohomstab.homalg import (
    CohomologyClass,
    Resolution,
    carlson_lattice,
    cohomology,
    tate_cohomology,
)
from cohomstab.lattices import (
    permutation_lattice,
    random_lattice,
    regular_lattice,
    tensor,
    trivial_lattice,
)
from cohomstab.rings import Fp, QQ, ZZ, Zloc
from cohomstab.spectrum import quillen_check, stmod_spectrum
from cohomstab.stmod import (
    chouinard_check,
    fiso_shadow,
    fracture_check,
    maschke_check,
    syzygy,
    tate_unit_check,
)
from cohomstab.support import avrunin_scott_check, classify, rank_variety


ELAB = [("C2", 2, 1), ("C3", 3, 1), ("V4", 2, 2), ("E9", 3, 2)]


def _report(num, desc, ok):
    print(f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'} {desc}", flush=True)
    assert ok, f"criterion {num}: {desc}"


@pytest.fixture(scope="module")
def elab_resolutions():
    out = {}
    for name, p, r in ELAB:
        E = builtin_group(name)
        out[name] = (E, p, r, Resolution.build(E, Zloc(p), 9))
    return out


def test_criterion_01_elab_ordinary_cohomology(elab_resolutions):
    ok = True
    for name, p, r in ELAB:
        E, _, _, res = elab_resolutions[name]
        t = trivial_lattice(E, Zloc(p))
        if cohomology(E, t, 0, resolution=res).factors != (0,):
            ok = False
        if not cohomology(E, t, 1, resolution=res).is_trivial():
            ok = False
        for n in range(1, 9):
            if not cohomology(E, t, n, resolution=res).annihilated_by(p):
                ok = False
    _report(1, "elementary abelian: H^0 = base, H^1 = 0, p-torsion to degree 8", ok)


def test_criterion_02_elab_tate_exponent(elab_resolutions):
    ok = True
    for name, p, r in ELAB:
        E, _, _, res = elab_resolutions[name]
        t = trivial_lattice(E, Zloc(p))
        for n in range(-4, 5):
            tn = tate_cohomology(E, t, n, resolution=res)
            if not tn.annihilated_by(p**r):
                ok = False
            if n == 0 and tn.order() != p**r:
                ok = False
    _report(2, "elementary abelian: p^r kills Tate cohomology, |H-hat^0| = p^r", ok)


def test_criterion_03_maschke():
    ok = True
    for name in ("C6", "S3"):
        G = builtin_group(name)
        rng = random.Random(0)
        for _ in range(25):
            r = maschke_check(random_lattice(G, QQ, rng))
            if not (r["weakly_projective"] and r["certificate_verified"]):
                ok = False
    _report(3, "rational lattices weakly projective with verified certificates", ok)


def test_criterion_04_stable_endomorphisms_vs_tate():
    ok = True
    for name in ("C2", "C3", "C4"):
        G = builtin_group(name)
        for n in range(-3, 4):
            if not tate_unit_check(G, n)["match"]:
                ok = False
    _report(4, "stable Hom(Omega^n 1, 1) matches Tate cohomology, |n| <= 3", ok)


def test_criterion_05_chouinard():
    ok = True
    for name in ("S3", "Q8", "D4", "C6"):
        G = builtin_group(name)
        primes = sorted({p for p in (2, 3) if G.order % p == 0})
        for ring in [ZZ] + [Fp(p) for p in primes]:
            rng = random.Random(7)
            for _ in range(20):
                if not chouinard_check(random_lattice(G, ring, rng))["biconditional"]:
                    ok = False
    _report(5, "projectivity detected exactly by elementary abelian restrictions", ok)


def test_criterion_06_fracture():
    ok = True
    rng = random.Random(7)
    for _ in range(20):
        r = fracture_check(random_lattice(builtin_group("C6"), ZZ, rng),
                           control_prime=5)
        if not (r["biconditional"] and r["control"]):
            ok = False
    _report(6, "weak projectivity over Z <=> over Z_(2) and Z_(3); always at 5", ok)


def test_criterion_07_spectrum_shapes():
    ok = True
    model = stmod_spectrum(builtin_group("V4"), ZZ, 6)
    fib = model.fibers.get(2)
    if sorted(model.fibers) != [2] or fib is None:
        ok = False
    else:
        if sorted(fib.poly.names) != ["x1", "x2"] or fib.ideal.canonical_strings():
            ok = False
        if [fib.hilbert_function(d) for d in range(7)] != [1, 2, 3, 4, 5, 6, 7]:
            ok = False
    c6 = stmod_spectrum(builtin_group("C6"), ZZ, 4)
    if sorted(c6.fibers) != [2, 3]:
        ok = False
    elif any(f.point_count() != 1 for f in c6.fibers.values()):
        ok = False
    s3 = stmod_spectrum(builtin_group("S3"), QQ, 4)
    if s3.fibers:
        ok = False
    _report(7, "spectrum shapes: V4/Z one plane fiber, C6/Z two points, S3/Q empty", ok)


@pytest.fixture(scope="module")
def v4_battery():
    V4 = builtin_group("V4")
    K = Fp(2)
    model = stmod_spectrum(V4, K, 4)
    pres = model.fibers[2].presentation
    g1, g2 = pres.generators[0].cls, pres.generators[1].cls
    gsum = CohomologyClass(pres.res, 1,
                           [K.add(a, b) for a, b in zip(g1.vec, g2.vec)])
    mods = {
        "trivial": trivial_lattice(V4, K),
        "regular": regular_lattice(V4, K),
        "L_x1": carlson_lattice(V4, K, g1),
        "L_x2": carlson_lattice(V4, K, g2),
        "L_x1+x2": carlson_lattice(V4, K, gsum),
        "omega_trivial": syzygy(trivial_lattice(V4, K), 1),
    }
    return V4, model, mods


def test_criterion_08_tensor_formula(v4_battery):
    ok = True
    V4, model, mods = v4_battery
    supp = {n: classify(M, model).subset for n, M in mods.items()}
    names = list(mods)
    for i in range(len(names)):
        for j in range(i, len(names)):
            prod = classify(tensor(mods[names[i]], mods[names[j]]), model).subset
            if prod.same_as(supp[names[i]].intersect(supp[names[j]])) is not True:
                ok = False

    C6 = builtin_group("C6")
    subs = {}
    for g in range(1, 6):
        o = C6.element_order(g)
        if o in (2, 3) and o not in subs:
            subs[o] = C6.subgroup(C6.closure([g]))
    zmods = {
        "trivial": trivial_lattice(C6, ZZ),
        "regular": regular_lattice(C6, ZZ),
        "perm2": permutation_lattice(C6, ZZ, subs[2]),
        "perm3": permutation_lattice(C6, ZZ, subs[3]),
    }
    zmodel = stmod_spectrum(C6, ZZ, 4)
    zsupp = {n: classify(M, zmodel).subset for n, M in zmods.items()}
    znames = list(zmods)
    for i in range(len(znames)):
        for j in range(i, len(znames)):
            prod = classify(tensor(zmods[znames[i]], zmods[znames[j]]), zmodel).subset
            if prod.same_as(zsupp[znames[i]].intersect(zsupp[znames[j]])) is not True:
                ok = False
    _report(8, "support of a tensor product = intersection of supports", ok)


def test_criterion_09_avrunin_scott(v4_battery):
    V4, model, mods = v4_battery
    ok = all(avrunin_scott_check(V4, M, model) is True for M in mods.values())
    _report(9, "cohomological support agrees with the rank variety on V4", ok)


def test_criterion_10_quillen():
    ok = True
    for name, p in (("S3", 2), ("S3", 3), ("D4", 2)):
        rep = quillen_check(builtin_group(name), p, cap=8, nil_exponent_bound=8)
        if not rep.passed():
            ok = False
    _report(10, "restriction to elementary abelians: nil kernel, point coverage, orbits", ok)


def test_criterion_11_f_isomorphism_shadow():
    ok = True
    for name, p in (("C2", 2), ("V4", 2), ("C3", 3)):
        r = fiso_shadow(builtin_group(name), p, cap=6)
        if not (r["kernel_nilpotent"] and r["frobenius_surjective"]):
            ok = False
        if r["kernel_exponents"] and max(r["kernel_exponents"]) > p**3:
            ok = False
    _report(11, "mod-p^2 to mod-p reduction: nilpotent kernel, Frobenius-surjective", ok)


def test_criterion_12_determinism(tmp_path):
    configs = [
        ["verify", "maschke", "--group", "C6", "--seed", "3", "--count", "3"],
        ["verify", "chouinard", "--group", "S3", "--seed", "3", "--count", "2"],
        ["verify", "tensor-formula", "--group", "C6", "--ring", "Z", "--cap", "4"],
        ["verify", "quillen", "--group", "S3", "--ring", "Fp:2", "--cap", "6"],
        ["verify", "elab", "--group", "C2", "--cap", "4", "--tate-range", "2"],
        ["verify", "fracture", "--seed", "3", "--count", "3"],
        ["verify", "frobenius", "--group", "C2", "--seed", "3", "--count", "2"],
        ["verify", "tate-unit", "--group", "C2", "--tate-range", "2"],
    ]
    ok = True
    for k, args in enumerate(configs):
        p1 = tmp_path / f"{k}_a.jsonl"
        p2 = tmp_path / f"{k}_b.jsonl"
        c1 = cli_main(args + ["--out", str(p1)])
        c2 = cli_main(args + ["--out", str(p2)])
        if c1 != 0 or c2 != 0 or p1.read_bytes() != p2.read_bytes():
            ok = False
        # reports must be valid JSON lines
        for line in p1.read_text().splitlines():
            json.loads(line)
    _report(12, "suite reports byte-identical under a fixed seed", ok)

"""Command-line interface: compute cohomology ring presentations, classify
lattice supports, and run the named verification suites with streaming
JSON-lines reports.

Exit codes: 0 = all checks pass, 1 = a mathematical check failed,
2 = usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .errors import CohomstabError
from .groups import FiniteGroup, builtin_group, group_from_json
from .homalg import CohomologyClass, carlson_lattice, cohomology
from .lattices import (
    Lattice,
    lattice_from_json,
    permutation_lattice,
    random_lattice,
    regular_lattice,
    sign_lattice,
    trivial_lattice,
)
from .rings import Fp, QQ, ZZ, IntegerRing, PrimeField, RationalField, parse_ring
from .spectrum import quillen_check, stmod_spectrum
from .support import avrunin_scott_check, classify, rank_variety
from .stmod import (
    check_split_exact,
    chouinard_check,
    fracture_check,
    free_cover_sequence,
    is_weakly_projective,
    maschke_check,
    stable_hom,
    syzygy,
    tate_unit_check,
    verify_elab_suite,
    verify_projectivity_certificate,
)

BUILTIN_NAMES = ("C2", "C3", "C4", "C5", "C6", "V4", "E9", "E8", "S3", "D4", "Q8")

SUITES = (
    "maschke",
    "chouinard",
    "tensor-formula",
    "quillen",
    "elab",
    "fracture",
    "frobenius",
    "tate-unit",
)


def _load_group(spec: str) -> FiniteGroup:
    if spec in BUILTIN_NAMES:
        return builtin_group(spec)
    with open(spec) as fh:
        return group_from_json(json.load(fh))


def _load_groups(spec, default):
    if spec is None:
        return [builtin_group(n) for n in default]
    return [_load_group(s) for s in spec.split(",")]


def _primes_dividing(n):
    out = []
    p = 2
    while p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    return out


def _parse_module(spec: str, G: FiniteGroup, ring, cap: int) -> Lattice:
    if spec == "trivial":
        return trivial_lattice(G, ring)
    if spec == "regular":
        return regular_lattice(G, ring)
    if spec.startswith("perm:"):
        g = int(spec[5:])
        return permutation_lattice(G, ring, G.subgroup(G.closure([g])))
    if spec.startswith("sign:"):
        g = int(spec[5:])
        return sign_lattice(G, ring, G.subgroup(G.closure([g])))
    if spec.startswith("omega:"):
        return syzygy(trivial_lattice(G, ring), int(spec[6:]))
    if spec.startswith("Lzeta:"):
        return _carlson_from_string(G, ring, spec[6:], cap)
    with open(spec) as fh:
        return lattice_from_json(G, json.load(fh))


def _carlson_from_string(G, ring, expr, cap):
    """Lzeta:x1+x2 etc.: a sum of degree-1 generators of the mod-p ring."""
    from .cohomring import ring_presentation
    from .errors import ZeroClass

    if not isinstance(ring, PrimeField):
        raise CohomstabError("Lzeta modules need a prime-field ring")
    pres = ring_presentation(G, ring.p, max(cap, 2))
    names = {g.name: g for g in pres.generators if g.degree == 1}
    vec = None
    for part in expr.split("+"):
        part = part.strip()
        if part not in names:
            raise CohomstabError(f"unknown degree-1 generator {part!r}")
        cls = names[part].cls
        if vec is None:
            vec = list(cls.vec)
        else:
            vec = [ring.add(a, b) for a, b in zip(vec, cls.vec)]
    zeta = CohomologyClass(pres.res, 1, vec)
    return carlson_lattice(G, ring, zeta)


class Reporter:
    def __init__(self, out, fmt):
        self.out = out
        self.fmt = fmt
        self.all_passed = True

    def emit(self, record: dict):
        if record.get("passed") is False:
            self.all_passed = False
        if self.fmt == "json":
            self.out.write(json.dumps(record, sort_keys=True, separators=(",", ":")))
            self.out.write("\n")
        else:
            status = {True: "PASS", False: "FAIL", None: "----"}[record.get("passed")]
            detail = " ".join(
                f"{k}={record[k]}"
                for k in sorted(record)
                if k not in ("passed", "check")
            )
            self.out.write(f"{status} {record.get('check', '?')} {detail}\n")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_cohomology(args, rep: Reporter) -> int:
    G = _load_group(args.group)
    ring = parse_ring(args.ring)
    cap = args.cap
    if isinstance(ring, PrimeField):
        from .cohomring import ring_presentation

        pres = ring_presentation(G, ring.p, cap, even_only=args.even_only)
        rep.emit({"check": "cohomology-ring", "passed": True, **pres.to_json()})
        return 0
    # non-field bases: degreewise invariant factors
    from .homalg import Resolution

    res = Resolution.build(G, ring, cap + 1)
    triv = trivial_lattice(G, ring)
    degrees = {}
    for n in range(cap + 1):
        degrees[str(n)] = list(cohomology(G, triv, n, resolution=res).factors)
    rep.emit(
        {
            "check": "cohomology-groups",
            "passed": True,
            "group": G.name,
            "ring": args.ring,
            "cap": cap,
            "degrees": degrees,
        }
    )
    return 0


def cmd_support(args, rep: Reporter) -> int:
    G = _load_group(args.group)
    ring = parse_ring(args.ring)
    cap = args.cap
    model = stmod_spectrum(G, ring, cap)
    M = _parse_module(args.module, G, ring, cap)
    result = classify(M, model, cap)
    rep.emit(
        {
            "check": "support",
            "passed": True,
            "group": G.name,
            "ring": args.ring,
            "module": args.module,
            **result.to_json(),
        }
    )
    return 0


def cmd_verify(args, rep: Reporter) -> int:
    suite = args.suite
    runner = {
        "maschke": _suite_maschke,
        "chouinard": _suite_chouinard,
        "tensor-formula": _suite_tensor_formula,
        "quillen": _suite_quillen,
        "elab": _suite_elab,
        "fracture": _suite_fracture,
        "frobenius": _suite_frobenius,
        "tate-unit": _suite_tate_unit,
    }[suite]
    runner(args, rep)
    return 0 if rep.all_passed else 1


def _suite_maschke(args, rep):
    groups = _load_groups(args.group, ("C6", "S3"))
    count = args.count or 25
    for G in groups:
        rng = random.Random(args.seed)
        for i in range(count):
            M = random_lattice(G, QQ, rng)
            r = maschke_check(M)
            rep.emit(
                {
                    "check": "maschke",
                    "suite": "maschke",
                    "seed": args.seed,
                    "index": i,
                    "passed": r["weakly_projective"] and r["certificate_verified"],
                    **{k: r[k] for k in ("group", "rank", "certificate_verified")},
                }
            )


def _suite_chouinard(args, rep):
    groups = _load_groups(args.group, ("S3", "Q8", "D4", "C6"))
    count = args.count or 20
    for G in groups:
        rings = [ZZ] + [Fp(p) for p in _primes_dividing(G.order)]
        for ring in rings:
            rng = random.Random(args.seed)
            for i in range(count):
                M = random_lattice(G, ring, rng)
                r = chouinard_check(M)
                rep.emit(
                    {
                        "check": "chouinard",
                        "suite": "chouinard",
                        "seed": args.seed,
                        "index": i,
                        "passed": r["biconditional"],
                        "group": G.name,
                        "ring": str(ring),
                        "rank": r["rank"],
                        "weakly_projective": r["weakly_projective"],
                    }
                )


def _tensor_modules(G, ring, cap):
    """The standard module battery for the tensor-formula suite."""
    mods = {"trivial": trivial_lattice(G, ring), "regular": regular_lattice(G, ring)}
    if isinstance(ring, PrimeField):
        from .cohomring import ring_presentation

        pres = ring_presentation(G, ring.p, max(cap, 2))
        deg1 = [g for g in pres.generators if g.degree == 1]
        for g in deg1:
            mods[f"L_{g.name}"] = carlson_lattice(G, ring, g.cls)
        if len(deg1) >= 2:
            a, b = deg1[0].cls, deg1[1].cls
            vec = [ring.add(x, y) for x, y in zip(a.vec, b.vec)]
            cls = CohomologyClass(pres.res, 1, vec)
            mods[f"L_{deg1[0].name}+{deg1[1].name}"] = carlson_lattice(G, ring, cls)
        mods["omega_trivial"] = syzygy(trivial_lattice(G, ring), 1)
    else:
        for p in _primes_dividing(G.order):
            g = next(
                h for h in range(1, G.order) if G.element_order(h) == p
            )
            mods[f"perm_order{p}"] = permutation_lattice(
                G, ring, G.subgroup(G.closure([g]))
            )
    return mods


def _suite_tensor_formula(args, rep):
    from .lattices import tensor

    cap = args.cap or 4
    configs = []
    if args.group is None:
        configs = [(builtin_group("V4"), Fp(2)), (builtin_group("C6"), ZZ)]
    else:
        ring = parse_ring(args.ring) if args.ring else ZZ
        configs = [(_load_group(s), ring) for s in args.group.split(",")]
    for G, ring in configs:
        model = stmod_spectrum(G, ring if isinstance(ring, PrimeField) else ZZ, cap)
        mods = _tensor_modules(G, ring, cap)
        supp = {n: classify(M, model).subset for n, M in mods.items()}
        names = list(mods)
        for i in range(len(names)):
            for j in range(i, len(names)):
                prod = classify(tensor(mods[names[i]], mods[names[j]]), model).subset
                expected = supp[names[i]].intersect(supp[names[j]])
                same = prod.same_as(expected)
                rep.emit(
                    {
                        "check": "tensor-formula",
                        "suite": "tensor-formula",
                        "group": G.name,
                        "ring": str(ring),
                        "left": names[i],
                        "right": names[j],
                        "support": prod.canonical(),
                        "passed": same,
                    }
                )


def _suite_quillen(args, rep):
    cap = args.cap or 8
    nil = args.nil_bound or 8
    if args.group is None:
        configs = [("S3", 2), ("S3", 3), ("D4", 2)]
    else:
        ring = parse_ring(args.ring) if args.ring else None
        if not isinstance(ring, PrimeField):
            raise CohomstabError("quillen suite needs --ring Fp")
        configs = [(s, ring.p) for s in args.group.split(",")]
    for name, p in configs:
        G = _load_group(name)
        r = quillen_check(G, p, cap=cap, nil_exponent_bound=nil)
        rep.emit(
            {
                "check": "quillen",
                "suite": "quillen",
                "group": G.name,
                "p": p,
                "cap": cap,
                "passed": r.passed(),
                **r.to_json(),
            }
        )


def _suite_elab(args, rep):
    cap = args.cap or 8
    tate = args.tate_range or 4
    default = (("C2", 2), ("C3", 3), ("V4", 2), ("E9", 3))
    if args.group is None:
        configs = default
    else:
        lookup = dict(default)
        configs = []
        for s in args.group.split(","):
            if s not in lookup:
                raise CohomstabError(f"elab suite: no default prime for {s!r}")
            configs.append((s, lookup[s]))
    for name, p in configs:
        E = builtin_group(name)
        r = verify_elab_suite(E, p, cap=cap, tate_range=tate)
        rep.emit(
            {
                "check": "elab",
                "suite": "elab",
                "passed": r["passed"],
                **{k: r[k] for k in ("group", "p", "rank", "checks")},
            }
        )


def _suite_fracture(args, rep):
    groups = _load_groups(args.group, ("C6",))
    count = args.count or 20
    for G in groups:
        rng = random.Random(args.seed)
        for i in range(count):
            M = random_lattice(G, ZZ, rng)
            r = fracture_check(M)
            rep.emit(
                {
                    "check": "fracture",
                    "suite": "fracture",
                    "seed": args.seed,
                    "index": i,
                    "passed": r["biconditional"] and r["control"],
                    "group": G.name,
                    "rank": r["rank"],
                    "weakly_projective": r["weakly_projective"],
                    "local": {str(p): v for p, v in r["local"].items()},
                    "control_prime": r["control_prime"],
                }
            )


def _suite_frobenius(args, rep):
    """Shadow of the Frobenius property: free covers and co-covers are
    degreewise split, and weakly projective objects carry certificates."""
    groups = _load_groups(args.group, ("C2", "C6", "S3"))
    count = args.count or 5
    from .lattices import dual

    for G in groups:
        rng = random.Random(args.seed)
        reg = regular_lattice(G, ZZ)
        flag, cert = is_weakly_projective(reg)
        rep.emit(
            {
                "check": "frobenius-regular-projective",
                "suite": "frobenius",
                "group": G.name,
                "passed": flag and verify_projectivity_certificate(reg, cert),
            }
        )
        for i in range(count):
            M = random_lattice(G, ZZ, rng)
            incl, proj = free_cover_sequence(M)
            cover_ok = check_split_exact(incl, proj)
            incl2, proj2 = free_cover_sequence(dual(M))
            envelope_ok = check_split_exact(incl2, proj2)
            rep.emit(
                {
                    "check": "frobenius-split-covers",
                    "suite": "frobenius",
                    "seed": args.seed,
                    "index": i,
                    "group": G.name,
                    "rank": M.rank,
                    "passed": cover_ok and envelope_ok,
                }
            )


def _suite_tate_unit(args, rep):
    groups = _load_groups(args.group, ("C2", "C3", "C4"))
    rng_bound = args.tate_range or 3
    for G in groups:
        for n in range(-rng_bound, rng_bound + 1):
            r = tate_unit_check(G, n)
            rep.emit(
                {
                    "check": "tate-unit",
                    "suite": "tate-unit",
                    "passed": r["match"],
                    **{k: r[k] for k in ("group", "n", "stable_hom", "tate")},
                }
            )


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _add_common(sp):
    sp.add_argument("--group", help="builtin name(s), comma separated, or a JSON file")
    sp.add_argument("--ring", help="Z | Q | Fp:p | Zp:p | Fq:p,n | Zmod:m | F2 ...")
    sp.add_argument("--cap", type=int, help="degree cap")
    sp.add_argument("--tate-range", type=int, dest="tate_range")
    sp.add_argument("--nil-bound", type=int, dest="nil_bound")
    sp.add_argument("--module", help="trivial | regular | perm:g | sign:g | omega:n | Lzeta:expr | file")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int)
    sp.add_argument("--out", help="write the report to this file")
    sp.add_argument("--format", choices=("json", "text"), default="json")
    sp.add_argument("--even-only", action="store_true")


def build_parser():
    ap = argparse.ArgumentParser(prog="cohomstab")
    sub = ap.add_subparsers(dest="command", required=True)
    c = sub.add_parser("cohomology", help="ring presentation / graded groups")
    _add_common(c)
    v = sub.add_parser("verify", help="run a named verification suite")
    v.add_argument("suite", choices=SUITES)
    _add_common(v)
    s = sub.add_parser("support", help="cohomological support of a lattice")
    _add_common(s)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "cohomology":
        if not args.group or not args.ring:
            ap.error("cohomology needs --group and --ring")
        args.cap = args.cap or 6
    if args.command == "support":
        if not args.group or not args.ring or not args.module:
            ap.error("support needs --group, --ring and --module")
        args.cap = args.cap or 4
    out = open(args.out, "w") if args.out else sys.stdout
    rep = Reporter(out, args.format)
    try:
        if args.command == "cohomology":
            code = cmd_cohomology(args, rep)
        elif args.command == "support":
            code = cmd_support(args, rep)
        else:
            code = cmd_verify(args, rep)
    except CohomstabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 2
    finally:
        if args.out:
            out.close()
    return code


if __name__ == "__main__":
    sys.exit(main())

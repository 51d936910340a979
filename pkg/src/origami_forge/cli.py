"""Batch command-line front end.

Every subcommand prints a single JSON object (with a ``"schema": 1``
version field) on standard output and exits 0.  Domain errors produce a
structured JSON error object on standard error and exit code 1; argument
errors exit 2.  Identical invocations (including seeds) produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

from . import homology, hss, linalg, moebius
from .freegroup import exponent_sums, is_conjugate_horizontal, lift_matrix
from .origami import (
    Origami,
    BadFormat,
    cylinders,
    format_origami,
    genus,
    horizontal_multiplier,
    is_closed,
    l_origami,
    o14,
    parse_origami,
    random_origami,
    shear,
    vertex_orbits,
    wollmilchsau,
    x_origami,
)
from .subgroup import CosetAction, aut_stabilizes

SCHEMA = 1


class VerificationFailed(ValueError):
    pass


# ---------------------------------------------------------------------------
# fixture registry
# ---------------------------------------------------------------------------

FIXTURES = {
    "wollmilchsau": wollmilchsau,
    "o14": o14,
    "l22": lambda: l_origami(2, 2),
    "l23": lambda: l_origami(2, 3),
    "l32": lambda: l_origami(3, 2),
    "x3": lambda: x_origami(3),
    "x4": lambda: x_origami(4),
}

WORD_FIXTURES = ("l22.words", "flat64.words")


def fixture_dir() -> str:
    """Directory holding the .ori / .words data files; overridable via
    the ORIGAMI_FORGE_FIXTURES environment variable."""
    override = os.environ.get("ORIGAMI_FORGE_FIXTURES")
    if override:
        return override
    return os.path.join(os.path.dirname(__file__), "fixtures")


def load_origami(ref: str) -> Origami:
    """Resolve an origami argument: a file path, or a registry name
    (looked up as <name>.ori in the fixture directory)."""
    if os.path.exists(ref):
        with open(ref, "r", encoding="utf-8") as fh:
            return parse_origami(fh.read())
    candidate = os.path.join(fixture_dir(), ref + ".ori")
    if ref in FIXTURES and os.path.exists(candidate):
        with open(candidate, "r", encoding="utf-8") as fh:
            return parse_origami(fh.read())
    if ref in FIXTURES:
        return FIXTURES[ref]()
    raise BadFormat(f"no such origami file or fixture: {ref!r}")


# ---------------------------------------------------------------------------
# JSON helpers
# ---------------------------------------------------------------------------


def emit(obj: dict, stream=None) -> None:
    stream = stream or sys.stdout
    json.dump(obj, stream, sort_keys=True, separators=(", ", ": "))
    stream.write("\n")


def curve_json(c) -> dict:
    return {"start": c.start, "word": str(c.word)}


def dump_trace(result: hss.HssResult, stream) -> None:
    """MergeHistory rounds as JSON lines, one event per line."""
    for rnd, history in enumerate(result.histories):
        emit({"round": rnd, "event": "start", "lists": list(history.initial)},
             stream)
        for ev in history.events:
            if ev[0] == "merge":
                _, rid, lid, mid, ga, gb = ev
                emit({"round": rnd, "event": "merge", "result": rid,
                      "left": lid, "right": mid, "glue": [ga, gb]}, stream)
            else:
                _, rid, pid, s1, s2 = ev
                emit({"round": rnd, "event": "cancel", "result": rid,
                      "parent": pid, "removed": [s1, s2]}, stream)
        emit({"round": rnd, "event": "final", "list": history.final}, stream)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_analyze(args) -> dict:
    o = load_origami(args.origami)
    return {
        "schema": SCHEMA,
        "d": o.d,
        "cylinders": sorted(sorted(z.squares) for z in cylinders(o)),
        "vertex_orbits": sorted(sorted(v) for v in vertex_orbits(o)),
        "genus": genus(o),
    }


def cmd_hss(args) -> dict:
    o = load_origami(args.origami)
    result = hss.find_hss_detailed(o)
    if args.trace:
        dump_trace(result, sys.stderr)
    n_cuts = len(result.cut_cylinders)
    return {
        "schema": SCHEMA,
        "curves": [curve_json(c) for c in result.curves],
        "step1_cuts": [curve_json(c) for c in result.curves[:n_cuts]],
    }


def hss_report(o: Origami) -> dict:
    g = genus(o)
    curves = hss.find_hss(o)
    model = homology.h1_model(o)
    classes = [
        model.coords(homology.edge_cycle(o, c.start, c.word)) for c in curves
    ]
    return {
        "genus": g,
        "curve_count": len(curves),
        "curves": [curve_json(c) for c in curves],
        "closed": all(is_closed(o, c) for c in curves),
        "conjugate_horizontal": all(
            is_conjugate_horizontal(c.word) for c in curves
        ),
        "independent": homology.f2_independent(classes),
    }


def cmd_verify_hss(args) -> dict:
    o = load_origami(args.origami)
    report = hss_report(o)
    ok = (
        report["curve_count"] == report["genus"]
        and report["closed"]
        and report["conjugate_horizontal"]
        and report["independent"]
    )
    if not ok:
        raise VerificationFailed(json.dumps(report, sort_keys=True))
    return {"schema": SCHEMA, "ok": True, **report}


def parse_matrix(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 4:
        raise BadFormat("--matrix expects four comma-separated integers")
    try:
        return tuple(int(p) for p in parts)
    except ValueError as exc:
        raise BadFormat("--matrix entries must be integers") from exc


def cmd_veech_check(args) -> dict:
    o = load_origami(args.origami)
    A = parse_matrix(args.matrix)
    cs = CosetAction(o)
    if A[0] * A[3] - A[1] * A[2] != 1:
        from .freegroup import NotUnimodular

        raise NotUnimodular(f"matrix {A} has determinant != 1")
    witness = aut_stabilizes(cs, lift_matrix(A))
    return {
        "schema": SCHEMA,
        "matrix": list(A),
        "member": witness is not None,
        "witness_square": witness,
    }


def cmd_shear(args) -> dict:
    o = load_origami(args.origami)
    sheared, change = shear(o, args.p, args.q)
    return {
        "schema": SCHEMA,
        "d": sheared.d,
        "origami": format_origami(sheared),
        "genus": genus(sheared),
        "change": [[str(change.a), str(change.b)],
                   [str(change.c), str(change.d)]],
    }


def cmd_homology(args) -> dict:
    o = load_origami(args.origami)
    model = homology.h1_model(o)
    out = {
        "schema": SCHEMA,
        "rank": model.rank,
        "intersection_matrix": model.gram,
    }
    if args.twist:
        out["certificate"] = homology.twist_membership_certificate(o)
    return out


def parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise BadFormat(f"expected 're,im', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise BadFormat(f"non-numeric complex entry {text!r}") from exc


def _cplx(z: complex) -> Optional[list]:
    """[re, im], or None for the point at infinity."""
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return None
    return [z.real, z.imag]


def cmd_moebius(args) -> dict:
    entries = [parse_complex(t) for t in args.entries]
    m = moebius.MoebiusMap.from_entries(*entries)
    kind = moebius.classify(m)
    out = {
        "schema": SCHEMA,
        "classification": kind,
        "trace": _cplx(m.trace()),
        "matrix": [_cplx(m.a), _cplx(m.b), _cplx(m.c), _cplx(m.d)],
    }
    if kind == "loxodromic":
        conjugated = abs(m.c) <= moebius.TOL
        probe = m.conjugate_by(moebius.GENERIC_CONJUGATOR) if conjugated else m
        fd = moebius.fixed_data(probe)
        ginv = moebius.GENERIC_CONJUGATOR.inverse()
        z = ginv(fd.z) if conjugated else fd.z
        w = ginv(fd.w) if conjugated else fd.w
        back = moebius.from_fixed_data(fd)
        out["fixed_point_z"] = _cplx(z)
        out["fixed_point_w"] = _cplx(w)
        out["multiplier"] = _cplx(fd.multiplier)
        out["conjugated"] = conjugated
        out["roundtrip"] = back.approx_eq(probe)
    return out


def cmd_fixtures(args) -> dict:
    base = fixture_dir()
    entries = []
    for name in sorted(FIXTURES):
        path = os.path.join(base, name + ".ori")
        entries.append({
            "name": name,
            "path": path,
            "present": os.path.exists(path),
        })
    words = []
    for fname in WORD_FIXTURES:
        path = os.path.join(base, fname)
        words.append({
            "name": fname,
            "path": path,
            "present": os.path.exists(path),
        })
    return {
        "schema": SCHEMA,
        "directory": base,
        "origamis": entries,
        "word_fixtures": words,
    }


# ---------------------------------------------------------------------------
# randomized sweep
# ---------------------------------------------------------------------------


def sweep_one(seed: int, max_d: int, index: int) -> dict:
    """All randomized property suites on one seed-derived origami."""
    rng = random.Random(f"{seed}:{index}")
    d = rng.randint(2, max_d)
    o = random_origami(rng, d)
    report = hss_report(o)
    hss_ok = (
        report["curve_count"] == report["genus"]
        and report["closed"]
        and report["conjugate_horizontal"]
        and report["independent"]
    )

    # step-1 cut count is independent of the bridging order
    ncyl = len(cylinders(o))
    base_cuts = len(hss.step1(o)[0])
    orders_ok = True
    for _ in range(10):
        order = list(range(ncyl))
        rng.shuffle(order)
        if len(hss.step1(o, order)[0]) != base_cuts:
            orders_ok = False
            break

    # the multitwist along the cylinder directions
    m, mat = horizontal_multiplier(o)
    cs = CosetAction(o)
    from .freegroup import horizontal_twist_lift

    veech_ok = aut_stabilizes(cs, horizontal_twist_lift(m)) is not None

    # homology certificates
    model = homology.h1_model(o)
    gram_ok = (
        model.rank == 2 * report["genus"]
        and all(
            model.gram[i][j] == -model.gram[j][i]
            for i in range(model.rank)
            for j in range(model.rank)
        )
        and abs(linalg.det_int(model.gram)) == 1
    )
    cert = homology.twist_membership_certificate(o)
    return {
        "index": index,
        "d": d,
        "genus": report["genus"],
        "curves": [c["word"] for c in report["curves"]],
        "hss_ok": hss_ok,
        "cut_count_invariant": orders_ok,
        "multiplier": m,
        "veech_member": veech_ok,
        "homology_ok": gram_ok,
        "block_form": cert["block"] is not None,
        "charpoly_divides": cert["charpoly_divides"],
        "ok": all((hss_ok, orders_ok, veech_ok, gram_ok,
                   cert["charpoly_divides"])),
    }


def cmd_sweep(args) -> dict:
    indices = range(args.count)
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        results = list(
            pool.map(lambda i: sweep_one(args.seed, args.max_d, i), indices)
        )
    return {
        "schema": SCHEMA,
        "seed": args.seed,
        "max_d": args.max_d,
        "count": args.count,
        "ok": all(r["ok"] for r in results),
        "results": results,
    }


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="origami-forge",
        description="Exact invariants of square-tiled surfaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="cylinders, singularities, genus")
    p.add_argument("origami", help=".ori file or fixture name")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("hss", help="horizontal Schottky cut system")
    p.add_argument("origami")
    p.add_argument("--trace", action="store_true",
                   help="dump merge history as JSON lines on stderr")
    p.set_defaults(func=cmd_hss)

    p = sub.add_parser("verify-hss", help="check the cut system invariants")
    p.add_argument("origami")
    p.set_defaults(func=cmd_verify_hss)

    p = sub.add_parser("veech-check", help="Veech group membership")
    p.add_argument("origami")
    p.add_argument("--matrix", required=True, metavar="a,b,c,d",
                   help="integer matrix entries, row-major")
    p.set_defaults(func=cmd_veech_check)

    p = sub.add_parser("shear", help="re-square along a rational direction")
    p.add_argument("origami")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_shear)

    p = sub.add_parser("homology", help="H_1 rank and intersection form")
    p.add_argument("origami")
    p.add_argument("--twist", action="store_true",
                   help="include the multitwist certificate")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("moebius", help="classify a Moebius transformation")
    p.add_argument("entries", nargs=4, metavar="re,im",
                   help="matrix entries a b c d as re,im pairs")
    p.set_defaults(func=cmd_moebius)

    p = sub.add_parser("fixtures", help="list the fixture registry")
    p.set_defaults(func=cmd_fixtures)

    p = sub.add_parser("sweep", help="randomized property suites")
    p.add_argument("--max-d", type=int, default=12, dest="max_d")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=4)
    p.set_defaults(func=cmd_sweep)

    return parser


def run(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        emit(args.func(args))
        return 0
    except (ValueError, ArithmeticError, AssertionError, OSError) as exc:
        emit(
            {
                "schema": SCHEMA,
                "error": {"type": type(exc).__name__, "message": str(exc)},
            },
            sys.stderr,
        )
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

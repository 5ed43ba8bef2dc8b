"""Batch command-line front end.

Every command prints one JSON envelope {command, inputs, results, checks}
(or CSV for the two table commands under --csv).  Output is deterministic;
--meta adds a timestamp block outside the payload.  Exit codes: 0 all
checks pass, 1 a check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone

from . import homorbits, moebius, strata, surfaces
from .cyclic_schottky import (
    KHom,
    build_spec,
    fpword_str,
    kernel_membership,
    kernel_presentation,
    normalized_homs,
)
from .freegroup import verify_example1
from .homorbits import PERM_INV, PERM_INV_SCALE, HomImage
from .strata import AdmissibleTuple

_E2_SEED = 20240501  # fixed so `verify example2` output is byte-identical


def _tuple_from_args(args):
    return AdmissibleTuple(args.g, args.p, args.t, args.r, args.s)


def _tuple_json(tup):
    return {"g": tup.g, "p": tup.p, "t": tup.t, "r": tup.r, "s": tup.s}


def _bounds_json(cb):
    return {
        "irreducible_count": cb.irreducible_count,
        "upper": cb.upper,
        "exact": cb.exact,
        "basis": cb.basis.value,
    }


def _complex_json(z):
    return [z.real, z.imag]


def _matrix_json(m):
    return [_complex_json(z) for z in m.entries()]


def _default_phi(spec):
    return next(iter(normalized_homs(spec)))


def _phi_from_args(spec, phi_text):
    if phi_text is None:
        return _default_phi(spec)
    data = json.loads(phi_text)
    tup = spec.tuple
    hom = HomImage(
        tup.p,
        a=tuple(data.get("a", [0] * tup.t)),
        e=tuple(data.get("e", [])),
        tau=tuple(data.get("tau", [0] * tup.s)),
        f=tuple(data.get("f", [])),
    )
    return KHom(spec, hom)


def _report_row(rep):
    return {
        "tuple": _tuple_json(rep.tuple),
        "m_count": rep.m_count,
        "dimension": rep.dimension,
        "components": _bounds_json(rep.components),
    }


# --------------------------------------------------------------------------
# command handlers: each returns (results, checks)

def _cmd_tuples(args):
    tuples = strata.enumerate_tuples(args.g, args.p)
    results = {
        "count": len(tuples),
        "tuples": [_tuple_json(t) for t in tuples],
    }
    checks = [
        {
            "name": "all_admissible",
            "pass": all(
                strata.is_admissible(t.g, t.p, t.t, t.r, t.s) for t in tuples
            ),
            "detail": f"{len(tuples)} tuples verified against the defining relation",
        }
    ]
    return results, checks


def _cmd_count(args):
    n = strata.count_strata(args.p, args.g)
    checks = []
    if args.p in (2, 3):
        closed = strata.closed_form_count(args.p, args.g)
        checks.append(
            {
                "name": "closed_form_agreement",
                "pass": closed == n,
                "detail": f"enumeration {n}, closed form {closed}",
            }
        )
    return {"count": n}, checks


def _cmd_m(args):
    tup = _tuple_from_args(args)
    m = strata.m_count(tup)
    results = {"m": m}
    checks = []
    if args.oracle:
        oracle = homorbits.orbit_count_tuples(
            args.p, args.r, args.s, PERM_INV, budget=args.budget
        )
        results["oracle"] = oracle
        checks.append(
            {
                "name": "oracle_matches_formula",
                "pass": oracle == m,
                "detail": f"formula {m}, enumeration {oracle}",
            }
        )
    return results, checks


def _cmd_oracle(args):
    action = PERM_INV_SCALE if args.scale else PERM_INV
    count = homorbits.orbit_count_tuples(
        args.p, args.r, args.s, action, budget=args.budget
    )
    results = {"orbit_count": count, "scaled": bool(args.scale)}
    checks = []
    if args.t is not None:
        bfs = homorbits.bfs_orbit_count(
            args.p, args.t, args.r, args.s, action, budget=args.budget
        )
        results["bfs_orbit_count"] = bfs
        checks.append(
            {
                "name": "bfs_matches_canonical",
                "pass": bfs == count,
                "detail": f"bfs {bfs}, canonical {count}",
            }
        )
    return results, checks


def _cmd_bounds(args):
    tup = _tuple_from_args(args)
    cb = strata.component_bounds(tup)
    results = {
        "tuple": _tuple_json(tup),
        "m_count": strata.m_count(tup),
        "dimension": strata.dimension(tup),
        "components": _bounds_json(cb),
    }
    checks = [
        {
            "name": "exact_within_upper",
            "pass": cb.exact is None or 1 <= cb.exact <= cb.upper,
            "detail": f"exact={cb.exact} upper={cb.upper}",
        }
    ]
    return results, checks


def _cmd_kernel(args):
    tup = _tuple_from_args(args)
    spec = build_spec(tup)
    phi = _phi_from_args(spec, args.phi)
    words = kernel_presentation(phi)
    results = {
        "tuple": _tuple_json(tup),
        "phi": {
            "a": list(phi.hom.a),
            "e": list(phi.hom.e),
            "tau": list(phi.hom.tau),
            "f": list(phi.hom.f),
        },
        "rank": len(words),
        "generators": [fpword_str(w) for w in words],
    }
    checks = [
        {
            "name": "rank_equals_genus",
            "pass": len(words) == tup.g,
            "detail": f"{len(words)} generators for genus {tup.g}",
        },
        {
            "name": "all_in_kernel",
            "pass": all(kernel_membership(phi, w) for w in words),
            "detail": "every generator has zero image",
        },
    ]
    return results, checks


def _cmd_verify(args):
    if args.example == "example1":
        report = verify_example1()
        return {"suite": "example1"}, report["checks"]
    return _verify_example2(args)


def _verify_example2(args):
    p = args.p if args.p is not None else 5
    m = args.m if args.m is not None else 4
    checks = []

    ok = True
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for pp in (5, 7, 11, 13):
            for mm in range(1, 9):
                tup = surfaces.example2_type(pp, mm)
                expected_g = (pp - 1) * (2 * mm * pp - pp - 1)
                ok = ok and tup.g == expected_g
    checks.append(
        {
            "name": "genus_type_identity",
            "pass": ok,
            "detail": "p in {5,7,11,13}, m in 1..8",
        }
    )

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        tup = surfaces.example2_type(p, m)
    results = {"suite": "example2", "type": _tuple_json(tup)}
    if m >= 4:
        cb = strata.component_bounds(tup)
        checks.append(
            {
                "name": "family_is_connected_case",
                "pass": cb.exact == 1
                and cb.basis is strata.Basis.EXAMPLE2_FAMILY,
                "detail": f"basis={cb.basis.value} exact={cb.exact}",
            }
        )

    witness = surfaces.witness_pair(p, m)
    if witness is None:
        checks.append(
            {
                "name": "witness_pair",
                "pass": False,
                "detail": f"action on (Z_{p}^*)^{m} is transitive, no witness",
            }
        )
    else:
        x, y = witness
        results["witness"] = [list(x.entries), list(y.entries)]
        checks.append(
            {
                "name": "witness_pair_distinct_orbits",
                "pass": not surfaces.same_orbit(x, y),
                "detail": f"{list(x.entries)} vs {list(y.entries)}",
            }
        )

    rng = random.Random(_E2_SEED)
    residuals = []
    all_pass = True
    for mm in (1, 2):
        for _ in range(5):
            curve = surfaces.random_curve(5, mm, rng)
            rep = surfaces.fixed_point_check(curve, tolerance=1e-9)
            residuals.append(rep["max_residual"])
            all_pass = all_pass and rep["passed"]
    results["fixed_point_max_residual"] = max(residuals)
    checks.append(
        {
            "name": "fixed_point_check",
            "pass": all_pass,
            "detail": f"10 instances, max residual {max(residuals):.3e}",
        }
    )

    if args.curve is not None:
        curve = surfaces.CurveData.from_json(json.loads(args.curve))
        rep = surfaces.fixed_point_check(curve, tolerance=args.tolerance)
        results["curve_report"] = rep
        checks.append(
            {
                "name": "user_curve_fixed_points",
                "pass": rep["passed"],
                "detail": f"max residual {rep['max_residual']:.3e}",
            }
        )
    return results, checks


def _cmd_build(args):
    tup = _tuple_from_args(args)
    tol = moebius.Tolerances(classify=args.tol_classify, order=args.tol_order)
    mg = moebius.build_matrix_group(tup, separation=args.separation, tolerances=tol)
    matrices = []
    for sym in mg.spec.symbols():
        m = mg.matrices[sym]
        matrices.append(
            {
                "symbol": f"{sym[0]}{sym[1]}",
                "matrix": _matrix_json(m),
                "center": _complex_json(mg.centers[sym]),
                "class": moebius.classify(m, tolerances=tol).value,
            }
        )
    results = {"tuple": _tuple_json(tup), "separation": args.separation,
               "matrices": matrices}
    checks = [
        {
            "name": "build_invariants",
            "pass": True,
            "detail": "order, classification and commutation checks hold",
        }
    ]
    return results, checks


def _cmd_loxcheck(args):
    tup = _tuple_from_args(args)
    tol = moebius.Tolerances(classify=args.tol_classify, order=args.tol_order)
    mg = moebius.build_matrix_group(tup, separation=args.separation, tolerances=tol)
    spec = mg.spec
    phi = _phi_from_args(spec, args.phi)
    report = moebius.purely_loxodromic_sample(
        mg,
        phi,
        max_syllables=args.max_syllables,
        budget=args.budget,
        tolerances=tol,
    )
    results = {
        "tuple": _tuple_json(tup),
        "separation": args.separation,
        "report": report,
    }
    checks = [
        {
            "name": "purely_loxodromic",
            "pass": report["passed"],
            "detail": f"{report['n_loxodromic']}/{report['n_words']} loxodromic, "
            f"{len(report['violations'])} violations",
        }
    ]
    return results, checks


def _report_for_genus(task):
    g, p = task
    return [_report_row(rep) for rep in strata.stratum_report(g, p)]


def _cmd_report(args):
    gs = list(range(args.g_min, args.g_max + 1))
    tasks = [(g, args.p) for g in gs]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            chunks = list(pool.map(_report_for_genus, tasks))
    else:
        chunks = [_report_for_genus(t) for t in tasks]
    rows = [row for chunk in chunks for row in chunk]
    results = {"p": args.p, "g_min": args.g_min, "g_max": args.g_max,
               "reports": rows}
    checks = [
        {
            "name": "dimension_integrality",
            "pass": all(
                row["dimension"]
                == 3 * (row["tuple"]["t"] + row["tuple"]["s"] - 1)
                + 2 * row["tuple"]["r"]
                for row in rows
            ),
            "detail": f"{len(rows)} strata",
        }
    ]
    return results, checks


def _csv_output(command, results):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    if command == "tuples":
        writer.writerow(["g", "p", "t", "r", "s"])
        for t in results["tuples"]:
            writer.writerow([t["g"], t["p"], t["t"], t["r"], t["s"]])
    elif command == "report":
        writer.writerow(
            ["g", "p", "t", "r", "s", "m_count", "dimension", "exact", "upper",
             "basis"]
        )
        for row in results["reports"]:
            t = row["tuple"]
            c = row["components"]
            writer.writerow(
                [t["g"], t["p"], t["t"], t["r"], t["s"], row["m_count"],
                 row["dimension"],
                 "" if c["exact"] is None else c["exact"], c["upper"],
                 c["basis"]]
            )
    else:
        raise ValueError(f"--csv not supported for {command}")
    return out.getvalue()


_HANDLERS = {
    "tuples": _cmd_tuples,
    "count": _cmd_count,
    "m": _cmd_m,
    "oracle": _cmd_oracle,
    "bounds": _cmd_bounds,
    "kernel": _cmd_kernel,
    "verify": _cmd_verify,
    "build": _cmd_build,
    "loxcheck": _cmd_loxcheck,
    "report": _cmd_report,
}


def _add_tuple_flags(sub):
    sub.add_argument("--g", type=int, required=True)
    sub.add_argument("--p", type=int, required=True)
    sub.add_argument("--t", type=int, required=True)
    sub.add_argument("--r", type=int, required=True)
    sub.add_argument("--s", type=int, required=True)


def _add_tol_flags(sub):
    sub.add_argument("--tol-classify", type=float, default=1e-9,
                     dest="tol_classify")
    sub.add_argument("--tol-order", type=float, default=1e-8, dest="tol_order")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="schottky-strata",
        description="Combinatorial invariants of cyclic-Schottky strata",
    )
    parser.add_argument("--meta", action="store_true",
                        help="attach a timestamp block to the envelope")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("tuples", help="enumerate admissible (t,r,s)")
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--csv", action="store_true")

    sp = sub.add_parser("count", help="number of admissible tuples")
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)

    sp = sub.add_parser("m", help="irreducible-component count of one stratum")
    _add_tuple_flags(sp)
    sp.add_argument("--oracle", action="store_true",
                    help="cross-check against the brute-force orbit count")
    sp.add_argument("--budget", type=int, default=10**7)

    sp = sub.add_parser("oracle", help="brute-force orbit counts")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--t", type=int, default=None,
                    help="also run the BFS oracle over the full image space")
    sp.add_argument("--scale", action="store_true")
    sp.add_argument("--budget", type=int, default=10**7)

    sp = sub.add_parser("bounds", help="connected-component bounds")
    _add_tuple_flags(sp)

    sp = sub.add_parser("kernel", help="free generating set of a kernel")
    _add_tuple_flags(sp)
    sp.add_argument("--phi", type=str, default=None,
                    help='images as JSON, e.g. {"a":[0],"e":[1]}')

    sp = sub.add_parser("verify", help="worked-example suites")
    sp.add_argument("example", choices=["example1", "example2"])
    sp.add_argument("--p", type=int, default=None)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--curve", type=str, default=None,
                    help="additional CurveData as JSON (complex as [re, im])")
    sp.add_argument("--tolerance", type=float, default=1e-9)

    sp = sub.add_parser("build", help="matrix realisation of a group")
    _add_tuple_flags(sp)
    sp.add_argument("--separation", type=float, default=10.0)
    _add_tol_flags(sp)

    sp = sub.add_parser("loxcheck", help="classify short kernel words")
    _add_tuple_flags(sp)
    sp.add_argument("--separation", type=float, default=10.0)
    sp.add_argument("--max-syllables", type=int, default=4,
                    dest="max_syllables")
    sp.add_argument("--budget", type=int, default=10**6)
    sp.add_argument("--phi", type=str, default=None)
    _add_tol_flags(sp)

    sp = sub.add_parser("report", help="stratum reports over a genus range")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--g-min", type=int, required=True, dest="g_min")
    sp.add_argument("--g-max", type=int, required=True, dest="g_max")
    sp.add_argument("--csv", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)

    return parser


def run(argv):
    """Parse and execute; returns (exit_code, envelope_or_None, text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if exc.code is not None else 2), None, ""

    inputs = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("command", "meta") and v is not None
    }
    try:
        results, checks = _HANDLERS[args.command](args)
    except (ValueError, homorbits.BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2, None, ""

    envelope = {
        "command": args.command,
        "inputs": inputs,
        "results": results,
        "checks": checks,
    }
    if args.meta:
        envelope["meta"] = {
            "timestamp": datetime.now(timezone.utc).isoformat()
        }
    if getattr(args, "csv", False):
        text = _csv_output(args.command, results)
    else:
        text = json.dumps(envelope, indent=2, allow_nan=False) + "\n"
    code = 0 if all(c["pass"] for c in checks) else 1
    return code, envelope, text


def main(argv=None):
    code, _envelope, text = run(sys.argv[1:] if argv is None else argv)
    if text:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

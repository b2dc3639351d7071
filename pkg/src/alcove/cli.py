"""Command-line front end.

Every command prints a single JSON document on stdout.  Exit codes: 0 on
success (and on table/verify agreement), 1 on a mathematical mismatch, 2 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .errors import AlcoveError
from .lattice import format_fraction
from .rootdata import (
    build_datum,
    fundamental_group,
    identify_type,
    parse_type,
    validate,
)
from .restriction import realize_type, restrict_datum, verify_folding
from .rgroup import (
    COMPAT_REPRESENTATIVES,
    TABLE1_ROWS,
    classify_stabilizers,
    coinvariants_bridge,
    compatibility_sweep,
    point_from_label,
    stabilizer,
    stabilizer_preimage_orders,
    table1,
)
from .weyl_affine import DEFAULT_WEYL_CAP, omega_by_barycenter, omega_by_cosets

SCHEMA = "alcove/1"

ENV_WEYL_CAP = "ALCOVE_WEYL_CAP"

# Simply connected types exercised by the class-map suite: everything
# irreducible of rank <= 6 plus the rank-7/8 classical spot checks.
IOTA_TYPES = (
    "A1", "A2", "A3", "A4", "A5", "A6",
    "B2", "B3", "B4", "B5", "B6",
    "C2", "C3", "C4", "C5", "C6",
    "D3", "D4", "D5", "D6",
    "E6", "F4", "G2",
    "A7", "B8", "C8", "D8",
)

# Cross-check the enumerative stabilizer construction where W is small
# enough to scan in a few seconds.
BARYCENTER_CROSSCHECK_CAP = 60_000

# Twisted types exercised by the folding suite.
FOLD_TYPES = ("2A2", "2A3", "2A4", "2A5", "2D4", "2D5", "3D4", "2E6")


@dataclass
class Request:
    command: str
    type: str | None = None
    isogeny: str = "sc"
    point: str | None = None
    suite: str | None = None
    samples: int = 1000
    seed: int = 7
    weyl_cap: int | None = None
    subgroup_cap: int = 64
    output: str | None = None


class UsageError(Exception):
    pass


def _weyl_cap(req: Request) -> int:
    if req.weyl_cap is not None:
        return req.weyl_cap
    env = os.environ.get(ENV_WEYL_CAP)
    return int(env) if env else DEFAULT_WEYL_CAP


def _omega_for(label: str, isogeny: str):
    datum, autos = realize_type(label, isogeny)
    if autos:
        res = restrict_datum(datum, autos)
        return omega_by_cosets(res.folded)
    return omega_by_cosets(datum)


# ---------------------------------------------------------------------------
# commands


def _cmd_datum(req: Request):
    ct = parse_type(req.type)
    if ct.twist != 1:
        raise UsageError(f"{req.type} is twisted; use the restrict command")
    datum = build_datum(ct, req.isogeny)
    report = validate(datum)
    fg = fundamental_group(datum)
    payload = {
        "type": str(ct),
        "isogeny": req.isogeny,
        "datum": datum.to_json(),
        "valid": report.ok,
        "fundamental_group": {
            "factors": list(fg.invariant_factors),
            "free_rank": fg.free_rank,
        },
        "identified": [str(t) for t, _ in identify_type(datum)],
    }
    return (0 if report.ok else 1), payload


def _cmd_omega(req: Request):
    omega = _omega_for(req.type, req.isogeny)
    payload = {"type": req.type, "isogeny": req.isogeny, "omega": omega.to_json()}
    return 0, payload


def _cmd_restrict(req: Request):
    datum, autos = realize_type(req.type, req.isogeny)
    res = restrict_datum(datum, autos)
    folded_omega_factors = list(omega_by_cosets(res.folded).invariant_factors)
    payload = {
        "type": req.type,
        "isogeny": req.isogeny,
        "restriction": res.to_json(),
        "folded_type": [str(t) for t, _ in identify_type(res.folded)],
        "folded_omega_factors": folded_omega_factors,
    }
    return 0, payload


def _cmd_rgroup(req: Request):
    if not req.point:
        raise UsageError("rgroup requires --point")
    datum, autos = realize_type(req.type, req.isogeny)
    bridge = coinvariants_bridge(datum, autos)
    omega = omega_by_cosets(bridge.restriction.folded)
    pt = point_from_label(omega.alcove, req.point)
    stab = stabilizer(omega, pt)
    orders = stabilizer_preimage_orders(bridge, omega, pt)
    payload = {
        "type": req.type,
        "isogeny": req.isogeny,
        "point": [format_fraction(c) for c in pt.point],
        "omega": {"order": omega.order, "factors": list(omega.invariant_factors)},
        "stabilizer": {
            "order": stab.order,
            "factors": list(stab.invariant_factors),
            "iota_images": [list(r) for r in stab.iota_images],
        },
        "preimage_orders": {
            "preimage": orders.preimage_order,
            "kernel": orders.kernel_order,
            "stabilizer": orders.stabilizer_order,
            "law_holds": orders.law_holds,
        },
        "bridge": bridge.to_json(),
    }
    return (0 if orders.law_holds else 1), payload


def _cmd_classify(req: Request):
    datum, autos = realize_type(req.type, req.isogeny)
    report = classify_stabilizers(
        datum, autos, seed=req.seed, max_subgroup_order=req.subgroup_cap
    )
    payload = {"type": req.type, "isogeny": req.isogeny, "classification": report.to_json()}
    return (0 if report.realized_all else 1), payload


def _cmd_table1(req: Request):
    rows = table1()
    ok = all(r.match or r.known_discrepancy for r in rows)
    payload = {
        "rows": [r.to_json() for r in rows],
        "all_match_or_documented": ok,
        "notes": [
            f"{r.label}: printed {list(r.printed)}, computed {list(r.computed)}"
            for r in rows
            if not r.match
        ],
    }
    return (0 if ok else 1), payload


# ---------------------------------------------------------------------------
# verification suites


def run_verify_iota(types=IOTA_TYPES, barycenter_cap: int = BARYCENTER_CROSSCHECK_CAP):
    from .errors import CapExceeded

    details = []
    ok = True
    counterexample = None
    for label in types:
        datum = build_datum(label, "sc")
        omega = omega_by_cosets(datum)
        checks = omega.check_iota()
        crosschecked = False
        if all(checks.values()):
            try:
                other = omega_by_barycenter(datum, cap=barycenter_cap)
            except CapExceeded:
                other = None
            if other is not None:
                crosschecked = True
                same = [
                    a.matrix == b.matrix and a.translation == b.translation
                    for a, b in zip(omega.elements, other.elements)
                ]
                if len(other.elements) != len(omega.elements) or not all(same):
                    checks["constructions_agree"] = False
        good = all(checks.values())
        if not good and counterexample is None:
            counterexample = {"type": label, "checks": checks}
        ok = ok and good
        details.append(
            {
                "type": label,
                "order": omega.order,
                "factors": list(omega.invariant_factors),
                "crosschecked_against_enumeration": crosschecked,
                **checks,
                "ok": good,
            }
        )
    return ok, {"suite": "iota", "ok": ok, "types": details, "counterexample": counterexample}


def run_verify_yu(types=FOLD_TYPES, cap: int = DEFAULT_WEYL_CAP):
    details = []
    ok = True
    counterexample = None
    for label in types:
        datum, autos = realize_type(label, "sc")
        report = verify_folding(datum, autos, cap=cap)
        entry = {"type": label, **report.to_json()}
        if not report.ok and counterexample is None:
            counterexample = entry
        ok = ok and report.ok
        details.append(entry)
    return ok, {"suite": "yu", "ok": ok, "types": details, "counterexample": counterexample}


def run_verify_compat(types=COMPAT_REPRESENTATIVES, samples: int = 1000, seed: int = 7):
    details = []
    ok = True
    counterexample = None
    for label in types:
        report = compatibility_sweep(label, samples=samples, seed=seed)
        details.append(report.to_json())
        if not report.ok and counterexample is None:
            ce = report.first_failure
            counterexample = {
                "type": label,
                "residues": list(ce.residues) if ce else None,
                "point": [format_fraction(c) for c in ce.point] if ce else None,
            }
        ok = ok and report.ok
    return ok, {
        "suite": "compat",
        "samples": samples,
        "seed": seed,
        "ok": ok,
        "types": details,
        "counterexample": counterexample,
    }


def run_verify_classify(types=TABLE1_ROWS, seed: int = 0):
    details = []
    ok = True
    counterexample = None
    for label in types:
        datum, autos = realize_type(label, "sc")
        report = classify_stabilizers(datum, autos, seed=seed)
        good = report.realized_all
        entry = {
            "type": label,
            "omega_factors": list(report.omega_factors),
            "subgroups": len(report.realizations),
            "all_realized": good,
        }
        if not good and counterexample is None:
            counterexample = report.to_json()
        ok = ok and good
        details.append(entry)
    return ok, {"suite": "classify", "seed": seed, "ok": ok, "types": details, "counterexample": counterexample}


def _cmd_verify(req: Request):
    suite = req.suite
    if suite not in ("iota", "yu", "compat", "classify", "all"):
        raise UsageError(f"unknown suite {suite!r}")
    runs = []
    if suite in ("iota", "all"):
        types = (req.type,) if req.type and suite != "all" else IOTA_TYPES
        runs.append(run_verify_iota(types))
    if suite in ("yu", "all"):
        types = (req.type,) if req.type and suite != "all" else FOLD_TYPES
        runs.append(run_verify_yu(types, cap=_weyl_cap(req)))
    if suite in ("compat", "all"):
        types = (req.type,) if req.type and suite != "all" else COMPAT_REPRESENTATIVES
        runs.append(run_verify_compat(types, samples=req.samples, seed=req.seed))
    if suite in ("classify", "all"):
        types = (req.type,) if req.type and suite != "all" else TABLE1_ROWS
        runs.append(run_verify_classify(types, seed=req.seed))
    ok = all(r[0] for r in runs)
    payload = {"ok": ok, "suites": [r[1] for r in runs]}
    return (0 if ok else 1), payload


_COMMANDS = {
    "datum": _cmd_datum,
    "omega": _cmd_omega,
    "restrict": _cmd_restrict,
    "rgroup": _cmd_rgroup,
    "classify": _cmd_classify,
    "table1": _cmd_table1,
    "verify": _cmd_verify,
}


def run(req: Request):
    """Execute a request; returns (exit_code, payload)."""
    handler = _COMMANDS.get(req.command)
    if handler is None:
        raise UsageError(f"unknown command {req.command!r}")
    if req.command not in ("table1", "verify") and not req.type:
        raise UsageError(f"{req.command} requires --type")
    code, payload = handler(req)
    return code, {"schema": SCHEMA, "command": req.command, **payload}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alcove",
        description="Exact root-datum combinatorics: alcove stabilizers, folding, and stabilizer classification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_type=True):
        if with_type:
            p.add_argument("--type", help="type label such as A3, 2A5, 3D4, E6")
            p.add_argument("--isogeny", choices=("sc", "adjoint"), default="sc")
        p.add_argument("--seed", type=int, default=7)
        p.add_argument("--weyl-cap", type=int, default=None, dest="weyl_cap")
        p.add_argument("--subgroup-cap", type=int, default=64, dest="subgroup_cap")
        p.add_argument("--output", default=None, help="also write the JSON to this path")

    for name in ("datum", "omega", "restrict", "classify"):
        add_common(sub.add_parser(name))
    p_rg = sub.add_parser("rgroup")
    add_common(p_rg)
    p_rg.add_argument("--point", help="c0, face:I, or comma-separated rational coordinates")
    add_common(sub.add_parser("table1"), with_type=False)
    p_v = sub.add_parser("verify")
    p_v.add_argument("suite", choices=("iota", "yu", "compat", "classify", "all"))
    p_v.add_argument("--type", help="restrict the suite to one type label")
    p_v.add_argument("--samples", type=int, default=1000)
    add_common(p_v, with_type=False)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    req = Request(
        command=ns.command,
        type=getattr(ns, "type", None),
        isogeny=getattr(ns, "isogeny", "sc"),
        point=getattr(ns, "point", None),
        suite=getattr(ns, "suite", None),
        samples=getattr(ns, "samples", 1000),
        seed=ns.seed,
        weyl_cap=ns.weyl_cap,
        subgroup_cap=ns.subgroup_cap,
        output=ns.output,
    )
    try:
        code, payload = run(req)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AlcoveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(payload, indent=2)
    print(text)
    if req.output:
        with open(req.output, "w") as fh:
            fh.write(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())

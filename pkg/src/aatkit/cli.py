"""Batch command-line front door.

Loads germs, period groups, systems and branch problems from JSON files
or `catalog:` URIs, dispatches to the verification engines, and writes
deterministic JSON certificates.  Exit codes: 0 = PASS/CLEAN,
1 = FAIL/DIFFERENT, 2 = UNRESOLVED/NOT_FOUND, 3 = input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from gmpy2 import mpq

from . import aat, algdep, branch, catalog, lattice
from .errors import (
    AatkitError,
    AmbiguousSample,
    DegenerateFiber,
    InputError,
    OutsideCell,
)
from .series import GermMap, TruncatedSeries

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_UNRESOLVED = 2
EXIT_INPUT = 3

_SOFT_ERRORS = (AmbiguousSample, DegenerateFiber, OutsideCell)


def _dump(obj, path=None):
    text = json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _catalog_name(ref):
    return ref[len("catalog:"):] if ref.startswith("catalog:") else None


def _load_germ(ref, order=None) -> GermMap:
    name = _catalog_name(ref)
    if name is not None:
        desc = catalog.get_descriptor(name)
        return desc.germ(order + 8 if order else None)
    return GermMap.from_json(_load_json(ref))


def _load_group(ref) -> lattice.PeriodGroup:
    name = _catalog_name(ref)
    if name is not None:
        return catalog.get_descriptor(name).period_group
    return lattice.PeriodGroup.from_json(_load_json(ref))


def _load_system(ref, order=None):
    name = _catalog_name(ref)
    if name is not None:
        sys_ = catalog.get_descriptor(name).rational_system(order)
        if sys_ is None:
            raise InputError(f"catalog entry {name!r} has no rational system")
        return sys_
    return aat.RationalAdditionSystem.from_json(_load_json(ref))


def _parse_alpha(text, field):
    from . import scalars

    rows = json.loads(text)
    if not isinstance(rows, list):
        raise InputError("alpha must be a JSON matrix")
    if rows and not isinstance(rows[0], list):
        rows = [rows]
    return [[scalars.promote(mpq(str(c)), field) for c in row] for row in rows]


# -- command handlers --------------------------------------------------


def _cmd_aat_check(args):
    germ = _load_germ(args.map, args.order)
    cert = aat.check_aat(germ, args.degree, args.order)
    _dump(cert.to_json(), args.out)
    return {
        aat.PASS: EXIT_PASS,
        aat.FAIL: EXIT_FAIL,
    }.get(cert.status, EXIT_UNRESOLVED)


def _cmd_algdep(args):
    doc = _load_json(args.input)
    target = TruncatedSeries.from_json(doc["target"])
    basis = [TruncatedSeries.from_json(s) for s in doc.get("basis", [])]
    verdict = algdep.find_annihilator(
        target, basis, args.degree, args.order, names=doc.get("names")
    )
    _dump(verdict.to_json(), args.out)
    return EXIT_PASS if verdict.dependent else EXIT_UNRESOLVED


def _cmd_verify_system(args):
    sys_ = _load_system(args.system, args.order)
    report = aat.verify_rational_system(sys_, args.order)
    _dump(report.to_json(), args.out)
    return EXIT_PASS if report.clean else EXIT_FAIL


def _cmd_iso_witness(args):
    f = _load_germ(args.f, args.order)
    g = _load_germ(args.g, args.order)
    alpha = _parse_alpha(args.alpha, f.field)
    verdict = aat.isomorphism_witness_check(f, g, alpha, args.degree, args.order)
    _dump(verdict.to_json(), args.out)
    return EXIT_PASS if verdict.status == aat.PASS else EXIT_UNRESOLVED


def _cmd_periods(args):
    group = _load_group(args.group)
    report = group.report()
    code = EXIT_PASS
    if args.scale_into:
        dst = _load_group(args.scale_into)
        n = lattice.smallest_scaling_into(group, dst, args.n_max)
        report["smallest_scaling"] = n if n is not None else "NOT_FOUND"
        if n is None:
            code = EXIT_UNRESOLVED
    if args.index_in:
        sup = _load_group(args.index_in)
        idx = lattice.sublattice_index(group, sup)
        report["sublattice_index"] = idx if isinstance(idx, str) else int(idx)
        if idx == lattice.NOT_CONTAINED:
            code = EXIT_FAIL
    _dump(report, args.out)
    return code


def _cmd_rank_report(args):
    descriptors = []
    for ref in args.groups.split(","):
        name = _catalog_name(ref.strip())
        if name is None:
            raise InputError("rank-report takes catalog: references")
        descriptors.append(catalog.get_descriptor(name))
    _dump(catalog.rank_report(descriptors), args.out)
    return EXIT_PASS


def _cmd_branch(args):
    problem = branch.BranchProblem.from_json(_load_json(args.problem))
    cells = branch.cell_partition(problem)
    out = {
        "kind": "branch_report",
        "problem": problem.to_json(),
        "cells": [c.to_json() for c in cells],
    }
    handle = None
    if args.identify:
        x0, ylo, yhi = (mpq(t) for t in args.identify.split(","))
        handle = branch.identify_branch(problem, cells, (x0, (ylo, yhi)))
        out["branch"] = handle.to_json()
    if args.evaluate:
        parts = args.evaluate.split(",")
        j, x, width = int(parts[0]), mpq(parts[1]), mpq(parts[2])
        if handle is None:
            cell = next(
                (
                    c
                    for c in cells
                    if c.kind == branch.OPEN_INTERVAL
                    and branch._cell_contains(c, x)
                ),
                None,
            )
            if cell is None:
                raise OutsideCell(f"x = {x} lies in no open interval cell")
            handle = branch.BranchHandle(cell=cell, index=j)
        lo, hi = branch.evaluate_branch(problem, handle, x, width)
        out["value"] = [str(lo), str(hi)]
    _dump(out, args.out)
    return EXIT_PASS


def _cmd_period_check(args):
    name = _catalog_name(args.entry)
    if name is None:
        raise InputError("period-check takes a catalog: reference")
    desc = catalog.get_descriptor(name)
    if args.generators:
        vectors = [
            lattice.PeriodVector.from_json(catalog.CATALOG_SYMBOLS, v)
            for v in json.loads(args.generators)
        ]
        group = lattice.PeriodGroup(catalog.CATALOG_SYMBOLS, desc.dim, vectors)
        import dataclasses

        desc = dataclasses.replace(desc, period_group=group)
    report = catalog.numeric_period_check(desc, args.digits, args.samples)
    _dump(report, args.out)
    return EXIT_PASS if report["status"] == "PASS" else EXIT_FAIL


def _cmd_catalog(args):
    if args.name:
        _dump(catalog.get_descriptor(args.name).to_json(), args.out)
    else:
        _dump(catalog.catalog_manifest(), args.out)
    return EXIT_PASS


def _cmd_verify_cert(args):
    doc = _load_json(args.cert)
    kind = doc.get("kind")
    if kind == "aat_certificate":
        cert = aat.AatCertificate.from_json(doc)
        germ = cert.germ
        basis = [aat.embed_block(s, 0) for s in germ.components] + [
            aat.embed_block(s, 1) for s in germ.components
        ]
        clean = True
        reports = []
        for i, verdict in enumerate(cert.component_verdicts):
            if verdict.annihilator is None:
                continue
            target = germ.components[i].block_sum_substitute()
            rep = algdep.verify_annihilator(
                verdict.annihilator, basis + [target], verdict.annihilator.order
            )
            reports.append({"component": i, **rep.to_json()})
            clean = clean and rep.clean
        _dump({"kind": "certificate_verification", "clean": clean,
               "checks": reports}, args.out)
        return EXIT_PASS if clean else EXIT_FAIL
    if kind == "rational_addition_system":
        sys_ = aat.RationalAdditionSystem.from_json(doc)
        order = min(s.order for s in sys_.psi)
        report = aat.verify_rational_system(sys_, order)
        _dump(report.to_json(), args.out)
        return EXIT_PASS if report.clean else EXIT_FAIL
    raise InputError(f"cannot verify a document of kind {kind!r}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="aatkit",
        description="Exact certification of algebraic addition theorems, "
        "period-group invariants and real algebraic branches.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(handler=handler)
        p.add_argument("--out", help="output JSON path (default stdout)")
        return p

    p = add("aat-check", _cmd_aat_check, help="certify an addition theorem")
    p.add_argument("--map", required=True, help="germ JSON path or catalog:NAME")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--order", type=int, required=True)

    p = add("algdep", _cmd_algdep, help="search an annihilating polynomial")
    p.add_argument("--input", required=True,
                   help="JSON with 'target', 'basis', optional 'names'")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--order", type=int, required=True)

    p = add("verify-system", _cmd_verify_system,
            help="check a rational addition system")
    p.add_argument("--system", required=True)
    p.add_argument("--order", type=int, required=True)

    p = add("iso-witness", _cmd_iso_witness,
            help="check a linear isomorphism witness")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--alpha", required=True, help="JSON matrix of rationals")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--order", type=int, required=True)

    p = add("periods", _cmd_periods, help="period-group invariants")
    p.add_argument("--group", required=True)
    p.add_argument("--scale-into", help="target group for smallest N scaling")
    p.add_argument("--n-max", type=int, default=64)
    p.add_argument("--index-in", help="supergroup for the sublattice index")

    p = add("rank-report", _cmd_rank_report, help="tabulate rank invariants")
    p.add_argument("--groups", required=True,
                   help="comma-separated catalog: references")

    p = add("branch", _cmd_branch, help="resolve real algebraic branches")
    p.add_argument("--problem", required=True)
    p.add_argument("--identify", help="x,ylo,yhi sample enclosure")
    p.add_argument("--evaluate", help="j,x,width branch evaluation")

    p = add("period-check", _cmd_period_check,
            help="numeric cross-check of declared periods")
    p.add_argument("--entry", required=True)
    p.add_argument("--digits", type=int, default=50)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--generators", help="JSON list of period vectors")

    p = add("catalog", _cmd_catalog, help="list or show catalog entries")
    p.add_argument("--name")

    p = add("verify-cert", _cmd_verify_cert, help="re-verify a certificate")
    p.add_argument("--cert", required=True)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _SOFT_ERRORS as exc:
        _dump({"error": type(exc).__name__, "message": str(exc)})
        return EXIT_UNRESOLVED
    except (AatkitError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        sys.stderr.write(
            json.dumps(
                {"error": type(exc).__name__, "message": str(exc)},
                sort_keys=True,
            )
            + "\n"
        )
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

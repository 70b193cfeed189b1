"""Command-line front end.

Subcommands: validate, cohomology, lefschetz, ddelta, equivariant,
frobenius, report.  Models come from a named builder (--builder) or a
JSON model file (--model).  Output is text or JSON (--format); the text
rendering is a pure function of the JSON report.  Exit codes: 0 all
checks pass, 1 a mathematical verdict fails, 2 input or usage error.
Everything is exact and deterministic; reports are byte-identical
across runs except for the timing block.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import __version__
from .foliation import (BUILDERS, FoliationError, build, load_model,
                        model_to_dict, reeb_action, rotation_action,
                        trivial_action, validate_model)
from .gca import ParseError, Report

SCHEMA = "transym-report/1"


def _load(args):
    if getattr(args, "model", None):
        return load_model(args.model)
    if getattr(args, "builder", None):
        return build(args.builder)
    raise FoliationError("one of --builder or --model is required")


def _model_hash(model) -> str:
    payload = json.dumps(model_to_dict(model), sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()


def _report_skeleton(args, model) -> dict:
    return {
        "schema": SCHEMA,
        "tool": "transym",
        "version": __version__,
        "command": args.command,
        "model": {"name": model.name, "hash": _model_hash(model)},
        "checks": [],
        "passed": True,
    }


def _merge_report(out: dict, rep: Report) -> None:
    for c in rep.results:
        entry = {"name": f"{rep.title}: {c.name}", "passed": c.passed}
        if c.witness:
            entry["witness"] = str(c.witness)
        out["checks"].append(entry)
    for n in rep.notes:
        out["checks"].append({"name": f"{rep.title}: note", "note": n,
                              "passed": True})
    if not rep.passed:
        out["passed"] = False


def _emit(out: dict, args) -> int:
    out["timing"] = {"seconds": round(time.time() - args._t0, 3)}
    if args.format == "json":
        print(json.dumps(out, sort_keys=True, indent=2))
    else:
        print(f"transym {out['version']} — {out['command']} — "
              f"model {out['model']['name']}")
        for c in out["checks"]:
            if "note" in c:
                print(f"  [note] {c['name']}: {c['note']}")
                continue
            mark = "PASS" if c["passed"] else "FAIL"
            line = f"  [{mark}] {c['name']}"
            if c.get("witness"):
                line += f" — {c['witness']}"
            print(line)
        for key in ("dimensions", "potential"):
            if key in out:
                print(f"  {key}: {json.dumps(out[key], sort_keys=True)}")
        print(f"  result: {'PASS' if out['passed'] else 'FAIL'}")
    return 0 if out["passed"] else 1


def cmd_validate(args) -> int:
    model = _load(args)
    out = _report_skeleton(args, model)
    _merge_report(out, validate_model(model))
    return _emit(out, args)


def cmd_cohomology(args) -> int:
    from .hodge import basic_cohomology
    model = _load(args)
    out = _report_skeleton(args, model)
    coh = basic_cohomology(model)
    dims = {str(k): coh.dim(k) for k in sorted(coh.space.degrees)
            if coh.space.dim(k) or coh.dim(k)}
    if args.degree is not None:
        dims = {str(args.degree): coh.dim(args.degree)
                if coh.space.has_degree(args.degree) else 0}
    out["dimensions"] = dims
    out["checks"].append({"name": "cohomology computed", "passed": True})
    return _emit(out, args)


def cmd_lefschetz(args) -> int:
    from .hodge import basic_cohomology, build_sl2, hard_lefschetz_check
    model = _load(args)
    out = _report_skeleton(args, model)
    pkg = build_sl2(model)
    coh = basic_cohomology(model)
    result = hard_lefschetz_check(pkg, coh)
    for k in sorted(result):
        ok, wit = result[k]
        entry = {"name": f"hard Lefschetz: L^{k} on degree {pkg.n - k}",
                 "passed": ok}
        if wit:
            entry["witness"] = str(wit)
        out["checks"].append(entry)
        if not ok:
            out["passed"] = False
    return _emit(out, args)


def cmd_ddelta(args) -> int:
    from .hodge import build_sl2, ddelta_check
    model = _load(args)
    out = _report_skeleton(args, model)
    pkg = build_sl2(model)
    result = ddelta_check(pkg)
    for k in sorted(result):
        spaces = result[k]["spaces"]
        dims = {n: s.dim for n, s in spaces.items()}
        for (n1, n2), (eq, wit) in sorted(result[k]["pairs"].items()):
            entry = {"name": f"degree {k}: {n1} = {n2}", "passed": eq}
            if wit:
                entry["witness"] = str(wit)
            out["checks"].append(entry)
            if not eq:
                out["passed"] = False
        out["checks"].append({"name": f"degree {k}: dimensions",
                              "note": json.dumps(dims, sort_keys=True),
                              "passed": True})
    return _emit(out, args)


def _make_action(args, model):
    kind = args.action
    if kind == "trivial":
        return trivial_action(model, rank=args.rank)
    if kind == "reeb":
        return reeb_action(model)
    if kind == "rotation":
        return rotation_action(model)
    raise FoliationError(f"unknown action {kind!r}")


def cmd_equivariant(args) -> int:
    from .cartan import (build_cartan, canonical_section,
                         dG_delta_lemma_check, equivariant_cohomology,
                         formality_check, section_is_dG_closed,
                         section_projects_to_identity,
                         verify_cartan, verify_iota_exactness)
    from .hodge import basic_cohomology, harmonic_representative
    model = _load(args)
    action = _make_action(args, model)
    out = _report_skeleton(args, model)
    out["model"]["action"] = args.action
    cx = build_cartan(action, args.cutoff)
    _merge_report(out, verify_cartan(cx))
    checks = args.check or ["formality"]
    if "formality" in checks:
        _merge_report(out, formality_check(cx))
        out["dimensions"] = {
            str(k): equivariant_cohomology(cx, k)[0]
            for k in range(cx.safe_window + 1)}
    if "dgdelta" in checks:
        _merge_report(out, dG_delta_lemma_check(cx))
    if "iota" in checks:
        for a in range(action.rank):
            _merge_report(out, verify_iota_exactness(cx, a))
    if "section" in checks:
        coh = basic_cohomology(model)
        ok_all = True
        for k in sorted(coh.space.degrees):
            if k > cx.safe_window:
                continue
            for v in coh.reps(k):
                cls = model.basic.element_from_vector(k, v)
                harm, _ = harmonic_representative(cx.pkg, cls)
                parts, _ = canonical_section(cx, harm)
                ok = section_projects_to_identity(cx, parts, harm) and \
                    section_is_dG_closed(cx, parts, k)
                ok_all = ok_all and ok
                out["checks"].append(
                    {"name": f"canonical section: degree {k}",
                     "passed": ok})
        if not ok_all:
            out["passed"] = False
    return _emit(out, args)


def cmd_frobenius(args) -> int:
    from .dgbv import basic_dgbv, frobenius_potential, wdvv_check
    model = _load(args)
    out = _report_skeleton(args, model)
    data = basic_dgbv(model)
    pot = frobenius_potential(data, args.order)
    out["checks"].append({"name": "potential constructed",
                          "passed": True})
    _merge_report(out, wdvv_check(pot, args.order))
    out["potential"] = pot.to_dict()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(pot.to_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")
        out["checks"].append({"name": f"written to {args.out}",
                              "passed": True})
    return _emit(out, args)


def cmd_report(args) -> int:
    from .hodge import (basic_cohomology, build_sl2, ddelta_all_equal,
                        ddelta_check, hard_lefschetz_check,
                        lefschetz_passes, verify_sl2)
    model = _load(args)
    out = _report_skeleton(args, model)
    _merge_report(out, validate_model(model))
    coh = basic_cohomology(model)
    out["dimensions"] = {str(k): coh.dim(k)
                         for k in sorted(coh.space.degrees)}
    try:
        pkg = build_sl2(model)
    except Exception as exc:  # no transverse symplectic sl(2) data
        out["checks"].append({"name": "sl2 package",
                              "passed": False, "witness": str(exc)})
        out["passed"] = False
        return _emit(out, args)
    _merge_report(out, verify_sl2(pkg))
    hl = lefschetz_passes(hard_lefschetz_check(pkg, coh))
    dd = ddelta_all_equal(ddelta_check(pkg))
    out["checks"].append({"name": "hard Lefschetz", "passed": hl})
    out["checks"].append({"name": "d-delta lemma subspace equalities",
                          "passed": dd})
    if not (hl and dd):
        out["passed"] = False
    return _emit(out, args)


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="transym",
        description="Exact workbench for transversely symplectic "
                    "foliation models")
    p.add_argument("--version", action="version",
                   version=f"transym {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--builder", choices=sorted(BUILDERS) + [
            f"trunc_linear_{n}_{D}" for n in (1, 2) for D in (2, 3, 4)],
            help="named example model")
        sp.add_argument("--model", help="JSON model file")
        sp.add_argument("--format", choices=("text", "json"),
                        default="text")

    sp = sub.add_parser("validate", help="model well-formedness and "
                        "foliation axioms")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("cohomology", help="basic cohomology dimensions")
    common(sp)
    sp.add_argument("--degree", type=int, default=None)
    sp.set_defaults(func=cmd_cohomology)

    sp = sub.add_parser("lefschetz", help="transverse hard Lefschetz")
    common(sp)
    sp.set_defaults(func=cmd_lefschetz)

    sp = sub.add_parser("ddelta", help="d-delta lemma subspace "
                        "comparisons")
    common(sp)
    sp.set_defaults(func=cmd_ddelta)

    sp = sub.add_parser("equivariant", help="truncated Cartan model "
                        "checks")
    common(sp)
    sp.add_argument("--cutoff", type=int, required=True,
                    help="polynomial truncation degree D")
    sp.add_argument("--check", action="append",
                    choices=("formality", "dgdelta", "iota", "section"))
    sp.add_argument("--action", choices=("trivial", "reeb", "rotation"),
                    default="trivial")
    sp.add_argument("--rank", type=int, default=1,
                    help="rank of the trivial action")
    sp.set_defaults(func=cmd_equivariant)

    sp = sub.add_parser("frobenius", help="formal Frobenius potential "
                        "with WDVV checks")
    common(sp)
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--out", help="write the potential as JSON")
    sp.set_defaults(func=cmd_frobenius)

    sp = sub.add_parser("report", help="full report")
    common(sp)
    sp.add_argument("--all", action="store_true",
                    help="include every check (default)")
    sp.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code or 0)
    args._t0 = time.time()
    try:
        return args.func(args)
    except (FoliationError, ParseError, OSError, ValueError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        mod = type(exc).__module__
        if mod.startswith("transym"):
            print(f"error: {exc}", file=sys.stderr)
            return 2
        raise


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: manifest in, check reports out.

Exit codes: 0 when every emitted check passes, 1 when any fails, 2 for
usage or manifest problems.  Given identical inputs (manifest, seed,
options) the JSON output is byte-identical across runs.
"""

import argparse
import sys

from .exprs import ExprError
from .fields import ChartError
from .manifest import ManifestError, from_builtin, load_manifest
from .reports import all_passed, report_json, report_text
from .suites import (SuiteOptions, SuiteUsageError, deform_reports,
                     flow_reports, run_suite, warp_ode_reports)

_SUITE_VERBS = {
    "validate": "structure",
    "curvature": "curvature",
    "identities": "contact-identities",
    "nullity": "nullity",
    "soliton": "soliton",
    "section4": "section4",
}


def _common_flags(p):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--manifest", metavar="PATH",
                     help="TOML manifest describing the structure")
    src.add_argument("--builtin", metavar="NAME",
                     help="registry structure name")
    p.add_argument("--probes", type=int, metavar="N",
                   help="probe count (default from manifest, else 64)")
    p.add_argument("--seed", type=int, metavar="S",
                   help="probe-grid seed")
    p.add_argument("--tol", type=float, metavar="T",
                   help="tolerance override for every check")
    p.add_argument("--format", choices=("text", "json"), default="text",
                   help="report format (default text)")
    p.add_argument("--out", metavar="PATH",
                   help="write the report here instead of stdout")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="contactgeo",
        description="Check suites for contact structures on "
                    "3-dimensional Riemannian charts.")
    sub = ap.add_subparsers(dest="verb", required=True)

    for verb, blurb in (
            ("validate", "structure-tensor consistency checks"),
            ("curvature", "curvature-tensor identity checks"),
            ("identities", "the full contact identity battery"),
            ("nullity", "xi-nullity fit and its consistency checks"),
            ("soliton", "soliton residual at fixed or fitted lambda"),
            ("deform", "gauge deformation toward the unit-slope form"),
            ("warp-ode", "warp-profile integration checks"),
            ("flow", "conformal Einstein-family flow checks"),
            ("section4", "scripted deformation pipeline end to end")):
        p = sub.add_parser(verb, help=blurb)
        _common_flags(p)
        if verb == "soliton":
            p.add_argument("--v", metavar="EX,EY,ET",
                           help="drift field components (default 0)")
            lam = p.add_mutually_exclusive_group()
            lam.add_argument("--lambda", dest="lam", type=float, metavar="L")
            lam.add_argument("--solve-lambda", action="store_true")
            p.add_argument("--rho", type=float, default=0.0)
        elif verb == "deform":
            p.add_argument("--beta", metavar="EXPR",
                           help="slope profile in t (default: fitted)")
            p.add_argument("--step", type=float, default=1e-2,
                           help="gauge quadrature step")
        elif verb == "warp-ode":
            p.add_argument("--kn", type=float, default=-1.0,
                           help="fiber curvature (default -1)")
            p.add_argument("--gamma0", type=float, default=1.0)
            p.add_argument("--dgamma0", type=float, default=0.0)
            p.add_argument("--t-max", type=float, default=2.0)
            p.add_argument("--step", type=float, default=1e-3)
        elif verb == "flow":
            p.add_argument("--kappa", type=float, required=True,
                           help="Einstein constant of the base metric")
            p.add_argument("--rho", type=float, default=0.0)
            p.add_argument("--c0", type=float, default=1.0)
            p.add_argument("--horizon", type=float, default=1.0)
            p.add_argument("--step", type=float, default=1e-3)
    return ap


def _resolve_manifest(args):
    if args.manifest:
        return load_manifest(args.manifest)
    if args.builtin:
        return from_builtin(args.builtin)
    raise SuiteUsageError(
        f"{args.verb} needs --manifest PATH or --builtin NAME")


def _parse_v(text):
    if text is None:
        return None
    parts = [s.strip() for s in text.split(",")]
    if parts == ["0"]:
        return None
    if len(parts) != 3:
        raise SuiteUsageError(
            f"--v wants three comma-separated components, got {text!r}")
    return tuple(parts)


def _options(args):
    return SuiteOptions(
        probe_count=args.probes,
        seed=args.seed,
        tol=args.tol,
        v_exprs=_parse_v(getattr(args, "v", None)),
        lam=getattr(args, "lam", None),
        solve=getattr(args, "solve_lambda", False),
        rho=getattr(args, "rho", 0.0),
        beta=getattr(args, "beta", None),
        step=getattr(args, "step", 1e-3),
    )


def _emit(reports, args):
    reports = sorted(reports, key=lambda r: r.check_name)
    body = report_json(reports) if args.format == "json" \
        else report_text(reports)
    if not body.endswith("\n"):
        body += "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)
    return 0 if all_passed(reports) else 1


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        opts = _options(args)
        if args.verb == "flow":
            reports = flow_reports(args.kappa, args.rho, args.c0,
                                   args.horizon, args.step, tol=args.tol)
        elif args.verb == "warp-ode":
            reports = warp_ode_reports(args.kn, args.gamma0, args.dgamma0,
                                       args.t_max, args.step, tol=args.tol)
        elif args.verb == "deform":
            reports = deform_reports(_resolve_manifest(args), opts)
        elif args.verb == "section4":
            reports = run_suite(None, "section4", opts)
        else:
            man = _resolve_manifest(args)
            reports = run_suite(man, _SUITE_VERBS[args.verb], opts)
    except (ManifestError, SuiteUsageError, ChartError, ExprError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return _emit(reports, args)


if __name__ == "__main__":
    raise SystemExit(main())

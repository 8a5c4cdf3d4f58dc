"""Command line front end: ``hotspots solve|case|verify|bounds|list``.

The thread count of the numerical libraries follows ``HOTSPOTS_THREADS``.
"""

from __future__ import annotations

import argparse
import os
import sys
from contextlib import nullcontext
from pathlib import Path

from threadpoolctl import threadpool_limits

from . import __version__
from .bounds import evaluate_bounds
from .geometry import DomainSpec, summarize
from .registry import CaseError, case_names, dumps, load_manifest, parse_value, resolve, run_case, verify_all
from .svg import render_svg

THREADS_ENV = "HOTSPOTS_THREADS"


def _params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise SystemExit(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = parse_value(v.strip())
    return out


def _print_report(rep, stream=None) -> None:
    stream = stream or sys.stdout
    print(f"case       {rep.case}", file=stream)
    print(f"anchor     {rep.anchor}", file=stream)
    for lab, v, e in zip(rep.eigen["labels"], rep.eigen["values"], rep.eigen["rel_error"]):
        err = "n/a" if e is None else f"{e:.2e}"
        print(f"{lab:10s} {v:.10g}  (rel. error est. {err})", file=stream)
    print(f"critical   {rep.verdict} ({len(rep.critical_points['candidates'])} candidates)", file=stream)
    for v in rep.bounds["verdicts"]:
        if v["verdict"] != "NOT_APPLICABLE":
            print(f"bound      {v['name']:22s} {v['verdict']}", file=stream)
    for c in rep.checks:
        print(f"check      {c['label']:34s} {'PASS' if c['passed'] else 'FAIL'}", file=stream)
    print(f"wall time  {rep.wall_time:.2f} s", file=stream)


def _run(target, args) -> int:
    try:
        rep = run_case(target, _params(args.param))
    except (CaseError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        rep.save(args.out)
    if args.svg:
        Path(args.svg).write_text(render_svg(rep))
    if args.json:
        sys.stdout.write(rep.dumps())
    else:
        _print_report(rep)
    return 0 if rep.passed else 1


def cmd_solve(args) -> int:
    return _run(args.spec, args)


def cmd_case(args) -> int:
    return _run(args.name, args)


def cmd_verify(args) -> int:
    manifest = load_manifest(args.manifest) if args.manifest else None
    res = verify_all(args.profile, tau=args.tau, cases=args.case or None, manifest=manifest, jobs=args.jobs)
    print(res.table())
    return 0 if res.ok else 1


def cmd_bounds(args) -> int:
    spec = DomainSpec.load(args.spec)
    summary = summarize(spec, ball=args.ball, checks=True)
    br = evaluate_bounds(summary, args.lambda1, args.est_error, args.mu2)
    sys.stdout.write(dumps({"spec": spec.name, "summary": summary.to_json(), "bounds": br.to_json()}))
    return 0 if all(v.verdict != "VIOLATED" for v in br.verdicts) else 1


def cmd_list(args) -> int:
    manifest = load_manifest(args.manifest) if args.manifest else None
    for name in case_names(manifest):
        d = resolve(name, manifest)
        print(f"{name:22s} {d.get('profile', 'fast'):5s} {d.get('anchor', '')}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hotspots", description="Mixed Dirichlet-Neumann Laplace eigenvalue lab.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def run_opts(sp):
        sp.add_argument("--param", action="append", metavar="K=V", help="shape parameter or h/levels/k/field/tau/delta_factor")
        sp.add_argument("--out", metavar="REPORT.json", help="write the JSON report")
        sp.add_argument("--svg", metavar="OUT.svg", help="write the figure")
        sp.add_argument("--json", action="store_true", help="print the JSON report instead of the summary")

    sp = sub.add_parser("solve", help="run the pipeline on a domain JSON file")
    sp.add_argument("spec")
    run_opts(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("case", help="run a registered case or a shape constructor")
    sp.add_argument("name")
    run_opts(sp)
    sp.set_defaults(func=cmd_case)

    sp = sub.add_parser("verify", help="run the registry and print a pass/fail table")
    sp.add_argument("--profile", choices=("fast", "full"), default="fast")
    sp.add_argument("--tau", type=float, help="override the critical-point threshold")
    sp.add_argument("--case", action="append", help="restrict to these cases")
    sp.add_argument("--jobs", type=int, default=1, help="cases run concurrently")
    sp.add_argument("--manifest", help="alternative manifest file")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("bounds", help="closed-form bounds for a domain JSON file")
    sp.add_argument("spec")
    sp.add_argument("--lambda1", type=float, help="eigenvalue to compare with the bounds")
    sp.add_argument("--mu2", type=float, help="second Neumann eigenvalue for the Kroger bound")
    sp.add_argument("--est-error", type=float, default=0.0, help="absolute error of the eigenvalue")
    sp.add_argument("--ball", type=float, nargs=3, metavar=("CX", "CY", "R1"), help="ball containing D")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("list", help="list registered cases")
    sp.add_argument("--manifest", help="alternative manifest file")
    sp.set_defaults(func=cmd_list)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    threads = os.environ.get(THREADS_ENV)
    limit = threadpool_limits(int(threads)) if threads else nullcontext()
    with limit:
        return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

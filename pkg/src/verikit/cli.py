"""Command-line entry point: ``verikit <command> ...``.

Exit codes: 0 everything passed, 1 a check failed (or the input was rejected),
2 a budget cut the run short.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import VerikitError
from .polyalg import AlgebraicContext, Poly, branch_data
from .ramification import braid_orbit, genus, read_jsonl, write_jsonl
from .suites import SUITES, SuiteConfig, run_suite
from .tuple_search import SearchSpec, search


def _cmd_verify(args) -> int:
    suites = SUITES if args.suite == "all" else (args.suite,)
    config = SuiteConfig(jobs=args.jobs, budget_seconds=args.budget, data_dir=args.data_dir)
    reports = []
    for sid in suites:
        rep = run_suite(sid, config)
        reports.append(rep)
        c = rep.counts()
        print(f"{sid}: {c['pass']} pass, {c['fail']} fail, {c['skipped']} skipped"
              f"{' (truncated)' if rep.truncated else ''} in {rep.wall_time:.1f}s")
        for r in rep.failed:
            print(f"  FAIL {r.ref} {json.dumps(r.inputs, sort_keys=True)}")
    if args.out:
        payload = [r.to_json(with_timing=not args.deterministic) for r in reports]
        with open(args.out, "w") as fh:
            json.dump(payload[0] if len(payload) == 1 else payload, fh, indent=1, sort_keys=True)
            fh.write("\n")
    codes = {r.exit_code() for r in reports}
    return 1 if 1 in codes else (2 if 2 in codes else 0)


def _cmd_genus(args) -> int:
    for t in read_jsonl(args.tuplefile):
        print(json.dumps({"degree": t.degree, "type": str(t.ramification_type()), "genus": genus(t)}))
    return 0


def _cmd_braid_orbit(args) -> int:
    for t in read_jsonl(args.tuplefile):
        orbit = sorted(braid_orbit(t, budget=args.budget), key=lambda u: u.entries)
        print(json.dumps({"degree": t.degree, "r": t.r, "orbit_size": len(orbit)}))
        if args.out:
            write_jsonl(args.out, orbit)
    return 0


def _cmd_search(args) -> int:
    with open(args.spec) as fh:
        spec = SearchSpec.from_json(json.load(fh))
    res = search(spec, jobs=args.jobs)
    extra = []
    for k in range(len(res.tuples)):
        g = next(i for i, rec in enumerate(res.groups) if k in rec.witnesses)
        extra.append({"group": g, "order": res.groups[g].order})
    write_jsonl(args.out, res.tuples, extra)
    summary = {"tuples": len(res.tuples), "groups": len(res.groups), "exhaustive": res.exhaustive,
               "stats": res.stats}
    print(json.dumps(summary))
    return 0 if res.exhaustive else 2


def _cmd_branch_data(args) -> int:
    ctx = AlgebraicContext.parse(args.context) if args.context else None
    f = Poly.parse(args.poly, ctx)
    print(json.dumps([d.to_json() for d in branch_data(f)], indent=1))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="verikit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, choices=SUITES + ("all",))
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--budget", type=float, default=None, help="wall-clock seconds per suite")
    v.add_argument("--out", help="write the JSON report here")
    v.add_argument("--data-dir", default=None, help="override the shipped data directory")
    v.add_argument("--deterministic", action="store_true", help="omit timing and environment from --out")
    v.set_defaults(func=_cmd_verify)

    g = sub.add_parser("genus", help="genus of each tuple in a JSONL file")
    g.add_argument("tuplefile")
    g.set_defaults(func=_cmd_genus)

    b = sub.add_parser("braid-orbit", help="braid orbit (up to conjugacy) of each tuple")
    b.add_argument("tuplefile")
    b.add_argument("--out", help="write the orbit of the last tuple as JSONL")
    b.add_argument("--budget", type=int, default=2_000_000)
    b.set_defaults(func=_cmd_braid_orbit)

    s = sub.add_parser("search-tuples", help="lifting search from a JSON spec")
    s.add_argument("--spec", required=True)
    s.add_argument("--out", default="results.jsonl")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=_cmd_search)

    p = sub.add_parser("branch-data", help="finite and infinite branch data of a polynomial")
    p.add_argument("poly", help='e.g. "X^3*(X-1)"')
    p.add_argument("--context", help="minimal polynomial of the coefficient field generator")
    p.set_defaults(func=_cmd_branch_data)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except VerikitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

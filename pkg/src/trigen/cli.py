"""Command-line front end.

Exit codes: 0 success, 1 a checked property failed, 2 invalid arguments,
3 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import subprocess
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from pathlib import Path

from . import __version__
from .matsp import ResourceError

SCHEMA = "v1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


@lru_cache(maxsize=None)
def version_string() -> str:
    here = Path(__file__).resolve().parent
    try:
        out = subprocess.run(["git", "describe", "--always", "--dirty"], cwd=here,
                             capture_output=True, text=True, timeout=5)
        if out.returncode == 0 and out.stdout.strip():
            return f"{__version__}+g{out.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


def _triple(s: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(x) for x in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a,b,c got {s!r}")
    if len(parts) != 3 or min(parts) < 1:
        raise argparse.ArgumentTypeError(f"expected three positive integers, got {s!r}")
    return parts


def _intlist(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {s!r}")


class Output:
    """Collects a result and renders it as plain text, JSON or CSV with a seed header."""

    def __init__(self, args):
        self.fmt = args.format
        self.command = args.command
        self.seed = args.seed

    def emit(self, result: dict, text_lines: list[str], rows: list[list] | None = None):
        if self.fmt == "json":
            doc = {"schema": SCHEMA, "version": version_string(), "command": self.command,
                   "seed": self.seed, "result": result}
            print(json.dumps(doc, sort_keys=True, indent=2))
            return
        if self.fmt == "csv" and rows is not None:
            buf = io.StringIO()
            csv.writer(buf, lineterminator="\n").writerows(rows)
            print(f"# trigen {version_string()} seed={self.seed}")
            sys.stdout.write(buf.getvalue())
            return
        print(f"# trigen {version_string()} seed={self.seed}")
        for line in text_lines:
            print(line)


# -- subcommands ------------------------------------------------------------------------

def cmd_classify(args) -> int:
    from . import rigidity as R
    t = R.Triple.of(args.triple)
    if not t.hyperbolic:
        raise ValueError(f"triple {t} is not hyperbolic (1/a + 1/b + 1/c >= 1)")
    group = R.GroupDescriptor(args.family, args.rank, args.isogeny, args.p)
    out = {"group": group.name, "isogeny": group.isogeny, "p": group.p, "triple": list(t.as_tuple()),
           "coxeter_h": group.coxeter_h, "dim": group.dim, "cartan_det": group.cartan_det,
           "excluded_primes": R.excluded_primes(group, t)}
    lines = [f"group {group.name} ({group.isogeny}), triple {t}"]
    if group.family == "A" and group.isogeny == R.ADJOINT:
        v = R.classify_adjoint_A(args.rank, t)
        out.update(verdict=v.verdict, S=v.S, D=v.D, d_u={str(k): d for k, d in v.du.items()})
        lines.append("d_u: " + ", ".join(f"d_{k} = {d}" for k, d in v.du.items()))
        lines.append(f"S = {v.S}, dim = {group.dim}, D = {v.D}")
        verdict = v.verdict
    else:
        verdict, row = R.table_lookup_row(group, t)
        out.update(verdict=verdict, row=row.provenance if row else None)
        if row:
            lines.append(f"matched {row.provenance}")
    lines.append(f"verdict: {verdict}")
    lines.append("primes dividing abcd: " + " ".join(map(str, out["excluded_primes"])))
    Output(args).emit(out, lines)
    return EXIT_OK


def cmd_tables(args) -> int:
    from .rigidity import table_rows
    rows = table_rows(args.which)
    header = ["table", "group", "p", "verdict", "triples"]
    data = [[r.table, f"{r.family}{r.rank}", r.pcond, r.verdict, r.text] for r in rows]
    result = {"table": args.which, "rows": [dict(zip(header, d)) for d in data]}
    if args.csv:
        args.format = "csv"
    Output(args).emit(result, [" | ".join(map(str, d)) for d in data], [header] + data)
    return EXIT_OK


def cmd_cyclo(args) -> int:
    from .cyclo import delta, theta
    f = (theta if args.which == "theta" else delta)(args.c)
    s = str(f)
    Output(args).emit({"which": args.which, "c": args.c, "poly": s, "coeffs": f.to_json()}, [s])
    return EXIT_OK


def cmd_certificate(args) -> int:
    from .certificate import build_certificate, psp_bound
    if args.psp:
        bound = psp_bound(args.p, args.c, seed=args.seed)
        Output(args).emit({"p": args.p, "c": args.c, "psp_bound": bound},
                          [f"PSp_4({args.p}^r) (3,3,{args.c})-generated only for r <= {bound}"])
        return EXIT_OK
    cert = build_certificate(args.p, args.c, seed=args.seed, max_degree=args.max_degree)
    lines = [f"p = {cert.p}, c = {cert.c}: {len(cert.points)} points",
             "candidate r: " + " ".join(map(str, cert.candidate_rs)),
             f"max r: {cert.max_r}"]
    Output(args).emit(cert.to_json(), lines)
    return EXIT_OK


def cmd_census(args) -> int:
    from .census import find_abc_pair
    a, b, c = args.triple
    res = find_abc_pair(args.q, a, b, c, seed=args.seed, exhaustive=args.exhaustive or None,
                        max_samples=args.samples)
    out = {"q": args.q, "triple": [a, b, c], "found": res.found, "exhaustive": res.exhaustive,
           "tried": res.tried, "witness": res.witness_json(), "notes": res.notes}
    mode = "exhaustive" if res.exhaustive else "sampled"
    lines = [f"Sp_4({args.q}) ({a},{b},{c}): {'generated' if res.found else 'none'} ({mode}, {res.tried} pairs)"]
    if res.found:
        lines.append("g1 = " + json.dumps(res.g1.to_json()))
        lines.append("g2 = " + json.dumps(res.g2.to_json()))
    lines += res.notes
    Output(args).emit(out, lines)
    return EXIT_OK


def _run_suite(job):
    from . import campaigns as C
    suite, q, samples, seed = job
    if suite == "procesi":
        return C.procesi_campaign(q, samples, seed).to_json()
    if suite == "procesi-rational":
        return C.procesi_rational_campaign(samples, seed).to_json()
    if suite == "reduce":
        return C.reduction_campaign(q, samples, seed=seed).to_json()
    if suite == "rho":
        return C.charfield_campaign(q, samples, seed).to_json()
    if suite == "cyclo":
        return C.annihilation_campaign(q, samples=samples, seed=seed).to_json()
    raise ValueError(f"unknown suite {suite}")


SUITES = ("procesi", "procesi-rational", "reduce", "rho", "cyclo")


def cmd_verify(args) -> int:
    suites = SUITES if args.suite == "all" else (args.suite,)
    jobs = [(s, args.p, args.samples, args.seed) for s in suites]
    if args.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(_run_suite, jobs))
    else:
        results = [_run_suite(j) for j in jobs]
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r['ok'] else 'FAIL'} {r['name']}: {r['samples']} samples, "
                     f"{r['failures']} failures")
        for w in r["witnesses"]:
            lines.append("  witness " + json.dumps(w, sort_keys=True))
    Output(args).emit({"suites": results}, lines)
    return EXIT_OK if all(r["ok"] for r in results) else EXIT_FAIL


def cmd_classdim(args) -> int:
    from .rigidity import class_dim_semisimple, class_dim_unipotent
    if args.jordan is not None:
        kind, parts, d = "unipotent", args.jordan, class_dim_unipotent(args.n, args.jordan)
    else:
        kind, parts, d = "semisimple", args.mults, class_dim_semisimple(args.n, args.mults)
    Output(args).emit({"n": args.n, "kind": kind, "partition": parts, "dim": d},
                      [f"{kind} class in SL_{args.n} with {parts}: dimension {d}"])
    return EXIT_OK


# -- parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (RIGIDITY_SEED overrides)")
    common.add_argument("--format", choices=("plain", "json", "csv"), default="plain")
    common.add_argument("--json", dest="format", action="store_const", const="json")
    common.add_argument("--threads", type=int, default=1)

    p = argparse.ArgumentParser(prog="trigen", description="Triangle-group generation toolkit")
    p.add_argument("--version", action="version", version=version_string())
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common], help="rigidity verdict for a triple")
    s.add_argument("--family", default="A", choices=list("ABCDEFG"))
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--isogeny", default="adjoint", choices=("adjoint", "simply_connected", "other"))
    s.add_argument("--p", type=int, default=None, help="characteristic (when the tables depend on it)")
    s.add_argument("--triple", type=_triple, required=True)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("tables", parents=[common], help="dump the tabulated classification")
    s.add_argument("--which", type=int, choices=(1, 3, 4), required=True)
    s.add_argument("--csv", action="store_true")
    s.set_defaults(func=cmd_tables)

    s = sub.add_parser("cyclo", parents=[common], help="constraint polynomials theta_c, delta_c")
    s.add_argument("which", choices=("theta", "delta"))
    s.add_argument("--c", type=int, required=True)
    s.set_defaults(func=cmd_cyclo)

    s = sub.add_parser("certificate", parents=[common], help="candidate r for Sp_4(p^r)")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--c", type=int, required=True)
    s.add_argument("--psp", action="store_true", help="bound for PSp_4 instead")
    s.add_argument("--max-degree", type=int, default=48)
    s.set_defaults(func=cmd_certificate)

    s = sub.add_parser("census", parents=[common], help="search Sp_4(q) for an (a,b,c) pair")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--triple", type=_triple, required=True)
    s.add_argument("--exhaustive", action="store_true")
    s.add_argument("--samples", type=int, default=3000)
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("verify", parents=[common], help="identity and relation campaigns")
    s.add_argument("--suite", choices=SUITES + ("all",), default="all")
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--p", type=int, default=101, help="field order q for the campaign")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("classdim", parents=[common], help="conjugacy class dimension in SL_n")
    s.add_argument("--n", type=int, required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--jordan", type=_intlist)
    g.add_argument("--mults", type=_intlist)
    s.set_defaults(func=cmd_classdim)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    env_seed = os.environ.get("RIGIDITY_SEED")
    if env_seed is not None:
        try:
            args.seed = int(env_seed)
        except ValueError:
            parser.error(f"RIGIDITY_SEED must be an integer, got {env_seed!r}")
    if args.threads < 1:
        parser.error("--threads must be positive")
    try:
        return args.func(args)
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, NotImplementedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry point: ``winnowcover {run,sweep,verify,gen,bound}``.

Exit status is 0 when every check passes, 1 when any fails and 2 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import bounds as B
from .adversary import binary_tree_base, lift_osc_k, lift_wosc_k, random_base
from .checks import run_all
from .engine import Variant, run
from .harness import compare_to_bounds, empirical_ratio, row_bounds, rows_to_csv, sweep
from .instance import InstanceError, read_instance, stats, write_instance
from .offline import exact_optimum, kappa
from .prob import reproduce_table1


def _write(path, data: str):
    if path in (None, "-"):
        sys.stdout.write(data)
    else:
        Path(path).write_text(data, encoding="utf-8")


def cmd_run(args) -> int:
    system, seq = read_instance(Path(args.instance).read_bytes())
    opt = exact_optimum(system, seq)
    summary = empirical_ratio(system, seq, args.variant, args.trials, args.seed,
                              n_jobs=args.jobs, opt_cost=opt.cost)
    if args.trace:
        Path(args.trace).write_bytes(run(system, seq, args.variant, args.seed).trace_jsonl())
    m, d = stats(system)
    kap = kappa(system, opt, seq) if seq else None
    bnds = row_bounds(m, d, system.k, kap, args.variant, system.is_unit_cost)
    verdict = compare_to_bounds(summary, bnds)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["field", "value"])
    for key, value in vars(summary).items():
        out.writerow([key, value])
    out.writerow(["m", m])
    out.writerow(["d", d])
    out.writerow(["kappa", "" if kap is None else kap])
    for name, value in bnds.items():
        if value is not None:
            out.writerow([name, value])
            out.writerow([f"{name}_verdict", "PASS" if verdict.checks[name] else "FAIL"])
    return 0 if verdict.passed else 1


def cmd_sweep(args) -> int:
    config = json.loads(Path(args.config).read_text(encoding="utf-8"))
    rows = sweep(config)
    _write(args.out, rows_to_csv(rows))
    bad = [r for r in rows if r.error or r.verdict == "FAIL"]
    for r in bad:
        print(f"row n={r.n} sets={r.num_sets} k={r.k} {r.variant}: {r.error or 'FAIL'}",
              file=sys.stderr)
    return 1 if bad else 0


def cmd_verify(args) -> int:
    results = run_all(args.samples, args.seed)
    for r in results:
        print(r.line())
    print()
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["ell", "x0", "C"])
    for row in reproduce_table1():
        out.writerow([row.ell, f"{row.x0:.6f}", f"{row.c:.18f}"])
    return 0 if all(r.passed for r in results) else 1


def _parse_base(spec: str, seed: int):
    kind, _, arg = spec.partition(":")
    if kind == "tree":
        return binary_tree_base(int(arg or 2), seed=seed)
    if kind == "random":
        m, _, n = arg.partition("x")
        return random_base(int(m), int(n), seed=seed)
    raise ValueError(f"unknown base {spec!r}; use tree:DEPTH or random:MxN")


def cmd_gen(args) -> int:
    base = _parse_base(args.base, args.seed)
    if args.lift == "osc-k":
        lifted = lift_osc_k(base, args.k)
    else:
        lifted = lift_wosc_k(base, args.k, args.epsilon)
    data = write_instance(lifted.system, lifted.sequence)
    if args.out in (None, "-"):
        sys.stdout.buffer.write(data)
    else:
        Path(args.out).write_bytes(data)
    return 0


def cmd_bound(args) -> int:
    kap = args.kappa if args.kappa is not None else max(1.0, args.k / args.c_ratio)
    rows = [
        ("theorem1", B.theorem1_bound(args.m, args.d, args.k, kap)),
        ("corollary2", B.corollary2_bound(args.m, args.d, args.k, args.c_ratio)),
    ]
    if args.k == 1:
        rows.append(("theorem7", B.theorem7_bound(args.m, args.d)))
    rows.append(("theorem10", B.theorem10_bound(args.m, args.d, args.k)))
    if args.n is not None:
        for weighted in (False, True):
            label = "lemma11_weighted" if weighted else "lemma11_unweighted"
            try:
                value, ok = B.lemma11_lower_expr(args.m, args.n, args.k, weighted)
            except ValueError:
                continue
            rows.append((label, value))
            rows.append((f"{label}_in_range", ok))
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["bound", "value"])
    out.writerows(rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="winnowcover", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    variants = [v.value for v in Variant]

    p = sub.add_parser("run", help="Monte-Carlo runs on one instance file")
    p.add_argument("--instance", required=True)
    p.add_argument("--variant", choices=variants, default="universal")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", help="write the JSON-lines trace of one run seeded with --seed")
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="grid of random instances, CSV out")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="numeric checks of the probability facts")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="emit a lifted hard instance")
    p.add_argument("--lift", choices=["osc-k", "wosc-k"], required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--epsilon", type=float, default=1e-3)
    p.add_argument("--base", default="tree:2", help="tree:DEPTH or random:MxN")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bound", help="print the analytic bounds as CSV")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--kappa", type=float)
    p.add_argument("--c-ratio", type=float, default=1.0)
    p.add_argument("--n", type=int, help="universe size, enables the lower-bound rows")
    p.set_defaults(func=cmd_bound)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, ValueError, OSError) as exc:
        print(f"winnowcover {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Subcommands: solve (centralized closure), oracle (shortest-path
cross-check), dsolve (distributed run in the simulated runtime), gen
(workload files), bench (parameter sweeps to CSV).  Exit codes: 0 the
instance is consistent, 1 inconsistent, 2 usage or I/O errors.  The
STNAC_SEED environment variable supplies default seeds.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .bench import emit_csv, parse_bench_config, run_bench
from .distributed import solve_distributed
from .errors import StnacError
from .mastn import parse_mastn
from .oracle import NegativeCycle, oracle_minimal_domains
from .sim import SimConfig, audit_privacy, dump_log
from .solver import (
    AcClosure,
    enforce_ac,
    extract_bound_solution,
    sample_solution,
    verify_assignment,
)
from .stn import parse_stn
from .workloads import FAMILIES, GenSpec, generate, render_generated

EXIT_CONSISTENT = 0
EXIT_INCONSISTENT = 1
EXIT_ERROR = 2


def _default_seed() -> int:
    raw = os.environ.get("STNAC_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise StnacError(f"STNAC_SEED must be an integer, got {raw!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stnac", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    ps = sub.add_parser("solve", help="enforce arc-consistency on a .stn file")
    ps.add_argument("file")
    ps.add_argument(
        "--solution",
        metavar="lower|upper|sample:<seed>",
        help="also print an assignment extracted from the closure",
    )
    ps.add_argument("--verify", action="store_true", help="re-check the printed assignment")

    po = sub.add_parser("oracle", help="shortest-path verdict and minimal domains")
    po.add_argument("file")

    pd = sub.add_parser("dsolve", help="distributed solve of a .mastn file")
    pd.add_argument("file")
    pd.add_argument("--sched-seed", type=int, default=None)
    pd.add_argument("--latency", type=int, default=0)
    pd.add_argument("--log", metavar="PATH", help="write the message log")
    pd.add_argument("--audit-privacy", action="store_true")

    pg = sub.add_parser("gen", help="generate a workload instance")
    pg.add_argument("family", choices=FAMILIES)
    pg.add_argument("-o", "--output", metavar="FILE", help="default: stdout")
    pg.add_argument("--seed", type=int, default=None)
    for flag in (
        "n",
        "density",
        "rows",
        "cols",
        "m",
        "agents",
        "activities",
        "externals",
        "tasks",
        "wmin",
        "wmax",
        "horizon",
    ):
        typ = float if flag == "density" else int
        pg.add_argument(f"--{flag}", type=typ, default=None)
    pg.add_argument("--consistent", action="store_true", default=None)

    pb = sub.add_parser("bench", help="run a sweep from a key=value config")
    pb.add_argument("config")
    pb.add_argument("-o", "--output", metavar="FILE", help="default: stdout")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except StnacError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def _dispatch(args) -> int:
    if args.cmd == "solve":
        return _cmd_solve(args)
    if args.cmd == "oracle":
        return _cmd_oracle(args)
    if args.cmd == "dsolve":
        return _cmd_dsolve(args)
    if args.cmd == "gen":
        return _cmd_gen(args)
    if args.cmd == "bench":
        return _cmd_bench(args)
    raise AssertionError(f"unhandled command {args.cmd}")


def _cmd_solve(args) -> int:
    net = parse_stn(Path(args.file).read_text(encoding="utf-8"))
    outcome = enforce_ac(net)
    if not isinstance(outcome, AcClosure):
        print("inconsistent")
        return EXIT_INCONSISTENT
    for v in range(net.n):
        print(f"{net.label(v)} {outcome.domains[v]}")
    if args.solution is not None:
        assignment = _extract(net, outcome, args.solution)
        for v in range(net.n):
            print(f"{net.label(v)} = {assignment[v]}")
        if args.verify:
            ok, violation = verify_assignment(net, assignment)
            if not ok:
                raise StnacError(f"assignment failed verification at {violation}")
            print("verify: pass")
    return EXIT_CONSISTENT


def _extract(net, closure, mode: str) -> list[int]:
    if mode in ("lower", "upper"):
        return extract_bound_solution(closure, mode)
    if mode.startswith("sample:"):
        try:
            seed = int(mode.split(":", 1)[1])
        except ValueError:
            raise StnacError(f"bad sample seed in {mode!r}") from None
        return sample_solution(net, closure, seed)
    if mode == "sample":
        return sample_solution(net, closure, _default_seed())
    raise StnacError(f"--solution must be lower, upper, or sample:<seed>, got {mode!r}")


def _cmd_oracle(args) -> int:
    net = parse_stn(Path(args.file).read_text(encoding="utf-8"))
    result = oracle_minimal_domains(net)
    if isinstance(result, NegativeCycle):
        print("inconsistent")
        cycle = "->".join("o" if x == net.n else net.label(x) for x in result.vertices)
        print(f"negative cycle (weight {result.weight}): {cycle}", file=sys.stderr)
        return EXIT_INCONSISTENT
    for v in range(net.n):
        print(f"{net.label(v)} {result[v]}")
    return EXIT_CONSISTENT


def _cmd_dsolve(args) -> int:
    m = parse_mastn(Path(args.file).read_text(encoding="utf-8"))
    sched_seed = args.sched_seed if args.sched_seed is not None else _default_seed()
    cfg = SimConfig(scheduler_seed=sched_seed, latency=args.latency)
    run = solve_distributed(m, cfg)
    if args.log:
        Path(args.log).write_text(dump_log(run.log), encoding="utf-8")
    if run.verdict == "consistent":
        for i, domains in enumerate(run.agent_domains):
            for v in range(m.agents[i].n):
                print(f"{i}.{m.agents[i].label(v)} {domains[v]}")
    else:
        print("inconsistent")
    if args.audit_privacy:
        audit = audit_privacy(run.log, m)
        if audit.ok:
            print("privacy: pass")
        else:
            print(f"privacy: FAIL ({audit.reason} at step {audit.offender.step})")
            return EXIT_ERROR
    return EXIT_CONSISTENT if run.verdict == "consistent" else EXIT_INCONSISTENT


def _cmd_gen(args) -> int:
    params = {}
    for key in (
        "n",
        "density",
        "rows",
        "cols",
        "m",
        "agents",
        "activities",
        "externals",
        "tasks",
        "wmin",
        "wmax",
        "horizon",
        "consistent",
    ):
        value = getattr(args, key)
        if value is not None:
            params[key] = value
    seed = args.seed if args.seed is not None else _default_seed()
    spec = GenSpec(args.family, seed, params)
    text = render_generated(generate(spec), spec)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_CONSISTENT


def _cmd_bench(args) -> int:
    cfg = parse_bench_config(Path(args.config).read_text(encoding="utf-8"))
    rows = run_bench(cfg)
    if args.output:
        emit_csv(rows, args.output)
    else:
        emit_csv(rows, sys.stdout)
    return EXIT_CONSISTENT


if __name__ == "__main__":
    raise SystemExit(main())

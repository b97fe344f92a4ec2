"""Benchmark harness: parameter sweeps, per-run metrics, CSV emission.

A bench configuration is a flat key=value text file ('#' comments).  One
parameter sweeps over a value list; every (value, seed) pair generates one
instance, runs it, and contributes one CSV row.  Metrics are counts, not
wall time: wall_ms stays 0 unless ``timing = on`` is set, which keeps a
default run byte-identical when repeated with the same seeds.

Recognized keys::

    command    = solve | dsolve          (default by family kind)
    family     = random-stn | grid-stn | scale-free-stn
                 | random-mastn | factory-mastn
    sweep      = <parameter name>
    values     = comma-separated integers
    seeds      = how many instance seeds per value   (default 1)
    seed       = base instance seed                  (default 0)
    sched-seed = scheduler seed for dsolve           (default 0)
    latency    = message latency for dsolve          (default 0)
    timing     = on | off                            (default off)

Any other key is passed to the generator as an integer parameter.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass

from .distributed import solve_distributed
from .errors import FormatError
from .mastn import Mastn
from .sim import SimConfig
from .solver import AcClosure, enforce_ac
from .stn import Stn
from .workloads import GenSpec, MASTN_FAMILIES, STN_FAMILIES, generate

CSV_COLUMNS = (
    "instance",
    "n",
    "e",
    "agents",
    "verdict",
    "iterations",
    "checks",
    "nccc",
    "messages",
    "wall_ms",
)


@dataclass(frozen=True)
class RunMetrics:
    instance: str
    n: int
    e: int
    agents: int
    verdict: str
    iterations: int
    checks: int
    nccc: int
    messages: int
    wall_ms: int

    def row(self) -> list:
        return [getattr(self, col) for col in CSV_COLUMNS]


def emit_csv(rows: list[RunMetrics], path) -> None:
    """Write metrics in run order; RFC-4180 quoting, stable line endings."""
    if hasattr(path, "write"):
        _write_csv(rows, path)
        return
    with open(path, "w", encoding="utf-8", newline="") as fp:
        _write_csv(rows, fp)


def _write_csv(rows: list[RunMetrics], fp) -> None:
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.row())


def csv_text(rows: list[RunMetrics]) -> str:
    buf = io.StringIO()
    _write_csv(rows, buf)
    return buf.getvalue()


def read_metrics_csv(path) -> list[RunMetrics]:
    """Reparse an emitted CSV; inverse of emit_csv."""
    if hasattr(path, "read"):
        reader = csv.reader(path)
        return _rows_from(reader)
    with open(path, "r", encoding="utf-8", newline="") as fp:
        return _rows_from(csv.reader(fp))


def _rows_from(reader) -> list[RunMetrics]:
    header = next(reader, None)
    if header != list(CSV_COLUMNS):
        raise FormatError(f"unexpected CSV header {header!r}")
    out = []
    for row in reader:
        if len(row) != len(CSV_COLUMNS):
            raise FormatError(f"bad CSV row {row!r}")
        out.append(
            RunMetrics(
                instance=row[0],
                n=int(row[1]),
                e=int(row[2]),
                agents=int(row[3]),
                verdict=row[4],
                iterations=int(row[5]),
                checks=int(row[6]),
                nccc=int(row[7]),
                messages=int(row[8]),
                wall_ms=int(row[9]),
            )
        )
    return out


_TOP_KEYS = {
    "command",
    "family",
    "sweep",
    "values",
    "seeds",
    "seed",
    "sched-seed",
    "latency",
    "timing",
}


def parse_bench_config(text: str) -> dict:
    """Parse the flat key=value bench format into a validated dict."""
    cfg: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FormatError("expected 'key = value'", lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise FormatError("expected 'key = value'", lineno)
        if key in cfg:
            raise FormatError(f"duplicate key {key!r}", lineno)
        cfg[key] = (lineno, value)

    def take(key, default=None):
        if key in cfg:
            return cfg.pop(key)[1]
        return default

    family = take("family")
    if family is None:
        raise FormatError("bench config needs a 'family' key")
    if family not in STN_FAMILIES + MASTN_FAMILIES:
        raise FormatError(f"unknown family {family!r}")
    command = take("command", "dsolve" if family in MASTN_FAMILIES else "solve")
    if command not in ("solve", "dsolve"):
        raise FormatError(f"command must be solve or dsolve, got {command!r}")
    if command == "dsolve" and family not in MASTN_FAMILIES:
        raise FormatError(f"dsolve needs a multi-agent family, got {family!r}")
    if command == "solve" and family not in STN_FAMILIES:
        raise FormatError(f"solve needs a single-network family, got {family!r}")
    sweep = take("sweep")
    if sweep is None:
        raise FormatError("bench config needs a 'sweep' key")
    values_raw = take("values")
    if values_raw is None:
        raise FormatError("bench config needs a 'values' key")
    out = {
        "command": command,
        "family": family,
        "sweep": sweep,
        "values": [_as_int(v, "values") for v in values_raw.split(",")],
        "seeds": _as_int(take("seeds", "1"), "seeds"),
        "seed": _as_int(take("seed", "0"), "seed"),
        "sched_seed": _as_int(take("sched-seed", "0"), "sched-seed"),
        "latency": _as_int(take("latency", "0"), "latency"),
        "timing": _as_flag(take("timing", "off")),
        "params": {},
    }
    for key, (lineno, value) in cfg.items():
        out["params"][key.replace("-", "_")] = _as_number(value, key)
    if out["seeds"] < 1:
        raise FormatError("seeds must be at least 1")
    return out


def _as_int(value: str, key: str) -> int:
    try:
        return int(value.strip())
    except ValueError:
        raise FormatError(f"{key} must be an integer, got {value!r}") from None


def _as_number(value: str, key: str):
    """Generator parameters are integers except densities and the like."""
    try:
        return int(value.strip())
    except ValueError:
        pass
    try:
        return float(value.strip())
    except ValueError:
        raise FormatError(f"{key} must be a number, got {value!r}") from None


def _as_flag(value: str) -> bool:
    if value == "on":
        return True
    if value == "off":
        return False
    raise FormatError(f"timing must be 'on' or 'off', got {value!r}")


def run_bench(cfg: dict) -> list[RunMetrics]:
    """Execute the sweep; one RunMetrics per (value, seed) in grid order."""
    rows = []
    for value in cfg["values"]:
        for s in range(cfg["seeds"]):
            inst_seed = cfg["seed"] + s
            params = dict(cfg["params"])
            params[cfg["sweep"].replace("-", "_")] = value
            spec = GenSpec(cfg["family"], inst_seed, params)
            obj = generate(spec)
            instance = f"{cfg['family']}[{cfg['sweep']}={value},seed={inst_seed}]"
            started = time.perf_counter() if cfg["timing"] else 0.0
            metrics = _run_one(cfg, instance, obj)
            if cfg["timing"]:
                wall = int((time.perf_counter() - started) * 1000)
                metrics = RunMetrics(**{**metrics.__dict__, "wall_ms": wall})
            rows.append(metrics)
    return rows


def _run_one(cfg: dict, instance: str, obj: Stn | Mastn) -> RunMetrics:
    if cfg["command"] == "solve":
        assert isinstance(obj, Stn)
        outcome = enforce_ac(obj)
        verdict = "consistent" if isinstance(outcome, AcClosure) else "inconsistent"
        return RunMetrics(
            instance=instance,
            n=obj.n,
            e=obj.e,
            agents=1,
            verdict=verdict,
            iterations=outcome.iterations,
            checks=outcome.checks,
            nccc=outcome.checks,
            messages=0,
            wall_ms=0,
        )
    assert isinstance(obj, Mastn)
    run = solve_distributed(
        obj, SimConfig(scheduler_seed=cfg["sched_seed"], latency=cfg["latency"])
    )
    return RunMetrics(
        instance=instance,
        n=obj.total_vars,
        e=obj.total_edges,
        agents=obj.p,
        verdict=run.verdict,
        iterations=run.iterations,
        checks=run.checks,
        nccc=run.nccc,
        messages=run.messages,
        wall_ms=0,
    )

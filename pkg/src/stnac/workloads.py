"""Seeded instance generators for benchmarking and testing.

All randomness flows through the SplitMix64 stream in rng.py, so a
(family, parameters, seed) triple produces byte-identical files anywhere.
Free modelling choices (weight ranges, horizons, how many extra local
constraints accompany each activity) are recorded in the generated file's
provenance header.  Instances are not forced to be consistent unless
explicitly requested; both outcomes are wanted by the test suites.

Families:

* ``random-stn``    -- n variables, each pair constrained with probability
  ``density``; the workhorse for solver/oracle cross-checks.
* ``grid-stn``      -- rows x cols lattice; a sparse road-network-style
  topology stand-in (no third-party dataset is bundled).
* ``scale-free-stn``-- preferential attachment: an m-clique seed, then each
  new vertex attaches to m distinct existing vertices picked by degree.
* ``random-mastn``  -- N agents with start/end points for ``activities``
  activities each, duration plus extra local constraints, and X external
  constraints over uniformly chosen cross-agent pairs (default
  X = 50*(N-1)).
* ``factory-mastn`` -- T tasks round-robined over N agents, duration per
  task, precedence chains per agent, and cross-agent precedences that
  connect the agent graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import GenerationError
from .intervals import Interval, interval
from .mastn import Mastn, serialize_mastn
from .rng import SplitMix64
from .stn import DEFAULT_MAGNITUDE_CAP, Stn, serialize_stn

STN_FAMILIES = ("random-stn", "grid-stn", "scale-free-stn")
MASTN_FAMILIES = ("random-mastn", "factory-mastn")


@dataclass(frozen=True)
class GenSpec:
    """A generator request: family name, seed, and family parameters."""

    family: str
    seed: int
    params: dict = field(default_factory=dict)


def _default_horizon(n_vars: int, wmin: int, wmax: int) -> int:
    h = 10 * max(n_vars, 1) * max(abs(wmin), abs(wmax), 1)
    return min(h, DEFAULT_MAGNITUDE_CAP)


def _check_weights(wmin: int, wmax: int) -> None:
    if wmin > wmax:
        raise GenerationError(f"weight range [{wmin}, {wmax}] is empty")
    if max(abs(wmin), abs(wmax)) > DEFAULT_MAGNITUDE_CAP:
        raise GenerationError("weight range exceeds the magnitude cap")


def _check_horizon(horizon: int) -> None:
    if horizon < 0:
        raise GenerationError("horizon must be non-negative")
    if horizon > DEFAULT_MAGNITUDE_CAP:
        raise GenerationError("horizon exceeds the magnitude cap")


def _rand_interval(rng: SplitMix64, wmin: int, wmax: int) -> Interval:
    a = rng.randint(wmin, wmax)
    return interval(a, rng.randint(a, wmax))


def gen_random_stn(
    n: int,
    density: float,
    wmin: int = 1,
    wmax: int = 100,
    horizon: int | None = None,
    seed: int = 0,
    consistent: bool = False,
) -> Stn:
    """Pairwise-Bernoulli random network with domains [0, horizon].

    With ``consistent=True`` every constraint interval is placed around a
    hidden seeded assignment, so the instance is solvable by construction.
    """
    if n < 0:
        raise GenerationError("n must be non-negative")
    if not 0.0 <= density <= 1.0:
        raise GenerationError("density must lie in [0, 1]")
    _check_weights(wmin, wmax)
    if horizon is None:
        horizon = _default_horizon(n, wmin, wmax)
    _check_horizon(horizon)
    rng = SplitMix64(seed)
    net = Stn(n)
    for v in range(n):
        net.set_domain(v, interval(0, horizon))
    hidden = [rng.randint(0, horizon) for _ in range(n)] if consistent else None
    for v in range(n):
        for w in range(v + 1, n):
            if not rng.bernoulli(density):
                continue
            if hidden is None:
                net.add_constraint(v, w, _rand_interval(rng, wmin, wmax))
            else:
                diff = hidden[w] - hidden[v]
                slack_lo = rng.randint(0, max(abs(wmax), 1))
                slack_hi = rng.randint(0, max(abs(wmax), 1))
                net.add_constraint(v, w, interval(diff - slack_lo, diff + slack_hi))
    return net


def gen_grid_stn(
    rows: int,
    cols: int,
    wmin: int = 1,
    wmax: int = 100,
    horizon: int | None = None,
    seed: int = 0,
) -> Stn:
    """Lattice of rows x cols variables with 4-neighbor constraints."""
    if rows < 1 or cols < 1:
        raise GenerationError("grid needs at least one row and one column")
    _check_weights(wmin, wmax)
    n = rows * cols
    if horizon is None:
        horizon = _default_horizon(n, wmin, wmax)
    _check_horizon(horizon)
    rng = SplitMix64(seed)
    net = Stn(n)
    for v in range(n):
        net.set_domain(v, interval(0, horizon))
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                net.add_constraint(v, v + 1, _rand_interval(rng, wmin, wmax))
            if r + 1 < rows:
                net.add_constraint(v, v + cols, _rand_interval(rng, wmin, wmax))
    return net


def gen_scale_free_stn(
    n: int,
    m: int,
    wmin: int = 1,
    wmax: int = 100,
    horizon: int | None = None,
    seed: int = 0,
) -> Stn:
    """Preferential-attachment network: m-clique seed, m edges per new vertex."""
    if m < 1:
        raise GenerationError("attachment count m must be at least 1")
    if m >= n:
        raise GenerationError(f"attachment count m={m} must be below n={n}")
    _check_weights(wmin, wmax)
    if horizon is None:
        horizon = _default_horizon(n, wmin, wmax)
    _check_horizon(horizon)
    rng = SplitMix64(seed)
    net = Stn(n)
    for v in range(n):
        net.set_domain(v, interval(0, horizon))
    endpoints: list[int] = []  # one entry per edge endpoint: degree-weighted urn
    for v in range(m):
        for w in range(v + 1, m):
            net.add_constraint(v, w, _rand_interval(rng, wmin, wmax))
            endpoints.extend((v, w))
    if m == 1:
        endpoints.append(0)  # a lone seed vertex still needs weight in the urn
    for v in range(m, n):
        targets: list[int] = []
        while len(targets) < m:
            pick = endpoints[rng.randbelow(len(endpoints))]
            if pick not in targets:
                targets.append(pick)
        for w in targets:
            net.add_constraint(v, w, _rand_interval(rng, wmin, wmax))
            endpoints.extend((v, w))
    return net


def gen_random_mastn(
    agents: int,
    activities: int = 10,
    externals: int | None = None,
    wmin: int = 1,
    wmax: int = 100,
    horizon: int | None = None,
    seed: int = 0,
) -> Mastn:
    """N agents, two time points per activity, X uniform cross-agent constraints.

    Each activity contributes a start/end pair constrained by a random
    duration, plus activities//2 extra local distance constraints per agent.
    ``externals`` defaults to 50*(N-1), the published scaling for agent
    sweeps.
    """
    if agents < 1:
        raise GenerationError("need at least one agent")
    if activities < 1:
        raise GenerationError("need at least one activity per agent")
    if externals is None:
        externals = 50 * (agents - 1)
    if externals < 0:
        raise GenerationError("external count must be non-negative")
    _check_weights(wmin, wmax)
    n_local = 2 * activities
    if horizon is None:
        horizon = _default_horizon(agents * n_local, wmin, wmax)
    _check_horizon(horizon)
    rng = SplitMix64(seed)
    locals_: list[Stn] = []
    for _ in range(agents):
        net = Stn(n_local)
        for v in range(n_local):
            net.set_domain(v, interval(0, horizon))
        for t in range(activities):
            net.add_constraint(2 * t, 2 * t + 1, _rand_interval(rng, wmin, wmax))
        for _ in range(activities // 2):
            u = rng.randbelow(n_local)
            v = rng.randbelow(n_local)
            if u == v:
                continue
            net.add_constraint(u, v, _rand_interval(rng, wmin, wmax))
        locals_.append(net)
    m = Mastn(locals_)
    capacity = (agents * n_local) ** 2 - agents * n_local**2
    if externals > capacity // 2:
        raise GenerationError(
            f"{externals} externals exceed the {capacity // 2} cross-agent pairs"
        )
    chosen: set[tuple[tuple[int, int], tuple[int, int]]] = set()
    attempts = 0
    while len(chosen) < externals:
        attempts += 1
        if attempts > 1000 * externals:
            raise GenerationError("could not place the requested external constraints")
        i = rng.randbelow(agents)
        j = rng.randbelow(agents)
        if i == j:
            continue
        v = rng.randbelow(n_local)
        w = rng.randbelow(n_local)
        key = tuple(sorted(((i, v), (j, w))))
        if key in chosen:
            continue
        chosen.add(key)
        m.add_external(i, v, j, w, _rand_interval(rng, wmin, wmax))
    return m


def gen_factory_mastn(
    agents: int,
    tasks: int,
    externals: int | None = None,
    wmin: int = 1,
    wmax: int = 100,
    horizon: int | None = None,
    seed: int = 0,
) -> Mastn:
    """T tasks handed round-robin to N agents with chained precedences.

    Every task is a start/end pair with a random duration; each agent's
    consecutive tasks are chained end-before-start; agents are connected in
    a precedence line plus extra random cross-agent precedences (default
    total 2*(N-1)).
    """
    if agents < 1:
        raise GenerationError("need at least one agent")
    if tasks < 1:
        raise GenerationError("need at least one task")
    if externals is None:
        externals = 2 * (agents - 1)
    if agents > 1 and externals < agents - 1:
        raise GenerationError("need at least N-1 externals to connect the agents")
    if agents == 1 and externals > 0:
        raise GenerationError("a single agent admits no external constraints")
    _check_weights(wmin, wmax)
    per_agent = [list(range(t, tasks, agents)) for t in range(agents)]
    if any(not ts for ts in per_agent):
        raise GenerationError("every agent needs at least one task")
    if horizon is None:
        horizon = _default_horizon(2 * tasks, wmin, wmax)
    _check_horizon(horizon)
    rng = SplitMix64(seed)
    precedence = interval(0, None)  # end must not come after the successor starts
    locals_: list[Stn] = []
    for i in range(agents):
        k = len(per_agent[i])
        net = Stn(2 * k)
        for v in range(2 * k):
            net.set_domain(v, interval(0, horizon))
        for t in range(k):
            net.add_constraint(2 * t, 2 * t + 1, _rand_interval(rng, wmin, wmax))
        for t in range(k - 1):
            net.add_constraint(2 * t + 1, 2 * (t + 1), precedence)
        locals_.append(net)
    m = Mastn(locals_)
    if agents == 1:
        return m
    chosen: set[tuple[tuple[int, int], tuple[int, int]]] = set()

    def add(i: int, v: int, j: int, w: int) -> bool:
        key = tuple(sorted(((i, v), (j, w))))
        if key in chosen:
            return False
        chosen.add(key)
        m.add_external(i, v, j, w, precedence)
        return True

    for i in range(1, agents):  # the connecting line
        v = 2 * rng.randbelow(len(per_agent[i - 1])) + 1  # an end point of agent i-1
        w = 2 * rng.randbelow(len(per_agent[i]))  # a start point of agent i
        add(i - 1, v, i, w)
    attempts = 0
    while len(chosen) < externals:
        attempts += 1
        if attempts > 1000 * externals:
            raise GenerationError("could not place the requested external constraints")
        i = rng.randbelow(agents)
        j = rng.randbelow(agents)
        if i == j:
            continue
        v = 2 * rng.randbelow(len(per_agent[i])) + 1
        w = 2 * rng.randbelow(len(per_agent[j]))
        add(i, v, j, w)
    return m


_GENERATORS = {
    "random-stn": gen_random_stn,
    "grid-stn": gen_grid_stn,
    "scale-free-stn": gen_scale_free_stn,
    "random-mastn": gen_random_mastn,
    "factory-mastn": gen_factory_mastn,
}

FAMILIES = tuple(_GENERATORS)


def generate(spec: GenSpec) -> Stn | Mastn:
    """Dispatch a GenSpec to its family generator."""
    if spec.family not in _GENERATORS:
        raise GenerationError(
            f"unknown family {spec.family!r}; known: {', '.join(FAMILIES)}"
        )
    try:
        return _GENERATORS[spec.family](seed=spec.seed, **spec.params)
    except TypeError as exc:
        raise GenerationError(f"bad parameters for {spec.family}: {exc}") from None


def render_generated(obj: Stn | Mastn, spec: GenSpec) -> str:
    """Serialize with a provenance header recording every free choice."""
    params = " ".join(f"{k}={spec.params[k]}" for k in sorted(spec.params))
    header = f"# genspec: family={spec.family} seed={spec.seed}"
    if params:
        header += f" {params}"
    lines = [header]
    if spec.family == "grid-stn":
        lines.append("# note: sparse lattice stand-in for road-network-style topologies")
    lines.append("# defaults unless overridden: weights [1,100], horizon 10*n*max|weight|")
    body = serialize_mastn(obj) if isinstance(obj, Mastn) else serialize_stn(obj)
    return "\n".join(lines) + "\n" + body

"""Multi-agent network model: per-agent local networks plus external constraints.

Each agent owns a disjoint block of variables as a local Stn.  External
constraints span two different agents and are stored once, keyed by the
unordered endpoint pair; duplicates intersect like local constraints.  An
agent's view of the problem is its own network, the external constraints it
participates in, and the domains its neighbors choose to share; it never
sees a foreign network's structure.

File format (UTF-8, '#' comments)::

    mastn <p>
    agent <i>                      # starts agent i's block
    var <v> [name]                 # agent-local lines, same syntax as .stn
    domain <v> <a> <b>
    constraint <v> <w> <a> <b>
    external <i> <v> <j> <w> <a> <b>   # a <= w_j - v_i <= b, i != j

The size of each local block is inferred from its domain lines (one per
variable, indices dense from 0).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import FormatError, ValidationError
from .intervals import Interval, interval_from_tokens
from .stn import (
    DEFAULT_MAGNITUDE_CAP,
    ConstraintUpdate,
    Stn,
    _finite_cap_check,
    apply_stn_line,
)


@dataclass(frozen=True)
class ExternalConstraint:
    """One cross-agent constraint in canonical orientation ((i, v) < (j, w))."""

    i: int
    v: int
    j: int
    w: int
    ivl: Interval


@dataclass(frozen=True)
class ExternalEdge:
    """An external constraint as seen from its local endpoint."""

    local_var: int
    peer_agent: int
    peer_var: int
    ivl: Interval  # oriented local_var -> peer_var


@dataclass(frozen=True)
class AgentView:
    """Everything one agent may know before any message is exchanged."""

    agent_id: int
    stn: Stn
    shared_vars: tuple[int, ...]
    external_vars: tuple[tuple[int, int], ...]
    externals: tuple[ExternalEdge, ...]
    neighbors: tuple[int, ...]
    shared_with: dict[int, tuple[int, ...]]  # neighbor -> my shared vars on our edges


class Mastn:
    def __init__(self, agents: list[Stn]):
        self.agents = list(agents)
        self._ext: dict[tuple[tuple[int, int], tuple[int, int]], Interval] = {}

    @property
    def p(self) -> int:
        return len(self.agents)

    def _check_endpoint(self, i: int, v: int) -> None:
        if not 0 <= i < self.p:
            raise ValidationError(f"unknown agent {i} (problem has {self.p})")
        if not 0 <= v < self.agents[i].n:
            raise ValidationError(f"agent {i} has no variable {v}")

    def add_external(self, i: int, v: int, j: int, w: int, ivl: Interval) -> ConstraintUpdate:
        """Insert an external constraint from (i, v) to (j, w); duplicates intersect."""
        self._check_endpoint(i, v)
        self._check_endpoint(j, w)
        if i == j:
            raise ValidationError(f"external constraint must span two agents, got agent {i} twice")
        if (i, v) < (j, w):
            key, stored = ((i, v), (j, w)), ivl
        else:
            key, stored = ((j, w), (i, v)), ivl.inverse()
        old = self._ext.get(key)
        new = stored if old is None else old.intersect(stored)
        self._ext[key] = new
        return ConstraintUpdate(changed=new != old, is_empty=new.is_empty)

    def external_constraints(self) -> list[ExternalConstraint]:
        out = []
        for ((i, v), (j, w)) in sorted(self._ext):
            out.append(ExternalConstraint(i, v, j, w, self._ext[((i, v), (j, w))]))
        return out

    @property
    def total_vars(self) -> int:
        return sum(a.n for a in self.agents)

    @property
    def total_edges(self) -> int:
        return sum(a.e for a in self.agents) + len(self._ext)

    def validate(self) -> None:
        for a in self.agents:
            a.validate()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mastn):
            return NotImplemented
        return self.agents == other.agents and self._ext == other._ext

    def __repr__(self) -> str:
        return f"<Mastn p={self.p} vars={self.total_vars} externals={len(self._ext)}>"


@dataclass(frozen=True)
class FlatIndex:
    """Bijection between (agent, local var) and indices of the flattened network."""

    offsets: tuple[int, ...]
    sizes: tuple[int, ...]

    def to_global(self, agent: int, var: int) -> int:
        return self.offsets[agent] + var

    def to_local(self, g: int) -> tuple[int, int]:
        for agent in range(len(self.offsets) - 1, -1, -1):
            if g >= self.offsets[agent]:
                return agent, g - self.offsets[agent]
        raise ValidationError(f"global index {g} out of range")


def flatten(m: Mastn) -> tuple[Stn, FlatIndex]:
    """Union of all local networks and externals as one Stn.

    Solutions of the flat network correspond one-to-one with joint solutions
    of the multi-agent problem.  Named variables are prefixed 'agent.' to
    keep names unique.
    """
    m.validate()
    offsets = []
    total = 0
    for a in m.agents:
        offsets.append(total)
        total += a.n
    flat = Stn(total)
    for i, a in enumerate(m.agents):
        off = offsets[i]
        for v in range(a.n):
            flat.set_domain(off + v, a.domain(v))
            if a.name(v) is not None:
                flat.set_name(off + v, f"{i}.{a.name(v)}")
        for v, w, ivl in a.pairs():
            flat.add_constraint(off + v, off + w, ivl)
    for ext in m.external_constraints():
        flat.add_constraint(
            offsets[ext.i] + ext.v, offsets[ext.j] + ext.w, ext.ivl
        )
    return flat, FlatIndex(tuple(offsets), tuple(a.n for a in m.agents))


def agent_view(m: Mastn, i: int) -> AgentView:
    """Classify agent i's variables and external constraints."""
    if not 0 <= i < m.p:
        raise ValidationError(f"unknown agent {i} (problem has {m.p})")
    shared: set[int] = set()
    external_vars: set[tuple[int, int]] = set()
    edges: list[ExternalEdge] = []
    neighbors: set[int] = set()
    per_neighbor: dict[int, set[int]] = {}
    for ext in m.external_constraints():
        if ext.i == i:
            local, peer_agent, peer_var, ivl = ext.v, ext.j, ext.w, ext.ivl
        elif ext.j == i:
            local, peer_agent, peer_var, ivl = ext.w, ext.i, ext.v, ext.ivl.inverse()
        else:
            continue
        shared.add(local)
        external_vars.add((peer_agent, peer_var))
        neighbors.add(peer_agent)
        per_neighbor.setdefault(peer_agent, set()).add(local)
        edges.append(ExternalEdge(local, peer_agent, peer_var, ivl))
    edges.sort(key=lambda e: (e.local_var, e.peer_agent, e.peer_var))
    return AgentView(
        agent_id=i,
        stn=m.agents[i],
        shared_vars=tuple(sorted(shared)),
        external_vars=tuple(sorted(external_vars)),
        externals=tuple(edges),
        neighbors=tuple(sorted(neighbors)),
        shared_with={j: tuple(sorted(vs)) for j, vs in sorted(per_neighbor.items())},
    )


def agent_adjacency(m: Mastn) -> dict[int, tuple[int, ...]]:
    """The agent graph: an edge between agents sharing an external constraint."""
    adj: dict[int, set[int]] = {i: set() for i in range(m.p)}
    for ext in m.external_constraints():
        adj[ext.i].add(ext.j)
        adj[ext.j].add(ext.i)
    return {i: tuple(sorted(js)) for i, js in adj.items()}


def components(adjacency: dict[int, tuple[int, ...]], p: int) -> list[list[int]]:
    """Connected components of the agent graph, each sorted, ordered by minimum id."""
    seen: set[int] = set()
    comps: list[list[int]] = []
    for start in range(p):
        if start in seen:
            continue
        comp = []
        queue = deque([start])
        seen.add(start)
        while queue:
            x = queue.popleft()
            comp.append(x)
            for y in adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def parse_mastn(text: str, magnitude_cap: int = DEFAULT_MAGNITUDE_CAP) -> Mastn:
    """Parse the .mastn text format; raises FormatError with a line number."""
    p: int | None = None
    current: int | None = None
    # collected per agent: lists of (lineno, tokens) to build once sizes are known
    blocks: dict[int, list[tuple[int, list[str]]]] = {}
    externals: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "mastn":
            if p is not None:
                raise FormatError("duplicate 'mastn' header", lineno)
            if len(tokens) != 2:
                raise FormatError("expected 'mastn <p>'", lineno)
            try:
                p = int(tokens[1])
            except ValueError:
                raise FormatError(f"expected an integer, got {tokens[1]!r}", lineno) from None
            if p < 0:
                raise FormatError("agent count must be non-negative", lineno)
            continue
        if p is None:
            raise FormatError("file must start with 'mastn <p>'", lineno)
        if kind == "agent":
            if len(tokens) != 2:
                raise FormatError("expected 'agent <i>'", lineno)
            try:
                current = int(tokens[1])
            except ValueError:
                raise FormatError(f"expected an agent id, got {tokens[1]!r}", lineno) from None
            if not 0 <= current < p:
                raise FormatError(f"unknown agent {current} (problem has {p})", lineno)
            if current in blocks:
                raise FormatError(f"agent {current} declared twice", lineno)
            blocks[current] = []
        elif kind in ("var", "domain", "constraint"):
            if current is None:
                raise FormatError(f"{kind!r} line outside an agent block", lineno)
            blocks[current].append((lineno, tokens))
        elif kind == "external":
            externals.append((lineno, tokens))
        else:
            raise FormatError(f"unknown directive {kind!r}", lineno)
    if p is None:
        raise FormatError("file must start with 'mastn <p>'")
    for i in range(p):
        if i not in blocks:
            raise FormatError(f"agent {i} has no block")
    agents = [_build_agent(i, blocks[i], magnitude_cap) for i in range(p)]
    m = Mastn(agents)
    for lineno, tokens in externals:
        if len(tokens) not in (6, 7):
            raise FormatError("expected 'external <i> <v> <j> <w> <a> <b>'", lineno)
        try:
            i, j = int(tokens[1]), int(tokens[3])
        except ValueError:
            raise FormatError("external agent ids must be integers", lineno) from None
        if not 0 <= i < p or not 0 <= j < p:
            raise FormatError(f"unknown agent in external ({i}, {j})", lineno)
        v = _endpoint(agents[i], tokens[2], lineno)
        w = _endpoint(agents[j], tokens[4], lineno)
        try:
            ivl = interval_from_tokens(tokens[5:])
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from None
        _finite_cap_check(ivl, magnitude_cap, lineno)
        try:
            m.add_external(i, v, j, w, ivl)
        except ValidationError as exc:
            raise FormatError(str(exc), lineno) from None
    return m


def _endpoint(agent: Stn, token: str, lineno: int) -> int:
    """An external-constraint endpoint: a local index or a declared name."""
    try:
        v = int(token)
    except ValueError:
        named = agent.index_of(token)
        if named is None:
            raise FormatError(f"unknown variable {token!r}", lineno) from None
        return named
    if not 0 <= v < agent.n:
        raise FormatError(f"unknown variable {v} (agent has {agent.n})", lineno)
    return v


def _build_agent(i: int, lines: list[tuple[int, list[str]]], cap: int) -> Stn:
    n = sum(1 for _, tokens in lines if tokens[0] == "domain")
    net = Stn(n)
    seen_domain: set[int] = set()
    for lineno, tokens in lines:
        apply_stn_line(net, tokens, lineno, cap, seen_domain)
    try:
        net.validate()
    except ValidationError as exc:
        raise FormatError(f"agent {i}: {exc}") from None
    return net


def serialize_mastn(m: Mastn) -> str:
    """Emit the .mastn form: agents ascending, then externals in canonical order."""
    m.validate()
    lines = [f"mastn {m.p}"]
    for i, a in enumerate(m.agents):
        lines.append(f"agent {i}")
        for v in range(a.n):
            if a.name(v) is not None:
                lines.append(f"var {v} {a.name(v)}")
        for v in range(a.n):
            lines.append(f"domain {v} {a.domain(v).to_tokens()}")
        for v, w, ivl in a.pairs():
            lines.append(f"constraint {v} {w} {ivl.to_tokens()}")
    for ext in m.external_constraints():
        lines.append(f"external {ext.i} {ext.v} {ext.j} {ext.w} {ext.ivl.to_tokens()}")
    return "\n".join(lines) + "\n"

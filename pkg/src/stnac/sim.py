"""Deterministic discrete-event runtime for message-passing agents.

Delivery order is drawn from a seeded stream over the set of in-flight
messages, so runs are reproducible while still exercising interleavings.
Logical clocks follow the non-concurrent-check convention: an agent ticks
its own clock once per constraint check, every outbound message carries the
sender's clock, and on delivery the receiver's clock rises to
max(own, carried + latency).  The run's NCCC is the largest final clock.

An agent is any object with::

    agent_id: int
    clock: int
    done: bool
    on_start() -> list[AgentMessage]
    on_message(msg) -> list[AgentMessage]

The runtime assigns message ids in send order, logs every delivery, and
reports a deadlock (all blocked, nothing in flight) or a runaway (step
budget exhausted) as errors that valid protocols never trigger.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from enum import Enum

from .errors import DeadlockError, RunawayError, ValidationError
from .intervals import Interval
from .mastn import Mastn, agent_adjacency, agent_view
from .rng import SplitMix64


class MsgKind(Enum):
    DOMAIN_SYNC = "DomainSync"
    INCONSISTENT = "Inconsistent"
    INQUIRY = "Inquiry"
    FEEDBACK = "Feedback"
    ARC_CONSISTENT = "ArcConsistent"
    ECHO_PROBE = "EchoProbe"
    ECHO_REPLY = "EchoReply"


BROADCAST_KINDS = frozenset({MsgKind.INCONSISTENT, MsgKind.ARC_CONSISTENT})


@dataclass
class AgentMessage:
    """One protocol message.  msg_id is assigned by the runtime at send time.

    `origin` names the agent that started a broadcast; together with the
    kind it is the key under which forwarded copies are deduplicated.
    `arrival` is runtime metadata: the carried clock plus latency, filled in
    at delivery for agents that consume a kind later than they receive it.
    """

    kind: MsgKind
    sender: int
    receiver: int
    clock: int = 0
    msg_id: int = -1
    k: int | None = None
    domains: dict[tuple[int, int], Interval] | None = None
    subtree_agents: int | None = None
    subtree_vars: int | None = None
    origin: int | None = None
    arrival: int = 0


@dataclass(frozen=True)
class SimConfig:
    scheduler_seed: int = 0
    latency: int = 0
    max_steps: int = 1_000_000

    def __post_init__(self):
        if self.latency < 0:
            raise ValidationError("latency must be non-negative")


@dataclass(frozen=True)
class LogEntry:
    step: int
    message: AgentMessage


@dataclass
class SimReport:
    log: list[LogEntry]
    message_count: int
    histogram: dict[str, int]
    nccc: int
    total_checks: int
    steps: int
    next_msg_id: int


def run_simulation(agents: list, cfg: SimConfig, msg_id_start: int = 0) -> SimReport:
    """Drive the agents until all terminate; returns the delivery log and metrics."""
    if not agents:
        raise ValidationError("agent set must be non-empty")
    by_id = {}
    for a in agents:
        if a.agent_id in by_id:
            raise ValidationError(f"duplicate agent id {a.agent_id}")
        by_id[a.agent_id] = a
    rng = SplitMix64(cfg.scheduler_seed)
    pending: list[AgentMessage] = []
    next_id = msg_id_start

    def enqueue(msgs: list[AgentMessage]) -> None:
        nonlocal next_id
        for msg in msgs:
            if msg.receiver not in by_id:
                raise ValidationError(f"message to unknown agent {msg.receiver}")
            msg.msg_id = next_id
            next_id += 1
            pending.append(msg)

    for a in sorted(agents, key=lambda a: a.agent_id):
        enqueue(a.on_start())

    log: list[LogEntry] = []
    step = 0
    while True:
        if not pending:
            blocked = {a.agent_id: _describe(a) for a in agents if not a.done}
            if not blocked:
                break
            raise DeadlockError(blocked)
        idx = rng.randbelow(len(pending))
        msg = pending.pop(idx)
        step += 1
        if step > cfg.max_steps:
            raise RunawayError(f"exceeded {cfg.max_steps} delivery steps")
        log.append(LogEntry(step, msg))
        agent = by_id[msg.receiver]
        if agent.done:
            continue
        msg.arrival = msg.clock + cfg.latency
        # kinds the agent consumes later (e.g. cached domain syncs) carry
        # their arrival stamp with them instead of bumping the clock now:
        # a message influences the clock when the protocol receives it
        if msg.kind not in getattr(agent, "deferred_clock_kinds", ()):
            if msg.arrival > agent.clock:
                agent.clock = msg.arrival
        enqueue(agent.on_message(msg))

    histogram = Counter(entry.message.kind.value for entry in log)
    nccc = max((a.clock for a in agents), default=0)
    return SimReport(
        log=log,
        message_count=len(log),
        histogram=dict(histogram),
        nccc=nccc,
        total_checks=sum(getattr(a, "checks", 0) for a in agents),
        steps=step,
        next_msg_id=next_id,
    )


def _describe(agent) -> str:
    phase = getattr(agent, "phase", None)
    k = getattr(agent, "k", None)
    return f"phase={getattr(phase, 'value', phase)} k={k}"


# -- spanning-tree setup -----------------------------------------------


@dataclass(frozen=True)
class TreeInfo:
    """What one agent learns from the setup wave."""

    parent: int | None
    children: tuple[int, ...]
    is_root: bool
    is_leaf: bool
    n_total: int  # component variable count plus one for the zero point


def echo_setup(
    component: list[int],
    adjacency: dict[int, tuple[int, ...]],
    var_counts: dict[int, int],
    msg_id_start: int = 0,
) -> tuple[dict[int, TreeInfo], int, list[AgentMessage], int]:
    """Build a rooted spanning tree of one connected component with a probe wave.

    The root is the lowest agent id.  Probes fan out in FIFO order, so each
    agent adopts as parent its first prober, which is its lowest-id neighbor
    one hop closer to the root: a breadth-first tree.  Once an agent has
    heard from every non-parent neighbor it replies to its parent with its
    subtree's agent and variable totals; the root's total, plus one for the
    zero time point, becomes everyone's n.

    Setup messages never touch the logical clocks: no constraint checks have
    happened yet, and their cost is reported separately from the solve run.
    """
    comp = sorted(component)
    root = comp[0]
    n_single = var_counts[root] + 1
    if len(comp) == 1:
        tree = {root: TreeInfo(None, (), True, True, n_single)}
        return tree, n_single, [], msg_id_start

    parent: dict[int, int | None] = {root: None}
    heard: dict[int, set[int]] = {i: set() for i in comp}
    children: dict[int, list[int]] = {i: [] for i in comp}
    agg_agents = {i: 1 for i in comp}
    agg_vars = {i: var_counts[i] for i in comp}
    replied: set[int] = set()
    delivered: list[AgentMessage] = []
    queue: deque[AgentMessage] = deque()
    next_id = msg_id_start

    def send(kind: MsgKind, s: int, r: int, **fields) -> None:
        nonlocal next_id
        queue.append(AgentMessage(kind, s, r, msg_id=next_id, **fields))
        next_id += 1

    for j in adjacency[root]:
        send(MsgKind.ECHO_PROBE, root, j)
    while queue:
        msg = queue.popleft()
        delivered.append(msg)
        i = msg.receiver
        if msg.kind is MsgKind.ECHO_PROBE:
            if i not in parent:
                parent[i] = msg.sender
                for j in adjacency[i]:
                    if j != msg.sender:
                        send(MsgKind.ECHO_PROBE, i, j)
        else:
            children[i].append(msg.sender)
            agg_agents[i] += msg.subtree_agents
            agg_vars[i] += msg.subtree_vars
        heard[i].add(msg.sender)
        if i in replied or i not in parent:
            continue
        waiting_on = set(adjacency[i]) - heard[i]
        waiting_on.discard(parent[i] if parent[i] is not None else -1)
        if not waiting_on and parent[i] is not None:
            replied.add(i)
            send(
                MsgKind.ECHO_REPLY,
                i,
                parent[i],
                subtree_agents=agg_agents[i],
                subtree_vars=agg_vars[i],
            )

    n_total = agg_vars[root] + 1
    tree = {
        i: TreeInfo(
            parent=parent[i],
            children=tuple(sorted(children[i])),
            is_root=i == root,
            is_leaf=not children[i],
            n_total=n_total,
        )
        for i in comp
    }
    return tree, n_total, delivered, next_id


# -- privacy audit -----------------------------------------------------


@dataclass(frozen=True)
class AuditResult:
    ok: bool
    offender: LogEntry | None = None
    reason: str | None = None


def audit_privacy(log: list[LogEntry], m: Mastn) -> AuditResult:
    """Check every logged message against the information-flow contract.

    A message fails the audit when it names a variable its sender does not
    share (echo replies are exempt: they carry only aggregate counts), when
    it carries interval payloads on anything but a domain synchronization,
    or when it travels between agents that are not agent-graph neighbors.
    """
    adjacency = agent_adjacency(m)
    shared = {i: set(agent_view(m, i).shared_vars) for i in range(m.p)}
    for entry in log:
        msg = entry.message
        if msg.receiver not in adjacency.get(msg.sender, ()):
            return AuditResult(False, entry, "message between non-neighbor agents")
        if msg.kind is MsgKind.DOMAIN_SYNC:
            if msg.domains is None:
                return AuditResult(False, entry, "domain sync without a payload")
            for agent, var in msg.domains:
                if agent != msg.sender:
                    return AuditResult(False, entry, "payload names a foreign variable")
                if var not in shared[agent]:
                    return AuditResult(False, entry, "payload names a private variable")
        elif msg.kind is MsgKind.ECHO_REPLY:
            if msg.domains is not None:
                return AuditResult(False, entry, "echo reply carries intervals")
        else:
            if msg.domains is not None:
                return AuditResult(False, entry, "interval payload outside domain sync")
    return AuditResult(True)


# -- log dump ----------------------------------------------------------


def _payload_text(msg: AgentMessage) -> str:
    parts = []
    if msg.k is not None:
        parts.append(f"k={msg.k}")
    if msg.origin is not None:
        parts.append(f"origin={msg.origin}")
    if msg.domains is not None:
        for (agent, var), ivl in sorted(msg.domains.items()):
            parts.append(f"{agent}.{var}={ivl}")
    if msg.subtree_agents is not None:
        parts.append(f"agents={msg.subtree_agents}")
    if msg.subtree_vars is not None:
        parts.append(f"vars={msg.subtree_vars}")
    return " ".join(parts) if parts else "-"


def dump_log(log: list[LogEntry]) -> str:
    """One message per line: step clock sender receiver kind payload (tab-separated)."""
    lines = []
    for entry in log:
        msg = entry.message
        lines.append(
            "\t".join(
                (
                    str(entry.step),
                    str(msg.clock),
                    str(msg.sender),
                    str(msg.receiver),
                    msg.kind.value,
                    _payload_text(msg),
                )
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")

"""Per-agent state machine for distributed arc-consistency.

Each iteration k an agent sends the current domains of its shared variables
to its neighbors, waits until every neighbor's iteration-k domains have
arrived, then sweeps its own variables against local and cross-agent
constraints exactly like the centralized solver.  If the sweep changed
nothing the agent is quiescent and joins the termination round for k;
otherwise it moves straight to k+1, and the fresh domain message doubles as
the signal that wakes quiescent neighbors out of their round.

Termination is detected over the spanning tree from the setup wave: the
root polls its children with an iteration-tagged inquiry, the inquiry
fans out to the leaves, feedback aggregates back up, and a root that has
its whole tree quiescent at the same k broadcasts the consistent verdict.
An agent whose domain empties, or whose sweep budget (component variables
plus one) runs out, broadcasts inconsistency instead; broadcasting before
returning keeps the rest of the system from waiting on a silent agent.
Broadcasts flood the agent graph and duplicates are dropped by origin.

State transitions are pure functions of (state, message); messages an
agent cannot yet act on (a next-iteration domain sync, an inquiry arriving
mid-iteration) are cached or buffered, and anything genuinely impossible
raises ProtocolError with a state dump.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import ProtocolError
from .intervals import Interval, interval
from .mastn import AgentView, Mastn, agent_adjacency, agent_view, components
from .sim import (
    AgentMessage,
    LogEntry,
    MsgKind,
    SimConfig,
    SimReport,
    TreeInfo,
    echo_setup,
    run_simulation,
)
from .solver import build_arcs


class Phase(Enum):
    SWEEPING = "Sweeping"
    AWAIT_SYNC = "AwaitSync"
    AWAIT_TERMINATION = "AwaitTermination"
    DONE = "Done"


# external update arc: (peer key, lower summand, upper summand, dead)
ExtArc = tuple[tuple[int, int], int | None, int | None, bool]


class SolverAgent:
    """One agent's protocol engine; driven by run_simulation."""

    # domain syncs are consumed at the sweep that uses them, so their clock
    # stamps are absorbed then, not at delivery
    deferred_clock_kinds = frozenset({MsgKind.DOMAIN_SYNC})

    def __init__(self, view: AgentView, tree: TreeInfo):
        self.agent_id = view.agent_id
        self.view = view
        self.tree = tree
        self.max_k = tree.n_total  # sweep budget: component variables + zero point
        self.clock = 0
        self.checks = 0
        self.domain_updates = 0
        self.done = False
        self.result: str | None = None
        self.k = 0
        self.phase = Phase.AWAIT_SYNC

        stn = view.stn
        self._n = stn.n
        self._base_lo = [stn.domain(v).lo for v in range(stn.n)]
        self._base_hi = [stn.domain(v).hi for v in range(stn.n)]
        self._lo = list(self._base_lo)
        self._hi = list(self._base_hi)
        self._local_arcs = build_arcs(stn)
        self._ext_arcs: list[list[ExtArc]] = [[] for _ in range(stn.n)]
        for edge in view.externals:
            ivl = edge.ivl
            key = (edge.peer_agent, edge.peer_var)
            if ivl.is_empty:
                self._ext_arcs[edge.local_var].append((key, None, None, True))
            else:
                a, b = ivl.lo, ivl.hi
                self._ext_arcs[edge.local_var].append(
                    (key, None if b is None else -b, None if a is None else -a, False)
                )
        for lst in self._ext_arcs:
            lst.sort(key=lambda arc: arc[0])

        # (neighbor, k) -> (arrival stamp, {(neighbor, var): (lo, hi)})
        self._sync_cache: dict[
            tuple[int, int], tuple[int, dict[tuple[int, int], tuple[int, int]]]
        ] = {}
        self._stable = [False] * stn.n
        self._buffered_inquiries: set[int] = set()
        self._feedback_pending: set[int] = set()
        self._inquiry_handled = False
        self._seen_broadcasts: set[tuple[int, MsgKind]] = set()
        self._out: list[AgentMessage] = []

    # -- runtime protocol --------------------------------------------

    def on_start(self) -> list[AgentMessage]:
        self._advance()
        self._pump()
        return self._drain()

    def on_message(self, msg: AgentMessage) -> list[AgentMessage]:
        kind = msg.kind
        if kind is MsgKind.DOMAIN_SYNC:
            self._on_sync(msg)
        elif kind is MsgKind.INQUIRY:
            self._on_inquiry(msg)
        elif kind is MsgKind.FEEDBACK:
            self._on_feedback(msg)
        elif kind is MsgKind.ARC_CONSISTENT:
            self._on_arc_consistent(msg)
        elif kind is MsgKind.INCONSISTENT:
            self._on_inconsistent(msg)
        else:
            self._fail(f"unexpected {kind.value} during the solve run")
        return self._drain()

    def domains(self) -> tuple[Interval, ...]:
        return tuple(interval(a, b) for a, b in zip(self._lo, self._hi))

    # -- message handlers -------------------------------------------

    def _on_sync(self, msg: AgentMessage) -> None:
        if msg.sender not in self.view.neighbors or msg.domains is None:
            self._fail(f"malformed domain sync from {msg.sender}")
        self._sync_cache[(msg.sender, msg.k)] = (
            msg.arrival,
            {key: (ivl.lo, ivl.hi) for key, ivl in msg.domains.items()},
        )
        if self.phase is Phase.AWAIT_TERMINATION:
            # a neighbor moved on, so iteration k is not globally quiescent;
            # abandon the round and join the next iteration.  This consumes
            # the message, so its stamp lands on the clock now.
            if msg.k != self.k + 1:
                self._fail(f"domain sync for iteration {msg.k} while waiting at {self.k}")
            if msg.arrival > self.clock:
                self.clock = msg.arrival
            self._advance()
        elif self.phase is Phase.AWAIT_SYNC:
            if msg.k not in (self.k, self.k + 1):
                self._fail(f"domain sync for iteration {msg.k} while at {self.k}")
        else:
            self._fail(f"domain sync in phase {self.phase.value}")
        self._pump()

    def _on_inquiry(self, msg: AgentMessage) -> None:
        if msg.sender != self.tree.parent:
            self._fail(f"inquiry from non-parent {msg.sender}")
        if msg.k < self.k:
            return  # a stale round, superseded by a later iteration
        if msg.k > self.k:
            self._fail(f"inquiry for future iteration {msg.k}")
        if self.phase is Phase.AWAIT_TERMINATION:
            self._handle_inquiry()
        elif self.phase is Phase.AWAIT_SYNC:
            self._buffered_inquiries.add(msg.k)
        else:
            self._fail(f"inquiry in phase {self.phase.value}")

    def _on_feedback(self, msg: AgentMessage) -> None:
        if msg.sender not in self.tree.children:
            self._fail(f"feedback from non-child {msg.sender}")
        if msg.k < self.k:
            return  # feedback of an abandoned round
        if msg.k > self.k or self.phase is not Phase.AWAIT_TERMINATION:
            self._fail(f"feedback for iteration {msg.k} in phase {self.phase.value}")
        if msg.sender not in self._feedback_pending:
            self._fail(f"duplicate feedback from {msg.sender}")
        self._feedback_pending.discard(msg.sender)
        if self._feedback_pending:
            return
        if not self._inquiry_handled and not self.tree.is_root:
            self._fail("feedback complete before the inquiry arrived")
        if self.tree.is_root:
            self._originate_broadcast(MsgKind.ARC_CONSISTENT, k=self.k)
            self._finish("consistent")
        else:
            self._emit(MsgKind.FEEDBACK, self.tree.parent, k=self.k)

    def _on_arc_consistent(self, msg: AgentMessage) -> None:
        if not self._register_broadcast(msg):
            return
        self._forward_broadcast(msg)
        # the verdict can only fire when the whole component is quiescent at
        # the same iteration; anything else is a protocol bug
        if msg.k != self.k or self.phase is not Phase.AWAIT_TERMINATION:
            self._fail(f"consistent verdict for iteration {msg.k}")
        self._finish("consistent")

    def _on_inconsistent(self, msg: AgentMessage) -> None:
        if not self._register_broadcast(msg):
            return
        self._forward_broadcast(msg)
        self._finish("inconsistent")

    # -- iteration machinery -----------------------------------------

    def _advance(self) -> None:
        """Enter the next iteration, or give up when the budget is spent.

        A network that still changes after a sweep per vertex has no
        solution, and the verdict is broadcast so no neighbor is left
        waiting on this agent's next domain sync.
        """
        if self.k + 1 > self.max_k:
            self._originate_broadcast(MsgKind.INCONSISTENT)
            self._finish("inconsistent")
            return
        self.k += 1
        self._buffered_inquiries = {k for k in self._buffered_inquiries if k >= self.k}
        self._sync_cache = {
            key: payload for key, payload in self._sync_cache.items() if key[1] >= self.k
        }
        for j in self.view.neighbors:
            payload = {
                (self.agent_id, v): interval(self._lo[v], self._hi[v])
                for v in self.view.shared_with[j]
            }
            self._emit(MsgKind.DOMAIN_SYNC, j, k=self.k, domains=payload)
        self.phase = Phase.AWAIT_SYNC

    def _pump(self) -> None:
        """Sweep as long as the next iteration's inputs are already here."""
        while not self.done and self.phase is Phase.AWAIT_SYNC and self._sync_ready():
            self._sweep()

    def _sync_ready(self) -> bool:
        return all((j, self.k) in self._sync_cache for j in self.view.neighbors)

    def _sweep(self) -> None:
        self.phase = Phase.SWEEPING
        ext_domains: dict[tuple[int, int], tuple[int, int]] = {}
        for j in self.view.neighbors:
            stamp, payload = self._sync_cache[(j, self.k)]
            if stamp > self.clock:  # receiving the awaited domains
                self.clock = stamp
            ext_domains.update(payload)
        lo = self._lo
        hi = self._hi
        for v in range(self._n):
            lv = lo[v]
            hv = hi[v]
            old_lo = lv
            old_hi = hv
            blv = self._base_lo[v]
            if blv > lv:
                lv = blv
            bhv = self._base_hi[v]
            if bhv < hv:
                hv = bhv
            self.domain_updates += 1
            for w, add_lo, add_hi, dead in self._local_arcs[v]:
                self.checks += 1
                self.clock += 1
                if dead:
                    hv = lv - 1
                    continue
                if add_lo is not None:
                    cand = lo[w] + add_lo
                    if cand > lv:
                        lv = cand
                if add_hi is not None:
                    cand = hi[w] + add_hi
                    if cand < hv:
                        hv = cand
            for key, add_lo, add_hi, dead in self._ext_arcs[v]:
                self.checks += 1
                self.clock += 1
                if dead:
                    hv = lv - 1
                    continue
                plo, phi = ext_domains[key]
                if add_lo is not None:
                    cand = plo + add_lo
                    if cand > lv:
                        lv = cand
                if add_hi is not None:
                    cand = phi + add_hi
                    if cand < hv:
                        hv = cand
            lo[v] = lv
            hi[v] = hv
            if lv > hv:
                self._originate_broadcast(MsgKind.INCONSISTENT)
                self._finish("inconsistent")
                return
            self._stable[v] = lv == old_lo and hv == old_hi
        if not all(self._stable):
            # the not-quiescent signal is indirect: moving on and sending the
            # next domain sync is what wakes waiting neighbors
            self._advance()
            return
        if any((j, self.k + 1) in self._sync_cache for j in self.view.neighbors):
            # a neighbor already moved past k, so this round can never
            # complete; its buffered sync plays the role a late-arriving one
            # would have played and sends this agent straight to k+1
            self._advance()
            return
        self.phase = Phase.AWAIT_TERMINATION
        self._feedback_pending = set(self.tree.children)
        self._inquiry_handled = False
        if self.tree.is_root:
            if not self.tree.children:
                self._finish("consistent")  # single-agent component
                return
            for child in self.tree.children:
                self._emit(MsgKind.INQUIRY, child, k=self.k)
            self._inquiry_handled = True
        elif self.k in self._buffered_inquiries:
            self._handle_inquiry()

    def _handle_inquiry(self) -> None:
        if self._inquiry_handled:
            return
        self._inquiry_handled = True
        if self.tree.is_leaf:
            self._emit(MsgKind.FEEDBACK, self.tree.parent, k=self.k)
        else:
            for child in self.tree.children:
                self._emit(MsgKind.INQUIRY, child, k=self.k)

    # -- plumbing ------------------------------------------------------

    def _emit(self, kind: MsgKind, receiver: int, **fields) -> None:
        self._out.append(
            AgentMessage(kind, self.agent_id, receiver, clock=self.clock, **fields)
        )

    def _originate_broadcast(self, kind: MsgKind, k: int | None = None) -> None:
        self._seen_broadcasts.add((self.agent_id, kind))
        for j in self.view.neighbors:
            self._emit(kind, j, k=k, origin=self.agent_id)

    def _register_broadcast(self, msg: AgentMessage) -> bool:
        """True when this copy is new and must be processed."""
        key = (msg.origin, msg.kind)
        if key in self._seen_broadcasts:
            return False
        self._seen_broadcasts.add(key)
        return True

    def _forward_broadcast(self, msg: AgentMessage) -> None:
        for j in self.view.neighbors:
            if j != msg.sender:
                self._emit(msg.kind, j, k=msg.k, origin=msg.origin)

    def _finish(self, verdict: str) -> None:
        self.done = True
        self.result = verdict
        self.phase = Phase.DONE

    def _drain(self) -> list[AgentMessage]:
        out = self._out
        self._out = []
        return out

    def _fail(self, reason: str) -> None:
        raise ProtocolError(
            f"agent {self.agent_id}: {reason} "
            f"(phase={self.phase.value}, k={self.k}, q={sum(self._stable)}/{self._n})"
        )


@dataclass
class DistributedRun:
    """Everything a distributed solve produces."""

    verdict: str
    agent_domains: list[tuple[Interval, ...]] | None
    iterations: int
    checks: int
    domain_updates: int
    nccc: int
    messages: int
    setup_messages: int
    histogram: dict[str, int]
    log: list[LogEntry]
    trees: dict[int, TreeInfo]
    agent_checks: list[int]


def solve_distributed(m: Mastn, cfg: SimConfig | None = None) -> DistributedRun:
    """Run the full protocol: setup wave per component, then the solve run.

    On consistent input the per-agent domains equal the centralized closure
    of the flattened network; on inconsistent input every agent of the
    affected component reports the inconsistent verdict.  Disconnected
    agent graphs run one protocol instance per component inside the same
    simulation; the overall verdict is inconsistent when any component is.
    """
    if cfg is None:
        cfg = SimConfig()
    m.validate()
    views = [agent_view(m, i) for i in range(m.p)]
    adjacency = agent_adjacency(m)
    var_counts = {i: m.agents[i].n for i in range(m.p)}
    trees: dict[int, TreeInfo] = {}
    setup_msgs: list[AgentMessage] = []
    next_id = 0
    for comp in components(adjacency, m.p):
        tree, _, delivered, next_id = echo_setup(comp, adjacency, var_counts, next_id)
        trees.update(tree)
        setup_msgs.extend(delivered)
    agents = [SolverAgent(views[i], trees[i]) for i in range(m.p)]
    report: SimReport = run_simulation(agents, cfg, msg_id_start=next_id)

    log = [LogEntry(i + 1, msg) for i, msg in enumerate(setup_msgs)]
    offset = len(log)
    log.extend(LogEntry(offset + e.step, e.message) for e in report.log)
    histogram = dict(report.histogram)
    for msg in setup_msgs:
        histogram[msg.kind.value] = histogram.get(msg.kind.value, 0) + 1

    verdict = "inconsistent" if any(a.result == "inconsistent" for a in agents) else "consistent"
    agent_domains = [a.domains() for a in agents] if verdict == "consistent" else None
    return DistributedRun(
        verdict=verdict,
        agent_domains=agent_domains,
        iterations=max(a.k for a in agents),
        checks=sum(a.checks for a in agents),
        domain_updates=sum(a.domain_updates for a in agents),
        nccc=report.nccc,
        messages=len(setup_msgs) + report.message_count,
        setup_messages=len(setup_msgs),
        histogram=histogram,
        log=log,
        trees=trees,
        agent_checks=[a.checks for a in agents],
    )

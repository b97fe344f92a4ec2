"""Shortest-path ground truth for the sweep-based solver.

The network maps onto a weighted digraph over the variables plus the zero
time point (vertex index n): a constraint [a, b] from v to w becomes the
edge v->w with weight b and the edge w->v with weight -a, and each domain
contributes the same pair of edges from and to the zero point.  Infinite
endpoints contribute no edge.  Bellman-Ford from the zero point in both
directions then yields the minimal domains, or an explicit negative cycle
when the network is inconsistent.

This module deliberately shares no propagation code with the solver so the
two routes can check each other.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .intervals import Interval, interval
from .stn import Stn

_FW_LIMIT = 200  # all-pairs is a test fixture; cubic cost is capped on purpose


@dataclass(frozen=True)
class NegativeCycle:
    """Witness of inconsistency: a closed vertex walk of negative total weight.

    Vertex n stands for the zero time point.  The weight re-sums the edge
    list, so the witness is self-validating.
    """

    vertices: tuple[int, ...]
    weight: int


def _edges(net: Stn) -> list[tuple[int, int, int]]:
    o = net.n
    edges: list[tuple[int, int, int]] = []
    for v in range(net.n):
        d = net.domain(v)
        edges.append((o, v, d.hi))
        edges.append((v, o, -d.lo))
    for v, w, ivl in net.pairs():
        if ivl.is_empty:
            # an empty constraint forbids every difference; the equivalent
            # weighted form is w - v <= -1 and v - w <= -1, an explicit
            # negative 2-cycle
            edges.append((v, w, -1))
            edges.append((w, v, -1))
            continue
        if ivl.hi is not None:
            edges.append((v, w, ivl.hi))
        if ivl.lo is not None:
            edges.append((w, v, -ivl.lo))
    return edges


def _bellman_ford(nv: int, edges: list[tuple[int, int, int]], src: int):
    """Single-source distances; returns (dist, pred, still_relaxing_edge)."""
    inf = float("inf")
    dist: list = [inf] * nv
    pred: list[int | None] = [None] * nv
    dist[src] = 0
    for _ in range(nv - 1):
        changed = False
        for u, v, w in edges:
            nd = dist[u] + w
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                changed = True
        if not changed:
            return dist, pred, None
    for u, v, w in edges:
        if dist[u] + w < dist[v]:
            pred[v] = u
            return dist, pred, (u, v, w)
    return dist, pred, None


def _extract_cycle(pred: list[int | None], start: int, nv: int) -> tuple[int, ...]:
    """Walk the predecessor graph back far enough to land on the cycle."""
    x = start
    for _ in range(nv):
        nxt = pred[x]
        if nxt is None:
            raise RuntimeError("predecessor walk left the relaxation graph")
        x = nxt
    cycle = [x]
    y = pred[x]
    while y != x:
        cycle.append(y)
        y = pred[y]
    cycle.append(x)
    cycle.reverse()  # pred points against edge direction
    return tuple(cycle)


def _cycle_weight(cycle: tuple[int, ...], edges: list[tuple[int, int, int]]) -> int:
    weight_of = {(u, v): w for u, v, w in edges}
    total = 0
    for u, v in zip(cycle, cycle[1:]):
        total += weight_of[(u, v)]
    return total


def _witness(pred, start, nv, edges, reverse: bool) -> NegativeCycle:
    cycle = _extract_cycle(pred, start, nv)
    if reverse:
        cycle = tuple(reversed(cycle))
    weight = _cycle_weight(cycle, edges)
    if weight >= 0:
        raise RuntimeError("negative-cycle witness failed re-summation")
    return NegativeCycle(cycle, weight)


def oracle_minimal_domains(net: Stn) -> list[Interval] | NegativeCycle:
    """Minimal domain of every variable, or a validated negative cycle."""
    net.validate()
    nv = net.n + 1
    edges = _edges(net)
    dist_from, pred, neg = _bellman_ford(nv, edges, net.n)
    if neg is not None:
        return _witness(pred, neg[1], nv, edges, reverse=False)
    reversed_edges = [(v, u, w) for u, v, w in edges]
    dist_to, pred_r, neg_r = _bellman_ford(nv, reversed_edges, net.n)
    if neg_r is not None:  # unreachable in practice: pass one sees every cycle
        return _witness(pred_r, neg_r[1], nv, edges, reverse=True)
    return [interval(-dist_to[v], dist_from[v]) for v in range(net.n)]


def minimal_constraint_matrix(net: Stn) -> list[list[int | float]]:
    """All-pairs shortest distances over variables plus the zero point.

    Precondition: the network is consistent (check with
    oracle_minimal_domains first); a negative diagonal raises.
    """
    net.validate()
    if net.n > _FW_LIMIT:
        raise ValidationError(f"all-pairs oracle is limited to n <= {_FW_LIMIT}")
    nv = net.n + 1
    inf = float("inf")
    dist = [[inf] * nv for _ in range(nv)]
    for i in range(nv):
        dist[i][i] = 0
    for u, v, w in _edges(net):
        if w < dist[u][v]:
            dist[u][v] = w
    for k in range(nv):
        dk = dist[k]
        for i in range(nv):
            dik = dist[i][k]
            if dik == inf:
                continue
            di = dist[i]
            for j in range(nv):
                nd = dik + dk[j]
                if nd < di[j]:
                    di[j] = nd
    for i in range(nv):
        if dist[i][i] < 0:
            raise ValidationError("network is inconsistent; minimal constraints undefined")
    return dist


def oracle_minimal_constraint(net: Stn, v: int, w: int) -> Interval:
    """Tightest relation from v to w implied by the whole network."""
    if not 0 <= v < net.n or not 0 <= w < net.n:
        raise ValidationError(f"unknown variable pair ({v}, {w})")
    dist = minimal_constraint_matrix(net)
    return interval(-dist[w][v], dist[v][w])

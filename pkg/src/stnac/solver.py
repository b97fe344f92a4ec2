"""Centralized arc-consistency solver for simple temporal networks.

enforce_ac() repeatedly sweeps the variables in ascending index order,
tightening each domain against every incident constraint:

    I_v <- I_v  intersect  (I_w compose I_wv)

A run ends when a full sweep changes nothing (the closure is reached), a
domain empties, or the budget of n + 1 sweeps is exhausted; the latter two
both mean the network has no solution.  On consistent input the closure's
domains are minimal: every value in them extends to a full solution, and
the vectors of all lower (or all upper) endpoints are themselves solutions.

Each evaluation of the update rule against a pairwise constraint counts as
one constraint check.  The domain itself acts as a virtual edge from the
zero time point and is re-applied first in every sweep of a variable;
those evaluations are tallied separately as domain updates.  Sweep order
is fixed (variables ascending, neighbors ascending within a variable), so
identical inputs give identical counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ValidationError
from .intervals import Interval, interval
from .rng import SplitMix64
from .stn import Stn

Assignment = list[int]


@dataclass(frozen=True)
class AcClosure:
    """Arc-consistent fixpoint: minimal domains plus effort counters."""

    domains: tuple[Interval, ...]
    iterations: int
    checks: int
    domain_updates: int


@dataclass(frozen=True)
class AcInconsistent:
    """No solution: the domain of `witness` emptied, or None when the
    sweep budget ran out without reaching a fixpoint."""

    witness: int | None
    iterations: int
    checks: int
    domain_updates: int

    @property
    def cap_exhausted(self) -> bool:
        return self.witness is None


AcOutcome = AcClosure | AcInconsistent

# One directed update arc: (source var, lower summand, upper summand, dead).
# Tightening v against neighbor w applies lo_v = max(lo_v, lo_w + add_lo) and
# hi_v = min(hi_v, hi_w + add_hi); None skips a side (one-sided constraint)
# and dead marks an empty constraint, which empties the domain outright.
Arc = tuple[int, int | None, int | None, bool]


def build_arcs(net: Stn) -> list[list[Arc]]:
    """Per-variable incoming update arcs, neighbors in ascending order."""
    arcs: list[list[Arc]] = [[] for _ in range(net.n)]
    for v, w, ivl in net.pairs():
        if ivl.is_empty:
            arcs[v].append((w, None, None, True))
            arcs[w].append((v, None, None, True))
            continue
        a, b = ivl.lo, ivl.hi
        # from w to v the constraint is [-b, -a]
        arcs[v].append((w, None if b is None else -b, None if a is None else -a, False))
        arcs[w].append((v, a, b, False))
    for lst in arcs:
        lst.sort(key=lambda arc: arc[0])
    return arcs


def propagate(
    arcs: list[list[Arc]],
    lo: list[int],
    hi: list[int],
    base_lo: Sequence[int],
    base_hi: Sequence[int],
    max_sweeps: int,
) -> tuple[bool, int | None, int, int, int]:
    """Sweep lo/hi in place until stable, empty, or out of budget.

    Returns (stable, witness, sweeps, checks, domain_updates).  The bound
    magnitudes stay within a few times the parse-time cap, so the plain
    integer sums here cannot reach the 64-bit overflow range.
    """
    n = len(lo)
    checks = 0
    dom_updates = 0
    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        stable = True
        for v in range(n):
            lv = lo[v]
            hv = hi[v]
            old_lo = lv
            old_hi = hv
            # the zero-point edge first: re-intersect with the run's start domain
            blv = base_lo[v]
            if blv > lv:
                lv = blv
            bhv = base_hi[v]
            if bhv < hv:
                hv = bhv
            dom_updates += 1
            for w, add_lo, add_hi, dead in arcs[v]:
                checks += 1
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
            lo[v] = lv
            hi[v] = hv
            if lv > hv:
                return False, v, sweeps, checks, dom_updates
            if lv != old_lo or hv != old_hi:
                stable = False
        if stable:
            return True, None, sweeps, checks, dom_updates
    return False, None, sweeps, checks, dom_updates


def _start_domains(net: Stn, domains: Sequence[Interval] | None) -> list[Interval]:
    if domains is None:
        return [net.domain(v) for v in range(net.n)]
    if len(domains) != net.n:
        raise ValidationError(f"expected {net.n} domains, got {len(domains)}")
    for v, d in enumerate(domains):
        if d.is_empty or not d.is_finite:
            raise ValidationError(f"start domain of variable {v} must be finite and non-empty")
    return list(domains)


def enforce_ac(net: Stn, domains: Sequence[Interval] | None = None) -> AcOutcome:
    """Tighten all domains to the arc-consistent closure or prove inconsistency.

    `domains` optionally overrides the network's stored domains as the
    starting point (they then also serve as the virtual zero-point edges).
    """
    net.validate()
    start = _start_domains(net, domains)
    lo = [d.lo for d in start]
    hi = [d.hi for d in start]
    arcs = build_arcs(net)
    stable, witness, sweeps, checks, dom_updates = propagate(
        arcs, lo, hi, list(lo), list(hi), net.n + 1
    )
    if stable:
        closed = tuple(interval(a, b) for a, b in zip(lo, hi))
        return AcClosure(closed, sweeps, checks, dom_updates)
    return AcInconsistent(witness, sweeps, checks, dom_updates)


def is_arc_consistent(
    net: Stn, domains: Sequence[Interval] | None = None
) -> tuple[bool, tuple[int, int] | None]:
    """Test the subset criterion I_v issubset (I_w compose I_wv) everywhere.

    Checks the domains as zero-point edges first (reported as the pair
    (v, v)), then every stored pair in both directions.  Returns the first
    violated arc, or (True, None).  Unlike the solver, the predicate takes
    any domain vector, including empty domains, which simply fail their
    zero-point test.
    """
    net.validate()
    if domains is None:
        cur = [net.domain(v) for v in range(net.n)]
    else:
        if len(domains) != net.n:
            raise ValidationError(f"expected {net.n} domains, got {len(domains)}")
        cur = list(domains)
    zero = Interval(0, 0)
    for v in range(net.n):
        stored = net.domain(v)
        if not cur[v].issubset(stored):
            return False, (v, v)
        if not zero.issubset(cur[v].compose(stored.inverse())):
            return False, (v, v)
    for v, w, ivl in net.pairs():
        if not cur[v].issubset(cur[w].compose(ivl.inverse())):
            return False, (v, w)
        if not cur[w].issubset(cur[v].compose(ivl)):
            return False, (w, v)
    return True, None


def extract_bound_solution(closure: AcClosure, side: str) -> Assignment:
    """All lower endpoints (side='lower') or all upper endpoints (side='upper').

    Either vector satisfies every domain and constraint of the closed network.
    """
    if not isinstance(closure, AcClosure):
        raise ValidationError("bound solutions exist only for consistent closures")
    if side == "lower":
        return [d.lo for d in closure.domains]
    if side == "upper":
        return [d.hi for d in closure.domains]
    raise ValidationError(f"side must be 'lower' or 'upper', got {side!r}")


def sample_solution(net: Stn, closure: AcClosure, seed: int) -> Assignment:
    """Draw one solution: instantiate variables in index order, each to a
    seeded-uniform value of its current domain, re-closing after each pick."""
    if not isinstance(closure, AcClosure):
        raise ValidationError("sampling requires a consistent closure")
    rng = SplitMix64(seed)
    arcs = build_arcs(net)
    lo = [d.lo for d in closure.domains]
    hi = [d.hi for d in closure.domains]
    for v in range(net.n):
        t = rng.randint(lo[v], hi[v])
        lo[v] = t
        hi[v] = t
        stable, _, _, _, _ = propagate(arcs, lo, hi, list(lo), list(hi), net.n + 1)
        if not stable:
            raise RuntimeError(
                "re-propagation from a closure emptied a domain; minimality is broken"
            )
    return lo


def verify_assignment(
    net: Stn, assignment: Sequence[int]
) -> tuple[bool, tuple | None]:
    """Check every domain membership and constraint inequality.

    Returns the first violation as ('domain', v) or ('constraint', v, w).
    """
    net.validate()
    if len(assignment) != net.n:
        raise ValidationError(f"expected {net.n} values, got {len(assignment)}")
    for v in range(net.n):
        if assignment[v] not in net.domain(v):
            return False, ("domain", v)
    for v, w, ivl in net.pairs():
        if (assignment[w] - assignment[v]) not in ivl:
            return False, ("constraint", v, w)
    return True, None

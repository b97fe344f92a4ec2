"""Shared helpers for the test suite."""

from pathlib import Path

from stnac import Interval, Stn, interval

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def scaled_interval(ivl: Interval, factor: int) -> Interval:
    lo = None if ivl.lo is None else factor * ivl.lo
    hi = None if ivl.hi is None else factor * ivl.hi
    return interval(lo, hi)


def scale_stn(net: Stn, factor: int) -> Stn:
    """Copy of the network with every domain and constraint bound scaled."""
    out = Stn(net.n)
    for v in range(net.n):
        out.set_domain(v, scaled_interval(net.domain(v), factor))
        if net.name(v) is not None:
            out.set_name(v, net.name(v))
    for v, w, ivl in net.pairs():
        out.add_constraint(v, w, scaled_interval(ivl, factor))
    return out


def two_var_net() -> Stn:
    """x, y in [0, 10] with y - x in [2, 3]; closure is x [0,8], y [2,10]."""
    net = Stn(2)
    net.set_domain(0, interval(0, 10))
    net.set_domain(1, interval(0, 10))
    net.add_constraint(0, 1, interval(2, 3))
    return net


def cycle3_net() -> Stn:
    """Three positive steps in a directed cycle: inconsistent."""
    net = Stn(3)
    for v in range(3):
        net.set_domain(v, interval(0, 100))
    net.add_constraint(0, 1, interval(1, 2))
    net.add_constraint(1, 2, interval(1, 2))
    net.add_constraint(2, 0, interval(1, 2))
    return net

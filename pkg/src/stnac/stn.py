"""Simple temporal network model and its text file format.

A network stores one domain interval per variable and at most one
constraint interval per unordered variable pair.  The interval is kept in
the low-to-high index direction; queries in the other direction answer
with the inverse, so both orientations always agree.  Domains must be
finite on both ends and non-empty: the solver relies on finite bounds to
detect inconsistency within its sweep budget.

File format (UTF-8, '#' starts a comment, tokens whitespace-separated)::

    stn <n>
    var <index> [name]            # optional naming
    domain <v> <a> <b>            # required once per variable, a and b finite
    constraint <v> <w> <a> <b>    # a <= w - v <= b; -inf/+inf allowed, or 'empty'

Duplicate constraint lines intersect, matching conjunction semantics.
Finite endpoint magnitudes are capped at parse time (default 2**40) so no
propagation over the network can overflow 64-bit arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FormatError, ValidationError
from .intervals import Interval, interval_from_tokens

DEFAULT_MAGNITUDE_CAP = 2**40


@dataclass(frozen=True)
class ConstraintUpdate:
    """Report from inserting a constraint."""

    changed: bool
    is_empty: bool


class Stn:
    """Mutable while being built; treat as read-only once handed to a solver."""

    def __init__(self, n: int):
        if n < 0:
            raise ValidationError(f"variable count must be non-negative, got {n}")
        self.n = n
        self._names: list[str | None] = [None] * n
        self._by_name: dict[str, int] = {}
        self._domains: list[Interval | None] = [None] * n
        self._cons: dict[tuple[int, int], Interval] = {}
        self._adj: list[set[int]] = [set() for _ in range(n)]

    # -- variables -------------------------------------------------

    def _check_var(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise ValidationError(f"unknown variable {v} (network has {self.n})")

    def set_name(self, v: int, name: str) -> None:
        self._check_var(v)
        if name in self._by_name and self._by_name[name] != v:
            raise ValidationError(f"duplicate variable name {name!r}")
        old = self._names[v]
        if old is not None:
            del self._by_name[old]
        self._names[v] = name
        self._by_name[name] = v

    def name(self, v: int) -> str | None:
        self._check_var(v)
        return self._names[v]

    def index_of(self, name: str) -> int | None:
        return self._by_name.get(name)

    def label(self, v: int) -> str:
        """Display name: the declared name, or v<index>."""
        return self._names[v] if self._names[v] is not None else f"v{v}"

    # -- domains ---------------------------------------------------

    def set_domain(self, v: int, ivl: Interval) -> None:
        self._check_var(v)
        if ivl.is_empty:
            raise ValidationError(f"domain of variable {v} must be non-empty")
        if not ivl.is_finite:
            raise ValidationError(f"domain of variable {v} must be finite on both ends")
        self._domains[v] = ivl

    def domain(self, v: int) -> Interval:
        self._check_var(v)
        d = self._domains[v]
        if d is None:
            raise ValidationError(f"variable {v} has no domain")
        return d

    def has_domain(self, v: int) -> bool:
        self._check_var(v)
        return self._domains[v] is not None

    # -- constraints -----------------------------------------------

    def add_constraint(self, v: int, w: int, ivl: Interval) -> ConstraintUpdate:
        """Insert the constraint ivl from v to w, intersecting any existing one.

        The interval is stored in the low-index-to-high-index direction; an
        insertion in the other direction is inverted first, so inserting a
        constraint and its inverse is a no-op.
        """
        self._check_var(v)
        self._check_var(w)
        if v == w:
            raise ValidationError(f"self-loop constraint on variable {v}")
        if v < w:
            key, stored = (v, w), ivl
        else:
            key, stored = (w, v), ivl.inverse()
        old = self._cons.get(key)
        new = stored if old is None else old.intersect(stored)
        self._cons[key] = new
        self._adj[v].add(w)
        self._adj[w].add(v)
        return ConstraintUpdate(changed=new != old, is_empty=new.is_empty)

    def constraint(self, v: int, w: int) -> Interval | None:
        """The directed interval from v to w, or None when unconstrained."""
        self._check_var(v)
        self._check_var(w)
        if v == w:
            raise ValidationError("no constraint between a variable and itself")
        if v < w:
            return self._cons.get((v, w))
        stored = self._cons.get((w, v))
        return None if stored is None else stored.inverse()

    def pairs(self):
        """Stored constraints as (v, w, interval) with v < w, ascending."""
        for key in sorted(self._cons):
            yield key[0], key[1], self._cons[key]

    def neighbors(self, v: int) -> list[int]:
        self._check_var(v)
        return sorted(self._adj[v])

    @property
    def e(self) -> int:
        return len(self._cons)

    # -- whole-network helpers --------------------------------------

    def validate(self) -> None:
        for v in range(self.n):
            if self._domains[v] is None:
                raise ValidationError(f"variable {v} has no domain")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Stn):
            return NotImplemented
        return (
            self.n == other.n
            and self._names == other._names
            and self._domains == other._domains
            and self._cons == other._cons
        )

    def __repr__(self) -> str:
        return f"<Stn n={self.n} e={self.e}>"


def _finite_cap_check(ivl: Interval, cap: int, line: int) -> None:
    for end in (ivl.lo, ivl.hi):
        if end is not None and abs(end) > cap:
            raise FormatError(f"endpoint {end} exceeds the magnitude cap {cap}", line)


def apply_stn_line(
    net: Stn, tokens: list[str], lineno: int, magnitude_cap: int, seen_domain: set[int]
) -> None:
    """Apply one var/domain/constraint line; shared by the .stn and .mastn parsers."""
    kind = tokens[0]
    if kind == "var":
        if len(tokens) not in (2, 3):
            raise FormatError("expected 'var <index> [name]'", lineno)
        v = _parse_index(net, tokens[1], lineno)
        if len(tokens) == 3:
            _wrap(net.set_name, lineno, v, tokens[2])
    elif kind == "domain":
        if len(tokens) != 4:
            raise FormatError("expected 'domain <v> <a> <b>'", lineno)
        v = _parse_index(net, tokens[1], lineno)
        if v in seen_domain:
            raise FormatError(f"domain of variable {v} redeclared", lineno)
        ivl = _parse_interval(tokens[2:], lineno)
        _finite_cap_check(ivl, magnitude_cap, lineno)
        _wrap(net.set_domain, lineno, v, ivl)
        seen_domain.add(v)
    elif kind == "constraint":
        if len(tokens) not in (4, 5):
            raise FormatError("expected 'constraint <v> <w> <a> <b>'", lineno)
        v = _parse_index(net, tokens[1], lineno)
        w = _parse_index(net, tokens[2], lineno)
        ivl = _parse_interval(tokens[3:], lineno)
        _finite_cap_check(ivl, magnitude_cap, lineno)
        _wrap(net.add_constraint, lineno, v, w, ivl)
    else:
        raise FormatError(f"unknown directive {kind!r}", lineno)


def parse_stn(text: str, magnitude_cap: int = DEFAULT_MAGNITUDE_CAP) -> Stn:
    """Parse the .stn text format; raises FormatError with a line number."""
    net: Stn | None = None
    seen_domain: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "stn":
            if net is not None:
                raise FormatError("duplicate 'stn' header", lineno)
            if len(tokens) != 2:
                raise FormatError("expected 'stn <n>'", lineno)
            net = Stn(_parse_count(tokens[1], lineno))
            continue
        if net is None:
            raise FormatError("file must start with 'stn <n>'", lineno)
        apply_stn_line(net, tokens, lineno, magnitude_cap, seen_domain)
    if net is None:
        raise FormatError("file must start with 'stn <n>'")
    try:
        net.validate()
    except ValidationError as exc:
        raise FormatError(str(exc)) from exc
    return net


def serialize_stn(net: Stn) -> str:
    """Emit the .stn form: variables and constraints in ascending order."""
    net.validate()
    lines = [f"stn {net.n}"]
    for v in range(net.n):
        if net.name(v) is not None:
            lines.append(f"var {v} {net.name(v)}")
    for v in range(net.n):
        lines.append(f"domain {v} {net.domain(v).to_tokens()}")
    for v, w, ivl in net.pairs():
        lines.append(f"constraint {v} {w} {ivl.to_tokens()}")
    return "\n".join(lines) + "\n"


def _parse_count(token: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise FormatError(f"expected an integer, got {token!r}", lineno) from None
    if value < 0:
        raise FormatError(f"count must be non-negative, got {value}", lineno)
    return value


def _parse_index(net: Stn, token: str, lineno: int) -> int:
    """A variable reference: an index, or a name declared on an earlier var line."""
    try:
        v = int(token)
    except ValueError:
        named = net.index_of(token)
        if named is None:
            raise FormatError(f"unknown variable {token!r}", lineno) from None
        return named
    if not 0 <= v < net.n:
        raise FormatError(f"unknown variable {v} (network has {net.n})", lineno)
    return v


def _parse_interval(tokens: list[str], lineno: int) -> Interval:
    try:
        return interval_from_tokens(tokens)
    except ValueError as exc:
        raise FormatError(str(exc), lineno) from None


def _wrap(fn, lineno: int, *args):
    try:
        return fn(*args)
    except ValidationError as exc:
        raise FormatError(str(exc), lineno) from None

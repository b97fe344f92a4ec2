"""Exact closed-interval arithmetic over integer time points.

Endpoints are 64-bit-range integers; a missing lower endpoint stands for
-inf and a missing upper endpoint for +inf.  The empty interval is a single
canonical value, so structural equality coincides with semantic equality.
All operations are side-effect free and values may be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BoundOverflowError

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


def _add(a: int | None, b: int | None) -> int | None:
    """Extended addition for same-side endpoints (None is the infinity)."""
    if a is None or b is None:
        return None
    s = a + b
    if s < INT64_MIN or s > INT64_MAX:
        raise BoundOverflowError(f"endpoint sum {s} leaves the 64-bit range")
    return s


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] over extended integers.

    ``lo is None`` encodes -inf and ``hi is None`` encodes +inf, so infinities
    only ever appear on their own side and sums never mix them.  Direct
    construction with finite lo > hi is rejected; build through interval(),
    which normalizes such pairs to EMPTY.
    """

    lo: int | None = None
    hi: int | None = None
    is_empty: bool = False

    def __post_init__(self) -> None:
        if self.is_empty:
            if self.lo is not None or self.hi is not None:
                raise ValueError("the empty interval carries no endpoints")
        elif self.lo is not None and self.hi is not None and self.lo > self.hi:
            raise ValueError("lo > hi; use interval() to normalize to EMPTY")

    @property
    def is_finite(self) -> bool:
        """True when no endpoint is infinite (vacuously true for EMPTY)."""
        return self.is_empty or (self.lo is not None and self.hi is not None)

    def __contains__(self, t: int) -> bool:
        if self.is_empty:
            return False
        if self.lo is not None and t < self.lo:
            return False
        return self.hi is None or t <= self.hi

    def issubset(self, other: Interval) -> bool:
        if self.is_empty:
            return True
        if other.is_empty:
            return False
        lo_ok = other.lo is None or (self.lo is not None and self.lo >= other.lo)
        hi_ok = other.hi is None or (self.hi is not None and self.hi <= other.hi)
        return lo_ok and hi_ok

    def intersect(self, other: Interval) -> Interval:
        """Conjunction of the two constraints; EMPTY absorbs."""
        if self.is_empty or other.is_empty:
            return EMPTY
        if self.lo is None:
            lo = other.lo
        elif other.lo is None:
            lo = self.lo
        else:
            lo = self.lo if self.lo >= other.lo else other.lo
        if self.hi is None:
            hi = other.hi
        elif other.hi is None:
            hi = self.hi
        else:
            hi = self.hi if self.hi <= other.hi else other.hi
        return interval(lo, hi)

    def compose(self, other: Interval) -> Interval:
        """Endpoint-wise sum: the relation inferred across a two-edge path.

        EMPTY is absorbing on either side.  Raises BoundOverflowError when a
        finite sum leaves the 64-bit range, which signals inputs outside the
        supported magnitude.
        """
        if self.is_empty or other.is_empty:
            return EMPTY
        return Interval(_add(self.lo, other.lo), _add(self.hi, other.hi))

    def inverse(self) -> Interval:
        """Mirror across zero: [a, b] -> [-b, -a]."""
        if self.is_empty:
            return EMPTY
        if self.lo == INT64_MIN or self.hi == INT64_MIN:
            raise BoundOverflowError("negating -2**63 leaves the 64-bit range")
        lo = None if self.hi is None else -self.hi
        hi = None if self.lo is None else -self.lo
        return Interval(lo, hi)

    def __str__(self) -> str:
        if self.is_empty:
            return "empty"
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "+inf" if self.hi is None else str(self.hi)
        return f"[{lo},{hi}]"

    def __repr__(self) -> str:
        return f"Interval({self})"

    def to_tokens(self) -> str:
        """Whitespace-separated endpoint form used by the file formats."""
        if self.is_empty:
            return "empty"
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "+inf" if self.hi is None else str(self.hi)
        return f"{lo} {hi}"


EMPTY = Interval(is_empty=True)


def interval(lo: int | None, hi: int | None) -> Interval:
    """Build [lo, hi], normalizing finite lo > hi to the canonical EMPTY."""
    if lo is not None and hi is not None and lo > hi:
        return EMPTY
    return Interval(lo, hi)


def point(t: int) -> Interval:
    return Interval(t, t)


def parse_lower(token: str) -> int | None:
    """Parse a lower-endpoint token; '-inf' means unbounded below."""
    if token == "-inf":
        return None
    if token == "+inf":
        raise ValueError("'+inf' cannot be a lower endpoint")
    return _parse_finite(token)


def parse_upper(token: str) -> int | None:
    """Parse an upper-endpoint token; '+inf' means unbounded above."""
    if token == "+inf":
        return None
    if token == "-inf":
        raise ValueError("'-inf' cannot be an upper endpoint")
    return _parse_finite(token)


def _parse_finite(token: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ValueError(f"expected an integer endpoint, got {token!r}") from None
    if value < INT64_MIN or value > INT64_MAX:
        raise ValueError(f"endpoint {value} leaves the 64-bit range")
    return value


def interval_from_tokens(tokens: list[str]) -> Interval:
    """Parse the textual interval form: 'a b' with -inf/+inf, or 'empty'."""
    if len(tokens) == 1 and tokens[0] == "empty":
        return EMPTY
    if len(tokens) != 2:
        raise ValueError(f"expected two endpoints or 'empty', got {tokens!r}")
    return interval(parse_lower(tokens[0]), parse_upper(tokens[1]))

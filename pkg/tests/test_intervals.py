import pytest

from stnac import EMPTY, BoundOverflowError, Interval, interval, point
from stnac.intervals import INT64_MAX, interval_from_tokens
from stnac.rng import SplitMix64


def rand_interval(rng, span=40, allow_empty=True, allow_inf=True):
    roll = rng.randbelow(10)
    if allow_empty and roll == 0:
        return EMPTY
    if allow_inf and roll == 1:
        return interval(None, rng.randint(-span, span))
    if allow_inf and roll == 2:
        return interval(rng.randint(-span, span), None)
    a = rng.randint(-span, span)
    return interval(a, rng.randint(a, span))


class TestIntersect:
    def test_overlap(self):
        assert interval(1, 4).intersect(interval(2, 6)) == interval(2, 4)

    def test_disjoint_normalizes_to_empty(self):
        assert interval(0, 1).intersect(interval(2, 3)) is EMPTY

    def test_one_sided(self):
        assert interval(None, 5).intersect(interval(3, None)) == interval(3, 5)

    def test_empty_absorbs(self):
        assert EMPTY.intersect(interval(0, 1)) is EMPTY
        assert interval(0, 1).intersect(EMPTY) is EMPTY


class TestCompose:
    def test_endpoint_sums(self):
        assert interval(1, 2).compose(interval(3, 5)) == interval(4, 7)

    def test_empty_absorbs_both_sides(self):
        assert interval(1, 2).compose(EMPTY) is EMPTY
        assert EMPTY.compose(interval(1, 2)) is EMPTY

    def test_infinity_absorption(self):
        assert interval(0, None).compose(interval(-3, 0)) == interval(-3, None)

    def test_overflow_reported(self):
        big = interval(INT64_MAX - 1, INT64_MAX - 1)
        with pytest.raises(BoundOverflowError):
            big.compose(interval(2, 2))


class TestInverse:
    def test_finite(self):
        assert interval(2, 3).inverse() == interval(-3, -2)

    def test_point(self):
        assert interval(-5, -5).inverse() == point(5)

    def test_empty(self):
        assert EMPTY.inverse() is EMPTY

    def test_one_sided(self):
        assert interval(0, None).inverse() == interval(None, 0)


class TestConstruction:
    def test_normalization(self):
        assert interval(3, 1) is EMPTY

    def test_direct_bad_construction_rejected(self):
        with pytest.raises(ValueError):
            Interval(3, 1)

    def test_membership(self):
        assert 2 in interval(1, 3)
        assert 4 not in interval(1, 3)
        assert 0 not in EMPTY
        assert 10**9 in interval(0, None)

    def test_str(self):
        assert str(interval(0, 8)) == "[0,8]"
        assert str(interval(None, 5)) == "[-inf,5]"
        assert str(EMPTY) == "empty"


class TestTokens:
    @pytest.mark.parametrize(
        "tokens,expected",
        [
            (["2", "5"], interval(2, 5)),
            (["-inf", "5"], interval(None, 5)),
            (["3", "+inf"], interval(3, None)),
            (["empty"], EMPTY),
        ],
    )
    def test_round_trip(self, tokens, expected):
        parsed = interval_from_tokens(tokens)
        assert parsed == expected
        assert interval_from_tokens(parsed.to_tokens().split()) == parsed

    def test_rejects_misplaced_infinities(self):
        with pytest.raises(ValueError):
            interval_from_tokens(["+inf", "3"])
        with pytest.raises(ValueError):
            interval_from_tokens(["3", "-inf"])

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            interval_from_tokens(["a", "b"])
        with pytest.raises(ValueError):
            interval_from_tokens(["1"])


class TestAlgebraicLaws:
    """Seeded property checks; the full-size suites run in acceptance."""

    def test_inverse_involution(self):
        rng = SplitMix64(11)
        for _ in range(2000):
            x = rand_interval(rng)
            assert x.inverse().inverse() == x

    def test_intersect_laws(self):
        rng = SplitMix64(12)
        for _ in range(2000):
            x, y, z = (rand_interval(rng) for _ in range(3))
            assert x.intersect(y) == y.intersect(x)
            assert x.intersect(x) == x
            assert x.intersect(y).intersect(z) == x.intersect(y.intersect(z))

    def test_compose_associative(self):
        rng = SplitMix64(13)
        for _ in range(2000):
            x, y, z = (rand_interval(rng) for _ in range(3))
            assert x.compose(y).compose(z) == x.compose(y.compose(z))

    def test_compose_distributes_over_nonempty_intersection(self):
        rng = SplitMix64(14)
        done = 0
        while done < 2000:
            x, y, z = (rand_interval(rng) for _ in range(3))
            meet = y.intersect(z)
            if meet.is_empty:
                continue
            done += 1
            assert x.compose(meet) == x.compose(y).intersect(x.compose(z))

    def test_compose_membership_matches_brute_force(self):
        rng = SplitMix64(15)
        for _ in range(300):
            a = rng.randint(-15, 15)
            x = interval(a, a + rng.randint(0, 12))
            b = rng.randint(-15, 15)
            y = interval(b, b + rng.randint(0, 12))
            composed = x.compose(y)
            lo, hi = x.lo + y.lo, x.hi + y.hi
            for t in range(lo - 2, hi + 3):
                expected = any(
                    t - u in y for u in range(x.lo, x.hi + 1)
                )
                assert (t in composed) == expected

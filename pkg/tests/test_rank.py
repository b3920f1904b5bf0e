import random

import pytest
from hypothesis import given, strategies as st

from crm_forge.rank import BadBounds, evenly_spaced_ranks, is_canonical, rank_between

canonical_ranks = st.from_regex(r"[a-z]*[b-z]", fullmatch=True).filter(lambda s: len(s) <= 12)


class TestRankBetween:
    def test_seed_value(self):
        assert rank_between(None, None) == "n"

    def test_midpoint(self):
        result = rank_between("b", "d")
        assert result == "c"
        assert "b" < result < "d"

    def test_adjacent_appends_digit(self):
        result = rank_between("b", "c")
        assert result == "bn"
        assert "b" < result < "c"

    def test_open_ends(self):
        assert rank_between(None, "b") < "b"
        assert rank_between("z", None) > "z"

    def test_bad_bounds(self):
        with pytest.raises(BadBounds):
            rank_between("c", "b")
        with pytest.raises(BadBounds):
            rank_between("c", "c")

    def test_rejects_non_canonical(self):
        with pytest.raises(ValueError):
            rank_between("ba", "c")
        with pytest.raises(ValueError):
            rank_between("b", "B")

    @given(lo=canonical_ranks, hi=canonical_ranks)
    def test_strictly_between(self, lo, hi):
        if lo == hi:
            return
        lo, hi = sorted((lo, hi))
        result = rank_between(lo, hi)
        assert lo < result < hi
        assert is_canonical(result)

    @given(rank=canonical_ranks)
    def test_one_sided(self, rank):
        below = rank_between(None, rank)
        above = rank_between(rank, None)
        assert below < rank < above
        assert is_canonical(below) and is_canonical(above)


class TestOrderCorrectness:
    def test_random_insert_fuzz_matches_shadow_list(self):
        # Shadow oracle: a plain Python list ordered by insertion position.
        rng = random.Random(20240101)
        ranks: list[str] = []
        for _ in range(2000):
            pos = rng.randint(0, len(ranks))
            lo = ranks[pos - 1] if pos > 0 else None
            hi = ranks[pos] if pos < len(ranks) else None
            ranks.insert(pos, rank_between(lo, hi))
        assert len(set(ranks)) == len(ranks)
        assert ranks == sorted(ranks)

    def test_adversarial_same_gap_prepend(self):
        ranks = [rank_between(None, None)]
        for _ in range(1000):
            ranks.insert(0, rank_between(None, ranks[0]))
        assert ranks == sorted(ranks)
        assert max(len(r) for r in ranks) <= 1001

    def test_adversarial_same_gap_midpoint(self):
        lo = rank_between(None, None)
        hi = rank_between(lo, None)
        seen = [lo, hi]
        for _ in range(1000):
            mid = rank_between(lo, hi)
            seen.append(mid)
            hi = mid
        assert len(set(seen)) == len(seen)
        assert max(len(r) for r in seen) <= 1001


class TestEvenlySpacedRanks:
    @pytest.mark.parametrize("count", [0, 1, 2, 7, 50, 1000])
    def test_spacing(self, count):
        ranks = evenly_spaced_ranks(count)
        assert len(ranks) == count
        assert ranks == sorted(ranks)
        assert len(set(ranks)) == count
        assert all(is_canonical(r) for r in ranks)
        assert all(len(r) <= 4 for r in ranks)

    def test_single_item_is_seed_value(self):
        assert evenly_spaced_ranks(1) == ["n"]

    def test_still_room_around_edges(self):
        ranks = evenly_spaced_ranks(1000)
        assert rank_between(None, ranks[0]) < ranks[0]
        assert rank_between(ranks[-1], None) > ranks[-1]

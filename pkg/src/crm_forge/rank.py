"""Fractional-index ordering over the alphabet ``a``..``z``.

A rank is a non-empty lowercase string interpreted as a base-26 fraction in
(0, 1): ``a``=0 .. ``z``=25. Canonical ranks never end in ``a`` (no trailing
zeros), so lexicographic byte order equals numeric order and every pair of
distinct ranks has room between them.
"""

from __future__ import annotations

import re

ALPHABET = "abcdefghijklmnopqrstuvwxyz"
BASE = len(ALPHABET)

_RANK_RE = re.compile(r"^[a-z]+$")


class BadBounds(ValueError):
    """Raised when the lower bound is not strictly below the upper bound."""


def is_canonical(rank: str) -> bool:
    return bool(_RANK_RE.match(rank)) and not rank.endswith("a")


def _check(rank: str | None, side: str) -> None:
    if rank is None:
        return
    if not _RANK_RE.match(rank):
        raise ValueError(f"{side} rank {rank!r} is not a lowercase a-z string")
    if rank.endswith("a"):
        raise ValueError(f"{side} rank {rank!r} is not canonical (trailing 'a')")


def _midpoint(lo: str, hi: str | None) -> str:
    """A canonical string strictly between ``lo`` and ``hi`` as fractions.

    ``lo`` may be empty (meaning zero); ``hi`` of None means one. Recurses on
    the suffix after the common prefix, appending a digit when the bounds are
    lexicographically adjacent.
    """
    if hi is not None:
        # Longest common prefix, treating missing lo digits as zero.
        n = 0
        while n < len(hi) and (lo[n] if n < len(lo) else "a") == hi[n]:
            n += 1
        if n > 0:
            return hi[:n] + _midpoint(lo[n:], hi[n:])
    digit_lo = ALPHABET.index(lo[0]) if lo else 0
    digit_hi = ALPHABET.index(hi[0]) if hi is not None else BASE
    if digit_hi - digit_lo > 1:
        return ALPHABET[(digit_lo + digit_hi) // 2]
    # Adjacent first digits. If hi has room below its first digit, shortening
    # it to that digit already lands strictly between the bounds.
    if hi is not None and len(hi) > 1:
        return hi[:1]
    return ALPHABET[digit_lo] + _midpoint(lo[1:], None)


def rank_between(lo: str | None, hi: str | None) -> str:
    """Return a canonical rank r with lo < r < hi.

    Absent lo means "before everything"; absent hi means "after everything";
    both absent seeds the list with "n".
    """
    _check(lo, "lower")
    _check(hi, "upper")
    if lo is not None and hi is not None and lo >= hi:
        raise BadBounds(f"lower bound {lo!r} must sort before upper bound {hi!r}")
    result = _midpoint(lo or "", hi)
    assert is_canonical(result)
    assert (lo is None or lo < result) and (hi is None or result < hi)
    return result


def evenly_spaced_ranks(count: int, digits: int = 4) -> list[str]:
    """``count`` canonical ranks in increasing order, spread across (0, 1).

    Used by the rebalance maintenance command; with ``digits`` = 4 this
    supports up to 26^4 - 1 items while keeping every rank at most 4 chars.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    space = BASE**digits
    if count >= space:
        raise ValueError(f"cannot fit {count} ranks in {digits} base-26 digits")
    ranks = []
    for i in range(count):
        value = (i + 1) * space // (count + 1)
        text = ""
        for _ in range(digits):
            value, digit = divmod(value, BASE)
            text = ALPHABET[digit] + text
        text = text.rstrip("a")
        ranks.append(text)
    assert all(is_canonical(r) for r in ranks)
    assert all(a < b for a, b in zip(ranks, ranks[1:]))
    return ranks

"""Bolzano-Weierstrass subsequence extraction by interval bisection."""

from __future__ import annotations

import numpy as np

from ..errors import DomainError, InsufficientData, UsageError
from .core import SequenceSource


def bw_subsequence(
    s: SequenceSource, lo: float, hi: float, target_len: int, adaptive=False, reserve=2.0
):
    """Indices (1-based, strictly increasing) of a bisection subsequence.

    Before each pick the current bracket is halved, keeping the closed half
    that holds more of the not-yet-passed terms (ties go to the lower half),
    and the first term after the previous pick inside that half is taken.
    Pick ``j`` therefore lies within ``(hi - lo) / 2**(j - 1)`` of pick
    ``j - 1``.

    With ``adaptive=True`` a halving is skipped unless the chosen half holds at
    least ``reserve`` times as many remaining terms as picks still needed.
    Brackets stay nested and the extraction always completes when the prefix
    holds ``target_len`` terms, giving far longer subsequences than strict
    halving at the cost of the per-pick width bound. Since every pick uses up
    one member of the bracket, ``reserve > 1`` spreads the halvings over the
    whole run instead of spending them all on the first few picks.
    """
    if target_len < 1:
        raise UsageError("target_len must be >= 1")
    if adaptive and reserve < 1:
        raise UsageError("reserve must be >= 1")
    if not lo <= hi:
        raise UsageError(f"empty interval [{lo}, {hi}]")
    values = np.asarray(s.values(), dtype=float)
    outside = np.flatnonzero((values < lo) | (values > hi) | np.isnan(values))
    if outside.size:
        k = int(outside[0]) + 1
        raise DomainError(
            f"{s.label}: value {values[k - 1]!r} at index {k} outside [{lo}, {hi}]",
            label=s.label,
            index=k,
        )

    a, b = float(lo), float(hi)
    picks = []
    start = 0  # 0-based position of the first unpassed term
    while len(picks) < target_len:
        tail = values[start:]
        mid = 0.5 * (a + b)
        if a < mid < b:
            in_lo = (tail >= a) & (tail <= mid)
            in_hi = (tail >= mid) & (tail <= b)
            n_lo, n_hi = int(in_lo.sum()), int(in_hi.sum())
            half, count = ((a, mid), n_lo) if n_lo >= n_hi else ((mid, b), n_hi)
            if not adaptive or count >= reserve * (target_len - len(picks)):
                a, b = half
        members = np.flatnonzero((tail >= a) & (tail <= b))
        if members.size == 0:
            raise InsufficientData(
                f"{s.label}: prefix {s.prefix_len} exhausted after {len(picks)} of "
                f"{target_len} picks",
                achieved=len(picks),
            )
        pos = start + int(members[0])
        picks.append(pos + 1)
        start = pos + 1
    return picks


def subsequence(s: SequenceSource, indices, label=None) -> SequenceSource:
    """The subsequence ``s(indices[0]), s(indices[1]), ...`` as a new source."""
    from .core import from_values

    idx = np.asarray(indices, dtype=np.int64)
    vals = np.asarray(s.values(int(idx.max())), dtype=float)[idx - 1]
    return from_values(vals, label or f"sub({s.label})", seed=s.seed)

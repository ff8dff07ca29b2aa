import numpy as np
import pytest

from laclab.errors import DomainError, InsufficientData, UsageError
from laclab.sequences import bw_subsequence, from_values, generator, subsequence


def test_alternating_gives_constant_subsequence():
    s = generator("alternating", prefix_len=50)
    idx = bw_subsequence(s, -1, 1, 5)
    assert len(idx) == 5
    # ties go to the lower half, so the odd-index -1 terms are taken
    assert {s(k) for k in idx} == {-1.0}
    assert all(k % 2 == 1 for k in idx)


def test_sin_width_bound():
    s = generator("sin", prefix_len=4096)
    idx = bw_subsequence(s, -1, 1, 8)
    assert idx == sorted(set(idx))
    v = [s(k) for k in idx]
    for j in range(1, len(v)):
        # pick j+1 (1-based) lies within 2 / 2**j of pick j
        assert abs(v[j] - v[j - 1]) <= 2 / 2**j
    assert max(v[-2:]) - min(v[-2:]) <= 2 / 2**7


def test_reciprocal_values_shrink():
    s = generator("power", -1.0, prefix_len=200)
    idx = bw_subsequence(s, 0, 1, 5)
    v = [s(k) for k in idx]
    assert v == sorted(v, reverse=True)
    assert v[-1] <= 2 / 2**4


def test_out_of_range_names_index():
    s = from_values([0.1, 0.2, 3.0, 0.4])
    with pytest.raises(DomainError) as err:
        bw_subsequence(s, 0, 1, 2)
    assert err.value.index == 3
    assert "index 3" in str(err.value)


def test_insufficient_prefix_reports_count():
    s = generator("sin", prefix_len=64)
    with pytest.raises(InsufficientData) as err:
        bw_subsequence(s, -1, 1, 40)
    assert 0 < err.value.achieved < 40


def test_adaptive_completes_with_nested_brackets():
    s = generator("sin", prefix_len=4096)
    idx = bw_subsequence(s, -1, 1, 200, adaptive=True)
    assert len(idx) == 200 and idx == sorted(set(idx))
    v = np.array([s(k) for k in idx])
    # later picks live in ever smaller nested brackets
    assert np.ptp(v[100:]) <= np.ptp(v[:100])
    assert np.ptp(v[-20:]) < 0.05


def test_usage_errors():
    s = generator("sin", prefix_len=64)
    with pytest.raises(UsageError):
        bw_subsequence(s, -1, 1, 0)
    with pytest.raises(UsageError):
        bw_subsequence(s, 1, -1, 3)
    with pytest.raises(UsageError):
        bw_subsequence(s, -1, 1, 3, adaptive=True, reserve=0.5)


def test_subsequence_values():
    s = generator("cubic", prefix_len=10)
    sub = subsequence(s, [2, 5, 7])
    assert list(sub.values()) == [8.0, 125.0, 343.0]
    assert sub.label == "sub(cubic)"

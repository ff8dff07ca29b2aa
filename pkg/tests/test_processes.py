import math
import time
from fractions import Fraction

import pytest

from laclab.errors import UsageError
from laclab.sequences import (
    process_sequence,
    simulate,
    simulate_survivor_process,
    simulate_three_split_process,
)
from oracles import split3_expected_rounds, survivor_exact

# frozen oracle values
SURVIVOR_EXACT = {2: Fraction(0), 3: Fraction(3, 4), 4: Fraction(16, 27), 5: Fraction(15, 32)}
SPLIT3_EXACT = {2: 1.5, 3: 2.25, 4: 2.8557692307692357, 5: 3.248076923076928}


def test_oracles_match_frozen_values():
    for n, p in SURVIVOR_EXACT.items():
        assert survivor_exact(n) == p
    for k, e in SPLIT3_EXACT.items():
        assert split3_expected_rounds(k) == pytest.approx(e, abs=1e-12)


def test_survivor_small_cases():
    assert simulate_survivor_process(1, 10, seed=1).mean == 1.0
    est = simulate_survivor_process(2, 1000, seed=1)
    assert est.mean == 0.0 and est.stderr == 0.0


def test_survivor_three_against_enumeration():
    start = time.perf_counter()
    est = simulate_survivor_process(3, 100_000, seed=7)
    assert time.perf_counter() - start < 60
    assert abs(est.mean - 0.75) < 0.01
    assert abs(est.mean - 0.75) <= 3 * est.stderr
    assert est.stderr == pytest.approx(math.sqrt(est.mean * (1 - est.mean) / 100_000))


@pytest.mark.parametrize("n", [4, 5])
def test_survivor_against_enumeration(n):
    est = simulate_survivor_process(n, 40_000, seed=3)
    assert abs(est.mean - float(SURVIVOR_EXACT[n])) <= 4 * est.stderr


def test_split3_small_cases():
    assert simulate_three_split_process(1, 10, seed=1).mean == 0.0
    est = simulate_three_split_process(2, 100_000, seed=7)
    assert abs(est.mean - 1.5) < 0.02
    assert abs(est.mean - 1.5) <= 3 * est.stderr


@pytest.mark.parametrize("k", [3, 4, 5])
def test_split3_against_cdf_recursion(k):
    est = simulate_three_split_process(k, 40_000, seed=11)
    assert est.mean > 0 and est.stderr > 0
    assert abs(est.mean - SPLIT3_EXACT[k]) <= 4 * est.stderr
    assert est.normalized == est.mean / k


def test_determinism_and_worker_split():
    a = simulate("survivor", 6, 5000, seed=5, workers=3)
    b = simulate("survivor", 6, 5000, seed=5, workers=3)
    assert a == b
    c = simulate("split3", 6, 5000, seed=5, workers=1)
    d = simulate("split3", 6, 5000, seed=5, workers=1)
    assert c.mean == d.mean and c.stderr == d.stderr
    assert a.to_dict()["rng"] == "PCG64"


def test_seeds_differ():
    a = simulate("split3", 6, 2000, seed=1)
    b = simulate("split3", 6, 2000, seed=2)
    assert a.mean != b.mean


def test_usage_errors():
    with pytest.raises(UsageError):
        simulate("coinflip", 3, 10, seed=1)
    with pytest.raises(UsageError):
        simulate_survivor_process(0, 10, seed=1)
    with pytest.raises(UsageError):
        simulate_three_split_process(3, 0, seed=1)
    with pytest.raises(UsageError):
        simulate("survivor", 3, 10, seed=1, workers=0)


def test_process_sequence_normalization():
    s = process_sequence("split3", 5, 500, seed=4)
    assert s.label == "split3/k" and s.prefix_len == 5 and s.seed == 4
    assert s(1) == 0.0
    assert s(2) == simulate("split3", 2, 500, seed=4).mean / 2
    t = process_sequence("survivor", 4, 500, seed=4)
    assert t.label == "survivor" and t(1) == 1.0 and t(2) == 0.0

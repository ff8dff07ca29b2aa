import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laclab.classify import (
    DEFAULT_POLICY,
    Outcome,
    Policy,
    block_means,
    classify_quasi_cauchy,
    estimate_ntheta_limit,
    trend_verdict,
)
from laclab.errors import InsufficientData, UsageError
from laclab.lacunary import LacunaryScheme, resolve_scheme
from laclab.sequences import affine_combine, difference, from_values, generator
from laclab.wardprobe import square
from oracles import block_means_direct

P16 = LacunaryScheme((0, 2, 4, 8, 16))
POW2 = DEFAULT_POLICY.scheme()


def test_policy_defaults_and_validation():
    p = DEFAULT_POLICY
    assert (p.window, p.eps_verdict, p.eps_floor, p.prefix_len, p.block_count) == (3, 1e-2, 1e-1, 2**14, 12)
    for bad in ({"window": 0}, {"eps_verdict": 0}, {"eps_floor": -1}, {"prefix_len": 63}, {"dps": 0}):
        with pytest.raises(UsageError):
            Policy(**bad)
    assert POW2.last_cut == 2**14


def test_block_means_examples():
    s = generator("alternating", prefix_len=20)
    assert block_means(s, P16, 1).values == (2.0, 2.0, 2.0, 2.0)
    assert block_means(generator("constant", 7, prefix_len=16), P16, 0, 7.0).values == (0.0,) * 4
    t1 = block_means(generator("sqrt", prefix_len=20), P16, 1).values[0]
    assert t1 == pytest.approx((math.sqrt(2) - 1 + math.sqrt(3) - math.sqrt(2)) / 2, rel=1e-15)
    assert t1 == pytest.approx(0.3660, abs=5e-5)


def test_block_means_against_direct_oracle():
    vals = [math.sin(k) * math.sqrt(k) for k in range(1, 300)]
    s = from_values(vals)
    scheme = resolve_scheme("pow2", 300)
    for m in range(4):
        for shift in (0.0, 0.5):
            got = block_means(s, scheme, m, shift).values
            want = block_means_direct(vals, scheme.cuts, m, shift)
            assert np.allclose(got, want, rtol=1e-12, atol=1e-12)


def test_dropped_blocks_noted():
    s = generator("sqrt", prefix_len=17)
    series = block_means(s, P16, 3)
    assert len(series) == 3
    assert series.notes and "dropped blocks r=4..4" in series.notes[0]
    with pytest.raises(InsufficientData):
        block_means(generator("sqrt", prefix_len=3), P16, 2)


def test_series_exports():
    series = block_means(generator("alternating", prefix_len=20), P16, 1)
    assert series.to_csv() == "r,h,t\n1,2,2.0\n2,2,2.0\n3,4,2.0\n4,8,2.0\n"
    d = series.to_dict()
    assert d["order"] == 1 and d["t"] == [2.0] * 4 and d["h"] == [2, 2, 4, 8]


def test_multiprecision_block_means_of_cubic_are_exactly_six():
    sq = square().image(generator("power", 1.5))
    exact = block_means(sq, POW2, 3, dps=50).values
    assert max(abs(t - 6.0) for t in exact) <= 1e-9
    # double precision is off by up to ~1e-7 because k**1.5 is rounded first
    rough = block_means(sq, POW2, 3).values
    assert max(abs(t - 6.0) for t in rough) < 1e-6


def test_trend_verdict_examples():
    geo = (1, 0.5, 0.25, 0.125, 0.0625, 0.03125)
    # with W = 2 the window still holds 0.0625 > 0.05
    assert trend_verdict(geo, Policy(window=2, eps_verdict=0.05)).outcome is Outcome.INCONCLUSIVE
    assert trend_verdict(geo, Policy(window=2, eps_verdict=0.1)).outcome is Outcome.NULL
    assert trend_verdict(geo, Policy(window=1, eps_verdict=0.05)).outcome is Outcome.NULL
    assert trend_verdict([2.0] * 6).outcome is Outcome.NOT_NULL
    assert trend_verdict((0.2, 0.04, 0.3, 0.02), Policy(window=3)).outcome is Outcome.INCONCLUSIVE


def test_trend_verdict_evidence():
    v = trend_verdict([0.008, 0.004, 0.002])
    assert v.outcome is Outcome.NULL
    assert v.decay_ratio == pytest.approx(0.5)
    assert v.tail_mean == pytest.approx(0.014 / 3) and v.last_value == 0.002
    rising = trend_verdict([0.001, 0.002, 0.004])
    assert rising.outcome is Outcome.INCONCLUSIVE
    noise = trend_verdict([1e-12, 3e-12, 2e-12])
    assert noise.outcome is Outcome.NULL
    assert trend_verdict([0.0, 0.0, 0.0]).outcome is Outcome.NULL
    with pytest.raises(UsageError):
        trend_verdict([])


def test_estimate_limit_examples():
    l_hat, v, _ = estimate_ntheta_limit(generator("constant", 7), POW2)
    assert l_hat == 7.0 and v.outcome is Outcome.NULL
    l_hat, v, series = estimate_ntheta_limit(generator("alternating"), POW2)
    assert v.outcome is Outcome.NOT_NULL and min(series.values[1:]) >= 1.0
    recip = generator("power", -1.0, prefix_len=2**12)
    s = affine_combine(1.0, recip, 0.0, recip, 5.0)
    l_hat, v, _ = estimate_ntheta_limit(s, resolve_scheme("pow2", 2**12))
    assert abs(l_hat - 5.0) < 0.01 and v.outcome is Outcome.NULL
    with pytest.raises(InsufficientData):
        estimate_ntheta_limit(generator("sqrt", prefix_len=3), P16)


def test_classify_examples():
    lin = classify_quasi_cauchy(generator("linear", 1, 0), POW2)
    assert lin.outcome(1) is Outcome.NOT_NULL
    assert lin.passes(2) and lin.passes(3)
    assert set(lin.series[1].values) == {1.0}
    assert all(t == 0 for t in lin.series[2].values)
    root = classify_quasi_cauchy(generator("sqrt"), POW2)
    assert all(root.passes(m) for m in (1, 2, 3))
    alt = classify_quasi_cauchy(generator("alternating"), POW2)
    assert all(alt.outcome(m) is Outcome.NOT_NULL for m in (1, 2, 3))
    assert set(alt.series[3].values) == {8.0}


def test_classify_needs_four_blocks():
    with pytest.raises(InsufficientData) as err:
        classify_quasi_cauchy(generator("sqrt", prefix_len=18), P16)
    assert err.value.achieved == 3


def test_profile_json_shape():
    d = classify_quasi_cauchy(generator("sqrt"), "pow2").to_dict()
    assert set(d) == {"sequence", "scheme", "policy", "orders", "evidence", "series"}
    assert d["orders"] == {"m1": "NullConvergent", "m2": "NullConvergent", "m3": "NullConvergent"}
    assert d["policy"]["window"] == 3


# -- properties --------------------------------------------------------------

seq = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=40, max_size=80)
SCHEME = LacunaryScheme((0, 2, 4, 8, 16, 32))


@given(seq, seq, st.integers(0, 3))
def test_triangle_inequality(xs, ys, m):
    n = min(len(xs), len(ys))
    a, b = from_values(xs[:n]), from_values(ys[:n])
    ta = np.array(block_means(a, SCHEME, m).values)
    tb = np.array(block_means(b, SCHEME, m).values)
    tab = np.array(block_means(affine_combine(1, a, 1, b), SCHEME, m).values)
    assert np.all(tab <= ta + tb + 1e-9)


@given(seq, st.floats(-1e3, 1e3, allow_nan=False), st.integers(0, 3))
def test_homogeneity(xs, lam, m):
    a = from_values(xs)
    t = np.array(block_means(a, SCHEME, m).values)
    tl = np.array(block_means(affine_combine(lam, a, 0, a), SCHEME, m).values)
    assert np.allclose(tl, abs(lam) * t, rtol=1e-9, atol=1e-9)


@given(seq, st.floats(-1e3, 1e3, allow_nan=False), st.integers(1, 3))
def test_shift_invariance(xs, c, m):
    a = from_values(xs)
    t = np.array(block_means(a, SCHEME, m).values)
    ts = np.array(block_means(affine_combine(1, a, 0, a, c), SCHEME, m).values)
    scale = 2**m * (max(map(abs, xs)) + abs(c))
    assert np.allclose(ts, t, rtol=0, atol=1e-12 * max(scale, 1.0))


@given(seq, st.integers(1, 2))
def test_order_promotion_bound(xs, m):
    a = from_values(xs)
    lo = block_means(a, SCHEME, m)
    hi = block_means(a, SCHEME, m + 1)
    dm = difference(a, m)
    for r, h, t in zip(hi.r, hi.h, hi.values):
        edge = abs(dm(SCHEME.cuts[r] + 1))
        assert t <= 2 * lo.values[r - 1] + edge / h + 1e-9


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_block_sum_independent_of_order(seed):
    rng = np.random.default_rng(seed)
    xs = rng.normal(size=64) * 10.0 ** rng.uniform(-8, 8, size=64)
    shuffled = xs.copy()
    for lo, hi in zip(SCHEME.cuts, SCHEME.cuts[1:]):
        rng.shuffle(shuffled[lo:hi])
    assert block_means(from_values(xs), SCHEME, 0).values == block_means(from_values(shuffled), SCHEME, 0).values

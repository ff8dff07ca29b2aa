"""The bundled acceptance run behind ``laclab report``.

Each criterion is a function returning a :class:`CriterionResult` whose
``details`` hold only deterministic values, so two runs with the same seed
serialize to identical bytes. Wall-clock measurements are reduced to a
pass/fail flag before they enter the report.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .classify import DEFAULT_POLICY, Policy, block_means, classify_quasi_cauchy
from .lacunary import resolve_scheme
from .sequences import (
    affine_combine,
    difference,
    from_values,
    generator,
    simulate_survivor_process,
    simulate_three_split_process,
)
from .wardprobe import (
    VIOLATED,
    RealFunction,
    bounded_corpus,
    default_corpus,
    identity,
    probe_ward_continuity,
    sine,
    square,
    tripling_check,
    uniform_limit_harness,
    ward_compactness_check,
)

RTOL = 1e-9
ATOL = 1e-12


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {"number": self.number, "title": self.title, "passed": self.passed, "details": self.details}

    def line(self) -> str:
        return f"criterion {self.number} [{'PASS' if self.passed else 'FAIL'}] {self.title}"


def _close(a, b, scale=0.0):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return bool(np.all(np.abs(a - b) <= ATOL + RTOL * np.maximum(np.maximum(np.abs(a), np.abs(b)), scale)))


def _random_sequence(rng, n):
    kind = rng.integers(3)
    if kind == 0:
        vals = rng.normal(size=n)
    elif kind == 1:
        vals = np.cumsum(rng.normal(size=n))
    else:
        k = np.arange(1, n + 1)
        vals = rng.uniform(-2, 2) * np.sqrt(k) + rng.uniform(-1, 1) * np.sin(k) + rng.normal(scale=0.1, size=n)
    return vals * 10.0 ** rng.uniform(-3, 3)


def identity_suite(seed=0, count=200, n=515) -> CriterionResult:
    """Difference and block-mean identities on ``count`` random sequences."""
    rng = np.random.default_rng([seed, 1])
    scheme = resolve_scheme("pow2", n - 3)
    failures = {k: 0 for k in ("composition", "linearity", "annihilation", "triangle", "homogeneity")}
    for i in range(count):
        x = from_values(_random_sequence(rng, n), f"x{i}")
        y = from_values(_random_sequence(rng, n), f"y{i}")
        scale = float(max(np.abs(x.values()).max(), np.abs(y.values()).max()))

        d3 = difference(x, 3).values()
        d111 = difference(from_values(difference(from_values(difference(x, 1).values()), 1).values()), 1).values()
        if not _close(d3, d111, 8 * scale):
            failures["composition"] += 1

        a, b = rng.uniform(-5, 5, size=2)
        combo = affine_combine(a, x, b, y)
        for m in (1, 2, 3):
            lhs = difference(combo, m).values()
            rhs = a * difference(x, m).values() + b * difference(y, m).values()
            if not _close(lhs, rhs, 2**m * 10 * scale):
                failures["linearity"] += 1
                break

        c, slope = rng.uniform(-100, 100, size=2)
        const = generator("constant", c, prefix_len=n)
        line = generator("linear", slope, c, prefix_len=n)
        line_scale = abs(slope) * n + abs(c)
        ok = not np.any(difference(const, 1).values())
        for m in (2, 3):
            ok = ok and _close(difference(line, m).values(), 0.0, 2**m * line_scale)
        if not ok:
            failures["annihilation"] += 1

        lam = rng.uniform(-10, 10)
        scaled = affine_combine(lam, x, 0.0, x)
        summed = affine_combine(1.0, x, 1.0, y)
        for m in range(4):
            tx = np.array(block_means(x, scheme, m).values)
            ty = np.array(block_means(y, scheme, m).values)
            ts = np.array(block_means(summed, scheme, m).values)
            tl = np.array(block_means(scaled, scheme, m).values)
            if np.any(ts > tx + ty + ATOL + RTOL * (tx + ty)):
                failures["triangle"] += 1
                break
            if not _close(tl, abs(lam) * tx):
                failures["homogeneity"] += 1
                break
    return CriterionResult(
        1,
        "algebraic identity suite",
        not any(failures.values()),
        {"sequences": count, "prefix": n, "seed": seed, "failures": failures},
    )


def inclusion_chain(corpus, policy: Policy = DEFAULT_POLICY) -> CriterionResult:
    """Block-level bound between consecutive orders, and verdict inclusion."""
    scheme = policy.scheme()
    bound_failures, worst = [], -math.inf
    verdict_failures = []
    for s in corpus:
        for m in (1, 2):
            lo = block_means(s, scheme, m)
            hi = block_means(s, scheme, m + 1)
            dm = difference(s, m)
            for r, h, t_next in zip(hi.r, hi.h, hi.values):
                t_m = lo.values[lo.r.index(r)]
                edge = abs(dm(scheme.cuts[r] + 1))
                slack = t_next - (2 * t_m + edge / h)
                worst = max(worst, slack)
                if slack > 1e-9:
                    bound_failures.append({"sequence": s.label, "m": m, "r": r})
        prof = classify_quasi_cauchy(s, scheme, policy)
        if prof.passes(1) and not (prof.passes(2) and prof.passes(3)):
            verdict_failures.append(s.label)
    return CriterionResult(
        2,
        "inclusion chain",
        not bound_failures and not verdict_failures,
        {
            "corpus": [s.label for s in corpus],
            "max_slack": worst,
            "bound_failures": bound_failures,
            "verdict_failures": verdict_failures,
        },
    )


def square_counterexample(corpus, policy: Policy = DEFAULT_POLICY) -> CriterionResult:
    """k**1.5 passes order 3, its square k**3 has every order-3 block mean equal to 6."""
    scheme = policy.scheme()
    s = generator("power", 1.5)
    tail = block_means(s, scheme, 3).values[-policy.window :]
    exact = Policy(name="dps50", dps=50)
    out = block_means(square().image(s), scheme, 3, dps=exact.dps).values
    deviation = max(abs(t - 6.0) for t in out)
    report = probe_ward_continuity(square(), 3, corpus, scheme, policy)
    labels = [w.label for w in report.witnesses]
    passed = max(tail) < 1e-2 and deviation <= 1e-9 and report.outcome == VIOLATED and s.label in labels
    return CriterionResult(
        3,
        "x^2 counterexample",
        passed,
        {
            "input_tail": list(tail),
            "output_max_deviation_from_6": deviation,
            "output_dps": exact.dps,
            "probe": report.outcome,
            "witnesses": labels,
        },
    )


def tripling(policy: Policy = DEFAULT_POLICY) -> CriterionResult:
    reports = [tripling_check(generator(k), "pow2", policy) for k in ("sqrt", "harmonic")]
    return CriterionResult(
        4,
        "tripling step",
        all(r.passed for r in reports),
        {
            r.sequence: {
                "status": r.status,
                "tripled": {f"m{m}": r.tripled.outcome(m).value for m in (1, 2, 3)},
                "tripled_m3_tail": list(r.tripled.series[3].values[-policy.window :]),
            }
            for r in reports
        },
    )


def _shift(n):
    return RealFunction(f"x+1/{n}", lambda x, xp: x + xp.const(1) / xp.const(n))


def _wiggle(n):
    return RealFunction(
        f"sin(x)+sin({n}x)/{n}",
        lambda x, xp: xp.sin(x) + xp.sin(xp.const(n) * x) / xp.const(n),
        (0.0, 10.0),
    )


def uniform_limits(corpus, policy: Policy = DEFAULT_POLICY) -> CriterionResult:
    shift = uniform_limit_harness(
        [_shift(n) for n in range(1, 65)], identity(), np.linspace(-10, 10, 401), corpus, "pow2", policy
    )
    wiggle = uniform_limit_harness(
        [_wiggle(n) for n in range(1, 129)],
        sine((0.0, 10.0)),
        np.linspace(0, 10, 1001),
        bounded_corpus(),
        "pow2",
        policy,
    )
    passed = (
        shift.passed
        and shift.final_gap == 1 / 64
        and wiggle.passed
        and wiggle.final_gap <= 1 / 128
    )
    return CriterionResult(
        5,
        "uniform-limit harness",
        passed,
        {
            "shift": {"passed": shift.passed, "final_gap": shift.final_gap, "threshold": shift.epsilon / 9},
            "wiggle": {"passed": wiggle.passed, "final_gap": wiggle.final_gap, "threshold": wiggle.epsilon / 9},
        },
    )


def stochastic(seed=7, trials=100_000) -> CriterionResult:
    start = time.perf_counter()
    s2 = simulate_survivor_process(2, trials, seed)
    s3 = simulate_survivor_process(3, trials, seed)
    k2 = simulate_three_split_process(2, trials, seed)
    fast = time.perf_counter() - start < 60.0
    ok = (
        s2.mean == 0.0
        and abs(s3.mean - 0.75) <= 3 * s3.stderr
        and abs(k2.mean - 1.5) <= 3 * k2.stderr
        and fast
    )
    return CriterionResult(
        6,
        "stochastic examples",
        ok,
        {
            "survivor_2": s2.to_dict(),
            "survivor_3": s3.to_dict(),
            "split3_2": k2.to_dict(),
            "runtime_under_60s": fast,
        },
    )


def compactness(policy: Policy = DEFAULT_POLICY) -> CriterionResult:
    bounded = ward_compactness_check(generator("sin"), (-1.0, 1.0), "pow2", policy)
    unbounded = ward_compactness_check(generator("linear", 1.0, 0.0), None, "pow2", policy)
    passed = bounded.passes and unbounded.kind == "unbounded-evidence"
    return CriterionResult(
        8,
        "ward-compactness check",
        passed,
        {
            "sin": {
                "kind": bounded.kind,
                "attempts": list(bounded.attempts),
                "m3": bounded.profile.outcome(3).value,
            },
            "k": {"kind": unbounded.kind, "fires": bool(unbounded.growth and unbounded.growth["fires"])},
        },
    )


def run_all(seed=7, policy: Policy = DEFAULT_POLICY, determinism=None) -> list:
    """Criteria 1-6 and 8; criterion 7 is supplied by the caller, which can
    re-run commands (``determinism`` is a zero-argument callable)."""
    corpus = default_corpus(seed=seed)
    results = [
        identity_suite(seed),
        inclusion_chain(corpus, policy),
        square_counterexample(corpus, policy),
        tripling(policy),
        uniform_limits(corpus, policy),
        stochastic(seed),
    ]
    if determinism is not None:
        results.append(determinism())
    results.append(compactness(policy))
    return results


__all__ = [
    "CriterionResult",
    "compactness",
    "identity_suite",
    "inclusion_chain",
    "run_all",
    "square_counterexample",
    "stochastic",
    "tripling",
    "uniform_limits",
]

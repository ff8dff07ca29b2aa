"""Empirical probes of ward continuity.

A function is ward continuous of order m when it maps every sequence whose
order-m block means tend to 0 onto another such sequence. That is a statement
about all sequences, so a probe over a finite corpus can refute it but never
prove it: ``Preserved`` means no violation was found under the given corpus,
scheme and policy.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._precision import backend
from .classify import DEFAULT_POLICY, Outcome, Policy, QCProfile, classify_quasi_cauchy
from .errors import DomainError, InsufficientData, UsageError
from .lacunary import LacunaryScheme
from .sequences import (
    DEFAULT_PREFIX,
    SequenceSource,
    affine_combine,
    bw_subsequence,
    generator,
    map_values,
    process_sequence,
    repeat_elements,
    subsequence,
    write_csv,
)

PRESERVED = "Preserved"
VIOLATED = "Violated"
INCONCLUSIVE = "Inconclusive"
BW_TARGETS = (67, 131, 259)


@dataclass(frozen=True)
class RealFunction:
    """``fn(x, xp)`` evaluated elementwise with backend ``xp``."""

    label: str
    fn: Callable = field(repr=False, compare=False)
    domain: tuple = (-math.inf, math.inf)

    def __call__(self, x, dps=None):
        xp = backend(dps)
        out = self.fn(xp.asarray(np.atleast_1d(x)), xp)
        return float(out[0]) if np.ndim(x) == 0 else xp.to_float(out)

    def image(self, s: SequenceSource) -> SequenceSource:
        return map_values(self.fn, s, f"{self.label}({s.label})")

    def check_domain(self, s: SequenceSource):
        lo, hi = self.domain
        if lo == -math.inf and hi == math.inf:
            return
        vals = np.asarray(s.values(), dtype=float)
        bad = np.flatnonzero((vals < lo) | (vals > hi))
        if bad.size:
            k = int(bad[0]) + 1
            raise DomainError(
                f"{s.label}: value {vals[k - 1]!r} at index {k} outside domain "
                f"[{lo}, {hi}] of {self.label}",
                label=s.label,
                index=k,
            )


def identity():
    return RealFunction("identity", lambda x, xp: x)


def affine(a, b):
    return RealFunction(f"affine:{a:g},{b:g}", lambda x, xp: xp.const(a) * x + xp.const(b))


def square():
    return RealFunction("square", lambda x, xp: x * x)


def sine(domain=(-math.inf, math.inf)):
    return RealFunction("sin", lambda x, xp: xp.sin(x), domain)


def polynomial(coeffs):
    """``c0 + c1 x + c2 x^2 + ...`` by Horner's rule."""
    coeffs = [float(c) for c in coeffs]
    if not coeffs:
        raise UsageError("polynomial needs at least one coefficient")

    def fn(x, xp):
        out = xp.const(coeffs[-1]) + 0 * x
        for c in reversed(coeffs[:-1]):
            out = out * x + xp.const(c)
        return out

    return RealFunction("poly:" + ",".join(f"{c:g}" for c in coeffs), fn)


def x_plus_sin():
    return RealFunction("x+sin", lambda x, xp: x + xp.sin(x))


def compose(g: RealFunction, f: RealFunction) -> RealFunction:
    """``g o f``; the domain is that of ``f``."""
    return RealFunction(f"{g.label}o{f.label}", lambda x, xp: g.fn(f.fn(x, xp), xp), f.domain)


def parse_function(spec: str) -> RealFunction:
    """``identity``, ``square``, ``sin``, ``x+sin``, ``affine:a,b``, ``poly:c0,c1,...``."""
    name, _, args = spec.strip().partition(":")
    try:
        params = [float(a) for a in args.split(",") if a.strip()] if args else []
    except ValueError:
        raise UsageError(f"bad function parameters in {spec!r}") from None
    if name == "identity" and not params:
        return identity()
    if name == "square" and not params:
        return square()
    if name == "sin" and not params:
        return sine()
    if name == "x+sin" and not params:
        return x_plus_sin()
    if name == "affine" and len(params) == 2:
        return affine(*params)
    if name in ("poly", "polynomial") and params:
        return polynomial(params)
    raise UsageError(
        f"unknown function {spec!r}; expected identity, square, sin, x+sin, affine:a,b or poly:c0,c1,..."
    )


# -- corpora -----------------------------------------------------------------


def default_corpus(prefix_len=DEFAULT_PREFIX, seed=7, process_len=67, process_trials=10000):
    """Deterministic members plus both stochastic example sequences.

    The stochastic members are simulated on a short prefix (``process_len``
    sizes with ``process_trials`` trials each) to keep the corpus cheap.
    Fewer trials leave enough Monte Carlo noise in the order-3 tail of
    ``split3/k`` that a map like ``3x - 2`` pushes it past ``eps_verdict``.
    """
    corpus = [
        generator("constant", 1.0, prefix_len=prefix_len),
        generator("linear", 1.0, 0.0, prefix_len=prefix_len),
        generator("sqrt", prefix_len=prefix_len),
        generator("harmonic", prefix_len=prefix_len),
        generator("power", 1.5, prefix_len=prefix_len),
        generator("log", prefix_len=prefix_len),
        process_sequence("survivor", process_len, process_trials, seed),
        process_sequence("split3", process_len, process_trials, seed),
    ]
    return sorted(corpus, key=lambda s: s.label)


def bounded_corpus(prefix_len=DEFAULT_PREFIX):
    """Corpus with every value inside [0, 10]."""
    recip = generator("power", -1.0, prefix_len=prefix_len)
    root = generator("sqrt", prefix_len=prefix_len)
    corpus = [
        generator("constant", 4.0, prefix_len=prefix_len),
        generator("log", prefix_len=prefix_len),
        affine_combine(1.0, recip, 0.0, recip, 5.0).relabel("5+1/k"),
        affine_combine(1.0 / 13.0, root, 0.0, root, 0.0).relabel("sqrt/13"),
    ]
    return sorted(corpus, key=lambda s: s.label)


# -- probing -----------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    label: str
    input_profile: QCProfile
    output_profile: QCProfile
    sequence: SequenceSource = field(repr=False, compare=False)
    image: SequenceSource = field(repr=False, compare=False)

    def to_dict(self):
        return {
            "sequence": self.label,
            "input": self.input_profile.to_dict(),
            "output": self.output_profile.to_dict(),
        }


@dataclass(frozen=True)
class ProbeReport:
    function: str
    scheme: str
    policy: Policy
    order: int
    corpus_size: int
    outcome: str
    witnesses: tuple = ()
    tested: tuple = ()
    skipped_inconclusive: tuple = ()
    not_applicable: tuple = ()
    inconclusive_outputs: tuple = ()
    seeds: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "function": self.function,
            "scheme": self.scheme,
            "policy": self.policy.to_dict(),
            "order": self.order,
            "corpus_size": self.corpus_size,
            "outcome": self.outcome,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "tested": list(self.tested),
            "skipped_inconclusive": list(self.skipped_inconclusive),
            "not_applicable": list(self.not_applicable),
            "inconclusive_outputs": list(self.inconclusive_outputs),
            "seeds": dict(self.seeds),
        }


def _resolve(scheme, policy):
    return scheme if isinstance(scheme, LacunaryScheme) else policy.scheme(scheme)


def input_profiles(corpus, scheme, policy=DEFAULT_POLICY):
    """Profiles of the corpus members, keyed by label; reusable across probes."""
    scheme = _resolve(scheme, policy)
    return {s.label: classify_quasi_cauchy(s, scheme, policy) for s in corpus}


def probe_ward_continuity(
    f: RealFunction,
    order: int,
    corpus,
    scheme="pow2",
    policy: Policy = DEFAULT_POLICY,
    profiles=None,
) -> ProbeReport:
    """Look for a corpus member that passes at ``order`` but whose image does not."""
    if order not in (1, 3):
        raise UsageError("probe order must be 1 or 3")
    scheme = _resolve(scheme, policy)
    corpus = sorted(corpus, key=lambda s: s.label)
    for s in corpus:
        f.check_domain(s)
    if profiles is None:
        profiles = input_profiles(corpus, scheme, policy)

    witnesses, tested, skipped, not_applicable, unclear = [], [], [], [], []
    for s in corpus:
        prof = profiles[s.label]
        outcome = prof.outcome(order)
        if outcome is Outcome.INCONCLUSIVE:
            skipped.append(s.label)
            continue
        if outcome is Outcome.NOT_NULL:
            not_applicable.append(s.label)
            continue
        tested.append(s.label)
        img = f.image(s)
        out = classify_quasi_cauchy(img, scheme, policy)
        if out.outcome(order) is Outcome.NOT_NULL:
            witnesses.append(Witness(s.label, prof, out, s, img))
        elif out.outcome(order) is Outcome.INCONCLUSIVE:
            unclear.append(s.label)

    if witnesses:
        result = VIOLATED
    elif unclear or not tested:
        result = INCONCLUSIVE
    else:
        result = PRESERVED
    return ProbeReport(
        function=f.label,
        scheme=scheme.name,
        policy=policy,
        order=order,
        corpus_size=len(corpus),
        outcome=result,
        witnesses=tuple(witnesses),
        tested=tuple(tested),
        skipped_inconclusive=tuple(skipped),
        not_applicable=tuple(not_applicable),
        inconclusive_outputs=tuple(unclear),
        seeds={s.label: s.seed for s in corpus if s.seed is not None},
    )


def dump_witnesses(report: ProbeReport, directory) -> list:
    """Write each witness's input and image prefixes as ``k,value`` CSV files."""
    os.makedirs(directory, exist_ok=True)
    paths = []
    for w in report.witnesses:
        stem = "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in w.label)
        for suffix, seq in (("input", w.sequence), ("output", w.image)):
            path = os.path.join(directory, f"{stem}_{suffix}.csv")
            write_csv(seq, path)
            paths.append(path)
    return paths


# -- theorem checks ----------------------------------------------------------


@dataclass(frozen=True)
class CompositionReport:
    f: ProbeReport
    g: ProbeReport
    gf: ProbeReport
    status: str

    @property
    def consistent(self) -> bool:
        return self.status != "inconsistent"

    def to_dict(self):
        return {
            "status": self.status,
            "consistent": self.consistent,
            "f": self.f.to_dict(),
            "g": self.g.to_dict(),
            "gf": self.gf.to_dict(),
        }


def check_composition(f, g, corpus, scheme="pow2", policy=DEFAULT_POLICY, order=3):
    """If ``f`` and ``g`` are both Preserved, ``g o f`` should be too."""
    scheme = _resolve(scheme, policy)
    profiles = input_profiles(corpus, scheme, policy)
    rf = probe_ward_continuity(f, order, corpus, scheme, policy, profiles)
    rg = probe_ward_continuity(g, order, corpus, scheme, policy, profiles)
    rgf = probe_ward_continuity(compose(g, f), order, corpus, scheme, policy, profiles)
    if rf.outcome != PRESERVED or rg.outcome != PRESERVED:
        status = "premise failed"
    elif rgf.outcome == PRESERVED:
        status = "consistent"
    else:
        status = "inconsistent"
    return CompositionReport(rf, rg, rgf, status)


@dataclass(frozen=True)
class TriplingReport:
    sequence: str
    original: QCProfile
    tripled: QCProfile
    status: str

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self):
        return {
            "sequence": self.sequence,
            "status": self.status,
            "original": self.original.to_dict(),
            "tripled": self.tripled.to_dict(),
        }


def tripling_check(s: SequenceSource, scheme="pow2", policy=DEFAULT_POLICY) -> TriplingReport:
    """Order-1 pass of ``s`` should carry over to orders 1 and 3 of the tripled sequence."""
    scheme = _resolve(scheme, policy)
    original = classify_quasi_cauchy(s, scheme, policy)
    tripled = classify_quasi_cauchy(repeat_elements(s, 3), scheme, policy)
    if not original.passes(1):
        status = "premise failed"
    elif tripled.passes(1) and tripled.passes(3):
        status = "pass"
    else:
        status = "fail"
    return TriplingReport(s.label, original, tripled, status)


@dataclass(frozen=True)
class UniformLimitReport:
    function: str
    family_size: int
    grid_size: int
    grid_range: tuple
    gaps: tuple
    epsilon: float
    gap_decreasing: bool
    gap_below_threshold: bool
    family_outcomes: tuple
    limit_report: ProbeReport
    passed: bool

    @property
    def final_gap(self) -> float:
        return self.gaps[-1]

    def to_dict(self):
        return {
            "function": self.function,
            "family_size": self.family_size,
            "grid_size": self.grid_size,
            "grid_range": list(self.grid_range),
            "gaps": list(self.gaps),
            "final_gap": self.final_gap,
            "epsilon": self.epsilon,
            "threshold": self.epsilon / 9.0,
            "gap_decreasing": self.gap_decreasing,
            "gap_below_threshold": self.gap_below_threshold,
            "family_outcomes": list(self.family_outcomes),
            "limit": self.limit_report.to_dict(),
            "passed": self.passed,
        }


GAP_DPS = 50


def sup_gap(fn: RealFunction, f: RealFunction, grid, dps=GAP_DPS) -> float:
    """``max |fn(x) - f(x)|`` over ``grid``, evaluated at ``dps`` digits."""
    xp = backend(dps)
    x = xp.asarray(np.asarray(grid, dtype=float))
    diff = fn.fn(x, xp) - f.fn(x, xp)
    return float(max(abs(d) for d in diff))


def uniform_limit_harness(
    family, f: RealFunction, sample_grid, corpus, scheme="pow2", policy=DEFAULT_POLICY, epsilon=None
) -> UniformLimitReport:
    """Check a uniformly convergent family against its limit.

    The uniform gap at the last family member must be below ``epsilon / 9``
    (one share of the nine-way split of ``epsilon`` used when bounding the
    limit's block means through a member's). ``epsilon`` defaults to
    ``18 * policy.eps_verdict``. Every member and the limit are probed at
    order 3 on ``corpus``.
    """
    family = list(family)
    if not family:
        raise UsageError("function family is empty")
    grid = np.asarray(sample_grid, dtype=float)
    if grid.size == 0:
        raise UsageError("sample grid is empty")
    epsilon = 18.0 * policy.eps_verdict if epsilon is None else float(epsilon)

    scheme = _resolve(scheme, policy)
    profiles = input_profiles(corpus, scheme, policy)
    gaps = tuple(sup_gap(fn, f, grid) for fn in family)
    outcomes = tuple(
        probe_ward_continuity(fn, 3, corpus, scheme, policy, profiles).outcome for fn in family
    )
    limit = probe_ward_continuity(f, 3, corpus, scheme, policy, profiles)
    decreasing = len(gaps) == 1 or gaps[-1] <= min(gaps[:-1])
    below = gaps[-1] < epsilon / 9.0
    passed = all(o == PRESERVED for o in outcomes) and below and limit.outcome == PRESERVED
    return UniformLimitReport(
        function=f.label,
        family_size=len(family),
        grid_size=int(grid.size),
        grid_range=(float(grid.min()), float(grid.max())),
        gaps=gaps,
        epsilon=epsilon,
        gap_decreasing=decreasing,
        gap_below_threshold=below,
        family_outcomes=outcomes,
        limit_report=limit,
        passed=passed,
    )


@dataclass(frozen=True)
class SearchResult:
    function: str
    witness: object
    evidence: tuple

    def to_dict(self):
        return {"function": self.function, "witness": self.witness, "evidence": list(self.evidence)}


def search_counterexample(
    f: RealFunction, family, params, scheme="pow2", policy=DEFAULT_POLICY, budget=None, stop_at_first=True
) -> SearchResult:
    """Scan ``family(p)`` over ``params`` for an order-3 violation of ``f``.

    A parameter is a witness when the member is NullConvergent at order 3 and
    its image is NotNull. Returns the first witness parameter (or ``None``)
    together with per-parameter evidence.
    """
    params = list(params)
    budget = len(params) if budget is None else budget
    if budget < 1:
        raise UsageError("budget must be >= 1")
    scheme = _resolve(scheme, policy)
    witness, evidence = None, []
    for p in params[:budget]:
        s = family(p)
        f.check_domain(s)
        before = classify_quasi_cauchy(s, scheme, policy)
        entry = {"param": p, "input": before.outcome(3).value, "output": None}
        if before.passes(3):
            after = classify_quasi_cauchy(f.image(s), scheme, policy)
            entry["output"] = after.outcome(3).value
            if after.outcome(3) is Outcome.NOT_NULL and witness is None:
                witness = p
        evidence.append(entry)
        if witness is not None and stop_at_first:
            break
    return SearchResult(f.label, witness, tuple(evidence))


@dataclass(frozen=True)
class CompactnessReport:
    sequence: str
    kind: str
    bounds: tuple | None
    indices: tuple
    profile: QCProfile | None
    growth: dict | None
    attempts: tuple = ()

    @property
    def passes(self) -> bool:
        return self.profile is not None and self.profile.passes(3)

    def to_dict(self):
        return {
            "sequence": self.sequence,
            "kind": self.kind,
            "bounds": list(self.bounds) if self.bounds else None,
            "indices": list(self.indices),
            "attempts": list(self.attempts),
            "profile": self.profile.to_dict() if self.profile else None,
            "growth": self.growth,
        }


def growth_evidence(s: SequenceSource, scheme, window=3, growth_tol=0.01):
    """Block maxima of ``|s|`` that grow by at least ``growth_tol`` per block.

    Fires when each of the last ``window`` steps between consecutive block
    maxima is a relative increase of at least ``growth_tol``. Evidence of
    unboundedness only.
    """
    vals = np.abs(np.asarray(s.values(), dtype=float))
    maxima = []
    for r in range(1, len(scheme.cuts)):
        lo, hi = scheme.cuts[r - 1] + 1, scheme.cuts[r]
        if hi > vals.size:
            break
        maxima.append(float(vals[lo - 1 : hi].max()))
    tail = maxima[-(window + 1):]
    fires = len(tail) == window + 1 and all(
        b >= a * (1.0 + growth_tol) and b > a for a, b in zip(tail, tail[1:])
    )
    return {"fires": fires, "block_maxima": maxima, "growth_tol": growth_tol, "window": window}


def ward_compactness_check(
    s: SequenceSource, bounds=None, scheme="pow2", policy=DEFAULT_POLICY, targets=BW_TARGETS,
    reserve=2.0,
) -> CompactnessReport:
    """Extract a bisection subsequence and classify it at order 3.

    Without ``bounds`` a growth heuristic runs first; if it fires the report
    carries that evidence instead of a subsequence. Otherwise the observed
    range is used as the bracket. Given bounds are enforced.

    Compactness only asks for *some* quasi-Cauchy subsequence, so adaptive
    extraction is tried for each length in ``targets`` (in order) and the
    first order-3 NullConvergent subsequence is kept. Every attempt is
    recorded; if none passes the last one is reported.
    """
    scheme = _resolve(scheme, policy)
    if s.prefix_len < 64:
        raise InsufficientData(f"{s.label}: prefix {s.prefix_len} below the minimum of 64")
    if not targets:
        raise UsageError("targets must be non-empty")
    growth = None
    if bounds is None:
        growth = growth_evidence(s, scheme, policy.window)
        if growth["fires"]:
            return CompactnessReport(s.label, "unbounded-evidence", None, (), None, growth)
        vals = np.asarray(s.values(), dtype=float)
        bounds = (float(vals.min()), float(vals.max()))
    lo, hi = bounds
    attempts = []
    for target in targets:
        target = min(int(target), s.prefix_len)
        idx = bw_subsequence(s, lo, hi, target, adaptive=True, reserve=reserve)
        sub = subsequence(s, idx, f"bw({s.label})")
        profile = classify_quasi_cauchy(sub, scheme, policy)
        attempts.append({"target_len": target, "outcome": profile.outcome(3).value})
        if profile.passes(3):
            break
    return CompactnessReport(
        s.label, "subsequence", (lo, hi), tuple(idx), profile, growth, tuple(attempts)
    )

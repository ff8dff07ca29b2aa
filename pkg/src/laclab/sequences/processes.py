"""Monte Carlo simulators for the two stochastic example sequences.

survivor
    ``n`` people each pick another person uniformly at random; everyone who
    was picked leaves. Repeat on the remainder until 0 or 1 people are left.
    The estimated quantity is the probability that exactly one remains. A
    group of one is already finished, so ``n = 1`` gives probability 1.

split3
    Every member of every live group joins one of three subgroups uniformly
    at random; subgroups with 0 or 1 members are dropped. The estimated
    quantity is the expected number of partition rounds until no group is
    left. A lone person is dropped before any round, so ``k = 1`` gives 0.

Both simulators are deterministic functions of ``(seed, trials, workers)``.
Randomness comes from numpy's PCG64, seeded through ``SeedSequence`` with
the process name and size mixed in, and split across workers with
``SeedSequence.spawn``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import UsageError
from .core import SequenceSource, from_values

RNG_ALGORITHM = "PCG64"
_PROCESS_KEYS = {"survivor": 1, "split3": 2}


@dataclass(frozen=True)
class ProcessEstimate:
    process: str
    n: int
    mean: float
    stderr: float
    trials: int
    seed: int
    workers: int = 1
    rng: str = RNG_ALGORITHM

    @property
    def normalized(self) -> float:
        return self.mean / self.n

    def to_dict(self):
        return {
            "process": self.process,
            "n": self.n,
            "estimate": self.mean,
            "stderr": None if math.isnan(self.stderr) else self.stderr,
            "trials": self.trials,
            "seed": self.seed,
            "workers": self.workers,
            "rng": self.rng,
        }


def _resolve_seed(seed):
    if seed is None:
        return int(np.random.SeedSequence().entropy)
    return int(seed)


def _worker_rngs(process, n, seed, workers):
    root = np.random.SeedSequence([seed, _PROCESS_KEYS[process], n])
    return [np.random.Generator(np.random.PCG64(ss)) for ss in root.spawn(workers)]


def _split_trials(trials, workers):
    base, extra = divmod(trials, workers)
    return [base + (1 if i < extra else 0) for i in range(workers)]


def _run(process, n, trials, seed, workers, batch):
    if trials < 1:
        raise UsageError("trials must be >= 1")
    if workers < 1:
        raise UsageError("workers must be >= 1")
    rngs = _worker_rngs(process, n, seed, workers)
    shares = _split_trials(trials, workers)
    if workers == 1:
        return [batch(n, shares[0], rngs[0])]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda a: batch(n, *a), zip(shares, rngs)))


# -- survivor ----------------------------------------------------------------


def _survivor_batch(n, trials, rng):
    """Number of the ``trials`` runs that end with exactly one person."""
    if trials == 0:
        return 0
    counts = np.full(trials, n, dtype=np.int64)
    while True:
        live = counts >= 2
        if not live.any():
            break
        for c in np.unique(counts[live]):
            rows = np.flatnonzero(counts == c)
            picks = rng.integers(0, c - 1, size=(rows.size, c))
            # shift so nobody picks themselves
            picks += picks >= np.arange(c)
            picked = np.zeros((rows.size, c), dtype=bool)
            picked[np.arange(rows.size)[:, None], picks] = True
            counts[rows] = c - picked.sum(axis=1)
    return int(np.count_nonzero(counts == 1))


def simulate_survivor_process(n: int, trials: int, seed=None, workers: int = 1) -> ProcessEstimate:
    """Estimate P(exactly one person remains) starting from ``n`` people."""
    if n < 1:
        raise UsageError("n must be >= 1")
    seed = _resolve_seed(seed)
    if n == 1:
        # convention: a single person has already "survived"
        if trials < 1:
            raise UsageError("trials must be >= 1")
        return ProcessEstimate("survivor", 1, 1.0, 0.0, trials, seed, workers)
    hits = sum(_run("survivor", n, trials, seed, workers, _survivor_batch))
    p = hits / trials
    return ProcessEstimate("survivor", n, p, math.sqrt(p * (1.0 - p) / trials), trials, seed, workers)


# -- split3 ------------------------------------------------------------------


def _split3_batch(k, trials, rng):
    """Per-trial round counts."""
    rounds = np.zeros(trials, dtype=np.int64)
    if k <= 1 or trials == 0:
        return rounds
    sizes = np.full(trials, k, dtype=np.int64)
    owner = np.arange(trials)
    thirds = [1.0 / 3.0] * 3
    while sizes.size:
        rounds[np.unique(owner)] += 1
        parts = rng.multinomial(sizes, thirds)
        keep = parts >= 2
        sizes = parts[keep]
        owner = np.broadcast_to(owner[:, None], parts.shape)[keep]
    return rounds


def simulate_three_split_process(k: int, trials: int, seed=None, workers: int = 1) -> ProcessEstimate:
    """Estimate the expected number of rounds until every group is removed."""
    if k < 1:
        raise UsageError("k must be >= 1")
    seed = _resolve_seed(seed)
    rounds = np.concatenate(_run("split3", k, trials, seed, workers, _split3_batch))
    mean = float(rounds.mean())
    stderr = float(rounds.std(ddof=1) / math.sqrt(trials)) if trials > 1 else float("nan")
    return ProcessEstimate("split3", k, mean, stderr, trials, seed, workers)


SIMULATORS = {
    "survivor": simulate_survivor_process,
    "split3": simulate_three_split_process,
}


def simulate(process: str, n: int, trials: int, seed=None, workers: int = 1) -> ProcessEstimate:
    try:
        sim = SIMULATORS[process]
    except KeyError:
        raise UsageError(f"unknown process {process!r}; expected survivor or split3") from None
    return sim(n, trials, seed, workers)


def process_sequence(
    process: str, n_max: int, trials: int, seed=None, normalized=None, workers: int = 1
) -> SequenceSource:
    """Sequence of estimates for sizes ``1..n_max``.

    ``split3`` is normalized to ``alpha_k / k`` by default, the form in which it
    is studied as a bounded sequence; ``survivor`` is left as is.
    """
    seed = _resolve_seed(seed)
    if normalized is None:
        normalized = process == "split3"
    vals = []
    for n in range(1, n_max + 1):
        est = simulate(process, n, trials, seed, workers)
        vals.append(est.normalized if normalized else est.mean)
    label = f"{process}{'/k' if normalized else ''}"
    return from_values(vals, label, seed=seed)

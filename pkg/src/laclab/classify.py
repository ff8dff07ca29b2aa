"""Lacunary block means and finite-prefix verdicts.

For a sequence ``a``, a scheme with blocks ``I_r`` and an order ``m`` the
block mean is ``t_r = (1/h_r) * sum_{k in I_r} |D^m a_k - L|``. A mathematical
statement ``t_r -> 0`` cannot be decided on a prefix; :func:`trend_verdict`
turns the tail of ``t_r`` into one of three outcomes under a named
:class:`Policy`, and every report carries the policy that produced it.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ._precision import backend
from .errors import InsufficientData, UsageError
from .lacunary import LacunaryScheme, blocks, resolve_scheme
from .sequences import MAX_ORDER, SequenceSource, difference

MIN_QC_BLOCKS = 4


@dataclass(frozen=True)
class Policy:
    """Thresholds standing in for ``lim t_r = 0``.

    ``window`` tail values are inspected. NullConvergent needs all of them
    below ``eps_verdict`` and a fitted decay ratio of at most 1; NotNull
    needs all of them above ``eps_floor``. The decay test is waived when the
    whole window is below ``noise_floor`` (pure rounding residue).
    ``prefix_len`` is the index range covered by catalog schemes and
    ``block_count`` the minimum number of blocks such a scheme must provide.
    ``dps`` switches evaluation to mpmath with that many digits.
    """

    name: str = "default"
    window: int = 3
    eps_verdict: float = 1e-2
    eps_floor: float = 1e-1
    prefix_len: int = 2**14
    block_count: int = 12
    noise_floor: float = 1e-9
    dps: int | None = None

    def __post_init__(self):
        if self.window < 1:
            raise UsageError("window must be >= 1")
        for name in ("eps_verdict", "eps_floor", "noise_floor"):
            if not getattr(self, name) > 0:
                raise UsageError(f"{name} must be > 0")
        if self.prefix_len < 64:
            raise UsageError("prefix length must be >= 64")
        if self.block_count < 1:
            raise UsageError("block_count must be >= 1")
        if self.dps is not None and self.dps < 1:
            raise UsageError("dps must be >= 1")

    def to_dict(self):
        return asdict(self)

    def scheme(self, spec="pow2") -> LacunaryScheme:
        return resolve_scheme(spec, self.prefix_len, self.block_count)


DEFAULT_POLICY = Policy()


class Outcome(str, enum.Enum):
    NULL = "NullConvergent"
    NOT_NULL = "NotNull"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class BlockMeanSeries:
    scheme: str
    order: int
    shift: float
    r: tuple
    h: tuple
    values: tuple
    notes: tuple = ()

    def __len__(self):
        return len(self.values)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "h", "t"])
        for r, h, t in zip(self.r, self.h, self.values):
            w.writerow([r, h, repr(float(t))])
        return buf.getvalue()

    def to_dict(self):
        return {
            "scheme": self.scheme,
            "order": self.order,
            "shift": self.shift,
            "r": list(self.r),
            "h": list(self.h),
            "t": [float(t) for t in self.values],
            "notes": list(self.notes),
        }


def block_means(s: SequenceSource, scheme: LacunaryScheme, m: int = 0, shift=0.0, dps=None):
    """Block means of ``|D^m s - shift|`` over every block the prefix covers.

    Blocks that would need terms past the prefix are dropped, not truncated.
    Each block total is summed exactly (``math.fsum`` / ``mpmath.fsum``), so
    the result does not depend on summation order.
    """
    d = difference(s, m)
    all_blocks = blocks(scheme, scheme.last_cut)
    usable = [b for b in all_blocks if b.hi <= d.prefix_len]
    if not usable:
        raise InsufficientData(
            f"{s.label}: no complete block of {scheme.name} within {d.prefix_len} "
            f"order-{m} terms",
            achieved=0,
        )
    notes = ()
    if len(usable) < len(all_blocks):
        dropped = [b.r for b in all_blocks[len(usable):]]
        notes = (f"dropped blocks r={dropped[0]}..{dropped[-1]}: need terms beyond prefix {s.prefix_len}",)

    xp = backend(dps)
    vals = d.values(usable[-1].hi, dps=dps)
    if shift != 0:
        vals = vals - xp.const(shift)
    t = []
    for b in usable:
        chunk = abs(vals[b.lo - 1 : b.hi])
        t.append(float(xp.fsum(chunk) / b.h))
    return BlockMeanSeries(
        scheme=scheme.name,
        order=m,
        shift=float(shift),
        r=tuple(b.r for b in usable),
        h=tuple(b.h for b in usable),
        values=tuple(t),
        notes=notes,
    )


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    tail_mean: float
    last_value: float
    decay_ratio: float
    window: int
    policy: str = "default"

    def to_dict(self):
        return {
            "outcome": self.outcome.value,
            "tail_mean": self.tail_mean,
            "last_value": self.last_value,
            "decay_ratio": self.decay_ratio,
            "window": self.window,
            "policy": self.policy,
        }


def _decay_ratio(tail):
    """exp of the least-squares slope of log t over consecutive blocks."""
    tail = np.asarray(tail, dtype=float)
    if len(tail) < 2 or not tail.any():
        return 0.0
    logs = np.log(np.maximum(tail, np.finfo(float).tiny))
    x = np.arange(len(tail), dtype=float)
    slope = np.polyfit(x, logs, 1)[0]
    return float(math.exp(min(slope, 700.0)))


def trend_verdict(series, policy: Policy = DEFAULT_POLICY) -> Verdict:
    """Classify a block-mean series by its last ``policy.window`` values."""
    values = np.asarray(series.values if isinstance(series, BlockMeanSeries) else series, dtype=float)
    if values.size == 0:
        raise UsageError("empty block-mean series")
    w = min(policy.window, values.size)
    tail = values[-w:]
    fit = values[-max(w, 2):]
    ratio = _decay_ratio(fit)
    small = bool(np.all(tail < policy.eps_verdict))
    settled = ratio <= 1.0 or bool(np.all(fit < policy.noise_floor))
    if small and settled:
        outcome = Outcome.NULL
    elif np.all(tail > policy.eps_floor):
        outcome = Outcome.NOT_NULL
    else:
        outcome = Outcome.INCONCLUSIVE
    return Verdict(outcome, float(tail.mean()), float(tail[-1]), ratio, int(w), policy.name)


def estimate_ntheta_limit(s: SequenceSource, scheme, window=None, policy: Policy = DEFAULT_POLICY):
    """Estimate ``L`` with ``N_theta-lim s = L`` and judge the fit.

    ``L_hat`` is the mean of ``s`` over the last ``window`` complete blocks
    (default: the policy window); the verdict is computed on the order-0
    block means at shift ``L_hat``. Returns ``(L_hat, verdict, series)``.
    """
    window = policy.window if window is None else window
    usable = [b for b in blocks(scheme, scheme.last_cut) if b.hi <= s.prefix_len]
    if len(usable) < 2:
        raise InsufficientData(f"{s.label}: need at least 2 complete blocks, have {len(usable)}")
    first = usable[-min(window, len(usable))]
    xp = backend(policy.dps)
    vals = s.values(usable[-1].hi, dps=policy.dps)[first.lo - 1 :]
    l_hat = float(xp.fsum(vals) / len(vals))
    series = block_means(s, scheme, 0, l_hat, dps=policy.dps)
    return l_hat, trend_verdict(series, policy), series


@dataclass(frozen=True)
class QCProfile:
    """Verdicts at orders 1-3 under one scheme and one policy."""

    label: str
    scheme: str
    policy: Policy
    verdicts: dict
    series: dict = field(repr=False)

    def outcome(self, m: int) -> Outcome:
        return self.verdicts[m].outcome

    def passes(self, m: int) -> bool:
        return self.verdicts[m].outcome is Outcome.NULL

    def to_dict(self):
        return {
            "sequence": self.label,
            "scheme": self.scheme,
            "policy": self.policy.to_dict(),
            "orders": {f"m{m}": v.outcome.value for m, v in sorted(self.verdicts.items())},
            "evidence": {f"m{m}": v.to_dict() for m, v in sorted(self.verdicts.items())},
            "series": {f"m{m}": s.to_dict() for m, s in sorted(self.series.items())},
        }


def classify_quasi_cauchy(s: SequenceSource, scheme, policy: Policy = DEFAULT_POLICY) -> QCProfile:
    """Block means of ``|D^m s|`` for m = 1, 2, 3 and their verdicts."""
    if not isinstance(scheme, LacunaryScheme):
        scheme = policy.scheme(scheme)
    available = [b for b in blocks(scheme, scheme.last_cut) if b.hi <= s.prefix_len - MAX_ORDER]
    if len(available) < MIN_QC_BLOCKS:
        raise InsufficientData(
            f"{s.label}: {len(available)} complete blocks after order-{MAX_ORDER} "
            f"differencing, need {MIN_QC_BLOCKS}",
            achieved=len(available),
        )
    series, verdicts = {}, {}
    for m in (1, 2, 3):
        series[m] = block_means(s, scheme, m, 0.0, dps=policy.dps)
        verdicts[m] = trend_verdict(series[m], policy)
    return QCProfile(s.label, scheme.name, policy, verdicts, series)

"""Real sequences indexed from k = 1, and the transforms applied to them.

A :class:`SequenceSource` is lazy: it stores an evaluator that returns the
values on a contiguous index range ``lo..hi`` for a chosen backend. Transforms
(differences, repetition, affine combination, function images) compose
evaluators, so the same pipeline can be run in double precision or in mpmath.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from math import comb
from typing import Callable

import numpy as np

from .._precision import backend
from ..errors import DataError, InsufficientData, UsageError

MAX_ORDER = 3
DEFAULT_PREFIX = 2**14 + MAX_ORDER

Evaluator = Callable[[int, int, object], np.ndarray]


@dataclass(frozen=True)
class SequenceSource:
    """An indexable real sequence with a usable prefix ``1..prefix_len``."""

    label: str
    prefix_len: int
    evaluate: Evaluator = field(repr=False, compare=False)
    seed: int | None = None

    def __len__(self):
        return self.prefix_len

    def values(self, n=None, dps=None, start=1):
        """Values at ``start..n`` (default: the whole prefix)."""
        n = self.prefix_len if n is None else n
        if n > self.prefix_len:
            raise InsufficientData(
                f"{self.label}: requested index {n} beyond prefix {self.prefix_len}",
                achieved=self.prefix_len,
            )
        if n < start:
            return backend(dps).asarray(np.empty(0))
        return self.evaluate(start, n, backend(dps))

    def __call__(self, k: int) -> float:
        if not 1 <= k <= self.prefix_len:
            raise IndexError(f"{self.label}: index {k} outside 1..{self.prefix_len}")
        return float(self.evaluate(k, k, backend(None))[0])

    def with_prefix(self, prefix_len: int) -> "SequenceSource":
        return SequenceSource(self.label, prefix_len, self.evaluate, self.seed)

    def relabel(self, label: str) -> "SequenceSource":
        return SequenceSource(label, self.prefix_len, self.evaluate, self.seed)


def from_values(values, label="data", seed=None) -> SequenceSource:
    """Wrap a finite list of floats; ``values[0]`` is the k = 1 term."""
    data = np.asarray(values, dtype=float).copy()
    data.setflags(write=False)

    def evaluate(lo, hi, xp):
        return xp.asarray(data[lo - 1 : hi])

    return SequenceSource(label, len(data), evaluate, seed)


def difference(s: SequenceSource, m: int) -> SequenceSource:
    """Forward difference of order ``m``.

    ``out(k) = sum_j (-1)^j C(m, j) s(k + m - j)``. Terms with equal binomial
    weight are paired before scaling, so constants cancel exactly.
    """
    if not 0 <= m <= MAX_ORDER:
        raise UsageError(f"difference order must be in 0..{MAX_ORDER}, got {m}")
    if m == 0:
        return s
    if s.prefix_len <= m:
        raise InsufficientData(
            f"{s.label}: prefix {s.prefix_len} too short for order-{m} difference",
            achieved=s.prefix_len,
        )

    def evaluate(lo, hi, xp):
        v = s.evaluate(lo, hi + m, xp)
        n = hi - lo + 1
        out = None
        for j in range(m // 2 + 1):
            hi_term = v[m - j : m - j + n]
            lo_term = v[j : j + n]
            if 2 * j == m:
                term = hi_term
            elif m % 2:
                term = hi_term - lo_term
            else:
                term = hi_term + lo_term
            weight = comb(m, j)
            if weight != 1:
                term = weight * term
            if j % 2:
                term = -term
            out = term if out is None else out + term
        return out

    return SequenceSource(f"D{m}({s.label})", s.prefix_len - m, evaluate, s.seed)


def repeat_elements(s: SequenceSource, m: int) -> SequenceSource:
    """Repeat every term ``m`` times: ``(a1, a1, a1, a2, a2, a2, ...)`` for m = 3."""
    if m < 1:
        raise UsageError("repetition count must be >= 1")
    if m == 1:
        return s

    def evaluate(lo, hi, xp):
        inner_lo = (lo - 1) // m + 1
        inner_hi = (hi - 1) // m + 1
        v = np.repeat(s.evaluate(inner_lo, inner_hi, xp), m)
        offset = (lo - 1) - (inner_lo - 1) * m
        return v[offset : offset + hi - lo + 1]

    return SequenceSource(f"repeat{m}({s.label})", m * s.prefix_len, evaluate, s.seed)


def affine_combine(a, s: SequenceSource, b, t: SequenceSource, c=0.0) -> SequenceSource:
    """Pointwise ``a*s(k) + b*t(k) + c`` over the shorter of the two prefixes."""
    if s.prefix_len < 1 or t.prefix_len < 1:
        raise InsufficientData("affine_combine needs non-empty prefixes")

    def evaluate(lo, hi, xp):
        out = xp.const(a) * s.evaluate(lo, hi, xp)
        if b != 0:
            out = out + xp.const(b) * t.evaluate(lo, hi, xp)
        if c != 0:
            out = out + xp.const(c)
        return out

    label = f"{a:g}*{s.label}+{b:g}*{t.label}+{c:g}"
    return SequenceSource(label, min(s.prefix_len, t.prefix_len), evaluate, s.seed)


def map_values(fn, s: SequenceSource, label=None) -> SequenceSource:
    """Image sequence ``fn(s(k))`` where ``fn(x, xp)`` is backend-aware."""

    def evaluate(lo, hi, xp):
        return fn(s.evaluate(lo, hi, xp), xp)

    return SequenceSource(label or f"f({s.label})", s.prefix_len, evaluate, s.seed)


# -- generator catalog -------------------------------------------------------


def _closed_form(expr):
    def evaluate(lo, hi, xp):
        return expr(xp.index(np.arange(lo, hi + 1)), xp)

    return evaluate


def _harmonic(lo, hi, xp):
    terms = xp.const(1) / xp.index(np.arange(1, hi + 1))
    return xp.cumsum(terms)[lo - 1 : hi]


def _alternating(lo, hi, xp):
    k = np.arange(lo, hi + 1)
    return xp.asarray(np.where(k % 2 == 0, 1.0, -1.0))


def _params(kind, params, count):
    if len(params) != count:
        raise UsageError(f"generator {kind!r} takes {count} parameter(s), got {len(params)}")
    vals = tuple(float(p) for p in params)
    if not all(math.isfinite(v) for v in vals):
        raise UsageError(f"generator {kind!r} parameters must be finite")
    return vals


def generator(kind: str, *params, prefix_len: int = DEFAULT_PREFIX) -> SequenceSource:
    """Closed-form sequence from the catalog.

    ``constant c``, ``linear a b`` (a*k + b), ``power p`` (k**p), ``sqrt``,
    ``harmonic`` (partial sums of 1/i), ``alternating`` ((-1)**k), ``log``
    (log(k + 1)), ``cubic`` (k**3), ``sin`` (sin k).
    """
    if kind == "constant":
        (c,) = _params(kind, params, 1)
        evaluate = lambda lo, hi, xp: xp.full(hi - lo + 1, c)  # noqa: E731
        label = f"constant:{c:g}"
    elif kind == "linear":
        a, b = _params(kind, params, 2)
        evaluate = _closed_form(lambda k, xp: xp.const(a) * k + xp.const(b))
        label = f"linear:{a:g},{b:g}"
    elif kind == "power":
        (p,) = _params(kind, params, 1)
        evaluate = _closed_form(lambda k, xp: k ** xp.const(p))
        label = f"power:{p:g}"
    elif kind == "sqrt":
        _params(kind, params, 0)
        evaluate = _closed_form(lambda k, xp: xp.sqrt(k))
        label = "sqrt"
    elif kind == "harmonic":
        _params(kind, params, 0)
        evaluate = _harmonic
        label = "harmonic"
    elif kind == "alternating":
        _params(kind, params, 0)
        evaluate = _alternating
        label = "alternating"
    elif kind == "log":
        _params(kind, params, 0)
        evaluate = _closed_form(lambda k, xp: xp.log(k + xp.const(1)))
        label = "log"
    elif kind == "cubic":
        _params(kind, params, 0)
        evaluate = _closed_form(lambda k, xp: k * k * k)
        label = "cubic"
    elif kind == "sin":
        _params(kind, params, 0)
        evaluate = _closed_form(lambda k, xp: xp.sin(k))
        label = "sin"
    else:
        raise UsageError(f"unknown generator kind {kind!r}")
    return SequenceSource(label, prefix_len, evaluate)


GENERATOR_KINDS = (
    "constant", "linear", "power", "sqrt", "harmonic", "alternating", "log", "cubic", "sin",
)


def parse_generator(spec: str, prefix_len: int = DEFAULT_PREFIX) -> SequenceSource:
    """Build a generator from ``kind[:p1,p2,...]``, e.g. ``power:1.5``."""
    kind, _, args = spec.strip().partition(":")
    params = [a for a in args.split(",") if a.strip()] if args else []
    try:
        return generator(kind, *params, prefix_len=prefix_len)
    except ValueError as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"bad generator spec {spec!r}: {exc}") from exc


# -- CSV ---------------------------------------------------------------------


def to_csv(s: SequenceSource, n=None, dps=None) -> str:
    """``k,value`` rows with shortest round-trip float formatting."""
    vals = backend(dps).to_float(s.values(n, dps=dps))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "value"])
    for k, v in enumerate(vals, start=1):
        w.writerow([k, repr(float(v))])
    return buf.getvalue()


def write_csv(s: SequenceSource, path, n=None) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(to_csv(s, n))


def read_csv(path, label=None) -> SequenceSource:
    """Load a ``k,value`` prefix. Indices must be exactly 1..n in order."""
    with open(path, newline="") as fh:
        return parse_csv(fh.read(), label or str(path))


def parse_csv(text: str, label="csv") -> SequenceSource:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["k", "value"]:
        raise DataError(f"{label}: missing 'k,value' header")
    values = []
    for line_no, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        try:
            k, v = int(row[0]), float(row[1])
        except (ValueError, IndexError) as exc:
            raise DataError(f"{label}: bad row at line {line_no}: {row!r}") from exc
        if k != len(values) + 1:
            raise DataError(f"{label}: expected k={len(values) + 1} at line {line_no}, got {k}")
        values.append(v)
    if not values:
        raise DataError(f"{label}: no data rows")
    return from_values(values, label)

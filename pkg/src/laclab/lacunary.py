"""Lacunary block schemes.

A scheme is a strictly increasing list of cut points ``k_0 = 0 < k_1 < ...``.
Block ``r`` is the index interval ``(k_{r-1}, k_r]`` with length
``h_r = k_r - k_{r-1}``. Only finite prefixes are represented, so the
asymptotic requirement ``h_r -> inf`` is never claimed; validation checks the
necessary prefix conditions and warns when the tail looks non-lacunary.

Note on the origin cut: some statements of the definition print ``k_0 != 0``,
but the block formula ``I_r = (k_{r-1}, k_r]`` covering ``1, 2, ...`` needs
``k_0 = 0``, which is the convention used here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from numbers import Integral

from .errors import SchemeError, UsageError

DEFAULT_RATIO_MARGIN = 0.05
DEFAULT_RHO = 1.5


@dataclass(frozen=True)
class Violation:
    index: int
    rule: str
    message: str

    def __str__(self):
        return f"index {self.index}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    cuts: tuple
    ratio_margin: float
    valid: bool
    violations: tuple = ()
    warnings: tuple = ()
    min_ratio: float | None = None

    def to_dict(self):
        return {
            "cuts": list(self.cuts),
            "ratio_margin": self.ratio_margin,
            "valid": self.valid,
            "violations": [
                {"index": v.index, "rule": v.rule, "message": v.message}
                for v in self.violations
            ],
            "warnings": list(self.warnings),
            "min_ratio": self.min_ratio,
        }


def validate_theta(cuts, ratio_margin=DEFAULT_RATIO_MARGIN) -> ValidationReport:
    """Check the prefix conditions of a lacunary cut list.

    The ratio ``k_r / k_{r-1}`` is checked from ``r = 2`` on (``k_1 / k_0`` is
    undefined). Two warnings can be raised without invalidating the prefix:
    block lengths that are non-increasing over the last three blocks, and ratios that
    fall monotonically over the last three available values.
    """
    cuts = tuple(cuts)
    if not cuts:
        raise UsageError("cut list is empty")
    if ratio_margin < 0:
        raise UsageError("ratio margin must be non-negative")

    violations = []
    for i, c in enumerate(cuts):
        if isinstance(c, bool) or not isinstance(c, Integral):
            violations.append(Violation(i, "integer", f"cut {c!r} is not an integer"))
    if violations:
        return ValidationReport(cuts, ratio_margin, False, tuple(violations))

    if cuts[0] != 0:
        violations.append(Violation(0, "origin", f"k_0 must be 0, got {cuts[0]}"))
    for i in range(1, len(cuts)):
        if cuts[i] <= cuts[i - 1]:
            violations.append(
                Violation(
                    i,
                    "increasing",
                    f"not strictly increasing: k_{i} = {cuts[i]} <= k_{i - 1} = {cuts[i - 1]}",
                )
            )

    ratios = []
    for i in range(2, len(cuts)):
        if cuts[i - 1] <= 0:
            continue
        ratio = cuts[i] / cuts[i - 1]
        ratios.append(ratio)
        if cuts[i] > cuts[i - 1] and ratio <= 1.0 + ratio_margin:
            violations.append(
                Violation(
                    i,
                    "ratio",
                    f"ratio k_{i}/k_{i - 1} = {ratio:.6g} <= 1 + {ratio_margin:g}",
                )
            )

    warnings = []
    if not violations:
        h = [cuts[i] - cuts[i - 1] for i in range(1, len(cuts))]
        if len(h) >= 3 and h[-3] >= h[-2] >= h[-1]:
            warnings.append("block lengths non-increasing over the last 3 blocks")
        if len(ratios) >= 3 and ratios[-3] > ratios[-2] > ratios[-1]:
            warnings.append("ratios decreasing toward 1")

    return ValidationReport(
        cuts=cuts,
        ratio_margin=ratio_margin,
        valid=not violations,
        violations=tuple(violations),
        warnings=tuple(warnings),
        min_ratio=min(ratios) if ratios else None,
    )


@dataclass(frozen=True)
class Block:
    r: int
    lo: int
    hi: int

    @property
    def h(self) -> int:
        return self.hi - self.lo + 1


@dataclass(frozen=True)
class LacunaryScheme:
    cuts: tuple
    name: str = ""
    ratio_margin: float = field(default=DEFAULT_RATIO_MARGIN, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "cuts", tuple(int(c) for c in self.cuts))
        report = validate_theta(self.cuts, self.ratio_margin)
        if not report.valid:
            raise SchemeError(
                "invalid lacunary scheme: " + "; ".join(str(v) for v in report.violations)
            )
        if not self.name:
            object.__setattr__(self, "name", ",".join(map(str, self.cuts)))

    @property
    def last_cut(self) -> int:
        return self.cuts[-1]

    def __len__(self):
        return len(self.cuts) - 1

    def truncate(self, max_index: int) -> "LacunaryScheme":
        cuts = tuple(c for c in self.cuts if c <= max_index)
        return LacunaryScheme(cuts, self.name, self.ratio_margin)


def blocks(scheme: LacunaryScheme, max_index: int) -> list[Block]:
    """Every block of ``scheme`` that fits entirely inside ``1..max_index``."""
    if not isinstance(scheme, LacunaryScheme):
        scheme = LacunaryScheme(tuple(scheme))
    out = []
    cuts = scheme.cuts
    for r in range(1, len(cuts)):
        if cuts[r] > max_index:
            break
        out.append(Block(r, cuts[r - 1] + 1, cuts[r]))
    return out


def powers_of_two(depth: int) -> LacunaryScheme:
    return LacunaryScheme((0,) + tuple(2**r for r in range(1, depth + 1)), "pow2")


def geometric(depth: int, rho: float = DEFAULT_RHO, ratio_margin=DEFAULT_RATIO_MARGIN):
    """Cuts ``ceil(rho**r)`` for ``r = 1..depth``, deduplicated.

    A candidate is kept only if it exceeds the previous kept cut by more than
    the ratio margin, so the result always validates.
    """
    if not rho > 1.0 + ratio_margin:
        raise UsageError(f"geometric ratio must exceed 1 + {ratio_margin:g}, got {rho}")
    cuts = [0]
    for r in range(1, depth + 1):
        c = math.ceil(rho**r)
        if c <= cuts[-1]:
            continue
        if len(cuts) >= 2 and c / cuts[-1] <= 1.0 + ratio_margin:
            continue
        cuts.append(c)
    return LacunaryScheme(tuple(cuts), f"geometric:{rho:g}", ratio_margin)


def factorial(depth: int) -> LacunaryScheme:
    return LacunaryScheme((0,) + tuple(math.factorial(r) for r in range(1, depth + 1)), "factorial")


def standard_schemes(depth: int, rho: float = DEFAULT_RHO) -> dict[str, LacunaryScheme]:
    """Named catalog of schemes with ``depth`` generating steps each."""
    if depth < 1:
        raise UsageError("depth must be >= 1")
    return {
        "pow2": powers_of_two(depth),
        "geometric": geometric(depth, rho),
        "factorial": factorial(depth),
    }


def _covering(builder, max_index):
    depth = 1
    while True:
        scheme = builder(depth)
        if scheme.last_cut > max_index or depth > 4096:
            return builder(depth - 1) if depth > 1 else scheme
        depth += 1


def resolve_scheme(spec, max_index: int, min_blocks: int = 1) -> LacunaryScheme:
    """Turn a catalog name or an explicit cut list into a scheme.

    Catalog names (``pow2``, ``geometric[:rho]``, ``factorial``) are expanded
    with every cut ``<= max_index``; explicit cuts (a sequence of ints or a
    comma-separated string) are used as given.
    """
    if isinstance(spec, LacunaryScheme):
        return spec
    if isinstance(spec, str) and spec.strip()[:1] in set("-0123456789"):
        spec = parse_cuts(spec)
    if not isinstance(spec, str):
        return LacunaryScheme(tuple(spec))

    name, _, arg = spec.partition(":")
    if name == "pow2":
        scheme = _covering(powers_of_two, max_index)
    elif name == "geometric":
        rho = float(arg) if arg else DEFAULT_RHO
        scheme = _covering(lambda d: geometric(d, rho), max_index)
    elif name == "factorial":
        scheme = _covering(factorial, max_index)
    else:
        raise UsageError(f"unknown scheme {spec!r}; expected pow2, geometric[:rho], factorial or cuts")
    if scheme.last_cut > max_index:
        scheme = scheme.truncate(max_index)
    if len(scheme) < min_blocks:
        raise SchemeError(
            f"scheme {scheme.name} has {len(scheme)} blocks within {max_index}, "
            f"need at least {min_blocks}"
        )
    return scheme


def parse_cuts(text: str) -> tuple:
    """Parse ``"0,2,4,8"`` into a tuple of ints."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise UsageError("cut list is empty")
    try:
        return tuple(int(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"cuts must be integers: {text!r}") from exc

"""Numerical toolkit for lacunary quasi-Cauchy sequences and ward continuity.

Everything works on finite prefixes, so every mathematical limit statement
is replaced by a verdict under an explicit :class:`Policy`.
"""

from .classify import (
    DEFAULT_POLICY,
    BlockMeanSeries,
    Outcome,
    Policy,
    QCProfile,
    Verdict,
    block_means,
    classify_quasi_cauchy,
    estimate_ntheta_limit,
    trend_verdict,
)
from .errors import (
    DataError,
    DomainError,
    InsufficientData,
    LaclabError,
    SchemeError,
    UsageError,
)
from .lacunary import (
    LacunaryScheme,
    ValidationReport,
    blocks,
    geometric,
    powers_of_two,
    resolve_scheme,
    standard_schemes,
    validate_theta,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_POLICY",
    "BlockMeanSeries",
    "DataError",
    "DomainError",
    "InsufficientData",
    "LacunaryScheme",
    "LaclabError",
    "Outcome",
    "Policy",
    "QCProfile",
    "SchemeError",
    "UsageError",
    "ValidationReport",
    "Verdict",
    "block_means",
    "blocks",
    "classify_quasi_cauchy",
    "estimate_ntheta_limit",
    "geometric",
    "powers_of_two",
    "resolve_scheme",
    "standard_schemes",
    "trend_verdict",
    "validate_theta",
]

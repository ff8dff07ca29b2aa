"""Sequence sources, difference operators and the example processes."""

from .core import (
    DEFAULT_PREFIX,
    GENERATOR_KINDS,
    MAX_ORDER,
    SequenceSource,
    affine_combine,
    difference,
    from_values,
    generator,
    map_values,
    parse_csv,
    parse_generator,
    read_csv,
    repeat_elements,
    to_csv,
    write_csv,
)
from .processes import (
    ProcessEstimate,
    process_sequence,
    simulate,
    simulate_survivor_process,
    simulate_three_split_process,
)
from .subsequence import bw_subsequence, subsequence

__all__ = [
    "DEFAULT_PREFIX",
    "GENERATOR_KINDS",
    "MAX_ORDER",
    "ProcessEstimate",
    "SequenceSource",
    "affine_combine",
    "bw_subsequence",
    "difference",
    "from_values",
    "generator",
    "map_values",
    "parse_csv",
    "parse_generator",
    "process_sequence",
    "read_csv",
    "repeat_elements",
    "simulate",
    "simulate_survivor_process",
    "simulate_three_split_process",
    "subsequence",
    "to_csv",
    "write_csv",
]

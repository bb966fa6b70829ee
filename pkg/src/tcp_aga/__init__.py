"""Greedy Additional test case prioritization with index-based acceleration."""

from tcp_aga.coverage import (
    CoverageData,
    FaultMatrix,
    FormatError,
    PrioritizedOrder,
    parse_adjacency_list,
    parse_adjacency_matrix,
    parse_faults,
)
from tcp_aga.metrics import ApfdResult, apfd, speedup
from tcp_aga.prioritizers import aga, aga_c, ga_first, ga_naive, greedy_total, iteration_stats

__all__ = [
    "ApfdResult",
    "CoverageData",
    "FaultMatrix",
    "FormatError",
    "PrioritizedOrder",
    "aga",
    "aga_c",
    "apfd",
    "ga_first",
    "ga_naive",
    "greedy_total",
    "iteration_stats",
    "parse_adjacency_list",
    "parse_adjacency_matrix",
    "parse_faults",
    "speedup",
]

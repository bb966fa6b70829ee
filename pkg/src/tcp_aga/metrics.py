"""Effectiveness (APFD) and efficiency (speedup) measures."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from tcp_aga.coverage import FaultMatrix, PrioritizedOrder


@dataclass(frozen=True)
class ApfdResult:
    value: float
    first_detect_positions: tuple[int, ...]  # 1-based, one per fault


def apfd(order: PrioritizedOrder | Sequence[int], faults: FaultMatrix) -> ApfdResult:
    """Average Percentage of Faults Detected for ``order``.

    ``1 - sum(TF) / (num_tests * num_faults) + 1 / (2 * num_tests)`` where
    ``TF[i]`` is the 1-based position of the first test detecting fault ``i``.
    Every fault must be detected by some test in the order.
    """
    seq = order.order if isinstance(order, PrioritizedOrder) else tuple(order)
    n = faults.num_tests
    if len(seq) != n:
        raise ValueError(f"order has {len(seq)} tests, fault matrix expects {n}")
    position = {}
    for pos, test in enumerate(seq, 1):
        if test in position or not 0 <= test < n:
            raise ValueError("order is not a permutation of the fault matrix's tests")
        position[test] = pos
    if faults.num_faults == 0:
        raise ValueError("APFD is undefined without faults")
    first = []
    for i, tests in enumerate(faults.detecting_tests):
        try:
            first.append(min(position[t] for t in tests))
        except (KeyError, ValueError):
            raise ValueError(f"fault {i} is not detected by any test in the order") from None
    total = 0
    for tf in first:
        total += tf
    # same value over the common denominator 2nf: exact integers, one rounding
    f = faults.num_faults
    value = (2 * n * f - 2 * total + f) / (2 * n * f)
    return ApfdResult(value, tuple(first))


def speedup(baseline_seconds: float, accelerated_seconds: float) -> float:
    if baseline_seconds <= 0 or accelerated_seconds <= 0:
        raise ValueError("durations must be strictly positive")
    return baseline_seconds / accelerated_seconds

"""Synthetic coverage generation and single-threaded timing of prioritizers."""

from __future__ import annotations

import hashlib
import json
import statistics
import time
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from tcp_aga.coverage import CoverageData, FaultMatrix, PrioritizedOrder
from tcp_aga.metrics import apfd
from tcp_aga.prioritizers import ALGORITHMS, DEFAULT_MAX_ITERATIONS, aga, aga_c, prioritize

SHAPES = ("uniform", "layered")


@dataclass(frozen=True)
class GenSpec:
    """Parameters of a synthetic coverage instance.

    ``layered`` splits a random core of elements into ``num_tests // target_k``
    disjoint blocks and gives every block ``target_k`` covering tests (one per
    layer). Greedy Additional then places one test per block in each iteration,
    so its natural iteration count lands near ``target_k``. Density beyond what
    the blocks provide is filled with uniform noise, which pushes the count up
    once it outweighs the block structure.
    """

    num_tests: int
    num_elements: int
    density: float = 0.05
    shape: str = "uniform"
    target_k: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.num_tests < 0 or self.num_elements < 0:
            raise ValueError("counts must be non-negative")
        if not 0 < self.density <= 1:
            raise ValueError(f"density must be in (0, 1], got {self.density}")
        if self.shape not in SHAPES:
            raise ValueError(f"shape must be one of {SHAPES}, got {self.shape!r}")
        if self.shape == "layered" and self.target_k < 1:
            raise ValueError("layered instances need target_k >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def generate(spec: GenSpec) -> CoverageData:
    rng = np.random.default_rng(spec.seed)
    m, n = spec.num_tests, spec.num_elements
    matrix = np.zeros((m, n), dtype=bool)
    noise = spec.density
    if spec.shape == "layered" and m and n:
        k = min(spec.target_k, m)
        per_layer = m // k
        core_size = min(n, max(per_layer, round(spec.density * m * n / k)))
        core = rng.choice(n, size=core_size, replace=False)
        blocks = np.array_split(rng.permutation(core), per_layer)
        tests = rng.permutation(m)
        for slot, test in enumerate(tests[: k * per_layer]):
            matrix[test, blocks[slot % per_layer]] = True
        for test in tests[k * per_layer:]:
            matrix[test, rng.choice(core, size=blocks[-1].size, replace=False)] = True
        noise = max(0.0, spec.density - np.count_nonzero(matrix) / (m * n))
    if noise > 0:
        for i in range(m):
            matrix[i] |= rng.random(n) < noise
    return CoverageData.from_matrix(matrix)


def synthetic_faults(cov: CoverageData, num_faults: int, seed: int = 0) -> FaultMatrix:
    """Seed each fault in one random coverable element; its covering tests detect it."""
    rng = np.random.default_rng(seed)
    coverable = np.unique(cov.indices)
    if num_faults and coverable.size == 0:
        raise ValueError("no coverable element to place a fault in")
    owner = np.repeat(np.arange(cov.num_tests), cov.counts())
    faults = []
    for element in rng.choice(coverable, size=num_faults):
        faults.append(tuple(owner[cov.indices == element].tolist()))
    return FaultMatrix(cov.num_tests, tuple(faults))


def order_digest(order: Sequence[int]) -> str:
    """64-bit BLAKE2b digest of the permutation, as 16 hex digits."""
    data = np.asarray(order, dtype="<i8").tobytes()
    return hashlib.blake2b(data, digest_size=8).hexdigest()


@dataclass(frozen=True)
class BenchReport:
    algorithm: str
    rep: int
    parse_seconds: float
    prioritize_seconds: float
    iteration_count: int
    tc_update_count: int
    order_digest: str

    def to_json(self) -> str:
        return json.dumps({
            "algorithm": self.algorithm,
            "rep": self.rep,
            "parse_s": self.parse_seconds,
            "prioritize_s": self.prioritize_seconds,
            "iterations": self.iteration_count,
            "tc_updates": self.tc_update_count,
            "order_digest": self.order_digest,
        })


def check_update_bound(result: PrioritizedOrder, cov: CoverageData) -> None:
    bound = result.num_iterations * cov.num_entries
    if result.tc_update_count > bound:
        raise AssertionError(
            f"{result.tc_update_count} gain updates exceed k * entries = {bound}"
        )


def run_bench(cov: CoverageData, algorithms: Iterable[str], repetitions: int = 1,
              max_iterations: int = DEFAULT_MAX_ITERATIONS,
              parse_seconds: float = 0.0) -> list[BenchReport]:
    """Time each algorithm ``repetitions`` times, strictly sequentially.

    The timed region covers the whole prioritization call, including index
    construction for the accelerated variants.
    """
    algorithms = list(algorithms)
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    if unknown:
        raise KeyError(f"unknown algorithm(s): {', '.join(unknown)}")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    reports = []
    for name in algorithms:
        for rep in range(repetitions):
            start = time.perf_counter()
            result = prioritize(cov, name, max_iterations)
            elapsed = time.perf_counter() - start
            check_update_bound(result, cov)
            reports.append(BenchReport(
                algorithm=name,
                rep=rep,
                parse_seconds=parse_seconds,
                prioritize_seconds=elapsed,
                iteration_count=result.num_iterations,
                tc_update_count=result.tc_update_count,
                order_digest=order_digest(result.order),
            ))
    return reports


def median_seconds(reports: Iterable[BenchReport], algorithm: str) -> float:
    return statistics.median(r.prioritize_seconds for r in reports if r.algorithm == algorithm)


@dataclass(frozen=True)
class SweepRow:
    iteration: int
    time_s: float
    apfd: float | None
    order: tuple[int, ...]


def iteration_sweep(cov: CoverageData, faults: FaultMatrix | None = None) -> list[SweepRow]:
    """Run the capped prioritizer for every cap from 1 up to the natural
    iteration count, recording time and (with ``faults``) APFD."""
    natural = max(aga_c(cov).num_iterations, 1)
    rows = []
    for cap in range(1, natural + 1):
        start = time.perf_counter()
        result = aga(cov, cap)
        elapsed = time.perf_counter() - start
        score = apfd(result, faults).value if faults is not None else None
        rows.append(SweepRow(cap, elapsed, score, result.order))
    return rows


def sweep_csv(rows: Iterable[SweepRow]) -> str:
    lines = ["iteration,time_s,apfd"]
    for row in rows:
        score = "" if row.apfd is None else f"{row.apfd:.6f}"
        lines.append(f"{row.iteration},{row.time_s:.6f},{score}")
    return "\n".join(lines) + "\n"


def apfd_range(rows: Sequence[SweepRow]) -> float:
    """Highest minus lowest APFD across the sweep."""
    values = [r.apfd for r in rows if r.apfd is not None]
    return max(values) - min(values) if values else 0.0

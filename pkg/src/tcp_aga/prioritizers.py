"""Coverage-based test prioritizers: Greedy Total, Greedy Additional and its
accelerated, index-based form.

All prioritizers break ties toward the lowest test index. Tests that cover no
element at all can never win an additional-coverage selection; they are
appended last in index order and never start an iteration of their own.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from tcp_aga.coverage import CoverageData, PrioritizedOrder

DEFAULT_MAX_ITERATIONS = 10


def _gt_sorted(tests: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Order ``tests`` by descending total coverage, ascending index on ties."""
    tests = np.sort(np.asarray(tests, dtype=np.int64))
    return tests[np.argsort(-counts[tests], kind="stable")]


def _gather_rows(indptr: np.ndarray, indices: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Concatenate ``indices[indptr[r]:indptr[r+1]]`` for every r in ``rows``."""
    starts = indptr[rows]
    lengths = indptr[rows + 1] - starts
    total = int(lengths.sum())
    if total == 0:
        return indices[:0]
    shift = np.repeat(starts - (np.cumsum(lengths) - lengths), lengths)
    return indices[np.arange(total) + shift]


def greedy_total(cov: CoverageData) -> PrioritizedOrder:
    order = _gt_sorted(np.arange(cov.num_tests), cov.counts())
    return PrioritizedOrder(order, (0,) if cov.num_tests else ())


# --------------------------------------------------------------------------
# naive Greedy Additional

def _additional_scan(cov: CoverageData, max_iterations: int | None):
    """Plain Greedy Additional: every selection recomputes each test's gain by
    rescanning the whole coverage relation.

    Returns (order, boundaries) for the tests placed by the additional
    strategy; stops before starting iteration ``max_iterations + 1``.
    """
    m = cov.num_tests
    indptr, indices = cov.indptr, cov.indices
    eligible = cov.counts() > 0
    selected = np.zeros(m, dtype=bool)
    uncovered = np.ones(cov.num_elements, dtype=np.int64)
    order: list[int] = []
    boundaries: list[int] = []
    left = int(eligible.sum())
    prefix = np.zeros(indices.size + 1, dtype=np.int64)
    new_iteration = True
    while left:
        np.cumsum(uncovered[indices], out=prefix[1:])
        gain = prefix[indptr[1:]] - prefix[indptr[:-1]]
        gain[selected | ~eligible] = -1
        t = int(gain.argmax())
        if gain[t] == 0:
            if max_iterations is not None and len(boundaries) >= max_iterations:
                break
            uncovered[:] = 1
            new_iteration = True
            continue
        if new_iteration:
            boundaries.append(len(order))
            new_iteration = False
        order.append(t)
        selected[t] = True
        left -= 1
        uncovered[cov.row(t)] = 0
    return order, boundaries


def ga_naive(cov: CoverageData) -> PrioritizedOrder:
    """Full iterated Greedy Additional, O(m^2 n); the correctness oracle."""
    order, boundaries = _additional_scan(cov, None)
    rest = np.setdiff1d(np.arange(cov.num_tests), order)
    return PrioritizedOrder(order + rest.tolist(), boundaries)


def ga_first(cov: CoverageData) -> PrioritizedOrder:
    """One additional-coverage iteration, then Greedy Total for the rest."""
    order, boundaries = _additional_scan(cov, 1)
    rest = _gt_sorted(np.setdiff1d(np.arange(cov.num_tests), order), cov.counts())
    return PrioritizedOrder(order + rest.tolist(), boundaries, tail_start=len(order))


# --------------------------------------------------------------------------
# accelerated Greedy Additional

@dataclass
class AccelIndex:
    """Mutable selection state for the accelerated prioritizer.

    ``gain[i]`` is the number of still-uncovered elements test ``i`` covers;
    ``forward`` lists the elements of each test and ``inverted`` the tests of
    each element, both in CSR form.
    """

    gain: np.ndarray
    original_gain: np.ndarray
    selected: np.ndarray
    covered: np.ndarray
    fwd_ptr: np.ndarray
    fwd_idx: np.ndarray
    inv_ptr: np.ndarray
    inv_idx: np.ndarray
    uncovered_remaining: int
    updates: int = 0

    @classmethod
    def build(cls, cov: CoverageData) -> AccelIndex:
        counts = cov.counts().astype(np.int64)
        fwd_ptr = np.asarray(cov.indptr)
        fwd_idx = np.asarray(cov.indices)
        # transpose: stable sort by element keeps tests ascending within each element
        owner = np.repeat(np.arange(cov.num_tests, dtype=np.int64), counts)
        perm = np.argsort(fwd_idx, kind="stable")
        inv_idx = owner[perm]
        inv_ptr = np.zeros(cov.num_elements + 1, dtype=np.int64)
        np.cumsum(np.bincount(fwd_idx, minlength=cov.num_elements), out=inv_ptr[1:])
        coverable = int(np.count_nonzero(np.diff(inv_ptr)))
        return cls(
            gain=counts.copy(),
            original_gain=counts,
            selected=np.zeros(cov.num_tests, dtype=bool),
            covered=np.zeros(cov.num_elements, dtype=bool),
            fwd_ptr=fwd_ptr,
            fwd_idx=fwd_idx,
            inv_ptr=inv_ptr,
            inv_idx=inv_idx,
            uncovered_remaining=coverable,
        )

    @property
    def num_tests(self) -> int:
        return self.gain.size

    def forward(self, test: int) -> np.ndarray:
        return self.fwd_idx[self.fwd_ptr[test]:self.fwd_ptr[test + 1]]

    def inverted(self, element: int) -> np.ndarray:
        return self.inv_idx[self.inv_ptr[element]:self.inv_ptr[element + 1]]

    def best(self) -> tuple[int, int]:
        """(test, gain) of the best unselected test; (-1, 0) if none is left.

        Tests that cover nothing are never candidates.
        """
        masked = np.where(self.selected | (self.original_gain == 0), -1, self.gain)
        if masked.size == 0:
            return -1, 0
        t = int(masked.argmax())
        return (t, int(masked[t])) if masked[t] >= 0 else (-1, 0)

    def select(self, test: int) -> None:
        self.selected[test] = True
        elems = self.forward(test)
        fresh = elems[~self.covered[elems]]
        self.covered[fresh] = True
        self.uncovered_remaining -= fresh.size
        hits = _gather_rows(self.inv_ptr, self.inv_idx, fresh)
        self.gain -= np.bincount(hits, minlength=self.num_tests)
        self.updates += hits.size

    def reset(self) -> None:
        self.gain[:] = self.original_gain
        self.covered[:] = False
        self.uncovered_remaining = int(np.count_nonzero(np.diff(self.inv_ptr)))

    def recomputed_gain(self) -> np.ndarray:
        """Gains rebuilt from scratch; used to check the maintained counts."""
        return np.array(
            [int(np.count_nonzero(~self.covered[self.forward(i)])) for i in range(self.num_tests)],
            dtype=np.int64,
        )


SelectHook = Callable[[int, AccelIndex], None]


def _accelerated(cov: CoverageData, max_iterations: int | None, on_select: SelectHook | None):
    index = AccelIndex.build(cov)
    order: list[int] = []
    boundaries: list[int] = []
    capped = False
    while True:
        t, gain = index.best()
        if t < 0:
            break
        if gain == 0:
            if max_iterations is not None and len(boundaries) >= max_iterations:
                capped = True
                break
            index.reset()
            boundaries.append(len(order))
            continue
        if not boundaries:
            boundaries.append(0)
        order.append(t)
        index.select(t)
        if on_select is not None:
            on_select(t, index)
    rest = np.flatnonzero(~index.selected)
    if capped:
        tail = _gt_sorted(rest, index.original_gain)
    else:
        tail = rest  # only zero-coverage tests remain
    return PrioritizedOrder(
        order + tail.tolist(),
        boundaries,
        tc_update_count=index.updates,
        tail_start=len(order) if capped else None,
    )


def aga_c(cov: CoverageData, on_select: SelectHook | None = None) -> PrioritizedOrder:
    """Greedy Additional driven by maintained gain counts and forward/inverted
    indices; output identical to :func:`ga_naive`.

    ``on_select(test, index)`` runs after each selection has been applied.
    """
    return _accelerated(cov, None, on_select)


def aga(cov: CoverageData, max_iterations: int = DEFAULT_MAX_ITERATIONS,
        on_select: SelectHook | None = None) -> PrioritizedOrder:
    """Accelerated Greedy Additional capped at ``max_iterations`` iterations;
    leftover tests follow in Greedy Total order."""
    if max_iterations < 1:
        raise ValueError(f"max_iterations must be >= 1, got {max_iterations}")
    return _accelerated(cov, max_iterations, on_select)


def iteration_stats(order: PrioritizedOrder, cov: CoverageData) -> tuple[int, float]:
    """(k, l): iteration count and mean number of tests placed per iteration."""
    if not order.is_permutation(cov.num_tests):
        raise ValueError("order is not a permutation of the coverage's tests")
    k = order.num_iterations
    useful = int(np.count_nonzero(cov.counts()))
    if k == 0:
        if useful:
            raise ValueError("order records no iterations but the suite has coverage")
        return 0, 0.0
    return k, useful / k


ALGORITHMS: dict[str, Callable[..., PrioritizedOrder]] = {
    "gt": greedy_total,
    "ga-first": ga_first,
    "ga": ga_naive,
    "aga-c": aga_c,
    "aga": aga,
}


def prioritize(cov: CoverageData, algorithm: str,
               max_iterations: int = DEFAULT_MAX_ITERATIONS) -> PrioritizedOrder:
    if algorithm not in ALGORITHMS:
        raise KeyError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
    if algorithm == "aga":
        return aga(cov, max_iterations)
    return ALGORITHMS[algorithm](cov)

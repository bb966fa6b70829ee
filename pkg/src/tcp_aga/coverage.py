"""Coverage, fault and ordering data model plus the on-disk text formats.

Two coverage renderings are supported and carry identical information:

``.covlist``  header ``"m n"`` then one line per test listing the 0-based
              element indices it covers (blank line = covers nothing).
``.covmat``   header ``"m n"`` then one ``0``/``1`` row of width ``n`` per test.

Faults use ``.faults``: header ``"m f"`` then one non-empty line per fault
listing the 0-based indices of the tests that detect it.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

_HEADER = re.compile(r"(\d+) (\d+)")
_INDEX = re.compile(r"\d+")


class FormatError(ValueError):
    """Malformed coverage, fault or order text.

    ``line`` is the 1-based line number of the offending line, when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class CoverageData:
    """Which program elements each test covers, stored as a CSR adjacency list.

    Test ``i`` covers ``indices[indptr[i]:indptr[i + 1]]`` (strictly increasing).
    Build instances with :meth:`from_lists` unless the arrays are already
    canonical.
    """

    num_tests: int
    num_elements: int
    indptr: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        if self.num_tests < 0 or self.num_elements < 0:
            raise ValueError("counts must be non-negative")
        indptr = np.asarray(self.indptr, dtype=np.int64)
        indices = np.asarray(self.indices, dtype=np.int64)
        if indptr.shape != (self.num_tests + 1,) or indptr[0] != 0:
            raise ValueError("indptr must have num_tests + 1 entries starting at 0")
        if indptr[-1] != indices.size or np.any(np.diff(indptr) < 0):
            raise ValueError("indptr is not a valid row pointer for indices")
        if indices.size:
            if indices.min() < 0 or indices.max() >= self.num_elements:
                raise ValueError("element index out of range")
            owner = np.repeat(np.arange(self.num_tests), np.diff(indptr))
            same_test = owner[1:] == owner[:-1]
            if np.any(np.diff(indices)[same_test] <= 0):
                raise ValueError("element indices must be strictly increasing per test")
        object.__setattr__(self, "indptr", _frozen(indptr.copy()))
        object.__setattr__(self, "indices", _frozen(indices.copy()))

    @classmethod
    def from_lists(cls, covered: Sequence[Iterable[int]], num_elements: int) -> CoverageData:
        """Canonicalize (sort, deduplicate) per-test element lists."""
        rows = [np.unique(np.asarray(list(r), dtype=np.int64)) for r in covered]
        lengths = np.fromiter((r.size for r in rows), dtype=np.int64, count=len(rows))
        indptr = np.zeros(len(rows) + 1, dtype=np.int64)
        np.cumsum(lengths, out=indptr[1:])
        indices = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
        return cls(len(rows), num_elements, indptr, indices)

    @classmethod
    def from_matrix(cls, matrix) -> CoverageData:
        matrix = np.asarray(matrix, dtype=bool)
        if matrix.ndim != 2:
            raise ValueError("coverage matrix must be 2-D")
        rows, cols = np.nonzero(matrix)
        indptr = np.zeros(matrix.shape[0] + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=matrix.shape[0]), out=indptr[1:])
        return cls(matrix.shape[0], matrix.shape[1], indptr, cols)

    @property
    def covered(self) -> list[tuple[int, ...]]:
        return [tuple(self.row(i).tolist()) for i in range(self.num_tests)]

    @property
    def num_entries(self) -> int:
        """Total (test, element) coverage pairs, i.e. matrix nonzeros."""
        return int(self.indices.size)

    def row(self, test: int) -> np.ndarray:
        return self.indices[self.indptr[test]:self.indptr[test + 1]]

    def counts(self) -> np.ndarray:
        """Number of elements covered by each test."""
        return np.diff(self.indptr)

    def to_matrix(self) -> np.ndarray:
        matrix = np.zeros((self.num_tests, self.num_elements), dtype=bool)
        rows = np.repeat(np.arange(self.num_tests), self.counts())
        matrix[rows, self.indices] = True
        return matrix

    def __eq__(self, other):
        if not isinstance(other, CoverageData):
            return NotImplemented
        return (
            self.num_tests == other.num_tests
            and self.num_elements == other.num_elements
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"CoverageData(num_tests={self.num_tests}, num_elements={self.num_elements}, "
            f"entries={self.num_entries})"
        )


@dataclass(frozen=True)
class FaultMatrix:
    num_tests: int
    detecting_tests: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        canon = []
        for i, tests in enumerate(self.detecting_tests):
            tests = tuple(sorted(set(int(t) for t in tests)))
            if not tests:
                raise ValueError(f"fault {i} has no detecting test")
            if tests[0] < 0 or tests[-1] >= self.num_tests:
                raise ValueError(f"fault {i} references a test outside [0, {self.num_tests})")
            canon.append(tests)
        object.__setattr__(self, "detecting_tests", tuple(canon))

    @property
    def num_faults(self) -> int:
        return len(self.detecting_tests)


@dataclass(frozen=True)
class PrioritizedOrder:
    """A test permutation plus the bookkeeping of how it was produced.

    ``iteration_boundaries`` holds the position in ``order`` where each
    additional-coverage iteration started. ``tail_start`` is the position
    where a Greedy Total tail begins (``None`` if there is none).
    """

    order: tuple[int, ...]
    iteration_boundaries: tuple[int, ...] = ()
    tc_update_count: int = 0
    tail_start: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(int(t) for t in self.order))
        object.__setattr__(self, "iteration_boundaries", tuple(int(b) for b in self.iteration_boundaries))
        b = self.iteration_boundaries
        if b and (b[0] != 0 or any(x >= y for x, y in zip(b, b[1:]))):
            raise ValueError("iteration boundaries must start at 0 and strictly increase")

    @property
    def num_iterations(self) -> int:
        return len(self.iteration_boundaries)

    def is_permutation(self, num_tests: int) -> bool:
        return len(self.order) == num_tests and sorted(self.order) == list(range(num_tests))


# --------------------------------------------------------------------------
# parsing

def _text(data: str | bytes) -> str:
    if isinstance(data, (bytes, bytearray, memoryview)):
        try:
            return bytes(data).decode("ascii")
        except UnicodeDecodeError as exc:
            raise FormatError(f"non-ASCII byte at offset {exc.start}") from None
    return data


def _split(data: str | bytes, what: str) -> tuple[int, int, list[str]]:
    text = _text(data)
    lines = text.split("\n")
    if text.endswith("\n"):
        lines.pop()
    if not lines or not lines[0]:
        raise FormatError(f"missing '{what}' header", 1)
    match = _HEADER.fullmatch(lines[0])
    if match is None:
        raise FormatError(f"malformed header {lines[0]!r}, expected '{what}'", 1)
    return int(match[1]), int(match[2]), lines[1:]


def _indices(line: str, lineno: int, bound: int, kind: str) -> list[int]:
    out = []
    for token in line.split():
        if not _INDEX.fullmatch(token):
            raise FormatError(f"token {token!r} is not a non-negative integer", lineno)
        value = int(token)
        if value >= bound:
            raise FormatError(f"{kind} index {value} out of range [0, {bound})", lineno)
        out.append(value)
    return out


def parse_adjacency_list(data: str | bytes) -> CoverageData:
    m, n, body = _split(data, "m n")
    if len(body) != m:
        raise FormatError(f"expected {m} test lines, found {len(body)}", min(len(body), m) + 2)
    rows = [_indices(line, i + 2, n, "element") for i, line in enumerate(body)]
    return CoverageData.from_lists(rows, n)


def parse_adjacency_matrix(data: str | bytes) -> CoverageData:
    m, n, body = _split(data, "m n")
    if len(body) != m:
        raise FormatError(f"expected {m} matrix rows, found {len(body)}", min(len(body), m) + 2)
    matrix = np.zeros((m, n), dtype=bool)
    for i, line in enumerate(body):
        if len(line) != n:
            raise FormatError(f"row has {len(line)} columns, expected {n}", i + 2)
        if line.strip("01"):
            ch = next(c for c in line if c not in "01")
            raise FormatError(f"invalid character {ch!r} (only '0'/'1' allowed)", i + 2)
        matrix[i] = np.frombuffer(line.encode("ascii"), dtype=np.uint8) == ord("1")
    return CoverageData.from_matrix(matrix)


def parse_faults(data: str | bytes, num_tests: int | None = None) -> FaultMatrix:
    m, f, body = _split(data, "m f")
    if num_tests is not None and m != num_tests:
        raise FormatError(f"fault file declares {m} tests but coverage has {num_tests}", 1)
    if len(body) != f:
        raise FormatError(f"expected {f} fault lines, found {len(body)}", min(len(body), f) + 2)
    faults = []
    for i, line in enumerate(body):
        tests = _indices(line, i + 2, m, "test")
        if not tests:
            raise FormatError(f"fault {i} has no detecting test", i + 2)
        faults.append(tests)
    return FaultMatrix(m, tuple(tuple(t) for t in faults))


def parse_order(data: str | bytes, num_tests: int | None = None, one_based: bool = False) -> tuple[int, ...]:
    """Read an order file (one test index per line) and check it is a permutation."""
    text = _text(data)
    lines = text.split("\n")
    if text.endswith("\n"):
        lines.pop()
    if text == "":
        lines = []
    offset = 1 if one_based else 0
    order: list[int] = []
    seen: set[int] = set()
    for lineno, line in enumerate(lines, 1):
        if not _INDEX.fullmatch(line.strip()):
            raise FormatError(f"expected a test index, got {line!r}", lineno)
        value = int(line) - offset
        if value < 0 or (num_tests is not None and value >= num_tests):
            raise FormatError(f"test index {line.strip()} out of range", lineno)
        if value in seen:
            raise FormatError(f"duplicate test index {line.strip()}", lineno)
        seen.add(value)
        order.append(value)
    if num_tests is not None and len(order) != num_tests:
        raise FormatError(f"order lists {len(order)} tests, expected {num_tests}")
    if len(order) != len(seen) or (order and max(order) != len(order) - 1):
        raise FormatError("order is not a permutation of 0..m-1")
    return tuple(order)


# --------------------------------------------------------------------------
# serialization

def to_adjacency_list(cov: CoverageData) -> str:
    lines = [f"{cov.num_tests} {cov.num_elements}"]
    lines.extend(" ".join(map(str, cov.row(i).tolist())) for i in range(cov.num_tests))
    return "\n".join(lines) + "\n"


def to_adjacency_matrix(cov: CoverageData) -> str:
    lines = [f"{cov.num_tests} {cov.num_elements}"]
    matrix = cov.to_matrix()
    table = np.array([ord("0"), ord("1")], dtype=np.uint8)
    lines.extend(table[row.astype(np.uint8)].tobytes().decode("ascii") for row in matrix)
    return "\n".join(lines) + "\n"


def to_faults(faults: FaultMatrix) -> str:
    lines = [f"{faults.num_tests} {faults.num_faults}"]
    lines.extend(" ".join(map(str, tests)) for tests in faults.detecting_tests)
    return "\n".join(lines) + "\n"


def format_order(order: Sequence[int], one_based: bool = False) -> str:
    offset = 1 if one_based else 0
    return "".join(f"{t + offset}\n" for t in order)


def matrix_list_roundtrip(cov: CoverageData) -> CoverageData:
    """matrix text -> parse -> list text -> parse; equals ``cov`` for valid input."""
    via_matrix = parse_adjacency_matrix(to_adjacency_matrix(cov))
    return parse_adjacency_list(to_adjacency_list(via_matrix))


FORMATS = {"list": parse_adjacency_list, "matrix": parse_adjacency_matrix}
EXTENSIONS = {".covlist": "list", ".covmat": "matrix"}


def detect_format(path: str | Path) -> str:
    suffix = Path(path).suffix
    if suffix not in EXTENSIONS:
        raise ValueError(f"cannot infer coverage format from extension {suffix!r}; pass --format")
    return EXTENSIONS[suffix]


def load_coverage(path: str | Path, fmt: str = "auto") -> CoverageData:
    if fmt == "auto":
        fmt = detect_format(path)
    return FORMATS[fmt](Path(path).read_bytes())

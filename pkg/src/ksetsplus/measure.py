"""Sparse symmetric measures, datasets, and partitions.

A measure is a symmetric bivariate function gamma(.,.) over n points,
stored as one adjacency list per point. Only nonzero values are stored,
every off-diagonal entry is mirrored, and ``m`` counts stored entries,
so an off-diagonal pair contributes 2 to m and a diagonal entry 1. The
neighborhood of point i is exactly the points with a stored entry in
row i, which is what makes m the cost parameter of the fast engine.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ArityMismatch,
    AsymmetricDuplicate,
    DuplicateEntry,
    EmptySetInPartition,
    IndexOutOfRange,
    NonSquareInput,
    NotADistance,
)

KINDS = ("similarity", "distance", "cohesion")


@dataclass(frozen=True)
class DataSet:
    """Point count plus optional external labels (one per point)."""

    n: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ArityMismatch("a dataset needs at least one point")
        if self.labels is not None:
            if len(self.labels) != self.n:
                raise ArityMismatch(
                    f"{len(self.labels)} labels for {self.n} points"
                )
            if len(set(self.labels)) != self.n:
                raise ArityMismatch("labels must be unique")

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)


class SparseSymmetricMeasure:
    """Symmetric n-by-n measure in adjacency-list form.

    Attributes:
        n: point count.
        kind: one of "similarity", "distance", "cohesion".
        rows: per-point list of (neighbor, value) pairs, sorted by
            neighbor index. Treat as read-only.
        diag: per-point diagonal value gamma(i, i) (0.0 when unstored).
        m: total number of stored entries, sum of len(rows[i]).

    Instances are immutable by convention after construction and safe to
    share across threads.
    """

    __slots__ = ("n", "kind", "rows", "diag", "m")

    def __init__(self, n: int, kind: str, rows: list[list[tuple[int, float]]]):
        if n < 1:
            raise ArityMismatch("a measure needs at least one point")
        if kind not in KINDS:
            raise ValueError(f"unknown measure kind {kind!r}")
        if len(rows) != n:
            raise ArityMismatch(f"{len(rows)} rows for n={n}")
        self.n = n
        self.kind = kind
        self.rows = rows
        self.diag = [0.0] * n
        m = 0
        for i, row in enumerate(rows):
            m += len(row)
            for j, v in row:
                if j == i:
                    self.diag[i] = v
        self.m = m
        if kind == "distance":
            self._check_distance_storage()

    def _check_distance_storage(self):
        for i, row in enumerate(self.rows):
            for j, v in row:
                if j == i:
                    raise NotADistance(f"distance has a self-entry at point {i}")
                if v < 0.0:
                    raise NotADistance(f"negative distance {v} at ({i}, {j})")

    def value(self, i: int, j: int) -> float:
        """gamma(i, j); 0.0 for pairs with no stored entry."""
        _check_index(i, self.n)
        _check_index(j, self.n)
        row = self.rows[i]
        pos = bisect_left(row, j, key=lambda e: e[0])
        if pos < len(row) and row[pos][0] == j:
            return row[pos][1]
        return 0.0

    def neighbors(self, i: int) -> list[tuple[int, float]]:
        _check_index(i, self.n)
        return self.rows[i]

    def row_sums(self) -> np.ndarray:
        out = np.zeros(self.n)
        for i, row in enumerate(self.rows):
            out[i] = sum(v for _, v in row)
        return out

    def total(self) -> float:
        """gamma(Omega, Omega), the sum of all entries."""
        return float(self.row_sums().sum())

    def max_abs(self) -> float:
        best = 0.0
        for row in self.rows:
            for _, v in row:
                a = abs(v)
                if a > best:
                    best = a
        return best

    def to_dense(self) -> np.ndarray:
        """Dense n-by-n copy; verification-scale inputs only."""
        out = np.zeros((self.n, self.n))
        for i, row in enumerate(self.rows):
            for j, v in row:
                out[i, j] = v
        return out

    def with_kind(self, kind: str) -> "SparseSymmetricMeasure":
        """Same storage reinterpreted under another kind tag."""
        return SparseSymmetricMeasure(self.n, kind, self.rows)

    def check_symmetry(self):
        """Full-scan assertion that every entry is mirrored exactly."""
        for i, row in enumerate(self.rows):
            for j, v in row:
                if self.value(j, i) != v:
                    raise AsymmetricDuplicate(
                        f"entry ({i}, {j}) = {v} is not mirrored"
                    )

    def recount_m(self) -> int:
        return sum(len(row) for row in self.rows)

    def __repr__(self):
        return (
            f"SparseSymmetricMeasure(n={self.n}, kind={self.kind!r}, m={self.m})"
        )


def _check_index(i: int, n: int):
    if not 0 <= i < n:
        raise IndexOutOfRange(f"point index {i} outside [0, {n})")


def build_from_triples(
    n: int, triples, kind: str = "similarity"
) -> SparseSymmetricMeasure:
    """Build a measure from (i, j, value) triples.

    Each unordered pair may be given once per orientation; if both
    orientations appear their values must agree. Exact zeros are dropped
    from storage.
    """
    seen: dict[tuple[int, int], dict[tuple[int, int], float]] = {}
    for i, j, v in triples:
        _check_index(i, n)
        _check_index(j, n)
        key = (i, j) if i <= j else (j, i)
        orientations = seen.setdefault(key, {})
        if (i, j) in orientations:
            raise DuplicateEntry(f"pair ({i}, {j}) given twice")
        v = float(v)
        for other in orientations.values():
            if other != v:
                raise AsymmetricDuplicate(
                    f"pair {key} given with values {other} and {v}"
                )
        orientations[(i, j)] = v
    rows: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for (a, b), orientations in seen.items():
        v = next(iter(orientations.values()))
        if v == 0.0:
            continue
        rows[a].append((b, v))
        if b != a:
            rows[b].append((a, v))
    for row in rows:
        row.sort()
    return SparseSymmetricMeasure(n, kind, rows)


def from_dense(matrix, kind: str = "similarity") -> SparseSymmetricMeasure:
    """Build a measure from an already-symmetric dense matrix.

    Zeros are dropped from storage. Raises AsymmetricDuplicate if the
    matrix is not exactly symmetric (use :func:`symmetrize` to average
    an asymmetric one).
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquareInput(f"expected a square matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise AsymmetricDuplicate("dense input is not symmetric")
    return _from_dense_unchecked(a, kind)


def _from_dense_unchecked(a: np.ndarray, kind: str) -> SparseSymmetricMeasure:
    n = a.shape[0]
    rows: list[list[tuple[int, float]]] = []
    for i in range(n):
        nz = np.nonzero(a[i])[0]
        rows.append([(int(j), float(a[i, j])) for j in nz])
    return SparseSymmetricMeasure(n, kind, rows)


def symmetrize(raw, kind: str = "similarity") -> SparseSymmetricMeasure:
    """Average a raw square matrix with its transpose and sparsify.

    The output value at (i, j) is (raw[i][j] + raw[j][i]) / 2, which
    is how an asymmetric latency matrix is turned into a semi-metric.
    """
    a = np.asarray(raw, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquareInput(f"expected a square matrix, got shape {a.shape}")
    return _from_dense_unchecked((a + a.T) / 2.0, kind)


def measure_of_sets(g: SparseSymmetricMeasure, s1, s2) -> float:
    """Double sum of gamma(x, y) over x in s1, y in s2.

    Exact reference path for verifiers and oracles; the fast engine
    never calls this.
    """
    set1 = set(s1)
    set2 = set(s2)
    for i in set1 | set2:
        _check_index(i, g.n)
    if not set1 or not set2:
        return 0.0
    # Iterate the smaller side's adjacency rows, filter by the other.
    if len(set1) > len(set2):
        set1, set2 = set2, set1
    total = 0.0
    for i in set1:
        for j, v in g.rows[i]:
            if j in set2:
                total += v
    return total


@dataclass
class Partition:
    """Assignment of n points to k nonempty disjoint sets.

    assign maps point index to set index in [0, k); sizes is kept
    consistent with assign and every set is nonempty.
    """

    assign: list[int]
    k: int
    sizes: list[int] = field(default_factory=list)

    @classmethod
    def from_assign(cls, assign, k: int | None = None) -> "Partition":
        assign = [int(a) for a in assign]
        if not assign:
            raise EmptySetInPartition("empty assignment")
        if k is None:
            k = max(assign) + 1
        sizes = [0] * k
        for a in assign:
            if not 0 <= a < k:
                raise IndexOutOfRange(f"set index {a} outside [0, {k})")
            sizes[a] += 1
        part = cls(assign, k, sizes)
        part.validate()
        return part

    @classmethod
    def from_sets(cls, sets, n: int | None = None) -> "Partition":
        sets = [list(s) for s in sets]
        if n is None:
            n = sum(len(s) for s in sets)
        assign = [-1] * n
        for idx, s in enumerate(sets):
            for p in s:
                _check_index(p, n)
                if assign[p] != -1:
                    raise DuplicateEntry(f"point {p} assigned twice")
                assign[p] = idx
        if any(a == -1 for a in assign):
            missing = assign.index(-1)
            raise ArityMismatch(f"point {missing} not covered by any set")
        return cls.from_assign(assign, k=len(sets))

    def validate(self):
        if len(self.sizes) != self.k:
            raise ArityMismatch("sizes length differs from k")
        if sum(self.sizes) != len(self.assign):
            raise ArityMismatch("sizes do not sum to n")
        recount = [0] * self.k
        for a in self.assign:
            recount[a] += 1
        if recount != self.sizes:
            raise ArityMismatch("sizes inconsistent with assignment")
        if any(s == 0 for s in self.sizes):
            empty = self.sizes.index(0)
            raise EmptySetInPartition(f"set {empty} is empty")

    @property
    def n(self) -> int:
        return len(self.assign)

    def as_sets(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for i, a in enumerate(self.assign):
            out[a].append(i)
        return out

    def copy(self) -> "Partition":
        return Partition(list(self.assign), self.k, list(self.sizes))

    def relabel_by_first_occurrence(self) -> "Partition":
        """Renumber sets in order of first appearance along the points."""
        remap: dict[int, int] = {}
        new_assign = []
        for a in self.assign:
            if a not in remap:
                remap[a] = len(remap)
            new_assign.append(remap[a])
        return Partition.from_assign(new_assign, k=self.k)

"""Experiment pipelines: signed-network benchmarks and geo/latency inputs.

The signed benchmark draws a two-block random graph: a positive edge
joins two same-block nodes with probability p_in, a negative edge joins
two cross-block nodes with probability p_out, and every edge's sign is
then flipped independently with crossover probability p. p_in and p_out
are solved from the target average degree c = (n/2 - 1) p_in + n p_out / 2
and the gap n (p_in - p_out) = diff. Clustering runs on the similarity
A + 0.5 A^2 built from the flipped signed adjacency, which lets the
engine see two-step relationships, and is scored by edge accuracy: the
fraction of surviving edges whose ground-truth sign agrees with whether
the detected partition keeps the endpoints together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import RunConfig, run
from .errors import (
    ArityMismatch,
    CoordinateOutOfRange,
    InvalidProbability,
)
from .measure import Partition, SparseSymmetricMeasure, _from_dense_unchecked

EARTH_RADIUS_KM = 6371.0088


@dataclass(frozen=True)
class SbmParams:
    """Two-block signed benchmark parameters.

    n: node count (even), split into two blocks of n/2.
    c: target average degree.
    diff: gap between scaled block rates, n * (p_in - p_out).
    p: independent sign-flip (crossover) probability, in [0, 0.5].
    seed: generator seed; draws happen in a fixed order.
    """

    n: int
    c: float
    diff: float
    p: float
    seed: int

    def probabilities(self) -> tuple[float, float]:
        if self.n < 4 or self.n % 2:
            raise InvalidProbability(f"n={self.n} must be even and >= 4")
        half = self.n // 2
        p_out = (self.c - (half - 1) * self.diff / self.n) / (self.n - 1)
        p_in = p_out + self.diff / self.n
        for name, value in (("p_in", p_in), ("p_out", p_out)):
            if not 0.0 <= value <= 1.0:
                raise InvalidProbability(f"derived {name}={value:.4g} outside [0, 1]")
        if not 0.0 <= self.p <= 0.5:
            raise InvalidProbability(f"p={self.p} outside [0, 0.5]")
        return p_in, p_out


@dataclass
class SignedGraph:
    """Signed edges with their pre-flip ground truth.

    Arrays are parallel over edges: endpoints (i, j), the observed sign
    after crossover flips, and the pre-flip truth sign. block holds the
    ground-truth block of every surviving node.
    """

    n: int
    edge_i: np.ndarray
    edge_j: np.ndarray
    sign: np.ndarray
    truth_sign: np.ndarray
    block: np.ndarray

    @property
    def n_edges(self) -> int:
        return len(self.edge_i)

    def edges(self) -> list[tuple[int, int, int]]:
        return [
            (int(a), int(b), int(s))
            for a, b, s in zip(self.edge_i, self.edge_j, self.sign)
        ]


@dataclass(frozen=True)
class GeoPoint:
    """Latitude/longitude in degrees."""

    lat: float
    lon: float

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise CoordinateOutOfRange(f"latitude {self.lat} outside [-90, 90]")
        if not -180.0 <= self.lon <= 180.0:
            raise CoordinateOutOfRange(f"longitude {self.lon} outside [-180, 180]")


def sbm_generate(params: SbmParams) -> SignedGraph:
    """Draw a signed two-block graph; isolated nodes are dropped.

    Surviving nodes are renumbered densely, so the returned n can be
    smaller than params.n. Deterministic for a given seed.
    """
    p_in, p_out = params.probabilities()
    half = params.n // 2
    rng = np.random.default_rng(params.seed)

    parts_i: list[np.ndarray] = []
    parts_j: list[np.ndarray] = []
    truth_parts: list[np.ndarray] = []
    iu, ju = np.triu_indices(half, k=1)
    for offset in (0, half):
        keep = rng.random(len(iu)) < p_in
        parts_i.append(iu[keep] + offset)
        parts_j.append(ju[keep] + offset)
        truth_parts.append(np.ones(int(keep.sum()), dtype=np.int8))
    cross = rng.random((half, half)) < p_out
    ci, cj = np.nonzero(cross)
    parts_i.append(ci)
    parts_j.append(cj + half)
    truth_parts.append(-np.ones(len(ci), dtype=np.int8))

    edge_i = np.concatenate(parts_i)
    edge_j = np.concatenate(parts_j)
    truth = np.concatenate(truth_parts)
    flips = rng.random(len(edge_i)) < params.p
    sign = np.where(flips, -truth, truth).astype(np.int8)

    block = np.repeat(np.arange(2, dtype=np.int8), half)
    present = np.zeros(params.n, dtype=bool)
    present[edge_i] = True
    present[edge_j] = True
    survivors = np.nonzero(present)[0]
    renumber = np.full(params.n, -1, dtype=np.int64)
    renumber[survivors] = np.arange(len(survivors))
    return SignedGraph(
        n=len(survivors),
        edge_i=renumber[edge_i],
        edge_j=renumber[edge_j],
        sign=sign,
        truth_sign=truth,
        block=block[survivors],
    )


def similarity_from_signed(graph: SignedGraph) -> SparseSymmetricMeasure:
    """Similarity A + 0.5 A^2 from the observed signed adjacency.

    The square is taken by walking each node's two-step neighborhoods
    over the adjacency lists, so the cost is sum over nodes of
    deg(node)^2 rather than n^2. Entries that cancel to exactly zero
    are dropped; diagonal entries (half the degree) are kept.
    """
    n = graph.n
    adjacency: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for a, b, s in zip(graph.edge_i, graph.edge_j, graph.sign):
        adjacency[a].append((int(b), float(s)))
        adjacency[b].append((int(a), float(s)))
    rows: list[list[tuple[int, float]]] = []
    for i in range(n):
        acc: dict[int, float] = {}
        for j, v_ij in adjacency[i]:
            acc[j] = acc.get(j, 0.0) + v_ij
            half_v = 0.5 * v_ij
            for t, v_jt in adjacency[j]:
                acc[t] = acc.get(t, 0.0) + half_v * v_jt
        rows.append(sorted((j, v) for j, v in acc.items() if v != 0.0))
    return SparseSymmetricMeasure(n, "similarity", rows)


def edge_accuracy(
    graph: SignedGraph, partition: Partition, reference: str = "truth"
) -> float:
    """Fraction of edges whose sign the partition implies correctly.

    An edge counts as correct when its endpoints share a partition set
    exactly if the reference sign is positive. reference picks the
    pre-flip ground truth ("truth") or the observed post-flip signs
    ("observed"); recovery experiments score against the truth.
    """
    if partition.n != graph.n:
        raise ArityMismatch(
            f"partition covers {partition.n} points, graph has {graph.n}"
        )
    if partition.k != 2:
        raise ArityMismatch(f"edge accuracy is defined for k=2, got k={partition.k}")
    if reference not in ("truth", "observed"):
        raise ValueError(f"unknown reference {reference!r}")
    if graph.n_edges == 0:
        return 1.0
    ref = graph.truth_sign if reference == "truth" else graph.sign
    assign = np.asarray(partition.assign)
    together = assign[graph.edge_i] == assign[graph.edge_j]
    correct = together == (ref > 0)
    return float(correct.mean())


def haversine_matrix(points) -> SparseSymmetricMeasure:
    """Great-circle distance matrix in kilometers between geo points."""
    pts = [p if isinstance(p, GeoPoint) else GeoPoint(*p) for p in points]
    lat = np.radians([p.lat for p in pts])
    lon = np.radians([p.lon for p in pts])
    dlat_half = (lat[:, None] - lat[None, :]) / 2.0
    dlon_half = (lon[:, None] - lon[None, :]) / 2.0
    a = (
        np.sin(dlat_half) ** 2
        + np.cos(lat)[:, None] * np.cos(lat)[None, :] * np.sin(dlon_half) ** 2
    )
    dist = 2.0 * EARTH_RADIUS_KM * np.arcsin(np.sqrt(np.clip(a, 0.0, 1.0)))
    np.fill_diagonal(dist, 0.0)
    return _from_dense_unchecked(dist, "distance")


@dataclass
class SweepRow:
    c: float
    p: float
    mean_accuracy: float
    ci95_halfwidth: float
    graphs: int


def accuracy_sweep(
    n: int,
    c_list,
    p_grid,
    graphs_per_point: int,
    seed: int,
    diff: float = 5.0,
    restarts: int = 1,
    max_passes: int = 100,
    reference: str = "truth",
) -> list[SweepRow]:
    """Edge accuracy over a (degree, crossover) grid.

    For every cell, graphs_per_point independent graphs are generated,
    clustered with k=2 on the A + 0.5 A^2 similarity, and scored; the
    row carries the mean and the normal-approximation 95% half-width.
    Cell seeds derive from (seed, cell, graph) so runs are reproducible
    and independent of evaluation order.
    """
    rows = []
    for ci, c in enumerate(c_list):
        for pi, p in enumerate(p_grid):
            accuracies = []
            for g_idx in range(graphs_per_point):
                seq = np.random.SeedSequence((seed, ci, pi, g_idx))
                graph_seed, run_seed = (int(s) for s in seq.generate_state(2))
                graph = sbm_generate(SbmParams(n, c, diff=diff, p=p, seed=graph_seed))
                similarity = similarity_from_signed(graph)
                result = run(
                    similarity,
                    RunConfig(
                        k=2,
                        seed=run_seed,
                        restarts=restarts,
                        max_passes=max_passes,
                    ),
                )
                accuracies.append(edge_accuracy(graph, result.partition, reference))
            mean = float(np.mean(accuracies))
            if graphs_per_point > 1:
                half = 1.96 * float(np.std(accuracies, ddof=1)) / math.sqrt(
                    graphs_per_point
                )
            else:
                half = 0.0
            rows.append(SweepRow(float(c), float(p), mean, half, graphs_per_point))
    return rows


def random_sparse_similarity(
    n: int,
    avg_degree: float,
    seed: int,
    value_low: float = -1.0,
    value_high: float = 1.0,
    diagonal_fraction: float = 0.0,
) -> SparseSymmetricMeasure:
    """Random symmetric similarity with about avg_degree entries per row.

    Used by the benchmark command and as a generic engine test input.
    Values are uniform in [value_low, value_high); a fraction of points
    optionally receives a nonzero self-similarity.
    """
    rng = np.random.default_rng(seed)
    target_edges = int(round(avg_degree * n / 2.0))
    max_edges = n * (n - 1) // 2
    target_edges = min(target_edges, max_edges)
    chosen: set[tuple[int, int]] = set()
    while len(chosen) < target_edges:
        need = target_edges - len(chosen)
        raw = rng.integers(0, n, size=(int(need * 1.5) + 8, 2))
        for a, b in raw:
            if a == b:
                continue
            pair = (int(a), int(b)) if a < b else (int(b), int(a))
            chosen.add(pair)
            if len(chosen) >= target_edges:
                break
    rows: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for a, b in sorted(chosen):
        v = float(rng.uniform(value_low, value_high))
        if v == 0.0:
            continue
        rows[a].append((b, v))
        rows[b].append((a, v))
    if diagonal_fraction > 0.0:
        for i in range(n):
            if rng.random() < diagonal_fraction:
                v = float(rng.uniform(value_low, value_high))
                if v != 0.0:
                    rows[i].append((i, v))
    for row in rows:
        row.sort()
    return SparseSymmetricMeasure(n, "similarity", rows)

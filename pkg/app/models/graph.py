from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from app.errors import GraphValidationError

UNREACHABLE = -1


class Graph:
    """
    단순 무방향 무가중 그래프 (노드 id 0..n-1)

    edges 는 (m, 2) 배열로 u < v, 사전식 정렬 상태를 유지한다.
    인접 리스트는 CSR (indptr, indices) 형태이며 각 행은 오름차순이다.
    생성 후에는 변경하지 않는다.
    """

    def __init__(self, n: int, edges: np.ndarray):
        self.n = int(n)
        self.edges = edges
        sources = np.concatenate([edges[:, 0], edges[:, 1]])
        targets = np.concatenate([edges[:, 1], edges[:, 0]])
        order = np.lexsort((targets, sources))
        self.indices = targets[order]
        self.degrees = np.bincount(sources, minlength=self.n).astype(np.int64)
        self.indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=self.indptr[1:])
        for array in (self.edges, self.indices, self.degrees, self.indptr):
            array.flags.writeable = False

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def degree(self, u: int) -> int:
        return int(self.degrees[u])

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        pos = int(np.searchsorted(row, v))
        return pos < row.shape[0] and int(row[pos]) == v

    def edge_list(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in self.edges]

    @cached_property
    def adjacency(self) -> sparse.csr_matrix:
        data = np.ones(self.indices.shape[0], dtype=np.float64)
        return sparse.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class DistanceTable:
    """커뮤니티 유도 부분그래프 안에서의 최단거리 (도달 불가 = UNREACHABLE)"""

    nodes: np.ndarray
    distances: np.ndarray

    @property
    def reachable(self) -> np.ndarray:
        return self.distances != UNREACHABLE

    def distance(self, u: int, v: int) -> int:
        i = int(np.searchsorted(self.nodes, u))
        j = int(np.searchsorted(self.nodes, v))
        if i >= self.nodes.shape[0] or self.nodes[i] != u or j >= self.nodes.shape[0] or self.nodes[j] != v:
            raise KeyError(f"Pair ({u}, {v}) is not part of the table")
        return int(self.distances[i, j])

    def pair_distances(self) -> np.ndarray:
        """i < j 쌍의 거리 (도달 불가 포함)"""
        upper = np.triu_indices(self.nodes.shape[0], k=1)
        return self.distances[upper]


def _canonical_pairs(n: int, edge_list: Iterable[Sequence[int]]) -> np.ndarray:
    pairs = np.asarray(list(edge_list), dtype=np.int64)
    if pairs.size == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise GraphValidationError("Edge list must contain node pairs")

    out_of_range = np.flatnonzero((pairs < 0).any(axis=1) | (pairs >= n).any(axis=1))
    if out_of_range.size:
        u, v = pairs[out_of_range[0]]
        raise GraphValidationError(f"Node id out of range in edge ({u}, {v})", pair=[int(u), int(v)], n=n)

    loops = np.flatnonzero(pairs[:, 0] == pairs[:, 1])
    if loops.size:
        u, v = pairs[loops[0]]
        raise GraphValidationError(f"Self-loop ({u}, {v}) is not allowed", pair=[int(u), int(v)])

    canonical = np.sort(pairs, axis=1)
    keys = canonical[:, 0] * n + canonical[:, 1]
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    duplicates = np.flatnonzero(sorted_keys[1:] == sorted_keys[:-1])
    if duplicates.size:
        u, v = canonical[order[duplicates[0] + 1]]
        raise GraphValidationError(f"Duplicate edge ({u}, {v})", pair=[int(u), int(v)])

    return canonical[order]


def build_graph(n: int, edge_list: Iterable[Sequence[int]]) -> Graph:
    if n < 0:
        raise GraphValidationError("Node count must be non-negative", n=n)
    edges = _canonical_pairs(n, edge_list)
    return Graph(n, np.ascontiguousarray(edges))


def graph_from_edge_keys(n: int, keys: np.ndarray) -> Graph:
    """u * n + v (u < v) 형태의 정수 키 배열로 그래프 생성 (생성기 내부용)"""
    keys = np.unique(np.asarray(keys, dtype=np.int64))
    edges = np.stack([keys // n, keys % n], axis=1) if keys.size else np.zeros((0, 2), dtype=np.int64)
    if edges.size and (edges[:, 0] >= edges[:, 1]).any():
        raise GraphValidationError("Edge keys must encode pairs with u < v")
    return Graph(n, np.ascontiguousarray(edges))


def induced_subgraph(g: Graph, nodes: Sequence[int] | np.ndarray) -> tuple[Graph, np.ndarray]:
    """nodes 로 유도된 부분그래프 (노드는 정렬 순서대로 0..k-1 로 재번호)"""
    nodes = np.unique(np.asarray(nodes, dtype=np.int64))
    local = np.full(g.n, -1, dtype=np.int64)
    local[nodes] = np.arange(nodes.shape[0])
    mask = (local[g.edges[:, 0]] >= 0) & (local[g.edges[:, 1]] >= 0)
    sub_edges = local[g.edges[mask]]
    # 원본 edges 가 정렬되어 있고 local 은 단조 증가이므로 정렬이 유지된다
    return Graph(nodes.shape[0], np.ascontiguousarray(sub_edges)), nodes


def connected_component_labels(g: Graph) -> np.ndarray:
    _, labels = csgraph.connected_components(g.adjacency, directed=False)
    return labels


def pairwise_distances_within(g: Graph, nodes: Sequence[int] | np.ndarray) -> DistanceTable:
    nodes = np.unique(np.asarray(nodes, dtype=np.int64))
    if nodes.size == 0:
        raise GraphValidationError("Distance table needs at least one node")
    sub, nodes = induced_subgraph(g, nodes)
    raw = csgraph.shortest_path(sub.adjacency, method="D", directed=False, unweighted=True)
    distances = np.full(raw.shape, UNREACHABLE, dtype=np.int64)
    finite = np.isfinite(raw)
    distances[finite] = raw[finite].astype(np.int64)
    return DistanceTable(nodes=nodes, distances=distances)


def sampled_distances_within(
    g: Graph,
    nodes: Sequence[int] | np.ndarray,
    sources: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """표본 출발점 BFS 로 얻은 (출발점, 도착점) 쌍 거리. 도달 불가 = UNREACHABLE"""
    sub, nodes = induced_subgraph(g, nodes)
    picked = np.sort(rng.choice(nodes.shape[0], size=min(sources, nodes.shape[0]), replace=False))
    raw = csgraph.shortest_path(sub.adjacency, method="D", directed=False, unweighted=True, indices=picked)
    raw[np.arange(picked.shape[0]), picked] = np.nan
    values = raw[~np.isnan(raw)]
    out = np.full(values.shape, UNREACHABLE, dtype=np.int64)
    finite = np.isfinite(values)
    out[finite] = values[finite].astype(np.int64)
    return out

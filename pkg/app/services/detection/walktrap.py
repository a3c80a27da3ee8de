"""
Walktrap: 길이 t 랜덤워크 확률 벡터 사이의 거리로 인접 커뮤니티를 응집

노드 벡터 x_i = P^t_i. D^(-1/2), 커뮤니티 벡터는 구성원 벡터의 평균이다.
병합 비용 Δσ(C1, C2) = |C1||C2| / (|C1| + |C2|) * ||x_C1 - x_C2||^2 / n.
초기 Δσ 는 G = P^(2t) D^(-1) (= X Xᵀ) 를 열 블록 단위로 구해 간선마다 계산하고,
병합 후 갱신은 양쪽에 모두 인접한 이웃이면 세 Δσ 의 조합으로, 아니면 벡터로 직접 계산한다.
병합된 커뮤니티 벡터는 선형성으로 만든다: x_C3 = (|C1| x_C1 + |C2| x_C2) / |C3|.
살아 있는 커뮤니티 벡터만 float32 로 보관하고, 노드 벡터는 처음 필요할 때 블록으로 계산한다.
"""
import heapq
import logging

import numpy as np
from scipy import sparse

from app.config import settings
from app.errors import DetectionError
from app.models.detection import DetectionResult, MergeDendrogram, MergeStep
from app.models.graph import Graph
from app.models.partition import Partition

logger = logging.getLogger(__name__)


class _WalkOperator:
    def __init__(self, g: Graph, t: int):
        self.n = g.n
        self.t = t
        degrees = g.degrees.astype(np.float64)
        self.inv_degree = np.divide(1.0, degrees, out=np.zeros(g.n), where=degrees > 0)
        self.sqrt_inv_degree = np.sqrt(self.inv_degree)
        scale = sparse.diags(self.inv_degree)
        self.forward = (scale @ g.adjacency).tocsr()
        self.backward = (g.adjacency @ scale).tocsr()

    def community_vector(self, members: list[int] | np.ndarray) -> np.ndarray:
        """(1_C / |C|)ᵀ P^t D^(-1/2)"""
        members = np.asarray(members, dtype=np.int64)
        v = np.zeros(self.n, dtype=np.float64)
        v[members] = 1.0 / members.shape[0]
        for _ in range(self.t):
            v = self.backward @ v
        return v * self.sqrt_inv_degree

    def node_vectors(self, nodes: list[int]) -> np.ndarray:
        """노드별 벡터를 행으로 (len(nodes), n)"""
        width = len(nodes)
        block = np.zeros((self.n, width), dtype=np.float64)
        block[np.asarray(nodes, dtype=np.int64), np.arange(width)] = 1.0
        for _ in range(self.t):
            block = self.backward @ block
        return (block * self.sqrt_inv_degree[:, None]).T

    def gram_columns(self, start: int, stop: int) -> np.ndarray:
        """G[:, start:stop], G = P^(2t) D^(-1)"""
        width = stop - start
        block = np.zeros((self.n, width), dtype=np.float64)
        block[np.arange(start, stop), np.arange(width)] = self.inv_degree[start:stop]
        for _ in range(2 * self.t):
            block = self.forward @ block
        return block


def walk_distance(g: Graph, u: int, v: int, t: int = 4) -> float:
    """두 노드의 랜덤워크 거리 r(u, v)"""
    operator = _WalkOperator(g, t)
    return float(np.linalg.norm(operator.community_vector([u]) - operator.community_vector([v])))


def _initial_sigmas(g: Graph, operator: _WalkOperator, block_size: int) -> np.ndarray:
    """간선별 Δσ (간선 순서 그대로)"""
    n = g.n
    edges = g.edges
    cross = np.zeros(edges.shape[0], dtype=np.float64)
    norms = np.zeros(n, dtype=np.float64)
    for start in range(0, n, block_size):
        stop = min(n, start + block_size)
        gram = operator.gram_columns(start, stop)
        norms[start:stop] = gram[np.arange(start, stop), np.arange(stop - start)]
        in_block = np.flatnonzero((edges[:, 1] >= start) & (edges[:, 1] < stop))
        cross[in_block] = gram[edges[in_block, 0], edges[in_block, 1] - start]
    squared = np.maximum(norms[edges[:, 0]] + norms[edges[:, 1]] - 2.0 * cross, 0.0)
    return squared / (2.0 * n)


class _VectorStore:
    """살아 있는 커뮤니티의 벡터. 병합된 적 없는 커뮤니티는 노드 하나이므로 id 로 계산한다"""

    def __init__(self, operator: _WalkOperator, block_size: int):
        self.operator = operator
        self.block_size = block_size
        self.vectors: dict[int, np.ndarray] = {}

    def ensure(self, communities: list[int]) -> None:
        missing = [c for c in communities if c not in self.vectors]
        for start in range(0, len(missing), self.block_size):
            chunk = missing[start:start + self.block_size]
            rows = self.operator.node_vectors(chunk).astype(np.float32)
            for c, row in zip(chunk, rows):
                self.vectors[c] = row

    def merge(self, i: int, j: int, size_i: int, size_j: int) -> np.ndarray:
        self.ensure([i, j])
        merged = (size_i * self.vectors[i].astype(np.float64) + size_j * self.vectors[j].astype(np.float64)) / (
            size_i + size_j
        )
        del self.vectors[j]
        self.vectors[i] = merged.astype(np.float32)
        return merged

    def squared_distances(self, x: np.ndarray, communities: list[int]) -> np.ndarray:
        self.ensure(communities)
        stacked = np.stack([self.vectors[c] for c in communities]).astype(np.float64)
        diff = stacked - x
        return np.einsum("ij,ij->i", diff, diff)


def walktrap(g: Graph, t: int = 4, block_size: int | None = None) -> DetectionResult:
    if t < 1:
        raise DetectionError("Walk length t must be at least 1", t=t)
    n = g.n
    if g.m == 0:
        return DetectionResult(algorithm="walktrap", partition=Partition.singletons(n), extra={"t": t})

    block_size = block_size or settings.WALKTRAP_BLOCK_SIZE
    operator = _WalkOperator(g, t)
    initial = _initial_sigmas(g, operator, block_size)
    store = _VectorStore(operator, block_size)

    two_m = 2.0 * g.m
    a = (g.degrees / two_m).tolist()
    size = [1] * n
    sigma: list[dict[int, float]] = [dict() for _ in range(n)]
    links: list[dict[int, int]] = [dict() for _ in range(n)]
    heap: list[tuple[float, int, int]] = []
    for (u, v), value in zip(g.edges.tolist(), initial.tolist()):
        sigma[u][v] = value
        sigma[v][u] = value
        links[u][v] = 1
        links[v][u] = 1
        heap.append((value, u, v))
    heapq.heapify(heap)

    alive = [True] * n
    q = -float(np.sum(np.asarray(a) ** 2))
    initial_q = q
    steps: list[MergeStep] = []

    while heap:
        value, i, j = heapq.heappop(heap)
        if not (alive[i] and alive[j]) or sigma[i].get(j) != value:
            continue
        size_i, size_j = size[i], size[j]
        merged_size = size_i + size_j
        q += links[i][j] / g.m - 2.0 * a[i] * a[j]

        sigma_i, sigma_j = sigma[i], sigma[j]
        del sigma_i[j]
        del sigma_j[i]
        del links[i][j]
        del links[j][i]
        merged = store.merge(i, j, size_i, size_j)

        neighbours = sorted(set(sigma_i) | set(sigma_j))
        one_sided = [k for k in neighbours if not (k in sigma_i and k in sigma_j)]
        direct: dict[int, float] = {}
        if one_sided:
            distances = store.squared_distances(merged, one_sided)
            for k, squared in zip(one_sided, distances.tolist()):
                size_k = size[k]
                direct[k] = merged_size * size_k / (merged_size + size_k) * squared / n

        updated: dict[int, float] = {}
        for k in neighbours:
            size_k = size[k]
            if k in direct:
                updated[k] = direct[k]
            else:
                updated[k] = (
                    (size_i + size_k) * sigma_i[k] + (size_j + size_k) * sigma_j[k] - size_k * value
                ) / (merged_size + size_k)
            links_k = links[i].get(k, 0) + links[j].get(k, 0)
            links[i][k] = links_k
            links[k][i] = links_k
            links[k].pop(j, None)
            sigma[k].pop(j, None)
        links[j] = {}
        sigma_i.clear()
        sigma[j] = {}
        for k, new_value in updated.items():
            sigma_i[k] = new_value
            sigma[k][i] = new_value
            heapq.heappush(heap, (new_value, min(i, k), max(i, k)))

        size[i] = merged_size
        size[j] = 0
        alive[j] = False
        a[i] += a[j]
        a[j] = 0.0
        steps.append(MergeStep(a=i, b=j, objective=q))

    objectives = np.asarray([initial_q] + [s.objective for s in steps])
    cut = int(np.argmax(objectives))
    dendrogram = MergeDendrogram(n=n, initial_objective=initial_q, steps=steps, cut=cut)
    logger.debug(f"walktrap: t={t} merges={len(steps)} cut={cut} Q={objectives[cut]:.6f}")
    return DetectionResult(
        algorithm="walktrap",
        partition=dendrogram.partition_at(cut),
        objective=float(objectives[cut]),
        objective_name="modularity",
        dendrogram=dendrogram,
        extra={"t": t},
    )

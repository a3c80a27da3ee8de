from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy import sparse

from app.errors import DetectionError
from app.models.partition import Partition

STOCHASTIC_ATOL = 1e-12


@dataclass(frozen=True)
class MergeStep:
    a: int
    b: int
    objective: float


@dataclass(frozen=True)
class MergeDendrogram:
    """
    병합 순서와 각 병합 후 목적함수 값

    커뮤니티 id 는 구성원 중 가장 작은 노드 id 이므로 병합 후 살아남는 id 는 min(a, b) 이다.
    cut 은 적용할 병합 수 (0 이면 싱글톤 분할).
    """

    n: int
    initial_objective: float
    steps: list[MergeStep]
    cut: int

    @property
    def objectives(self) -> np.ndarray:
        return np.asarray([self.initial_objective] + [s.objective for s in self.steps], dtype=np.float64)

    def partition_at(self, cut: int | None = None) -> Partition:
        """앞에서부터 cut 개의 병합을 적용한 분할"""
        cut = self.cut if cut is None else cut
        if not 0 <= cut <= len(self.steps):
            raise DetectionError(f"Cut {cut} is outside the dendrogram", cut=cut, steps=len(self.steps))
        parent = np.arange(self.n, dtype=np.int64)

        def find(x: int) -> int:
            root = x
            while parent[root] != root:
                root = parent[root]
            while parent[x] != root:
                parent[x], x = root, parent[x]
            return int(root)

        for step in self.steps[:cut]:
            ra, rb = find(step.a), find(step.b)
            parent[max(ra, rb)] = min(ra, rb)
        return Partition.from_labels([find(u) for u in range(self.n)])


@dataclass(frozen=True)
class FlowMatrix:
    """열 확률 행렬 (각 열의 합 = 1, 음수 없음)"""

    matrix: sparse.csc_matrix

    def __post_init__(self):
        if self.matrix.nnz and self.matrix.data.min() < 0:
            raise DetectionError("Flow matrix has negative entries")
        sums = np.asarray(self.matrix.sum(axis=0)).ravel()
        if sums.size and np.abs(sums - 1.0).max() > STOCHASTIC_ATOL:
            raise DetectionError("Flow matrix columns must sum to 1", worst=float(np.abs(sums - 1.0).max()))

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])


@dataclass(frozen=True)
class DetectionResult:
    algorithm: str
    partition: Partition
    objective: float | None = None
    objective_name: str | None = None
    dendrogram: MergeDendrogram | None = None
    pass_log: list[float] = field(default_factory=list)
    iterations: int | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def community_count(self) -> int:
        return self.partition.num_communities

    @property
    def singleton_count(self) -> int:
        return int(np.count_nonzero(self.partition.sizes == 1))

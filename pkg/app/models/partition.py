from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from app.errors import PartitionMismatchError
from app.models.graph import Graph, connected_component_labels


class Partition:
    """
    노드 -> 커뮤니티 전체 매핑 (상호 배타적 커뮤니티)

    커뮤니티 id 는 0..C-1 연속이며 빈 커뮤니티는 없다.
    """

    def __init__(self, membership: Sequence[int] | np.ndarray):
        membership = np.array(membership, dtype=np.int64)
        if membership.ndim != 1:
            raise PartitionMismatchError("Membership must be a flat sequence")
        if membership.size:
            if membership.min() < 0:
                raise PartitionMismatchError("Community ids must be non-negative")
            counts = np.bincount(membership)
            empty = np.flatnonzero(counts == 0)
            if empty.size:
                raise PartitionMismatchError(
                    f"Community ids must be contiguous, id {int(empty[0])} is empty",
                    community=int(empty[0]),
                )
        membership.flags.writeable = False
        self.membership = membership

    @classmethod
    def from_labels(cls, labels: Sequence | np.ndarray) -> "Partition":
        """임의 라벨을 첫 등장 순서로 0..C-1 재번호"""
        labels = np.asarray(labels)
        if labels.size == 0:
            return cls(np.zeros(0, dtype=np.int64))
        _, first_index, inverse = np.unique(labels, return_index=True, return_inverse=True)
        rank = np.empty(first_index.shape[0], dtype=np.int64)
        rank[np.argsort(first_index, kind="stable")] = np.arange(first_index.shape[0])
        return cls(rank[inverse.reshape(-1)])

    @classmethod
    def from_communities(cls, n: int, communities: Iterable[Iterable[int]]) -> "Partition":
        labels = np.full(n, -1, dtype=np.int64)
        for community_id, nodes in enumerate(communities):
            nodes = np.asarray(list(nodes), dtype=np.int64)
            if (labels[nodes] >= 0).any():
                raise PartitionMismatchError("Communities overlap", community=community_id)
            labels[nodes] = community_id
        missing = np.flatnonzero(labels < 0)
        if missing.size:
            raise PartitionMismatchError(f"Node {int(missing[0])} has no community", node=int(missing[0]))
        return cls.from_labels(labels)

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(np.arange(n, dtype=np.int64))

    @classmethod
    def single_block(cls, n: int) -> "Partition":
        return cls(np.zeros(n, dtype=np.int64))

    @property
    def n(self) -> int:
        return int(self.membership.shape[0])

    @cached_property
    def sizes(self) -> np.ndarray:
        sizes = np.bincount(self.membership) if self.n else np.zeros(0, dtype=np.int64)
        sizes.flags.writeable = False
        return sizes

    @property
    def num_communities(self) -> int:
        return int(self.sizes.shape[0])

    @cached_property
    def communities(self) -> list[np.ndarray]:
        order = np.argsort(self.membership, kind="stable")
        bounds = np.cumsum(self.sizes)[:-1]
        return np.split(order, bounds) if self.n else []

    def community(self, c: int) -> np.ndarray:
        return self.communities[c]

    def canonical(self) -> "Partition":
        return Partition.from_labels(self.membership)

    def same_as(self, other: "Partition") -> bool:
        """커뮤니티 id 이름만 다른 경우까지 동일로 본다"""
        if self.n != other.n:
            return False
        return np.array_equal(self.canonical().membership, other.canonical().membership)

    def relabel_nodes(self, permutation: Sequence[int] | np.ndarray) -> "Partition":
        """permutation[u] = u 의 새 id"""
        permutation = np.asarray(permutation, dtype=np.int64)
        labels = np.empty_like(self.membership)
        labels[permutation] = self.membership
        return Partition.from_labels(labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.membership, other.membership)

    def __repr__(self) -> str:
        return f"Partition(n={self.n}, communities={self.num_communities})"


def internal_degrees(g: Graph, p: Partition) -> np.ndarray:
    """모든 노드의 k_int"""
    if g.n != p.n:
        raise PartitionMismatchError("Partition does not cover the graph node set", graph_n=g.n, partition_n=p.n)
    same = p.membership[g.edges[:, 0]] == p.membership[g.edges[:, 1]]
    inner = g.edges[same]
    return np.bincount(inner.reshape(-1), minlength=g.n).astype(np.int64)


def internal_degree(g: Graph, p: Partition, u: int) -> int:
    if not 0 <= u < g.n:
        raise PartitionMismatchError(f"Node {u} is out of range", node=u, n=g.n)
    neighbors = g.neighbors(u)
    return int(np.count_nonzero(p.membership[neighbors] == p.membership[u]))


def external_degree(g: Graph, p: Partition, u: int) -> int:
    return g.degree(u) - internal_degree(g, p, u)


def connected_components(g: Graph) -> Partition:
    return Partition.from_labels(connected_component_labels(g))

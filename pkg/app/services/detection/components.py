from typing import Callable

import numpy as np
from scipy import sparse

from app.models.graph import Graph, connected_component_labels, induced_subgraph
from app.models.partition import Partition


def per_component(g: Graph, detect: Callable[[Graph], np.ndarray]) -> Partition:
    """
    연결 성분마다 detect 를 따로 실행하고 결과를 서로소 id 로 합친다.

    detect 는 연결된 부분그래프를 받아 노드별 라벨 배열을 돌려준다.
    간선이 없는 성분 (고립 노드) 은 싱글톤으로 둔다.
    """
    component = connected_component_labels(g)
    labels = np.empty(g.n, dtype=np.int64)
    offset = 0
    for c in range(int(component.max()) + 1 if g.n else 0):
        nodes = np.flatnonzero(component == c)
        if nodes.shape[0] == 1:
            labels[nodes] = offset
            offset += 1
            continue
        sub, nodes = induced_subgraph(g, nodes)
        local = Partition.from_labels(detect(sub)).membership
        labels[nodes] = local + offset
        offset += int(local.max()) + 1
    return Partition.from_labels(labels)


def aggregate(w: sparse.csr_matrix, labels: np.ndarray) -> sparse.csr_matrix:
    """SᵀWS: 커뮤니티 라벨 (0..C-1) 로 노드를 묶은 가중 행렬"""
    size = int(labels.max()) + 1
    s = sparse.csr_matrix(
        (np.ones(labels.shape[0], dtype=np.float64), (np.arange(labels.shape[0]), labels)),
        shape=(labels.shape[0], size),
    )
    return (s.T @ w @ s).tocsr()


def compact_labels(labels: np.ndarray) -> np.ndarray:
    """첫 등장 순서 대신 기존 id 오름차순으로 0..C-1 재번호"""
    _, inverse = np.unique(labels, return_inverse=True)
    return inverse.reshape(-1).astype(np.int64)

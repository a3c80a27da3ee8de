"""
Louvain: 지역 노드 이동 + 커뮤니티 집약을 Q 가 늘지 않을 때까지 반복
"""
import logging

import numpy as np
from scipy import sparse

from app.models.detection import DetectionResult
from app.models.graph import Graph
from app.models.partition import Partition
from app.services.detection.components import aggregate, compact_labels
from app.services.detection.modularity import weighted_modularity

logger = logging.getLogger(__name__)

_GAIN_EPS = 1e-12


def local_moves(w: sparse.csr_matrix, order: np.ndarray | None = None) -> tuple[np.ndarray, int]:
    """
    한 단계의 지역 이동 (노드 id 오름차순 스윕, 개선이 없을 때까지 반복)

    노드 i 를 이웃 커뮤니티 C 로 옮기는 이득 (m 배율): w_iC - tot_C k_i / 2m.
    이득이 같으면 작은 커뮤니티 id 를 고른다.
    반환: (라벨, 이동 횟수)
    """
    size = w.shape[0]
    indptr, indices, data = w.indptr, w.indices, w.data
    strength = np.asarray(w.sum(axis=1)).ravel()
    two_m = float(strength.sum())
    order = np.arange(size) if order is None else order
    k = strength.tolist()
    labels_list = list(range(size))
    tot_list = strength.tolist()

    moves = 0
    improved = True
    while improved:
        improved = False
        for i in order.tolist():
            start, end = indptr[i], indptr[i + 1]
            links: dict[int, float] = {}
            for j, weight in zip(indices[start:end].tolist(), data[start:end].tolist()):
                if j == i:
                    continue
                c = labels_list[j]
                links[c] = links.get(c, 0.0) + weight

            own = labels_list[i]
            k_i = k[i]
            tot_list[own] -= k_i
            own_gain = links.get(own, 0.0) - tot_list[own] * k_i / two_m
            gains = {c: links[c] - tot_list[c] * k_i / two_m for c in links if c != own}
            best = own
            if gains:
                top = max(gains.values())
                if top > own_gain + _GAIN_EPS:
                    best = min(c for c, gain in gains.items() if gain >= top - _GAIN_EPS)
            tot_list[best] += k_i
            if best != own:
                labels_list[i] = best
                moves += 1
                improved = True

    return np.asarray(labels_list, dtype=np.int64), moves


def louvain(g: Graph) -> DetectionResult:
    """
    Louvain

    pass_log 에는 노드가 하나라도 움직인 단계마다 그 단계 후의 Q 가 쌓인다 (단조 증가).
    """
    n = g.n
    if g.m == 0:
        return DetectionResult(algorithm="louvain", partition=Partition.singletons(n))

    w = g.adjacency.copy().tocsr()
    membership = np.arange(n, dtype=np.int64)
    pass_log: list[float] = []
    q = weighted_modularity(w, np.arange(n, dtype=np.int64))

    while True:
        labels, moves = local_moves(w)
        if moves == 0:
            break
        labels = compact_labels(labels)
        new_q = weighted_modularity(w, labels)
        if new_q <= q:
            break
        q = new_q
        pass_log.append(q)
        membership = labels[membership]
        w = aggregate(w, labels)
        logger.debug(f"louvain pass {len(pass_log)}: communities={w.shape[0]} Q={q:.6f}")

    partition = Partition.from_labels(membership)
    return DetectionResult(
        algorithm="louvain",
        partition=partition,
        objective=q,
        objective_name="modularity",
        pass_log=pass_log,
        iterations=len(pass_log),
    )

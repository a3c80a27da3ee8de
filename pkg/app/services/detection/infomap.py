"""
맵 방정식 (2 단계) 과 그 탐욕 최소화 InfoMap

무방향 랜덤워크의 정상 방문율은 차수에 비례한다 (p_α = k_α / 2m).
모듈 i 의 탈출률 q_i 는 경계 간선 수 / 2m, q = Σ q_i 이며
L = plogp(q) - 2 Σ plogp(q_i) - Σ plogp(p_α) + Σ plogp(q_i + p_i) (단위: bit).
"""
import logging
import math

import numpy as np
from scipy import sparse

from app.errors import MetricUndefinedError, PartitionMismatchError
from app.models.detection import DetectionResult
from app.models.graph import Graph, connected_component_labels
from app.models.partition import Partition
from app.services.detection.components import aggregate, compact_labels, per_component

logger = logging.getLogger(__name__)

OUTER_LOOP_TOL = 1e-10
_MOVE_EPS = 1e-12


def plogp(x: float) -> float:
    return x * math.log2(x) if x > 0.0 else 0.0


def _module_terms(w: sparse.csr_matrix, labels: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """(모듈 탈출률, 모듈 방문율, 2m)"""
    total = float(w.sum())
    size = int(labels.max()) + 1
    coo = w.tocoo()
    cross = labels[coo.row] != labels[coo.col]
    exit_flow = np.bincount(labels[coo.row[cross]], weights=coo.data[cross], minlength=size) / total
    strength = np.asarray(w.sum(axis=1)).ravel()
    flow = np.bincount(labels, weights=strength, minlength=size) / total
    return exit_flow, flow, total


def codelength(w: sparse.csr_matrix, labels: np.ndarray) -> float:
    """대칭 가중 행렬 W 와 노드 라벨에 대한 맵 방정식 값"""
    exit_flow, flow, total = _module_terms(w, labels)
    node_flow = np.asarray(w.sum(axis=1)).ravel() / total
    return (
        plogp(float(exit_flow.sum()))
        - 2.0 * math.fsum(plogp(x) for x in exit_flow.tolist())
        - math.fsum(plogp(x) for x in node_flow.tolist())
        + math.fsum(plogp(x) for x in (exit_flow + flow).tolist())
    )


def map_equation(g: Graph, p: Partition) -> float:
    if g.n != p.n:
        raise PartitionMismatchError("Partition does not cover the graph node set", graph_n=g.n, partition_n=p.n)
    if g.m == 0:
        raise MetricUndefinedError("Map equation is undefined on graphs without edges")
    if int(connected_component_labels(g).max()) > 0:
        raise MetricUndefinedError("Map equation is undefined on disconnected graphs, evaluate per component")
    return codelength(g.adjacency, p.membership)


def _local_moves(
    w: sparse.csr_matrix,
    labels: np.ndarray,
    rng: np.random.Generator | None = None,
) -> tuple[np.ndarray, int]:
    """
    노드를 이웃 모듈로 옮겨 L 을 줄인다. 개선이 없을 때까지 스윕을 반복한다.

    rng 가 없으면 id 오름차순, 있으면 스윕마다 무작위 순서.
    같은 감소량이면 작은 모듈 id 를 고른다.
    """
    size = w.shape[0]
    indptr, indices, data = w.indptr, w.indices, w.data
    exit_flow, flow, total = _module_terms(w, labels)
    exit_list = exit_flow.tolist() + [0.0] * max(0, size - exit_flow.shape[0])
    flow_list = flow.tolist() + [0.0] * max(0, size - flow.shape[0])
    sum_exit = math.fsum(exit_list)
    strength = np.asarray(w.sum(axis=1)).ravel()
    node_flow = (strength / total).tolist()
    out_weight = (strength - w.diagonal()).tolist()
    labels_list = labels.tolist()

    moves = 0
    improved = True
    while improved:
        improved = False
        order = range(size) if rng is None else rng.permutation(size).tolist()
        for alpha in order:
            start, end = indptr[alpha], indptr[alpha + 1]
            links: dict[int, float] = {}
            for beta, weight in zip(indices[start:end].tolist(), data[start:end].tolist()):
                if beta == alpha:
                    continue
                c = labels_list[beta]
                links[c] = links.get(c, 0.0) + weight

            a = labels_list[alpha]
            p_alpha = node_flow[alpha]
            out_alpha = out_weight[alpha]
            exit_a_new = exit_list[a] - (out_alpha - 2.0 * links.get(a, 0.0)) / total
            flow_a_new = flow_list[a] - p_alpha

            best, best_delta = a, 0.0
            best_exit_b = 0.0
            for b in sorted(links):
                if b == a:
                    continue
                exit_b_new = exit_list[b] + (out_alpha - 2.0 * links[b]) / total
                flow_b_new = flow_list[b] + p_alpha
                sum_new = sum_exit + (exit_a_new - exit_list[a]) + (exit_b_new - exit_list[b])
                delta = (
                    plogp(sum_new)
                    - plogp(sum_exit)
                    - 2.0 * (plogp(exit_a_new) + plogp(exit_b_new) - plogp(exit_list[a]) - plogp(exit_list[b]))
                    + plogp(exit_a_new + flow_a_new)
                    + plogp(exit_b_new + flow_b_new)
                    - plogp(exit_list[a] + flow_list[a])
                    - plogp(exit_list[b] + flow_list[b])
                )
                if delta < best_delta - _MOVE_EPS:
                    best, best_delta, best_exit_b = b, delta, exit_b_new

            if best != a:
                sum_exit += (exit_a_new - exit_list[a]) + (best_exit_b - exit_list[best])
                exit_list[a] = max(exit_a_new, 0.0)
                flow_list[a] = max(flow_a_new, 0.0)
                exit_list[best] = best_exit_b
                flow_list[best] += p_alpha
                labels_list[alpha] = best
                moves += 1
                improved = True

    return np.asarray(labels_list, dtype=np.int64), moves


def _optimize(w: sparse.csr_matrix, start: np.ndarray, rng: np.random.Generator | None) -> np.ndarray:
    """지역 이동과 집약을 이동이 없을 때까지 반복한 원래 노드 라벨"""
    membership = compact_labels(start)
    labels, _ = _local_moves(w, membership, rng)
    membership = compact_labels(labels)
    level = aggregate(w, membership)
    while level.shape[0] > 1:
        labels, moves = _local_moves(level, np.arange(level.shape[0], dtype=np.int64), rng)
        if moves == 0:
            break
        labels = compact_labels(labels)
        membership = labels[membership]
        level = aggregate(level, labels)
    return membership


def _infomap_connected(g: Graph, trials: int, seed: int) -> tuple[np.ndarray, float]:
    w = g.adjacency
    best_labels, best_length = None, math.inf
    for trial in range(trials):
        rng = None if trial == 0 else np.random.default_rng([seed, trial])
        labels = np.arange(g.n, dtype=np.int64)
        length = math.inf
        while True:
            candidate = _optimize(w, labels, rng)
            candidate_length = codelength(w, candidate)
            improvement = length - candidate_length
            if candidate_length < length:
                labels, length = candidate, candidate_length
            if improvement < OUTER_LOOP_TOL:
                break
        if length < best_length - _MOVE_EPS:
            best_labels, best_length = labels, length

    single = np.zeros(g.n, dtype=np.int64)
    single_length = codelength(w, single)
    if single_length <= best_length:
        return single, single_length
    return best_labels, best_length


def infomap(g: Graph, seed: int = 0, trials: int = 1) -> DetectionResult:
    """
    InfoMap

    연결 성분마다 따로 최소화한다. trial 0 은 id 순서 스윕, 이후 trial 은 seed 로 섞은 순서.
    단일 모듈보다 길지 않은 결과만 돌려준다.
    """
    if g.m == 0:
        return DetectionResult(algorithm="infomap", partition=Partition.singletons(g.n), extra={"trials": trials})

    lengths: list[float] = []

    def detect(sub: Graph) -> np.ndarray:
        labels, length = _infomap_connected(sub, trials, seed)
        lengths.append(length)
        return labels

    partition = per_component(g, detect)
    connected = int(connected_component_labels(g).max()) == 0
    objective = lengths[0] if connected else None
    logger.debug(f"infomap: modules={partition.num_communities} codelengths={lengths}")
    return DetectionResult(
        algorithm="infomap",
        partition=partition,
        objective=objective,
        objective_name="codelength",
        extra={"trials": trials, "seed": seed, "component_codelengths": lengths},
    )

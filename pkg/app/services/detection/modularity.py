import numpy as np
from scipy import sparse

from app.errors import MetricUndefinedError, PartitionMismatchError
from app.models.graph import Graph
from app.models.partition import Partition


def modularity(g: Graph, p: Partition) -> float:
    """Q = Σ_c [m_c / m - (d_c / 2m)^2]"""
    if g.n != p.n:
        raise PartitionMismatchError("Partition does not cover the graph node set", graph_n=g.n, partition_n=p.n)
    if g.m == 0:
        raise MetricUndefinedError("Modularity is undefined on graphs without edges")
    left = p.membership[g.edges[:, 0]]
    same = left == p.membership[g.edges[:, 1]]
    internal = np.bincount(left[same], minlength=p.num_communities).astype(np.float64)
    degree_sums = np.bincount(p.membership, weights=g.degrees, minlength=p.num_communities)
    m = float(g.m)
    return float(np.sum(internal / m - (degree_sums / (2.0 * m)) ** 2))


def weighted_modularity(w: sparse.csr_matrix, labels: np.ndarray) -> float:
    """
    대칭 가중 행렬 W 에 대한 modularity (집약 그래프용)

    대각 원소는 커뮤니티 내부 간선 가중치의 두 배로 저장된다.
    """
    total = float(w.sum())
    if total == 0.0:
        raise MetricUndefinedError("Modularity is undefined on graphs without edges")
    coo = w.tocoo()
    same = labels[coo.row] == labels[coo.col]
    size = int(labels.max()) + 1
    internal = np.bincount(labels[coo.row[same]], weights=coo.data[same], minlength=size)
    strength = np.asarray(w.sum(axis=1)).ravel()
    tot = np.bincount(labels, weights=strength, minlength=size)
    return float(np.sum(internal / total - (tot / total) ** 2))

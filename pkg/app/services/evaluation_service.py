"""
분할 유사도

NMI = -2 Σ N_ij log(N_ij N / N_i. N_.j) / [Σ N_i. log(N_i. / N) + Σ N_.j log(N_.j / N)] (자연로그).
"""
import math

import numpy as np
from scipy import sparse

from app.errors import PartitionMismatchError
from app.models.evaluation import ConfusionMatrix
from app.models.partition import Partition


def confusion_matrix(a: Partition, b: Partition) -> ConfusionMatrix:
    if a.n != b.n:
        raise PartitionMismatchError("Partitions cover different node sets", left_n=a.n, right_n=b.n)
    counts = sparse.coo_matrix(
        (np.ones(a.n, dtype=np.int64), (a.membership, b.membership)),
        shape=(a.num_communities, b.num_communities),
    ).tocsr()
    counts.sum_duplicates()
    return ConfusionMatrix(counts)


def _entropy_term(marginals: np.ndarray, total: int) -> float:
    """Σ N_i log(N_i / N)"""
    return math.fsum(float(x) * math.log(x / total) for x in marginals.tolist() if x > 0)


def nmi(a: Partition, b: Partition) -> float:
    """
    정규화 상호정보량

    커뮤니티 이름만 다른 동일 분할이면 정확히 1.0.
    분모가 0 인 경우 (양쪽 모두 단일 블록 또는 모두 싱글톤) 는 동일하면 1, 아니면 0.
    """
    if a.n != b.n:
        raise PartitionMismatchError("Partitions cover different node sets", left_n=a.n, right_n=b.n)
    if a.n < 2:
        raise PartitionMismatchError("NMI needs at least two nodes", n=a.n)
    if a.same_as(b):
        return 1.0

    cm = confusion_matrix(a, b)
    total = cm.total
    rows, cols, values = cm.nonzero_cells()
    row_sums, col_sums = cm.row_sums, cm.column_sums
    numerator = -2.0 * math.fsum(
        float(v) * math.log(float(v) * total / (float(row_sums[i]) * float(col_sums[j])))
        for i, j, v in zip(rows.tolist(), cols.tolist(), values.tolist())
    )
    denominator = _entropy_term(row_sums, total) + _entropy_term(col_sums, total)
    if denominator == 0.0:
        return 0.0
    return float(min(1.0, max(0.0, numerator / denominator)))

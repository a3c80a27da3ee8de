"""
Markov Cluster (MCL)

자기 루프를 더한 인접행렬을 열 정규화한 흐름 행렬에 확장 (행렬 거듭제곱 e) 과
팽창 (원소별 r 제곱 후 열 재정규화) 을 번갈아 적용한다.
수렴한 행렬의 0 이 아닌 패턴을 무방향으로 보고 연결 성분을 커뮤니티로 읽는다.
"""
import logging

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from app.errors import ConvergenceError, DetectionError
from app.models.detection import DetectionResult, FlowMatrix
from app.models.graph import Graph
from app.models.partition import Partition

logger = logging.getLogger(__name__)

CONVERGENCE_TOL = 1e-8


def _normalize_columns(matrix: sparse.csc_matrix) -> sparse.csc_matrix:
    sums = np.asarray(matrix.sum(axis=0)).ravel()
    scale = np.divide(1.0, sums, out=np.zeros_like(sums), where=sums > 0)
    return (matrix @ sparse.diags(scale)).tocsc()


def flow_matrix(g: Graph) -> FlowMatrix:
    """(A + I) 의 열 정규화"""
    with_loops = (g.adjacency + sparse.identity(g.n, format="csr")).tocsc()
    return FlowMatrix(_normalize_columns(with_loops))


def expand(matrix: sparse.csc_matrix, e: int) -> sparse.csc_matrix:
    result = matrix
    for _ in range(e - 1):
        result = result @ matrix
    return result.tocsc()


def inflate(
    matrix: sparse.csc_matrix,
    r: float,
    eps: float,
    selection: int | None = None,
) -> sparse.csc_matrix:
    """원소별 r 제곱, 열 정규화, eps 미만 제거 (선택 시 열마다 상위 selection 개만 유지) 후 재정규화"""
    inflated = _normalize_columns(matrix.power(r).tocsc())
    inflated.data[inflated.data < eps] = 0.0
    if selection is not None:
        _keep_top_entries(inflated, selection)
    inflated.eliminate_zeros()
    return _normalize_columns(inflated)


def _keep_top_entries(matrix: sparse.csc_matrix, selection: int) -> None:
    indptr, data = matrix.indptr, matrix.data
    counts = np.diff(indptr)
    for column in np.flatnonzero(counts > selection).tolist():
        start, end = indptr[column], indptr[column + 1]
        values = data[start:end]
        # 같은 값이면 앞쪽 (작은 행 id) 을 남긴다
        order = np.argsort(-values, kind="stable")
        values[order[selection:]] = 0.0


def mcl_step(matrix: sparse.csc_matrix, e: int, r: float, eps: float, selection: int | None = None):
    return inflate(expand(matrix, e), r, eps, selection)


def _max_abs_difference(a: sparse.csc_matrix, b: sparse.csc_matrix) -> float:
    diff = (a - b).tocsc()
    return float(np.abs(diff.data).max()) if diff.nnz else 0.0


def attractor_components(matrix: sparse.csc_matrix) -> np.ndarray:
    pattern = (matrix != 0).astype(np.int8)
    _, labels = csgraph.connected_components(pattern, directed=True, connection="weak")
    return labels


def converge_flow(
    g: Graph,
    e: int = 2,
    r: float = 2.0,
    eps: float = 1e-6,
    max_iterations: int = 100,
    selection: int | None = None,
) -> tuple[sparse.csc_matrix, int]:
    """mcl_step(M) 와 M 의 최대 절대 차가 CONVERGENCE_TOL 미만인 M 과 그때까지의 반복 수"""
    current = flow_matrix(g).matrix
    change = float("inf")
    for iteration in range(1, max_iterations + 1):
        following = mcl_step(current, e, r, eps, selection)
        change = _max_abs_difference(following, current)
        logger.debug(f"markov_cluster iteration {iteration}: nnz={following.nnz} change={change:.3e}")
        if change < CONVERGENCE_TOL:
            return current, iteration
        current = following

    raise ConvergenceError(
        f"Markov clustering did not converge within {max_iterations} iterations",
        max_iterations=max_iterations,
        last_change=change,
    )


def markov_cluster(
    g: Graph,
    e: int = 2,
    r: float = 2.0,
    eps: float = 1e-6,
    max_iterations: int = 100,
    selection: int | None = None,
) -> DetectionResult:
    if e < 2:
        raise DetectionError("Expansion power must be at least 2", e=e)
    if r <= 1.0:
        raise DetectionError("Inflation power must be greater than 1", r=r)
    if max_iterations < 1:
        raise DetectionError("max_iterations must be at least 1", max_iterations=max_iterations)

    converged, iterations = converge_flow(g, e, r, eps, max_iterations, selection)
    partition = Partition.from_labels(attractor_components(converged))
    return DetectionResult(
        algorithm="markov-cluster",
        partition=partition,
        iterations=iterations,
        extra={"e": e, "r": r, "eps": eps, "selection": selection, "final_nnz": int(converged.nnz)},
    )

"""
Fast Greedy (CNM) 응집형 modularity 최적화

싱글톤에서 시작해 ΔQ 가 가장 큰 인접 커뮤니티 쌍을 병합한다.
ΔQ 는 커뮤니티별 행으로 보관하고, 각 행의 최댓값만 전역 최대 힙 (지연 무효화) 에 둔다.
행의 최댓값이 병합된 쌍을 가리키던 경우에만 그 행을 다시 훑는다.
동률이면 (작은 id, 큰 id) 가 사전식으로 가장 작은 쌍이 먼저다.
인접한 쌍이 남지 않을 때까지 병합하고 Q 가 최대인 지점에서 자른다.
"""
import heapq
import logging

import numpy as np

from app.models.detection import DetectionResult, MergeDendrogram, MergeStep
from app.models.graph import Graph
from app.models.partition import Partition

logger = logging.getLogger(__name__)

# (-ΔQ, 작은 id, 큰 id): 작을수록 먼저 병합
PairKey = tuple[float, int, int]


def fast_greedy(g: Graph) -> DetectionResult:
    n = g.n
    if g.m == 0:
        return DetectionResult(algorithm="fast-greedy", partition=Partition.singletons(n))

    two_m = 2.0 * g.m
    a = (g.degrees / two_m).tolist()
    # dq[i][j] = 2 (e_ij - a_i a_j), 인접한 커뮤니티 쌍만 보관
    dq: list[dict[int, float]] = [dict() for _ in range(n)]
    for u, v in g.edges.tolist():
        value = 2.0 * (1.0 / two_m - a[u] * a[v])
        dq[u][v] = value
        dq[v][u] = value

    top: list[PairKey | None] = [None] * n
    heap: list[tuple[PairKey, int]] = []

    def rescan(k: int) -> None:
        top[k] = min(((-v, min(k, c), max(k, c)) for c, v in dq[k].items()), default=None)
        if top[k] is not None:
            heapq.heappush(heap, (top[k], k))

    for u in range(n):
        rescan(u)

    alive = [True] * n
    q = -float(np.sum(np.asarray(a) ** 2))
    initial_q = q
    steps: list[MergeStep] = []

    while heap:
        key, row = heapq.heappop(heap)
        if not alive[row] or top[row] != key:
            continue
        neg_value, i, j = key
        value = -neg_value
        # i < j 이므로 i 가 살아남는다
        row_i, row_j = dq[i], dq[j]
        del row_i[j]
        del row_j[i]
        for k in sorted(set(row_i) | set(row_j)):
            if k in row_i and k in row_j:
                updated = row_i[k] + row_j[k]
            elif k in row_i:
                updated = row_i[k] - 2.0 * a[j] * a[k]
            else:
                updated = row_j[k] - 2.0 * a[i] * a[k]
            row_i[k] = updated
            dq[k][i] = updated
            dq[k].pop(j, None)
            current = top[k]
            if current[1] in (i, j) or current[2] in (i, j):
                rescan(k)
            else:
                candidate = (-updated, min(i, k), max(i, k))
                if candidate < current:
                    top[k] = candidate
                    heapq.heappush(heap, (candidate, k))
        dq[j] = {}
        top[j] = None
        alive[j] = False
        a[i] += a[j]
        a[j] = 0.0
        rescan(i)
        q += value
        steps.append(MergeStep(a=i, b=j, objective=q))

    objectives = np.asarray([initial_q] + [s.objective for s in steps])
    cut = int(np.argmax(objectives))
    dendrogram = MergeDendrogram(n=n, initial_objective=initial_q, steps=steps, cut=cut)
    logger.debug(f"fast_greedy: merges={len(steps)} cut={cut} Q={objectives[cut]:.6f}")
    return DetectionResult(
        algorithm="fast-greedy",
        partition=dendrogram.partition_at(cut),
        objective=float(objectives[cut]),
        objective_name="modularity",
        dendrogram=dendrogram,
    )

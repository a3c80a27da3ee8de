import numpy as np
import pytest

from app.errors import DetectionError
from app.models.graph import Graph, build_graph
from app.models.partition import Partition
from app.services.detection.fast_greedy import fast_greedy
from app.services.detection.modularity import modularity
from tests.conftest import random_graph


def full_scan_merges(g: Graph) -> list[tuple[int, int]]:
    """매 단계 모든 인접 쌍을 훑어 (ΔQ 최대, 사전식 최소) 쌍을 고르는 단순 구현"""
    two_m = 2.0 * g.m
    a = (g.degrees / two_m).tolist()
    dq: list[dict[int, float]] = [dict() for _ in range(g.n)]
    for u, v in g.edges.tolist():
        dq[u][v] = dq[v][u] = 2.0 * (1.0 / two_m - a[u] * a[v])
    merges = []
    while True:
        keys = [(-value, i, j) for i in range(g.n) for j, value in dq[i].items() if i < j]
        if not keys:
            return merges
        _, i, j = min(keys)
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
        dq[j] = {}
        a[i] += a[j]
        a[j] = 0.0
        merges.append((i, j))


class TestFastGreedy:
    def test_bridged_triangles(self, bridged_triangles, triangle_partition):
        """다리로 이어진 두 삼각형과 그 modularity"""
        result = fast_greedy(bridged_triangles)
        assert result.partition.same_as(triangle_partition)
        assert result.objective == pytest.approx(2 * (3 / 7 - 0.25), abs=1e-12)
        assert result.objective_name == "modularity"

    def test_single_edge(self):
        """간선 하나는 한 커뮤니티, Q = 0"""
        result = fast_greedy(build_graph(2, [(0, 1)]))
        assert result.partition.num_communities == 1
        assert result.objective == pytest.approx(0.0, abs=1e-15)

    def test_two_cliques(self, bridged_cliques):
        """다리로 이어진 두 K5"""
        result = fast_greedy(bridged_cliques)
        assert result.partition.same_as(Partition([0] * 5 + [1] * 5))

    def test_triangle_ring(self, triangle_ring):
        """삼각형 네 개의 고리는 삼각형 네 개, Q = 0.5"""
        result = fast_greedy(triangle_ring)
        assert result.partition.same_as(Partition(np.repeat(np.arange(4), 3)))
        assert result.objective == pytest.approx(0.5, abs=1e-12)

    def test_disconnected_components_stay_apart(self, two_triangles, triangle_partition):
        """연결 요소를 넘어 병합하지 않는다"""
        result = fast_greedy(two_triangles)
        assert result.partition.same_as(triangle_partition)
        # 인접한 쌍이 없으면 병합이 멈춘다
        assert len(result.dendrogram.steps) == 4

    def test_no_edges(self):
        """간선이 없으면 모두 단독 커뮤니티"""
        result = fast_greedy(build_graph(3, []))
        assert result.partition == Partition.singletons(3)
        assert result.dendrogram is None

    @pytest.mark.parametrize("seed", [3, 8, 13, 21])
    def test_same_merges_as_full_scan(self, seed):
        """행 최댓값 힙은 전체 쌍을 훑는 선택과 같은 순서로 병합한다"""
        g = random_graph(45, 0.12, np.random.default_rng(seed))
        steps = fast_greedy(g).dendrogram.steps
        assert [(s.a, s.b) for s in steps] == full_scan_merges(g)

    def test_same_merges_as_full_scan_with_ties(self, triangle_ring):
        """동률이 많은 그래프에서도 사전식 순서를 지킨다"""
        steps = fast_greedy(triangle_ring).dendrogram.steps
        assert [(s.a, s.b) for s in steps] == full_scan_merges(triangle_ring)


class TestDendrogram:
    def test_objectives_match_recomputed_modularity(self):
        """각 병합 단계의 Q 는 그 절단의 modularity 와 같다"""
        rng = np.random.default_rng(21)
        g = random_graph(40, 0.12, rng)
        dendrogram = fast_greedy(g).dendrogram
        for cut, objective in enumerate(dendrogram.objectives.tolist()):
            assert objective == pytest.approx(modularity(g, dendrogram.partition_at(cut)), abs=1e-10)

    def test_cut_is_argmax(self, triangle_ring):
        """절단 지점은 Q 최대"""
        dendrogram = fast_greedy(triangle_ring).dendrogram
        assert dendrogram.cut == int(np.argmax(dendrogram.objectives))
        assert dendrogram.partition_at(0) == Partition.singletons(12)

    def test_survivor_is_smaller_id(self, bridged_triangles):
        """병합 후 남는 id 는 작은 쪽"""
        for step in fast_greedy(bridged_triangles).dendrogram.steps:
            assert step.a < step.b

    def test_cut_outside_range(self, bridged_triangles):
        """범위를 벗어난 절단은 DetectionError"""
        dendrogram = fast_greedy(bridged_triangles).dendrogram
        with pytest.raises(DetectionError):
            dendrogram.partition_at(len(dendrogram.steps) + 1)

    def test_relabeled_graph_gives_relabeled_cliques(self, bridged_cliques):
        """노드 번호를 바꾸면 결과도 같이 바뀐다"""
        permutation = np.array([9, 3, 7, 1, 5, 0, 8, 2, 6, 4])
        edges = [(int(permutation[u]), int(permutation[v])) for u, v in bridged_cliques.edge_list()]
        relabeled = fast_greedy(build_graph(10, edges))
        expected = Partition([0] * 5 + [1] * 5).relabel_nodes(permutation)
        assert relabeled.partition.same_as(expected)

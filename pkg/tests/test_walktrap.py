import numpy as np
import pytest

from app.errors import DetectionError
from app.models.graph import build_graph
from app.models.partition import Partition
from app.services.detection.modularity import modularity
from app.services.detection.walktrap import _VectorStore, _WalkOperator, walk_distance, walktrap
from tests.conftest import random_graph


class TestWalkDistance:
    def test_equivalent_nodes(self, star):
        """구조적으로 같은 잎 노드 사이 거리는 0"""
        assert walk_distance(star, 1, 2) == pytest.approx(0.0, abs=1e-12)

    def test_positive_for_hub_and_leaf(self, star):
        """허브와 잎 노드는 구분된다"""
        assert walk_distance(star, 0, 1, t=3) > 0.0


class TestVectorStore:
    def test_merged_vector_is_size_weighted_mean(self, bridged_triangles):
        """병합 벡터는 구성원으로부터 직접 구한 벡터와 같다"""
        operator = _WalkOperator(bridged_triangles, 3)
        store = _VectorStore(operator, block_size=2)
        store.merge(0, 1, 1, 1)
        merged = store.merge(0, 2, 2, 1)
        assert np.allclose(merged, operator.community_vector([0, 1, 2]), atol=1e-6)

    def test_only_live_communities_kept(self, bridged_triangles):
        """흡수된 커뮤니티의 벡터는 버린다"""
        store = _VectorStore(_WalkOperator(bridged_triangles, 3), block_size=4)
        store.merge(0, 1, 1, 1)
        store.merge(0, 2, 2, 1)
        assert set(store.vectors) == {0}
        assert store.vectors[0].dtype == np.float32

    def test_node_vectors_match_single_member_vector(self, bridged_triangles):
        """블록으로 구한 노드 벡터는 노드 하나짜리 커뮤니티 벡터와 같다"""
        operator = _WalkOperator(bridged_triangles, 4)
        rows = operator.node_vectors([5, 2])
        assert np.allclose(rows[0], operator.community_vector([5]))
        assert np.allclose(rows[1], operator.community_vector([2]))


class TestWalktrap:
    def test_bridged_triangles(self, bridged_triangles, triangle_partition):
        """다리로 이어진 두 삼각형을 찾는다"""
        result = walktrap(bridged_triangles, t=4)
        assert result.partition.same_as(triangle_partition)
        assert result.extra["t"] == 4

    def test_k4_single_community(self, k4):
        """완전 그래프는 한 커뮤니티"""
        assert walktrap(k4).partition.num_communities == 1

    def test_two_cliques(self, bridged_cliques):
        """다리로 이어진 두 K5"""
        assert walktrap(bridged_cliques).partition.same_as(Partition([0] * 5 + [1] * 5))

    def test_objectives_match_recomputed_modularity(self):
        """각 병합 단계의 Q 는 그 절단의 modularity 와 같다"""
        g = random_graph(35, 0.15, np.random.default_rng(4))
        dendrogram = walktrap(g).dendrogram
        for cut, objective in enumerate(dendrogram.objectives.tolist()):
            assert objective == pytest.approx(modularity(g, dendrogram.partition_at(cut)), abs=1e-10)

    def test_block_size_does_not_change_result(self):
        """블록 폭은 메모리만 바꾸고 병합 순서는 같다"""
        g = random_graph(50, 0.1, np.random.default_rng(12))
        wide = walktrap(g, block_size=64)
        narrow = walktrap(g, block_size=7)
        assert narrow.dendrogram.steps == wide.dendrogram.steps
        assert narrow.partition == wide.partition

    def test_invalid_walk_length(self, k4):
        """t 는 1 이상"""
        with pytest.raises(DetectionError):
            walktrap(k4, t=0)

    def test_no_edges(self):
        """간선이 없으면 모두 단독 커뮤니티"""
        assert walktrap(build_graph(3, [])).partition == Partition.singletons(3)

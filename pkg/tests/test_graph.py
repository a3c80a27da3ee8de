"""그래프와 분할 자료구조 테스트"""
import networkx as nx
import numpy as np
import pytest

from app.errors import GraphValidationError, PartitionMismatchError
from app.models.graph import (
    UNREACHABLE,
    build_graph,
    induced_subgraph,
    pairwise_distances_within,
    sampled_distances_within,
)
from app.models.partition import (
    Partition,
    connected_components,
    external_degree,
    internal_degree,
    internal_degrees,
)
from tests.conftest import random_graph


class TestBuildGraph:
    """build_graph 검증과 정규화"""

    def test_edges_are_canonical_and_sorted(self):
        """간선은 (u < v) 로 정렬"""
        g = build_graph(4, [(3, 1), (2, 0), (0, 1)])
        assert g.edge_list() == [(0, 1), (0, 2), (1, 3)]
        assert g.m == 3
        assert g.degrees.tolist() == [2, 2, 1, 1]

    def test_neighbors_sorted(self):
        """이웃 목록은 정렬"""
        g = build_graph(5, [(4, 0), (0, 2), (1, 0)])
        assert g.neighbors(0).tolist() == [1, 2, 4]
        assert g.has_edge(2, 0)
        assert not g.has_edge(2, 4)

    def test_self_loop_rejected(self):
        """self-loop 거부"""
        with pytest.raises(GraphValidationError):
            build_graph(3, [(1, 1)])

    def test_duplicate_edge_rejected(self):
        """(0, 1) 과 (1, 0) 은 같은 간선"""
        with pytest.raises(GraphValidationError) as info:
            build_graph(3, [(0, 1), (1, 0)])
        assert info.value.detail["pair"] == [0, 1]

    def test_out_of_range_rejected(self):
        """범위 밖 노드 거부"""
        with pytest.raises(GraphValidationError):
            build_graph(3, [(0, 3)])

    def test_empty_graph(self):
        """간선 없는 그래프"""
        g = build_graph(3, [])
        assert g.m == 0
        assert g.degrees.tolist() == [0, 0, 0]

    def test_graph_is_read_only(self, k4):
        """그래프 배열은 읽기 전용"""
        with pytest.raises(ValueError):
            k4.edges[0, 0] = 3


class TestPartition:
    """Partition 생성과 정규화"""

    def test_from_labels_first_appearance_order(self):
        """라벨은 첫 등장 순서로 번호를 매긴다"""
        p = Partition.from_labels(["b", "a", "b", "c"])
        assert p.membership.tolist() == [0, 1, 0, 2]
        assert p.sizes.tolist() == [2, 1, 1]

    def test_non_contiguous_ids_rejected(self):
        """비어 있는 커뮤니티 id 거부"""
        with pytest.raises(PartitionMismatchError):
            Partition([0, 2, 2])

    def test_overlapping_communities_rejected(self):
        """겹치는 커뮤니티 거부"""
        with pytest.raises(PartitionMismatchError):
            Partition.from_communities(3, [[0, 1], [1, 2]])

    def test_missing_node_rejected(self):
        """커뮤니티가 없는 노드 거부"""
        with pytest.raises(PartitionMismatchError):
            Partition.from_communities(3, [[0, 1]])

    def test_same_as_ignores_community_names(self):
        """same_as 는 커뮤니티 이름을 무시"""
        assert Partition([1, 1, 0]).same_as(Partition([0, 0, 1]))
        assert not Partition([0, 0, 1]).same_as(Partition([0, 1, 1]))

    def test_communities_listing(self):
        """커뮤니티별 노드 목록"""
        p = Partition([1, 0, 1, 0])
        assert [c.tolist() for c in p.communities] == [[1, 3], [0, 2]]


class TestDegrees:
    """내부/외부 차수"""

    def test_bridge_node(self, bridged_triangles, triangle_partition):
        """다리 노드의 내부/외부 차수"""
        assert internal_degree(bridged_triangles, triangle_partition, 2) == 2
        assert external_degree(bridged_triangles, triangle_partition, 2) == 1
        assert internal_degrees(bridged_triangles, triangle_partition).tolist() == [2, 2, 2, 2, 2, 2]

    def test_partition_size_mismatch(self, k4):
        """노드 수가 다른 분할"""
        with pytest.raises(PartitionMismatchError):
            internal_degrees(k4, Partition([0, 0, 0]))


class TestStructure:
    """부분그래프, 연결 요소, 거리"""

    def test_induced_subgraph_relabels(self, bridged_triangles):
        """유도 부분그래프는 0.. 로 재번호"""
        sub, nodes = induced_subgraph(bridged_triangles, [5, 2, 3])
        assert nodes.tolist() == [2, 3, 5]
        assert sub.edge_list() == [(0, 1), (1, 2)]

    def test_connected_components(self, two_triangles):
        """연결 요소"""
        assert connected_components(two_triangles).same_as(Partition([0, 0, 0, 1, 1, 1]))

    def test_distances_match_networkx(self):
        """networkx 최단거리와 비교"""
        rng = np.random.default_rng(3)
        for _ in range(20):
            g = random_graph(12, 0.25, rng)
            nodes = np.flatnonzero(rng.random(12) < 0.6)
            if nodes.size < 2:
                continue
            table = pairwise_distances_within(g, nodes)
            reference = nx.Graph()
            reference.add_nodes_from(nodes.tolist())
            reference.add_edges_from(e for e in g.edge_list() if e[0] in nodes and e[1] in nodes)
            lengths = dict(nx.all_pairs_shortest_path_length(reference))
            for u in nodes.tolist():
                for v in nodes.tolist():
                    expected = lengths[u].get(v, UNREACHABLE)
                    assert table.distance(u, v) == expected

    def test_unreachable_pairs_marked(self, two_triangles):
        """도달 불가 쌍 표시"""
        table = pairwise_distances_within(two_triangles, [0, 1, 3])
        assert table.distance(0, 1) == 1
        assert table.distance(0, 3) == UNREACHABLE

    def test_sampled_distances_cover_all_sources(self, path4):
        """출발점 수가 노드 수 이상이면 모든 순서쌍 거리"""
        values = sampled_distances_within(path4, range(4), 10, np.random.default_rng(0))
        assert sorted(values.tolist()) == sorted([1, 2, 3, 1, 1, 2, 2, 1, 1, 3, 2, 1])

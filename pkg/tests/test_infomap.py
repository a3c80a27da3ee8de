import numpy as np
import pytest

from app.errors import MetricUndefinedError, PartitionMismatchError
from app.models.graph import build_graph
from app.models.partition import Partition
from app.services.detection.infomap import infomap, map_equation
from tests.conftest import random_graph


@pytest.fixture
def cycle4():
    return build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


class TestMapEquation:
    def test_single_module_on_cycle(self, cycle4):
        """C4 한 모듈은 2 bit"""
        # 방문율이 모두 1/4 이므로 엔트로피 2 bit
        assert map_equation(cycle4, Partition.single_block(4)) == pytest.approx(2.0, abs=1e-12)

    def test_singletons_not_shorter_on_clique(self, k4):
        """K4 에서 단독 모듈은 한 모듈보다 짧지 않다"""
        assert map_equation(k4, Partition.singletons(4)) == pytest.approx(4.0, abs=1e-12)
        assert map_equation(k4, Partition.singletons(4)) >= map_equation(k4, Partition.single_block(4))

    def test_two_cliques_shorter_than_one_module(self, bridged_cliques):
        """두 K5 분할이 한 모듈보다 짧다"""
        cliques = Partition([0] * 5 + [1] * 5)
        assert map_equation(bridged_cliques, cliques) < map_equation(bridged_cliques, Partition.single_block(10))

    def test_undefined_cases(self, two_triangles, triangle_partition, k4):
        """정의되지 않는 입력"""
        with pytest.raises(MetricUndefinedError):
            map_equation(two_triangles, triangle_partition)
        with pytest.raises(MetricUndefinedError):
            map_equation(build_graph(2, []), Partition.singletons(2))
        with pytest.raises(PartitionMismatchError):
            map_equation(k4, Partition.singletons(3))


class TestInfomap:
    def test_two_cliques(self, bridged_cliques):
        """다리로 이어진 두 K5"""
        result = infomap(bridged_cliques)
        assert result.partition.same_as(Partition([0] * 5 + [1] * 5))
        assert result.objective == pytest.approx(map_equation(bridged_cliques, result.partition), abs=1e-12)
        assert result.objective_name == "codelength"

    def test_never_longer_than_one_module(self):
        """한 모듈보다 길어지지 않는다"""
        rng = np.random.default_rng(30)
        for _ in range(5):
            g = random_graph(30, 0.3, rng)
            if int(np.max(g.degrees)) == 0 or int(np.min(g.degrees)) == 0:
                continue
            result = infomap(g, seed=3, trials=3)
            if result.objective is None:
                continue
            assert result.objective <= map_equation(g, Partition.single_block(30)) + 1e-12

    def test_triangle_ring(self, triangle_ring):
        """삼각형 네 개의 고리는 삼각형 네 개의 모듈"""
        result = infomap(triangle_ring)
        assert result.partition.same_as(Partition(np.repeat(np.arange(4), 3)))
        assert result.objective < map_equation(triangle_ring, Partition.single_block(12))

    def test_disconnected_graph_per_component(self, two_triangles, triangle_partition):
        """연결 요소별로 따로 돈다"""
        result = infomap(two_triangles)
        assert result.partition.same_as(triangle_partition)
        assert result.objective is None
        assert len(result.extra["component_codelengths"]) == 2

    def test_seeded_trials_deterministic(self, triangle_ring):
        """같은 시드는 같은 결과"""
        first = infomap(triangle_ring, seed=5, trials=4)
        second = infomap(triangle_ring, seed=5, trials=4)
        assert first.partition == second.partition
        assert first.objective == second.objective

    def test_no_edges(self):
        """간선이 없으면 모두 단독 모듈"""
        assert infomap(build_graph(3, [])).partition == Partition.singletons(3)

"""
테스트 공통 fixture

작은 고정 그래프 (정답을 손으로 계산할 수 있는 것) 와
빠르게 돌릴 수 있는 소형 생성기 설정을 제공한다.
"""
import numpy as np
import pytest

from app.models.graph import Graph, build_graph
from app.models.partition import Partition
from app.schemas.generator import GeneratorConfig, MixingSpec


def clique_edges(nodes):
    nodes = list(nodes)
    return [(a, b) for i, a in enumerate(nodes) for b in nodes[i + 1:]]


@pytest.fixture
def two_triangles() -> Graph:
    """서로 떨어진 삼각형 두 개 (0-1-2, 3-4-5)"""
    return build_graph(6, clique_edges(range(3)) + clique_edges(range(3, 6)))


@pytest.fixture
def bridged_triangles() -> Graph:
    """삼각형 두 개를 간선 (2, 3) 으로 연결"""
    return build_graph(6, clique_edges(range(3)) + clique_edges(range(3, 6)) + [(2, 3)])


@pytest.fixture
def bridged_cliques() -> Graph:
    """K5 두 개를 간선 (4, 5) 로 연결"""
    return build_graph(10, clique_edges(range(5)) + clique_edges(range(5, 10)) + [(4, 5)])


@pytest.fixture
def triangle_ring() -> Graph:
    """삼각형 네 개를 고리 모양으로 연결 (2-3, 5-6, 8-9, 11-0)"""
    edges = []
    for t in range(4):
        edges += clique_edges(range(3 * t, 3 * t + 3))
    edges += [(2, 3), (5, 6), (8, 9), (0, 11)]
    return build_graph(12, edges)


@pytest.fixture
def star() -> Graph:
    """중심 0, 잎 1..4"""
    return build_graph(5, [(0, leaf) for leaf in range(1, 5)])


@pytest.fixture
def path4() -> Graph:
    return build_graph(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def k4() -> Graph:
    return build_graph(4, clique_edges(range(4)))


@pytest.fixture
def triangle_partition() -> Partition:
    return Partition([0, 0, 0, 1, 1, 1])


@pytest.fixture
def small_config() -> GeneratorConfig:
    """몇 초 안에 끝나는 생성기 설정"""
    return GeneratorConfig(
        n=300,
        mean_degree=10.0,
        k_max=40,
        gamma=3.0,
        beta=2.0,
        mixing=MixingSpec.uniform(0.0, 0.5),
        seed=7,
    )


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    upper = np.triu(rng.random((n, n)) < p, k=1)
    return build_graph(n, np.argwhere(upper))

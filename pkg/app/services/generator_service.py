import logging
from typing import Iterable

import numpy as np

from app.errors import GenerationError, InfeasibleAssignmentError, SamplingError
from app.models.graph import Graph, graph_from_edge_keys
from app.models.network import Assignment, GeneratedNetwork
from app.models.partition import Partition, internal_degrees
from app.run_logging import log_stage
from app.schemas.generator import (
    AssignmentReport,
    GeneratorConfig,
    PowerLawSpec,
    RewireReport,
    WiringReport,
)
from app.schemas.run import RealizedStats
from app.services.metrics_service import node_embeddedness
from app.services.sampling import (
    fit_power_law_exponent,
    make_even_degree_sum,
    sample_community_sizes,
    sample_mixing,
    sample_power_law,
    solve_k_min,
)

logger = logging.getLogger(__name__)

_SWAP_TRIES_PER_PAIR = 20
_PICK_RETRIES = 8
_IMPROVEMENT_EPS = 1e-12


class UniformStream:
    """rng.random 을 블록 단위로 미리 뽑아 하나씩 꺼내 쓰는 스트림 (결정적)"""

    def __init__(self, rng: np.random.Generator, block: int = 65536):
        self._rng = rng
        self._block = block
        self._buffer: list[float] = []
        self._position = 0

    def next(self) -> float:
        if self._position >= len(self._buffer):
            self._buffer = self._rng.random(self._block).tolist()
            self._position = 0
        value = self._buffer[self._position]
        self._position += 1
        return value

    def index(self, size: int) -> int:
        return min(int(self.next() * size), size - 1)


class EdgeStore:
    """O(1) 추가/삭제/임의 선택이 가능한 간선 집합 (키 = u * n + v, u < v)"""

    def __init__(self, n: int, keys: Iterable[int] = ()):
        self.n = n
        self._keys: list[int] = []
        self._position: dict[int, int] = {}
        for key in keys:
            self._append(int(key))

    def _key(self, u: int, v: int) -> int:
        return u * self.n + v if u < v else v * self.n + u

    def _append(self, key: int) -> None:
        self._position[key] = len(self._keys)
        self._keys.append(key)

    def __len__(self) -> int:
        return len(self._keys)

    def contains(self, u: int, v: int) -> bool:
        return self._key(u, v) in self._position

    def add(self, u: int, v: int) -> None:
        self._append(self._key(u, v))

    def remove(self, u: int, v: int) -> None:
        key = self._key(u, v)
        index = self._position.pop(key)
        last = self._keys.pop()
        if index < len(self._keys):
            self._keys[index] = last
            self._position[last] = index

    def random_edge(self, stream: UniformStream) -> tuple[int, int]:
        key = self._keys[stream.index(len(self._keys))]
        return key // self.n, key % self.n

    def keys(self) -> np.ndarray:
        return np.asarray(self._keys, dtype=np.int64)


def is_graphical(degrees: np.ndarray) -> bool:
    """Erdős–Gallai 조건"""
    degrees = np.asarray(degrees, dtype=np.int64)
    n = degrees.shape[0]
    if n == 0:
        return True
    if degrees.min() < 0 or int(degrees.sum()) % 2 or degrees.max() >= n:
        return False
    descending = np.sort(degrees)[::-1]
    ascending = descending[::-1]
    left = np.cumsum(descending)
    k = np.arange(1, n + 1, dtype=np.int64)
    ascending_prefix = np.concatenate([[0], np.cumsum(ascending)])
    # 가장 작은 n-k 개 차수에 대한 Σ min(d_i, k)
    below = np.searchsorted(ascending, k, side="left")
    rest = n - k
    split = np.minimum(below, rest)
    tail = ascending_prefix[split] + k * np.maximum(rest - below, 0)
    return bool(np.all(left <= k * (k - 1) + tail))


def wire_configuration_model(
    degree_seq: np.ndarray,
    rng: np.random.Generator,
    max_repair_rounds: int = 10,
) -> tuple[Graph, WiringReport]:
    """
    구성 모델 배선

    스텁을 무작위로 짝지은 뒤 self-loop 와 중복 간선을 골라내고,
    골라낸 짝은 직접 추가하거나 기존 간선과의 교환으로 수리한다.
    수리하지 못한 짝만 차수 편차로 남는다.
    """
    degrees = np.asarray(degree_seq, dtype=np.int64)
    n = degrees.shape[0]
    if int(degrees.sum()) % 2:
        raise GenerationError("Degree sequence must have an even sum", degree_sum=int(degrees.sum()))
    if not is_graphical(degrees):
        raise GenerationError("Degree sequence is not graphical", n=n, max_degree=int(degrees.max(initial=0)))

    stubs = rng.permutation(np.repeat(np.arange(n, dtype=np.int64), degrees))
    pairs = np.sort(stubs.reshape(-1, 2), axis=1)
    loops = pairs[:, 0] == pairs[:, 1]
    keys = pairs[:, 0] * n + pairs[:, 1]
    _, first = np.unique(np.where(loops, -1, keys), return_index=True)
    kept_mask = np.zeros(pairs.shape[0], dtype=bool)
    kept_mask[first] = True
    kept_mask &= ~loops
    duplicate_mask = ~kept_mask & ~loops

    store = EdgeStore(n, keys[kept_mask].tolist())
    broken = [(int(a), int(b)) for a, b in pairs[~kept_mask]]
    stream = UniformStream(rng)
    repaired = 0

    for _ in range(max_repair_rounds):
        if not broken:
            break
        remaining = []
        for a, b in broken:
            if a != b and not store.contains(a, b):
                store.add(a, b)
                repaired += 1
                continue
            if _swap_in_pair(store, a, b, stream):
                repaired += 1
            else:
                remaining.append((a, b))
        broken = remaining

    graph = graph_from_edge_keys(n, store.keys())
    report = WiringReport(
        requested_degree_sum=int(degrees.sum()),
        realized_degree_sum=int(graph.degrees.sum()),
        removed_self_loops=int(loops.sum()),
        removed_multi_edges=int(duplicate_mask.sum()),
        repaired_pairs=repaired,
        deviating_nodes=int(np.count_nonzero(graph.degrees != degrees)),
    )
    if broken:
        logger.warning(f"Configuration model left {len(broken)} stub pairs unrepaired")
    return graph, report


def _swap_in_pair(store: EdgeStore, a: int, b: int, stream: UniformStream) -> bool:
    """(a, b) 를 임의 기존 간선 (c, d) 와 교환해 (a, c), (b, d) 로 만든다"""
    if len(store) == 0:
        return False
    for _ in range(_SWAP_TRIES_PER_PAIR):
        c, d = store.random_edge(stream)
        if stream.next() < 0.5:
            c, d = d, c
        if a == c or b == d:
            continue
        if store.contains(a, c) or store.contains(b, d):
            continue
        if {a, c} == {b, d}:
            continue
        store.remove(c, d)
        store.add(a, c)
        store.add(b, d)
        return True
    return False


def wire_preferential_attachment(n: int, mean_degree: float, rng: np.random.Generator) -> Graph:
    """
    선호적 연결 (BA) 배선

    m = round(mean_degree / 2) (0.5 는 올림), 시드는 m + 1 개 노드의 완전그래프.
    새 노드는 기존 노드 m 개에 차수 비례 확률로 연결된다.
    """
    m = max(1, int(np.floor(mean_degree / 2.0 + 0.5)))
    m0 = m + 1
    if n <= m0:
        raise GenerationError("Preferential attachment needs more nodes than the seed clique", n=n, m0=m0)

    seed_edges = [(u, v) for u in range(m0) for v in range(u + 1, m0)]
    endpoint_count = 2 * (len(seed_edges) + m * (n - m0))
    endpoints = np.empty(endpoint_count, dtype=np.int64)
    filled = 0
    for u, v in seed_edges:
        endpoints[filled] = u
        endpoints[filled + 1] = v
        filled += 2

    keys = [u * n + v for u, v in seed_edges]
    stream = UniformStream(rng)
    for new_node in range(m0, n):
        targets: list[int] = []
        while len(targets) < m:
            target = int(endpoints[stream.index(filled)])
            if target not in targets:
                targets.append(target)
        for target in targets:
            keys.append(target * n + new_node)
            endpoints[filled] = target
            endpoints[filled + 1] = new_node
            filled += 2

    return graph_from_edge_keys(n, np.asarray(keys, dtype=np.int64))


def target_internal_degrees(degrees: np.ndarray, mu: np.ndarray) -> np.ndarray:
    """k_int = round((1 - μ) k), 0.5 는 올림"""
    raw = np.floor((1.0 - np.asarray(mu, dtype=np.float64)) * degrees + 0.5).astype(np.int64)
    return np.clip(raw, 0, degrees)


def assign_communities(
    g: Graph,
    sizes: np.ndarray,
    mu: np.ndarray,
    rng: np.random.Generator,
    clamp_to_largest: bool = False,
) -> Assignment:
    """
    크기 제약 (n_C >= k_int + 1) 을 지키는 무작위 배정

    필요 크기가 큰 노드부터 처리하고, 자격이 있는 커뮤니티의 남은 자리 중
    하나를 균등하게 고른다. clamp_to_largest 이면 가장 큰 커뮤니티에도
    들어갈 수 없는 노드의 k_int 를 (최대 크기 - 1) 로 자르고 기록한다.
    """
    sizes = np.asarray(sizes, dtype=np.int64)
    if int(sizes.sum()) != g.n:
        raise GenerationError("Community sizes must sum to the node count", total=int(sizes.sum()), n=g.n)

    targets = target_internal_degrees(g.degrees, mu)
    clamped: list[int] = []
    largest = int(sizes.max())
    if clamp_to_largest:
        over = np.flatnonzero(targets > largest - 1)
        targets[over] = largest - 1
        clamped = over.tolist()

    required = targets + 1
    order = np.lexsort((np.arange(g.n), -required))
    remaining = sizes.copy()
    labels = np.full(g.n, -1, dtype=np.int64)
    stream = UniformStream(rng)

    for u in order.tolist():
        weights = np.where(sizes >= required[u], remaining, 0)
        total = int(weights.sum())
        if total == 0:
            raise InfeasibleAssignmentError(
                f"Node {u} needs a community of size >= {int(required[u])}",
                node=u,
                internal_degree=int(targets[u]),
                required_size=int(required[u]),
            )
        pick = int(np.searchsorted(np.cumsum(weights), stream.next() * total, side="right"))
        community = min(pick, sizes.shape[0] - 1)
        labels[u] = community
        remaining[community] -= 1

    return Assignment(partition=Partition.from_labels(labels), internal_targets=targets, clamped_nodes=clamped)


def rewire_to_mixing(
    g: Graph,
    p: Partition,
    mu: np.ndarray,
    tolerance: float,
    max_sweeps: int,
    rng: np.random.Generator,
) -> tuple[Graph, RewireReport]:
    """
    차수를 보존하는 이중 간선 교환으로 노드별 μ 목표에 접근

    목표와 가장 멀리 떨어진 노드부터 교환을 시도하며, 영향을 받는 네 노드의
    |μ_realized - μ_target| 합이 줄어드는 교환만 수락한다.
    """
    n = g.n
    membership = p.membership.tolist()
    degree = g.degrees.tolist()
    mu_target = np.asarray(mu, dtype=np.float64).tolist()
    neighbor_lists: list[list[int]] = [g.neighbors(u).tolist() for u in range(n)]
    neighbor_sets: list[set[int]] = [set(row) for row in neighbor_lists]
    members: list[list[int]] = [c.tolist() for c in p.communities]
    sizes = p.sizes
    current = internal_degrees(g, p).tolist()
    goal = np.minimum(
        target_internal_degrees(g.degrees, mu),
        sizes[p.membership] - 1,
    ).tolist()
    stream = UniformStream(rng)

    def cost(node: int, internal: int) -> float:
        return abs(1.0 - internal / degree[node] - mu_target[node])

    def mean_error() -> float:
        values = [cost(u, current[u]) for u in range(n) if degree[u] > 0]
        return float(np.mean(values)) if values else 0.0

    def random_neighbor(node: int, internal: bool) -> int | None:
        row = neighbor_lists[node]
        for _ in range(_PICK_RETRIES):
            candidate = row[stream.index(len(row))]
            if (membership[candidate] == membership[node]) == internal:
                return candidate
        return None

    def random_partner(node: int, internal: bool) -> int | None:
        pool = members[membership[node]] if internal else None
        for _ in range(_PICK_RETRIES):
            candidate = pool[stream.index(len(pool))] if internal else stream.index(n)
            if candidate == node or candidate in neighbor_sets[node] or degree[candidate] == 0:
                continue
            if (membership[candidate] == membership[node]) == internal:
                return candidate
        return None

    def try_swap(u: int, more_internal: bool) -> bool:
        # (u, v), (x, y) -> (u, x), (v, y)
        v = random_neighbor(u, internal=not more_internal)
        if v is None:
            return False
        x = random_partner(u, internal=more_internal)
        if x is None:
            return False
        y = neighbor_lists[x][stream.index(len(neighbor_lists[x]))]
        if y == v or y == u or y in neighbor_sets[v]:
            return False

        change: dict[int, int] = {}
        for a, b, sign in ((u, v, -1), (x, y, -1), (u, x, 1), (v, y, 1)):
            if membership[a] == membership[b]:
                change[a] = change.get(a, 0) + sign
                change[b] = change.get(b, 0) + sign
        delta = sum(cost(w, current[w] + dk) - cost(w, current[w]) for w, dk in change.items())
        if delta >= -_IMPROVEMENT_EPS:
            return False

        for a, b in ((u, v), (x, y)):
            neighbor_lists[a].remove(b)
            neighbor_lists[b].remove(a)
            neighbor_sets[a].discard(b)
            neighbor_sets[b].discard(a)
        for a, b in ((u, x), (v, y)):
            neighbor_lists[a].append(b)
            neighbor_lists[b].append(a)
            neighbor_sets[a].add(b)
            neighbor_sets[b].add(a)
        for w, dk in change.items():
            current[w] += dk
        return True

    swaps = 0
    attempts = 0
    sweeps = 0
    error = mean_error()
    while error > tolerance and sweeps < max_sweeps:
        sweeps += 1
        pending = [u for u in range(n) if degree[u] > 0 and current[u] != goal[u]]
        pending.sort(key=lambda u: (-cost(u, current[u]), u))
        sweep_swaps = 0
        for u in pending:
            budget = 2 * abs(current[u] - goal[u]) + 2
            while budget > 0 and current[u] != goal[u]:
                budget -= 1
                attempts += 1
                if try_swap(u, more_internal=current[u] < goal[u]):
                    sweep_swaps += 1
        swaps += sweep_swaps
        error = mean_error()
        logger.debug(f"Rewire sweep {sweeps}: swaps={sweep_swaps} mean_abs_error={error:.5f}")
        if sweep_swaps == 0:
            break

    if swaps == 0:
        rewired = g
    else:
        keys = [u * n + v for u in range(n) for v in neighbor_lists[u] if u < v]
        rewired = graph_from_edge_keys(n, np.asarray(keys, dtype=np.int64))

    report = RewireReport(
        swaps=swaps,
        attempts=attempts,
        sweeps=sweeps,
        mean_abs_error=error,
        converged=error <= tolerance,
    )
    return rewired, report


def _exponent_fit(values: np.ndarray, low: int, high: int) -> float | None:
    try:
        return fit_power_law_exponent(values, low, high)
    except SamplingError:
        return None


def realized_stats(network: GeneratedNetwork) -> RealizedStats:
    """생성 결과 파일 (간선, membership, μ 표) 만으로 다시 계산할 수 있는 통계"""
    graph, cfg = network.graph, network.config
    degrees = graph.degrees
    sizes = network.reference.sizes
    low, high = cfg.size_bounds or (network.k_min, cfg.k_max)
    return RealizedStats(
        n=graph.n,
        m=graph.m,
        mean_degree=float(degrees.mean()),
        min_degree=int(degrees.min()),
        max_degree=int(degrees.max()),
        k_min=network.k_min,
        community_count=network.reference.num_communities,
        size_min=int(sizes.min()),
        size_max=int(sizes.max()),
        mean_abs_mu_error=float(np.mean(np.abs(network.mu_realized - network.mu_target))),
        clamped_nodes=len(network.assignment.clamped_nodes),
        degree_exponent_fit=_exponent_fit(degrees, network.k_min, cfg.k_max),
        size_exponent_fit=_exponent_fit(sizes, low, high),
    )


class GeneratorService:
    """LFR 생성 파이프라인: k_min -> 차수 -> 배선 -> 크기 -> 배정 -> 재배선"""

    def generate(self, cfg: GeneratorConfig) -> GeneratedNetwork:
        (degree_rng, wiring_rng, mixing_rng, size_rng, assign_rng, rewire_rng) = [
            np.random.default_rng(child) for child in np.random.SeedSequence(cfg.seed).spawn(6)
        ]

        with log_stage("generate.k_min", n=cfg.n, mean_degree=cfg.mean_degree, k_max=cfg.k_max) as stage:
            k_min = max(2, solve_k_min(cfg.mean_degree, cfg.gamma, cfg.k_max))
            stage.set(k_min=k_min)

        with log_stage("generate.wiring", wiring=cfg.wiring) as stage:
            if cfg.wiring == "configuration-model":
                degree_spec = PowerLawSpec(exponent=cfg.gamma, min=k_min, max=cfg.k_max)
                degrees = make_even_degree_sum(sample_power_law(cfg.n, degree_spec, degree_rng), cfg.k_max)
                graph, wiring = wire_configuration_model(degrees, wiring_rng, cfg.cm_max_repair_rounds)
            else:
                graph = wire_preferential_attachment(cfg.n, cfg.mean_degree, wiring_rng)
                total = int(graph.degrees.sum())
                wiring = WiringReport(requested_degree_sum=total, realized_degree_sum=total)
            stage.set(m=graph.m, deviating_nodes=wiring.deviating_nodes)

        isolated = np.flatnonzero(graph.degrees == 0)
        if isolated.size:
            raise GenerationError(
                "Wiring produced isolated nodes", isolated=int(isolated.size), first=int(isolated[0])
            )

        mu_target = sample_mixing(cfg.n, cfg.mixing, mixing_rng)
        low, high = cfg.size_bounds or (k_min, cfg.k_max)
        size_spec = PowerLawSpec(exponent=cfg.beta, min=low, max=high)

        assignment = None
        attempts = 0
        last_error: InfeasibleAssignmentError | None = None
        with log_stage("generate.assignment") as stage:
            for attempts in range(1, cfg.assignment_max_restarts + 1):
                sizes = sample_community_sizes(cfg.n, size_spec, size_rng)
                try:
                    assignment = assign_communities(graph, sizes, mu_target, assign_rng, clamp_to_largest=True)
                    break
                except InfeasibleAssignmentError as exc:
                    last_error = exc
                    logger.warning(f"Community assignment attempt {attempts} failed: {exc.message}")
            stage.set(attempts=attempts)
            if assignment is None:
                raise InfeasibleAssignmentError(
                    f"Community assignment failed after {attempts} attempts",
                    attempts=attempts,
                    **(last_error.detail if last_error else {}),
                )
            stage.set(communities=assignment.partition.num_communities, clamped=len(assignment.clamped_nodes))

        reference = assignment.partition
        with log_stage("generate.rewiring", tolerance=cfg.rewire_tolerance) as stage:
            graph, rewiring = rewire_to_mixing(
                graph, reference, mu_target, cfg.rewire_tolerance, cfg.rewire_max_sweeps, rewire_rng
            )
            stage.set(swaps=rewiring.swaps, sweeps=rewiring.sweeps, mean_abs_error=round(rewiring.mean_abs_error, 6))
        if not rewiring.converged:
            logger.warning(
                f"Rewiring stopped at mean |mu error| {rewiring.mean_abs_error:.4f} "
                f"above tolerance {cfg.rewire_tolerance}"
            )

        mu_realized = 1.0 - node_embeddedness(graph, reference)
        sizes = reference.sizes
        return GeneratedNetwork(
            graph=graph,
            reference=reference,
            mu_target=mu_target,
            mu_realized=mu_realized,
            k_min=k_min,
            config=cfg,
            wiring=wiring,
            assignment=AssignmentReport(
                attempts=attempts,
                community_count=reference.num_communities,
                size_min=int(sizes.min()),
                size_max=int(sizes.max()),
                clamped_nodes=assignment.clamped_nodes,
            ),
            rewiring=rewiring,
            assignment_targets=assignment.internal_targets,
        )


generator_service = GeneratorService()

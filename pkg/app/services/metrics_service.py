"""
메조스코픽 속성 계산

노드 embeddedness, 커뮤니티 밀도/스케일 밀도/허브 지배도/평균 거리,
그리고 커뮤니티 크기에 대한 로그 구간 곡선과 히스토그램.
"""
import logging
from typing import Iterable, Sequence

import numpy as np

from app.errors import MetricUndefinedError, PartitionMismatchError
from app.models.graph import UNREACHABLE, Graph, pairwise_distances_within, sampled_distances_within
from app.models.partition import Partition, internal_degrees
from app.schemas.metrics import (
    PROFILE_PROPERTIES,
    BinnedCurve,
    CommunityProfile,
    CurveBin,
    HistogramBin,
    MetricOptions,
)

logger = logging.getLogger(__name__)

_BIN_EPS = 1e-12


def _check_cover(g: Graph, p: Partition) -> None:
    if g.n != p.n:
        raise PartitionMismatchError("Partition does not cover the graph node set", graph_n=g.n, partition_n=p.n)


def node_embeddedness(g: Graph, p: Partition) -> np.ndarray:
    """모든 노드의 k_int / k. 고립 노드는 NaN"""
    _check_cover(g, p)
    k_int = internal_degrees(g, p).astype(np.float64)
    out = np.full(g.n, np.nan, dtype=np.float64)
    connected = g.degrees > 0
    out[connected] = k_int[connected] / g.degrees[connected]
    return out


def embeddedness(g: Graph, p: Partition, u: int) -> float:
    _check_cover(g, p)
    if g.degree(u) == 0:
        raise MetricUndefinedError(f"Embeddedness is undefined for isolated node {u}", node=u)
    return float(node_embeddedness(g, p)[u])


def density(n_c: int, m_c: int) -> float:
    if n_c < 2:
        raise MetricUndefinedError("Density is undefined for singleton communities", size=n_c)
    return 2.0 * m_c / (n_c * (n_c - 1))


def scaled_density(n_c: int, m_c: int) -> float:
    if n_c < 2:
        raise MetricUndefinedError("Scaled density is undefined for singleton communities", size=n_c)
    return 2.0 * m_c / (n_c - 1)


def community_internal_edges(g: Graph, p: Partition) -> np.ndarray:
    """커뮤니티별 m_C"""
    _check_cover(g, p)
    left = p.membership[g.edges[:, 0]]
    same = left == p.membership[g.edges[:, 1]]
    return np.bincount(left[same], minlength=p.num_communities).astype(np.int64)


def _max_internal_degree(g: Graph, p: Partition) -> np.ndarray:
    result = np.zeros(p.num_communities, dtype=np.int64)
    np.maximum.at(result, p.membership, internal_degrees(g, p))
    return result


def hub_dominance(g: Graph, p: Partition, c: int) -> float:
    _check_cover(g, p)
    size = int(p.sizes[c])
    if size < 2:
        raise MetricUndefinedError("Hub dominance is undefined for singleton communities", community=c)
    members = p.community(c)
    return float(internal_degrees(g, p)[members].max()) / (size - 1)


def _distance_summary(
    g: Graph,
    members: np.ndarray,
    sample_sources: int | None = None,
    rng: np.random.Generator | None = None,
) -> tuple[float | None, bool]:
    """(도달 가능한 쌍의 평균 거리 또는 None, 내부 연결 여부)"""
    if sample_sources is not None:
        values = sampled_distances_within(g, members, sample_sources, rng)
    else:
        values = pairwise_distances_within(g, members).pair_distances()
    reachable = values[values != UNREACHABLE]
    connected = reachable.shape[0] == values.shape[0]
    if reachable.size == 0:
        return None, False
    return float(reachable.sum()) / reachable.shape[0], connected


def community_avg_distance(g: Graph, p: Partition, c: int) -> float:
    """커뮤니티 유도 부분그래프 안의 평균 최단거리 (도달 불가 쌍 제외)"""
    _check_cover(g, p)
    members = p.community(c)
    if members.shape[0] < 2:
        raise MetricUndefinedError("Average distance is undefined for singleton communities", community=c)
    mean, _ = _distance_summary(g, members)
    if mean is None:
        raise MetricUndefinedError("No pair of community members is connected", community=c)
    return mean


def profile_partition(
    g: Graph,
    p: Partition,
    options: MetricOptions | None = None,
) -> tuple[list[CommunityProfile], np.ndarray]:
    """커뮤니티별 프로파일과 노드별 embeddedness"""
    options = options or MetricOptions()
    _check_cover(g, p)
    sizes = p.sizes
    internal_edges = community_internal_edges(g, p)
    max_internal = _max_internal_degree(g, p)
    threshold = options.distance_sampling_threshold

    profiles = []
    for c, members in enumerate(p.communities):
        size = int(sizes[c])
        m_c = int(internal_edges[c])
        if size < 2:
            profiles.append(
                CommunityProfile(community=c, size=size, internal_edges=m_c, internally_connected=True)
            )
            continue

        sampled = threshold is not None and size > threshold
        if sampled:
            rng = np.random.default_rng([options.seed, c])
            avg_distance, connected = _distance_summary(g, members, options.distance_sample_sources, rng)
        else:
            avg_distance, connected = _distance_summary(g, members)

        profiles.append(
            CommunityProfile(
                community=c,
                size=size,
                internal_edges=m_c,
                density=density(size, m_c),
                scaled_density=scaled_density(size, m_c),
                avg_distance=avg_distance,
                hub_dominance=float(max_internal[c]) / (size - 1),
                internally_connected=connected,
                distance_sampled=sampled,
            )
        )

    return profiles, node_embeddedness(g, p)


def log_bin_index(sizes: np.ndarray, bins_per_decade: int) -> np.ndarray:
    """구간 [10^(i/b), 10^((i+1)/b)) 의 번호 i"""
    sizes = np.asarray(sizes, dtype=np.float64)
    return np.floor(np.log10(sizes) * bins_per_decade + _BIN_EPS).astype(np.int64)


def _bin_edges(index: int, bins_per_decade: int) -> tuple[float, float]:
    return 10.0 ** (index / bins_per_decade), 10.0 ** ((index + 1) / bins_per_decade)


def log_binned_curve(points: Iterable[Sequence[float]], bins_per_decade: int = 5) -> BinnedCurve:
    """(크기, 값) 점들을 로그 크기 구간별 평균으로 묶는다. 빈 구간은 생략"""
    data = np.asarray(list(points), dtype=np.float64).reshape(-1, 2)
    if data.size == 0:
        return BinnedCurve(bins_per_decade=bins_per_decade, bins=[])
    if (data[:, 0] < 1).any():
        raise MetricUndefinedError("Binned curves need sizes >= 1")

    index = log_bin_index(data[:, 0], bins_per_decade)
    bins = []
    for i in np.unique(index).tolist():
        values = data[index == i, 1]
        lower, upper = _bin_edges(i, bins_per_decade)
        bins.append(
            CurveBin(
                index=i,
                lower=lower,
                upper=upper,
                mean=float(values.mean()),
                std=float(values.std()),
                count=int(values.shape[0]),
            )
        )
    return BinnedCurve(bins_per_decade=bins_per_decade, bins=bins)


def profile_curves(profiles: Sequence[CommunityProfile], bins_per_decade: int = 5) -> dict[str, BinnedCurve]:
    """속성별 곡선. 정의되지 않은 값 (싱글톤, 도달 불가) 은 제외"""
    curves = {}
    for name in PROFILE_PROPERTIES:
        points = [(pr.size, pr.value(name)) for pr in profiles if pr.value(name) is not None]
        curves[name] = log_binned_curve(points, bins_per_decade)
    return curves


def size_distribution_curve(sizes: Sequence[int] | np.ndarray, bins_per_decade: int = 5) -> BinnedCurve:
    """
    커뮤니티 크기 분포: 구간별 (커뮤니티 비율 / 구간 폭)

    mean 필드에 밀도를, count 필드에 커뮤니티 수를 담는다.
    """
    sizes = np.asarray(sizes, dtype=np.float64)
    if sizes.size == 0:
        return BinnedCurve(bins_per_decade=bins_per_decade, bins=[])
    index = log_bin_index(sizes, bins_per_decade)
    total = sizes.shape[0]
    bins = []
    for i in np.unique(index).tolist():
        count = int(np.count_nonzero(index == i))
        lower, upper = _bin_edges(i, bins_per_decade)
        bins.append(
            CurveBin(
                index=i,
                lower=lower,
                upper=upper,
                mean=count / total / (upper - lower),
                std=0.0,
                count=count,
            )
        )
    return BinnedCurve(bins_per_decade=bins_per_decade, bins=bins)


def curve_deviation(a: BinnedCurve, b: BinnedCurve) -> float:
    """두 곡선의 구간별 |평균 차| 합. 한쪽에만 있는 구간은 상대를 0 으로 본다"""
    if a.bins_per_decade != b.bins_per_decade:
        raise MetricUndefinedError(
            "Curves use different binning", left=a.bins_per_decade, right=b.bins_per_decade
        )
    left, right = a.by_index(), b.by_index()
    total = 0.0
    for i in sorted(set(left) | set(right)):
        lv = left[i].mean if i in left else 0.0
        rv = right[i].mean if i in right else 0.0
        total += abs(lv - rv)
    return total


def embeddedness_histogram(values: np.ndarray, bins: int = 20) -> list[HistogramBin]:
    """[0, 1] 등폭 히스토그램. NaN (고립 노드) 은 제외, 1.0 은 마지막 구간에 포함"""
    values = np.asarray(values, dtype=np.float64)
    values = values[~np.isnan(values)]
    counts, edges = np.histogram(values, bins=bins, range=(0.0, 1.0))
    return [
        HistogramBin(lower=float(edges[i]), upper=float(edges[i + 1]), count=int(counts[i]))
        for i in range(bins)
    ]


def coarsen_curve(curve: BinnedCurve, min_count: int) -> BinnedCurve:
    """
    이웃한 구간을 앞에서부터 합쳐 각 구간의 표본 수가 min_count 이상이 되게 한다

    마지막에 모자라는 구간들은 바로 앞 구간에 합친다.
    합친 구간의 평균은 표본 수 가중 평균, 표준편차는 합동 (모집단) 표준편차다.
    """
    if min_count < 1:
        raise MetricUndefinedError("min_count must be at least 1", min_count=min_count)
    groups: list[list[CurveBin]] = []
    pending: list[CurveBin] = []
    for b in curve.bins:
        pending.append(b)
        if sum(x.count for x in pending) >= min_count:
            groups.append(pending)
            pending = []
    if pending:
        if groups:
            groups[-1].extend(pending)
        else:
            groups.append(pending)

    bins = []
    for group in groups:
        if len(group) == 1:
            bins.append(group[0])
            continue
        counts = np.asarray([b.count for b in group], dtype=np.float64)
        means = np.asarray([b.mean for b in group])
        stds = np.asarray([b.std for b in group])
        total = counts.sum()
        mean = float((counts * means).sum() / total)
        second_moment = float((counts * (stds**2 + means**2)).sum() / total)
        bins.append(
            CurveBin(
                index=group[0].index,
                lower=group[0].lower,
                upper=group[-1].upper,
                mean=mean,
                std=float(np.sqrt(max(second_moment - mean**2, 0.0))),
                count=int(total),
            )
        )
    return BinnedCurve(bins_per_decade=curve.bins_per_decade, bins=bins)

"""
유계 이산 멱법칙 표본추출

차수 수열과 커뮤니티 크기, 노드별 μ 를 뽑는다.
모든 함수는 명시적인 numpy Generator 를 받으며 같은 시드면 같은 결과를 낸다.
"""
import logging

import numpy as np
from scipy import optimize

from app.errors import SamplingError
from app.schemas.generator import MixingSpec, PowerLawSpec

logger = logging.getLogger(__name__)

MIN_COMMUNITY_SIZE = 2
_SIZE_DRAW_BATCH = 256


def power_law_support(spec: PowerLawSpec) -> tuple[np.ndarray, np.ndarray]:
    """(값, 확률) 표"""
    values = np.arange(spec.min, spec.max + 1, dtype=np.int64)
    weights = values.astype(np.float64) ** (-spec.exponent)
    return values, weights / weights.sum()


def truncated_mean(spec: PowerLawSpec) -> float:
    values, pmf = power_law_support(spec)
    return float(np.dot(values, pmf))


def power_law_cdf(spec: PowerLawSpec) -> tuple[np.ndarray, np.ndarray]:
    values, pmf = power_law_support(spec)
    cdf = np.cumsum(pmf)
    cdf[-1] = 1.0
    return values, cdf


def solve_k_min(target_mean: float, gamma: float, k_max: int) -> int:
    """
    E[K] 가 target_mean 에 가장 가까운 정수 k_min

    K ~ k^(-gamma), k ∈ [k_min, k_max]. 기댓값은 정확한 합으로 계산하며
    동률이면 작은 k_min 을 고른다.
    """
    if gamma <= 1.0:
        raise SamplingError("gamma must be greater than 1", gamma=gamma)
    if not 1.0 < target_mean < k_max:
        raise SamplingError(
            "target mean must satisfy 1 < target_mean < k_max", target_mean=target_mean, k_max=k_max
        )

    values = np.arange(1, k_max + 1, dtype=np.float64)
    weights = values ** (-gamma)
    # k_min 별 꼬리 합 (k_min..k_max)
    tail_mass = np.cumsum(weights[::-1])[::-1]
    tail_first_moment = np.cumsum((values * weights)[::-1])[::-1]
    means = tail_first_moment / tail_mass

    if k_max >= 2 and means[k_max - 2] < target_mean:
        raise SamplingError(
            "No power law on [k_min, k_max] reaches the target mean",
            target_mean=target_mean,
            k_max=k_max,
            best_mean=float(means[k_max - 2]),
        )

    k_min = int(np.argmin(np.abs(means - target_mean))) + 1
    logger.debug(f"solve_k_min: target={target_mean} gamma={gamma} k_max={k_max} -> k_min={k_min}")
    return k_min


def sample_power_law(count: int, spec: PowerLawSpec, rng: np.random.Generator) -> np.ndarray:
    """정확한 이산 CDF 역변환 표본추출"""
    values, cdf = power_law_cdf(spec)
    positions = np.searchsorted(cdf, rng.random(count), side="right")
    return values[np.minimum(positions, values.shape[0] - 1)]


def sample_community_sizes(n: int, spec: PowerLawSpec, rng: np.random.Generator) -> np.ndarray:
    """
    합이 정확히 n 인 커뮤니티 크기 수열

    누적합이 n 이상이 될 때까지 뽑고 마지막 값을 줄여 맞춘다.
    줄인 값이 하한보다 작으면 그 값을 버리고 모자란 만큼 가장 작은
    커뮤니티부터 1 씩 늘린다.
    """
    low = max(spec.min, MIN_COMMUNITY_SIZE)
    high = min(spec.max, n)
    if n < low:
        raise SamplingError("Node count is smaller than the minimum community size", n=n, min=low)
    if low > high:
        raise SamplingError("Community size bounds are empty after capping at n", min=low, max=high)
    bounded = PowerLawSpec(exponent=spec.exponent, min=low, max=high)

    sizes: list[int] = []
    total = 0
    while total < n:
        for size in sample_power_law(_SIZE_DRAW_BATCH, bounded, rng).tolist():
            sizes.append(size)
            total += size
            if total >= n:
                break

    gap = n - (total - sizes[-1])
    if gap >= low:
        sizes[-1] = gap
        return np.asarray(sizes, dtype=np.int64)

    sizes.pop()
    result = np.asarray(sizes, dtype=np.int64)
    for _ in range(gap):
        smallest = int(np.argmin(result))
        if result[smallest] >= high:
            raise SamplingError("Cannot close the size gap without exceeding the upper bound", n=n, max=high)
        result[smallest] += 1
    return result


def sample_mixing(count: int, spec: MixingSpec, rng: np.random.Generator) -> np.ndarray:
    if spec.kind == "constant":
        return np.full(count, float(spec.value), dtype=np.float64)
    if spec.kind == "uniform-range":
        if spec.low == spec.high:
            return np.full(count, float(spec.low), dtype=np.float64)
        return rng.uniform(spec.low, spec.high, size=count)
    probabilities = np.asarray([p for p, _ in spec.quantiles], dtype=np.float64)
    values = np.asarray([mu for _, mu in spec.quantiles], dtype=np.float64)
    return np.clip(np.interp(rng.random(count), probabilities, values), 0.0, 1.0)


def make_even_degree_sum(degrees: np.ndarray, k_max: int) -> np.ndarray:
    """차수 합이 홀수면 k_max 미만인 가장 작은 id 노드의 차수를 1 올린다"""
    degrees = np.array(degrees, dtype=np.int64)
    if int(degrees.sum()) % 2 == 0:
        return degrees
    candidates = np.flatnonzero(degrees < k_max)
    if candidates.size == 0:
        raise SamplingError("Every node already has the maximal degree", k_max=k_max)
    degrees[candidates[0]] += 1
    return degrees


def fit_power_law_exponent(values: np.ndarray, x_min: int, x_max: int) -> float:
    """[x_min, x_max] 로 잘린 이산 멱법칙의 최대우도 지수"""
    values = np.asarray(values, dtype=np.float64)
    values = values[(values >= x_min) & (values <= x_max)]
    if values.size < 2:
        raise SamplingError("Too few values inside the fit range", x_min=x_min, x_max=x_max)
    support = np.arange(x_min, x_max + 1, dtype=np.float64)
    log_support = np.log(support)
    log_sum = float(np.log(values).sum())

    def negative_log_likelihood(alpha: float) -> float:
        log_norm = np.logaddexp.reduce(-alpha * log_support)
        return alpha * log_sum + values.size * log_norm

    result = optimize.minimize_scalar(negative_log_likelihood, bounds=(1.0001, 10.0), method="bounded")
    return float(result.x)

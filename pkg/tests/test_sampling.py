"""멱법칙 표본추출과 k_min 풀이"""
import numpy as np
import pytest
from scipy import stats

from app.errors import SamplingError
from app.schemas.generator import MixingSpec, PowerLawSpec
from app.services.sampling import (
    fit_power_law_exponent,
    make_even_degree_sum,
    power_law_cdf,
    sample_community_sizes,
    sample_mixing,
    sample_power_law,
    solve_k_min,
    truncated_mean,
)


def exact_mean(k_min: int, gamma: float, k_max: int) -> float:
    values = np.arange(k_min, k_max + 1, dtype=np.float64)
    weights = values ** (-gamma)
    return float((values * weights).sum() / weights.sum())


class TestSolveKMin:
    def test_desk_configuration(self):
        """γ=3, k_max=1000 에서 되짚은 평균이 30 과 1 미만 차이"""
        k_min = solve_k_min(30.0, 3.0, 1000)
        assert abs(exact_mean(k_min, 3.0, 1000) - 30.0) < 1.0

    def test_is_best_candidate(self):
        """이웃 후보보다 목표 평균에 가깝다"""
        k_min = solve_k_min(12.0, 2.5, 200)
        best = min(range(1, 200), key=lambda k: (abs(exact_mean(k, 2.5, 200) - 12.0), k))
        assert k_min == best

    def test_unreachable_mean(self):
        """도달할 수 없는 평균"""
        with pytest.raises(SamplingError):
            solve_k_min(999.5, 3.0, 1000)

    def test_invalid_gamma(self):
        """지수는 1 보다 커야 한다"""
        with pytest.raises(SamplingError):
            solve_k_min(5.0, 1.0, 100)


class TestSamplePowerLaw:
    def test_point_mass(self):
        """범위가 한 점이면 그 값만"""
        spec = PowerLawSpec(exponent=3.0, min=5, max=5)
        assert sample_power_law(100, spec, np.random.default_rng(1)).tolist() == [5] * 100
        assert truncated_mean(spec) == 5.0

    def test_mean_and_cdf(self):
        """표본 평균과 분포"""
        spec = PowerLawSpec(exponent=3.0, min=2, max=100)
        draws = sample_power_law(100_000, spec, np.random.default_rng(2))
        assert draws.min() >= 2 and draws.max() <= 100
        assert abs(draws.mean() - truncated_mean(spec)) / truncated_mean(spec) < 0.05

        values, cdf = power_law_cdf(spec)
        empirical = np.searchsorted(np.sort(draws), values, side="right") / draws.shape[0]
        assert np.max(np.abs(empirical - cdf)) < 0.01

    def test_deterministic(self):
        """같은 시드는 같은 표본"""
        spec = PowerLawSpec(exponent=2.0, min=3, max=50)
        a = sample_power_law(1000, spec, np.random.default_rng(9))
        b = sample_power_law(1000, spec, np.random.default_rng(9))
        assert np.array_equal(a, b)


class TestCommunitySizes:
    def test_point_mass_sizes(self):
        """크기가 한 값으로 고정"""
        spec = PowerLawSpec(exponent=2.0, min=10, max=10)
        sizes = sample_community_sizes(100, spec, np.random.default_rng(0))
        assert sizes.tolist() == [10] * 10

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
    def test_sum_and_bounds(self, seed):
        """합은 n, 크기는 범위 안"""
        spec = PowerLawSpec(exponent=2.0, min=15, max=1000)
        sizes = sample_community_sizes(10_000, spec, np.random.default_rng(seed))
        assert int(sizes.sum()) == 10_000
        assert sizes.min() >= 15 and sizes.max() <= 1000

    def test_size_exponent_fit(self):
        """크기 분포 지수 추정"""
        fits = []
        for seed in range(5):
            spec = PowerLawSpec(exponent=2.0, min=15, max=1000)
            sizes = sample_community_sizes(10_000, spec, np.random.default_rng(seed))
            fits.append(fit_power_law_exponent(sizes, 15, 700))
        assert abs(np.mean(fits) - 2.0) < 0.5

    def test_too_few_nodes(self):
        """노드가 최소 크기보다 적다"""
        with pytest.raises(SamplingError):
            sample_community_sizes(5, PowerLawSpec(exponent=2.0, min=10, max=20), np.random.default_rng(0))

    def test_minimum_size_floor(self):
        """하한 1 을 요청해도 크기 1 커뮤니티는 만들지 않는다"""
        sizes = sample_community_sizes(500, PowerLawSpec(exponent=2.0, min=1, max=50), np.random.default_rng(5))
        assert sizes.min() >= 2
        assert int(sizes.sum()) == 500


class TestMixing:
    def test_constant(self):
        """상수 μ"""
        values = sample_mixing(4, MixingSpec.constant(0.3), np.random.default_rng(0))
        assert values.tolist() == [0.3, 0.3, 0.3, 0.3]

    def test_uniform_kolmogorov(self):
        """균등 μ 의 KS 검정"""
        values = sample_mixing(100_000, MixingSpec.uniform(0.0, 1.0), np.random.default_rng(0))
        assert stats.kstest(values, "uniform").statistic < 0.01

    def test_degenerate_quantile_table(self):
        """한 값짜리 분위수 표"""
        spec = MixingSpec(kind="empirical-quantile-table", quantiles=[(0.0, 0.5), (1.0, 0.5)])
        assert np.all(sample_mixing(50, spec, np.random.default_rng(0)) == 0.5)

    def test_invalid_quantile_table(self):
        """잘못된 분위수 표"""
        with pytest.raises(ValueError):
            MixingSpec(kind="empirical-quantile-table", quantiles=[(0.0, 0.6), (1.0, 0.2)])


class TestEvenDegreeSum:
    def test_lowest_id_below_max_incremented(self):
        """k_max 보다 작은 가장 앞 노드 차수를 올린다"""
        assert make_even_degree_sum(np.array([5, 3, 3]), 5).tolist() == [5, 4, 3]

    def test_even_sum_untouched(self):
        """합이 짝수면 그대로"""
        assert make_even_degree_sum(np.array([2, 2]), 5).tolist() == [2, 2]

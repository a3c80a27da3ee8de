from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

PROFILE_PROPERTIES = ("density", "scaled_density", "avg_distance", "hub_dominance")


class CommunityProfile(BaseModel):
    """
    커뮤니티 하나의 메조스코픽 속성

    n_C = 1 인 커뮤니티는 모든 값이 None (정의되지 않음) 이며 곡선에서 제외된다.
    avg_distance 는 도달 가능한 쌍이 하나도 없을 때도 None 이다.
    """
    model_config = ConfigDict(frozen=True)

    community: int = Field(..., description="커뮤니티 id")
    size: int = Field(..., description="n_C")
    internal_edges: int = Field(..., description="m_C")
    density: Optional[float] = Field(None, description="ρ = 2 m_C / (n_C (n_C - 1))")
    scaled_density: Optional[float] = Field(None, description="ρ̃ = 2 m_C / (n_C - 1)")
    avg_distance: Optional[float] = Field(None, description="유도 부분그래프 안의 평균 최단거리 ℓ")
    hub_dominance: Optional[float] = Field(None, description="h = max k_int / (n_C - 1)")
    internally_connected: bool = Field(..., description="유도 부분그래프가 연결되어 있는지")
    distance_sampled: bool = Field(False, description="ℓ 을 표본 출발점으로 근사했는지")

    @property
    def is_singleton(self) -> bool:
        return self.size < 2

    def value(self, name: str) -> Optional[float]:
        return getattr(self, name)


class CurveBin(BaseModel):
    """로그 구간 [lower, upper) 하나의 집계"""
    model_config = ConfigDict(frozen=True)

    index: int = Field(..., description="구간 번호 i (lower = 10^(i / bins_per_decade))")
    lower: float = Field(..., description="구간 하한 (포함)")
    upper: float = Field(..., description="구간 상한 (제외)")
    mean: float = Field(..., description="구간 안 값들의 평균")
    std: float = Field(..., description="구간 안 값들의 표준편차 (모집단)")
    count: int = Field(..., description="구간에 들어간 표본 수")


class BinnedCurve(BaseModel):
    model_config = ConfigDict(frozen=True)

    bins_per_decade: int = Field(..., ge=1)
    bins: List[CurveBin] = Field(default_factory=list)

    def by_index(self) -> Dict[int, CurveBin]:
        return {b.index: b for b in self.bins}

    @property
    def total_count(self) -> int:
        return sum(b.count for b in self.bins)


class HistogramBin(BaseModel):
    model_config = ConfigDict(frozen=True)

    lower: float
    upper: float
    count: int


class MetricOptions(BaseModel):
    """분석 옵션 (곡선 구간, 히스토그램, 거리 표본 모드)"""
    model_config = ConfigDict(frozen=True)

    bins_per_decade: int = Field(5, ge=1, description="10 배 구간당 로그 구간 수")
    histogram_bins: int = Field(20, ge=1, description="embeddedness 히스토그램 구간 수")
    distance_sampling_threshold: Optional[int] = Field(
        None, ge=2, description="이보다 큰 커뮤니티는 표본 출발점 BFS 로 ℓ 근사. None 이면 항상 정확 계산"
    )
    distance_sample_sources: int = Field(64, ge=1, description="표본 모드의 출발점 수")
    seed: int = Field(0, ge=0, description="표본 모드 난수 시드")

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class PowerLawSpec(BaseModel):
    """유계 이산 멱법칙 P(k) ∝ k^(-exponent), k ∈ [min, max]"""
    model_config = ConfigDict(frozen=True)

    exponent: float = Field(..., gt=1.0, description="멱법칙 지수 (γ 또는 β)")
    min: int = Field(..., ge=1, description="최소값 (포함)")
    max: int = Field(..., ge=1, description="최대값 (포함)")

    @model_validator(mode="after")
    def _check_bounds(self):
        if self.min > self.max:
            raise ValueError("min must not exceed max")
        return self


MixingKind = Literal["constant", "uniform-range", "empirical-quantile-table"]


class MixingSpec(BaseModel):
    """노드별 혼합계수 μ 분포"""
    model_config = ConfigDict(frozen=True)

    kind: MixingKind = Field("uniform-range", description="분포 종류")
    value: Optional[float] = Field(None, ge=0.0, le=1.0, description="constant: 모든 노드의 μ")
    low: float = Field(0.0, ge=0.0, le=1.0, description="uniform-range: 하한")
    high: float = Field(1.0, ge=0.0, le=1.0, description="uniform-range: 상한")
    quantiles: Optional[List[Tuple[float, float]]] = Field(
        None,
        description="empirical-quantile-table: (누적확률, μ) 쌍. 누적확률은 0 에서 시작해 1 에서 끝난다",
    )

    @model_validator(mode="after")
    def _check_kind(self):
        if self.kind == "constant" and self.value is None:
            raise ValueError("constant mixing needs 'value'")
        if self.kind == "uniform-range" and self.low > self.high:
            raise ValueError("uniform-range mixing needs low <= high")
        if self.kind == "empirical-quantile-table":
            table = self.quantiles or []
            if len(table) < 2:
                raise ValueError("quantile table needs at least two rows")
            probabilities = [p for p, _ in table]
            values = [mu for _, mu in table]
            if probabilities[0] != 0.0 or probabilities[-1] != 1.0:
                raise ValueError("quantile table probabilities must start at 0 and end at 1")
            if any(b < a for a, b in zip(probabilities, probabilities[1:])):
                raise ValueError("quantile table probabilities must be nondecreasing")
            if any(b < a for a, b in zip(values, values[1:])):
                raise ValueError("quantile table values must be nondecreasing")
            if any(mu < 0.0 or mu > 1.0 for mu in values):
                raise ValueError("quantile table values must lie in [0, 1]")
        return self

    @classmethod
    def constant(cls, value: float) -> "MixingSpec":
        return cls(kind="constant", value=value)

    @classmethod
    def uniform(cls, low: float = 0.0, high: float = 1.0) -> "MixingSpec":
        return cls(kind="uniform-range", low=low, high=high)


WiringKind = Literal["configuration-model", "preferential-attachment"]


class GeneratorConfig(BaseModel):
    """LFR 생성기 전체 파라미터"""
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=10, description="노드 수")
    mean_degree: float = Field(..., description="목표 평균 차수 ⟨k⟩")
    k_max: int = Field(..., description="최대 차수")
    gamma: float = Field(3.0, gt=1.0, description="차수 분포 지수 γ")
    beta: float = Field(2.0, gt=1.0, description="커뮤니티 크기 분포 지수 β")
    mixing: MixingSpec = Field(default_factory=MixingSpec.uniform, description="μ 분포")
    wiring: WiringKind = Field("configuration-model", description="초기 배선 모델")
    size_bounds: Optional[Tuple[int, int]] = Field(
        None, description="커뮤니티 크기 범위 재정의. 생략 시 [k_min, k_max]"
    )
    rewire_tolerance: float = Field(0.05, gt=0.0, le=1.0, description="평균 |μ 오차| 수렴 기준")
    rewire_max_sweeps: int = Field(50, ge=0, description="재배선 최대 스윕 수")
    assignment_max_restarts: int = Field(10, ge=1, description="커뮤니티 배정 실패 시 재시도 횟수")
    cm_max_repair_rounds: int = Field(10, ge=0, description="CM 단순화 후 수리 라운드 수")
    seed: int = Field(..., ge=0, description="난수 시드 (필수)")

    @model_validator(mode="after")
    def _check_degrees(self):
        if not 1.0 < self.mean_degree < self.k_max:
            raise ValueError("mean_degree must satisfy 1 < mean_degree < k_max")
        if self.k_max >= self.n:
            raise ValueError("k_max must be smaller than n")
        if self.size_bounds is not None:
            low, high = self.size_bounds
            if low < 2:
                raise ValueError("size_bounds lower bound must be at least 2")
            if low > high:
                raise ValueError("size_bounds lower bound must not exceed upper bound")
            if low > self.n:
                raise ValueError("size_bounds lower bound must not exceed n")
        return self


class WiringReport(BaseModel):
    """배선 단계에서 단순화로 생긴 차수 편차"""
    requested_degree_sum: int = Field(..., description="요청한 차수 합")
    realized_degree_sum: int = Field(..., description="실현된 차수 합")
    removed_self_loops: int = Field(0, description="짝짓기에서 나온 self-loop 수")
    removed_multi_edges: int = Field(0, description="짝짓기에서 나온 중복 간선 수")
    repaired_pairs: int = Field(0, description="수리 라운드에서 복구한 짝 수")
    deviating_nodes: int = Field(0, description="요청 차수와 달라진 노드 수")


class AssignmentReport(BaseModel):
    """커뮤니티 배정 결과 요약"""
    attempts: int = Field(..., description="사용한 배정 시도 수 (재표본 포함)")
    community_count: int = Field(..., description="커뮤니티 수")
    size_min: int = Field(..., description="최소 커뮤니티 크기")
    size_max: int = Field(..., description="최대 커뮤니티 크기")
    clamped_nodes: List[int] = Field(default_factory=list, description="k_int 를 (최대 크기 - 1) 로 잘라낸 노드")


class RewireReport(BaseModel):
    """μ 목표 재배선 결과"""
    swaps: int = Field(..., description="수락된 이중 간선 교환 수")
    attempts: int = Field(..., description="시도한 교환 수")
    sweeps: int = Field(..., description="수행한 스윕 수")
    mean_abs_error: float = Field(..., description="노드 평균 |μ_realized - μ_target|")
    converged: bool = Field(..., description="mean_abs_error <= tolerance 도달 여부")


GENERATOR_PRESETS = {
    "desk": {"n": 10_000, "mean_degree": 30.0, "k_max": 1000},
    "large": {"n": 100_000, "mean_degree": 30.0, "k_max": 1000},
    "dense": {"n": 100_000, "mean_degree": 30.0, "k_max": 3000},
}


def preset_payload(name: str) -> dict:
    """프리셋의 설정 dict (seed 제외). 설정 파일과 같은 모양"""
    if name not in GENERATOR_PRESETS:
        raise ValueError(f"Unknown preset '{name}', expected one of {sorted(GENERATOR_PRESETS)}")
    return {"gamma": 3.0, "beta": 2.0, "mixing": {"kind": "uniform-range", "low": 0.0, "high": 1.0}, **GENERATOR_PRESETS[name]}


def generator_preset(name: str, seed: int, **overrides) -> GeneratorConfig:
    """재현 실험에 쓰는 세 가지 설정 (desk / large / dense)"""
    params = {**preset_payload(name), "seed": seed}
    params.update(overrides)
    return GeneratorConfig(**params)

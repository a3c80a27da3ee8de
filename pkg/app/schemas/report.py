from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.schemas.detection import DetectionParams
from app.schemas.generator import GeneratorConfig
from app.schemas.metrics import BinnedCurve, MetricOptions

REPORT_FORMAT_VERSION = 1
ALL_ALGORITHMS = ["louvain", "fast-greedy", "markov-cluster", "infomap", "walktrap"]


class BenchmarkRequest(BaseModel):
    """bench 명령 설정 파일"""
    model_config = ConfigDict(frozen=True)

    configs: List[GeneratorConfig] = Field(..., min_length=1, description="생성기 설정 목록")
    algorithms: List[str] = Field(default_factory=lambda: list(ALL_ALGORITHMS), min_length=1)
    instances_per_config: int = Field(5, ge=1, description="설정마다 만들 인스턴스 수 (시드 = seed + i)")
    detection: DetectionParams = Field(default_factory=DetectionParams)
    metrics: MetricOptions = Field(default_factory=MetricOptions)

    @model_validator(mode="after")
    def _check_algorithms(self):
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ValueError("algorithms must not repeat")
        return self


class BenchmarkCell(BaseModel):
    """(설정, 인스턴스, 알고리즘) 하나의 결과"""
    config_index: int
    instance: int
    seed: int
    algorithm: str
    status: Literal["ok", "failed"]
    nmi: Optional[float] = None
    community_count: Optional[int] = None
    singleton_count: Optional[int] = None
    error: Optional[Dict[str, Any]] = Field(None, description="실패 시 에러 payload")


class AlgorithmSummary(BaseModel):
    """설정 하나에서 알고리즘 하나의 인스턴스 평균"""
    config_index: int
    algorithm: str
    succeeded: int
    failed: int
    nmi_mean: Optional[float] = None
    nmi_std: Optional[float] = None
    community_count_mean: Optional[float] = None
    singleton_count_mean: Optional[float] = None


class CurveSet(BaseModel):
    """분할 하나 (또는 인스턴스 묶음) 의 속성 곡선"""
    properties: Dict[str, BinnedCurve] = Field(default_factory=dict)
    size_distribution: BinnedCurve
    community_count: int = 0
    singleton_count: int = 0


class ConfigCurves(BaseModel):
    config_index: int
    reference: CurveSet
    algorithms: Dict[str, CurveSet] = Field(default_factory=dict)


class BenchmarkReport(BaseModel):
    """
    벤치마크 결과

    모든 (설정, 인스턴스, 알고리즘) 칸이 있으며 실패한 칸은 status=failed 로 남는다.
    실행 시간은 결정적 출력이 아니므로 여기 포함하지 않는다.
    """
    format_version: int = REPORT_FORMAT_VERSION
    request: BenchmarkRequest
    cells: List[BenchmarkCell]
    summaries: List[AlgorithmSummary]
    curves: List[ConfigCurves]

    @property
    def failures(self) -> List[BenchmarkCell]:
        return [cell for cell in self.cells if cell.status == "failed"]

    def cell_nmis(self, config_index: int, algorithm: str) -> List[float]:
        return [
            cell.nmi
            for cell in self.cells
            if cell.config_index == config_index and cell.algorithm == algorithm and cell.nmi is not None
        ]


class TimingRecord(BaseModel):
    config_index: int
    instance: int
    stage: str = Field(..., description="generate 또는 알고리즘 이름")
    seconds: float

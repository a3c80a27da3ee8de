from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from app.schemas.detection import DetectionParams
from app.schemas.generator import AssignmentReport, GeneratorConfig, RewireReport, WiringReport
from app.schemas.metrics import MetricOptions

MANIFEST_FORMAT_VERSION = 1


class RealizedStats(BaseModel):
    """생성된 파일에서 다시 계산할 수 있는 실현 통계"""
    n: int
    m: int
    mean_degree: float
    min_degree: int
    max_degree: int
    k_min: int
    community_count: int
    size_min: int
    size_max: int
    mean_abs_mu_error: float
    clamped_nodes: int
    degree_exponent_fit: Optional[float] = Field(None, description="[k_min, k_max] 구간 차수 멱법칙 지수 추정")
    size_exponent_fit: Optional[float] = Field(None, description="크기 범위 구간 커뮤니티 크기 지수 추정")


class GenerationManifest(BaseModel):
    format_version: int = MANIFEST_FORMAT_VERSION
    config: GeneratorConfig
    files: Dict[str, str] = Field(default_factory=dict, description="산출물 종류 -> 파일 이름")
    stats: RealizedStats
    wiring: WiringReport
    assignment: AssignmentReport
    rewiring: RewireReport


class DetectRunConfig(BaseModel):
    """detect 명령 설정 파일"""
    model_config = ConfigDict(frozen=True)

    algorithm: str = Field(..., description="알고리즘 이름")
    params: DetectionParams = Field(default_factory=DetectionParams)


class DetectionManifest(BaseModel):
    format_version: int = MANIFEST_FORMAT_VERSION
    algorithm: str
    params: DetectionParams
    network: str = Field(..., description="입력 간선 목록 파일 이름")
    n: int
    m: int
    community_count: int
    singleton_count: int
    objective_name: Optional[str] = None
    objective: Optional[float] = None
    iterations: Optional[int] = None
    pass_log: List[float] = Field(default_factory=list)
    extra: Dict[str, Any] = Field(default_factory=dict)
    files: Dict[str, str] = Field(default_factory=dict)


class AnalysisManifest(BaseModel):
    format_version: int = MANIFEST_FORMAT_VERSION
    network: str
    membership: str
    options: MetricOptions
    community_count: int
    singleton_count: int
    disconnected_communities: int
    isolated_nodes: int
    files: Dict[str, str] = Field(default_factory=dict)

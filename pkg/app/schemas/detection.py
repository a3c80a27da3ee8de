from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class DetectionParams(BaseModel):
    """검출 알고리즘 파라미터 (알고리즘별로 필요한 값만 사용)"""
    model_config = ConfigDict(frozen=True)

    walktrap_steps: int = Field(4, ge=1, description="Walktrap 랜덤워크 길이 t")
    mcl_expansion: int = Field(2, ge=2, description="MarkovCluster 확장 거듭제곱 e")
    mcl_inflation: float = Field(2.0, gt=1.0, description="MarkovCluster 팽창 지수 r")
    mcl_prune: float = Field(1e-6, ge=0.0, lt=1.0, description="팽창 후 제거할 원소 임계값")
    mcl_max_iterations: int = Field(100, ge=1, description="MarkovCluster 최대 반복 수")
    mcl_selection: Optional[int] = Field(
        None, ge=1, description="열마다 남길 최대 원소 수. None 이면 임계값 제거만 한다"
    )
    infomap_trials: int = Field(1, ge=1, description="InfoMap 시도 수 (0 번은 id 순서)")
    seed: int = Field(0, ge=0, description="무작위 시도에 쓰는 시드")

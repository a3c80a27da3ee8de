from dataclasses import dataclass, field

import numpy as np

from app.models.graph import Graph
from app.models.partition import Partition
from app.schemas.generator import AssignmentReport, GeneratorConfig, RewireReport, WiringReport


@dataclass(frozen=True)
class Assignment:
    """커뮤니티 배정 결과 (배정 시점의 목표 내부 차수 포함)"""

    partition: Partition
    internal_targets: np.ndarray
    clamped_nodes: list[int] = field(default_factory=list)


@dataclass(frozen=True)
class GeneratedNetwork:
    graph: Graph
    reference: Partition
    mu_target: np.ndarray
    mu_realized: np.ndarray
    k_min: int
    config: GeneratorConfig
    wiring: WiringReport
    assignment: AssignmentReport
    rewiring: RewireReport
    assignment_targets: np.ndarray

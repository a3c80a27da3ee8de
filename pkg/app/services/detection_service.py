import logging
from typing import Callable

from app.config import settings
from app.errors import BenchmarkError, DetectionError, UnknownAlgorithmError
from app.models.detection import DetectionResult
from app.models.graph import Graph
from app.run_logging import log_stage
from app.schemas.detection import DetectionParams
from app.services.detection import fast_greedy, infomap, louvain, markov_cluster, walktrap

logger = logging.getLogger(__name__)

Runner = Callable[[Graph, DetectionParams], DetectionResult]

# 보고서 열 순서
ALGORITHMS: dict[str, Runner] = {
    "louvain": lambda g, params: louvain(g),
    "fast-greedy": lambda g, params: fast_greedy(g),
    "markov-cluster": lambda g, params: markov_cluster(
        g,
        e=params.mcl_expansion,
        r=params.mcl_inflation,
        eps=params.mcl_prune,
        max_iterations=params.mcl_max_iterations,
        selection=params.mcl_selection,
    ),
    "infomap": lambda g, params: infomap(g, seed=params.seed, trials=params.infomap_trials),
    "walktrap": lambda g, params: walktrap(
        g,
        t=params.walktrap_steps,
        block_size=settings.WALKTRAP_BLOCK_SIZE,
    ),
}

ALGORITHM_NAMES = tuple(ALGORITHMS)


class DetectionService:
    """이름으로 검출 알고리즘을 실행하고 run 이벤트를 남긴다"""

    def resolve(self, name: str) -> Runner:
        if name not in ALGORITHMS:
            raise UnknownAlgorithmError(
                f"Unknown algorithm '{name}', expected one of: {', '.join(ALGORITHM_NAMES)}",
                algorithm=name,
                valid=list(ALGORITHM_NAMES),
            )
        return ALGORITHMS[name]

    def validate_names(self, names: list[str]) -> list[str]:
        for name in names:
            self.resolve(name)
        return list(names)

    def detect(self, name: str, g: Graph, params: DetectionParams | None = None) -> tuple[DetectionResult, float]:
        """(결과, 실행 시간 초)"""
        runner = self.resolve(name)
        params = params or DetectionParams()
        with log_stage("detect", algorithm=name, n=g.n, m=g.m) as stage:
            try:
                result = runner(g, params)
            except BenchmarkError:
                raise
            except Exception as exc:
                logger.exception(f"Detection algorithm {name} failed unexpectedly")
                raise DetectionError(f"Algorithm {name} failed: {exc}", algorithm=name) from exc
            stage.set(communities=result.community_count, singletons=result.singleton_count)
        return result, stage.duration_seconds


detection_service = DetectionService()

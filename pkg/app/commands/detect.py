import argparse
import logging
from pathlib import Path
from typing import Any

from app.commands.common import add_output_argument, prepare_output_dir, read_json, validate_model
from app.cruds import network_crud, partition_crud, report_crud
from app.errors import ConfigError
from app.schemas.run import DetectionManifest, DetectRunConfig
from app.services.detection_service import ALGORITHM_NAMES, detection_service

logger = logging.getLogger(__name__)

# 명령행 옵션 -> DetectionParams 필드
PARAM_FLAGS = {
    "walktrap_steps": "walktrap_steps",
    "mcl_expansion": "mcl_expansion",
    "mcl_inflation": "mcl_inflation",
    "mcl_prune": "mcl_prune",
    "mcl_max_iterations": "mcl_max_iterations",
    "mcl_selection": "mcl_selection",
    "infomap_trials": "infomap_trials",
    "seed": "seed",
}


def build_run_config(args: argparse.Namespace) -> DetectRunConfig:
    payload: dict[str, Any] = read_json(args.config)
    if args.algorithm is not None:
        payload["algorithm"] = args.algorithm
    if "algorithm" not in payload:
        raise ConfigError("An algorithm is required (--algorithm or 'algorithm' in the config file)", errors=[])
    params = dict(payload.get("params") or {})
    for flag, field in PARAM_FLAGS.items():
        value = getattr(args, flag)
        if value is not None:
            params[field] = value
    payload["params"] = params
    return validate_model(DetectRunConfig, payload)


def run_detect(args: argparse.Namespace) -> int:
    """
    간선 목록 하나에 검출 알고리즘 하나를 실행

    membership 과 manifest 를 쓰며, 병합형 알고리즘은 Q-cut 곡선 (dendrogram CSV),
    Louvain 은 pass 별 Q 를 함께 쓴다.
    """
    run_config = build_run_config(args)
    detection_service.resolve(run_config.algorithm)
    network = network_crud.read_edges(Path(args.network))
    graph = network.graph
    out = prepare_output_dir(args.out)
    name = args.name or run_config.algorithm

    result, seconds = detection_service.detect(run_config.algorithm, graph, run_config.params)

    files = {"membership": f"{name}.membership", "manifest": f"{name}.manifest.json"}
    if result.dendrogram is not None:
        files["dendrogram"] = f"{name}.dendrogram.csv"
        report_crud.write_dendrogram(out / files["dendrogram"], result.dendrogram)
    if result.pass_log:
        files["passes"] = f"{name}.passes.csv"
        report_crud.write_pass_log(out / files["passes"], result.pass_log)

    partition_crud.write_membership(out / files["membership"], result.partition, labels=network.labels)
    manifest = DetectionManifest(
        algorithm=run_config.algorithm,
        params=run_config.params,
        network=Path(args.network).name,
        n=graph.n,
        m=graph.m,
        community_count=result.community_count,
        singleton_count=result.singleton_count,
        objective_name=result.objective_name,
        objective=result.objective,
        iterations=result.iterations,
        pass_log=result.pass_log,
        extra=result.extra,
        files=files,
    )
    with open(out / files["manifest"], "w", encoding="utf-8", newline="\n") as handle:
        handle.write(manifest.model_dump_json(indent=2))
        handle.write("\n")
    report_crud.write_timing(out / f"{name}.timing.json", seconds, command="detect", algorithm=run_config.algorithm)

    logger.info(
        f"{run_config.algorithm}: {result.community_count} communities "
        f"({result.singleton_count} singletons) in {seconds:.3f}s"
    )
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("detect", help="커뮤니티 검출 실행")
    parser.add_argument("--network", required=True, help="간선 목록 파일")
    parser.add_argument("--algorithm", help=f"알고리즘 이름 ({', '.join(ALGORITHM_NAMES)})")
    parser.add_argument("--config", help="DetectRunConfig JSON 파일")
    parser.add_argument("--walktrap-steps", dest="walktrap_steps", type=int)
    parser.add_argument("--mcl-expansion", dest="mcl_expansion", type=int)
    parser.add_argument("--mcl-inflation", dest="mcl_inflation", type=float)
    parser.add_argument("--mcl-prune", dest="mcl_prune", type=float)
    parser.add_argument("--mcl-max-iterations", dest="mcl_max_iterations", type=int)
    parser.add_argument("--mcl-selection", dest="mcl_selection", type=int)
    parser.add_argument("--infomap-trials", dest="infomap_trials", type=int)
    parser.add_argument("--seed", type=int, help="무작위 시도 시드")
    parser.add_argument("--name", help="출력 파일 이름 접두어 (기본값: 알고리즘 이름)")
    add_output_argument(parser)
    parser.set_defaults(handler=run_detect)

import argparse
import logging
from typing import Any

from app.commands.common import add_output_argument, prepare_output_dir, read_json, validate_model
from app.cruds import network_crud, partition_crud, report_crud
from app.errors import ConfigError
from app.run_logging import log_stage
from app.schemas.generator import GENERATOR_PRESETS, GeneratorConfig, preset_payload
from app.schemas.run import GenerationManifest
from app.services.generator_service import generator_service, realized_stats

logger = logging.getLogger(__name__)

OUTPUT_FILES = {
    "edges": "{name}.edges",
    "membership": "{name}.membership",
    "mu": "{name}.mu",
    "manifest": "{name}.manifest.json",
}
TIMING_FILE = "{name}.timing.json"


def _mixing_override(args: argparse.Namespace) -> dict[str, Any] | None:
    if args.mu is not None and (args.mu_low is not None or args.mu_high is not None):
        raise ConfigError("--mu cannot be combined with --mu-low/--mu-high", errors=[])
    if args.mu is not None:
        return {"kind": "constant", "value": args.mu}
    if args.mu_low is not None or args.mu_high is not None:
        return {
            "kind": "uniform-range",
            "low": 0.0 if args.mu_low is None else args.mu_low,
            "high": 1.0 if args.mu_high is None else args.mu_high,
        }
    return None


def build_config(args: argparse.Namespace) -> GeneratorConfig:
    """프리셋 < 설정 파일 < 명령행 순으로 덮어쓴다"""
    payload: dict[str, Any] = preset_payload(args.preset) if args.preset else {}
    payload.update(read_json(args.config))
    overrides = {
        "n": args.n,
        "mean_degree": args.mean_degree,
        "k_max": args.k_max,
        "gamma": args.gamma,
        "beta": args.beta,
        "mixing": _mixing_override(args),
        "wiring": args.wiring,
        "seed": args.seed,
    }
    payload.update({key: value for key, value in overrides.items() if value is not None})
    return validate_model(GeneratorConfig, payload)


def run_generate(args: argparse.Namespace) -> int:
    """
    LFR 네트워크 생성

    간선 목록, 기준 membership, μ 표, manifest 를 쓰고
    실행 시간은 별도 timing 파일에 남긴다.
    """
    cfg = build_config(args)
    out = prepare_output_dir(args.out)
    files = {kind: pattern.format(name=args.name) for kind, pattern in OUTPUT_FILES.items()}

    with log_stage("cmd.generate", n=cfg.n, seed=cfg.seed, wiring=cfg.wiring) as stage:
        network = generator_service.generate(cfg)
        stage.set(m=network.graph.m, communities=network.reference.num_communities)

    network_crud.write_edges(out / files["edges"], network.graph)
    partition_crud.write_membership(out / files["membership"], network.reference)
    network_crud.write_mu_table(out / files["mu"], network.mu_target, network.mu_realized)
    manifest = GenerationManifest(
        config=cfg,
        files=files,
        stats=realized_stats(network),
        wiring=network.wiring,
        assignment=network.assignment,
        rewiring=network.rewiring,
    )
    network_crud.write_manifest(out / files["manifest"], manifest)
    report_crud.write_timing(out / TIMING_FILE.format(name=args.name), stage.duration_seconds, command="generate")

    logger.info(
        f"Generated n={network.graph.n} m={network.graph.m} "
        f"communities={network.reference.num_communities} into {out}"
    )
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser("generate", help="LFR 벤치마크 네트워크 생성")
    parser.add_argument("--config", help="GeneratorConfig JSON 파일")
    parser.add_argument("--preset", choices=sorted(GENERATOR_PRESETS), help="재현 실험 설정")
    parser.add_argument("--n", type=int, help="노드 수")
    parser.add_argument("--mean-degree", type=float, help="평균 차수")
    parser.add_argument("--k-max", type=int, help="최대 차수")
    parser.add_argument("--gamma", type=float, help="차수 분포 지수")
    parser.add_argument("--beta", type=float, help="커뮤니티 크기 분포 지수")
    parser.add_argument("--mu", type=float, help="모든 노드에 같은 μ")
    parser.add_argument("--mu-low", type=float, help="균등분포 μ 하한")
    parser.add_argument("--mu-high", type=float, help="균등분포 μ 상한")
    parser.add_argument("--wiring", choices=["configuration-model", "preferential-attachment"])
    parser.add_argument("--seed", type=int, help="난수 시드 (설정 파일에 없으면 필수)")
    parser.add_argument("--name", default="network", help="출력 파일 이름 접두어")
    add_output_argument(parser)
    parser.set_defaults(handler=run_generate)

import json
import logging
from pathlib import Path
from typing import Any, Optional, Type, TypeVar

from pydantic import BaseModel, ValidationError

from app.errors import ConfigError, FileFormatError

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


def read_json(path: Optional[str]) -> dict[str, Any]:
    """설정 파일 (JSON 객체). 경로가 없으면 빈 dict"""
    if path is None:
        return {}
    file_path = Path(path)
    if not file_path.is_file():
        raise FileFormatError(f"Config file not found: {file_path}", path=str(file_path))
    try:
        with open(file_path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"Config file is not valid JSON: {exc.msg}", path=str(file_path), line=exc.lineno)
    if not isinstance(payload, dict):
        raise FileFormatError("Config file must contain a JSON object", path=str(file_path))
    return payload


def validate_model(model_cls: Type[ModelT], payload: dict[str, Any]) -> ModelT:
    """pydantic 검증 오류를 필드 단위 메시지를 담은 ConfigError 로 변환"""
    try:
        return model_cls.model_validate(payload)
    except ValidationError as exc:
        errors = json.loads(exc.json(include_url=False))
        fields = ", ".join(".".join(str(part) for part in error["loc"]) or "<root>" for error in errors)
        raise ConfigError(f"Invalid {model_cls.__name__}: {fields}", errors=errors)


def load_model(model_cls: Type[ModelT], path: Optional[str], overrides: dict[str, Any]) -> ModelT:
    """
    설정 파일 값 위에 명령행 값 (None 이 아닌 것만) 을 덮어써서 검증한다.
    overrides 의 키는 최상위 필드 이름이다.
    """
    payload = read_json(path)
    payload.update({key: value for key, value in overrides.items() if value is not None})
    return validate_model(model_cls, payload)


def prepare_output_dir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def add_output_argument(parser) -> None:
    parser.add_argument("--out", required=True, help="출력 디렉터리 (없으면 생성)")

"""
配置

单个 JSON 文件同时描述输入接口、记忆参数和位置适配参数。
缺省值即桌子装配演示所用的设置。
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ConfigError, SceneMemoryError
from .memory import MemoryParams
from .signature import Signature, build_signature

DEFAULT_D_MAX = 0.15
DEFAULT_CONNECTION_ROLE = "connected"


def default_signature() -> Signature:
    """一个对称角色 connected，两种类型 CONNECTOR 和 LEG"""
    return build_signature(
        roles=["connected"],
        types=["CONNECTOR", "LEG"],
        symmetric_roles=["connected"],
    )


@dataclass(frozen=True)
class SceneMemoryConfig:
    """完整配置"""

    signature: Signature = field(default_factory=default_signature)
    params: MemoryParams = field(default_factory=MemoryParams)
    d_max: float = DEFAULT_D_MAX
    connection_role: str = DEFAULT_CONNECTION_ROLE

    def __post_init__(self):
        if not (math.isfinite(self.d_max) and self.d_max > 0):
            raise ConfigError(f"d_max must be > 0, got {self.d_max}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "signature": self.signature.to_dict(),
            "params": self.params.to_dict(),
            "d_max": self.d_max,
            "connection_role": self.connection_role,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SceneMemoryConfig":
        unknown = set(data) - {"signature", "params", "d_max", "connection_role"}
        if unknown:
            raise ConfigError(f"unknown configuration keys: {', '.join(sorted(unknown))}")

        try:
            signature = (
                Signature.from_dict(data["signature"]) if "signature" in data else default_signature()
            )
        except SceneMemoryError as e:
            raise ConfigError(f"invalid signature: {e}") from e

        try:
            d_max = float(data.get("d_max", DEFAULT_D_MAX))
        except (TypeError, ValueError) as e:
            raise ConfigError(f"invalid d_max: {e}") from e

        return cls(
            signature=signature,
            params=MemoryParams.from_dict(data.get("params", {})),
            d_max=d_max,
            connection_role=str(data.get("connection_role", DEFAULT_CONNECTION_ROLE)),
        )


def load_config(path: str | Path | None = None) -> SceneMemoryConfig:
    """
    加载配置文件

    Args:
        path: 配置文件路径，None 表示使用缺省配置

    Returns:
        配置
    """
    if path is None:
        return SceneMemoryConfig()

    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except UnicodeDecodeError as e:
        raise ConfigError(f"config {path} is not valid UTF-8: {e.reason}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e.msg}") from e

    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must contain a JSON object")

    return SceneMemoryConfig.from_dict(data)

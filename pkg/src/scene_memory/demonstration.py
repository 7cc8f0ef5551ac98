"""
演示日志

读写逐行 JSON 格式的演示日志，并将物体二维位置转换为模糊连接事实。

日志的每一行是一条观测记录：
    {"t": 3, "elements": {"leg1": {"LEG": 1.0}}, "assertions": [["leg1", "c1", "connected", 0.75]]}
或一帧位置记录：
    {"t": 3, "objects": [["leg1", {"LEG": 1.0}, 0.12, 0.40]]}
"""

import itertools
import json
import logging
import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, TextIO

from .errors import LogFormatError, ObservationError, SceneMemoryError
from .signature import Assertion, Observation, Signature, validate_observation

logger = logging.getLogger(__name__)


class LogMode(Enum):
    """日志类型"""

    FACTS = "facts"  # 观测记录
    POSITIONS = "positions"  # 位置帧


@dataclass(frozen=True)
class PlacedObject:
    """位置帧中的一个物体（坐标单位：米）"""

    element_id: str
    types: dict[str, float]
    x: float
    y: float


@dataclass(frozen=True)
class PositionFrame:
    """一帧物体位置（工作台平面上的质心投影）"""

    timestamp: int
    objects: tuple[PlacedObject, ...] = ()

    def __post_init__(self):
        seen: set[str] = set()
        for obj in self.objects:
            if obj.element_id in seen:
                raise LogFormatError(
                    f"duplicate element '{obj.element_id}' in frame t={self.timestamp}"
                )
            seen.add(obj.element_id)
            if not (math.isfinite(obj.x) and math.isfinite(obj.y)):
                raise LogFormatError(
                    f"non-finite coordinates for '{obj.element_id}' in frame t={self.timestamp}"
                )

    def to_record(self) -> dict[str, Any]:
        return {
            "t": self.timestamp,
            "objects": [[o.element_id, dict(o.types), o.x, o.y] for o in self.objects],
        }


Record = Observation | PositionFrame


@dataclass
class DemonstrationLog:
    """按时间排序的演示记录"""

    records: list[Record] = field(default_factory=list)
    mode: LogMode = LogMode.FACTS

    def __post_init__(self):
        check_timestamps(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[Record]:
        return iter(self.records)

    def observations(self, signature: Signature, d_max: float, role: str) -> Iterator[Observation]:
        """以观测形式遍历记录，位置帧经过 ingest_positions 转换"""
        for record in self.records:
            if isinstance(record, PositionFrame):
                yield ingest_positions(record, d_max, signature, role)
            else:
                yield record


def check_timestamps(records: Iterable[Record]):
    """时间戳必须严格递增"""
    previous: int | None = None
    for record in records:
        if previous is not None and record.timestamp <= previous:
            raise LogFormatError(
                f"timestamps must be strictly increasing: {record.timestamp} after {previous}"
            )
        previous = record.timestamp


def _timestamp(data: dict[str, Any]) -> int:
    t = data.get("t")
    if isinstance(t, bool) or not isinstance(t, int):
        raise LogFormatError(f"record needs an integer 't', got {t!r}")
    return t


def _types(value: Any, where: str) -> dict[str, float]:
    if not isinstance(value, dict):
        raise LogFormatError(f"type memberships of {where} must be an object")
    try:
        return {str(k): float(v) for k, v in value.items()}
    except (TypeError, ValueError) as e:
        raise LogFormatError(f"bad type membership for {where}: {e}") from e


def parse_observation_record(data: dict[str, Any]) -> Observation:
    """
    解析一条观测记录

    Args:
        data: JSON 对象

    Returns:
        观测
    """
    t = _timestamp(data)
    elements = data.get("elements", {})
    if not isinstance(elements, dict):
        raise LogFormatError(f"'elements' must be an object (t={t})")

    assertions = []
    for item in data.get("assertions", []):
        if not isinstance(item, list | tuple) or len(item) != 4:
            raise LogFormatError(f"assertion must be [subject, object, role, degree] (t={t})")
        subject, obj, role, degree = item
        try:
            assertions.append(Assertion(str(subject), str(obj), str(role), float(degree)))
        except (TypeError, ValueError) as e:
            raise LogFormatError(f"bad assertion degree {degree!r} (t={t})") from e

    return Observation(
        timestamp=t,
        elements={str(eid): _types(types, f"'{eid}'") for eid, types in elements.items()},
        assertions=tuple(assertions),
    )


def parse_position_record(data: dict[str, Any]) -> PositionFrame:
    """解析一帧位置记录"""
    t = _timestamp(data)
    objects = []
    for item in data.get("objects", []):
        if not isinstance(item, list | tuple) or len(item) != 4:
            raise LogFormatError(f"object must be [id, {{type: degree}}, x, y] (t={t})")
        element_id, types, x, y = item
        try:
            objects.append(PlacedObject(str(element_id), _types(types, f"'{element_id}'"), float(x), float(y)))
        except (TypeError, ValueError) as e:
            raise LogFormatError(f"bad coordinates for '{element_id}' (t={t})") from e
    return PositionFrame(timestamp=t, objects=tuple(objects))


def parse_lines(lines: Iterable[str], mode: LogMode = LogMode.FACTS) -> DemonstrationLog:
    """解析 JSON 行，空行忽略"""
    parse = parse_position_record if mode is LogMode.POSITIONS else parse_observation_record
    records: list[Record] = []

    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as e:
            raise LogFormatError(f"line {lineno}: invalid JSON ({e.msg})") from e
        if not isinstance(data, dict):
            raise LogFormatError(f"line {lineno}: record must be a JSON object")
        try:
            records.append(parse(data))
        except SceneMemoryError as e:
            raise LogFormatError(f"line {lineno}: {e}") from e

    return DemonstrationLog(records=records, mode=mode)


def read_log(path: str | Path, mode: LogMode = LogMode.FACTS) -> DemonstrationLog:
    """从文件读取演示日志"""
    try:
        with open(path, encoding="utf-8") as f:
            log = parse_lines(f, mode)
    except UnicodeDecodeError as e:
        raise LogFormatError(f"log {path} is not valid UTF-8: {e.reason}") from e
    except OSError as e:
        raise LogFormatError(f"cannot read log {path}: {e}") from e
    logger.info("read %d %s records from %s", len(log), mode.value, path)
    return log


def write_log(log: DemonstrationLog, stream: TextIO):
    """将演示日志写为 JSON 行"""
    for record in log.records:
        stream.write(json.dumps(record.to_record(), ensure_ascii=False))
        stream.write("\n")


def ingest_positions(
    frame: PositionFrame, d_max: float, sig: Signature, role: str = "connected"
) -> Observation:
    """
    二维位置 -> 模糊连接事实

    距离 d < d_max 的每对物体产生一对对称断言，模糊度为 1 − d/d_max；
    d ≥ d_max 时不产生断言。

    Args:
        frame: 位置帧
        d_max: 最大连接距离（米）
        sig: 输入接口
        role: 表示连接的对称角色

    Returns:
        观测
    """
    if not d_max > 0:
        raise LogFormatError(f"d_max must be > 0, got {d_max}")
    if not sig.is_symmetric(role):
        raise ObservationError(f"connection role '{role}' must be a declared symmetric role")

    assertions = []
    for first, second in itertools.combinations(frame.objects, 2):
        distance = math.hypot(first.x - second.x, first.y - second.y)
        if distance >= d_max:
            continue
        degree = 1.0 - distance / d_max
        assertions.append(Assertion(first.element_id, second.element_id, role, degree))
        assertions.append(Assertion(second.element_id, first.element_id, role, degree))

    obs = Observation(
        timestamp=frame.timestamp,
        elements={o.element_id: dict(o.types) for o in frame.objects},
        assertions=tuple(assertions),
    )
    validate_observation(sig, obs)
    return obs

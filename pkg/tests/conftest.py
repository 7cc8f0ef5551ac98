"""
共享测试数据
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from scene_memory.config import SceneMemoryConfig, default_signature
from scene_memory.demonstration import DemonstrationLog
from scene_memory.memory import MemoryParams
from scene_memory.signature import Assertion, Observation, build_signature

ATTACHED = 0.75  # 已装好的桌腿与连接件之间的连接度

LEGS = {f"leg{i}": {"LEG": 1.0} for i in range(1, 5)}
CONNECTORS = {f"c{i}": {"CONNECTOR": 1.0} for i in range(1, 5)}


def table_signature():
    """前/后互逆的玻璃杯场景接口"""
    return build_signature(
        roles=["front", "behind"],
        types=["GLASS", "CUP"],
        inverse_pairs=[("front", "behind")],
    )


def glass_observation(t: int = 0) -> Observation:
    """三个物体：一个玻璃杯、两个（模糊的）杯子"""
    return Observation(
        timestamp=t,
        elements={
            "g1": {"GLASS": 0.9},
            "g2": {"CUP": 0.7},
            "g3": {"CUP": 0.8, "GLASS": 0.1},
        },
        assertions=(
            Assertion("g1", "g2", "front", 1.0),
            Assertion("g1", "g3", "front", 0.6),
            Assertion("g2", "g3", "front", 0.2),
        ),
    )


def assembly_frame(t: int, legs_attached: int) -> Observation:
    """第 legs_attached 阶段：前 n 条桌腿各连到一个连接件"""
    assertions = tuple(
        Assertion(f"leg{i}", f"c{i}", "connected", ATTACHED) for i in range(1, legs_attached + 1)
    )
    return Observation(timestamp=t, elements={**LEGS, **CONNECTORS}, assertions=assertions)


def transient_frame(t: int, degree: float) -> Observation:
    """只出现一帧的误检：两条桌腿彼此靠近"""
    return Observation(
        timestamp=t,
        elements={**LEGS, **CONNECTORS},
        assertions=(Assertion("leg1", "leg2", "connected", degree),),
    )


def build_assembly_log(last_stage_frames: int = 11) -> DemonstrationLog:
    """
    桌子装配演示

    3 帧无接触，2 帧误检，然后依次装上 1~4 条桌腿
    （前三个阶段各 8 帧，最后阶段 last_stage_frames 帧）。
    """
    records = [assembly_frame(t, 0) for t in range(3)]
    records.append(transient_frame(3, 0.1))
    records.append(transient_frame(4, 0.14))

    t = 5
    for stage, frames in ((1, 8), (2, 8), (3, 8), (4, last_stage_frames)):
        for _ in range(frames):
            records.append(assembly_frame(t, stage))
            t += 1

    return DemonstrationLog(records=records)


def assembly_config() -> SceneMemoryConfig:
    """装配演示参数（学习规则为 "or"）"""
    return SceneMemoryConfig(
        signature=default_signature(),
        params=MemoryParams(learning_rule="or"),
    )


@pytest.fixture
def assembly_log():
    return build_assembly_log()


@pytest.fixture
def table_sig():
    return table_signature()

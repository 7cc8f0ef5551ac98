"""
演示回放

按时间顺序把演示日志中的每个场景存入记忆，每成功存储
consolidation_period 个场景执行一次巩固/遗忘，并记录运行报告。
"""

import logging
import statistics
import time
from dataclasses import dataclass, field
from typing import Any

from .config import SceneMemoryConfig
from .demonstration import DemonstrationLog, PositionFrame, ingest_positions
from .errors import LogFormatError, ReplayAborted, SceneMemoryError
from .graph import MemoryGraph
from .memory import MemoryManager

logger = logging.getLogger(__name__)


@dataclass
class StepRecord:
    """单个场景的处理记录"""

    index: int
    timestamp: int
    scene_id: str | None = None
    beliefs: dict[str, float] = field(default_factory=dict)
    classified: dict[str, dict[str, float]] = field(default_factory=dict)
    learned: str | None = None
    reinforced: list[tuple[str, float]] = field(default_factory=list)
    forgotten: list[str] | None = None  # None 表示本步没有巩固
    categories: int = 0
    latency: float = 0.0  # 秒
    error: str | None = None

    @property
    def consolidated(self) -> bool:
        return self.forgotten is not None

    def to_dict(self, include_timings: bool = True) -> dict[str, Any]:
        data: dict[str, Any] = {
            "index": self.index,
            "t": self.timestamp,
            "scene_id": self.scene_id,
            "beliefs": self.beliefs,
            "classified": self.classified,
            "learned": self.learned,
            "reinforced": [[cid, degree] for cid, degree in self.reinforced],
            "consolidation": None if self.forgotten is None else {"forgotten": self.forgotten},
            "categories": self.categories,
            "error": self.error,
        }
        if include_timings:
            data["latency"] = self.latency
        return data


@dataclass
class RunReport:
    """回放报告"""

    params: dict[str, Any] = field(default_factory=dict)
    steps: list[StepRecord] = field(default_factory=list)
    final_chain: list[tuple[str, str]] = field(default_factory=list)

    @property
    def stored(self) -> int:
        return sum(1 for s in self.steps if s.error is None)

    @property
    def errors(self) -> list[StepRecord]:
        return [s for s in self.steps if s.error is not None]

    @property
    def learned(self) -> list[str]:
        return [s.learned for s in self.steps if s.learned]

    @property
    def forgotten(self) -> list[str]:
        return [cid for s in self.steps if s.forgotten for cid in s.forgotten]

    @property
    def consolidations(self) -> int:
        return sum(1 for s in self.steps if s.consolidated)

    def node_counts(self) -> list[int]:
        """每步之后的类别数（不含根节点）"""
        return [s.categories for s in self.steps if s.error is None]

    def stats(self, include_timings: bool = True) -> dict[str, Any]:
        """汇总统计"""
        similarities = [
            entry["similarity"] for s in self.steps for entry in s.classified.values()
        ]
        above_one = [d for d in similarities if d > 1.0]
        counts = self.node_counts()

        data: dict[str, Any] = {
            "scenes": len(self.steps),
            "stored": self.stored,
            "errors": len(self.errors),
            "learned": len(self.learned),
            "forgotten": len(self.forgotten),
            "consolidations": self.consolidations,
            "final_categories": counts[-1] if counts else 0,
            "max_categories": max(counts, default=0),
            "similarity_above_one": len(above_one),
            "max_similarity": max(similarities, default=0.0),
        }
        if include_timings:
            latencies = [s.latency for s in self.steps if s.error is None]
            data["latency_mean"] = statistics.fmean(latencies) if latencies else 0.0
            data["latency_max"] = max(latencies, default=0.0)
        return data

    def to_dict(self, include_timings: bool = True) -> dict[str, Any]:
        return {
            "params": self.params,
            "stats": self.stats(include_timings),
            "steps": [s.to_dict(include_timings) for s in self.steps],
            "final_chain": [[child, parent] for child, parent in self.final_chain],
        }


def replay(
    log: DemonstrationLog,
    config: SceneMemoryConfig | None = None,
    memory: MemoryGraph | None = None,
    continue_on_error: bool = False,
) -> tuple[MemoryGraph, RunReport]:
    """
    回放演示日志

    Args:
        log: 演示日志（观测或位置帧）
        config: 配置，None 表示缺省配置
        memory: 初始记忆，None 表示只有根节点的空记忆
        continue_on_error: 某个场景出错时记录错误并继续；否则抛出 ReplayAborted

    Returns:
        (最终记忆, 运行报告)
    """
    if not log.records:
        raise LogFormatError("demonstration log is empty")

    config = config or SceneMemoryConfig()
    manager = MemoryManager(config.signature, config.params)
    memory = memory if memory is not None else MemoryGraph.empty()
    report = RunReport(params=config.params.to_dict())
    period = config.params.consolidation_period

    for index, record in enumerate(log.records):
        step = StepRecord(index=index, timestamp=record.timestamp)
        report.steps.append(step)
        started = time.perf_counter()

        try:
            if isinstance(record, PositionFrame):
                obs = ingest_positions(record, config.d_max, config.signature, config.connection_role)
            else:
                obs = record
            outcome = manager.store(memory, obs)
        except SceneMemoryError as e:
            step.error = str(e)
            step.categories = len(memory) - 1
            logger.warning("scene t=%d failed: %s", record.timestamp, e)
            if not continue_on_error:
                report.final_chain = sorted(memory.chain().edges)
                raise ReplayAborted(
                    f"replay aborted at t={record.timestamp}: {e}", report, e
                ) from e
            continue

        memory = outcome.memory
        step.scene_id = outcome.scene.scene_id
        step.beliefs = {str(rr): c for rr, c in outcome.scene.beliefs.items()}
        step.classified = outcome.classification.to_dict()["entries"]
        step.learned = outcome.learned_category_id
        step.reinforced = outcome.reinforced

        if report.stored % period == 0:
            consolidation = manager.consolidate(memory)
            memory = consolidation.memory
            step.forgotten = consolidation.forgotten

        step.latency = time.perf_counter() - started
        step.categories = len(memory) - 1

    report.final_chain = sorted(memory.chain().edges)
    logger.info(
        "replayed %d scenes: %d learned, %d forgotten, %d categories remain",
        len(report.steps),
        len(report.learned),
        len(report.forgotten),
        len(memory) - 1,
    )
    return memory, report

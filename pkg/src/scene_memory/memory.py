"""
记忆操作

存储/检索（带分数强化）以及巩固/遗忘（加权、归一化与重新结构化）。
"""

import logging
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Literal

from .encoding import EncodedScene, encode
from .errors import ConfigError
from .graph import ClassificationResult, MemoryGraph, learn
from .signature import Observation, Signature, normalize_observation

logger = logging.getLogger(__name__)

LearningRule = Literal["and", "or"]


@dataclass(frozen=True)
class MemoryParams:
    """
    记忆参数

    q0: 初始分数；a: 模糊度；u/o: 学习阈值（分类度/相似度）；
    e/f: 巩固阈值（分类度/相似度）；l: 分数权重；g: 遗忘阈值。
    learning_rule: "and" 要求每个分类结果都满足 度<u 且 相似度<o 才学习；
    "or" 只要求每个分类结果满足 度<u 或 相似度<o。
    """

    q0: float = 0.5
    a: float = 0.4
    u: float = 0.9
    o: float = 0.8
    e: float = 0.9
    f: float = 0.2
    l: float = 10.0  # noqa: E741
    g: float = 0.1
    consolidation_period: int = 5
    retrieve_learns: bool = False
    learning_rule: LearningRule = "and"

    def __post_init__(self):
        if not (math.isfinite(self.q0) and self.q0 >= 0):
            raise ConfigError(f"q0 must be a finite value >= 0, got {self.q0}")
        for name in ("a", "u", "o", "e", "f", "g"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {value}")
        if not (math.isfinite(self.l) and self.l > 0):
            raise ConfigError(f"l must be a finite value > 0, got {self.l}")
        if isinstance(self.consolidation_period, bool) or self.consolidation_period < 1:
            raise ConfigError(
                f"consolidation_period must be a positive integer, got {self.consolidation_period}"
            )
        if self.learning_rule not in ("and", "or"):
            raise ConfigError(f"learning_rule must be 'and' or 'or', got {self.learning_rule!r}")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "MemoryParams":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown memory parameters: {', '.join(sorted(unknown))}")
        try:
            return cls(**data)
        except TypeError as e:
            raise ConfigError(f"invalid memory parameters: {e}") from e


@dataclass
class StoreOutcome:
    """一次存储/检索的结果"""

    memory: MemoryGraph
    scene: EncodedScene
    classification: ClassificationResult
    learned_category_id: str | None = None
    reinforced: list[tuple[str, float]] = field(default_factory=list)


@dataclass
class ConsolidationOutcome:
    """一次巩固/遗忘的结果"""

    memory: MemoryGraph
    forgotten: list[str]
    scores: dict[str, float]


class MemoryManager:
    """场景记忆的存储、检索、巩固与遗忘"""

    def __init__(self, signature: Signature, params: MemoryParams | None = None):
        self.signature = signature
        self.params = params or MemoryParams()

    def encode(self, obs: Observation) -> EncodedScene:
        """规范化并编码一个观测"""
        return encode(self.signature, normalize_observation(self.signature, obs))

    def store(self, memory: MemoryGraph, obs: Observation) -> StoreOutcome:
        """存储：编码、分类，必要时学习新类别，并强化持续出现的类别"""
        return self.store_scene(memory, self.encode(obs))

    def retrieve(self, memory: MemoryGraph, obs: Observation) -> StoreOutcome:
        """检索：与存储相同，但只有 retrieve_learns 开启时才学习"""
        return self.retrieve_scene(memory, self.encode(obs))

    def store_scene(self, memory: MemoryGraph, scene: EncodedScene) -> StoreOutcome:
        return self._process(memory, scene, allow_learning=True)

    def retrieve_scene(self, memory: MemoryGraph, scene: EncodedScene) -> StoreOutcome:
        return self._process(memory, scene, allow_learning=self.params.retrieve_learns)

    def _should_learn(self, memory: MemoryGraph, classification: ClassificationResult) -> float | None:
        """返回新类别的初始分数；不需要学习时返回 None"""
        params = self.params

        if not classification.classified:
            return params.q0

        entries = classification.entries.values()
        if params.learning_rule == "and":
            low = all(e.degree < params.u and e.similarity < params.o for e in entries)
        else:
            low = all(e.degree < params.u or e.similarity < params.o for e in entries)

        if not low:
            return None

        best = max(memory.get(cid).score for cid in classification.entries)
        return params.q0 * best

    def _process(
        self, memory: MemoryGraph, scene: EncodedScene, allow_learning: bool
    ) -> StoreOutcome:
        params = self.params
        classification = memory.classify(scene)
        outcome = StoreOutcome(memory=memory, scene=scene, classification=classification)

        if scene.is_empty():
            logger.debug("scene %s has no beliefs, nothing to learn", scene.scene_id)
        elif allow_learning:
            initial_score = self._should_learn(memory, classification)
            if initial_score is not None:
                category_id = memory.fresh_id(f"C{scene.scene_id}")
                category = learn(scene, initial_score, params.a, category_id)
                memory = memory.add_category(category)
                outcome.learned_category_id = category_id
                logger.debug(
                    "scene %s %s: learned %s with score %.4g",
                    scene.scene_id,
                    "classified with low degree" if classification.classified else "not classified",
                    category_id,
                    initial_score,
                )

        # 只强化学习之前的分类结果中的类别，本次新学的类别不在其中
        updates: dict[str, float] = {}
        for cid, entry in classification.entries.items():
            if entry.degree > params.e and entry.similarity > params.f:
                updates[cid] = memory.get(cid).score + entry.degree
                outcome.reinforced.append((cid, entry.degree))

        if updates:
            memory = memory.with_scores(updates)
            logger.debug("scene %s reinforced %s", scene.scene_id, outcome.reinforced)

        outcome.memory = memory
        return outcome

    def consolidate_forget(self, memory: MemoryGraph) -> tuple[MemoryGraph, list[str]]:
        """
        巩固与遗忘

        分数乘以 l 后除以最大值归一化；归一化分数低于 g 的类别被遗忘。
        只有发生遗忘时才重新结构化，否则只更新分数。

        Args:
            memory: 当前记忆

        Returns:
            (新记忆, 被遗忘的类别 id 列表)
        """
        outcome = self.consolidate(memory)
        return outcome.memory, outcome.forgotten

    def consolidate(self, memory: MemoryGraph) -> ConsolidationOutcome:
        """consolidate_forget 的详细版本，同时返回归一化后的分数"""
        params = self.params
        weighted = {cat.id: params.l * cat.score for cat in memory.non_root()}
        if not weighted:
            return ConsolidationOutcome(memory=memory, forgotten=[], scores={})

        q_max = max(weighted.values())
        if q_max > 0:
            normalized = {cid: q / q_max for cid, q in weighted.items()}
        else:
            normalized = {cid: 0.0 for cid in weighted}

        forgotten = [cid for cid, q in normalized.items() if q < params.g]
        survivors = {cid: q for cid, q in normalized.items() if cid not in forgotten}

        memory = memory.with_scores(normalized)
        if forgotten:
            memory = memory.remove_categories(forgotten)
            logger.info("forgot %d categories: %s", len(forgotten), ", ".join(forgotten))
        else:
            logger.info("consolidated %d categories, nothing forgotten", len(survivors))

        return ConsolidationOutcome(memory=memory, forgotten=forgotten, scores=survivors)

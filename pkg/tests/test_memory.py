"""
测试存储/检索与巩固/遗忘
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from conftest import glass_observation, table_signature
from scene_memory.encoding import EncodedScene, ReifiedRole
from scene_memory.errors import ConfigError
from scene_memory.fuzzy import LeftShoulder
from scene_memory.graph import Category, MemoryGraph
from scene_memory.memory import MemoryManager, MemoryParams

X = ReifiedRole("x", "T")
Y = ReifiedRole("y", "T")
Z = ReifiedRole("z", "T")


def scene(sid: str, **beliefs: float) -> EncodedScene:
    return EncodedScene(sid, {ReifiedRole(name, "T"): c for name, c in beliefs.items()})


def category(cid: str, score: float, a: float = 0.5, **ks: float) -> Category:
    return Category(
        id=cid,
        restrictions={ReifiedRole(name, "T"): LeftShoulder(k, a) for name, k in ks.items()},
        score=score,
    )


class TestMemoryParams:
    """测试参数"""

    def test_defaults(self):
        params = MemoryParams()
        assert (params.q0, params.a, params.u, params.o) == (0.5, 0.4, 0.9, 0.8)
        assert (params.e, params.f, params.l, params.g) == (0.9, 0.2, 10.0, 0.1)
        assert params.consolidation_period == 5
        assert params.learning_rule == "and"

    def test_invalid(self):
        with pytest.raises(ConfigError):
            MemoryParams(a=1.5)
        with pytest.raises(ConfigError):
            MemoryParams(l=0.0)
        with pytest.raises(ConfigError):
            MemoryParams(consolidation_period=0)
        with pytest.raises(ConfigError):
            MemoryParams(learning_rule="xor")

    @pytest.mark.parametrize("name", ["q0", "l", "a", "g"])
    @pytest.mark.parametrize("value", [float("nan"), float("inf")])
    def test_non_finite(self, name, value):
        with pytest.raises(ConfigError):
            MemoryParams(**{name: value})

    def test_dict_roundtrip(self):
        params = MemoryParams(q0=0.3, learning_rule="or")
        assert MemoryParams.from_dict(params.to_dict()) == params

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            MemoryParams.from_dict({"q1": 0.5})


class TestStore:
    """测试存储"""

    def setup_method(self):
        self.params = MemoryParams(a=0.5)
        self.manager = MemoryManager(table_signature(), self.params)

    def test_first_scene_learned(self):
        outcome = self.manager.store_scene(MemoryGraph.empty(), scene("1", x=2.0))

        assert not outcome.classification.classified
        assert outcome.learned_category_id == "C1"
        cat = outcome.memory.get("C1")
        assert cat.score == 0.5
        assert cat.restrictions[X] == LeftShoulder(2.0, 0.5)
        outcome.memory.verify()

    def test_same_scene_reinforces(self):
        """已有类别以度 1、相似度 1 分类时只强化，不学习"""
        memory = self.manager.store_scene(MemoryGraph.empty(), scene("1", x=2.0)).memory
        outcome = self.manager.store_scene(memory, scene("2", x=2.0))

        assert outcome.learned_category_id is None
        assert outcome.reinforced == [("C1", 1.0)]
        assert outcome.memory.get("C1").score == pytest.approx(1.5)

    def test_low_degree_learns_scaled_score(self):
        """分类度都较低时学习新类别，初始分数为 q0 乘以最高分数"""
        memory = MemoryGraph([category("A", 2.0, x=3.0), category("B", 0.4, y=1.0)])
        outcome = self.manager.store_scene(memory, scene("7", x=2.25, y=0.65, z=7.1))

        entries = outcome.classification.entries
        assert entries["A"].degree == pytest.approx(0.5, abs=1e-9)
        assert entries["B"].degree == pytest.approx(0.3, abs=1e-9)
        assert entries["A"].similarity == pytest.approx(0.3, abs=1e-9)
        assert entries["B"].similarity == pytest.approx(0.1, abs=1e-9)

        assert outcome.learned_category_id == "C7"
        assert outcome.memory.get("C7").score == pytest.approx(1.0, abs=1e-9)
        assert outcome.reinforced == []
        assert outcome.memory.get("A").score == 2.0

    def test_scaled_score_or_rule(self):
        manager = MemoryManager(table_signature(), MemoryParams(a=0.5, learning_rule="or"))
        memory = MemoryGraph([category("A", 2.0, x=3.0), category("B", 0.4, y=1.0)])
        outcome = manager.store_scene(memory, scene("7", x=2.25, y=0.65, z=7.1))
        assert outcome.memory.get("C7").score == pytest.approx(1.0, abs=1e-9)

    def test_and_rule_blocks_superset(self):
        """"and" 规则下，度 1 但相似度低的分类结果阻止学习"""
        memory = MemoryGraph([category("A", 1.0, x=1.0)])
        outcome = self.manager.store_scene(memory, scene("3", x=1.0, y=4.0))
        assert outcome.learned_category_id is None

    def test_or_rule_learns_superset(self):
        manager = MemoryManager(table_signature(), MemoryParams(a=0.5, learning_rule="or"))
        memory = MemoryGraph([category("A", 1.0, x=1.0)])
        outcome = manager.store_scene(memory, scene("3", x=1.0, y=4.0))

        assert outcome.learned_category_id == "C3"
        assert outcome.memory.get("C3").score == pytest.approx(0.5)
        assert outcome.memory.edge_weight("C3", "A") == 1.0
        # 相似度 0.2 不大于 f，不强化
        assert outcome.reinforced == []

    def test_reinforce_only_existing(self):
        memory = MemoryGraph([category("A", 1.0, x=1.0)])
        manager = MemoryManager(table_signature(), MemoryParams(a=0.5, learning_rule="or"))
        outcome = manager.store_scene(memory, scene("3", x=1.0, y=1.0))

        assert outcome.learned_category_id == "C3"
        assert outcome.reinforced == [("A", 1.0)]
        assert outcome.memory.get("A").score == pytest.approx(2.0)
        assert outcome.memory.get("C3").score == pytest.approx(0.5)

    def test_empty_scene_never_learns(self):
        outcome = self.manager.store_scene(MemoryGraph.empty(), EncodedScene("1"))
        assert outcome.learned_category_id is None
        assert len(outcome.memory) == 1

    def test_id_clash(self):
        memory = MemoryGraph([category("C1", 1.0, y=5.0)])
        outcome = self.manager.store_scene(memory, scene("1", x=2.0))
        assert outcome.learned_category_id == "C1-2"

    def test_retrieve_does_not_learn(self):
        outcome = self.manager.retrieve_scene(MemoryGraph.empty(), scene("1", x=2.0))
        assert outcome.learned_category_id is None
        assert len(outcome.memory) == 1

    def test_retrieve_reinforces(self):
        memory = MemoryGraph([category("A", 1.0, x=1.0)])
        outcome = self.manager.retrieve_scene(memory, scene("2", x=1.0))
        assert outcome.memory.get("A").score == pytest.approx(2.0)

    def test_retrieve_learns_flag(self):
        manager = MemoryManager(table_signature(), MemoryParams(retrieve_learns=True))
        outcome = manager.retrieve_scene(MemoryGraph.empty(), scene("1", x=2.0))
        assert outcome.learned_category_id == "C1"

    def test_store_observation(self):
        outcome = self.manager.store(MemoryGraph.empty(), glass_observation(t=4))
        cat = outcome.memory.get("C4")
        assert cat.k(ReifiedRole("front", "GLASS")) == pytest.approx(1.3)
        assert cat.k(ReifiedRole("behind", "CUP")) == pytest.approx(1.5)

    def test_input_memory_unchanged(self):
        memory = MemoryGraph.empty()
        self.manager.store_scene(memory, scene("1", x=2.0))
        assert len(memory) == 1


class TestConsolidate:
    """测试巩固与遗忘"""

    def setup_method(self):
        self.manager = MemoryManager(table_signature(), MemoryParams(l=10.0, g=0.1))

    def test_forget_low_score(self):
        memory = MemoryGraph([category("A", 2.0, x=1.0), category("B", 0.1, y=1.0)])
        memory, forgotten = self.manager.consolidate_forget(memory)

        assert forgotten == ["B"]
        assert "B" not in memory
        assert memory.get("A").score == pytest.approx(1.0)
        memory.verify()

    def test_normalize_only(self):
        memory = MemoryGraph([category("A", 2.0, x=1.0), category("B", 1.0, x=2.0)])
        outcome = self.manager.consolidate(memory)

        assert outcome.forgotten == []
        assert outcome.scores == {"A": pytest.approx(1.0), "B": pytest.approx(0.5)}
        assert outcome.memory.edges() == memory.edges()

    def test_forgetting_restructures(self):
        """删除中间类别后，子类别仍以 1 包含于根节点"""
        memory = MemoryGraph(
            [category("A", 5.0, x=1.0), category("M", 0.01, x=2.0), category("S", 5.0, x=3.0)]
        )
        memory, forgotten = self.manager.consolidate_forget(memory)

        assert forgotten == ["M"]
        assert memory.edge_weight("S", "A") == 1.0
        assert set(memory.chain().edges) == {("S", "A"), ("A", "ROOT")}

    def test_all_zero_scores(self):
        memory = MemoryGraph([category("A", 0.0, x=1.0)])
        memory, forgotten = self.manager.consolidate_forget(memory)
        assert forgotten == ["A"]
        assert len(memory) == 1

    def test_root_only(self):
        memory, forgotten = self.manager.consolidate_forget(MemoryGraph.empty())
        assert forgotten == []
        assert len(memory) == 1

    def test_max_normalized_to_one(self):
        memory = MemoryGraph([category("A", 3.0, x=1.0), category("B", 1.5, y=1.0)])
        memory, _ = self.manager.consolidate_forget(memory)
        assert max(memory.scores.values()) == pytest.approx(1.0)

"""
测试演示回放
"""

import os
import sys
import time

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from conftest import assembly_config, assembly_frame, build_assembly_log
from scene_memory.config import SceneMemoryConfig
from scene_memory.demonstration import DemonstrationLog
from scene_memory.encoding import ReifiedRole
from scene_memory.errors import LogFormatError, ReplayAborted
from scene_memory.graph import ROOT_ID
from scene_memory.memory import MemoryParams
from scene_memory.replay import replay
from scene_memory.signature import Assertion, Observation

LEG_CONNECTED = ReifiedRole("connected", "LEG")


class TestAssemblyReplay:
    """桌子装配演示"""

    def setup_method(self):
        self.memory, self.report = replay_assembly()

    def test_four_category_chain(self):
        """最终记忆是 4 个类别构成的权重 1 链"""
        ids = [cat.id for cat in self.memory.non_root()]
        assert ids == ["C5", "C13", "C21", "C29"]

        assert set(self.memory.chain().edges) == {
            ("C29", "C21"),
            ("C21", "C13"),
            ("C13", "C5"),
            ("C5", ROOT_ID),
        }

    def test_restrictions_increase(self):
        ks = [cat.k(LEG_CONNECTED) for cat in self.memory.non_root()]
        assert ks == pytest.approx([0.75, 1.5, 2.25, 3.0])

    def test_transients_forgotten(self):
        assert self.report.learned[:2] == ["C3", "C4"]
        assert set(self.report.forgotten) == {"C3", "C4"}
        assert "C3" not in self.memory
        assert "C4" not in self.memory

    def test_nothing_learned_before_contact(self):
        for step in self.report.steps[:3]:
            assert step.learned is None
            assert step.beliefs == {}

    def test_consolidation_cadence(self):
        consolidated = [s.index for s in self.report.steps if s.consolidated]
        assert consolidated == [4, 9, 14, 19, 24, 29, 34, 39]

    def test_fractional_reverse_edges(self):
        assert self.memory.edge_weight("C21", "C29") == pytest.approx(0.375)

    def test_memory_consistent(self):
        self.memory.verify()

    def test_node_count_bound(self):
        for stored, count in enumerate(self.report.node_counts(), 1):
            assert count <= stored

    def test_similarity_bound(self):
        for step in self.report.steps:
            for entry in step.classified.values():
                assert entry["similarity"] < 1 / (1 - 0.4)

    def test_stats(self):
        stats = self.report.stats()
        assert stats["scenes"] == 40
        assert stats["stored"] == 40
        assert stats["learned"] == 6
        assert stats["forgotten"] == 2
        assert stats["final_categories"] == 4
        assert stats["consolidations"] == 8
        assert stats["latency_max"] >= stats["latency_mean"] >= 0

    def test_report_dict(self):
        data = self.report.to_dict()
        assert data["params"]["learning_rule"] == "or"
        assert data["final_chain"][0] == ["C13", "C5"]
        assert "latency" in data["steps"][0]
        assert "latency" not in self.report.to_dict(include_timings=False)["steps"][0]


def replay_assembly(log: DemonstrationLog | None = None):
    return replay(log or build_assembly_log(), assembly_config())


class TestReplay:
    """测试回放控制"""

    def test_deterministic(self):
        memory_a, report_a = replay_assembly()
        memory_b, report_b = replay_assembly()

        assert memory_a.edges() == memory_b.edges()
        assert memory_a.scores == memory_b.scores
        assert report_a.to_dict(include_timings=False) == report_b.to_dict(include_timings=False)

    def test_and_rule_keeps_first_stage_only(self):
        """逐字的 "and" 规则下，超集场景被第一阶段的类别以度 1 分类，不再学习"""
        config = SceneMemoryConfig(params=MemoryParams())
        memory, _ = replay(build_assembly_log(), config)
        assert all(cat.k(LEG_CONNECTED) < 0.75 for cat in memory.non_root())

    def test_empty_log(self):
        with pytest.raises(LogFormatError):
            replay(DemonstrationLog(), assembly_config())

    def test_abort_on_error(self):
        log = DemonstrationLog(records=[assembly_frame(0, 1), bad_frame(1), assembly_frame(2, 1)])
        with pytest.raises(ReplayAborted) as info:
            replay(log, assembly_config())

        report = info.value.report
        assert len(report.steps) == 2
        assert report.steps[1].error is not None
        assert info.value.exit_code == 1

    def test_continue_on_error(self):
        records = [assembly_frame(0, 1), bad_frame(1)] + [assembly_frame(t, 1) for t in range(2, 7)]
        memory, report = replay(DemonstrationLog(records=records), assembly_config(), continue_on_error=True)

        assert report.stored == 6
        assert len(report.errors) == 1
        # 只有成功存储的场景计入巩固周期
        assert [s.index for s in report.steps if s.consolidated] == [5]
        assert list(memory.scores) == ["C0"]

    def test_performance(self):
        """68 个场景的回放在 5 秒内完成"""
        log = build_assembly_log(last_stage_frames=39)
        assert len(log) == 68

        started = time.perf_counter()
        memory, report = replay(log, assembly_config())
        elapsed = time.perf_counter() - started

        assert elapsed < 5.0
        assert len(memory) <= 30
        assert len(report.steps) == 68


def bad_frame(t: int) -> Observation:
    """使用未声明角色的观测"""
    return Observation(
        timestamp=t,
        elements={"leg1": {"LEG": 1.0}, "c1": {"CONNECTOR": 1.0}},
        assertions=(Assertion("leg1", "c1", "glued", 1.0),),
    )

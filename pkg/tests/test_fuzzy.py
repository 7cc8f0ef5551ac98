"""
测试模糊度运算
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from scene_memory.errors import DegreeError
from scene_memory.fuzzy import LeftShoulder, check_degree, membership, tconorm, tnorm


class TestZadeh:
    """测试合取/析取"""

    def test_tnorm_is_min(self):
        assert tnorm(0.3, 0.8) == 0.3
        assert tnorm(1.0, 1.0) == 1.0

    def test_tconorm_is_max(self):
        assert tconorm(0.3, 0.8) == 0.8
        assert tconorm(0.0, 0.0) == 0.0

    def test_out_of_range(self):
        with pytest.raises(DegreeError):
            tnorm(1.2, 0.5)
        with pytest.raises(DegreeError):
            tconorm(0.5, -0.1)

    def test_check_degree(self):
        assert check_degree(1) == 1.0
        with pytest.raises(DegreeError):
            check_degree(float("nan"))


class TestLeftShoulder:
    """测试左肩隶属函数"""

    def setup_method(self):
        self.shoulder = LeftShoulder(k=1.0, a=0.4)

    def test_full_membership_at_k(self):
        """c ≥ k 时为 1"""
        assert self.shoulder.membership(1.0) == 1.0
        assert self.shoulder.membership(5.0) == 1.0

    def test_zero_below_k_minus(self):
        assert self.shoulder.k_minus == pytest.approx(0.6)
        assert self.shoulder.membership(0.6) == 0.0
        assert self.shoulder.membership(0.0) == 0.0

    def test_linear_between(self):
        assert self.shoulder.membership(0.8) == pytest.approx(0.5, abs=1e-9)

    def test_half_shoulder(self):
        """a = 0.5 时 Ω(2) 在 1.5 处为 0.5"""
        assert membership(LeftShoulder(k=2.0, a=0.5), 1.5) == pytest.approx(0.5, abs=1e-9)

    def test_crisp_step(self):
        """a = 0 退化为阶跃"""
        step = LeftShoulder(k=2.0, a=0.0)
        assert step.membership(1.999) == 0.0
        assert step.membership(2.0) == 1.0

    def test_zero_reference(self):
        """k = 0 时任何基数都满足"""
        assert LeftShoulder(k=0.0, a=0.4).membership(0.0) == 1.0

    def test_monotone(self):
        values = [self.shoulder.membership(c / 100) for c in range(0, 150)]
        assert values == sorted(values)

    def test_invalid(self):
        with pytest.raises(DegreeError):
            LeftShoulder(k=-1.0, a=0.4)
        with pytest.raises(DegreeError):
            LeftShoulder(k=1.0, a=1.5)
        with pytest.raises(DegreeError):
            LeftShoulder(k=float("inf"), a=0.4)
        with pytest.raises(DegreeError):
            self.shoulder.membership(-0.1)

    def test_to_dict(self):
        assert self.shoulder.to_dict() == {"k": 1.0, "a": 0.4}

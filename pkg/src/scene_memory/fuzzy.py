"""
模糊度运算

Zadeh 语义下的合取/析取，以及所有基数限制共用的左肩隶属函数。
"""

import math
from dataclasses import dataclass

from .errors import DegreeError

# 浮点比较的绝对容差
TOLERANCE = 1e-9

Degree = float


def check_degree(value: float, what: str = "degree") -> Degree:
    """校验并返回一个 [0,1] 内的模糊度"""
    value = float(value)
    if math.isnan(value) or value < 0.0 or value > 1.0:
        raise DegreeError(f"{what} must lie in [0, 1], got {value!r}")
    return value


def tnorm(x: Degree, y: Degree) -> Degree:
    """Zadeh 合取 (min)"""
    return min(check_degree(x), check_degree(y))


def tconorm(x: Degree, y: Degree) -> Degree:
    """Zadeh 析取 (max)"""
    return max(check_degree(x), check_degree(y))


@dataclass(frozen=True)
class LeftShoulder:
    """
    左肩隶属函数 aΩ(k)，即 "至少 k 个" 的模糊限制

    k 为参考基数，a 为模糊度；k_minus = k·(1−a)。
    c ≥ k 时完全满足，c ≤ k_minus 时不满足，中间线性插值。
    """

    k: float
    a: float

    def __post_init__(self):
        if math.isnan(self.k) or math.isinf(self.k) or self.k < 0:
            raise DegreeError(f"shoulder reference k must be a finite value >= 0, got {self.k!r}")
        check_degree(self.a, "fuzziness a")

    @property
    def k_minus(self) -> float:
        return self.k * (1.0 - self.a)

    def membership(self, c: float) -> Degree:
        """
        计算基数 c 对该限制的满足度

        Args:
            c: 场景中某个信念的基数（≥ 0）

        Returns:
            [0,1] 内的满足度
        """
        if math.isnan(c) or c < 0:
            raise DegreeError(f"cardinality must be >= 0, got {c!r}")

        if c >= self.k:
            return 1.0

        k_minus = self.k_minus
        # 退化情况（a = 0）：在 k 处的阶跃
        if self.k <= k_minus:
            return 0.0
        if c <= k_minus:
            return 0.0

        return (c - k_minus) / (self.k - k_minus)

    def to_dict(self) -> dict[str, float]:
        return {"k": self.k, "a": self.a}


def membership(shoulder: LeftShoulder, c: float) -> Degree:
    """LeftShoulder.membership 的函数形式"""
    return shoulder.membership(c)

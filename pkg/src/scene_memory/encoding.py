"""
场景编码

将（角色, 类型）对具体化为信念，并用 σ-count 计算场景中每个信念的模糊基数。

约定：固定类型作用于断言的主语（第一个元素），
对类型的析取遍历宾语的全部已声明隶属度。
"""

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any, NamedTuple

from .errors import EncodingError
from .fuzzy import Degree
from .signature import Assertion, Observation, Signature

logger = logging.getLogger(__name__)

REIFY_SEPARATOR = "⊕"


class ReifiedRole(NamedTuple):
    """具体化角色 r⊕Γ"""

    role: str
    type: str

    def __str__(self) -> str:
        return f"{self.role}{REIFY_SEPARATOR}{self.type}"

    @classmethod
    def parse(cls, text: str) -> "ReifiedRole":
        role, sep, type_name = text.partition(REIFY_SEPARATOR)
        if not sep or not role or not type_name:
            raise EncodingError(f"not a reified role: {text!r}")
        return cls(role, type_name)


@dataclass(frozen=True)
class EncodedScene:
    """
    编码后的场景 ε

    beliefs 只保存基数严格为正的信念；total 为全部基数之和（相似度的分母）。
    """

    scene_id: str
    beliefs: Mapping[ReifiedRole, float] = field(default_factory=dict)

    @property
    def total(self) -> float:
        return sum(self.beliefs.values())

    def cardinality(self, rr: ReifiedRole) -> float:
        """信念的基数，缺失时为 0"""
        return self.beliefs.get(rr, 0.0)

    def is_empty(self) -> bool:
        return not self.beliefs

    def to_dict(self) -> dict[str, Any]:
        return {
            "scene_id": self.scene_id,
            "beliefs": {str(rr): c for rr, c in self.beliefs.items()},
            "total": self.total,
        }


def reify(sig: Signature, role: str, type_name: str) -> ReifiedRole:
    """
    具体化操作 R(r_z, Γ_h)

    Args:
        sig: 输入接口
        role: 角色名
        type_name: 类型名

    Returns:
        具体化角色
    """
    if not sig.has_role(role):
        raise EncodingError(f"undeclared role '{role}'")
    if not sig.has_type(type_name):
        raise EncodingError(f"undeclared type '{type_name}'")
    return ReifiedRole(role, type_name)


def fact_contribution(
    sig: Signature,
    assertion: Assertion,
    subject_types: Mapping[str, Degree],
    object_types: Mapping[str, Degree],
    rr: ReifiedRole,
) -> float:
    """
    单条事实对一个信念的贡献 c_izh = min(p_iz, p_ih, max_s p_is)

    主语在 rr.type 中没有隶属度、或宾语没有任何已声明类型时贡献为 0。
    """
    if assertion.role != rr.role:
        raise EncodingError(f"assertion role '{assertion.role}' does not match {rr}")

    subject_degree = subject_types.get(rr.type)
    if subject_degree is None:
        return 0.0

    object_degrees = [d for t, d in object_types.items() if sig.has_type(t)]
    if not object_degrees:
        return 0.0

    return min(assertion.degree, subject_degree, max(object_degrees))


def encode(sig: Signature, obs: Observation) -> EncodedScene:
    """
    编码函数 E：对每个具体化角色累加所有断言的贡献（σ-count）

    Args:
        sig: 输入接口
        obs: 已规范化的观测

    Returns:
        编码后的场景
    """
    beliefs: dict[ReifiedRole, float] = {}

    for assertion in obs.assertions:
        subject_types = obs.elements.get(assertion.subject, {})
        object_types = obs.elements.get(assertion.obj, {})

        # 只有主语具有隶属度的类型才可能产生非零贡献
        for type_name in sig.types:
            if type_name not in subject_types:
                continue
            rr = ReifiedRole(assertion.role, type_name)
            contribution = fact_contribution(sig, assertion, subject_types, object_types, rr)
            if contribution > 0:
                beliefs[rr] = beliefs.get(rr, 0.0) + contribution

    scene = EncodedScene(scene_id=str(obs.timestamp), beliefs=beliefs)
    logger.debug("encoded scene %s: %s", scene.scene_id, {str(k): v for k, v in beliefs.items()})
    return scene

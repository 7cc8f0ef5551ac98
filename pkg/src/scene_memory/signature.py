"""
输入接口

定义先验的角色与类型（Signature），并按接口校验、规范化原始观测。
"""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any, NamedTuple

from .errors import DegreeError, ObservationError, SignatureError
from .fuzzy import TOLERANCE, Degree, check_degree


@dataclass(frozen=True)
class Signature:
    """
    输入接口：w 个角色、v 个类型，以及角色之间的逆/对称关系

    逆角色对以无序对保存；对称角色是自身的逆，不出现在任何逆角色对中。
    """

    roles: tuple[str, ...]
    types: tuple[str, ...]
    inverse_pairs: frozenset[frozenset[str]] = frozenset()
    symmetric_roles: frozenset[str] = frozenset()
    _inverse: dict[str, str] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        _check_names(self.roles, "role")
        _check_names(self.types, "type")

        inverse: dict[str, str] = {}
        for pair in self.inverse_pairs:
            members = sorted(pair)
            if len(members) != 2:
                raise SignatureError(f"inverse pair must name two distinct roles: {members}")
            for role in members:
                if role not in self.roles:
                    raise SignatureError(f"inverse pair references unknown role '{role}'")
                if role in inverse:
                    raise SignatureError(f"role '{role}' appears in more than one inverse pair")
                if role in self.symmetric_roles:
                    raise SignatureError(f"symmetric role '{role}' cannot be in an inverse pair")
            inverse[members[0]] = members[1]
            inverse[members[1]] = members[0]

        for role in self.symmetric_roles:
            if role not in self.roles:
                raise SignatureError(f"symmetric role '{role}' is not a declared role")
            inverse[role] = role

        object.__setattr__(self, "_inverse", inverse)

    @property
    def w(self) -> int:
        return len(self.roles)

    @property
    def v(self) -> int:
        return len(self.types)

    def has_role(self, role: str) -> bool:
        return role in self.roles

    def has_type(self, type_name: str) -> bool:
        return type_name in self.types

    def inverse_of(self, role: str) -> str | None:
        """返回角色的逆（对称角色返回自身），没有则返回 None"""
        return self._inverse.get(role)

    def is_symmetric(self, role: str) -> bool:
        return role in self.symmetric_roles

    def to_dict(self) -> dict[str, Any]:
        """转换为字典"""
        return {
            "roles": list(self.roles),
            "types": list(self.types),
            "inverse_pairs": sorted(sorted(pair) for pair in self.inverse_pairs),
            "symmetric_roles": sorted(self.symmetric_roles),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Signature":
        try:
            return build_signature(
                data["roles"],
                data["types"],
                data.get("inverse_pairs", []),
                data.get("symmetric_roles", []),
            )
        except (KeyError, TypeError) as e:
            raise SignatureError(f"malformed signature: {e}") from e


def _check_names(names: tuple[str, ...], what: str):
    if not names:
        raise SignatureError(f"at least one {what} is required")
    seen: set[str] = set()
    for name in names:
        if not isinstance(name, str) or not name.strip():
            raise SignatureError(f"{what} names must be nonempty strings, got {name!r}")
        if name in seen:
            raise SignatureError(f"duplicate {what} '{name}'")
        seen.add(name)


def build_signature(
    roles: Iterable[str],
    types: Iterable[str],
    inverse_pairs: Iterable[Iterable[str]] = (),
    symmetric_roles: Iterable[str] = (),
) -> Signature:
    """
    构建并校验输入接口

    Args:
        roles: 角色名列表（有序）
        types: 类型名列表（有序）
        inverse_pairs: 互逆的角色对
        symmetric_roles: 对称角色

    Returns:
        校验后的 Signature
    """
    pairs = []
    for pair in inverse_pairs:
        members = list(pair)
        if len(members) != 2 or members[0] == members[1]:
            raise SignatureError(f"inverse pair must name two distinct roles: {members}")
        pairs.append(frozenset(members))

    if len(set(pairs)) != len(pairs):
        raise SignatureError("duplicate inverse pair")

    return Signature(
        roles=tuple(roles),
        types=tuple(types),
        inverse_pairs=frozenset(pairs),
        symmetric_roles=frozenset(symmetric_roles),
    )


class Assertion(NamedTuple):
    """一条模糊关系断言 ⟨subject, obj, role⟩ : degree"""

    subject: str
    obj: str
    role: str
    degree: Degree

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.subject, self.obj, self.role)


@dataclass(frozen=True)
class Observation:
    """
    一个时间片的事实集合

    elements: 元素 id -> {类型名: 隶属度}，缺失的类型表示未知（开放世界）
    assertions: 元素之间的模糊关系断言
    """

    timestamp: int
    elements: Mapping[str, Mapping[str, Degree]] = field(default_factory=dict)
    assertions: tuple[Assertion, ...] = ()

    def to_record(self) -> dict[str, Any]:
        """转换为日志记录（JSON 行）"""
        return {
            "t": self.timestamp,
            "elements": {eid: dict(types) for eid, types in self.elements.items()},
            "assertions": [[a.subject, a.obj, a.role, a.degree] for a in self.assertions],
        }


def validate_observation(sig: Signature, obs: Observation):
    """检查观测中的元素、类型、角色和模糊度是否都符合接口"""
    for element_id, memberships in obs.elements.items():
        for type_name, degree in memberships.items():
            if not sig.has_type(type_name):
                raise ObservationError(
                    f"element '{element_id}' uses undeclared type '{type_name}' (t={obs.timestamp})"
                )
            try:
                check_degree(degree, f"membership of '{element_id}' in {type_name}")
            except DegreeError as e:
                raise ObservationError(str(e)) from e

    for assertion in obs.assertions:
        if not sig.has_role(assertion.role):
            raise ObservationError(
                f"assertion uses undeclared role '{assertion.role}' (t={obs.timestamp})"
            )
        for element_id in (assertion.subject, assertion.obj):
            if element_id not in obs.elements:
                raise ObservationError(
                    f"assertion references undeclared element '{element_id}' (t={obs.timestamp})"
                )
        try:
            check_degree(assertion.degree, f"degree of {assertion.key}")
        except DegreeError as e:
            raise ObservationError(str(e)) from e


def normalize_observation(sig: Signature, obs: Observation) -> Observation:
    """
    补全逆断言

    对每条具有逆角色（或对称角色）的断言，确保镜像断言以相同的模糊度存在：
    缺失则补上，已存在则校验模糊度一致。

    Args:
        sig: 输入接口
        obs: 原始观测

    Returns:
        规范化后的观测（幂等）
    """
    validate_observation(sig, obs)

    index: dict[tuple[str, str, str], float] = {}
    for assertion in obs.assertions:
        if assertion.key in index:
            raise ObservationError(f"duplicate assertion {assertion.key} (t={obs.timestamp})")
        index[assertion.key] = assertion.degree

    result = list(obs.assertions)
    for assertion in obs.assertions:
        inverse = sig.inverse_of(assertion.role)
        if inverse is None:
            continue

        mirror = Assertion(assertion.obj, assertion.subject, inverse, assertion.degree)
        existing = index.get(mirror.key)
        if existing is None:
            index[mirror.key] = mirror.degree
            result.append(mirror)
        elif abs(existing - assertion.degree) > TOLERANCE:
            raise ObservationError(
                f"conflicting mirror for {assertion.key}: {assertion.degree} vs "
                f"{mirror.key}: {existing} (t={obs.timestamp})"
            )

    if len(result) == len(obs.assertions):
        return obs

    return Observation(timestamp=obs.timestamp, elements=obs.elements, assertions=tuple(result))

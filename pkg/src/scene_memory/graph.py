"""
记忆图

使用 NetworkX 保存学习到的场景类别，边 child -> parent 的 weight
为模糊包含度 p(child ⊑ parent)，只保存大于 0 的边。
同时提供学习、分类与相似度计算。
"""

import logging
import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field, replace
from typing import Any

try:
    import networkx as nx
except ImportError:
    nx = None

from .encoding import EncodedScene, ReifiedRole
from .errors import CategoryError, InvariantViolation
from .fuzzy import TOLERANCE, Degree, LeftShoulder, check_degree

logger = logging.getLogger(__name__)

ROOT_ID = "ROOT"


@dataclass(frozen=True)
class Category:
    """
    场景类别 Φ

    restrictions: 具体化角色 -> 左肩限制（学习后不再改变）
    score: 巩固分数
    """

    id: str
    restrictions: Mapping[ReifiedRole, LeftShoulder] = field(default_factory=dict)
    score: float = 0.0
    is_root: bool = False

    @classmethod
    def root(cls) -> "Category":
        """代表空场景的根节点"""
        return cls(id=ROOT_ID, restrictions={}, score=0.0, is_root=True)

    @property
    def total_k(self) -> float:
        """全部限制的 k 之和（相似度的分子）"""
        return sum(r.k for r in self.restrictions.values())

    def k(self, rr: ReifiedRole) -> float:
        """对某信念的限制 k，未限制时为 0"""
        shoulder = self.restrictions.get(rr)
        return shoulder.k if shoulder else 0.0

    def with_score(self, score: float) -> "Category":
        return replace(self, score=score)

    def describe(self) -> str:
        """限制的简短文本形式，如 'connected⊕LEG ≥ 0.99'"""
        if self.is_root:
            return "empty scene"
        return ", ".join(f"{rr} ≥ {r.k:.4g}" for rr, r in self.restrictions.items())


def learn(
    scene: EncodedScene, q0: float, a: float, category_id: str | None = None
) -> Category:
    """
    学习函数 L(ε, q0, a)

    对场景中的每个信念 (rr -> c)，新类别都带有限制 aΩ(c)。

    Args:
        scene: 编码后的场景
        q0: 初始分数
        a: 模糊度
        category_id: 类别 id，缺省为 C<scene_id>

    Returns:
        新类别
    """
    if scene.is_empty():
        raise CategoryError(f"cannot learn from scene {scene.scene_id}: it has no beliefs")
    if not (math.isfinite(q0) and q0 >= 0):
        raise CategoryError(f"initial score must be a finite value >= 0, got {q0}")
    check_degree(a, "fuzziness a")

    restrictions = {rr: LeftShoulder(k=c, a=a) for rr, c in scene.beliefs.items()}
    return Category(
        id=category_id or f"C{scene.scene_id}",
        restrictions=restrictions,
        score=q0,
    )


def subsumption_degree(child: Category, parent: Category) -> Degree:
    """
    模糊包含度 p(child ⊑ parent)

    对父类别的每条限制 (k_j, a)，取子类别同一信念的 k_i（未限制为 0），
    该信念的包含度为 membership(aΩ(k_j), k_i)；整体取最小值。
    """
    if parent.is_root:
        return 1.0

    degree = 1.0
    for rr, shoulder in parent.restrictions.items():
        degree = min(degree, shoulder.membership(child.k(rr)))
        if degree == 0.0:
            break
    return degree


def classification_degree(category: Category, scene: EncodedScene) -> Degree:
    """场景对类别全部限制的最小满足度；缺失的信念按基数 0 计算"""
    degree = 1.0
    for rr, shoulder in category.restrictions.items():
        degree = min(degree, shoulder.membership(scene.cardinality(rr)))
        if degree == 0.0:
            break
    return degree


def similarity(category: Category, scene: EncodedScene) -> float:
    """
    相似度 d = Σk / Σc

    Args:
        category: 类别
        scene: 场景（总基数必须为正）

    Returns:
        相似度（可能略大于 1）
    """
    total = scene.total
    if total <= 0:
        raise CategoryError(f"similarity is undefined for scene {scene.scene_id} with no beliefs")
    return category.total_k / total


@dataclass(frozen=True)
class ClassificationEntry:
    """分类图 M* 中一个节点的分类度与相似度"""

    degree: Degree
    similarity: float


@dataclass
class ClassificationResult:
    """场景的分类结果（不含根节点）"""

    scene_id: str
    entries: dict[str, ClassificationEntry] = field(default_factory=dict)

    @property
    def classified(self) -> bool:
        return bool(self.entries)

    def best(self) -> str | None:
        """分类度最高（其次相似度最高）的类别"""
        if not self.entries:
            return None
        return max(self.entries, key=lambda cid: (self.entries[cid].degree, self.entries[cid].similarity))

    def to_dict(self) -> dict[str, Any]:
        return {
            "scene_id": self.scene_id,
            "classified": self.classified,
            "entries": {
                cid: {"degree": e.degree, "similarity": e.similarity}
                for cid, e in self.entries.items()
            },
        }


def _check_score(cid: str, score: float):
    if not (math.isfinite(score) and score >= 0):
        raise CategoryError(f"category '{cid}' has an invalid score {score!r}")


class MemoryGraph:
    """
    记忆图 M

    每次修改都返回新的图（快照语义），原图保持不变。
    """

    def __init__(self, categories: Iterable[Category] | None = None):
        """
        初始化记忆图

        Args:
            categories: 非根类别（根节点总是自动加入）
        """
        if nx is None:
            raise ImportError("networkx is required. Install with: pip install networkx")

        self._graph: nx.DiGraph = nx.DiGraph()
        self._graph.add_node(ROOT_ID, category=Category.root())

        for cat in categories or []:
            self._check_new(cat)
            self._graph.add_node(cat.id, category=cat)

        self._restructure()

    @classmethod
    def empty(cls) -> "MemoryGraph":
        """只有根节点的记忆"""
        return cls()

    # ---- 结构 -------------------------------------------------------------

    def _check_new(self, cat: Category):
        if cat.is_root or cat.id == ROOT_ID:
            raise CategoryError("the root category is unique and cannot be added")
        if cat.id in self._graph:
            raise CategoryError(f"duplicate category id '{cat.id}'")
        if not any(r.k > 0 for r in cat.restrictions.values()):
            raise CategoryError(f"category '{cat.id}' has no restriction with k > 0")
        _check_score(cat.id, cat.score)

    def _connect(self, node: str):
        """计算 node 与其余所有节点之间双向的包含度"""
        cat = self.get(node)
        for other_id in self._graph.nodes:
            if other_id == node:
                continue
            other = self.get(other_id)
            for child, parent in ((cat, other), (other, cat)):
                weight = subsumption_degree(child, parent)
                if weight > 0:
                    self._graph.add_edge(child.id, parent.id, weight=weight)

    def _restructure(self):
        """结构化函数 S：按当前类别重新计算全部边"""
        self._graph.remove_edges_from(list(self._graph.edges))
        for child_id in self._graph.nodes:
            child = self.get(child_id)
            for parent_id in self._graph.nodes:
                if parent_id == child_id:
                    continue
                weight = subsumption_degree(child, self.get(parent_id))
                if weight > 0:
                    self._graph.add_edge(child_id, parent_id, weight=weight)

    def _copy(self) -> "MemoryGraph":
        clone = MemoryGraph.__new__(MemoryGraph)
        clone._graph = self._graph.copy()
        return clone

    def add_category(self, cat: Category) -> "MemoryGraph":
        """
        加入新类别并更新边

        已有类别的分数与彼此之间的边保持不变（它们之间的包含度与新类别无关）。
        """
        self._check_new(cat)
        new = self._copy()
        new._graph.add_node(cat.id, category=cat)
        new._connect(cat.id)
        logger.debug("added category %s (%s), score %.4g", cat.id, cat.describe(), cat.score)
        return new

    def remove_categories(self, ids: Iterable[str]) -> "MemoryGraph":
        """删除类别并在剩余类别之间重新结构化"""
        ids = list(ids)
        for cid in ids:
            if cid == ROOT_ID:
                raise CategoryError("the root category cannot be removed")
            if cid not in self._graph:
                raise CategoryError(f"unknown category '{cid}'")

        new = self._copy()
        new._graph.remove_nodes_from(ids)
        new._restructure()
        if ids:
            logger.debug("removed categories %s", ", ".join(ids))
        return new

    def with_scores(self, scores: Mapping[str, float]) -> "MemoryGraph":
        """结构不变，仅更新分数"""
        new = self._copy()
        for cid, score in scores.items():
            if cid == ROOT_ID:
                raise CategoryError("the root category carries no score")
            _check_score(cid, score)
            new._graph.nodes[cid]["category"] = new.get(cid).with_score(score)
        return new

    def fresh_id(self, base: str) -> str:
        """以 base 为基础生成未被占用的类别 id"""
        if base not in self._graph:
            return base
        n = 2
        while f"{base}-{n}" in self._graph:
            n += 1
        return f"{base}-{n}"

    # ---- 查询 -------------------------------------------------------------

    def get(self, cid: str) -> Category:
        try:
            category: Category = self._graph.nodes[cid]["category"]
        except KeyError:
            raise CategoryError(f"unknown category '{cid}'") from None
        return category

    def __contains__(self, cid: object) -> bool:
        return cid in self._graph

    def __len__(self) -> int:
        return self._graph.number_of_nodes()

    @property
    def root(self) -> Category:
        return self.get(ROOT_ID)

    @property
    def categories(self) -> list[Category]:
        """全部类别（根节点在前，其余按加入顺序）"""
        return [data["category"] for _, data in self._graph.nodes(data=True)]

    def non_root(self) -> Iterator[Category]:
        for cat in self.categories:
            if not cat.is_root:
                yield cat

    @property
    def scores(self) -> dict[str, float]:
        return {cat.id: cat.score for cat in self.non_root()}

    def edges(self) -> dict[tuple[str, str], float]:
        """(child, parent) -> 包含度"""
        return {(c, p): data["weight"] for c, p, data in self._graph.edges(data=True)}

    def edge_weight(self, child: str, parent: str) -> float:
        data = self._graph.get_edge_data(child, parent)
        return data["weight"] if data else 0.0

    def parents(self, cid: str, min_weight: float = 1.0) -> list[str]:
        """cid 的父类别（包含度 ≥ min_weight）"""
        return sorted(
            p for _, p, w in self._graph.out_edges(cid, data="weight") if w >= min_weight
        )

    def children(self, cid: str, min_weight: float = 1.0) -> list[str]:
        """cid 的子类别（包含度 ≥ min_weight）"""
        return sorted(c for c, _, w in self._graph.in_edges(cid, data="weight") if w >= min_weight)

    def equivalents(self, cid: str) -> list[str]:
        """
        与 cid 互相以 1 包含的类别

        所有限制的模糊度 a 相同时，这等价于限制完全相同；a 不同的类别
        可以互相以 1 包含，但对同一场景的分类度不同。
        """
        return sorted(
            p for p in self.parents(cid) if self.edge_weight(p, cid) >= 1.0 and p != ROOT_ID
        )

    def chain(self) -> "nx.DiGraph":
        """
        权重为 1 的边构成的层次，经过传递约简

        等价类别之间的互边构成环，此时无法做传递约简，直接返回权重 1 子图。
        """
        strong = nx.DiGraph()
        strong.add_nodes_from(self._graph.nodes)
        strong.add_edges_from(
            (c, p) for c, p, w in self._graph.edges(data="weight") if w >= 1.0
        )
        if not nx.is_directed_acyclic_graph(strong):
            return strong
        reduced = nx.transitive_reduction(strong)
        reduced.add_nodes_from(strong.nodes)
        return reduced

    def to_networkx(self) -> "nx.DiGraph":
        """返回底层图的副本"""
        return self._graph.copy()

    def get_statistics(self) -> dict[str, Any]:
        """获取图统计信息"""
        strong = self.chain()
        depth = nx.dag_longest_path_length(strong) if nx.is_directed_acyclic_graph(strong) else None
        return {
            "nodes": self._graph.number_of_nodes(),
            "categories": self._graph.number_of_nodes() - 1,
            "edges": self._graph.number_of_edges(),
            "crisp_edges": sum(1 for _, _, w in self._graph.edges(data="weight") if w >= 1.0),
            "fuzzy_edges": sum(1 for _, _, w in self._graph.edges(data="weight") if w < 1.0),
            "depth": depth,
        }

    # ---- 分类 -------------------------------------------------------------

    def classify(self, scene: EncodedScene) -> ClassificationResult:
        """
        分类函数 C

        对每个非根类别计算分类度；分类度大于 0 的类别构成分类图 M*，
        并附带相似度。
        """
        result = ClassificationResult(scene_id=scene.scene_id)
        for cat in self.non_root():
            degree = classification_degree(cat, scene)
            if degree > 0:
                result.entries[cat.id] = ClassificationEntry(
                    degree=degree, similarity=similarity(cat, scene)
                )
        return result

    # ---- 校验 -------------------------------------------------------------

    def verify(self):
        """重新计算全部两两包含度，与已保存的边逐一比对"""
        expected: dict[tuple[str, str], float] = {}
        for child in self.categories:
            for parent in self.categories:
                if child.id == parent.id:
                    continue
                weight = subsumption_degree(child, parent)
                if weight > 0:
                    expected[(child.id, parent.id)] = weight

        stored = self.edges()
        if stored.keys() != expected.keys():
            missing = sorted(expected.keys() - stored.keys())
            extra = sorted(stored.keys() - expected.keys())
            raise InvariantViolation(f"edge set mismatch: missing {missing}, unexpected {extra}")
        for key, weight in expected.items():
            if abs(stored[key] - weight) > TOLERANCE:
                raise InvariantViolation(f"edge {key} stores {stored[key]}, expected {weight}")

        for cat in self.non_root():
            if self.edge_weight(cat.id, ROOT_ID) != 1.0:
                raise InvariantViolation(f"category '{cat.id}' is not crisply under the root")

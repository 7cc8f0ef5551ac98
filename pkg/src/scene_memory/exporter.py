"""
记忆导出与持久化

- DOT：权重为 1 的边画成实线（可选传递约简），模糊边画成带权重标签的虚线
- JSON：规范化的记忆文件，save_memory/load_memory 往返后字节一致
"""

import json
import logging
from pathlib import Path
from typing import Any

from jinja2 import Environment

from .encoding import ReifiedRole
from .errors import ExportError, MemoryFormatError, SceneMemoryError
from .fuzzy import TOLERANCE, LeftShoulder
from .graph import ROOT_ID, Category, MemoryGraph

logger = logging.getLogger(__name__)

MEMORY_FORMAT = "scene-memory"
MEMORY_FORMAT_VERSION = 1

DOT_TEMPLATE = """\
digraph memory {
  rankdir=BT;
  node [shape=box, fontname="Helvetica"];
{% for node in nodes %}
  "{{ node.id }}" [label="{{ node.label }}"{% if node.root %}, shape=ellipse{% endif %}];
{% endfor %}
{% for edge in edges %}
  "{{ edge.child }}" -> "{{ edge.parent }}" [{{ edge.style }}];
{% endfor %}
}
"""


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


class GraphExporter:
    """记忆图导出器"""

    # 边样式（按包含度）
    EDGE_STYLES = {
        "crisp": "style=solid",  # 实线 - 权重 1
        "fuzzy": 'style=dashed, label="{weight:.3f}"',  # 虚线 - 模糊包含
    }

    def __init__(self, memory: MemoryGraph):
        self.memory = memory
        self._env = Environment(trim_blocks=True, lstrip_blocks=True, autoescape=False)

    def _node_label(self, cat: Category) -> str:
        if cat.is_root:
            return "ROOT"
        lines = [cat.id, f"q={cat.score:.3f}"]
        lines += [f"{rr} ≥ {r.k:.3g}" for rr, r in cat.restrictions.items()]
        return "\\n".join(_dot_escape(line) for line in lines)

    def to_dot(self, reduce: bool = True) -> str:
        """
        生成 Graphviz DOT 文本

        Args:
            reduce: 是否对权重为 1 的边做传递约简

        Returns:
            DOT 文本
        """
        nodes = [
            {"id": _dot_escape(cat.id), "label": self._node_label(cat), "root": cat.is_root}
            for cat in self.memory.categories
        ]

        all_edges = self.memory.edges()
        if reduce:
            crisp = sorted(self.memory.chain().edges)
        else:
            crisp = sorted(key for key, w in all_edges.items() if w >= 1.0)
        fuzzy = sorted((key, w) for key, w in all_edges.items() if w < 1.0)

        edges = [
            {"child": _dot_escape(c), "parent": _dot_escape(p), "style": self.EDGE_STYLES["crisp"]}
            for c, p in crisp
        ]
        edges += [
            {
                "child": _dot_escape(c),
                "parent": _dot_escape(p),
                # 模糊边的标签不会显示为 1.000
                "style": self.EDGE_STYLES["fuzzy"].format(weight=min(w, 0.999)),
            }
            for (c, p), w in fuzzy
        ]

        return self._env.from_string(DOT_TEMPLATE).render(nodes=nodes, edges=edges)

    def to_dict(self) -> dict[str, Any]:
        """规范化的记忆字典（类别按加入顺序，边按 (child, parent) 排序）"""
        categories = [
            {
                "id": cat.id,
                "score": float(cat.score),
                "restrictions": [
                    {"role": rr.role, "type": rr.type, "k": float(r.k), "a": float(r.a)}
                    for rr, r in cat.restrictions.items()
                ],
            }
            for cat in self.memory.non_root()
        ]
        edges = [
            {"child": c, "parent": p, "weight": float(w)}
            for (c, p), w in sorted(self.memory.edges().items())
        ]
        return {
            "format": MEMORY_FORMAT,
            "version": MEMORY_FORMAT_VERSION,
            "root": ROOT_ID,
            "categories": categories,
            "edges": edges,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def save_memory(memory: MemoryGraph) -> bytes:
    """
    序列化记忆

    Args:
        memory: 记忆图

    Returns:
        UTF-8 编码的规范 JSON
    """
    return GraphExporter(memory).to_json().encode("utf-8")


def _require(data: dict[str, Any], key: str, kind: type | tuple[type, ...], where: str) -> Any:
    if key not in data:
        raise MemoryFormatError(f"{where}: missing '{key}'")
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, kind):
        raise MemoryFormatError(f"{where}: '{key}' has the wrong type")
    return value


def _parse_category(data: Any, index: int) -> Category:
    where = f"category #{index}"
    if not isinstance(data, dict):
        raise MemoryFormatError(f"{where}: must be an object")

    cid = _require(data, "id", str, where)
    score = float(_require(data, "score", (int, float), where))
    restrictions: dict[ReifiedRole, LeftShoulder] = {}

    for item in _require(data, "restrictions", list, where):
        if not isinstance(item, dict):
            raise MemoryFormatError(f"{where}: restriction must be an object")
        rr = ReifiedRole(_require(item, "role", str, where), _require(item, "type", str, where))
        if rr in restrictions:
            raise MemoryFormatError(f"{where}: duplicate restriction on {rr}")
        try:
            restrictions[rr] = LeftShoulder(
                k=float(_require(item, "k", (int, float), where)),
                a=float(_require(item, "a", (int, float), where)),
            )
        except SceneMemoryError as e:
            raise MemoryFormatError(f"{where}: {e}") from e

    return Category(id=cid, restrictions=restrictions, score=score)


def load_memory(data: bytes | str) -> MemoryGraph:
    """
    反序列化记忆

    边由类别重新计算；文件中给出的边必须与重新计算的结果一致，
    否则视为文件已损坏。

    Args:
        data: save_memory 的输出

    Returns:
        记忆图
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise MemoryFormatError(f"memory file is not UTF-8: {e}") from e

    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise MemoryFormatError(f"memory file is not valid JSON: {e.msg}") from e

    if not isinstance(doc, dict) or doc.get("format") != MEMORY_FORMAT:
        raise MemoryFormatError(f"not a {MEMORY_FORMAT} file")
    if doc.get("version") != MEMORY_FORMAT_VERSION:
        raise MemoryFormatError(f"unsupported memory format version {doc.get('version')!r}")

    categories = [
        _parse_category(item, i) for i, item in enumerate(_require(doc, "categories", list, "memory"))
    ]
    try:
        memory = MemoryGraph(categories)
    except SceneMemoryError as e:
        raise MemoryFormatError(f"invalid memory: {e}") from e

    if "edges" in doc:
        _check_edges(memory, doc["edges"])
    memory.verify()

    logger.debug("loaded memory with %d categories", len(memory) - 1)
    return memory


def _check_edges(memory: MemoryGraph, raw: Any):
    if not isinstance(raw, list):
        raise MemoryFormatError("'edges' must be a list")

    stored: dict[tuple[str, str], float] = {}
    for item in raw:
        if not isinstance(item, dict):
            raise MemoryFormatError("edge must be an object")
        key = (_require(item, "child", str, "edge"), _require(item, "parent", str, "edge"))
        stored[key] = float(_require(item, "weight", (int, float), "edge"))

    expected = memory.edges()
    if stored.keys() != expected.keys():
        raise MemoryFormatError("stored edges do not match the categories")
    for key, weight in expected.items():
        if abs(stored[key] - weight) > TOLERANCE:
            raise MemoryFormatError(
                f"edge {key[0]} -> {key[1]} stores {stored[key]}, recomputed {weight}"
            )


def export_graph(memory: MemoryGraph, fmt: str = "dot", reduce: bool = True) -> bytes:
    """
    导出记忆图

    Args:
        memory: 记忆图
        fmt: "dot" 或 "json"
        reduce: DOT 格式下是否对权重为 1 的边做传递约简

    Returns:
        导出内容
    """
    exporter = GraphExporter(memory)
    if fmt == "dot":
        return exporter.to_dot(reduce=reduce).encode("utf-8")
    if fmt == "json":
        return exporter.to_json().encode("utf-8")
    raise ExportError(f"unknown export format '{fmt}'")


def write_output(content: bytes, path: str | Path):
    """写入导出内容"""
    try:
        Path(path).write_bytes(content)
    except OSError as e:
        raise ExportError(f"cannot write {path}: {e}") from e

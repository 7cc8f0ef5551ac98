"""
模糊场景记忆

从演示中增量学习场景类别，并以模糊包含度组织成记忆图。
"""

from .config import SceneMemoryConfig, load_config
from .demonstration import DemonstrationLog, LogMode, PositionFrame, ingest_positions, read_log
from .encoding import EncodedScene, ReifiedRole, encode
from .errors import SceneMemoryError
from .exporter import export_graph, load_memory, save_memory
from .fuzzy import LeftShoulder, membership
from .graph import Category, MemoryGraph, classification_degree, learn, similarity, subsumption_degree
from .memory import MemoryManager, MemoryParams
from .replay import RunReport, replay
from .signature import Assertion, Observation, Signature, build_signature, normalize_observation

__version__ = "0.1.0"
__all__ = [
    "Assertion",
    "Category",
    "DemonstrationLog",
    "EncodedScene",
    "LeftShoulder",
    "LogMode",
    "MemoryGraph",
    "MemoryManager",
    "MemoryParams",
    "Observation",
    "PositionFrame",
    "ReifiedRole",
    "RunReport",
    "SceneMemoryConfig",
    "SceneMemoryError",
    "Signature",
    "build_signature",
    "classification_degree",
    "encode",
    "export_graph",
    "ingest_positions",
    "learn",
    "load_config",
    "load_memory",
    "membership",
    "normalize_observation",
    "read_log",
    "replay",
    "save_memory",
    "similarity",
    "subsumption_degree",
]

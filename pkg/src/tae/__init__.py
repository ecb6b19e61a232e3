"""Headless text-animation editing engine with LLM agent orchestration."""

from .engine import ProjectEngine, evaluate_clip, snapshot_frame
from .meta import MetaClass, MetaField, MetaRegistry
from .model import Project
from .presets import build_registry
from .serialize import deserialize_project, serialize_project

__all__ = [
    "MetaClass",
    "MetaField",
    "MetaRegistry",
    "Project",
    "ProjectEngine",
    "build_registry",
    "deserialize_project",
    "evaluate_clip",
    "serialize_project",
    "snapshot_frame",
]

__version__ = "0.1.0"

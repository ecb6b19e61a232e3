"""On-disk project store: one canonical JSON document per project, written
with atomic replace so a crash mid-save never leaves a torn file."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Optional

from .errors import UnknownProject
from .model import Project
from .serialize import deserialize_project, serialize_project

PROJECT_SUFFIX = ".tae.json"
SESSIONS_SUFFIX = ".sessions.json"


class ProjectStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.assets_dir = self.root / "assets"

    def _path(self, project_id: str) -> Path:
        return self.root / f"{project_id}{PROJECT_SUFFIX}"

    def _sessions_path(self, project_id: str) -> Path:
        return self.root / f"{project_id}{SESSIONS_SUFFIX}"

    def _atomic_write(self, path: Path, text: str) -> None:
        fd, tmp = tempfile.mkstemp(
            dir=str(self.root), prefix=path.name + ".", suffix=".tmp"
        )
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(text)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def save(self, project: Project) -> Path:
        path = self._path(project.id)
        self._atomic_write(path, serialize_project(project))
        return path

    def load(self, project_id: str) -> Project:
        path = self._path(project_id)
        if not path.exists():
            raise UnknownProject(f"no stored project {project_id}", id=project_id)
        return deserialize_project(path.read_text(encoding="utf-8"))

    def exists(self, project_id: str) -> bool:
        return self._path(project_id).exists()

    def delete(self, project_id: str) -> None:
        path = self._path(project_id)
        if not path.exists():
            raise UnknownProject(f"no stored project {project_id}", id=project_id)
        path.unlink()
        sessions = self._sessions_path(project_id)
        if sessions.exists():
            sessions.unlink()

    def list_ids(self) -> list[str]:
        return sorted(
            p.name[: -len(PROJECT_SUFFIX)]
            for p in self.root.glob(f"*{PROJECT_SUFFIX}")
        )

    # -- chat session sidecar ------------------------------------------------

    def save_sessions(self, project_id: str, sessions: list[dict[str, Any]]) -> None:
        text = json.dumps({"sessions": sessions}, sort_keys=True, indent=2) + "\n"
        self._atomic_write(self._sessions_path(project_id), text)

    def load_sessions(self, project_id: str) -> list[dict[str, Any]]:
        path = self._sessions_path(project_id)
        if not path.exists():
            return []
        return json.loads(path.read_text(encoding="utf-8")).get("sessions", [])

    # -- asset bytes -----------------------------------------------------------

    def store_asset_bytes(self, asset_id: str, filename: str, data: bytes) -> str:
        """Store uploaded bytes beside the store root; returns the URI the
        project document references."""
        safe_name = os.path.basename(filename) or "asset.bin"
        directory = self.assets_dir / asset_id
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / safe_name
        path.write_bytes(data)
        return f"assets/{asset_id}/{safe_name}"

    def asset_path(self, uri: str) -> Optional[Path]:
        if not uri.startswith("assets/"):
            return None
        path = (self.root / uri).resolve()
        if self.root.resolve() not in path.parents:
            return None
        return path if path.exists() else None

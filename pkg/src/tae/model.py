"""Project document: assets, tracks, clips, animations, and the audit log.

Times are stored as integer milliseconds so interval arithmetic (splits,
merges, ripple shifts) is exact; the wire format converts to decimal seconds.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Optional, Union

ASSET_KINDS = frozenset({"image", "audio", "video"})
TRACK_KINDS = frozenset({"text", "video", "image", "audio", "element"})
ALIGNMENTS = frozenset({"left", "center", "right"})
PHASES = frozenset({"enter", "emphasis", "exit"})
ACTORS = frozenset({"user", "inline_agent", "chat_agent"})

MS = 1000


def to_ms(seconds: float) -> int:
    """Round a seconds value to the 1 ms grid (half away from zero)."""
    scaled = seconds * MS
    return int(scaled + 0.5) if scaled >= 0 else -int(-scaled + 0.5)


def to_seconds(ms: int) -> float:
    return ms / MS


@dataclass
class TextStyle:
    font_family: str = "sans-serif"
    font_size: float = 48.0
    color: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)
    position: tuple[float, float] = (0.5, 0.5)
    alignment: str = "center"

    def copy(self) -> "TextStyle":
        return replace(self)


@dataclass
class Asset:
    id: str
    kind: str
    name: str
    uri: str
    media_duration: Optional[float] = None  # seconds; audio/video only


@dataclass
class Track:
    id: str
    kind: str
    name: str
    order_index: int
    script_visible: bool = True


@dataclass
class TextClipPayload:
    content: str
    style: TextStyle = field(default_factory=TextStyle)


@dataclass
class MediaClipPayload:
    asset_ref: str
    trim_in_ms: int = 0


@dataclass
class ElementClipPayload:
    element_kind: str
    params: dict[str, Any] = field(default_factory=dict)


ClipPayload = Union[TextClipPayload, MediaClipPayload, ElementClipPayload]


@dataclass
class Clip:
    id: str
    track_id: str
    start_ms: int
    duration_ms: int
    payload: ClipPayload

    @property
    def end_ms(self) -> int:
        return self.start_ms + self.duration_ms

    @property
    def start(self) -> float:
        return to_seconds(self.start_ms)

    @property
    def duration(self) -> float:
        return to_seconds(self.duration_ms)

    def overlaps(self, start_ms: int, duration_ms: int) -> bool:
        return self.start_ms < start_ms + duration_ms and start_ms < self.end_ms

    def is_text(self) -> bool:
        return isinstance(self.payload, TextClipPayload)


@dataclass
class AnimationInstance:
    id: str
    clip_id: str
    preset: str
    # Validated against the preset's meta schema; always contains at least
    # duration, delay, speed, direction, easing.
    params: dict[str, Any]
    phase: str


@dataclass
class RenderState:
    """Evaluated visual parameters of one clip at a time t."""

    clip_id: str
    opacity: float = 1.0
    position_offset: tuple[float, float] = (0.0, 0.0)
    scale: float = 1.0
    rotation: float = 0.0
    reveal_fraction: float = 1.0
    effective_style: Optional[TextStyle] = None  # text clips only


@dataclass
class OperationLogEntry:
    seq: int
    timestamp: str  # ISO-8601 UTC
    actor: str
    tool: str
    args: dict[str, Any]
    outcome: str  # "ok" | "error"
    detail: str = ""


@dataclass
class Project:
    id: str
    canvas: tuple[int, int] = (1920, 1080)  # width_px, height_px
    fps: float = 30.0
    assets: dict[str, Asset] = field(default_factory=dict)
    tracks: dict[str, Track] = field(default_factory=dict)
    clips: dict[str, Clip] = field(default_factory=dict)
    animations: dict[str, AnimationInstance] = field(default_factory=dict)
    revision: int = 0
    operation_log: list[OperationLogEntry] = field(default_factory=list)

    def live_ids(self) -> set[str]:
        ids = {self.id}
        ids.update(self.assets)
        ids.update(self.tracks)
        ids.update(self.clips)
        ids.update(self.animations)
        return ids

    def clips_on_track(self, track_id: str) -> list[Clip]:
        """Clips of one track in start order."""
        found = [c for c in self.clips.values() if c.track_id == track_id]
        found.sort(key=lambda c: (c.start_ms, c.id))
        return found

    def animations_for_clip(self, clip_id: str) -> list[AnimationInstance]:
        found = [a for a in self.animations.values() if a.clip_id == clip_id]
        found.sort(key=lambda a: a.id)
        return found

    def span_ms(self) -> int:
        """End of the last clip; 0 for an empty timeline."""
        return max((c.end_ms for c in self.clips.values()), default=0)

"""Script panel model: the timeline projected as ordered text lines, and the
edits that flow back (text, split/merge, add-line placement, style batches).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

from .engine import ProjectEngine
from .errors import EmptyRange, InvalidAnchor, NonTextTrack, UnknownTrack
from .model import Clip, Project, TextClipPayload, TextStyle, Track, to_ms, to_seconds

PLACEMENT_STRATEGIES = (
    "sequential_same_track",
    "parallel_adjusted_timing",
    "parallel_new_track",
)

DEFAULT_LINE_DURATION = 2.0  # seconds


@dataclass
class ScriptLine:
    clip_id: str
    text: str
    style: TextStyle
    suggestion_markers: list[str] = field(default_factory=list)


@dataclass
class ScriptDocument:
    lines: list[ScriptLine]
    selected_tracks: set[str]


@dataclass
class PlacementDecision:
    """Where a new script line's clip goes; one of the three predefined layouts."""

    strategy: str
    track_id: Optional[str] = None
    start: Optional[float] = None


@dataclass
class Anchor:
    """Insertion point for add_line: before/after an existing line, or at the
    document end (line_clip_id None)."""

    line_clip_id: Optional[str] = None
    position: str = "end"  # "before" | "after" | "end"


def _require_text_tracks(project: Project, track_ids: Iterable[str]) -> list[str]:
    ordered = []
    for track_id in track_ids:
        track = project.tracks.get(track_id)
        if track is None:
            raise UnknownTrack(f"no track {track_id}", id=track_id)
        if track.kind != "text":
            raise NonTextTrack(f"track {track_id} is a {track.kind} track", id=track_id)
        ordered.append(track_id)
    return ordered


def project_script(project: Project, selected_tracks: Iterable[str]) -> ScriptDocument:
    """All text clips on the selected tracks, sorted by appearance time
    (start, track order_index, id)."""
    selection = set(_require_text_tracks(project, selected_tracks))
    clips = [
        c for c in project.clips.values() if c.track_id in selection and c.is_text()
    ]
    clips.sort(
        key=lambda c: (c.start_ms, project.tracks[c.track_id].order_index, c.id)
    )
    lines = [
        ScriptLine(clip_id=c.id, text=c.payload.content, style=c.payload.style.copy())
        for c in clips
    ]
    return ScriptDocument(lines=lines, selected_tracks=selection)


def apply_text_edit(engine: ProjectEngine, clip_id: str, new_text: str) -> None:
    engine.set_text(clip_id, new_text)


def split_line(engine: ProjectEngine, clip_id: str, char_offset: int) -> tuple[Clip, Clip]:
    return engine.split_line(clip_id, char_offset)


def merge_lines(engine: ProjectEngine, first_id: str, second_id: str) -> Clip:
    return engine.merge_clips(first_id, second_id)


def apply_style_batch(
    engine: ProjectEngine,
    selected_tracks: Iterable[str],
    start_index: int,
    end_index: int,
    style_delta: dict[str, Any],
) -> int:
    """Apply a style delta to a contiguous line range [start_index, end_index]
    of the current projection. One committed operation; equal to folding
    per-line edits."""
    doc = project_script(engine.project, selected_tracks)
    if not (0 <= start_index <= end_index < len(doc.lines)):
        raise EmptyRange(
            f"range [{start_index}, {end_index}] not within {len(doc.lines)} lines",
            start=start_index, end=end_index,
        )
    values = engine._validated_style_delta(style_delta)
    if not values:
        raise EmptyRange("style delta is empty")
    targets = doc.lines[start_index : end_index + 1]
    for line in targets:
        style = engine.clip(line.clip_id).payload.style
        for key, value in values.items():
            setattr(style, key, value)
    engine._commit(
        "apply_style_batch",
        {
            "lines": [line.clip_id for line in targets],
            "delta": {k: list(v) if isinstance(v, tuple) else v for k, v in values.items()},
        },
    )
    return len(targets)


def set_script_tracks(project: Project, track_ids: Iterable[str]) -> ScriptDocument:
    return project_script(project, track_ids)


def _resolve_anchor(
    engine: ProjectEngine, doc: ScriptDocument, anchor: Anchor
) -> tuple[Optional[Clip], str]:
    """Returns (anchor clip, effective position). Document-end anchors resolve
    to 'after the last line' when lines exist."""
    if anchor.position not in ("before", "after", "end"):
        raise InvalidAnchor(f"bad anchor position {anchor.position!r}")
    if anchor.position == "end" or anchor.line_clip_id is None:
        if doc.lines:
            return engine.clip(doc.lines[-1].clip_id), "after"
        return None, "after"
    line_ids = {line.clip_id for line in doc.lines}
    if anchor.line_clip_id not in line_ids:
        raise InvalidAnchor(
            f"anchor line {anchor.line_clip_id} is not in the projection",
            clip=anchor.line_clip_id,
        )
    return engine.clip(anchor.line_clip_id), anchor.position


def _ripple_shift(
    engine: ProjectEngine, track_id: str, start_ms: int, duration_ms: int, exact: bool
) -> None:
    """Make [start_ms, start_ms+duration_ms) free on the track by shifting
    clips right. ``exact`` shifts everything at/after the insertion point by
    exactly the new duration (sequential strategy); otherwise the shift grows
    just enough to clear a clip straddling the insertion point."""
    project = engine.project
    if exact:
        movers = [c for c in project.clips_on_track(track_id) if c.start_ms >= start_ms]
        if not any(c.overlaps(start_ms, duration_ms) for c in movers):
            return
        delta = duration_ms
    else:
        movers = [c for c in project.clips_on_track(track_id) if c.end_ms > start_ms]
        if not any(c.overlaps(start_ms, duration_ms) for c in movers):
            return
        first_start = min(c.start_ms for c in movers)
        delta = max(duration_ms, start_ms + duration_ms - first_start)
    for clip in sorted(movers, key=lambda c: -c.start_ms):
        clip.start_ms += delta


def add_line(
    engine: ProjectEngine,
    selected_tracks: Iterable[str],
    anchor: Anchor,
    text: str,
    decision: Optional[PlacementDecision] = None,
) -> Clip:
    """Insert a new script line; the timeline clip lands according to the
    placement decision (from the clip-strategy agent, or the sequential
    default). One committed operation; all three strategies preserve
    same-track non-overlap."""
    selection = _require_text_tracks(engine.project, selected_tracks)
    doc = project_script(engine.project, selection)
    anchor_clip, position = _resolve_anchor(engine, doc, anchor)
    if decision is None:
        decision = PlacementDecision(strategy="sequential_same_track")
    if decision.strategy not in PLACEMENT_STRATEGIES:
        raise InvalidAnchor(f"unknown placement strategy {decision.strategy!r}")

    duration_ms = to_ms(DEFAULT_LINE_DURATION)
    style = anchor_clip.payload.style.copy() if anchor_clip else TextStyle()
    project = engine.project
    new_track = None

    if decision.strategy == "sequential_same_track":
        if anchor_clip is not None:
            track_id = anchor_clip.track_id
            start_ms = anchor_clip.end_ms if position == "after" else anchor_clip.start_ms
        else:
            if not selection:
                raise InvalidAnchor("empty script needs at least one selected text track")
            track_id = selection[0]
            clips = project.clips_on_track(track_id)
            start_ms = clips[-1].end_ms if clips else 0
        _ripple_shift(engine, track_id, start_ms, duration_ms, exact=True)
    elif decision.strategy == "parallel_adjusted_timing":
        if anchor_clip is None:
            raise InvalidAnchor("parallel placement needs an anchor line")
        if not decision.track_id:
            raise InvalidAnchor("parallel_adjusted_timing needs a target track")
        target = engine.track(decision.track_id)
        if target.kind != "text":
            raise NonTextTrack(f"track {target.id} is a {target.kind} track", id=target.id)
        if target.id == anchor_clip.track_id:
            raise InvalidAnchor("parallel placement targets a different track")
        track_id = target.id
        start_ms = anchor_clip.start_ms
        _ripple_shift(engine, track_id, start_ms, duration_ms, exact=False)
    else:  # parallel_new_track
        order = max((t.order_index for t in project.tracks.values()), default=-1) + 1
        new_track = Track(
            id=engine.new_id("track"),
            kind="text",
            name=f"Text {len(project.tracks) + 1}",
            order_index=order,
        )
        project.tracks[new_track.id] = new_track
        track_id = new_track.id
        start_ms = anchor_clip.start_ms if anchor_clip else 0

    clip = Clip(
        id=engine.new_id("clip"),
        track_id=track_id,
        start_ms=start_ms,
        duration_ms=duration_ms,
        payload=TextClipPayload(content=text, style=style),
    )
    engine._require_free(track_id, start_ms, duration_ms)
    project.clips[clip.id] = clip
    engine._commit(
        "add_line",
        {
            "id": clip.id,
            "strategy": decision.strategy,
            "track_id": track_id,
            "start": to_seconds(start_ms),
            "new_track": new_track.id if new_track else None,
        },
    )
    return clip


def script_wire_doc(project: Project, doc: ScriptDocument) -> dict[str, Any]:
    """Wire form pushed to clients on every revision change."""
    from .serialize import style_to_doc

    return {
        "revision": project.revision,
        "selected_tracks": sorted(doc.selected_tracks),
        "lines": [
            {
                "clip_id": line.clip_id,
                "text": line.text,
                "style": style_to_doc(line.style),
                "markers": list(line.suggestion_markers),
            }
            for line in doc.lines
        ],
    }

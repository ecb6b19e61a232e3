"""Canonical project (de)serialization.

Documents are JSON with sorted keys, times as decimal seconds, and colors as
[r,g,b,a] floats, so equal projects always serialize to identical bytes.
Schema version "tae-1"; unknown versions are rejected, not migrated.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import CorruptDocument, DanglingReference, UnsupportedSchemaVersion
from .ids import is_object_id
from .model import (
    ALIGNMENTS,
    ASSET_KINDS,
    PHASES,
    TRACK_KINDS,
    AnimationInstance,
    Asset,
    Clip,
    ElementClipPayload,
    MediaClipPayload,
    OperationLogEntry,
    Project,
    RenderState,
    TextClipPayload,
    TextStyle,
    to_ms,
    to_seconds,
)

SCHEMA_VERSION = "tae-1"


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def style_to_doc(style: TextStyle) -> dict[str, Any]:
    return {
        "font_family": style.font_family,
        "font_size": style.font_size,
        "color": list(style.color),
        "position": list(style.position),
        "alignment": style.alignment,
    }


def style_from_doc(doc: Any) -> TextStyle:
    try:
        style = TextStyle(
            font_family=str(doc["font_family"]),
            font_size=float(doc["font_size"]),
            color=tuple(float(c) for c in doc["color"]),
            position=tuple(float(c) for c in doc["position"]),
            alignment=str(doc["alignment"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptDocument(f"bad text style: {exc}") from exc
    if len(style.color) != 4 or len(style.position) != 2:
        raise CorruptDocument("bad text style shape")
    if style.alignment not in ALIGNMENTS or style.font_size <= 0:
        raise CorruptDocument("bad text style values")
    return style


def clip_to_doc(clip: Clip) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "id": clip.id,
        "track_id": clip.track_id,
        "start": to_seconds(clip.start_ms),
        "duration": to_seconds(clip.duration_ms),
    }
    payload = clip.payload
    if isinstance(payload, TextClipPayload):
        doc["payload"] = {
            "kind": "text",
            "content": payload.content,
            "style": style_to_doc(payload.style),
        }
    elif isinstance(payload, MediaClipPayload):
        doc["payload"] = {
            "kind": "media",
            "asset_ref": payload.asset_ref,
            "trim_in": to_seconds(payload.trim_in_ms),
        }
    elif isinstance(payload, ElementClipPayload):
        doc["payload"] = {
            "kind": "element",
            "element_kind": payload.element_kind,
            "params": payload.params,
        }
    else:  # pragma: no cover - payload union is closed
        raise CorruptDocument(f"unknown payload type {type(payload).__name__}")
    return doc


def _clip_from_doc(doc: Any) -> Clip:
    try:
        payload_doc = doc["payload"]
        kind = payload_doc["kind"]
        if kind == "text":
            payload: Any = TextClipPayload(
                content=str(payload_doc["content"]),
                style=style_from_doc(payload_doc["style"]),
            )
        elif kind == "media":
            payload = MediaClipPayload(
                asset_ref=str(payload_doc["asset_ref"]),
                trim_in_ms=to_ms(float(payload_doc["trim_in"])),
            )
        elif kind == "element":
            payload = ElementClipPayload(
                element_kind=str(payload_doc["element_kind"]),
                params=dict(payload_doc.get("params", {})),
            )
        else:
            raise CorruptDocument(f"unknown payload kind {kind!r}")
        clip = Clip(
            id=str(doc["id"]),
            track_id=str(doc["track_id"]),
            start_ms=to_ms(float(doc["start"])),
            duration_ms=to_ms(float(doc["duration"])),
            payload=payload,
        )
    except CorruptDocument:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptDocument(f"bad clip: {exc}") from exc
    if clip.duration_ms <= 0 or clip.start_ms < 0:
        raise CorruptDocument(f"clip {clip.id}: bad timing")
    return clip


def animation_to_doc(anim: AnimationInstance) -> dict[str, Any]:
    return {
        "id": anim.id,
        "clip_id": anim.clip_id,
        "preset": anim.preset,
        "params": {k: _value_to_doc(v) for k, v in sorted(anim.params.items())},
        "phase": anim.phase,
    }


def _value_to_doc(value: Any) -> Any:
    if isinstance(value, tuple):
        return list(value)
    return value


def _animation_from_doc(doc: Any) -> AnimationInstance:
    try:
        anim = AnimationInstance(
            id=str(doc["id"]),
            clip_id=str(doc["clip_id"]),
            preset=str(doc["preset"]),
            params={str(k): v for k, v in doc["params"].items()},
            phase=str(doc["phase"]),
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise CorruptDocument(f"bad animation: {exc}") from exc
    if anim.phase not in PHASES:
        raise CorruptDocument(f"animation {anim.id}: bad phase {anim.phase!r}")
    return anim


def asset_to_doc(asset: Asset) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "id": asset.id,
        "kind": asset.kind,
        "name": asset.name,
        "uri": asset.uri,
    }
    if asset.media_duration is not None:
        doc["media_duration"] = asset.media_duration
    return doc


def _asset_from_doc(doc: Any) -> Asset:
    try:
        asset = Asset(
            id=str(doc["id"]),
            kind=str(doc["kind"]),
            name=str(doc["name"]),
            uri=str(doc["uri"]),
            media_duration=(
                float(doc["media_duration"]) if "media_duration" in doc else None
            ),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptDocument(f"bad asset: {exc}") from exc
    if asset.kind not in ASSET_KINDS:
        raise CorruptDocument(f"asset {asset.id}: bad kind {asset.kind!r}")
    if (asset.media_duration is not None) != (asset.kind in ("audio", "video")):
        raise CorruptDocument(f"asset {asset.id}: media_duration presence mismatch")
    if asset.media_duration is not None and asset.media_duration <= 0:
        raise CorruptDocument(f"asset {asset.id}: media_duration must be > 0")
    return asset


def track_to_doc(track: Any) -> dict[str, Any]:
    return {
        "id": track.id,
        "kind": track.kind,
        "name": track.name,
        "order_index": track.order_index,
        "script_visible": track.script_visible,
    }


def _track_from_doc(doc: Any):
    from .model import Track

    try:
        track = Track(
            id=str(doc["id"]),
            kind=str(doc["kind"]),
            name=str(doc["name"]),
            order_index=int(doc["order_index"]),
            script_visible=bool(doc["script_visible"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptDocument(f"bad track: {exc}") from exc
    if track.kind not in TRACK_KINDS or track.order_index < 0:
        raise CorruptDocument(f"track {track.id}: bad fields")
    return track


def log_entry_to_doc(entry: OperationLogEntry) -> dict[str, Any]:
    return {
        "seq": entry.seq,
        "timestamp": entry.timestamp,
        "actor": entry.actor,
        "tool": entry.tool,
        "args": entry.args,
        "outcome": entry.outcome,
        "detail": entry.detail,
    }


def _log_entry_from_doc(doc: Any) -> OperationLogEntry:
    try:
        return OperationLogEntry(
            seq=int(doc["seq"]),
            timestamp=str(doc["timestamp"]),
            actor=str(doc["actor"]),
            tool=str(doc["tool"]),
            args=dict(doc["args"]),
            outcome=str(doc["outcome"]),
            detail=str(doc.get("detail", "")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptDocument(f"bad log entry: {exc}") from exc


def project_to_doc(project: Project) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "project": {
            "id": project.id,
            "canvas": {"width_px": project.canvas[0], "height_px": project.canvas[1]},
            "fps": project.fps,
            "assets": {k: asset_to_doc(v) for k, v in sorted(project.assets.items())},
            "tracks": {k: track_to_doc(v) for k, v in sorted(project.tracks.items())},
            "clips": {k: clip_to_doc(v) for k, v in sorted(project.clips.items())},
            "animations": {
                k: animation_to_doc(v) for k, v in sorted(project.animations.items())
            },
            "revision": project.revision,
            "operation_log": [log_entry_to_doc(e) for e in project.operation_log],
        },
    }


def serialize_project(project: Project) -> str:
    return canonical_json(project_to_doc(project))


def _check_references(project: Project) -> None:
    for clip in project.clips.values():
        if clip.track_id not in project.tracks:
            raise DanglingReference(
                f"clip {clip.id} references missing track {clip.track_id}",
                clip=clip.id, track=clip.track_id,
            )
        if isinstance(clip.payload, MediaClipPayload):
            ref = clip.payload.asset_ref
            if ref and ref not in project.assets:
                raise DanglingReference(
                    f"clip {clip.id} references missing asset {ref}", clip=clip.id, asset=ref
                )
    for anim in project.animations.values():
        if anim.clip_id not in project.clips:
            raise DanglingReference(
                f"animation {anim.id} references missing clip {anim.clip_id}",
                animation=anim.id, clip=anim.clip_id,
            )


def project_from_doc(doc: Any) -> Project:
    if not isinstance(doc, dict):
        raise CorruptDocument("document must be an object")
    version = doc.get("schema_version")
    if version is None:
        raise CorruptDocument("missing schema_version")
    if version != SCHEMA_VERSION:
        raise UnsupportedSchemaVersion(
            f"unsupported schema version {version!r}", expected=SCHEMA_VERSION, got=version
        )
    body = doc.get("project")
    if not isinstance(body, dict):
        raise CorruptDocument("missing project body")
    try:
        canvas = (int(body["canvas"]["width_px"]), int(body["canvas"]["height_px"]))
        project = Project(
            id=str(body["id"]),
            canvas=canvas,
            fps=float(body["fps"]),
            revision=int(body["revision"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptDocument(f"bad project header: {exc}") from exc
    if project.fps <= 0 or not is_object_id(project.id):
        raise CorruptDocument("bad project header values")
    for key, sub in body.get("assets", {}).items():
        project.assets[str(key)] = _asset_from_doc(sub)
    for key, sub in body.get("tracks", {}).items():
        project.tracks[str(key)] = _track_from_doc(sub)
    for key, sub in body.get("clips", {}).items():
        project.clips[str(key)] = _clip_from_doc(sub)
    for key, sub in body.get("animations", {}).items():
        project.animations[str(key)] = _animation_from_doc(sub)
    for entry in body.get("operation_log", []):
        project.operation_log.append(_log_entry_from_doc(entry))
    for collection in (project.assets, project.tracks, project.clips, project.animations):
        for key, obj in collection.items():
            if key != obj.id:
                raise CorruptDocument(f"collection key {key} does not match id {obj.id}")
    _check_references(project)
    return project


def deserialize_project(text: str) -> Project:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptDocument(f"not valid JSON: {exc}") from exc
    return project_from_doc(doc)


def render_state_to_doc(state: RenderState) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "clip_id": state.clip_id,
        "opacity": state.opacity,
        "position_offset": list(state.position_offset),
        "scale": state.scale,
        "rotation": state.rotation,
        "reveal_fraction": state.reveal_fraction,
    }
    if state.effective_style is not None:
        doc["effective_style"] = style_to_doc(state.effective_style)
    return doc

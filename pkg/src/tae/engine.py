"""Project engine: validated mutations, animation evaluation, frame snapshots.

One engine wraps one Project. Mutations are not thread-safe; the service
serializes them through a per-project lock. Every committed mutation bumps
the revision by exactly one and appends an audit entry. Pure reads
(evaluate_clip, snapshot_frame) never touch state.
"""

from __future__ import annotations

import contextlib
from datetime import datetime, timezone
from typing import Any, Callable, Iterator, Optional

from . import presets
from .errors import (
    AssetInUse,
    DanglingReference,
    InvalidDuration,
    InvalidField,
    NotAdjacent,
    NotTextClip,
    OffsetOutOfRange,
    OutOfClipRange,
    OutOfRange,
    Overlap,
    PayloadMismatch,
    RangeViolation,
    TrackMismatch,
    UnknownAnimation,
    UnknownAsset,
    UnknownClip,
    UnknownPreset,
    UnknownTrack,
)
from .ids import IdGenerator
from .meta import MetaRegistry
from .model import (
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
    Track,
    to_ms,
    to_seconds,
)

STYLE_FIELDS = ("font_family", "font_size", "color", "position", "alignment")


def _default_clock() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


def _clamp(value: float, lo: float, hi: float) -> float:
    return lo if value < lo else hi if value > hi else value


def nearest_char_boundary(length: int, fraction: float) -> int:
    """Character boundary in [0, length] nearest to fraction*length.
    Ties round toward the larger index."""
    target = fraction * length
    best = 0
    best_dist = abs(target)
    for i in range(1, length + 1):
        dist = abs(target - i)
        if dist < best_dist or (dist == best_dist and i > best):
            best, best_dist = i, dist
    return best


class ProjectEngine:
    def __init__(
        self,
        registry: MetaRegistry,
        project: Optional[Project] = None,
        seed: Optional[int] = None,
        clock: Optional[Callable[[], str]] = None,
    ):
        self.registry = registry
        self.ids = IdGenerator(seed)
        self.clock = clock or _default_clock
        if project is None:
            project = Project(id=self.ids.new("proj"))
        self.project = project
        self._issued: set[str] = set(project.live_ids())
        self._actor = "user"
        self._label: Optional[tuple[str, dict[str, Any]]] = None

    # -- identity & commit plumbing ------------------------------------

    def new_id(self, kind: str) -> str:
        new = self.ids.new(kind, self._issued)
        self._issued.add(new)
        return new

    @contextlib.contextmanager
    def acting_as(self, actor: str) -> Iterator[None]:
        previous = self._actor
        self._actor = actor
        try:
            yield
        finally:
            self._actor = previous

    @contextlib.contextmanager
    def operation_label(self, tool: str, args: dict[str, Any]) -> Iterator[None]:
        """Label the next committed mutation with a dispatcher-level tool name
        so one dispatch yields exactly one log entry."""
        previous = self._label
        self._label = (tool, args)
        try:
            yield
        finally:
            self._label = previous

    @property
    def actor(self) -> str:
        return self._actor

    def _commit(self, tool: str, args: dict[str, Any], detail: str = "") -> None:
        p = self.project
        p.revision += 1
        if self._label is not None:
            tool, args = self._label
        p.operation_log.append(
            _log_entry(
                seq=len(p.operation_log) + 1,
                timestamp=self.clock(),
                actor=self._actor,
                tool=tool,
                args=args,
                outcome="ok",
                detail=detail,
            )
        )

    def log_failure(self, tool: str, args: dict[str, Any], detail: str) -> None:
        """Append an error entry without bumping the revision."""
        self._append_log(tool, args, "error", detail)

    def log_read(self, tool: str, args: dict[str, Any]) -> None:
        """Audit a non-mutating dispatch (queries bump no revision)."""
        self._append_log(tool, args, "ok", "")

    def _append_log(self, tool: str, args: dict[str, Any], outcome: str, detail: str) -> None:
        p = self.project
        p.operation_log.append(
            _log_entry(
                seq=len(p.operation_log) + 1,
                timestamp=self.clock(),
                actor=self._actor,
                tool=tool,
                args=args,
                outcome=outcome,
                detail=detail,
            )
        )

    # -- lookups --------------------------------------------------------

    def track(self, track_id: str) -> Track:
        track = self.project.tracks.get(track_id)
        if track is None:
            raise UnknownTrack(f"no track {track_id}", id=track_id)
        return track

    def clip(self, clip_id: str) -> Clip:
        clip = self.project.clips.get(clip_id)
        if clip is None:
            raise UnknownClip(f"no clip {clip_id}", id=clip_id)
        return clip

    def text_clip(self, clip_id: str) -> Clip:
        clip = self.clip(clip_id)
        if not clip.is_text():
            raise NotTextClip(f"clip {clip_id} is not a text clip", id=clip_id)
        return clip

    def animation(self, anim_id: str) -> AnimationInstance:
        anim = self.project.animations.get(anim_id)
        if anim is None:
            raise UnknownAnimation(f"no animation {anim_id}", id=anim_id)
        return anim

    def asset(self, asset_id: str) -> Asset:
        asset = self.project.assets.get(asset_id)
        if asset is None:
            raise UnknownAsset(f"no asset {asset_id}", id=asset_id)
        return asset

    # -- assets -----------------------------------------------------------

    def add_asset(
        self, kind: str, name: str, uri: str, media_duration: Optional[float] = None
    ) -> Asset:
        if kind not in ASSET_KINDS:
            raise InvalidField(f"unknown asset kind {kind!r}", kind=kind)
        timed = kind in ("audio", "video")
        if timed and (media_duration is None or media_duration <= 0):
            raise InvalidField("audio/video assets need media_duration > 0", kind=kind)
        if not timed:
            media_duration = None
        asset = Asset(
            id=self.new_id("asset"), kind=kind, name=name, uri=uri,
            media_duration=media_duration,
        )
        self.project.assets[asset.id] = asset
        self._commit("add_asset", {"id": asset.id, "kind": kind, "name": name})
        return asset

    def update_asset(self, asset_id: str, changes: dict[str, Any]) -> Asset:
        asset = self.asset(asset_id)
        values = self.registry.validate_fields("asset", changes, partial=True)
        for key, value in values.items():
            if key == "media_duration":
                asset.media_duration = value if value else None
            else:
                setattr(asset, key, value)
        if (asset.media_duration is not None) != (asset.kind in ("audio", "video")):
            raise InvalidField("media_duration presence must match asset kind")
        self._commit("update_asset", {"id": asset_id, **_plain_args(changes)})
        return asset

    def remove_asset(self, asset_id: str) -> None:
        asset = self.asset(asset_id)
        users = [
            c.id
            for c in self.project.clips.values()
            if isinstance(c.payload, MediaClipPayload) and c.payload.asset_ref == asset_id
        ]
        if users:
            raise AssetInUse(
                f"asset {asset_id} is referenced by {len(users)} clip(s)",
                id=asset_id, clips=sorted(users),
            )
        del self.project.assets[asset.id]
        self._commit("remove_asset", {"id": asset_id})

    # -- tracks ------------------------------------------------------------

    def add_track(
        self,
        kind: str,
        name: str = "",
        order_index: Optional[int] = None,
        script_visible: bool = True,
    ) -> Track:
        if kind not in TRACK_KINDS:
            raise InvalidField(f"unknown track kind {kind!r}", kind=kind)
        taken = {t.order_index for t in self.project.tracks.values()}
        if order_index is None:
            order_index = max(taken, default=-1) + 1
        elif order_index in taken:
            raise RangeViolation(f"order_index {order_index} already in use", value=order_index)
        elif order_index < 0:
            raise RangeViolation("order_index must be >= 0", value=order_index)
        track = Track(
            id=self.new_id("track"),
            kind=kind,
            name=name or f"{kind.title()} {len(self.project.tracks) + 1}",
            order_index=order_index,
            script_visible=script_visible,
        )
        self.project.tracks[track.id] = track
        self._commit("add_track", {"id": track.id, "kind": kind, "order_index": order_index})
        return track

    def update_track(self, track_id: str, changes: dict[str, Any]) -> Track:
        track = self.track(track_id)
        values = self.registry.validate_fields("track", changes, partial=True)
        if "kind" in values and values["kind"] != track.kind:
            if self.project.clips_on_track(track_id):
                raise PayloadMismatch("cannot change kind of a non-empty track", id=track_id)
        if "order_index" in values and values["order_index"] != track.order_index:
            taken = {
                t.order_index for t in self.project.tracks.values() if t.id != track_id
            }
            if values["order_index"] in taken:
                raise RangeViolation(
                    f"order_index {values['order_index']} already in use",
                    value=values["order_index"],
                )
        for key, value in values.items():
            setattr(track, key, value)
        self._commit("update_track", {"id": track_id, **_plain_args(changes)})
        return track

    def remove_track(self, track_id: str) -> None:
        track = self.track(track_id)
        doomed_clips = [c.id for c in self.project.clips_on_track(track_id)]
        for clip_id in doomed_clips:
            for anim in self.project.animations_for_clip(clip_id):
                del self.project.animations[anim.id]
            del self.project.clips[clip_id]
        del self.project.tracks[track.id]
        self._commit("remove_track", {"id": track_id, "removed_clips": len(doomed_clips)})

    # -- clip placement ----------------------------------------------------

    def _conflicting_clip(
        self, track_id: str, start_ms: int, duration_ms: int, ignore: tuple[str, ...] = ()
    ) -> Optional[Clip]:
        for other in self.project.clips_on_track(track_id):
            if other.id in ignore:
                continue
            if other.overlaps(start_ms, duration_ms):
                return other
        return None

    def _require_free(
        self, track_id: str, start_ms: int, duration_ms: int, ignore: tuple[str, ...] = ()
    ) -> None:
        conflict = self._conflicting_clip(track_id, start_ms, duration_ms, ignore)
        if conflict is not None:
            raise Overlap(
                f"[{to_seconds(start_ms)}, {to_seconds(start_ms + duration_ms)}) overlaps "
                f"clip {conflict.id}",
                conflict_with=conflict.id, track=track_id,
            )

    def _check_payload(self, track: Track, payload: Any) -> None:
        if isinstance(payload, TextClipPayload):
            ok = track.kind == "text"
        elif isinstance(payload, MediaClipPayload):
            if payload.asset_ref not in self.project.assets:
                raise DanglingReference(
                    f"asset {payload.asset_ref} does not exist", asset=payload.asset_ref
                )
            ok = self.project.assets[payload.asset_ref].kind == track.kind
        elif isinstance(payload, ElementClipPayload):
            ok = track.kind == "element"
        else:
            ok = False
        if not ok:
            raise PayloadMismatch(
                f"payload {type(payload).__name__} not allowed on {track.kind!r} track",
                track=track.id,
            )

    def add_clip(self, track_id: str, start: float, duration: float, payload: Any) -> Clip:
        track = self.track(track_id)
        start_ms, duration_ms = to_ms(start), to_ms(duration)
        if duration_ms <= 0:
            raise InvalidDuration("duration must be > 0", duration=duration)
        if start_ms < 0:
            raise OutOfRange("start must be >= 0", start=start)
        self._check_payload(track, payload)
        self._require_free(track_id, start_ms, duration_ms)
        clip = Clip(
            id=self.new_id("clip"),
            track_id=track_id,
            start_ms=start_ms,
            duration_ms=duration_ms,
            payload=payload,
        )
        self.project.clips[clip.id] = clip
        self._commit(
            "add_clip",
            {"id": clip.id, "track_id": track_id, "start": clip.start, "duration": clip.duration},
        )
        return clip

    def move_clip(
        self, clip_id: str, new_start: float, new_track: Optional[str] = None
    ) -> Clip:
        clip = self.clip(clip_id)
        target_track = self.track(new_track) if new_track else self.track(clip.track_id)
        start_ms = to_ms(new_start)
        if start_ms < 0:
            raise OutOfRange("start must be >= 0", start=new_start)
        if target_track.id != clip.track_id:
            self._check_payload(target_track, clip.payload)
        self._require_free(target_track.id, start_ms, clip.duration_ms, ignore=(clip_id,))
        clip.track_id = target_track.id
        clip.start_ms = start_ms
        self._commit(
            "move_clip", {"id": clip_id, "start": clip.start, "track_id": clip.track_id}
        )
        return clip

    def resize_clip(self, clip_id: str, new_start: float, new_duration: float) -> Clip:
        clip = self.clip(clip_id)
        start_ms, duration_ms = to_ms(new_start), to_ms(new_duration)
        if duration_ms <= 0:
            raise InvalidDuration("duration must be > 0", duration=new_duration)
        if start_ms < 0:
            raise OutOfRange("start must be >= 0", start=new_start)
        self._require_free(clip.track_id, start_ms, duration_ms, ignore=(clip_id,))
        clip.start_ms = start_ms
        clip.duration_ms = duration_ms
        self._commit(
            "resize_clip", {"id": clip_id, "start": clip.start, "duration": clip.duration}
        )
        return clip

    def remove_clip(self, clip_id: str) -> None:
        clip = self.clip(clip_id)
        for anim in self.project.animations_for_clip(clip_id):
            del self.project.animations[anim.id]
        del self.project.clips[clip.id]
        self._commit("remove_clip", {"id": clip_id})

    def update_clip(self, clip_id: str, changes: dict[str, Any]) -> Clip:
        """Single atomic update across placement and payload fields; this is
        what update_*_clip tools dispatch to."""
        clip = self.clip(clip_id)
        changes = dict(changes)
        new_track = changes.pop("track_id", None)
        target_track = self.track(new_track) if new_track else self.track(clip.track_id)
        start_ms = to_ms(float(changes.pop("start"))) if "start" in changes else clip.start_ms
        duration_ms = (
            to_ms(float(changes.pop("duration"))) if "duration" in changes else clip.duration_ms
        )
        if duration_ms <= 0:
            raise InvalidDuration("duration must be > 0")
        if start_ms < 0:
            raise OutOfRange("start must be >= 0")
        # Validate every payload change before mutating anything.
        cls_name = clip_class_name(clip)
        field_changes = self.registry.validate_fields(cls_name, changes, partial=True)
        if target_track.id != clip.track_id:
            self._check_payload(target_track, clip.payload)
        self._require_free(target_track.id, start_ms, duration_ms, ignore=(clip_id,))
        clip.track_id = target_track.id
        clip.start_ms = start_ms
        clip.duration_ms = duration_ms
        self._apply_payload_fields(clip, field_changes)
        self._commit("update_clip", {"id": clip_id, **_plain_args(changes),
                                     "start": clip.start, "duration": clip.duration})
        return clip

    def _apply_payload_fields(self, clip: Clip, values: dict[str, Any]) -> None:
        payload = clip.payload
        for key, value in values.items():
            if isinstance(payload, TextClipPayload):
                if key == "content":
                    payload.content = value
                elif key in STYLE_FIELDS:
                    setattr(payload.style, key, value)
            elif isinstance(payload, MediaClipPayload):
                if key == "asset_ref":
                    if value not in self.project.assets:
                        raise DanglingReference(f"asset {value} does not exist", asset=value)
                    payload.asset_ref = value
                elif key == "trim_in":
                    payload.trim_in_ms = to_ms(value)
            elif isinstance(payload, ElementClipPayload):
                if key == "element_kind":
                    payload.element_kind = value

    # -- text editing --------------------------------------------------------

    def set_text(self, clip_id: str, text: str) -> Clip:
        clip = self.text_clip(clip_id)
        clip.payload.content = text
        self._commit("set_text", {"id": clip_id, "text": text})
        return clip

    def set_style(self, clip_id: str, delta: dict[str, Any]) -> Clip:
        clip = self.text_clip(clip_id)
        values = self._validated_style_delta(delta)
        for key, value in values.items():
            setattr(clip.payload.style, key, value)
        self._commit("set_style", {"id": clip_id, **_plain_args(delta)})
        return clip

    def _validated_style_delta(self, delta: dict[str, Any]) -> dict[str, Any]:
        unknown = set(delta) - set(STYLE_FIELDS)
        if unknown:
            raise RangeViolation(f"not style fields: {sorted(unknown)}")
        return self.registry.validate_fields("text_clip", delta, partial=True)

    # -- split / merge ---------------------------------------------------

    def split_clip(self, clip_id: str, at: float) -> tuple[Clip, Clip]:
        """Split at a timeline position; text content splits at the character
        boundary nearest the duration fraction."""
        clip = self.clip(clip_id)
        at_ms = to_ms(at)
        if not (clip.start_ms < at_ms < clip.end_ms):
            raise OutOfRange(
                f"split point {at} not strictly inside [{clip.start}, "
                f"{to_seconds(clip.end_ms)})",
                at=at,
            )
        char_index = None
        if clip.is_text():
            content = clip.payload.content
            fraction = (at_ms - clip.start_ms) / clip.duration_ms
            char_index = nearest_char_boundary(len(content), fraction)
        return self._split_at(clip, at_ms, char_index, tool="split_clip")

    def _split_at(
        self, clip: Clip, at_ms: int, char_index: Optional[int], tool: str
    ) -> tuple[Clip, Clip]:
        d1 = at_ms - clip.start_ms
        d2 = clip.end_ms - at_ms
        second_payload = _split_payload(clip, d1, char_index)
        second = Clip(
            id=self.new_id("clip"),
            track_id=clip.track_id,
            start_ms=at_ms,
            duration_ms=d2,
            payload=second_payload,
        )
        clip.duration_ms = d1
        if char_index is not None:
            clip.payload.content = clip.payload.content[:char_index]
        self.project.clips[second.id] = second
        # Enter/emphasis animations stay on the first clip, exits follow the
        # second so segment boundaries keep their visual intent.
        for anim in self.project.animations_for_clip(clip.id):
            if anim.phase == "exit":
                anim.clip_id = second.id
        self._commit(
            tool,
            {"id": clip.id, "second": second.id, "at": to_seconds(at_ms)},
        )
        return clip, second

    def split_line(self, clip_id: str, char_offset: int) -> tuple[Clip, Clip]:
        """Script-panel split: durations proportional to segment lengths."""
        clip = self.text_clip(clip_id)
        content = clip.payload.content
        if not (0 < char_offset < len(content)):
            raise OffsetOutOfRange(
                f"offset {char_offset} not strictly inside (0, {len(content)})",
                offset=char_offset, length=len(content),
            )
        if clip.duration_ms < 2:
            raise InvalidDuration("clip too short to split", id=clip_id)
        n1, n2 = char_offset, len(content) - char_offset
        d1 = round(clip.duration_ms * n1 / (n1 + n2))
        d1 = min(max(d1, 1), clip.duration_ms - 1)
        return self._split_at(clip, clip.start_ms + d1, char_offset, tool="split_line")

    def merge_clips(self, first_id: str, second_id: str) -> Clip:
        a, b = self.clip(first_id), self.clip(second_id)
        if a.track_id != b.track_id:
            raise TrackMismatch("clips live on different tracks", first=a.id, second=b.id)
        if not (a.is_text() and b.is_text()):
            raise NotTextClip("merge combines text content; both clips must be text")
        earlier, later = (a, b) if a.start_ms <= b.start_ms else (b, a)
        between = [
            c
            for c in self.project.clips_on_track(a.track_id)
            if earlier.end_ms <= c.start_ms < later.start_ms and c.id not in (a.id, b.id)
        ]
        if between:
            raise NotAdjacent(
                "another clip sits between the two", between=[c.id for c in between]
            )
        seen: set[tuple[str, str]] = {
            (an.preset, an.phase) for an in self.project.animations_for_clip(earlier.id)
        }
        for anim in self.project.animations_for_clip(later.id):
            key = (anim.preset, anim.phase)
            if key in seen:
                del self.project.animations[anim.id]
            else:
                anim.clip_id = earlier.id
                seen.add(key)
        earlier.duration_ms = later.end_ms - earlier.start_ms
        earlier.payload.content = earlier.payload.content + later.payload.content
        del self.project.clips[later.id]
        self._commit("merge_clips", {"id": earlier.id, "absorbed": later.id})
        return earlier

    # -- animations -------------------------------------------------------

    def attach_animation(
        self,
        clip_id: str,
        preset: str,
        params: Optional[dict[str, Any]] = None,
        phase: Optional[str] = None,
    ) -> AnimationInstance:
        clip = self.clip(clip_id)
        if not self.registry.has(preset) or self.registry.get(preset).category != "animation_effect":
            raise UnknownPreset(f"no animation preset {preset!r}", preset=preset)
        values = self.registry.validate_fields(preset, params or {})
        if phase is None:
            phase = presets.PRESET_DEFAULT_PHASE.get(preset, "enter")
        if phase not in PHASES:
            raise RangeViolation(f"phase must be one of {sorted(PHASES)}", phase=phase)
        anim = AnimationInstance(
            id=self.new_id("anim"), clip_id=clip.id, preset=preset, params=values, phase=phase
        )
        self.project.animations[anim.id] = anim
        self._commit(
            "attach_animation",
            {"id": anim.id, "clip_id": clip_id, "preset": preset, "phase": phase},
        )
        return anim

    def update_animation(
        self, anim_id: str, params: Optional[dict[str, Any]] = None, phase: Optional[str] = None
    ) -> AnimationInstance:
        anim = self.animation(anim_id)
        values = self.registry.validate_fields(anim.preset, params or {}, partial=True)
        if phase is not None and phase not in PHASES:
            raise RangeViolation(f"phase must be one of {sorted(PHASES)}", phase=phase)
        anim.params.update(values)
        if phase is not None:
            anim.phase = phase
        self._commit("update_animation", {"id": anim_id, **_plain_args(params or {})})
        return anim

    def detach_animation(self, anim_id: str) -> None:
        anim = self.animation(anim_id)
        del self.project.animations[anim.id]
        self._commit("detach_animation", {"id": anim_id})


def clip_class_name(clip: Clip) -> str:
    if isinstance(clip.payload, TextClipPayload):
        return "text_clip"
    if isinstance(clip.payload, MediaClipPayload):
        return "media_clip"
    return "element_clip"


def _split_payload(clip: Clip, d1_ms: int, char_index: Optional[int]) -> Any:
    payload = clip.payload
    if isinstance(payload, TextClipPayload):
        return TextClipPayload(
            content=payload.content[char_index:] if char_index is not None else "",
            style=payload.style.copy(),
        )
    if isinstance(payload, MediaClipPayload):
        return MediaClipPayload(
            asset_ref=payload.asset_ref, trim_in_ms=payload.trim_in_ms + d1_ms
        )
    return ElementClipPayload(element_kind=payload.element_kind, params=dict(payload.params))


def _log_entry(**kwargs: Any) -> OperationLogEntry:
    return OperationLogEntry(**kwargs)


def _plain_args(args: dict[str, Any]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key, value in args.items():
        if isinstance(value, tuple):
            out[key] = list(value)
        else:
            out[key] = value
    return out


# --- evaluation (pure) -----------------------------------------------------


def evaluate_clip(project: Project, clip_id: str, t: float) -> RenderState:
    """Compose the base style with every active animation at time t.

    Deterministic: animations compose in id order; opacity and scale multiply,
    offsets and rotations add, reveal takes the minimum.
    """
    clip = project.clips.get(clip_id)
    if clip is None:
        raise UnknownClip(f"no clip {clip_id}", id=clip_id)
    if not (clip.start <= t < to_seconds(clip.end_ms)):
        raise OutOfClipRange(
            f"t={t} outside [{clip.start}, {to_seconds(clip.end_ms)})", t=t, clip=clip_id
        )
    state = RenderState(clip_id=clip_id)
    style: Optional[TextStyle] = None
    if isinstance(clip.payload, TextClipPayload):
        style = clip.payload.style.copy()
    for anim in project.animations_for_clip(clip_id):
        rule = presets.rule_for(anim.preset)
        if rule is None:
            continue
        params = anim.params
        u = _clamp(
            (t - clip.start - params["delay"]) * params["speed"] / params["duration"], 0.0, 1.0
        )
        deltas = rule(presets.ease(params["easing"], u), params)
        state.opacity *= deltas.opacity
        state.position_offset = (
            state.position_offset[0] + deltas.offset[0],
            state.position_offset[1] + deltas.offset[1],
        )
        state.scale *= deltas.scale
        state.rotation += deltas.rotation
        state.reveal_fraction = min(state.reveal_fraction, deltas.reveal)
        if style is not None and deltas.color_mix > 0.0:
            mix = deltas.color_mix
            style.color = tuple(
                base + (target - base) * mix
                for base, target in zip(style.color, deltas.color_target)
            )
    state.opacity = _clamp(state.opacity, 0.0, 1.0)
    state.reveal_fraction = _clamp(state.reveal_fraction, 0.0, 1.0)
    state.effective_style = style
    return state


def snapshot_frame(project: Project, t: float) -> list[RenderState]:
    """Render states for every clip active at t, ordered by appearance:
    (track order_index, clip start, id)."""
    if t < 0:
        raise OutOfRange("t must be >= 0", t=t)
    active = [
        clip
        for clip in project.clips.values()
        if clip.start <= t < to_seconds(clip.end_ms)
    ]
    active.sort(
        key=lambda c: (project.tracks[c.track_id].order_index, c.start_ms, c.id)
    )
    return [evaluate_clip(project, clip.id, t) for clip in active]


def check_invariants(project: Project) -> list[str]:
    """Full-scan structural validation; returns human-readable violations."""
    problems: list[str] = []
    seen_ids: set[str] = set()
    for collection in (project.assets, project.tracks, project.clips, project.animations):
        for obj_id in collection:
            if obj_id in seen_ids:
                problems.append(f"duplicate id {obj_id}")
            seen_ids.add(obj_id)
    order_seen: dict[int, str] = {}
    for track in project.tracks.values():
        if track.order_index in order_seen:
            problems.append(
                f"tracks {order_seen[track.order_index]} and {track.id} share order_index"
            )
        order_seen[track.order_index] = track.id
    for clip in project.clips.values():
        if clip.duration_ms <= 0:
            problems.append(f"clip {clip.id} has non-positive duration")
        if clip.start_ms < 0:
            problems.append(f"clip {clip.id} starts before 0")
        if clip.track_id not in project.tracks:
            problems.append(f"clip {clip.id} references missing track {clip.track_id}")
        if isinstance(clip.payload, MediaClipPayload):
            if clip.payload.asset_ref and clip.payload.asset_ref not in project.assets:
                problems.append(f"clip {clip.id} references missing asset")
    for track_id in project.tracks:
        clips = project.clips_on_track(track_id)
        for first, second in zip(clips, clips[1:]):
            if second.start_ms < first.end_ms:
                problems.append(
                    f"clips {first.id} and {second.id} overlap on track {track_id}"
                )
    for anim in project.animations.values():
        if anim.clip_id not in project.clips:
            problems.append(f"animation {anim.id} references missing clip {anim.clip_id}")
        if anim.phase not in PHASES:
            problems.append(f"animation {anim.id} has bad phase {anim.phase!r}")
    if project.revision < 0:
        problems.append("revision must be >= 0")
    for prev, entry in zip(project.operation_log, project.operation_log[1:]):
        if entry.seq <= prev.seq:
            problems.append("operation log seq not strictly increasing")
            break
    return problems

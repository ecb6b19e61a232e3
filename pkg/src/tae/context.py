"""Agent context assembly: one read-only snapshot per revision, shared by the
inline agents, the chat agent, and instruction suggestions."""

from __future__ import annotations

from typing import Optional

from .llm import AgentContext
from .model import MediaClipPayload, Project, TextClipPayload, to_seconds


def _clip_summary(project: Project, clip) -> str:
    track = project.tracks.get(clip.track_id)
    span = f"[{clip.start:g}s, {to_seconds(clip.end_ms):g}s)"
    anims = project.animations_for_clip(clip.id)
    anim_bit = ""
    if anims:
        anim_bit = " anims=" + ",".join(f"{a.preset}({a.id})" for a in anims)
    if isinstance(clip.payload, TextClipPayload):
        body = f'text "{clip.payload.content}"'
    elif isinstance(clip.payload, MediaClipPayload):
        body = f"media asset={clip.payload.asset_ref}"
    else:
        body = f"element {clip.payload.element_kind}"
    kind = track.kind if track else "?"
    return f"{clip.id} {span} on {clip.track_id} ({kind}): {body}{anim_bit}"


def build_context(
    project: Project,
    dialog: Optional[list[dict[str, str]]] = None,
    selected_tracks: Optional[set[str]] = None,
) -> AgentContext:
    tracks = sorted(project.tracks.values(), key=lambda t: t.order_index)
    timeline = [
        f"{t.id} track#{t.order_index} {t.kind} \"{t.name}\"" for t in tracks
    ]
    for track in tracks:
        for clip in project.clips_on_track(track.id):
            timeline.append("  " + _clip_summary(project, clip))

    if selected_tracks is None:
        selected_tracks = {
            t.id for t in project.tracks.values() if t.kind == "text" and t.script_visible
        }
    script_clips = [
        c
        for c in project.clips.values()
        if c.track_id in selected_tracks and isinstance(c.payload, TextClipPayload)
    ]
    script_clips.sort(
        key=lambda c: (c.start_ms, project.tracks[c.track_id].order_index, c.id)
    )
    script_lines = [f"{c.id}: {c.payload.content}" for c in script_clips]

    log_lines = [
        f"#{e.seq} {e.actor} {e.tool} {e.outcome}" + (f" ({e.detail})" if e.detail else "")
        for e in project.operation_log
    ]
    assets = [
        f"{a.id} {a.kind} \"{a.name}\" {a.uri}"
        for a in sorted(project.assets.values(), key=lambda a: a.id)
    ]
    return AgentContext(
        revision=project.revision,
        dialog=list(dialog or []),
        timeline_summary=timeline,
        script_lines=script_lines,
        operation_log=log_lines,
        asset_summary=assets,
    )

"""FastAPI service over the editing engine.

One command queue (lock) per project serializes mutations; every commit is
persisted with an atomic replace and broadcast on the project's event channel.
"""

from __future__ import annotations

import os
import threading
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, File, Query, Request, UploadFile
from fastapi.responses import JSONResponse, StreamingResponse

from .. import chat as chat_mod
from .. import script as script_mod
from ..context import build_context
from ..engine import ProjectEngine, snapshot_frame
from ..errors import (
    EditorError,
    InvalidAnchor,
    ProviderError,
    StaleSuggestion,
    UnknownProject,
)
from ..inline import InlineAgents, SuggestionStore
from ..llm import Gateway, MockProvider, offline_mode, provider_from_env
from ..model import (
    ElementClipPayload,
    MediaClipPayload,
    TextClipPayload,
    TextStyle,
)
from ..presets import build_registry
from ..serialize import (
    animation_to_doc,
    clip_to_doc,
    project_to_doc,
    project_from_doc,
    render_state_to_doc,
    asset_to_doc,
    track_to_doc,
)
from ..store import ProjectStore
from ..tools import ToolDispatcher
from .events import EventBus, sse_stream
from . import schemas

_STATUS_BY_CODE = {
    "unknown_project": 404, "unknown_track": 404, "unknown_clip": 404,
    "unknown_asset": 404, "unknown_animation": 404, "unknown_preset": 404,
    "unknown_class": 404, "unknown_tool": 404, "unknown_suggestion": 404,
    "unknown_session": 404,
    "overlap": 409, "not_adjacent": 409, "track_mismatch": 409,
    "asset_in_use": 409, "duplicate_class": 409, "stale_suggestion": 409,
    "session_busy": 409, "wrong_state": 409,
    "provider_error": 502,
}


def _status_for(error: EditorError) -> int:
    return _STATUS_BY_CODE.get(error.code, 422)


class ProjectRuntime:
    """Everything live for one project: engine, agents, chat, events, lock."""

    def __init__(self, service: "EditorService", engine: ProjectEngine):
        self.engine = engine
        self.lock = threading.RLock()
        self.bus = EventBus()
        self.dispatcher = ToolDispatcher(engine)
        self.suggestions = SuggestionStore(engine, self.dispatcher)
        self.inline = InlineAgents(
            engine, self.suggestions, gateway=service.gateway, use_llm=service.use_llm
        )
        self.orchestrator = chat_mod.ChatOrchestrator(
            engine, self.dispatcher, service.gateway
        )
        # Script selection defaults to the text tracks flagged script_visible.
        self.script_tracks: Optional[list[str]] = None
        self._suggest_timers: dict[str, threading.Timer] = {}

    def selected_tracks(self) -> list[str]:
        if self.script_tracks is not None:
            live = self.engine.project.tracks
            return [t for t in self.script_tracks if t in live]
        tracks = [
            t
            for t in self.engine.project.tracks.values()
            if t.kind == "text" and t.script_visible
        ]
        tracks.sort(key=lambda t: t.order_index)
        return [t.id for t in tracks]


class EditorService:
    def __init__(
        self,
        data_dir: str | Path,
        offline: bool = False,
        gateway: Optional[Gateway] = None,
        suggest_debounce: Optional[float] = None,
    ):
        self.registry = build_registry()
        self.store = ProjectStore(data_dir)
        self.offline = offline or offline_mode()
        if gateway is not None:
            self.gateway = gateway
        elif self.offline:
            self.gateway = Gateway(MockProvider([]), self.registry)
        else:
            self.gateway = provider_from_env(self.registry)
        # LLM-backed agents only when a real provider is configured.
        self.use_llm = not self.offline and gateway is None and bool(
            os.environ.get("TAE_LLM_BASE_URL")
        )
        if suggest_debounce is None:
            suggest_debounce = float(os.environ.get("TAE_SUGGEST_DEBOUNCE", "0.5"))
        self.suggest_debounce = suggest_debounce
        self._runtimes: dict[str, ProjectRuntime] = {}
        self._lock = threading.Lock()

    # -- runtime management ---------------------------------------------------

    def create_project(self, req: schemas.CreateProjectRequest) -> ProjectRuntime:
        engine = ProjectEngine(self.registry, seed=req.seed)
        engine.project.fps = req.fps
        engine.project.canvas = (req.canvas.width_px, req.canvas.height_px)
        runtime = ProjectRuntime(self, engine)
        with self._lock:
            self._runtimes[engine.project.id] = runtime
        self.store.save(engine.project)
        return runtime

    def runtime(self, project_id: str) -> ProjectRuntime:
        with self._lock:
            runtime = self._runtimes.get(project_id)
            if runtime is not None:
                return runtime
        project = self.store.load(project_id)  # raises UnknownProject
        engine = ProjectEngine(self.registry, project=project)
        runtime = ProjectRuntime(self, engine)
        for doc in self.store.load_sessions(project_id):
            session = chat_mod.session_from_doc(doc)
            runtime.orchestrator.sessions[session.id] = session
        with self._lock:
            self._runtimes.setdefault(project_id, runtime)
            return self._runtimes[project_id]

    def drop_project(self, project_id: str) -> None:
        with self._lock:
            self._runtimes.pop(project_id, None)
        self.store.delete(project_id)

    def find_session(self, session_id: str) -> tuple[ProjectRuntime, chat_mod.ChatSession]:
        with self._lock:
            runtimes = list(self._runtimes.values())
        for runtime in runtimes:
            session = runtime.orchestrator.sessions.get(session_id)
            if session is not None:
                return runtime, session
        # Sessions persist with their project; check stored projects too.
        for project_id in self.store.list_ids():
            runtime = self.runtime(project_id)
            session = runtime.orchestrator.sessions.get(session_id)
            if session is not None:
                return runtime, session
        from ..errors import UnknownSession

        raise UnknownSession(f"no chat session {session_id}", id=session_id)

    # -- commit plumbing ------------------------------------------------------

    def committed(self, runtime: ProjectRuntime) -> None:
        """Persist and broadcast after a mutation."""
        project = runtime.engine.project
        self.store.save(project)
        runtime.bus.publish("revision", {"revision": project.revision})

    def save_sessions(self, runtime: ProjectRuntime) -> None:
        project_id = runtime.engine.project.id
        sessions = [s.to_doc() for s in runtime.orchestrator.sessions.values()]
        self.store.save_sessions(project_id, sessions)

    # -- suggestions -----------------------------------------------------------

    def schedule_suggestions(self, runtime: ProjectRuntime, clip_id: str) -> None:
        """Recompute a line's suggestions after the debounce window."""
        if self.suggest_debounce <= 0:
            self.refresh_suggestions(runtime, clip_id)
            return
        timer = runtime._suggest_timers.get(clip_id)
        if timer is not None:
            timer.cancel()
        timer = threading.Timer(
            self.suggest_debounce, self.refresh_suggestions, args=(runtime, clip_id)
        )
        timer.daemon = True
        runtime._suggest_timers[clip_id] = timer
        timer.start()

    def refresh_suggestions(self, runtime: ProjectRuntime, clip_id: str) -> None:
        with runtime.lock:
            runtime._suggest_timers.pop(clip_id, None)
            if clip_id not in runtime.engine.project.clips:
                return
            runtime.suggestions.drop_for_clip(clip_id)
            try:
                created = list(runtime.inline.suggest_text_revisions(clip_id))
                created.append(runtime.inline.recommend_animation(clip_id))
            except (ProviderError, EditorError):
                return
            revision = runtime.engine.project.revision
            for suggestion in created:
                runtime.bus.publish(
                    "suggestion",
                    {"suggestion": suggestion.to_doc(), "project_revision": revision},
                )


def create_app(
    data_dir: str | Path = "./data",
    offline: bool = False,
    gateway: Optional[Gateway] = None,
    suggest_debounce: Optional[float] = None,
) -> FastAPI:
    service = EditorService(
        data_dir, offline=offline, gateway=gateway, suggest_debounce=suggest_debounce
    )
    app = FastAPI(title="tae", version="0.1.0")
    app.state.service = service

    @app.exception_handler(EditorError)
    async def editor_error_handler(_request: Request, exc: EditorError):
        return JSONResponse(status_code=_status_for(exc), content=exc.to_api_error())

    # -- projects -------------------------------------------------------------

    @app.post("/projects", status_code=201)
    def create_project(req: schemas.CreateProjectRequest) -> dict[str, Any]:
        runtime = service.create_project(req)
        return project_to_doc(runtime.engine.project)

    @app.get("/projects")
    def list_projects() -> list[dict[str, Any]]:
        out = []
        for project_id in service.store.list_ids():
            runtime = service.runtime(project_id)
            project = runtime.engine.project
            out.append(
                schemas.ProjectSummary(
                    id=project.id,
                    revision=project.revision,
                    fps=project.fps,
                    tracks=len(project.tracks),
                    clips=len(project.clips),
                ).model_dump()
            )
        return out

    @app.get("/projects/{project_id}")
    def get_project(project_id: str) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        with runtime.lock:
            return project_to_doc(runtime.engine.project)

    @app.put("/projects/{project_id}")
    def put_project(project_id: str, doc: dict[str, Any]) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        project = project_from_doc(doc)
        if project.id != project_id:
            raise InvalidAnchor("document id does not match the URL", id=project.id)
        with runtime.lock:
            runtime.engine.project = project
            runtime.engine._issued = set(project.live_ids())
            service.committed(runtime)
            return project_to_doc(project)

    @app.delete("/projects/{project_id}", status_code=204)
    def delete_project(project_id: str) -> None:
        service.runtime(project_id)  # 404 when missing
        service.drop_project(project_id)

    @app.get("/projects/{project_id}/tools")
    def get_tools(project_id: str) -> list[dict[str, Any]]:
        runtime = service.runtime(project_id)
        return [d.to_function_schema() for d in runtime.dispatcher.descriptors()]

    # -- timeline -----------------------------------------------------------

    @app.post("/projects/{project_id}/tracks", status_code=201)
    def create_track(project_id: str, req: schemas.TrackCreateRequest) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        with runtime.lock:
            track = runtime.engine.add_track(
                req.kind, req.name, req.order_index, req.script_visible
            )
            service.committed(runtime)
            return track_to_doc(track)

    @app.patch("/projects/{project_id}/tracks/{track_id}")
    def update_track(
        project_id: str, track_id: str, req: schemas.TrackUpdateRequest
    ) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        changes = {k: v for k, v in req.model_dump().items() if v is not None}
        with runtime.lock:
            track = runtime.engine.update_track(track_id, changes)
            service.committed(runtime)
            return track_to_doc(track)

    @app.delete("/projects/{project_id}/tracks/{track_id}", status_code=204)
    def delete_track(project_id: str, track_id: str) -> None:
        runtime = service.runtime(project_id)
        with runtime.lock:
            runtime.engine.remove_track(track_id)
            service.committed(runtime)

    @app.post("/projects/{project_id}/clips", status_code=201)
    def create_clip(project_id: str, req: schemas.ClipCreateRequest) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        payload = _payload_from_spec(req.payload)
        with runtime.lock:
            clip = runtime.engine.add_clip(req.track_id, req.start, req.duration, payload)
            service.committed(runtime)
            return clip_to_doc(clip)

    @app.patch("/projects/{project_id}/clips/{clip_id}")
    def update_clip(
        project_id: str, clip_id: str, req: schemas.ClipUpdateRequest
    ) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        changes: dict[str, Any] = {}
        for key in ("start", "duration", "track_id", "content"):
            value = getattr(req, key)
            if value is not None:
                changes[key] = value
        if req.style is not None:
            changes.update(req.style.delta())
        with runtime.lock:
            clip = runtime.engine.update_clip(clip_id, changes)
            service.committed(runtime)
            if "content" in changes:
                service.schedule_suggestions(runtime, clip_id)
            return clip_to_doc(clip)

    @app.delete("/projects/{project_id}/clips/{clip_id}", status_code=204)
    def delete_clip(project_id: str, clip_id: str) -> None:
        runtime = service.runtime(project_id)
        with runtime.lock:
            runtime.engine.remove_clip(clip_id)
            service.committed(runtime)

    @app.post("/projects/{project_id}/clips/{clip_id}/split")
    def split_clip(project_id: str, clip_id: str, req: schemas.SplitClipRequest):
        runtime = service.runtime(project_id)
        with runtime.lock:
            first, second = runtime.engine.split_clip(clip_id, req.at)
            service.committed(runtime)
            return {"first": clip_to_doc(first), "second": clip_to_doc(second)}

    @app.post("/projects/{project_id}/clips/merge")
    def merge_clips(project_id: str, req: schemas.MergeClipsRequest) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        with runtime.lock:
            clip = runtime.engine.merge_clips(req.first, req.second)
            service.committed(runtime)
            return clip_to_doc(clip)

    @app.post("/projects/{project_id}/clips/{clip_id}/animations", status_code=201)
    def attach_animation(
        project_id: str, clip_id: str, req: schemas.AttachAnimationRequest
    ) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        with runtime.lock:
            anim = runtime.engine.attach_animation(clip_id, req.preset, req.params, req.phase)
            service.committed(runtime)
            return animation_to_doc(anim)

    @app.patch("/projects/{project_id}/animations/{anim_id}")
    def update_animation(
        project_id: str, anim_id: str, req: schemas.AnimationUpdateRequest
    ) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        with runtime.lock:
            anim = runtime.engine.update_animation(anim_id, req.params, req.phase)
            service.committed(runtime)
            return animation_to_doc(anim)

    @app.delete("/projects/{project_id}/animations/{anim_id}", status_code=204)
    def detach_animation(project_id: str, anim_id: str) -> None:
        runtime = service.runtime(project_id)
        with runtime.lock:
            runtime.engine.detach_animation(anim_id)
            service.committed(runtime)

    @app.get("/projects/{project_id}/frame")
    def get_frame(project_id: str, t: float = Query(..., ge=0)) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        with runtime.lock:
            states = snapshot_frame(runtime.engine.project, t)
            return {"t": t, "states": [render_state_to_doc(s) for s in states]}

    # -- script ------------------------------------------------------------

    def _script_doc(runtime: ProjectRuntime) -> dict[str, Any]:
        doc = script_mod.project_script(runtime.engine.project, runtime.selected_tracks())
        for line in doc.lines:
            line.suggestion_markers = [
                s.id for s in runtime.suggestions.pending(line.clip_id)
            ]
        return script_mod.script_wire_doc(runtime.engine.project, doc)

    @app.get("/projects/{project_id}/script")
    def get_script(project_id: str) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        with runtime.lock:
            return _script_doc(runtime)

    @app.put("/projects/{project_id}/script/tracks")
    def set_script_tracks(project_id: str, req: schemas.ScriptTracksRequest) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        with runtime.lock:
            script_mod.set_script_tracks(runtime.engine.project, req.track_ids)
            runtime.script_tracks = list(req.track_ids)
            return _script_doc(runtime)

    @app.put("/projects/{project_id}/script/lines/{clip_id}/text")
    def edit_line_text(
        project_id: str, clip_id: str, req: schemas.TextEditRequest
    ) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        with runtime.lock:
            script_mod.apply_text_edit(runtime.engine, clip_id, req.text)
            service.committed(runtime)
            service.schedule_suggestions(runtime, clip_id)
            return _script_doc(runtime)

    @app.post("/projects/{project_id}/script/lines/{clip_id}/split")
    def split_line(
        project_id: str, clip_id: str, req: schemas.SplitLineRequest
    ) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        with runtime.lock:
            first, second = script_mod.split_line(runtime.engine, clip_id, req.char_offset)
            service.committed(runtime)
            return {
                "first": clip_to_doc(first),
                "second": clip_to_doc(second),
                "script": _script_doc(runtime),
            }

    @app.post("/projects/{project_id}/script/merge")
    def merge_lines(project_id: str, req: schemas.MergeClipsRequest) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        with runtime.lock:
            clip = script_mod.merge_lines(runtime.engine, req.first, req.second)
            service.committed(runtime)
            return {"clip": clip_to_doc(clip), "script": _script_doc(runtime)}

    @app.post("/projects/{project_id}/script/lines", status_code=201)
    def add_line(project_id: str, req: schemas.AddLineRequest) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        with runtime.lock:
            anchor = script_mod.Anchor(
                line_clip_id=req.anchor_clip_id, position=req.position
            )
            if req.strategy is not None:
                decision = script_mod.PlacementDecision(
                    strategy=req.strategy, track_id=req.track_id
                )
            else:
                decision = runtime.inline.propose_clip_placement(
                    req.text, req.anchor_clip_id
                )
                if decision.strategy == "parallel_adjusted_timing" and not decision.track_id:
                    decision.track_id = req.track_id
            clip = script_mod.add_line(
                runtime.engine, runtime.selected_tracks(), anchor, req.text, decision
            )
            if runtime.script_tracks is not None and clip.track_id not in runtime.script_tracks:
                runtime.script_tracks.append(clip.track_id)
            service.committed(runtime)
            service.schedule_suggestions(runtime, clip.id)
            return {
                "clip": clip_to_doc(clip),
                "strategy": decision.strategy,
                "script": _script_doc(runtime),
            }

    @app.post("/projects/{project_id}/script/style-batch")
    def style_batch(project_id: str, req: schemas.StyleBatchRequest) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        with runtime.lock:
            count = script_mod.apply_style_batch(
                runtime.engine,
                runtime.selected_tracks(),
                req.start_index,
                req.end_index,
                req.delta.delta(),
            )
            service.committed(runtime)
            return {"updated": count, "script": _script_doc(runtime)}

    # -- suggestions -----------------------------------------------------------

    @app.get("/projects/{project_id}/suggestions")
    def get_suggestions(project_id: str, clip_id: Optional[str] = None) -> list[dict]:
        runtime = service.runtime(project_id)
        with runtime.lock:
            return [s.to_doc() for s in runtime.suggestions.pending(clip_id)]

    @app.post("/projects/{project_id}/suggestions/refresh")
    def refresh_suggestions(
        project_id: str, req: schemas.RefreshSuggestionsRequest
    ) -> list[dict]:
        runtime = service.runtime(project_id)
        service.refresh_suggestions(runtime, req.clip_id)
        with runtime.lock:
            return [s.to_doc() for s in runtime.suggestions.pending(req.clip_id)]

    @app.post("/projects/{project_id}/suggestions/{suggestion_id}/accept")
    def accept_suggestion(
        project_id: str, suggestion_id: str, req: schemas.AcceptSuggestionRequest
    ) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        with runtime.lock:
            if req.revision != runtime.engine.project.revision:
                raise StaleSuggestion(
                    "project moved on; refresh before accepting",
                    expected=runtime.engine.project.revision, got=req.revision,
                )
            suggestion = runtime.suggestions.accept(suggestion_id)
            service.committed(runtime)
            return suggestion.to_doc()

    @app.post("/projects/{project_id}/suggestions/{suggestion_id}/dismiss")
    def dismiss_suggestion(project_id: str, suggestion_id: str) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        with runtime.lock:
            return runtime.suggestions.dismiss(suggestion_id).to_doc()

    @app.get("/projects/{project_id}/instruction-suggestions")
    def instruction_suggestions(project_id: str) -> list[str]:
        runtime = service.runtime(project_id)
        with runtime.lock:
            return chat_mod.suggest_instructions(
                runtime.engine.project, service.gateway, use_llm=service.use_llm
            )

    # -- assets ------------------------------------------------------------

    @app.post("/projects/{project_id}/assets", status_code=201)
    async def upload_asset(
        project_id: str,
        file: UploadFile = File(...),
        media_duration: Optional[float] = None,
    ) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        content_type = file.content_type or "application/octet-stream"
        kind = _kind_from_content_type(content_type)
        data = await file.read()
        with runtime.lock:
            asset_id = runtime.engine.new_id("asset")
            uri = service.store.store_asset_bytes(
                asset_id, file.filename or "asset.bin", data
            )
            if kind in ("audio", "video") and media_duration is None:
                media_duration = 10.0  # no probing; caller may PATCH later
            asset = runtime.engine.add_asset(kind, file.filename or asset_id, uri,
                                             media_duration if kind != "image" else None)
            service.committed(runtime)
            return asset_to_doc(asset)

    @app.get("/projects/{project_id}/assets")
    def list_assets(project_id: str) -> list[dict[str, Any]]:
        runtime = service.runtime(project_id)
        with runtime.lock:
            return [
                asset_to_doc(a)
                for a in sorted(runtime.engine.project.assets.values(), key=lambda a: a.id)
            ]

    # -- events -----------------------------------------------------------------

    @app.get("/projects/{project_id}/events")
    def project_events(
        project_id: str,
        since_seq: int = 0,
        limit: Optional[int] = None,
    ) -> StreamingResponse:
        runtime = service.runtime(project_id)
        return StreamingResponse(
            sse_stream(runtime.bus, since_seq=since_seq, limit=limit),
            media_type="text/event-stream",
            headers={"Cache-Control": "no-cache"},
        )

    @app.get("/projects/{project_id}/events/log")
    def project_events_log(project_id: str, since_seq: int = 0) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        events, gap = runtime.bus.since(since_seq)
        return {"events": events, "gap": gap, "seq": runtime.bus.seq}

    # -- chat ---------------------------------------------------------------

    def _chat_event_publish(runtime: ProjectRuntime, session, events) -> None:
        for event in events:
            runtime.bus.publish("chat", {"session_id": session.id, **event})

    @app.post("/projects/{project_id}/chat/sessions", status_code=201)
    def create_session(project_id: str, req: schemas.CreateSessionRequest) -> dict[str, Any]:
        runtime = service.runtime(project_id)
        with runtime.lock:
            session = runtime.orchestrator.start_session(auto_skip=req.auto_skip)
            service.save_sessions(runtime)
            return session.to_doc()

    @app.get("/chat/sessions/{session_id}")
    def get_session(session_id: str) -> dict[str, Any]:
        runtime, session = service.find_session(session_id)
        with runtime.lock:
            return session.to_doc()

    @app.get("/chat/sessions/{session_id}/events")
    def session_events(session_id: str, since: int = 0) -> dict[str, Any]:
        runtime, session = service.find_session(session_id)
        with runtime.lock:
            return {
                "state": session.state,
                "events": [e for e in session.events if e["seq"] > since],
            }

    def _after_chat(runtime: ProjectRuntime, session, before: int) -> dict[str, Any]:
        service.committed(runtime)
        service.save_sessions(runtime)
        new_events = session.events[before:]
        _chat_event_publish(runtime, session, new_events)
        return {"session": session.to_doc(), "events": new_events}

    @app.post("/chat/sessions/{session_id}/messages")
    def post_message(session_id: str, req: schemas.ChatMessageRequest) -> dict[str, Any]:
        runtime, session = service.find_session(session_id)
        with runtime.lock:
            before = len(session.events)
            runtime.orchestrator.submit_message(session, req.text)
            return _after_chat(runtime, session, before)

    @app.post("/chat/sessions/{session_id}/approve")
    def approve_step(session_id: str) -> dict[str, Any]:
        runtime, session = service.find_session(session_id)
        with runtime.lock:
            before = len(session.events)
            runtime.orchestrator.approve_step(session)
            return _after_chat(runtime, session, before)

    @app.post("/chat/sessions/{session_id}/modify")
    def modify_step(session_id: str, req: schemas.ModifyStepRequest) -> dict[str, Any]:
        runtime, session = service.find_session(session_id)
        with runtime.lock:
            before = len(session.events)
            runtime.orchestrator.modify_step(session, req.args)
            return _after_chat(runtime, session, before)

    @app.post("/chat/sessions/{session_id}/reject")
    def reject_step(session_id: str) -> dict[str, Any]:
        runtime, session = service.find_session(session_id)
        with runtime.lock:
            before = len(session.events)
            runtime.orchestrator.reject_step(session)
            return _after_chat(runtime, session, before)

    @app.post("/chat/sessions/{session_id}/prompt/answer")
    def answer_prompt(session_id: str, req: schemas.PromptAnswerRequest) -> dict[str, Any]:
        runtime, session = service.find_session(session_id)
        with runtime.lock:
            before = len(session.events)
            runtime.orchestrator.answer_prompt(session, req.answer)
            return _after_chat(runtime, session, before)

    return app


def _kind_from_content_type(content_type: str) -> str:
    major = content_type.split("/", 1)[0].lower()
    if major in ("audio", "video"):
        return major
    return "image"


def _payload_from_spec(spec: schemas.PayloadSpec):
    if spec.kind == "text":
        style = TextStyle()
        if spec.style is not None:
            for key, value in spec.style.delta().items():
                if key in ("color", "position"):
                    value = tuple(value)
                setattr(style, key, value)
        return TextClipPayload(content=spec.content, style=style)
    if spec.kind == "media":
        from ..model import to_ms

        return MediaClipPayload(asset_ref=spec.asset_ref, trim_in_ms=to_ms(spec.trim_in))
    if spec.kind == "element":
        return ElementClipPayload(element_kind=spec.element_kind, params=dict(spec.params))
    from ..errors import PayloadMismatch

    raise PayloadMismatch(f"unknown payload kind {spec.kind!r}", kind=spec.kind)

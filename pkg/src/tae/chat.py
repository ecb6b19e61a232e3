"""Chat agent: one-step plan-and-execute with user approval gates.

Each turn the planner proposes exactly one tool call. Edit steps wait for
approve/modify/reject (unless auto_skip), query steps run immediately, and an
ambiguous situation surfaces as a UI prompt instead of a guess. Failed or
rejected steps feed back into the next planning context; three consecutive
failures end the session.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Optional

from .context import build_context
from .engine import ProjectEngine, clip_class_name
from .errors import (
    DanglingReference,
    EditorError,
    InvalidAnswer,
    ProviderError,
    SessionBusy,
    WrongState,
)
from .llm import (
    AgentContext,
    AssistantText,
    Clarify,
    Gateway,
    ProviderRequest,
    Structured,
    ToolCall,
)
from .model import Project, TextClipPayload
from .tools import ToolDispatcher, validate_args

SESSION_STATES = (
    "idle",
    "planning",
    "awaiting_approval",
    "awaiting_prompt_answer",
    "executing",
    "done",
    "failed",
)

STEP_STATUSES = ("proposed", "approved", "modified", "rejected", "executed", "failed")

MAX_CONSECUTIVE_FAILURES = 3
MAX_INSTRUCTION_SUGGESTIONS = 5

_REFERENCE_RE = re.compile(
    r"@\{(proj|asset|track|clip|anim|sugg|sess|step|prompt):([^{}\s]+)\}"
)


@dataclass
class ReferenceToken:
    raw: str
    kind: str
    ref_id: str
    resolved: bool


@dataclass
class PlanStep:
    id: str
    tool: str
    args: dict[str, Any]
    rationale: str
    kind: str  # "edit" | "query"
    status: str = "proposed"
    result: Any = None
    error: Optional[str] = None

    def to_doc(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "tool": self.tool,
            "args": self.args,
            "rationale": self.rationale,
            "kind": self.kind,
            "status": self.status,
            "result": self.result,
            "error": self.error,
        }


@dataclass
class UIPrompt:
    id: str
    kind: str  # "selector" | "parameter_form" | "upload_button"
    question: str
    payload: dict[str, Any]
    bound_step: Optional[str] = None

    def to_doc(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind,
            "question": self.question,
            "payload": self.payload,
            "bound_step": self.bound_step,
        }


@dataclass
class ChatSession:
    id: str
    project_id: str
    auto_skip: bool = False
    state: str = "idle"
    messages: list[dict[str, str]] = field(default_factory=list)
    steps: list[PlanStep] = field(default_factory=list)
    pending_prompt: Optional[UIPrompt] = None
    notes: list[str] = field(default_factory=list)
    events: list[dict[str, Any]] = field(default_factory=list)
    consecutive_failures: int = 0

    def emit(self, event_type: str, payload: Any) -> dict[str, Any]:
        event = {"type": event_type, "payload": payload, "seq": len(self.events) + 1}
        self.events.append(event)
        return event

    def current_step(self) -> Optional[PlanStep]:
        if self.steps and self.steps[-1].status == "proposed":
            return self.steps[-1]
        return None

    def to_doc(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "project_id": self.project_id,
            "auto_skip": self.auto_skip,
            "state": self.state,
            "messages": list(self.messages),
            "steps": [s.to_doc() for s in self.steps],
            "pending_prompt": self.pending_prompt.to_doc() if self.pending_prompt else None,
            "notes": list(self.notes),
            "events": list(self.events),
            "consecutive_failures": self.consecutive_failures,
        }


def session_from_doc(doc: dict[str, Any]) -> ChatSession:
    session = ChatSession(
        id=doc["id"],
        project_id=doc["project_id"],
        auto_skip=bool(doc.get("auto_skip", False)),
        state=doc.get("state", "idle"),
        messages=list(doc.get("messages", [])),
        notes=list(doc.get("notes", [])),
        events=list(doc.get("events", [])),
        consecutive_failures=int(doc.get("consecutive_failures", 0)),
    )
    for step_doc in doc.get("steps", []):
        session.steps.append(PlanStep(**step_doc))
    prompt_doc = doc.get("pending_prompt")
    if prompt_doc:
        session.pending_prompt = UIPrompt(**prompt_doc)
    return session


def resolve_references(text: str, project: Project) -> list[ReferenceToken]:
    """Parse every "@{kind:id}" mention; malformed braces stay plain text.
    Resolution checks the project's live collections."""
    collections = {
        "asset": project.assets,
        "track": project.tracks,
        "clip": project.clips,
        "anim": project.animations,
    }
    tokens = []
    for match in _REFERENCE_RE.finditer(text):
        kind, ref_id = match.group(1), match.group(2)
        live = collections.get(kind)
        resolved = bool(live and ref_id in live and ref_id.startswith(kind + "_"))
        tokens.append(
            ReferenceToken(raw=match.group(0), kind=kind, ref_id=ref_id, resolved=resolved)
        )
    return tokens


class ChatOrchestrator:
    def __init__(self, engine: ProjectEngine, dispatcher: ToolDispatcher, gateway: Gateway):
        self.engine = engine
        self.dispatcher = dispatcher
        self.gateway = gateway
        self.sessions: dict[str, ChatSession] = {}

    # -- session lifecycle -------------------------------------------------

    def start_session(self, auto_skip: bool = False) -> ChatSession:
        session = ChatSession(
            id=self.engine.new_id("sess"),
            project_id=self.engine.project.id,
            auto_skip=auto_skip,
        )
        self.sessions[session.id] = session
        return session

    def get_session(self, session_id: str) -> ChatSession:
        from .errors import UnknownSession

        session = self.sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"no chat session {session_id}", id=session_id)
        return session

    def submit_message(self, session: ChatSession, text: str) -> list[dict[str, Any]]:
        """Drive the loop until it blocks on the user or completes; returns the
        events emitted by this turn."""
        if session.state not in ("idle", "done"):
            raise SessionBusy(f"session is {session.state}", state=session.state)
        tokens = resolve_references(text, self.engine.project)
        dangling = [t for t in tokens if not t.resolved]
        if dangling:
            raise DanglingReference(
                f"unresolved reference {dangling[0].raw}",
                tokens=[t.raw for t in dangling],
            )
        session.messages.append({"role": "user", "text": text})
        if tokens:
            refs = ", ".join(f"{t.kind} {t.ref_id}" for t in tokens)
            session.notes.append(f"user referenced: {refs}")
        session.state = "planning"
        session.consecutive_failures = 0
        before = len(session.events)
        self._run(session)
        return session.events[before:]

    # -- the loop ------------------------------------------------------------

    def _context(self, session: ChatSession) -> AgentContext:
        context = build_context(self.engine.project, dialog=session.messages)
        if session.notes:
            context.extra["feedback"] = "\n".join(session.notes)
        return context

    def _run(self, session: ChatSession) -> None:
        while session.state == "planning":
            step_or_none = self._plan_next(session)
            if step_or_none is None:
                return  # prompt, completion, or failure already handled
            step = step_or_none
            if step.kind == "query" or session.auto_skip:
                step.status = "approved"
                self._execute(session, step)
            else:
                session.state = "awaiting_approval"
                session.emit("awaiting_approval", {"step_id": step.id})
                return

    def _plan_next(self, session: ChatSession) -> Optional[PlanStep]:
        request = ProviderRequest(
            template_id="element_modification",
            context=self._context(session),
            tools=self.dispatcher.descriptors(),
        )
        try:
            response = self.gateway.complete(request)
        except ProviderError as exc:
            session.notes.append(f"provider error: {exc.message}")
            session.state = "failed"
            session.emit("failed", {"reason": exc.message, "kind": exc.kind})
            return None
        if isinstance(response, AssistantText):
            session.messages.append({"role": "assistant", "text": response.text})
            session.state = "done"
            session.emit("assistant_text", {"text": response.text})
            session.emit("completed", {})
            return None
        if isinstance(response, Clarify):
            try:
                prompt = self._build_prompt(session, response)
            except EditorError as exc:
                session.notes.append(f"bad clarify payload: {exc.message}")
                session.state = "failed"
                session.emit("failed", {"reason": exc.message})
                return None
            session.pending_prompt = prompt
            session.state = "awaiting_prompt_answer"
            session.emit("prompt", prompt.to_doc())
            return None
        if isinstance(response, ToolCall):
            step = PlanStep(
                id=self.engine.new_id("step"),
                tool=response.name,
                args=response.args,
                rationale=response.rationale or f"Planned call to {response.name}",
                kind="query" if response.name.startswith("query_") else "edit",
            )
            session.steps.append(step)
            session.emit("plan_proposed", step.to_doc())
            return step
        session.state = "failed"
        session.emit("failed", {"reason": "provider returned an unusable response"})
        return None

    def _execute(self, session: ChatSession, step: PlanStep) -> None:
        session.state = "executing"
        try:
            result = self.dispatcher.dispatch(step.tool, step.args, actor="chat_agent")
        except EditorError as exc:
            step.status = "failed"
            step.error = f"{exc.code}: {exc.message}"
            session.notes.append(f"step {step.id} failed: {step.error}")
            session.consecutive_failures += 1
            session.emit(
                "step_result",
                {"step_id": step.id, "outcome": "error", "error": exc.to_api_error()},
            )
            if session.consecutive_failures >= MAX_CONSECUTIVE_FAILURES:
                session.state = "failed"
                session.emit(
                    "failed",
                    {"reason": f"{MAX_CONSECUTIVE_FAILURES} consecutive step failures"},
                )
            else:
                session.state = "planning"
            return
        step.status = "executed"
        step.result = result
        session.consecutive_failures = 0
        session.notes.append(f"step {step.id} ({step.tool}) executed")
        session.emit("step_result", {"step_id": step.id, "outcome": "ok", "result": result})
        session.state = "planning"

    # -- approval gate -----------------------------------------------------

    def _gated_step(self, session: ChatSession) -> PlanStep:
        if session.state != "awaiting_approval":
            raise WrongState(f"session is {session.state}, not awaiting approval")
        step = session.steps[-1]
        return step

    def approve_step(self, session: ChatSession) -> None:
        step = self._gated_step(session)
        step.status = "approved"
        self._execute(session, step)
        self._run(session)

    def modify_step(self, session: ChatSession, new_args: dict[str, Any]) -> None:
        step = self._gated_step(session)
        descriptor = self.dispatcher.get(step.tool)
        validated = validate_args(descriptor, new_args, self.engine.registry)
        step.args = validated
        step.status = "modified"
        self._execute(session, step)
        self._run(session)

    def reject_step(self, session: ChatSession) -> None:
        step = self._gated_step(session)
        step.status = "rejected"
        session.notes.append(
            f"user rejected step {step.id} ({step.tool} {step.args}); plan differently"
        )
        session.emit("step_result", {"step_id": step.id, "outcome": "rejected"})
        session.state = "planning"
        self._run(session)

    # -- UI prompts -----------------------------------------------------------

    def _build_prompt(self, session: ChatSession, clarify: Clarify) -> UIPrompt:
        if clarify.needed == "selection":
            options = []
            for candidate in clarify.candidates:
                label = self._label_for(candidate)
                if label is None:
                    raise ProviderError(
                        f"clarify candidate {candidate} does not resolve",
                        kind="malformed_output",
                    )
                options.append({"id": candidate, "label": label})
            if not options:
                raise ProviderError("selector prompt needs candidates", kind="malformed_output")
            return UIPrompt(
                id=self.engine.new_id("prompt"),
                kind="selector",
                question=clarify.question,
                payload={"options": options},
            )
        if clarify.needed == "parameters":
            if len(clarify.candidates) != 1:
                raise ProviderError(
                    "parameter prompt needs exactly one target", kind="malformed_output"
                )
            target = clarify.candidates[0]
            cls_name = self._class_of(target)
            if cls_name is None:
                raise ProviderError(
                    f"clarify target {target} does not resolve", kind="malformed_output"
                )
            fragment = self.engine.registry.reflect_schema(cls_name)
            return UIPrompt(
                id=self.engine.new_id("prompt"),
                kind="parameter_form",
                question=clarify.question,
                payload={"target": target, "class": cls_name, "fields": fragment["fields"]},
            )
        return UIPrompt(
            id=self.engine.new_id("prompt"),
            kind="upload_button",
            question=clarify.question,
            payload={"accepted_kinds": ["image", "audio", "video"]},
        )

    def _label_for(self, object_id: str) -> Optional[str]:
        project = self.engine.project
        if object_id in project.clips:
            clip = project.clips[object_id]
            if isinstance(clip.payload, TextClipPayload):
                return f'clip "{clip.payload.content}" at {clip.start:g}s'
            return f"clip at {clip.start:g}s"
        if object_id in project.tracks:
            return f"track {project.tracks[object_id].name}"
        if object_id in project.assets:
            return f"asset {project.assets[object_id].name}"
        if object_id in project.animations:
            anim = project.animations[object_id]
            return f"{anim.preset} on {anim.clip_id}"
        return None

    def _class_of(self, object_id: str) -> Optional[str]:
        project = self.engine.project
        if object_id in project.clips:
            return clip_class_name(project.clips[object_id])
        if object_id in project.animations:
            return project.animations[object_id].preset
        if object_id in project.tracks:
            return "track"
        if object_id in project.assets:
            return "asset"
        return None

    def answer_prompt(self, session: ChatSession, answer: dict[str, Any]) -> None:
        if session.state != "awaiting_prompt_answer" or session.pending_prompt is None:
            raise WrongState(f"session is {session.state}, no prompt to answer")
        prompt = session.pending_prompt
        if prompt.kind == "selector":
            option_id = answer.get("option_id")
            allowed = {o["id"] for o in prompt.payload["options"]}
            if option_id not in allowed:
                raise InvalidAnswer(
                    f"{option_id!r} is not one of the offered options", options=sorted(allowed)
                )
            session.notes.append(f"clarification: user selected {option_id}")
        elif prompt.kind == "parameter_form":
            values = answer.get("values")
            if not isinstance(values, dict) or not values:
                raise InvalidAnswer("parameter form answer needs values")
            try:
                self.engine.registry.validate_fields(
                    prompt.payload["class"], values, partial=True
                )
            except EditorError as exc:
                raise InvalidAnswer(f"bad form values: {exc.message}") from exc
            session.notes.append(
                f"clarification: parameters for {prompt.payload['target']} = {values}"
            )
        else:  # upload_button
            asset_id = answer.get("asset_id")
            if not asset_id or asset_id not in self.engine.project.assets:
                raise InvalidAnswer(f"{asset_id!r} is not an uploaded asset")
            session.notes.append(f"clarification: user uploaded {asset_id}")
        session.pending_prompt = None
        session.state = "planning"
        self._run(session)


# -- instruction suggestions -------------------------------------------------


def suggest_instructions(
    project: Project, gateway: Optional[Gateway] = None, use_llm: bool = False
) -> list[str]:
    """Context-aware next-step chips. Rule mode is a fixed, deterministic
    table over the editor state; LLM mode falls back to it on provider error."""
    if use_llm and gateway is not None:
        context = build_context(project)
        request = ProviderRequest(template_id="instruction_suggestions", context=context)
        try:
            response = gateway.complete(request)
            if isinstance(response, Structured) and isinstance(response.document, list):
                out = [str(s)[:120] for s in response.document[:MAX_INSTRUCTION_SUGGESTIONS]]
                if out:
                    return out
        except ProviderError:
            pass
    return _rule_instructions(project)


def _rule_instructions(project: Project) -> list[str]:
    suggestions: list[str] = []
    text_clips = [c for c in project.clips.values() if isinstance(c.payload, TextClipPayload)]
    if not project.clips:
        suggestions.append("Create a draft timeline from your script")
    if text_clips and not project.animations:
        suggestions.append("Add entrance animations to the text clips")
    if text_clips:
        suggestions.append("Refine the wording of the script lines")
    used_assets = {
        c.payload.asset_ref
        for c in project.clips.values()
        if hasattr(c.payload, "asset_ref")
    }
    if set(project.assets) - used_assets:
        suggestions.append("Place the unused uploaded assets on the timeline")
    if len(project.tracks) > 1:
        suggestions.append("Tidy the track layout and close timeline gaps")
    suggestions.append("Ask me to adjust timing, styles, or animations")
    return suggestions[:MAX_INSTRUCTION_SUGGESTIONS]

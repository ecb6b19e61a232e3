"""LLM provider abstraction: prompt templates, completion with function
calling, and a deterministic scripted mock for tests.

Nothing a provider returns reaches tool dispatch unvalidated: tool calls must
name a provided tool and satisfy its schema, constrained outputs must come
from the enumerated set, and violations raise ProviderError instead of being
silently repaired.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from typing import Any, Optional, Protocol

from .errors import ProviderError
from .tools import ToolDescriptor, validate_args
from .meta import MetaRegistry

TEMPLATE_IDS = (
    "intent_comprehension",
    "semantic_matching",
    "element_modification",
    "text_refinement",
    "clip_strategy",
    "instruction_suggestions",
)

# Templates whose completions are tool invocations rather than structured
# documents; the chat loop plans with these.
TOOL_TEMPLATES = frozenset({"intent_comprehension", "element_modification"})

LOG_CONTEXT_ENTRIES = 20
SCRIPT_CONTEXT_CHARS = 4000

ENV_BASE_URL = "TAE_LLM_BASE_URL"
ENV_MODEL = "TAE_LLM_MODEL"
ENV_API_KEY = "TAE_LLM_API_KEY"
ENV_TIMEOUT = "TAE_LLM_TIMEOUT_SECONDS"
ENV_OFFLINE = "TAE_OFFLINE"

# Reserved tool the model calls to signal ambiguity instead of guessing.
CLARIFY_TOOL = "request_clarification"


def offline_mode() -> bool:
    return os.environ.get(ENV_OFFLINE, "") == "1"


@dataclass
class AgentContext:
    """Read-only snapshot the agents reason over, taken at one revision."""

    revision: int = 0
    dialog: list[dict[str, str]] = field(default_factory=list)
    timeline_summary: list[str] = field(default_factory=list)
    script_lines: list[str] = field(default_factory=list)
    operation_log: list[str] = field(default_factory=list)
    asset_summary: list[str] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)


@dataclass
class ProviderRequest:
    template_id: str
    context: AgentContext
    tools: list[ToolDescriptor] = field(default_factory=list)
    constraints: Optional[list[str]] = None


@dataclass
class ToolCall:
    name: str
    args: dict[str, Any]
    rationale: str = ""  # assistant text accompanying the call, when any


@dataclass
class AssistantText:
    text: str


@dataclass
class Clarify:
    question: str
    candidates: list[str] = field(default_factory=list)
    needed: str = "selection"  # selection | parameters | upload


@dataclass
class Structured:
    document: Any


ProviderResponse = Any  # ToolCall | AssistantText | Clarify | Structured


class Provider(Protocol):
    def complete(self, request: ProviderRequest, prompt: str) -> ProviderResponse: ...


SEMANTIC_MAPPING_TABLE = """\
## Semantic-animation mapping
Static attributes: font size scales with importance (1 + 0.5 * importance);
color and positioning may be tinted for urgent lines.
Dynamic behaviors: tone selects the preset family, importance scales velocity
(1 + importance).
| tone     | preset     | temporal pattern |
|----------|------------|------------------|
| positive | scale_pop  | on_entry         |
| urgent   | bounce     | pulsed           |
| negative | fade_in    | on_entry         |
| calm     | fade_in    | on_entry         |
| neutral  | typewriter | on_entry         |"""

_TEMPLATE_HEADERS = {
    "intent_comprehension": (
        "You are an editing assistant inside a text animation editor. Read the "
        "editor state and the dialog, infer the user's editing intent, and "
        "answer with the single most useful next step."
    ),
    "semantic_matching": (
        "Recommend one animation preset for the given script line using the "
        "semantic-animation mapping below. Stay inside the preset catalog."
    ),
    "element_modification": (
        "Plan exactly one tool invocation that moves the project toward the "
        "user's goal, or reply with text when the goal is complete. Call "
        f"{CLARIFY_TOOL} when the target element is ambiguous."
    ),
    "text_refinement": (
        "Propose text revisions for the given script line. Answer as a JSON "
        "array of {start, end, replacement, reason} objects; an empty array "
        "means the line is fine as written."
    ),
    "clip_strategy": (
        "Choose where the new script line's clip should go. Answer with a "
        "JSON object {strategy, track_id, start} where strategy is one of the "
        "allowed values."
    ),
    "instruction_suggestions": (
        "Suggest up to five short next-step instructions the user could give, "
        "based on the current editor state. Answer as a JSON array of strings."
    ),
}


def assemble_prompt(template_id: str, context: AgentContext) -> str:
    """Deterministic prompt document for a template + context snapshot."""
    if template_id not in TEMPLATE_IDS:
        raise ProviderError(f"unknown template {template_id!r}", kind="malformed_output")
    parts = [_TEMPLATE_HEADERS[template_id], ""]
    parts.append(f"## Project revision\n{context.revision}")
    parts.append("## Timeline elements\n" + ("\n".join(context.timeline_summary) or "(empty)"))
    script_text = "\n".join(context.script_lines)
    if len(script_text) > SCRIPT_CONTEXT_CHARS:
        # Oldest lines go first when trimming; keep the newest tail.
        script_text = script_text[-SCRIPT_CONTEXT_CHARS:]
    parts.append("## Script\n" + (script_text or "(no script)"))
    recent_log = context.operation_log[-LOG_CONTEXT_ENTRIES:]
    parts.append("## Recent operations\n" + ("\n".join(recent_log) or "(none)"))
    parts.append("## Assets\n" + ("\n".join(context.asset_summary) or "(none)"))
    if template_id == "semantic_matching":
        parts.append(SEMANTIC_MAPPING_TABLE)
    if context.dialog:
        dialog = "\n".join(f"{m['role']}: {m['text']}" for m in context.dialog)
        parts.append("## Dialog\n" + dialog)
    for key in sorted(context.extra):
        parts.append(f"## {key}\n{context.extra[key]}")
    return "\n\n".join(parts) + "\n"


def _check_request(request: ProviderRequest) -> None:
    if request.template_id not in TEMPLATE_IDS:
        raise ProviderError(
            f"unknown template {request.template_id!r}", kind="malformed_output"
        )
    expects_tools = request.template_id in TOOL_TEMPLATES
    if expects_tools and not request.tools:
        raise ProviderError(
            f"template {request.template_id} expects tools", kind="malformed_output"
        )
    if not expects_tools and request.tools:
        raise ProviderError(
            f"template {request.template_id} does not take tools", kind="malformed_output"
        )


class Gateway:
    """Validation wall between providers and the rest of the system."""

    def __init__(self, provider: Provider, registry: MetaRegistry):
        self.provider = provider
        self.registry = registry

    def complete(self, request: ProviderRequest) -> ProviderResponse:
        _check_request(request)
        prompt = assemble_prompt(request.template_id, request.context)
        response = self.provider.complete(request, prompt)
        return self._validate(request, response)

    def _validate(self, request: ProviderRequest, response: ProviderResponse) -> ProviderResponse:
        if isinstance(response, ToolCall):
            by_name = {t.name: t for t in request.tools}
            if response.name == CLARIFY_TOOL:
                return _clarify_from_args(response.args)
            if response.name not in by_name:
                raise ProviderError(
                    f"provider called unknown tool {response.name!r}",
                    kind="malformed_output", tool=response.name,
                )
            from .errors import EditorError

            try:
                response.args = validate_args(by_name[response.name], response.args, self.registry)
            except EditorError as exc:
                raise ProviderError(
                    f"tool args rejected: {exc.message}", kind="malformed_output"
                ) from exc
            return response
        if isinstance(response, Clarify):
            if not response.question:
                raise ProviderError("clarify without a question", kind="malformed_output")
            if response.needed not in ("selection", "parameters", "upload"):
                raise ProviderError(
                    f"clarify needed={response.needed!r} invalid", kind="malformed_output"
                )
            return response
        if isinstance(response, Structured):
            if request.constraints is not None:
                value = response.document
                key = value.get("strategy") if isinstance(value, dict) else value
                if key not in request.constraints:
                    raise ProviderError(
                        f"constrained output {key!r} not in {request.constraints}",
                        kind="malformed_output",
                    )
            return response
        if isinstance(response, AssistantText):
            return response
        raise ProviderError(
            f"provider returned unsupported payload {type(response).__name__}",
            kind="malformed_output",
        )


def _clarify_from_args(args: dict[str, Any]) -> Clarify:
    if not isinstance(args, dict) or not args.get("question"):
        raise ProviderError("clarify call missing question", kind="malformed_output")
    return Clarify(
        question=str(args["question"]),
        candidates=[str(c) for c in args.get("candidates", [])],
        needed=str(args.get("needed", "selection")),
    )


class MockProvider:
    """Returns scripted responses in order and records every request;
    exhausting the script raises ProviderError."""

    def __init__(self, script: list[ProviderResponse]):
        self._script = list(script)
        self._lock = threading.Lock()
        self.requests: list[ProviderRequest] = []
        self.prompts: list[str] = []

    def complete(self, request: ProviderRequest, prompt: str) -> ProviderResponse:
        with self._lock:
            self.requests.append(request)
            self.prompts.append(prompt)
            if not self._script:
                raise ProviderError("mock script exhausted", kind="malformed_output")
            return self._script.pop(0)


class HttpProvider:
    """Chat-completions-compatible HTTP provider configured by environment."""

    def __init__(
        self,
        base_url: Optional[str] = None,
        model: Optional[str] = None,
        api_key: Optional[str] = None,
        timeout: Optional[float] = None,
        transport: Any = None,
    ):
        self.base_url = (base_url or os.environ.get(ENV_BASE_URL, "")).rstrip("/")
        self.model = model or os.environ.get(ENV_MODEL, "gpt-4o")
        self.api_key = api_key or os.environ.get(ENV_API_KEY, "")
        self.timeout = timeout if timeout is not None else float(
            os.environ.get(ENV_TIMEOUT, "30")
        )
        self._transport = transport
        if not self.base_url:
            raise ProviderError(f"{ENV_BASE_URL} is not configured", kind="network")

    def complete(self, request: ProviderRequest, prompt: str) -> ProviderResponse:
        import httpx

        body: dict[str, Any] = {
            "model": self.model,
            "messages": [{"role": "system", "content": prompt}],
        }
        if request.tools:
            functions = [t.to_function_schema() for t in request.tools]
            functions.append(_clarify_function_schema())
            body["tools"] = [{"type": "function", "function": f} for f in functions]
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            with httpx.Client(transport=self._transport, timeout=self.timeout) as client:
                reply = client.post(
                    f"{self.base_url}/chat/completions", json=body, headers=headers
                )
        except httpx.TimeoutException as exc:
            raise ProviderError(f"provider timed out: {exc}", kind="timeout") from exc
        except httpx.HTTPError as exc:
            raise ProviderError(f"provider unreachable: {exc}", kind="network") from exc
        if reply.status_code != 200:
            raise ProviderError(
                f"provider returned HTTP {reply.status_code}", kind="network",
                status=reply.status_code,
            )
        return self._parse(request, reply.json())

    def _parse(self, request: ProviderRequest, payload: Any) -> ProviderResponse:
        try:
            message = payload["choices"][0]["message"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderError("malformed completion payload", kind="malformed_output") from exc
        tool_calls = message.get("tool_calls") or []
        if tool_calls:
            call = tool_calls[0]["function"]
            try:
                args = json.loads(call.get("arguments") or "{}")
            except json.JSONDecodeError as exc:
                raise ProviderError(
                    "tool arguments are not valid JSON", kind="malformed_output"
                ) from exc
            return ToolCall(
                name=call.get("name", ""), args=args,
                rationale=str(message.get("content") or ""),
            )
        content = message.get("content") or ""
        if request.template_id not in TOOL_TEMPLATES:
            try:
                return Structured(document=json.loads(content))
            except json.JSONDecodeError as exc:
                raise ProviderError(
                    "structured reply is not valid JSON", kind="malformed_output"
                ) from exc
        return AssistantText(text=content)


def _clarify_function_schema() -> dict[str, Any]:
    return {
        "name": CLARIFY_TOOL,
        "description": (
            "Ask the user to resolve an ambiguity instead of guessing. Provide "
            "candidate object ids when the choice is between elements."
        ),
        "parameters": {
            "type": "object",
            "properties": {
                "question": {"type": "string"},
                "candidates": {"type": "array", "items": {"type": "string"}},
                "needed": {"type": "string", "enum": ["selection", "parameters", "upload"]},
            },
            "required": ["question"],
        },
    }


def provider_from_env(registry: MetaRegistry) -> Gateway:
    """Gateway for the configured provider; offline mode gets an empty mock."""
    if offline_mode() or not os.environ.get(ENV_BASE_URL):
        return Gateway(MockProvider([]), registry)
    return Gateway(HttpProvider(), registry)

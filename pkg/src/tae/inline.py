"""Inline agents: three single-task suggesters (text revision, animation
recommendation, clip placement) emitting {action, reason} proposals.

Suggestions are inert: creating one never touches the project; accepting one
dispatches exactly the stated action with actor=inline_agent. A suggestion
whose target clip changed since it was made is invalidated, not applied.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

from .context import build_context
from .engine import ProjectEngine
from .errors import (
    ProviderError,
    StaleSuggestion,
    UnknownPreset,
    UnknownSuggestion,
)
from .llm import Gateway, ProviderRequest, Structured
from .script import PLACEMENT_STRATEGIES, PlacementDecision
from .semantics import analyze_semantics, map_to_directive, rule_revisions
from .serialize import clip_to_doc
from .tools import ToolDispatcher

SUGGESTION_KINDS = ("text_revision", "animation_recommendation")
STATUSES = ("pending", "accepted", "dismissed")


@dataclass
class Suggestion:
    id: str
    kind: str
    clip_id: str
    action: dict[str, Any]
    reason: str
    status: str = "pending"
    char_range: Optional[tuple[int, int]] = None
    created_revision: int = 0
    # Canonical form of the target clip when the suggestion was made; if the
    # clip changed before acceptance the suggestion is stale.
    clip_fingerprint: str = ""

    def __post_init__(self) -> None:
        if not self.reason:
            raise ValueError("suggestions always carry a reason")

    def to_doc(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "id": self.id,
            "kind": self.kind,
            "target": {"clip_id": self.clip_id},
            "action": self.action,
            "reason": self.reason,
            "status": self.status,
        }
        if self.char_range is not None:
            doc["target"]["char_range"] = list(self.char_range)
        return doc


def _fingerprint(engine: ProjectEngine, clip_id: str) -> str:
    return json.dumps(clip_to_doc(engine.clip(clip_id)), sort_keys=True)


class SuggestionStore:
    """Pending suggestions for one project; acceptance goes through dispatch."""

    def __init__(self, engine: ProjectEngine, dispatcher: ToolDispatcher):
        self.engine = engine
        self.dispatcher = dispatcher
        self._suggestions: dict[str, Suggestion] = {}

    def add(self, suggestion: Suggestion) -> Suggestion:
        self._suggestions[suggestion.id] = suggestion
        return suggestion

    def get(self, suggestion_id: str) -> Suggestion:
        suggestion = self._suggestions.get(suggestion_id)
        if suggestion is None:
            raise UnknownSuggestion(f"no suggestion {suggestion_id}", id=suggestion_id)
        return suggestion

    def pending(self, clip_id: Optional[str] = None) -> list[Suggestion]:
        found = [s for s in self._suggestions.values() if s.status == "pending"]
        if clip_id is not None:
            found = [s for s in found if s.clip_id == clip_id]
        found.sort(key=lambda s: s.id)
        return found

    def drop_for_clip(self, clip_id: str) -> None:
        """Invalidate pending suggestions when their line is being recomputed."""
        for suggestion in list(self._suggestions.values()):
            if suggestion.clip_id == clip_id and suggestion.status == "pending":
                del self._suggestions[suggestion.id]

    def dismiss(self, suggestion_id: str) -> Suggestion:
        suggestion = self.get(suggestion_id)
        suggestion.status = "dismissed"
        return suggestion

    def accept(self, suggestion_id: str) -> Suggestion:
        suggestion = self.get(suggestion_id)
        if suggestion.status != "pending":
            raise StaleSuggestion(
                f"suggestion {suggestion_id} is {suggestion.status}", id=suggestion_id
            )
        if suggestion.clip_id not in self.engine.project.clips:
            raise StaleSuggestion("target clip is gone", id=suggestion_id)
        if _fingerprint(self.engine, suggestion.clip_id) != suggestion.clip_fingerprint:
            raise StaleSuggestion(
                "target clip changed since the suggestion was made", id=suggestion_id
            )
        if suggestion.kind == "text_revision":
            self.dispatcher.dispatch(
                "update_text_clip",
                {"id": suggestion.clip_id, "content": suggestion.action["replacement"]},
                actor="inline_agent",
            )
        else:
            args = dict(suggestion.action["params"])
            args["clip_id"] = suggestion.clip_id
            if suggestion.action.get("phase"):
                args["phase"] = suggestion.action["phase"]
            self.dispatcher.dispatch(
                f"create_{suggestion.action['preset']}", args, actor="inline_agent"
            )
        suggestion.status = "accepted"
        return suggestion


class InlineAgents:
    """Rule-mode by default; an optional gateway swaps in LLM templates."""

    def __init__(
        self,
        engine: ProjectEngine,
        store: SuggestionStore,
        gateway: Optional[Gateway] = None,
        use_llm: bool = False,
    ):
        self.engine = engine
        self.store = store
        self.gateway = gateway
        self.use_llm = use_llm and gateway is not None

    def _new_suggestion(self, **kwargs: Any) -> Suggestion:
        suggestion = Suggestion(
            id=self.engine.new_id("sugg"),
            created_revision=self.engine.project.revision,
            clip_fingerprint=_fingerprint(self.engine, kwargs["clip_id"]),
            **kwargs,
        )
        return self.store.add(suggestion)

    # -- text revision -----------------------------------------------------

    def suggest_text_revisions(self, clip_id: str) -> list[Suggestion]:
        clip = self.engine.text_clip(clip_id)
        text = clip.payload.content
        if self.use_llm:
            revisions = self._llm_revisions(clip_id, text)
        else:
            revisions = rule_revisions(text)
        suggestions = []
        for (start, end), replacement, reason in revisions:
            if not (0 <= start <= end <= len(text)):
                raise ProviderError(
                    f"revision range [{start}, {end}] outside the line",
                    kind="malformed_output",
                )
            full = text[:start] + replacement + text[end:]
            suggestions.append(
                self._new_suggestion(
                    kind="text_revision",
                    clip_id=clip_id,
                    char_range=(start, end),
                    action={"replacement": full, "span_replacement": replacement},
                    reason=reason,
                )
            )
        return suggestions

    def _llm_revisions(self, clip_id: str, text: str) -> list[tuple[tuple[int, int], str, str]]:
        assert self.gateway is not None
        context = build_context(self.engine.project)
        context.extra["line"] = f"{clip_id}: {text}"
        request = ProviderRequest(template_id="text_refinement", context=context)
        response = self.gateway.complete(request)
        if not isinstance(response, Structured) or not isinstance(response.document, list):
            raise ProviderError("expected a list of revisions", kind="malformed_output")
        out = []
        for item in response.document:
            try:
                start, end = int(item["start"]), int(item["end"])
                out.append(((start, end), str(item["replacement"]), str(item["reason"])))
            except (KeyError, TypeError, ValueError) as exc:
                raise ProviderError(
                    f"malformed revision entry: {item!r}", kind="malformed_output"
                ) from exc
        return out

    # -- animation recommendation -------------------------------------------

    def recommend_animation(self, clip_id: str) -> Suggestion:
        clip = self.engine.text_clip(clip_id)
        text = clip.payload.content
        if self.use_llm:
            preset, params, phase, reason = self._llm_recommendation(clip_id, text)
        else:
            features = analyze_semantics(text)
            directive = map_to_directive(features)
            preset = directive.preset
            params = {"speed": round(directive.velocity_scale, 3)}
            phase = None
            reason = (
                f"Tone '{features.tone}' at importance {features.importance:.2f} maps to "
                f"{preset}; speed scaled to {directive.velocity_scale:.2f}."
            )
        registry = self.engine.registry
        if not registry.has(preset) or registry.get(preset).category != "animation_effect":
            raise UnknownPreset(f"recommended preset {preset!r} is not in the catalog", preset=preset)
        registry.validate_fields(preset, params, partial=True)
        return self._new_suggestion(
            kind="animation_recommendation",
            clip_id=clip_id,
            action={"preset": preset, "params": params, "phase": phase},
            reason=reason,
        )

    def _llm_recommendation(self, clip_id: str, text: str):
        assert self.gateway is not None
        context = build_context(self.engine.project)
        context.extra["line"] = f"{clip_id}: {text}"
        request = ProviderRequest(template_id="semantic_matching", context=context)
        response = self.gateway.complete(request)
        if not isinstance(response, Structured) or not isinstance(response.document, dict):
            raise ProviderError("expected a recommendation object", kind="malformed_output")
        doc = response.document
        try:
            return (
                str(doc["preset"]),
                dict(doc.get("params", {})),
                doc.get("phase"),
                str(doc["reason"]),
            )
        except (KeyError, TypeError) as exc:
            raise ProviderError(
                f"malformed recommendation: {doc!r}", kind="malformed_output"
            ) from exc

    # -- clip placement ------------------------------------------------------

    def propose_clip_placement(
        self, new_line_text: str, anchor_clip_id: Optional[str]
    ) -> PlacementDecision:
        """Strategy choice for add_line. LLM mode must pick from the three
        predefined strategies; anything else falls back to sequential and the
        fallback is recorded in the operation log."""
        if anchor_clip_id is not None:
            self.engine.clip(anchor_clip_id)
        if not self.use_llm:
            return PlacementDecision(strategy="sequential_same_track")
        assert self.gateway is not None
        context = build_context(self.engine.project)
        context.extra["new_line"] = new_line_text
        context.extra["anchor"] = anchor_clip_id or "(document end)"
        request = ProviderRequest(
            template_id="clip_strategy",
            context=context,
            constraints=list(PLACEMENT_STRATEGIES),
        )
        try:
            response = self.gateway.complete(request)
        except ProviderError as exc:
            self.engine.log_failure(
                "propose_clip_placement",
                {"anchor": anchor_clip_id},
                f"provider_error: {exc.message}; fell back to sequential_same_track",
            )
            return PlacementDecision(strategy="sequential_same_track")
        doc = response.document if isinstance(response, Structured) else {}
        strategy = doc.get("strategy") if isinstance(doc, dict) else None
        if strategy not in PLACEMENT_STRATEGIES:
            self.engine.log_failure(
                "propose_clip_placement",
                {"anchor": anchor_clip_id},
                f"invalid strategy {strategy!r}; fell back to sequential_same_track",
            )
            return PlacementDecision(strategy="sequential_same_track")
        return PlacementDecision(
            strategy=strategy,
            track_id=doc.get("track_id"),
            start=doc.get("start"),
        )

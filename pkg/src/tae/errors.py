"""Error hierarchy with stable machine-readable codes.

Every error the engine or service can raise maps to exactly one ``code``
string; the HTTP layer turns these into ApiError payloads without
re-inspecting exception types.
"""

from __future__ import annotations

from typing import Any


class EditorError(Exception):
    """Base class for all domain errors. ``code`` is stable across releases."""

    code = "internal"

    def __init__(self, message: str, **detail: Any):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def to_api_error(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, "detail": self.detail}


# --- core-model ---

class DuplicateClass(EditorError):
    code = "duplicate_class"


class InvalidField(EditorError):
    code = "invalid_field"


class UnknownClass(EditorError):
    code = "unknown_class"


class UnknownField(EditorError):
    code = "unknown_field"


class RangeViolation(EditorError):
    code = "range_violation"


class CorruptDocument(EditorError):
    code = "corrupt_document"


class UnsupportedSchemaVersion(EditorError):
    code = "unsupported_schema_version"


class DanglingReference(EditorError):
    code = "dangling_reference"


# --- timeline-engine ---

class Overlap(EditorError):
    code = "overlap"


class UnknownTrack(EditorError):
    code = "unknown_track"


class UnknownClip(EditorError):
    code = "unknown_clip"


class UnknownAsset(EditorError):
    code = "unknown_asset"


class UnknownAnimation(EditorError):
    code = "unknown_animation"


class PayloadMismatch(EditorError):
    code = "payload_mismatch"


class InvalidDuration(EditorError):
    code = "invalid_duration"


class OutOfRange(EditorError):
    code = "out_of_range"


class NotAdjacent(EditorError):
    code = "not_adjacent"


class TrackMismatch(EditorError):
    code = "track_mismatch"


class UnknownPreset(EditorError):
    code = "unknown_preset"


class OutOfClipRange(EditorError):
    code = "out_of_clip_range"


class AssetInUse(EditorError):
    code = "asset_in_use"


# --- script-sync ---

class NonTextTrack(EditorError):
    code = "non_text_track"


class NotTextClip(EditorError):
    code = "not_text_clip"


class OffsetOutOfRange(EditorError):
    code = "offset_out_of_range"


class InvalidAnchor(EditorError):
    code = "invalid_anchor"


class EmptyRange(EditorError):
    code = "empty_range"


# --- tool-dispatch ---

class UnknownTool(EditorError):
    code = "unknown_tool"


class SchemaViolation(EditorError):
    code = "schema_violation"


# --- agents / chat ---

class UnknownSuggestion(EditorError):
    code = "unknown_suggestion"


class StaleSuggestion(EditorError):
    code = "stale_suggestion"


class UnknownProject(EditorError):
    code = "unknown_project"


class UnknownSession(EditorError):
    code = "unknown_session"


class SessionBusy(EditorError):
    code = "session_busy"


class WrongState(EditorError):
    code = "wrong_state"


class InvalidAnswer(EditorError):
    code = "invalid_answer"


class ProviderError(EditorError):
    """LLM provider failure. ``kind`` is one of network / timeout / malformed_output."""

    code = "provider_error"

    def __init__(self, message: str, kind: str = "malformed_output", **detail: Any):
        super().__init__(message, kind=kind, **detail)
        self.kind = kind

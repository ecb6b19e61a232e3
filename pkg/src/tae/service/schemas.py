"""Pydantic request/response models for the HTTP surface."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class CanvasSpec(BaseModel):
    width_px: int = 1920
    height_px: int = 1080


class CreateProjectRequest(BaseModel):
    fps: float = 30.0
    canvas: CanvasSpec = Field(default_factory=CanvasSpec)
    seed: Optional[int] = None  # reproducible ids for tests


class ProjectSummary(BaseModel):
    id: str
    revision: int
    fps: float
    tracks: int
    clips: int


class TrackCreateRequest(BaseModel):
    kind: str
    name: str = ""
    order_index: Optional[int] = None
    script_visible: bool = True


class TrackUpdateRequest(BaseModel):
    name: Optional[str] = None
    order_index: Optional[int] = None
    script_visible: Optional[bool] = None
    kind: Optional[str] = None


class StyleSpec(BaseModel):
    font_family: Optional[str] = None
    font_size: Optional[float] = None
    color: Optional[list[float]] = None
    position: Optional[list[float]] = None
    alignment: Optional[str] = None

    def delta(self) -> dict[str, Any]:
        return {k: v for k, v in self.model_dump().items() if v is not None}


class PayloadSpec(BaseModel):
    kind: str  # "text" | "media" | "element"
    content: str = ""
    style: Optional[StyleSpec] = None
    asset_ref: str = ""
    trim_in: float = 0.0
    element_kind: str = "rectangle"
    params: dict[str, Any] = Field(default_factory=dict)


class ClipCreateRequest(BaseModel):
    track_id: str
    start: float
    duration: float
    payload: PayloadSpec


class ClipUpdateRequest(BaseModel):
    start: Optional[float] = None
    duration: Optional[float] = None
    track_id: Optional[str] = None
    content: Optional[str] = None
    style: Optional[StyleSpec] = None


class SplitClipRequest(BaseModel):
    at: float


class MergeClipsRequest(BaseModel):
    first: str
    second: str


class AttachAnimationRequest(BaseModel):
    preset: str
    params: dict[str, Any] = Field(default_factory=dict)
    phase: Optional[str] = None


class AnimationUpdateRequest(BaseModel):
    params: dict[str, Any] = Field(default_factory=dict)
    phase: Optional[str] = None


class ScriptTracksRequest(BaseModel):
    track_ids: list[str]


class TextEditRequest(BaseModel):
    text: str


class SplitLineRequest(BaseModel):
    char_offset: int


class AddLineRequest(BaseModel):
    text: str
    anchor_clip_id: Optional[str] = None
    position: str = "end"  # "before" | "after" | "end"
    strategy: Optional[str] = None  # override the placement agent
    track_id: Optional[str] = None  # target for parallel_adjusted_timing


class StyleBatchRequest(BaseModel):
    start_index: int
    end_index: int
    delta: StyleSpec


class AcceptSuggestionRequest(BaseModel):
    revision: int


class RefreshSuggestionsRequest(BaseModel):
    clip_id: str


class CreateSessionRequest(BaseModel):
    auto_skip: bool = False


class ChatMessageRequest(BaseModel):
    text: str


class ModifyStepRequest(BaseModel):
    args: dict[str, Any]


class PromptAnswerRequest(BaseModel):
    answer: dict[str, Any]


class ApiErrorModel(BaseModel):
    code: str
    message: str
    detail: dict[str, Any] = Field(default_factory=dict)

"""Built-in meta classes and the preset animation catalog.

Each preset is an ordinary registered MetaClass plus an evaluation rule
mapping eased progress u in [0,1] to render-state deltas. New presets only
need a class registration and a rule entry; tool schemas and agent prompts
pick them up automatically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Optional

from .meta import MetaClass, MetaField, MetaRegistry
from .model import TextStyle

EASINGS = ("linear", "ease_in", "ease_out", "ease_in_out")
DIRECTIONS = ("left", "right", "up", "down", "none")

SLIDE_OFFSET = 0.2          # normalized canvas units
BOUNCE_AMPLITUDE = 0.05     # peak hop height, normalized
BOUNCE_HALF_PERIODS = 3


def ease(name: str, u: float) -> float:
    """Quadratic easing family; all map 0->0 and 1->1 and are monotone."""
    if name == "linear":
        return u
    if name == "ease_in":
        return u * u
    if name == "ease_out":
        return 1.0 - (1.0 - u) * (1.0 - u)
    if name == "ease_in_out":
        return 2.0 * u * u if u < 0.5 else 1.0 - (-2.0 * u + 2.0) ** 2 / 2.0
    raise ValueError(f"unknown easing {name!r}")


def direction_vector(direction: str) -> tuple[float, float]:
    """Unit direction in screen coordinates (y grows downward)."""
    return {
        "left": (-1.0, 0.0),
        "right": (1.0, 0.0),
        "up": (0.0, -1.0),
        "down": (0.0, 1.0),
        "none": (0.0, 0.0),
    }[direction]


@dataclass
class Deltas:
    """Contribution of one animation; identity values leave the clip as-is."""

    opacity: float = 1.0
    offset: tuple[float, float] = (0.0, 0.0)
    scale: float = 1.0
    rotation: float = 0.0
    reveal: float = 1.0
    # 0 = keep base color, 1 = fully the target color.
    color_mix: float = 0.0
    color_target: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)


# u below is already eased.

def _fade_in(u: float, params: dict[str, Any]) -> Deltas:
    return Deltas(opacity=u)


def _fade_out(u: float, params: dict[str, Any]) -> Deltas:
    return Deltas(opacity=1.0 - u)


def _slide_in(u: float, params: dict[str, Any]) -> Deltas:
    dx, dy = direction_vector(params["direction"])
    k = SLIDE_OFFSET * (1.0 - u)
    return Deltas(offset=(dx * k, dy * k))


def _slide_out(u: float, params: dict[str, Any]) -> Deltas:
    dx, dy = direction_vector(params["direction"])
    k = SLIDE_OFFSET * u
    return Deltas(offset=(dx * k, dy * k))


def _scale_pop(u: float, params: dict[str, Any]) -> Deltas:
    # Hidden via opacity; scale grows 0.5 -> 1 with a slight bulge so the
    # composed scale multiplier stays strictly positive.
    grow = u * (1.0 + 0.25 * math.sin(math.pi * u))
    return Deltas(opacity=u, scale=0.5 + 0.5 * grow)


def _typewriter(u: float, params: dict[str, Any]) -> Deltas:
    return Deltas(reveal=u)


def _bounce(u: float, params: dict[str, Any]) -> Deltas:
    hop = BOUNCE_AMPLITUDE * abs(math.sin(BOUNCE_HALF_PERIODS * math.pi * u)) * (1.0 - u)
    return Deltas(offset=(0.0, -hop))


def _color_pulse(u: float, params: dict[str, Any]) -> Deltas:
    # Parabolic pulse: exactly 0 at both endpoints, peaks at u=0.5.
    return Deltas(color_mix=4.0 * u * (1.0 - u), color_target=(1.0, 1.0, 1.0, 1.0))


PresetRule = Callable[[float, dict[str, Any]], Deltas]

PRESET_RULES: dict[str, PresetRule] = {
    "fade_in": _fade_in,
    "fade_out": _fade_out,
    "slide_in": _slide_in,
    "slide_out": _slide_out,
    "scale_pop": _scale_pop,
    "typewriter": _typewriter,
    "bounce": _bounce,
    "color_pulse": _color_pulse,
}

PRESET_DEFAULT_PHASE: dict[str, str] = {
    "fade_in": "enter",
    "fade_out": "exit",
    "slide_in": "enter",
    "slide_out": "exit",
    "scale_pop": "enter",
    "typewriter": "enter",
    "bounce": "emphasis",
    "color_pulse": "emphasis",
}

PRESET_NAMES = tuple(sorted(PRESET_RULES))


def rule_for(preset: str) -> Optional[PresetRule]:
    return PRESET_RULES.get(preset)


def _time_field(name: str, default: float, lo: float, hi: float, desc: str) -> MetaField:
    return MetaField(
        name=name, value_kind="time_seconds", default=default, range=(lo, hi),
        description=desc, tooltip=f"{desc} (seconds)", unit="s",
    )


def _preset_fields(duration_default: float, direction_default: str, easing_default: str) -> tuple[MetaField, ...]:
    return (
        _time_field("duration", duration_default, 0.05, 30.0, "How long the effect runs"),
        _time_field("delay", 0.0, 0.0, 86400.0, "Wait after clip start before the effect begins"),
        MetaField(
            name="speed", value_kind="number", default=1.0, range=(0.1, 10.0),
            description="Playback rate multiplier", tooltip="Higher is faster",
        ),
        MetaField(
            name="direction", value_kind="enum", default=direction_default, range=DIRECTIONS,
            description="Movement direction", tooltip="Ignored by effects without movement",
        ),
        MetaField(
            name="easing", value_kind="enum", default=easing_default, range=EASINGS,
            description="Progress curve", tooltip="Shapes acceleration over the effect",
        ),
    )


_PRESET_DEFAULTS: dict[str, tuple[float, str, str]] = {
    # duration, direction, easing
    "fade_in": (0.5, "none", "ease_out"),
    "fade_out": (0.5, "none", "ease_in"),
    "slide_in": (0.6, "left", "ease_out"),
    "slide_out": (0.6, "right", "ease_in"),
    "scale_pop": (0.5, "none", "ease_out"),
    "typewriter": (1.5, "none", "linear"),
    "bounce": (0.8, "none", "linear"),
    "color_pulse": (1.0, "none", "ease_in_out"),
}

_PRESET_BLURB: dict[str, str] = {
    "fade_in": "Fades the clip in from transparent",
    "fade_out": "Fades the clip out to transparent",
    "slide_in": "Slides the clip in from the given direction",
    "slide_out": "Slides the clip out toward the given direction",
    "scale_pop": "Pops the clip up from zero scale",
    "typewriter": "Reveals text character by character",
    "bounce": "Hops the clip with damped bounces",
    "color_pulse": "Pulses the text color toward white and back",
}


def _builtin_asset_class() -> MetaClass:
    return MetaClass(
        name="asset",
        category="asset",
        fields=(
            MetaField(
                name="kind", value_kind="enum", default="image",
                range=("image", "audio", "video"),
                description="Media kind", tooltip="What the file contains",
            ),
            MetaField(name="name", value_kind="string", default="",
                      description="Display name", tooltip="Shown in the resource panel"),
            MetaField(name="uri", value_kind="string", default="",
                      description="Where the bytes live", tooltip="URI; no bytes are embedded"),
            _time_field("media_duration", 0.0, 0.0, 86400.0,
                        "Intrinsic duration for audio/video (0 for images)"),
        ),
    )


def _builtin_track_class() -> MetaClass:
    return MetaClass(
        name="track",
        category="timeline_element",
        fields=(
            MetaField(
                name="kind", value_kind="enum", default="text",
                range=("text", "video", "image", "audio", "element"),
                description="What kind of clips the track holds", tooltip="Fixed at creation",
            ),
            MetaField(name="name", value_kind="string", default="Track",
                      description="Display name", tooltip="Shown on the track header"),
            MetaField(name="order_index", value_kind="integer", default=0, range=(0, 100000),
                      description="Vertical position", tooltip="Lower renders higher in the stack"),
            MetaField(name="script_visible", value_kind="boolean", default=True,
                      description="Show this track's text in the script panel",
                      tooltip="Only meaningful for text tracks"),
        ),
    )


_CLIP_TIMING = (
    _time_field("start", 0.0, 0.0, 86400.0, "When the clip begins"),
    _time_field("duration", 2.0, 0.001, 86400.0, "How long the clip lasts"),
)


def _builtin_text_clip_class() -> MetaClass:
    return MetaClass(
        name="text_clip",
        category="timeline_element",
        fields=_CLIP_TIMING + (
            MetaField(name="content", value_kind="string", default="",
                      description="The displayed text", tooltip="One script line"),
            MetaField(name="font_family", value_kind="string", default="sans-serif",
                      description="Font family", tooltip="CSS-style family name"),
            MetaField(name="font_size", value_kind="number", default=48.0, range=(1.0, 512.0),
                      description="Font size in points", tooltip="Points", unit="pt"),
            MetaField(name="color", value_kind="color", default=(1.0, 1.0, 1.0, 1.0),
                      description="Text color", tooltip="RGBA, channels in [0,1]"),
            MetaField(name="position", value_kind="point2d_normalized", default=(0.5, 0.5),
                      description="Anchor position on the canvas", tooltip="Normalized [0,1] square"),
            MetaField(name="alignment", value_kind="enum", default="center",
                      range=("left", "center", "right"),
                      description="Horizontal alignment", tooltip="Relative to the anchor"),
        ),
    )


def _builtin_media_clip_class() -> MetaClass:
    return MetaClass(
        name="media_clip",
        category="timeline_element",
        fields=_CLIP_TIMING + (
            MetaField(name="asset_ref", value_kind="asset_ref", default="",
                      description="Asset shown by this clip", tooltip="Id of an uploaded asset"),
            _time_field("trim_in", 0.0, 0.0, 86400.0, "Offset into the source media"),
        ),
    )


def _builtin_element_clip_class() -> MetaClass:
    return MetaClass(
        name="element_clip",
        category="timeline_element",
        fields=_CLIP_TIMING + (
            MetaField(name="element_kind", value_kind="string", default="rectangle",
                      description="Shape or widget kind", tooltip="e.g. rectangle"),
        ),
    )


def build_registry() -> MetaRegistry:
    """Registry preloaded with the built-in classes and the preset catalog."""
    registry = MetaRegistry()
    registry.register(_builtin_asset_class())
    registry.register(_builtin_track_class(), id_kind="track")
    registry.register(_builtin_text_clip_class())
    registry.register(_builtin_media_clip_class())
    registry.register(_builtin_element_clip_class())
    for preset in PRESET_NAMES:
        duration, direction, easing = _PRESET_DEFAULTS[preset]
        registry.register(
            MetaClass(
                name=preset,
                category="animation_effect",
                fields=_preset_fields(duration, direction, easing),
            )
        )
    return registry


# Descriptions surfaced in tool schemas come from the class blurbs.
def preset_blurb(preset: str) -> str:
    return _PRESET_BLURB.get(preset, "Animation effect")

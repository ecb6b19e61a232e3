from __future__ import annotations

import random

import pytest

from tae.engine import ProjectEngine
from tae.model import ElementClipPayload, MediaClipPayload, TextClipPayload, TextStyle
from tae.presets import PRESET_NAMES, build_registry

WORDS = (
    "alpha bravo charlie delta echo foxtrot golf hotel india juliet kilo lima "
    "mike november oscar papa quebec romeo sierra tango uniform victor whiskey"
).split()


@pytest.fixture
def registry():
    return build_registry()


@pytest.fixture
def engine(registry):
    return ProjectEngine(registry, seed=1234, clock=lambda: "2026-01-01T00:00:00.000+00:00")


@pytest.fixture
def text_track(engine):
    return engine.add_track("text", name="Main")


def make_engine(seed: int = 0) -> ProjectEngine:
    return ProjectEngine(
        build_registry(), seed=seed, clock=lambda: "2026-01-01T00:00:00.000+00:00"
    )


def random_text(rng: random.Random, lo: int = 1, hi: int = 4) -> str:
    return " ".join(rng.choice(WORDS) for _ in range(rng.randint(lo, hi)))


def random_style(rng: random.Random) -> TextStyle:
    return TextStyle(
        font_family=rng.choice(["sans-serif", "serif", "mono"]),
        font_size=round(rng.uniform(8, 120), 2),
        color=tuple(round(rng.random(), 3) for _ in range(4)),
        position=(round(rng.random(), 3), round(rng.random(), 3)),
        alignment=rng.choice(["left", "center", "right"]),
    )


def populate_random_project(engine: ProjectEngine, rng: random.Random,
                            tracks: int = 3, clips_per_track: int = 4) -> None:
    """Fill a project through engine ops only, so it is valid by construction."""
    asset = engine.add_asset("image", "bg", "assets/demo/bg.png")
    video = engine.add_asset("video", "intro", "assets/demo/intro.mp4", media_duration=12.0)
    kinds = ["text", "text", "video", "element", "image"]
    for i in range(tracks):
        kind = kinds[i % len(kinds)]
        track = engine.add_track(kind, name=f"{kind}-{i}")
        cursor = 0.0
        for _ in range(rng.randint(1, clips_per_track)):
            start = cursor + round(rng.uniform(0, 2), 3)
            duration = round(rng.uniform(0.5, 4), 3)
            if kind == "text":
                payload = TextClipPayload(
                    content=random_text(rng), style=random_style(rng)
                )
            elif kind in ("video", "image"):
                ref = video.id if kind == "video" else asset.id
                payload = MediaClipPayload(asset_ref=ref, trim_in_ms=rng.randint(0, 2000))
            else:
                payload = ElementClipPayload(element_kind="rectangle")
            clip = engine.add_clip(track.id, start, duration, payload)
            cursor = clip.start + clip.duration
            if kind == "text" and rng.random() < 0.6:
                preset = rng.choice(PRESET_NAMES)
                engine.attach_animation(
                    clip.id,
                    preset,
                    {
                        "duration": round(rng.uniform(0.1, 2.0), 3),
                        "delay": round(rng.uniform(0, 1.0), 3),
                        "speed": round(rng.uniform(0.2, 4.0), 3),
                        "easing": rng.choice(
                            ["linear", "ease_in", "ease_out", "ease_in_out"]
                        ),
                    },
                )

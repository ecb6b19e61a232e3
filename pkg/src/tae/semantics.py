"""Rule-mode semantic analysis: lexicon and punctuation heuristics mapping a
script line to importance/tone, and the deterministic directive mapping from
those features to style and animation choices.

The rule path is total and deterministic so the whole suggestion pipeline is
testable offline; LLM mode swaps in the semantic-matching template but must
land inside the same catalog.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

TONES = ("neutral", "positive", "negative", "urgent", "calm")

POSITIVE_WORDS = frozenset(
    """amazing awesome great love best happy win free discount wonderful
    excellent fantastic beautiful new enjoy celebrate bonus""".split()
)
NEGATIVE_WORDS = frozenset(
    """bad terrible sad worst hate fail loss awful broken wrong problem
    never warning danger""".split()
)
URGENT_WORDS = frozenset(
    """now hurry today urgent limited last deadline immediately act fast
    quick final ends tonight""".split()
)
CALM_WORDS = frozenset(
    """relax gentle peaceful calm slow breathe quiet soft easy rest""".split()
)

_WORD_RE = re.compile(r"[A-Za-z']+")


@dataclass
class SemanticFeatures:
    importance: float
    tone: str
    emphasis_tokens: list[tuple[int, int]] = field(default_factory=list)


@dataclass
class AnimationDirective:
    font_size_scale: float
    preset: str
    velocity_scale: float
    temporal_pattern: str
    color: Optional[tuple[float, float, float, float]] = None
    position_hint: Optional[tuple[float, float]] = None


_TONE_PRESET = {
    "positive": "scale_pop",
    "urgent": "bounce",
    "negative": "fade_in",
    "calm": "fade_in",
    "neutral": "typewriter",
}

_TONE_PATTERN = {
    "positive": "on_entry",
    "urgent": "pulsed",
    "negative": "on_entry",
    "calm": "on_entry",
    "neutral": "on_entry",
}

URGENT_TINT = (1.0, 0.3, 0.2, 1.0)


def analyze_semantics(line_text: str) -> SemanticFeatures:
    """Importance from caps/punctuation/lexicon hits; tone from the dominant
    lexicon. Empty input is importance 0, neutral."""
    if not line_text.strip():
        return SemanticFeatures(importance=0.0, tone="neutral")

    emphasis: list[tuple[int, int]] = []
    counts = {"positive": 0, "negative": 0, "urgent": 0, "calm": 0}
    caps = False
    hits = 0
    for match in _WORD_RE.finditer(line_text):
        word = match.group(0)
        lowered = word.lower()
        if len(word) >= 2 and word.isupper():
            caps = True
            emphasis.append(match.span())
        hit = None
        if lowered in POSITIVE_WORDS:
            hit = "positive"
        elif lowered in NEGATIVE_WORDS:
            hit = "negative"
        elif lowered in URGENT_WORDS:
            hit = "urgent"
        elif lowered in CALM_WORDS:
            hit = "calm"
        if hit:
            counts[hit] += 1
            hits += 1
            if match.span() not in emphasis:
                emphasis.append(match.span())

    importance = 0.0
    if caps:
        importance += 0.3
    if "!" in line_text:
        importance += 0.25
    importance += 0.15 * min(hits, 3)
    importance = min(importance, 1.0)

    best = max(counts.values())
    if best == 0:
        tone = "neutral"
    else:
        # Deterministic tie-break: urgency outranks sentiment.
        for candidate in ("urgent", "positive", "negative", "calm"):
            if counts[candidate] == best:
                tone = candidate
                break

    emphasis.sort()
    return SemanticFeatures(importance=importance, tone=tone, emphasis_tokens=emphasis)


def map_to_directive(features: SemanticFeatures) -> AnimationDirective:
    """Total, pure mapping: tone picks the preset, importance scales size
    (1 + 0.5*importance) and velocity (1 + importance)."""
    tone = features.tone if features.tone in _TONE_PRESET else "neutral"
    return AnimationDirective(
        font_size_scale=1.0 + 0.5 * features.importance,
        preset=_TONE_PRESET[tone],
        velocity_scale=1.0 + features.importance,
        temporal_pattern=_TONE_PATTERN[tone],
        color=URGENT_TINT if tone == "urgent" else None,
        position_hint=None,
    )


# Tiny fixed revision lexicon; rule-mode text suggestions are corrections the
# analyzer can justify deterministically.
MISSPELLINGS = {
    "teh": "the",
    "recieve": "receive",
    "definately": "definitely",
    "seperate": "separate",
    "occured": "occurred",
    "untill": "until",
}


def rule_revisions(text: str) -> list[tuple[tuple[int, int], str, str]]:
    """Deterministic text fixes: ((start, end), replacement, reason)."""
    out: list[tuple[tuple[int, int], str, str]] = []
    for match in _WORD_RE.finditer(text):
        lowered = match.group(0).lower()
        if lowered in MISSPELLINGS:
            fixed = MISSPELLINGS[lowered]
            if match.group(0)[0].isupper():
                fixed = fixed.capitalize()
            out.append(
                (match.span(), fixed, f'"{match.group(0)}" looks like a typo of "{fixed}"')
            )
    for match in re.finditer(r" {2,}", text):
        out.append((match.span(), " ", "collapse repeated spaces"))
    out.sort(key=lambda item: item[0])
    return out

from __future__ import annotations

import random

import pytest

from conftest import make_engine, random_style, random_text
from oracles import oracle_script_order
from tae.engine import check_invariants
from tae.errors import (
    EmptyRange,
    InvalidAnchor,
    NonTextTrack,
    NotAdjacent,
    OffsetOutOfRange,
    TrackMismatch,
)
from tae.model import TextClipPayload
from tae.script import (
    Anchor,
    PlacementDecision,
    add_line,
    apply_style_batch,
    apply_text_edit,
    merge_lines,
    project_script,
    set_script_tracks,
    split_line,
)


def text(content="Hello"):
    return TextClipPayload(content=content)


class TestProjection:
    def test_sorted_by_start(self, engine, text_track):
        c2 = engine.add_clip(text_track.id, 2, 1, text("two"))
        c0 = engine.add_clip(text_track.id, 0, 1, text("zero"))
        c1 = engine.add_clip(text_track.id, 1, 1, text("one"))
        doc = project_script(engine.project, [text_track.id])
        assert [l.clip_id for l in doc.lines] == [c0.id, c1.id, c2.id]
        assert [l.text for l in doc.lines] == ["zero", "one", "two"]

    def test_equal_starts_tie_broken_by_track_order(self, engine):
        a = engine.add_track("text", name="A")
        b = engine.add_track("text", name="B")
        clip_b = engine.add_clip(b.id, 0, 2, text("b"))
        clip_a = engine.add_clip(a.id, 0, 2, text("a"))
        doc = project_script(engine.project, [a.id, b.id])
        assert [l.clip_id for l in doc.lines] == [clip_a.id, clip_b.id]
        assert [l.clip_id for l in doc.lines] == oracle_script_order(
            engine.project, {a.id, b.id}
        )

    def test_empty_selection(self, engine):
        assert project_script(engine.project, []).lines == []

    def test_non_text_track_rejected(self, engine):
        video = engine.add_track("video")
        with pytest.raises(NonTextTrack):
            project_script(engine.project, [video.id])

    def test_random_projection_matches_brute_force(self):
        rng = random.Random(3)
        engine = make_engine(seed=77)
        tracks = [engine.add_track("text", name=f"T{i}") for i in range(3)]
        for track in tracks:
            cursor = 0.0
            for _ in range(rng.randint(2, 6)):
                start = cursor + rng.uniform(0, 1.5)
                clip = engine.add_clip(
                    track.id, round(start, 3), round(rng.uniform(0.2, 2), 3),
                    text(random_text(rng)),
                )
                cursor = clip.start + clip.duration
        selected = {tracks[0].id, tracks[2].id}
        doc = project_script(engine.project, selected)
        assert [l.clip_id for l in doc.lines] == oracle_script_order(
            engine.project, selected
        )


class TestTextEdit:
    def test_edit_reflected_in_projection(self, engine, text_track):
        clip = engine.add_clip(text_track.id, 0, 2, text("Hi"))
        apply_text_edit(engine, clip.id, "Hello")
        doc = project_script(engine.project, [text_track.id])
        assert doc.lines[0].text == "Hello"

    def test_empty_text_keeps_line(self, engine, text_track):
        clip = engine.add_clip(text_track.id, 0, 2, text("Hi"))
        apply_text_edit(engine, clip.id, "")
        doc = project_script(engine.project, [text_track.id])
        assert len(doc.lines) == 1
        assert doc.lines[0].text == ""

    def test_projection_tracks_many_random_edits(self, engine, text_track):
        rng = random.Random(8)
        clips = [
            engine.add_clip(text_track.id, i * 2, 1.5, text(random_text(rng)))
            for i in range(5)
        ]
        shadow = {c.id: c.payload.content for c in clips}
        for _ in range(100):
            target = rng.choice(clips)
            new_text = random_text(rng)
            apply_text_edit(engine, target.id, new_text)
            shadow[target.id] = new_text
            doc = project_script(engine.project, [text_track.id])
            assert [l.text for l in doc.lines] == [
                shadow[c.id] for c in sorted(clips, key=lambda c: c.start_ms)
            ]


class TestSplitLine:
    def test_equal_halves(self, engine, text_track):
        clip = engine.add_clip(text_track.id, 0, 10, text("HelloWorld"))
        first, second = split_line(engine, clip.id, 5)
        assert (first.start, first.duration) == (0.0, 5.0)
        assert (second.start, second.duration) == (5.0, 5.0)

    def test_proportional_durations(self, engine, text_track):
        # 9s * 2/6 = 3s exactly
        clip = engine.add_clip(text_track.id, 0, 9, text("abcdef"))
        first, second = split_line(engine, clip.id, 2)
        assert first.duration == pytest.approx(3.0)
        assert second.duration == pytest.approx(6.0)
        assert first.payload.content == "ab"
        assert second.payload.content == "cdef"

    def test_offset_zero_rejected(self, engine, text_track):
        clip = engine.add_clip(text_track.id, 0, 2, text("ab"))
        with pytest.raises(OffsetOutOfRange):
            split_line(engine, clip.id, 0)
        with pytest.raises(OffsetOutOfRange):
            split_line(engine, clip.id, 2)

    def test_proportionality_within_half_ms(self, engine, text_track):
        rng = random.Random(19)
        for trial in range(300):
            content = random_text(rng, 1, 6)
            if len(content) < 2:
                continue
            duration = round(rng.uniform(0.05, 8), 3)
            clip = engine.add_clip(text_track.id, 20 * trial, duration, text(content))
            offset = rng.randint(1, len(content) - 1)
            n1, n2 = offset, len(content) - offset
            first, second = split_line(engine, clip.id, offset)
            ideal = clip_duration_ms = None
            total_ms = first.duration_ms + second.duration_ms
            ideal = total_ms * n1 / (n1 + n2)
            assert abs(first.duration_ms - ideal) <= 0.5
            assert first.duration_ms + second.duration_ms == total_ms


class TestMergeLines:
    def test_merge_restores_split(self, engine, text_track):
        clip = engine.add_clip(text_track.id, 0, 7, text("Kinetic type"))
        style = clip.payload.style.copy()
        first, second = split_line(engine, clip.id, 4)
        merged = merge_lines(engine, first.id, second.id)
        assert merged.payload.content == "Kinetic type"
        assert merged.start_ms == 0
        assert merged.duration_ms == 7000
        assert merged.payload.style == style

    def test_non_adjacent_rejected(self, engine, text_track):
        a = engine.add_clip(text_track.id, 0, 1, text("a"))
        engine.add_clip(text_track.id, 1, 1, text("mid"))
        c = engine.add_clip(text_track.id, 2, 1, text("c"))
        with pytest.raises(NotAdjacent):
            merge_lines(engine, a.id, c.id)

    def test_cross_track_rejected(self, engine, text_track):
        other = engine.add_track("text")
        a = engine.add_clip(text_track.id, 0, 1, text("a"))
        b = engine.add_clip(other.id, 1, 1, text("b"))
        with pytest.raises(TrackMismatch):
            merge_lines(engine, a.id, b.id)

    def test_inversion_property_over_random_cases(self, engine, text_track):
        rng = random.Random(29)
        for trial in range(200):
            content = random_text(rng, 1, 6)
            if len(content) < 2:
                continue
            duration = round(rng.uniform(0.05, 6), 3)
            style = random_style(rng)
            clip = engine.add_clip(
                text_track.id, 30 * trial, duration,
                TextClipPayload(content=content, style=style),
            )
            span = (clip.start_ms, clip.duration_ms)
            offset = rng.randint(1, len(content) - 1)
            first, second = split_line(engine, clip.id, offset)
            merged = merge_lines(engine, first.id, second.id)
            assert merged.payload.content == content
            assert (merged.start_ms, merged.duration_ms) == span
            assert merged.payload.style == style


class TestAddLine:
    def test_sequential_appends_after_last_line(self, engine, text_track):
        """Fig. 4 B-2: sequential insertion lands at the previous clip's end."""
        first = engine.add_clip(text_track.id, 0, 3, text("first"))
        clip = add_line(engine, [text_track.id], Anchor(position="end"), "second")
        assert clip.track_id == text_track.id
        assert clip.start_ms == first.end_ms
        assert clip.duration == 2.0
        assert check_invariants(engine.project) == []

    def test_sequential_ripple_shifts_later_clips(self, engine, text_track):
        anchor = engine.add_clip(text_track.id, 0, 3, text("anchor"))
        follower = engine.add_clip(text_track.id, 3, 2, text("follower"))
        far = engine.add_clip(text_track.id, 9, 1, text("far"))
        clip = add_line(
            engine, [text_track.id],
            Anchor(line_clip_id=anchor.id, position="after"), "inserted",
        )
        assert clip.start_ms == 3000
        assert engine.project.clips[follower.id].start_ms == 5000  # +2s
        assert engine.project.clips[far.id].start_ms == 11000      # +2s
        assert check_invariants(engine.project) == []

    def test_parallel_adjusted_timing_same_start_with_shift(self, engine, text_track):
        """Fig. 4 B-3: same start on another track; conflicts shift right by
        exactly the new clip's duration."""
        other = engine.add_track("text", name="Other")
        anchor = engine.add_clip(text_track.id, 4, 3, text("anchor"))
        conflicting = engine.add_clip(other.id, 4, 1, text("conflict"))
        later = engine.add_clip(other.id, 5.5, 1, text("later"))
        clip = add_line(
            engine, [text_track.id, other.id],
            Anchor(line_clip_id=anchor.id, position="after"), "parallel",
            PlacementDecision(strategy="parallel_adjusted_timing", track_id=other.id),
        )
        assert clip.track_id == other.id
        assert clip.start_ms == anchor.start_ms
        assert engine.project.clips[conflicting.id].start_ms == 6000  # 4s + 2s
        assert engine.project.clips[later.id].start_ms == 7500
        assert check_invariants(engine.project) == []

    def test_parallel_new_track_starts_at_anchor(self, engine, text_track):
        """Fig. 4 B-4: new track created; start equals the anchor start."""
        anchor = engine.add_clip(text_track.id, 2.5, 3, text("anchor"))
        tracks_before = set(engine.project.tracks)
        clip = add_line(
            engine, [text_track.id],
            Anchor(line_clip_id=anchor.id, position="after"), "on new track",
            PlacementDecision(strategy="parallel_new_track"),
        )
        new_tracks = set(engine.project.tracks) - tracks_before
        assert len(new_tracks) == 1
        assert clip.track_id in new_tracks
        assert engine.project.tracks[clip.track_id].kind == "text"
        assert clip.start_ms == anchor.start_ms
        assert check_invariants(engine.project) == []

    def test_insert_before_shifts_anchor(self, engine, text_track):
        anchor = engine.add_clip(text_track.id, 1, 2, text("anchor"))
        clip = add_line(
            engine, [text_track.id],
            Anchor(line_clip_id=anchor.id, position="before"), "prefix",
        )
        assert clip.start_ms == 1000
        assert engine.project.clips[anchor.id].start_ms == 3000
        assert check_invariants(engine.project) == []

    def test_style_inherited_from_anchor(self, engine, text_track):
        style = random_style(random.Random(1))
        anchor = engine.add_clip(
            text_track.id, 0, 2, TextClipPayload(content="anchor", style=style)
        )
        clip = add_line(
            engine, [text_track.id],
            Anchor(line_clip_id=anchor.id, position="after"), "styled",
        )
        assert clip.payload.style == style

    def test_empty_document_needs_selected_track(self, engine):
        with pytest.raises(InvalidAnchor):
            add_line(engine, [], Anchor(position="end"), "nothing to anchor")

    def test_unknown_anchor_rejected(self, engine, text_track):
        engine.add_clip(text_track.id, 0, 2, text())
        with pytest.raises(InvalidAnchor):
            add_line(
                engine, [text_track.id],
                Anchor(line_clip_id="clip_zzzzzzzz", position="after"), "x",
            )

    def test_straddling_conflict_cleared(self, engine, text_track):
        """A clip spanning the insertion start still ends up disjoint."""
        other = engine.add_track("text", name="Other")
        anchor = engine.add_clip(text_track.id, 5, 2, text("anchor"))
        straddler = engine.add_clip(other.id, 0, 10, text("straddler"))
        clip = add_line(
            engine, [text_track.id, other.id],
            Anchor(line_clip_id=anchor.id, position="after"), "pushed in",
            PlacementDecision(strategy="parallel_adjusted_timing", track_id=other.id),
        )
        assert clip.start_ms == 5000
        assert engine.project.clips[straddler.id].start_ms == 7000  # cleared past the new clip
        assert check_invariants(engine.project) == []


class TestStyleBatch:
    def test_batch_updates_range(self, engine, text_track):
        clips = [
            engine.add_clip(text_track.id, i * 2, 1, text(f"line{i}")) for i in range(5)
        ]
        count = apply_style_batch(
            engine, [text_track.id], 1, 3, {"color": (1, 0, 0, 1)}
        )
        assert count == 3
        for i, clip in enumerate(clips):
            expected = (1.0, 0.0, 0.0, 1.0) if 1 <= i <= 3 else (1.0, 1.0, 1.0, 1.0)
            assert engine.project.clips[clip.id].payload.style.color == expected

    def test_empty_range_rejected(self, engine, text_track):
        engine.add_clip(text_track.id, 0, 1, text())
        with pytest.raises(EmptyRange):
            apply_style_batch(engine, [text_track.id], 2, 5, {"font_size": 10})
        with pytest.raises(EmptyRange):
            apply_style_batch(engine, [text_track.id], 0, 0, {})

    def test_batch_equals_sequential_single_edits(self):
        rng = random.Random(55)
        batch_engine = make_engine(seed=500)
        single_engine = make_engine(seed=500)
        for eng in (batch_engine, single_engine):
            track = eng.add_track("text")
            for i in range(6):
                eng.add_clip(track.id, i * 2, 1.5, text(f"line{i}"))
        delta = {"font_size": 64.0, "alignment": "left"}
        track_id = next(iter(batch_engine.project.tracks))
        apply_style_batch(batch_engine, [track_id], 1, 4, delta)

        strack_id = next(iter(single_engine.project.tracks))
        doc = project_script(single_engine.project, [strack_id])
        for line in doc.lines[1:5]:
            single_engine.set_style(line.clip_id, delta)

        batch_styles = [
            l.style for l in project_script(batch_engine.project, [track_id]).lines
        ]
        single_styles = [
            l.style for l in project_script(single_engine.project, [strack_id]).lines
        ]
        assert batch_styles == single_styles

    def test_batch_is_one_committed_operation(self, engine, text_track):
        for i in range(3):
            engine.add_clip(text_track.id, i * 2, 1, text(f"l{i}"))
        before = engine.project.revision
        apply_style_batch(engine, [text_track.id], 0, 2, {"font_size": 30.0})
        assert engine.project.revision == before + 1


class TestSetScriptTracks:
    def test_select_none(self, engine, text_track):
        engine.add_clip(text_track.id, 0, 1, text())
        assert set_script_tracks(engine.project, []).lines == []

    def test_every_text_clip_appears_exactly_once(self, engine):
        rng = random.Random(9)
        tracks = [engine.add_track("text") for _ in range(3)]
        expected = 0
        for track in tracks:
            for i in range(rng.randint(1, 4)):
                engine.add_clip(track.id, i * 3, 2, text(random_text(rng)))
                expected += 1
        doc = set_script_tracks(engine.project, [t.id for t in tracks])
        assert len(doc.lines) == expected
        assert len({l.clip_id for l in doc.lines}) == expected

    def test_video_track_rejected(self, engine):
        video = engine.add_track("video")
        with pytest.raises(NonTextTrack):
            set_script_tracks(engine.project, [video.id])

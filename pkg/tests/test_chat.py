from __future__ import annotations

import pytest

from tae.chat import (
    ChatOrchestrator,
    resolve_references,
    session_from_doc,
    suggest_instructions,
)
from tae.errors import (
    DanglingReference,
    InvalidAnswer,
    SessionBusy,
    WrongState,
)
from tae.llm import AssistantText, Clarify, Gateway, MockProvider, Structured, ToolCall
from tae.model import TextClipPayload
from tae.tools import ToolDispatcher


@pytest.fixture
def stage(engine):
    track = engine.add_track("text")
    clips = [
        engine.add_clip(track.id, i * 3, 2, TextClipPayload(content=f"line {i}"))
        for i in range(3)
    ]
    return track, clips


def orchestrator_with(engine, script):
    dispatcher = ToolDispatcher(engine)
    gateway = Gateway(MockProvider(script), engine.registry)
    return ChatOrchestrator(engine, dispatcher, gateway)


def event_types(session):
    return [e["type"] for e in session.events]


def chat_log(engine):
    return [
        (e.tool, e.outcome)
        for e in engine.project.operation_log
        if e.actor == "chat_agent"
    ]


class TestScenarioPlainThreeStepEdit:
    def test_three_edits_each_gated(self, engine, stage):
        track, clips = stage
        script = [
            ToolCall("update_text_clip", {"id": clips[0].id, "content": "one"}),
            ToolCall("update_text_clip", {"id": clips[1].id, "content": "two"}),
            ToolCall("update_text_clip", {"id": clips[2].id, "content": "three"}),
            AssistantText("All lines updated."),
        ]
        orch = orchestrator_with(engine, script)
        session = orch.start_session()
        orch.submit_message(session, "rewrite the lines")
        for _ in range(3):
            assert session.state == "awaiting_approval"
            orch.approve_step(session)
        assert session.state == "done"
        assert event_types(session) == [
            "plan_proposed", "awaiting_approval", "step_result",
            "plan_proposed", "awaiting_approval", "step_result",
            "plan_proposed", "awaiting_approval", "step_result",
            "assistant_text", "completed",
        ]
        # exactly 3 dispatches, in plan order
        assert chat_log(engine) == [("update_text_clip", "ok")] * 3
        texts = [engine.project.clips[c.id].payload.content for c in clips]
        assert texts == ["one", "two", "three"]

    def test_statuses_progress(self, engine, stage):
        _, clips = stage
        orch = orchestrator_with(engine, [
            ToolCall("update_text_clip", {"id": clips[0].id, "content": "x"}),
            AssistantText("ok"),
        ])
        session = orch.start_session()
        orch.submit_message(session, "go")
        step = session.steps[0]
        assert step.status == "proposed"
        orch.approve_step(session)
        assert step.status == "executed"


class TestScenarioQueryAutoExec:
    def test_queries_bypass_approval(self, engine, stage):
        orch = orchestrator_with(engine, [
            ToolCall("query_text_clip", {}),
            AssistantText("You have three text clips."),
        ])
        session = orch.start_session()
        orch.submit_message(session, "what clips do I have?")
        assert session.state == "done"
        assert "awaiting_approval" not in event_types(session)
        assert session.steps[0].kind == "query"
        assert session.steps[0].status == "executed"
        assert len(session.steps[0].result) == 3

    def test_query_leaves_revision_unchanged(self, engine, stage):
        before = engine.project.revision
        orch = orchestrator_with(engine, [
            ToolCall("query_track", {}),
            AssistantText("done"),
        ])
        session = orch.start_session()
        orch.submit_message(session, "list tracks")
        assert engine.project.revision == before


class TestScenarioAutoSkip:
    def test_auto_skip_executes_edits_without_gate(self, engine, stage):
        _, clips = stage
        orch = orchestrator_with(engine, [
            ToolCall("update_text_clip", {"id": clips[0].id, "content": "a"}),
            ToolCall("update_text_clip", {"id": clips[1].id, "content": "b"}),
            AssistantText("done"),
        ])
        session = orch.start_session(auto_skip=True)
        orch.submit_message(session, "fix everything")
        assert session.state == "done"
        assert "awaiting_approval" not in event_types(session)
        assert chat_log(engine) == [("update_text_clip", "ok")] * 2
        assert engine.project.clips[clips[0].id].payload.content == "a"


class TestScenarioRejectThenReplan:
    def test_rejection_feeds_back_into_context(self, engine, stage):
        _, clips = stage
        mock = MockProvider([
            ToolCall("delete_text_clip", {"id": clips[0].id}),
            ToolCall("update_text_clip", {"id": clips[0].id, "content": "kept"}),
            AssistantText("done"),
        ])
        orch = ChatOrchestrator(engine, ToolDispatcher(engine), Gateway(mock, engine.registry))
        session = orch.start_session()
        orch.submit_message(session, "tidy the intro")
        assert session.state == "awaiting_approval"
        orch.reject_step(session)
        # second plan proposed after rejection
        assert session.state == "awaiting_approval"
        assert session.steps[0].status == "rejected"
        # the replan request carried the rejection note
        replan_request = mock.requests[1]
        feedback = replan_request.context.extra.get("feedback", "")
        assert "rejected" in feedback
        assert session.steps[0].id in feedback
        orch.approve_step(session)
        assert session.state == "done"
        # the rejected delete never reached the project
        assert clips[0].id in engine.project.clips
        assert chat_log(engine) == [("update_text_clip", "ok")]


class TestScenarioAmbiguitySelector:
    def test_selector_round_trip_resumes_planning(self, engine, stage):
        _, clips = stage
        candidates = [clips[0].id, clips[1].id, clips[2].id]
        mock = MockProvider([
            Clarify(question="Which clip?", candidates=candidates, needed="selection"),
            ToolCall("update_text_clip", {"id": clips[1].id, "content": "chosen"}),
            AssistantText("done"),
        ])
        orch = ChatOrchestrator(engine, ToolDispatcher(engine), Gateway(mock, engine.registry))
        session = orch.start_session()
        orch.submit_message(session, "make that clip pop")
        assert session.state == "awaiting_prompt_answer"
        prompt = session.pending_prompt
        assert prompt.kind == "selector"
        assert [o["id"] for o in prompt.payload["options"]] == candidates
        assert all(o["label"] for o in prompt.payload["options"])
        # unlisted answer -> InvalidAnswer, prompt still pending
        with pytest.raises(InvalidAnswer):
            orch.answer_prompt(session, {"option_id": "clip_zzzzzzzz"})
        assert session.state == "awaiting_prompt_answer"
        orch.answer_prompt(session, {"option_id": clips[1].id})
        assert session.state == "awaiting_approval"
        # clarification made it into the replan context
        assert any(
            clips[1].id in note for note in session.notes if "clarification" in note
        )
        orch.approve_step(session)
        assert session.state == "done"
        assert engine.project.clips[clips[1].id].payload.content == "chosen"

    def test_prompt_event_sequence(self, engine, stage):
        _, clips = stage
        orch = orchestrator_with(engine, [
            Clarify(question="Which?", candidates=[clips[0].id], needed="selection"),
            AssistantText("never mind"),
        ])
        session = orch.start_session()
        orch.submit_message(session, "do something")
        assert event_types(session) == ["prompt"]
        orch.answer_prompt(session, {"option_id": clips[0].id})
        assert event_types(session) == ["prompt", "assistant_text", "completed"]

    def test_unresolvable_candidate_fails_session(self, engine, stage):
        orch = orchestrator_with(engine, [
            Clarify(question="Which?", candidates=["clip_zzzzzzzz"], needed="selection"),
        ])
        session = orch.start_session()
        orch.submit_message(session, "go")
        assert session.state == "failed"


class TestScenarioThreeFailureTermination:
    def test_three_consecutive_failures_end_the_session(self, engine, stage):
        track, clips = stage
        # Each step tries to move a clip onto an occupied region -> Overlap.
        bad = {"id": clips[0].id, "start": clips[1].start}
        orch = orchestrator_with(engine, [
            ToolCall("update_text_clip", dict(bad)),
            ToolCall("update_text_clip", dict(bad)),
            ToolCall("update_text_clip", dict(bad)),
            AssistantText("unreachable"),
        ])
        session = orch.start_session(auto_skip=True)
        orch.submit_message(session, "shuffle the clips")
        assert session.state == "failed"
        assert session.consecutive_failures == 3
        results = [e for e in session.events if e["type"] == "step_result"]
        assert [r["payload"]["outcome"] for r in results] == ["error"] * 3
        assert event_types(session)[-1] == "failed"
        # failure feedback was collected for the planner
        assert sum("failed" in n for n in session.notes) == 3

    def test_success_resets_the_failure_counter(self, engine, stage):
        _, clips = stage
        bad = {"id": clips[0].id, "start": clips[1].start}
        orch = orchestrator_with(engine, [
            ToolCall("update_text_clip", dict(bad)),
            ToolCall("update_text_clip", dict(bad)),
            ToolCall("update_text_clip", {"id": clips[0].id, "content": "fine"}),
            ToolCall("update_text_clip", dict(bad)),
            ToolCall("update_text_clip", dict(bad)),
            AssistantText("made it"),
        ])
        session = orch.start_session(auto_skip=True)
        orch.submit_message(session, "try things")
        assert session.state == "done"


class TestStateMachineClosure:
    def test_approve_without_pending_step_is_wrong_state(self, engine, stage):
        orch = orchestrator_with(engine, [])
        session = orch.start_session()
        with pytest.raises(WrongState):
            orch.approve_step(session)
        with pytest.raises(WrongState):
            orch.reject_step(session)
        with pytest.raises(WrongState):
            orch.answer_prompt(session, {"option_id": "x"})

    def test_message_while_awaiting_approval_is_busy(self, engine, stage):
        _, clips = stage
        orch = orchestrator_with(engine, [
            ToolCall("update_text_clip", {"id": clips[0].id, "content": "x"}),
        ])
        session = orch.start_session()
        orch.submit_message(session, "go")
        with pytest.raises(SessionBusy):
            orch.submit_message(session, "also this")

    def test_modify_with_invalid_args_keeps_waiting(self, engine, stage):
        _, clips = stage
        from tae.errors import SchemaViolation

        orch = orchestrator_with(engine, [
            ToolCall("update_text_clip", {"id": clips[0].id, "content": "x"}),
            AssistantText("ok"),
        ])
        session = orch.start_session()
        orch.submit_message(session, "go")
        with pytest.raises(SchemaViolation):
            orch.modify_step(session, {"id": clips[0].id, "nope": 1})
        assert session.state == "awaiting_approval"
        orch.modify_step(session, {"id": clips[0].id, "content": "modified"})
        assert session.steps[0].status == "executed"
        assert engine.project.clips[clips[0].id].payload.content == "modified"

    def test_one_step_planning_invariant(self, engine, stage):
        _, clips = stage
        orch = orchestrator_with(engine, [
            ToolCall("update_text_clip", {"id": clips[0].id, "content": "a"}),
            ToolCall("update_text_clip", {"id": clips[1].id, "content": "b"}),
            AssistantText("done"),
        ])
        session = orch.start_session()
        orch.submit_message(session, "go")
        def proposed_count():
            return sum(1 for s in session.steps if s.status == "proposed")
        assert proposed_count() == 1
        orch.approve_step(session)
        assert proposed_count() == 1
        orch.approve_step(session)
        assert proposed_count() == 0

    def test_approval_gate_log_join(self, engine, stage):
        """With auto_skip off, every edit dispatch follows an approval for
        that same step (joined through the step events)."""
        _, clips = stage
        orch = orchestrator_with(engine, [
            ToolCall("update_text_clip", {"id": clips[0].id, "content": "a"}),
            ToolCall("query_track", {}),
            ToolCall("update_text_clip", {"id": clips[1].id, "content": "b"}),
            AssistantText("done"),
        ])
        session = orch.start_session()
        orch.submit_message(session, "go")
        orch.approve_step(session)
        orch.approve_step(session)
        assert session.state == "done"
        edit_steps = [s for s in session.steps if s.kind == "edit"]
        assert all(s.status in ("executed", "failed") for s in edit_steps)
        # join: every chat_agent edit in the log maps to an approved step
        edits_in_log = [t for t, outcome in chat_log(engine) if not t.startswith("query_")]
        assert len(edits_in_log) == len(edit_steps)
        # and query steps never waited for approval
        approvals = [e["payload"]["step_id"] for e in session.events
                     if e["type"] == "awaiting_approval"]
        query_ids = {s.id for s in session.steps if s.kind == "query"}
        assert not (set(approvals) & query_ids)


class TestPromptKinds:
    def test_parameter_form_fields_from_reflect_schema(self, engine, stage):
        _, clips = stage
        anim = engine.attach_animation(clips[0].id, "fade_in")
        orch = orchestrator_with(engine, [
            Clarify(question="Tune it", candidates=[anim.id], needed="parameters"),
            AssistantText("ok"),
        ])
        session = orch.start_session()
        orch.submit_message(session, "adjust the fade")
        prompt = session.pending_prompt
        assert prompt.kind == "parameter_form"
        names = [f["name"] for f in prompt.payload["fields"]]
        assert names == ["duration", "delay", "speed", "direction", "easing"]
        # out-of-range answer rejected via the same ranges
        with pytest.raises(InvalidAnswer):
            orch.answer_prompt(session, {"values": {"duration": 99999}})
        orch.answer_prompt(session, {"values": {"duration": 2.0}})
        assert session.state == "done"

    def test_upload_prompt(self, engine, stage):
        orch = orchestrator_with(engine, [
            Clarify(question="Upload the media", needed="upload"),
            AssistantText("ok"),
        ])
        session = orch.start_session()
        orch.submit_message(session, "use my video")
        prompt = session.pending_prompt
        assert prompt.kind == "upload_button"
        assert prompt.payload["accepted_kinds"] == ["image", "audio", "video"]
        with pytest.raises(InvalidAnswer):
            orch.answer_prompt(session, {"asset_id": "asset_zzzzzzzz"})
        asset = engine.add_asset("image", "pic", "assets/x/p.png")
        orch.answer_prompt(session, {"asset_id": asset.id})
        assert session.state == "done"


class TestReferences:
    def test_single_reference(self, engine, stage):
        _, clips = stage
        tokens = resolve_references(f"move @{{clip:{clips[0].id}}} left", engine.project)
        assert len(tokens) == 1
        assert tokens[0].resolved
        assert tokens[0].ref_id == clips[0].id

    def test_plain_at_is_not_a_token(self, engine):
        assert resolve_references("email me @ noon", engine.project) == []

    def test_malformed_braces_stay_plain_text(self, engine):
        assert resolve_references("look at @{clip:}", engine.project) == []
        assert resolve_references("look at @{wat:clip_a1b2c3d4}", engine.project) == []

    def test_mixed_resolved_and_dangling(self, engine, stage):
        track, clips = stage
        text = (
            f"merge @{{clip:{clips[0].id}}} and @{{clip:{clips[1].id}}} "
            f"after @{{clip:clip_zzzzzzzz}}"
        )
        tokens = resolve_references(text, engine.project)
        assert len(tokens) == 3
        assert [t.resolved for t in tokens] == [True, True, False]

    def test_kind_mismatch_unresolved(self, engine, stage):
        track, _ = stage
        tokens = resolve_references(f"look @{{clip:{track.id}}}", engine.project)
        assert len(tokens) == 1
        assert not tokens[0].resolved

    def test_submit_with_dangling_reference_fails(self, engine, stage):
        orch = orchestrator_with(engine, [])
        session = orch.start_session()
        with pytest.raises(DanglingReference):
            orch.submit_message(session, "fix @{clip:clip_zzzzzzzz}")
        assert session.state == "idle"

    def test_sessions_are_independent(self, engine, stage):
        orch = orchestrator_with(engine, [AssistantText("a"), AssistantText("b")])
        s1 = orch.start_session()
        s2 = orch.start_session()
        assert s1.id != s2.id
        orch.submit_message(s1, "one")
        assert s1.state == "done"
        assert s2.state == "idle"


class TestInstructionSuggestions:
    def test_empty_project_suggests_draft_creation(self, engine):
        suggestions = suggest_instructions(engine.project)
        assert any("draft" in s.lower() for s in suggestions)

    def test_shape_constraints(self, engine, stage):
        suggestions = suggest_instructions(engine.project)
        assert 0 < len(suggestions) <= 5
        assert all(len(s) <= 120 for s in suggestions)

    def test_deterministic_for_same_snapshot(self, engine, stage):
        assert suggest_instructions(engine.project) == suggest_instructions(engine.project)

    def test_llm_mode_falls_back_on_provider_error(self, engine, registry):
        gateway = Gateway(MockProvider([]), registry)
        out = suggest_instructions(engine.project, gateway, use_llm=True)
        assert out == suggest_instructions(engine.project)

    def test_llm_mode_uses_structured_list(self, engine, registry):
        gateway = Gateway(
            MockProvider([Structured(["Add a title card", "Animate the intro"])]),
            registry,
        )
        out = suggest_instructions(engine.project, gateway, use_llm=True)
        assert out == ["Add a title card", "Animate the intro"]


class TestPersistence:
    def test_session_round_trips_through_doc(self, engine, stage):
        _, clips = stage
        orch = orchestrator_with(engine, [
            ToolCall("update_text_clip", {"id": clips[0].id, "content": "x"}),
        ])
        session = orch.start_session()
        orch.submit_message(session, "go")
        doc = session.to_doc()
        restored = session_from_doc(doc)
        assert restored.to_doc() == doc
        assert restored.state == "awaiting_approval"
        assert restored.steps[0].tool == "update_text_clip"

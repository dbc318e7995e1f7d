from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from scenedirector import (
    ActionPlan,
    AgentPlan,
    AgentSpec,
    Destination,
    ObjectSpec,
    PlanInvariantError,
    PlanSyntaxError,
    Scene,
    emit_plan,
    parse_plan,
    validate_plan,
    validate_text,
)

from conftest import SECOND_EXAMPLE, TABLE1_EXAMPLE


def test_table1_example_parses():
    plan = parse_plan(TABLE1_EXAMPLE)
    assert plan.agent_ids() == ["A_1"]
    first, second = plan.queue_for("A_1")
    assert first == Destination("Obj_1", interact=True, duration=2.0, speed=1.0, basic=True)
    assert second == Destination("Obj_2", interact=True, duration=5.0, speed=1.0,
                                 stationary=True)


def test_second_example_parses_hold_then_visit():
    plan = parse_plan(SECOND_EXAMPLE)
    hold, visit = plan.queue_for("A_1")
    assert hold.kind == "stationary" and hold.speed == 1.5
    assert visit.kind == "walk" and visit.basic and not visit.interact
    assert visit.duration == 1.0


def test_empty_input_fails_at_offset_zero():
    with pytest.raises(PlanSyntaxError) as info:
        parse_plan("")
    assert info.value.offset == 0


def test_grab_and_stationary_together_rejected():
    with pytest.raises(PlanInvariantError) as info:
        parse_plan("A_1 {Obj_1 (T, 2, 1, T, T, F)}")
    assert "A_1" in str(info.value)
    assert "Obj_1" in str(info.value)


# One row per case: (text, expected). Expected is either the canonical
# emitted form (valid input), "syntax" (PlanSyntaxError), or "invariant"
# (PlanInvariantError).
CORPUS = [
    # canonical and near-canonical valid forms
    (TABLE1_EXAMPLE, TABLE1_EXAMPLE),
    (SECOND_EXAMPLE, "A_1 {Obj_1 (T, 2, 1.5, F, T, F), Obj_2 (F, 1, 1.5, F, F, T)}"),
    ("A_1 {Obj_1 (F, 2, 1, F, F, F)}", "A_1 {Obj_1 (F, 2, 1, F, F, F)}"),
    ("A_1{Obj_1(T,2,1,F,F,F)}", "A_1 {Obj_1 (T, 2, 1, F, F, F)}"),
    ("  A_1  {  Obj_1  ( T , 2 , 1 , F , F , F ) }  ", "A_1 {Obj_1 (T, 2, 1, F, F, F)}"),
    ("A_1\n{\nObj_1\n(T,\n2,\n1,\nF,\nF,\nF)\n}", "A_1 {Obj_1 (T, 2, 1, F, F, F)}"),
    ("A_2 {Obj_9 (T, 2.0, 1.0, F, F, F)}", "A_2 {Obj_9 (T, 2, 1, F, F, F)}"),
    ("A_1 {Obj_1 (T, 2.5, 1.25, F, F, F)}", "A_1 {Obj_1 (T, 2.5, 1.25, F, F, F)}"),
    ("A_1 {Obj_1 (T, 16, 4, F, F, F)}", "A_1 {Obj_1 (T, 16, 4, F, F, F)}"),
    ("A_1 {Obj_1 (T, 0.5, 0.25, F, F, F)}", "A_1 {Obj_1 (T, 0.5, 0.25, F, F, F)}"),
    ("A_10 {Obj_10 (T, 3, 2, F, F, F)}", "A_10 {Obj_10 (T, 3, 2, F, F, F)}"),
    ("A_999 {Obj_321 (F, 12, 3.5, F, F, F)}", "A_999 {Obj_321 (F, 12, 3.5, F, F, F)}"),
    ("A_1 {Obj_1 (T, 2, 1, T, F, F)}", "A_1 {Obj_1 (T, 2, 1, T, F, F)}"),
    ("A_1 {Obj_1 (T, 2, 1, F, T, F)}", "A_1 {Obj_1 (T, 2, 1, F, T, F)}"),
    ("A_1 {Obj_1 (T, 2, 1, F, F, T)}", "A_1 {Obj_1 (T, 2, 1, F, F, T)}"),
    ("A_1 {Obj_1 (F, 2, 1, F, F, T)}", "A_1 {Obj_1 (F, 2, 1, F, F, T)}"),
    # multi-agent, multi-destination
    ("A_1 {Obj_1 (T, 2, 1, F, F, F)}, A_2 {Obj_2 (T, 3, 2, F, F, F)}",
     "A_1 {Obj_1 (T, 2, 1, F, F, F)}, A_2 {Obj_2 (T, 3, 2, F, F, F)}"),
    ("A_1 {Obj_1 (T, 2, 1, F, F, F), Obj_2 (F, 3, 1, F, F, F), Obj_3 (T, 4, 2, F, T, F)}",
     "A_1 {Obj_1 (T, 2, 1, F, F, F), Obj_2 (F, 3, 1, F, F, F), Obj_3 (T, 4, 2, F, T, F)}"),
    ("A_3{Obj_7(T,8,1.5,T,F,F)},A_1{Obj_2(T,4,2,F,F,T)},A_2{Obj_5(F,6,3,F,F,F)}",
     "A_3 {Obj_7 (T, 8, 1.5, T, F, F)}, A_1 {Obj_2 (T, 4, 2, F, F, T)}, A_2 {Obj_5 (F, 6, 3, F, F, F)}"),
    # forgiveness: trailing comma and trailing period
    ("A_1 {Obj_1 (T, 2, 1, F, F, F),}", "A_1 {Obj_1 (T, 2, 1, F, F, F)}"),
    ("A_1 {Obj_1 (T, 2, 1, F, F, F)},", "A_1 {Obj_1 (T, 2, 1, F, F, F)}"),
    ("A_1 {Obj_1 (T, 2, 1, F, F, F)}.", "A_1 {Obj_1 (T, 2, 1, F, F, F)}"),
    ("A_1 {Obj_1 (T, 2, 1, F, F, F)},.", "A_1 {Obj_1 (T, 2, 1, F, F, F)}"),
    ("A_1 {Obj_1 (T, 2, 1, F, F, F), Obj_2 (T, 3, 1, F, F, F),}",
     "A_1 {Obj_1 (T, 2, 1, F, F, F), Obj_2 (T, 3, 1, F, F, F)}"),
    # syntax failures
    ("", "syntax"),
    ("   ", "syntax"),
    ("garbage", "syntax"),
    ("A1 {Obj_1 (T, 2, 1, F, F, F)}", "syntax"),
    ("A_0 {Obj_1 (T, 2, 1, F, F, F)}", "syntax"),
    ("A_ {Obj_1 (T, 2, 1, F, F, F)}", "syntax"),
    ("A_1 {Object_1 (T, 2, 1, F, F, F)}", "syntax"),
    ("A_1 {obj_1 (T, 2, 1, F, F, F)}", "syntax"),
    ("A_1 {Obj_1 (T, 2, 1, F, F)}", "syntax"),
    ("A_1 {Obj_1 (T, 2, 1, F, F, F, F)}", "syntax"),
    ("A_1 {Obj_1 (T, 2, 1, F, F, F)", "syntax"),
    ("A_1 Obj_1 (T, 2, 1, F, F, F)}", "syntax"),
    ("A_1 {Obj_1 T, 2, 1, F, F, F)}", "syntax"),
    ("A_1 {}", "syntax"),
    ("A_1 {Obj_1 (True, 2, 1, F, F, F)}", "syntax"),
    ("A_1 {Obj_1 (t, 2, 1, F, F, F)}", "syntax"),
    ("A_1 {Obj_1 (T, 2, 1, f, F, F)}", "syntax"),
    ("A_1 {Obj_1 (T, -2, 1, F, F, F)}", "syntax"),
    ("A_1 {Obj_1 (T, 2, 1e3, F, F, F)}", "syntax"),
    ("A_1 {Obj_1 (T, .5, 1, F, F, F)}", "syntax"),
    ("A_1 {Obj_1 (T, 2., 1, F, F, F)}", "syntax"),
    ("A_1 {Obj_1 (T, 2, 1, F, F, F)} A_2 {Obj_2 (T, 2, 1, F, F, F)}", "syntax"),
    ("A_1 {Obj_1 (T, 2, 1, F, F, F)};", "syntax"),
    ("A_1 [Obj_1 (T, 2, 1, F, F, F)]", "syntax"),
    ("{Obj_1 (T, 2, 1, F, F, F)}", "syntax"),
    ("A_1 {Obj_1 (T 2 1 F F F)}", "syntax"),
    ("A_1 {, Obj_1 (T, 2, 1, F, F, F)}", "syntax"),
    ("A_1 {Obj_1 ()}", "syntax"),
    ("Répondre A_1 {Obj_1 (T, 2, 1, F, F, F)}", "syntax"),
    # invariant failures
    ("A_1 {Obj_1 (T, 2, 1, T, T, F)}", "invariant"),
    ("A_1 {Obj_1 (T, 2, 1, T, F, T)}", "invariant"),
    ("A_1 {Obj_1 (T, 2, 1, F, T, T)}", "invariant"),
    ("A_1 {Obj_1 (T, 2, 1, T, T, T)}", "invariant"),
    ("A_1 {Obj_1 (F, 2, 1, T, F, F)}", "invariant"),
    ("A_1 {Obj_1 (F, 2, 1, F, T, F)}", "invariant"),
    ("A_1 {Obj_1 (T, 0, 1, F, F, F)}", "invariant"),
    ("A_1 {Obj_1 (T, 2, 0, F, F, F)}", "invariant"),
    ("A_1 {Obj_1 (T, 0.0, 1, F, F, F)}", "invariant"),
    ("A_1 {Obj_1 (T, " + "9" * 400 + ", 1, F, F, F)}", "invariant"),
    ("A_1 {Obj_1 (T, 2, 1, F, F, F)}, A_1 {Obj_2 (T, 2, 1, F, F, F)}", "invariant"),
]


@pytest.mark.parametrize("text,expected", CORPUS, ids=[str(i) for i in range(len(CORPUS))])
def test_corpus(text, expected):
    if expected == "syntax":
        with pytest.raises(PlanSyntaxError):
            parse_plan(text)
    elif expected == "invariant":
        with pytest.raises(PlanInvariantError):
            parse_plan(text)
    else:
        assert emit_plan(parse_plan(text)) == expected


def test_corpus_has_at_least_50_cases():
    assert len(CORPUS) >= 50


def test_syntax_error_reports_offset_and_expectations():
    text = "A_1 {Obj_1 (T, 2, 1, F, F, X)}"
    with pytest.raises(PlanSyntaxError) as info:
        parse_plan(text)
    assert info.value.offset == text.index("X")
    assert any("flag" in e for e in info.value.expected)


# -- canonical emission and round trips --------------------------------------------

def test_emit_table1_example_exactly():
    assert emit_plan(parse_plan(TABLE1_EXAMPLE)) == TABLE1_EXAMPLE


def test_emit_minimal_plan():
    plan = ActionPlan(entries=(AgentPlan(
        agent_id="A_1",
        destinations=(Destination("Obj_1", interact=False, duration=2.0, speed=1.0),),
    ),))
    assert emit_plan(plan) == "A_1 {Obj_1 (F, 2, 1, F, F, F)}"


_DEST_KINDS = st.sampled_from(["walk", "normal", "grab", "stationary", "basic", "basic-visit"])
_NUMBERS = st.one_of(
    st.integers(min_value=1, max_value=30).map(float),
    st.floats(min_value=0.01, max_value=99.0, allow_nan=False, allow_infinity=False),
)


@st.composite
def destinations(draw):
    kind = draw(_DEST_KINDS)
    return Destination(
        object_id=f"Obj_{draw(st.integers(min_value=1, max_value=99))}",
        interact=kind not in ("walk", "basic-visit"),
        duration=draw(_NUMBERS),
        speed=draw(_NUMBERS),
        grab=kind == "grab",
        stationary=kind == "stationary",
        basic=kind in ("basic", "basic-visit"),
    )


@st.composite
def action_plans(draw):
    ids = draw(st.lists(st.integers(min_value=1, max_value=99), min_size=1, max_size=5,
                        unique=True))
    entries = tuple(
        AgentPlan(
            agent_id=f"A_{agent_number}",
            destinations=tuple(draw(st.lists(destinations(), min_size=1, max_size=4))),
        )
        for agent_number in ids
    )
    return ActionPlan(entries=entries)


@given(action_plans())
@settings(max_examples=200, deadline=None)
def test_round_trip_property(plan):
    assert parse_plan(emit_plan(plan)) == plan


@given(action_plans())
@settings(max_examples=100, deadline=None)
def test_idempotent_canonicalization(plan):
    once = emit_plan(parse_plan(emit_plan(plan)))
    assert emit_plan(parse_plan(once)) == once


def test_whitespace_insensitivity():
    rng = random.Random(3)
    base = "A_1 {Obj_1 (T, 2, 1, F, F, T), Obj_2 (T, 5, 1, F, T, F)}, A_2 {Obj_3 (F, 4, 2, F, F, F)}"
    reference = parse_plan(base)
    tokens = ["A_1", "{", "Obj_1", "(", "T", ",", "2", ",", "1", ",", "F", ",", "F", ",",
              "T", ")", ",", "Obj_2", "(", "T", ",", "5", ",", "1", ",", "F", ",", "T",
              ",", "F", ")", "}", ",", "A_2", "{", "Obj_3", "(", "F", ",", "4", ",", "2",
              ",", "F", ",", "F", ",", "F", ")", "}"]
    for _ in range(50):
        glue = lambda: rng.choice(["", " ", "  ", "\n", "\t", " \n "])
        scrambled = glue() + glue().join(tokens) + glue()
        assert parse_plan(scrambled) == reference


def test_bytes_input_accepted():
    plan = parse_plan(TABLE1_EXAMPLE.encode("utf-8"))
    assert plan.agent_ids() == ["A_1"]


# -- semantic validation ------------------------------------------------------------

def test_table1_example_strict_valid(switch_desk_scene):
    plan = parse_plan(TABLE1_EXAMPLE)
    report = validate_plan(plan, switch_desk_scene, mode="strict")
    assert report.is_structurally_valid
    assert report.errors() == []


def test_second_example_lenient_valid_strict_invalid(hold_visit_scene):
    plan = parse_plan(SECOND_EXAMPLE)
    lenient = validate_plan(plan, hold_visit_scene, mode="lenient")
    assert lenient.is_structurally_valid
    assert any(v.code == "duration-range" and v.severity == "warning"
               for v in lenient.violations)
    strict = validate_plan(plan, hold_visit_scene, mode="strict")
    assert not strict.is_structurally_valid
    assert any(v.code == "duration-range" and v.severity == "error"
               for v in strict.violations)


def test_unknown_object_is_error(switch_desk_scene):
    plan = parse_plan("A_1 {Obj_99 (T, 2, 1, F, F, F)}")
    report = validate_plan(plan, switch_desk_scene, mode="lenient")
    assert not report.is_structurally_valid
    assert any(v.code == "unknown-object" for v in report.errors())


def test_unknown_agent_is_error(switch_desk_scene):
    plan = parse_plan("A_9 {Obj_1 (T, 3, 1, F, F, T)}")
    report = validate_plan(plan, switch_desk_scene, mode="lenient")
    assert any(v.code == "unknown-agent" for v in report.errors())


def test_capability_mismatch_is_error(switch_desk_scene):
    # Obj_1 is a light switch (basic); grabbing or sitting on it is nonsense.
    for text in ("A_1 {Obj_1 (T, 3, 1, T, F, F)}", "A_1 {Obj_1 (T, 3, 1, F, T, F)}"):
        report = validate_plan(parse_plan(text), switch_desk_scene, mode="lenient")
        assert any(v.code == "capability-mismatch" for v in report.errors()), text


def test_speed_range_severity_depends_on_mode(switch_desk_scene):
    plan = parse_plan("A_1 {Obj_2 (T, 5, 9, F, T, F)}")
    lenient = validate_plan(plan, switch_desk_scene, mode="lenient")
    assert lenient.is_structurally_valid
    assert any(v.code == "speed-range" for v in lenient.warnings())
    strict = validate_plan(plan, switch_desk_scene, mode="strict")
    assert any(v.code == "speed-range" for v in strict.errors())


def test_basic_duration_band_is_advisory(switch_desk_scene):
    # Duration 2 on a triggered basic interaction sits outside the [3, 5]
    # band but matches the canonical example, so it must stay strict-valid.
    plan = parse_plan("A_1 {Obj_1 (T, 2, 1, F, F, T)}")
    report = validate_plan(plan, switch_desk_scene, mode="strict")
    assert report.is_structurally_valid
    assert any(v.code == "duration-range-basic" for v in report.warnings())
    # An untriggered visit to the same object is exempt from the band.
    visit = parse_plan("A_1 {Obj_1 (F, 2, 1, F, F, T)}")
    report = validate_plan(visit, switch_desk_scene, mode="strict")
    assert not any(v.code == "duration-range-basic" for v in report.violations)


def test_grabbed_object_reuse_is_error():
    scene = Scene(
        agents=(AgentSpec(name="A", id="A_1", position=(0, 0, 0)),
                AgentSpec(name="B", id="A_2", position=(1, 0, 1))),
        objects=(ObjectSpec(id="Obj_1", name="Box", grabbable=True, position=(2, 0, 2)),),
    )
    plan = parse_plan("A_1 {Obj_1 (T, 3, 1, T, F, F)}, A_2 {Obj_1 (F, 3, 1, F, F, F)}")
    report = validate_plan(plan, scene, mode="lenient")
    assert any(v.code == "grabbed-object-reuse" for v in report.errors())


def test_validate_text_wraps_parse_failures(switch_desk_scene):
    report, plan = validate_text("not a plan", switch_desk_scene)
    assert plan is None
    assert not report.parse_ok
    assert not report.is_structurally_valid
    report, plan = validate_text(TABLE1_EXAMPLE, switch_desk_scene)
    assert plan is not None
    assert report.parse_ok


def test_validity_report_dict_shape(switch_desk_scene):
    report, _ = validate_text(TABLE1_EXAMPLE, switch_desk_scene, mode="strict")
    payload = report.to_dict()
    assert payload["parse_ok"] is True
    assert payload["is_structurally_valid"] is True
    assert isinstance(payload["violations"], list)


def test_validate_plan_rejects_unknown_mode(switch_desk_scene):
    with pytest.raises(ValueError):
        validate_plan(parse_plan(TABLE1_EXAMPLE), switch_desk_scene, mode="weird")

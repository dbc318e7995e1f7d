"""Parser, validator, and canonical emitter for the action-plan DSL.

A plan string assigns each agent an ordered queue of destinations:

    plan        := agent_block {"," agent_block} ;
    agent_block := agent_id "{" dest {"," dest} "}" ;
    dest        := object_id "(" flag "," number "," number "," flag "," flag "," flag ")" ;
    flag        := "T" | "F" ;
    agent_id    := "A_" digits ;
    object_id   := "Obj_" digits ;
    number      := decimal literal, optional fraction ;

The six destination fields are, in order: interact, duration (seconds),
movement speed (multiplier), grab, stationary, basic. Arbitrary whitespace
is permitted between tokens. As input forgiveness for model output, a
trailing comma inside a block, a trailing comma after the last agent block,
and a single trailing period are accepted and discarded; they are never
emitted. Flags are exactly ``T``/``F`` (case-sensitive).

Example: ``A_1 {Obj_1 (T, 2, 1, F, F, T), Obj_2 (T, 5, 1, F, T, F)}`` sends
agent A_1 to toggle Obj_1 for 2 s, then hold a sustained action at Obj_2
for 5 s, both at speed 1.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .scene import AGENT_ID_RE, OBJECT_ID_RE, Scene

SPEED_RANGE = (1.0, 4.0)
DURATION_RANGE = (2.0, 16.0)
BASIC_DURATION_RANGE = (3.0, 5.0)


class PlanError(Exception):
    """Base class for plan parsing failures."""


class PlanSyntaxError(PlanError):
    """Input does not match the grammar.

    ``offset`` is the character offset into the input where parsing
    stopped; ``expected`` lists the token kinds that would have been
    accepted there.
    """

    def __init__(self, offset: int, expected: tuple[str, ...], found: str):
        super().__init__(
            f"syntax error at offset {offset}: expected {' or '.join(expected)}, found {found}"
        )
        self.offset = offset
        self.expected = expected
        self.found = found


class PlanInvariantError(PlanError):
    """Input parses but violates a structural invariant (bad flag combination,
    non-positive duration/speed, duplicate agent, empty queue)."""

    def __init__(self, message: str, agent_id: str | None = None, object_id: str | None = None):
        super().__init__(message)
        self.agent_id = agent_id
        self.object_id = object_id


@dataclass(frozen=True)
class Destination:
    """One queue entry: a target object plus interaction parameters.

    At most one of ``grab``/``stationary``/``basic`` may be set, and grab or
    stationary require ``interact``. ``basic`` may pair with interact=False,
    which means "walk to the object but do not trigger it". Duration and
    speed must be positive; range checks beyond that are the validator's
    business, not the type's.
    """

    object_id: str
    interact: bool
    duration: float
    speed: float
    grab: bool = False
    stationary: bool = False
    basic: bool = False

    def __post_init__(self):
        if sum((self.grab, self.stationary, self.basic)) > 1:
            raise PlanInvariantError(
                f"destination {self.object_id}: more than one of grab/stationary/basic is set",
                object_id=self.object_id,
            )
        if (self.grab or self.stationary) and not self.interact:
            raise PlanInvariantError(
                f"destination {self.object_id}: grab/stationary require interact=T",
                object_id=self.object_id,
            )
        if not (self.duration > 0 and math.isfinite(self.duration)):
            raise PlanInvariantError(
                f"destination {self.object_id}: duration must be finite and > 0, "
                f"got {self.duration}",
                object_id=self.object_id,
            )
        if not (self.speed > 0 and math.isfinite(self.speed)):
            raise PlanInvariantError(
                f"destination {self.object_id}: speed must be finite and > 0, "
                f"got {self.speed}",
                object_id=self.object_id,
            )

    @property
    def kind(self) -> str:
        """Execution category: walk, normal, grab, stationary, or basic."""
        if not self.interact:
            return "walk"
        if self.grab:
            return "grab"
        if self.stationary:
            return "stationary"
        if self.basic:
            return "basic"
        return "normal"


@dataclass(frozen=True)
class AgentPlan:
    """One agent's ordered destination queue."""

    agent_id: str
    destinations: tuple[Destination, ...]

    def __post_init__(self):
        if not self.destinations:
            raise PlanInvariantError(
                f"agent {self.agent_id}: destination queue must not be empty",
                agent_id=self.agent_id,
            )


@dataclass(frozen=True)
class ActionPlan:
    """The parsed form of a full plan string: per-agent destination queues."""

    entries: tuple[AgentPlan, ...]

    def __post_init__(self):
        seen: set[str] = set()
        for entry in self.entries:
            if entry.agent_id in seen:
                raise PlanInvariantError(
                    f"agent {entry.agent_id} appears more than once in the plan",
                    agent_id=entry.agent_id,
                )
            seen.add(entry.agent_id)

    def agent_ids(self) -> list[str]:
        return [e.agent_id for e in self.entries]

    def queue_for(self, agent_id: str) -> tuple[Destination, ...]:
        for entry in self.entries:
            if entry.agent_id == agent_id:
                return entry.destinations
        raise KeyError(agent_id)


# -- tokenizer ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>[0-9]+(?:\.[0-9]+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}(),.])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "number" | "name" | one of "{" "}" "(" ")" "," "." | "end"
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise PlanSyntaxError(pos, ("token",), repr(text[pos]))
        if match.lastgroup != "ws":
            kind = match.group() if match.lastgroup == "punct" else match.lastgroup
            tokens.append(_Token(kind, match.group(), pos))
        pos = match.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.index = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def _fail(self, expected: tuple[str, ...]):
        token = self.current
        found = "end of input" if token.kind == "end" else repr(token.text)
        raise PlanSyntaxError(token.offset, expected, found)

    def expect(self, kind: str) -> _Token:
        token = self.current
        if token.kind != kind:
            self._fail((kind,))
        self.index += 1
        return token

    def accept(self, kind: str) -> _Token | None:
        if self.current.kind == kind:
            token = self.current
            self.index += 1
            return token
        return None

    def parse_plan(self) -> ActionPlan:
        entries = [self.parse_agent_block()]
        while self.accept(","):
            if self.current.kind == "end" or self.current.kind == ".":
                break  # trailing comma after last block: forgiven
            entries.append(self.parse_agent_block())
        self.accept(".")  # trailing period: forgiven
        if self.current.kind != "end":
            self._fail((",", "end of input"))
        return ActionPlan(entries=tuple(entries))

    def parse_agent_block(self) -> AgentPlan:
        name = self.current
        if name.kind != "name" or not AGENT_ID_RE.fullmatch(name.text):
            self._fail(("agent id (A_<n>)",))
        self.index += 1
        self.expect("{")
        destinations = [self.parse_destination(name.text)]
        while self.accept(","):
            if self.current.kind == "}":
                break  # trailing comma inside block: forgiven
            destinations.append(self.parse_destination(name.text))
        self.expect("}")
        return AgentPlan(agent_id=name.text, destinations=tuple(destinations))

    def parse_destination(self, agent_id: str) -> Destination:
        name = self.current
        if name.kind != "name" or not OBJECT_ID_RE.fullmatch(name.text):
            self._fail(("object id (Obj_<n>)",))
        self.index += 1
        self.expect("(")
        interact = self.parse_flag()
        self.expect(",")
        duration = self.parse_number()
        self.expect(",")
        speed = self.parse_number()
        self.expect(",")
        grab = self.parse_flag()
        self.expect(",")
        stationary = self.parse_flag()
        self.expect(",")
        basic = self.parse_flag()
        self.expect(")")
        try:
            return Destination(
                object_id=name.text,
                interact=interact,
                duration=duration,
                speed=speed,
                grab=grab,
                stationary=stationary,
                basic=basic,
            )
        except PlanInvariantError as exc:
            raise PlanInvariantError(f"agent {agent_id}: {exc}", agent_id=agent_id,
                                     object_id=name.text) from exc

    def parse_flag(self) -> bool:
        token = self.current
        if token.kind == "name" and token.text in ("T", "F"):
            self.index += 1
            return token.text == "T"
        self._fail(("flag (T or F)",))

    def parse_number(self) -> float:
        token = self.current
        if token.kind != "number":
            self._fail(("number",))
        self.index += 1
        return float(token.text)


def parse_plan(text: str | bytes) -> ActionPlan:
    """Parse a plan string into per-agent destination queues.

    Raises PlanSyntaxError (with offset and expected-token set) on malformed
    input and PlanInvariantError on structurally impossible plans (duplicate
    agents, contradictory flags). Total over arbitrary input: any byte
    sequence either parses or raises one of those two errors.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    return _Parser(_tokenize(text)).parse_plan()


# -- canonical emission -------------------------------------------------------

def _format_number(value: float) -> str:
    # Minimal decimal form that parses back to the same float. The grammar
    # has no exponent form, so fall back to positional digits for extremes.
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    text = repr(float(value))
    if "e" in text or "E" in text:
        text = f"{value:.20f}".rstrip("0")
    return text


def emit_plan(plan: ActionPlan) -> str:
    """Render a plan in canonical form; ``parse_plan(emit_plan(p)) == p``."""
    blocks = []
    for entry in plan.entries:
        dests = ", ".join(
            f"{d.object_id} ({_flag(d.interact)}, {_format_number(d.duration)}, "
            f"{_format_number(d.speed)}, {_flag(d.grab)}, {_flag(d.stationary)}, {_flag(d.basic)})"
            for d in entry.destinations
        )
        blocks.append(f"{entry.agent_id} {{{dests}}}")
    return ", ".join(blocks)


def _flag(value: bool) -> str:
    return "T" if value else "F"


# -- semantic validation ------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    severity: str  # "error" | "warning"
    code: str
    message: str
    location: str


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of checking a plan (or raw reply text) against a scene."""

    parse_ok: bool
    violations: tuple[Violation, ...] = ()

    @property
    def is_structurally_valid(self) -> bool:
        return self.parse_ok and not any(v.severity == "error" for v in self.violations)

    def errors(self) -> list[Violation]:
        return [v for v in self.violations if v.severity == "error"]

    def warnings(self) -> list[Violation]:
        return [v for v in self.violations if v.severity == "warning"]

    def to_dict(self) -> dict:
        return {
            "parse_ok": self.parse_ok,
            "is_structurally_valid": self.is_structurally_valid,
            "violations": [
                {
                    "severity": v.severity,
                    "code": v.code,
                    "message": v.message,
                    "location": v.location,
                }
                for v in self.violations
            ],
        }


def validate_plan(plan: ActionPlan, scene: Scene, mode: str = "lenient") -> ValidityReport:
    """Check a parsed plan against a scene; total, results go in the report.

    Reference and capability problems (unknown ids, flags the object cannot
    honor, reuse of a grabbed object) are always errors. Speed/duration
    range problems are errors in ``strict`` mode and warnings in ``lenient``
    mode. The tighter duration band for triggered basic interactions is
    advisory and reported as a warning in both modes, since the canonical
    example output itself sits outside it.
    """
    if mode not in ("strict", "lenient"):
        raise ValueError(f"mode must be 'strict' or 'lenient', got {mode!r}")
    range_severity = "error" if mode == "strict" else "warning"
    objects = scene.object_map()
    agents = scene.agent_map()
    violations: list[Violation] = []

    grab_targets: set[str] = set()
    reference_counts: dict[str, int] = {}
    for entry in plan.entries:
        for dest in entry.destinations:
            reference_counts[dest.object_id] = reference_counts.get(dest.object_id, 0) + 1
            if dest.grab:
                grab_targets.add(dest.object_id)

    for entry in plan.entries:
        if entry.agent_id not in agents:
            violations.append(Violation(
                "error", "unknown-agent",
                f"agent {entry.agent_id} does not exist in the scene",
                entry.agent_id,
            ))
        for i, dest in enumerate(entry.destinations):
            where = f"{entry.agent_id}[{i}]:{dest.object_id}"
            obj = objects.get(dest.object_id)
            if obj is None:
                violations.append(Violation(
                    "error", "unknown-object",
                    f"object {dest.object_id} does not exist in the scene",
                    where,
                ))
            else:
                if dest.grab and not obj.grabbable:
                    violations.append(Violation(
                        "error", "capability-mismatch",
                        f"{dest.object_id} is not grabbable but the destination sets grab",
                        where,
                    ))
                if dest.stationary and not obj.stationary:
                    violations.append(Violation(
                        "error", "capability-mismatch",
                        f"{dest.object_id} does not support stationary actions",
                        where,
                    ))
                if dest.basic and not obj.basic:
                    violations.append(Violation(
                        "error", "capability-mismatch",
                        f"{dest.object_id} does not support basic interactions",
                        where,
                    ))
            if not SPEED_RANGE[0] <= dest.speed <= SPEED_RANGE[1]:
                violations.append(Violation(
                    range_severity, "speed-range",
                    f"speed {_format_number(dest.speed)} outside "
                    f"[{SPEED_RANGE[0]}, {SPEED_RANGE[1]}]",
                    where,
                ))
            if not DURATION_RANGE[0] <= dest.duration <= DURATION_RANGE[1]:
                violations.append(Violation(
                    range_severity, "duration-range",
                    f"duration {_format_number(dest.duration)} outside "
                    f"[{DURATION_RANGE[0]:g}, {DURATION_RANGE[1]:g}]",
                    where,
                ))
            elif dest.basic and dest.interact and not (
                BASIC_DURATION_RANGE[0] <= dest.duration <= BASIC_DURATION_RANGE[1]
            ):
                violations.append(Violation(
                    "warning", "duration-range-basic",
                    f"duration {_format_number(dest.duration)} outside the basic-interaction "
                    f"band [{BASIC_DURATION_RANGE[0]:g}, {BASIC_DURATION_RANGE[1]:g}]",
                    where,
                ))

    for object_id in sorted(grab_targets):
        if reference_counts[object_id] > 1:
            violations.append(Violation(
                "error", "grabbed-object-reuse",
                f"{object_id} is grabbed and referenced {reference_counts[object_id]} times; "
                "grabbed objects are destroyed after use and cannot be reused",
                object_id,
            ))

    return ValidityReport(parse_ok=True, violations=tuple(violations))


def validate_text(text: str, scene: Scene, mode: str = "lenient") -> tuple[ValidityReport, ActionPlan | None]:
    """Parse raw reply text and validate it in one step.

    Parse failures come back as a report with ``parse_ok=False`` and a single
    error violation, never as an exception.
    """
    try:
        plan = parse_plan(text)
    except PlanSyntaxError as exc:
        violation = Violation("error", "parse-error", str(exc), f"offset {exc.offset}")
        return ValidityReport(parse_ok=False, violations=(violation,)), None
    except PlanInvariantError as exc:
        violation = Violation(
            "error", "plan-invariant", str(exc),
            exc.agent_id or exc.object_id or "plan",
        )
        return ValidityReport(parse_ok=False, violations=(violation,)), None
    return validate_plan(plan, scene, mode=mode), plan

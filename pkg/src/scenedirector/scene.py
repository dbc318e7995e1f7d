"""Scene domain model: agents, interactable objects, and scene files.

A scene is the authoring-side input of the pipeline: an ordered list of
agents and an ordered list of interactable objects, each carrying semantic
tags and a world position. Scenes are plain immutable values; nothing here
enforces invariants at construction time, so that ``validate_scene`` can
inspect arbitrary (possibly broken) scenes and report every problem. The
loading path (``load_scene``) is the strict one: it refuses files whose
content violates any invariant.

Scene files are JSON documents with top-level ``agents`` and ``objects``
keys; see docs/scene_format.md for an annotated example.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

AGENT_ID_RE = re.compile(r"A_[1-9][0-9]*\Z")
OBJECT_ID_RE = re.compile(r"Obj_[1-9][0-9]*\Z")

Vec3 = tuple[float, float, float]


class SceneError(Exception):
    """Base class for scene loading/validation failures."""


class SceneFormatError(SceneError):
    """Scene file is not syntactically usable (bad JSON, wrong shape).

    ``line`` and ``column`` are set when the underlying JSON decoder
    provides them, else None.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


class SceneInvariantError(SceneError):
    """Scene content violates a model invariant (duplicate id, bad flags, ...)."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


@dataclass(frozen=True)
class AgentSpec:
    """One virtual agent: display name, ``A_<n>`` id, tags, world position."""

    name: str
    id: str
    tags: tuple[str, ...] = ()
    position: Vec3 = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class ObjectSpec:
    """One interactable object and its capability flags.

    At most one of ``grabbable`` / ``stationary`` / ``basic`` may be set;
    all three false marks a plain walk-to target. ``stationary_compatible``
    marks objects whose sustained action can layer with a carried object
    (e.g. sitting down while holding a box) and is only meaningful when the
    object is not itself grabbable. ``initial_state`` is the boolean device
    state of toggleable (basic) objects; lights start off.
    """

    id: str
    name: str
    grabbable: bool = False
    stationary: bool = False
    stationary_compatible: bool = False
    basic: bool = False
    tags: tuple[str, ...] = ()
    position: Vec3 = (0.0, 0.0, 0.0)
    initial_state: bool = False


@dataclass(frozen=True)
class Scene:
    """Ordered agents and objects. Order is meaningful and preserved."""

    agents: tuple[AgentSpec, ...] = ()
    objects: tuple[ObjectSpec, ...] = ()

    def agent_map(self) -> dict[str, AgentSpec]:
        return {a.id: a for a in self.agents}

    def object_map(self) -> dict[str, ObjectSpec]:
        return {o.id: o for o in self.objects}


@dataclass(frozen=True)
class ScenarioParams:
    """Inputs of the scenario-count estimate: objects, variants, timings, agents."""

    m: int
    v: int
    d: int
    n: int


def validate_scene(scene: Scene) -> list[str]:
    """Check every model invariant; return one description per violation.

    Total function: never raises, an empty list means the scene is valid.
    Each description names the offending entity and the rule it breaks.
    """
    violations: list[str] = []
    seen: set[str] = set()

    for agent in scene.agents:
        if not AGENT_ID_RE.fullmatch(agent.id):
            violations.append(
                f"agent id {agent.id!r} does not match the required pattern A_<n> with n >= 1"
            )
        if agent.id in seen:
            violations.append(f"duplicate id {agent.id!r} in scene")
        seen.add(agent.id)
        violations.extend(_check_name(agent.id, agent.name))
        violations.extend(_check_tags(agent.id, agent.tags))
        violations.extend(_check_position(agent.id, agent.position))

    for obj in scene.objects:
        if not OBJECT_ID_RE.fullmatch(obj.id):
            violations.append(
                f"object id {obj.id!r} does not match the required pattern Obj_<n> with n >= 1"
            )
        if obj.id in seen:
            violations.append(f"duplicate id {obj.id!r} in scene")
        seen.add(obj.id)
        flags = [obj.grabbable, obj.stationary, obj.basic]
        if sum(flags) > 1:
            violations.append(
                f"object {obj.id!r} sets more than one interaction type flag; "
                "an object supports at most one of grabbable/stationary/basic"
            )
        if obj.stationary_compatible and obj.grabbable:
            violations.append(
                f"object {obj.id!r} is grabbable and stationary_compatible; "
                "stationary_compatible is only allowed on non-grabbable objects"
            )
        violations.extend(_check_name(obj.id, obj.name))
        violations.extend(_check_tags(obj.id, obj.tags))
        violations.extend(_check_position(obj.id, obj.position))

    return violations


def _check_name(entity_id: str, name: str) -> list[str]:
    # Names are single-line fields of the serialized description.
    if not isinstance(name, str) or "\n" in name or "\r" in name:
        return [f"{entity_id!r} name {name!r} must be single-line text"]
    return []


def _check_tags(entity_id: str, tags: tuple[str, ...]) -> list[str]:
    out = []
    for tag in tags:
        if not isinstance(tag, str) or not tag.strip() or tag != tag.strip():
            out.append(f"{entity_id!r} has an empty or untrimmed tag {tag!r}")
        elif "," in tag or "\n" in tag or "\r" in tag:
            # Tags are rendered comma-separated on one line; separators
            # inside a tag would make the description ambiguous.
            out.append(f"{entity_id!r} tag {tag!r} must not contain commas or line breaks")
    return out


def _check_position(entity_id: str, position) -> list[str]:
    if len(position) != 3 or not all(
        isinstance(c, (int, float)) and math.isfinite(c) for c in position
    ):
        return [f"{entity_id!r} position {position!r} is not a finite 3-vector"]
    return []


def estimate_scenarios(params: ScenarioParams) -> int:
    """Count of distinct interaction scenarios: (m * v * d) ** n, exact.

    Python integers are arbitrary precision, so the result never overflows.
    """
    for name in ("m", "v", "d", "n"):
        value = getattr(params, name)
        if not isinstance(value, int) or value < 1:
            raise ValueError(f"scenario parameter {name} must be an integer >= 1, got {value!r}")
    return (params.m * params.v * params.d) ** params.n


# -- scene file round trip ----------------------------------------------------

def scene_to_dict(scene: Scene) -> dict:
    """Plain-data form of a scene, matching the JSON file schema."""
    return {
        "agents": [
            {
                "name": a.name,
                "id": a.id,
                "tags": list(a.tags),
                "position": list(a.position),
            }
            for a in scene.agents
        ],
        "objects": [
            {
                "id": o.id,
                "name": o.name,
                "grabbable": o.grabbable,
                "stationary": o.stationary,
                "stationary_compatible": o.stationary_compatible,
                "basic": o.basic,
                "tags": list(o.tags),
                "position": list(o.position),
                "initial_state": o.initial_state,
            }
            for o in scene.objects
        ],
    }


def scene_from_dict(data: dict) -> Scene:
    """Build a Scene from plain data; shape errors raise SceneFormatError."""
    if not isinstance(data, dict):
        raise SceneFormatError(f"scene document must be a JSON object, got {type(data).__name__}")
    unknown = set(data) - {"agents", "objects"}
    if unknown:
        raise SceneFormatError(f"unknown top-level keys: {sorted(unknown)}")

    agents = []
    for i, raw in enumerate(_expect_list(data, "agents")):
        agents.append(
            AgentSpec(
                name=_expect_str(raw, "name", f"agents[{i}]"),
                id=_expect_str(raw, "id", f"agents[{i}]"),
                tags=_read_tags(raw, f"agents[{i}]"),
                position=_read_position(raw, f"agents[{i}]"),
            )
        )
    objects = []
    for i, raw in enumerate(_expect_list(data, "objects")):
        where = f"objects[{i}]"
        objects.append(
            ObjectSpec(
                id=_expect_str(raw, "id", where),
                name=_expect_str(raw, "name", where),
                grabbable=bool(raw.get("grabbable", False)),
                stationary=bool(raw.get("stationary", False)),
                stationary_compatible=bool(raw.get("stationary_compatible", False)),
                basic=bool(raw.get("basic", False)),
                tags=_read_tags(raw, where),
                position=_read_position(raw, where),
                initial_state=bool(raw.get("initial_state", False)),
            )
        )
    return Scene(agents=tuple(agents), objects=tuple(objects))


def _expect_list(data: dict, key: str) -> list:
    value = data.get(key, [])
    if not isinstance(value, list):
        raise SceneFormatError(f"{key!r} must be a list")
    return value


def _expect_str(raw: dict, key: str, where: str) -> str:
    if not isinstance(raw, dict):
        raise SceneFormatError(f"{where} must be an object")
    value = raw.get(key)
    if not isinstance(value, str):
        raise SceneFormatError(f"{where} is missing a string {key!r} field")
    return value


def _read_tags(raw: dict, where: str) -> tuple[str, ...]:
    tags = raw.get("tags", [])
    if not isinstance(tags, list) or not all(isinstance(t, str) for t in tags):
        raise SceneFormatError(f"{where}.tags must be a list of strings")
    return tuple(tags)


def _read_position(raw: dict, where: str) -> Vec3:
    pos = raw.get("position")
    if (
        not isinstance(pos, list)
        or len(pos) != 3
        or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in pos)
    ):
        raise SceneFormatError(f"{where}.position must be a 3-element numeric array")
    return (float(pos[0]), float(pos[1]), float(pos[2]))


def load_scene(path: str | Path) -> Scene:
    """Load and strictly validate a scene file.

    Raises OSError on I/O failure, SceneFormatError on malformed content
    (with line/column for JSON syntax errors), and SceneInvariantError when
    the content parses but violates a model invariant.
    """
    text = Path(path).read_text(encoding="utf-8")
    if not text.strip():
        raise SceneFormatError(f"{path}: file is empty", line=1, column=1)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneFormatError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
            line=exc.lineno,
            column=exc.colno,
        ) from exc
    scene = scene_from_dict(data)
    violations = validate_scene(scene)
    if violations:
        raise SceneInvariantError(violations)
    return scene


def save_scene(scene: Scene, path: str | Path) -> None:
    """Write a scene as a JSON file readable by ``load_scene``."""
    Path(path).write_text(json.dumps(scene_to_dict(scene), indent=2) + "\n", encoding="utf-8")

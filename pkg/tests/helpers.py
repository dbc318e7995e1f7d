"""Test-only oracles and generators, independent of the code paths they check."""

from __future__ import annotations

import random

from scenedirector import ActionPlan, AgentPlan, AgentSpec, Destination, ObjectSpec, Scene


def power_oracle(base: int, exponent: int) -> int:
    """Arbitrary-precision power by repeated multiplication (no ``**``)."""
    result = 1
    for _ in range(exponent):
        result = result * base
    return result


# -- description reader ---------------------------------------------------------
# Recovers field values from the serialized scene description. Deliberately a
# separate, straight-line implementation so serializer regressions cannot hide.

def read_description(text: str) -> dict:
    lines = text.rstrip("\n").split("\n")
    assert lines[0] == "Scene Description:", lines[0]
    assert lines[-2] == "END" and lines[-1] == "-" * 10
    agents = []
    objects = []
    i = 2
    assert lines[i] == "Actors:"
    i += 2  # skip header and opening rule
    while lines[i] != "-" * 10:
        agents.append({
            "name": _field(lines[i], "Name"),
            "id": _field(lines[i + 1], "ID"),
            "tags": _tags(lines[i + 2]),
            "position": _position(lines[i + 3]),
        })
        assert lines[i + 4] == "-" * 10
        i += 5
    i += 1
    assert lines[i] == "Interactable Objects:"
    i += 2
    while lines[i] != "-" * 10:
        objects.append({
            "id": _field(lines[i], "Object ID"),
            "name": _field(lines[i + 1], "Name"),
            "grabbable": _flag(lines[i + 2], "Is Grabbable"),
            "stationary": _flag(lines[i + 3], "Is Stationary"),
            "stationary_compatible": _flag(lines[i + 4], "Is Stationary Compatible"),
            "basic": _flag(lines[i + 5], "Is Basic Interaction"),
            "tags": _tags(lines[i + 6]),
            "position": _position(lines[i + 7]),
        })
        assert lines[i + 8] == "-" * 10
        i += 9
    assert lines[i + 1] == "END"
    return {"agents": agents, "objects": objects}


def _field(line: str, label: str) -> str:
    prefix = f"{label}: "
    assert line.startswith(prefix), (line, label)
    return line[len(prefix):]


def _tags(line: str) -> list[str]:
    assert line.startswith("Tags:")
    rest = line[len("Tags:"):].lstrip(" ")
    return [t for t in rest.split(", ") if t] if rest else []


def _flag(line: str, label: str) -> bool:
    value = _field(line, label)
    assert value in ("Yes", "No")
    return value == "Yes"


def _position(line: str) -> tuple[float, float, float]:
    value = _field(line, "Position")
    assert value.startswith("(") and value.endswith(")")
    parts = value[1:-1].split(", ")
    assert len(parts) == 3
    return tuple(float(p) for p in parts)


# -- randomized scene / plan generators ------------------------------------------

_OBJECT_KINDS = ("plain", "grabbable", "stationary", "stationary_compatible", "basic")


def random_scene(rng: random.Random, max_agents: int = 4, max_objects: int = 6,
                 min_agents: int = 1, min_objects: int = 1) -> Scene:
    """A structurally valid scene with a random mix of object capabilities."""
    n_agents = rng.randint(min_agents, max_agents)
    n_objects = rng.randint(min_objects, max_objects)

    def place():
        return (round(rng.uniform(-9, 9), 2), round(rng.uniform(0.1, 0.3), 2),
                round(rng.uniform(-9, 9), 2))

    agents = tuple(
        AgentSpec(name=f"Agent {i + 1}", id=f"A_{i + 1}", tags=("test",), position=place())
        for i in range(n_agents)
    )
    objects = []
    for i in range(n_objects):
        kind = rng.choice(_OBJECT_KINDS)
        objects.append(ObjectSpec(
            id=f"Obj_{i + 1}",
            name=f"Thing {i + 1}",
            grabbable=kind == "grabbable",
            stationary=kind in ("stationary", "stationary_compatible"),
            stationary_compatible=kind == "stationary_compatible",
            basic=kind == "basic",
            tags=(kind,),
            position=place(),
        ))
    return Scene(agents=agents, objects=tuple(objects))


def random_valid_plan(rng: random.Random, scene: Scene, max_queue: int = 3) -> ActionPlan:
    """A structurally valid plan that may still produce occupancy conflicts.

    Flags always match object capabilities, references resolve, grabbed
    objects are used exactly once, and durations/speeds stay in range; but
    nothing avoids two agents wanting the same object at once.
    """
    grab_claimed: set[str] = set()
    referenced: set[str] = set()
    entries = []
    for agent in scene.agents:
        queue: list[Destination] = []
        for _ in range(rng.randint(1, max_queue)):
            available = [o for o in scene.objects if o.id not in grab_claimed]
            if not available:
                break
            obj = rng.choice(available)
            speed = rng.choice((1.0, 1.5, 2.0, 3.0, 4.0))
            walk_only = rng.random() < 0.2
            if obj.grabbable and not walk_only:
                # Grabbing is only legal for an object nobody references:
                # grabbed objects are destroyed and never reusable.
                if len(available) < 2 or obj.id in referenced:
                    walk_only = True
                else:
                    grab_claimed.add(obj.id)
                    referenced.add(obj.id)
                    queue.append(Destination(obj.id, interact=True,
                                             duration=float(rng.randint(2, 16)),
                                             speed=speed, grab=True))
                    continue
            referenced.add(obj.id)
            if walk_only or (not obj.stationary and not obj.basic and not obj.grabbable):
                queue.append(Destination(obj.id, interact=False,
                                         duration=float(rng.randint(2, 16)), speed=speed))
            elif obj.stationary:
                queue.append(Destination(obj.id, interact=True,
                                         duration=float(rng.randint(2, 16)),
                                         speed=speed, stationary=True))
            elif obj.basic:
                queue.append(Destination(obj.id, interact=True,
                                         duration=rng.choice((3.0, 3.5, 4.0, 4.5, 5.0)),
                                         speed=speed, basic=True))
        if queue:
            entries.append(AgentPlan(agent_id=agent.id, destinations=tuple(queue)))
    # The first agent always plans at least one destination, so entries is
    # never empty; later agents may drop out if every object got grabbed.
    return ActionPlan(entries=tuple(entries))

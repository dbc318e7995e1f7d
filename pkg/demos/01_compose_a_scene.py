"""Compose a scene in code, validate it, and serialize the description.

The description text is exactly what a language-model provider receives as
its user message: a plain-language inventory of actors and interactable
objects with ids, capability flags, tags, and positions.
"""

from pathlib import Path

from scenedirector import AgentSpec, ObjectSpec, Scene, save_scene, serialize_scene, validate_scene

scene = Scene(
    agents=(
        AgentSpec(
            name="Guy",
            id="A_1",
            tags=("male", "college student", "casual", "claustrophobic"),
            position=(-0.36, 0.11, -6.12),
        ),
    ),
    objects=(
        ObjectSpec(
            id="Obj_5",
            name="Chair",
            stationary=True,
            tags=("chair", "sit", "stay", "relax"),
            position=(-1.18, 0.23, -5.55),
        ),
        ObjectSpec(
            id="Obj_1",
            name="Computer",
            stationary=True,
            tags=("work", "play games", "desktop", "office work"),
            position=(0.70, 0.26, -5.46),
        ),
        ObjectSpec(
            id="Obj_2",
            name="Light Switch",
            basic=True,
            tags=("light", "switch", "toggle"),
            position=(1.40, 0.18, -6.40),
        ),
    ),
)

problems = validate_scene(scene)
print(f"validation: {'clean' if not problems else problems}")

description = serialize_scene(scene)
print()
print(description.text)

out = Path(__file__).parent / "scenes" / "study_room.json"
out.parent.mkdir(exist_ok=True)
save_scene(scene, out)
print(f"scene file written to {out}")

from __future__ import annotations

from pathlib import Path

import pytest

from scenedirector import AgentSpec, ObjectSpec, Scene, load_scene

DATA_DIR = Path(__file__).parent / "data"

TABLE1_EXAMPLE = "A_1 {Obj_1 (T, 2, 1, F, F, T), Obj_2 (T, 5, 1, F, T, F)}"
SECOND_EXAMPLE = "A_1{Obj_1(T, 2, 1.5, F, T, F), Obj_2(F, 1, 1.5, F, F, T)}"


@pytest.fixture(scope="session")
def golden_description() -> str:
    return (DATA_DIR / "table2_description.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def golden_scene() -> Scene:
    return load_scene(DATA_DIR / "table2_scene.json")


@pytest.fixture
def switch_desk_scene() -> Scene:
    """Scene matching the canonical example plan: a light switch and a desk."""
    return Scene(
        agents=(AgentSpec(name="Guy", id="A_1", tags=("resident",),
                          position=(0.0, 0.2, 0.0)),),
        objects=(
            ObjectSpec(id="Obj_1", name="Light Switch", basic=True,
                       tags=("light", "switch"), position=(0.0, 0.2, 0.0)),
            ObjectSpec(id="Obj_2", name="Desk", stationary=True,
                       tags=("desk", "sit"), position=(3.0, 0.2, 0.0)),
        ),
    )


@pytest.fixture
def hold_visit_scene() -> Scene:
    """Scene matching the second documented example: a bed then a light."""
    return Scene(
        agents=(AgentSpec(name="Mia", id="A_1", tags=("resident",),
                          position=(0.0, 0.2, 0.0)),),
        objects=(
            ObjectSpec(id="Obj_1", name="Bed", stationary=True,
                       tags=("bed", "sleep"), position=(1.5, 0.2, 0.0)),
            ObjectSpec(id="Obj_2", name="Light Switch", basic=True,
                       tags=("light",), position=(1.5, 0.2, 3.0)),
        ),
    )

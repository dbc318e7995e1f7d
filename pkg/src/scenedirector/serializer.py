"""Plain-language scene description for LLM prompts.

Converts a scene into the fixed multi-line text layout the language model
is prompted with: an ``Actors:`` section and an ``Interactable Objects:``
section, entries separated by ten-hyphen rules, closed by an ``END`` block.
The output is deterministic and byte-stable (LF line endings, no trailing
whitespace), so golden-file tests can pin it exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .scene import Scene, Vec3, validate_scene

RULE = "-" * 10


@dataclass(frozen=True)
class SceneDescription:
    """The serialized scene text, ready to be used as an LLM user message."""

    text: str

    def lines(self) -> list[str]:
        return self.text.split("\n")


def format_position(position: Vec3) -> str:
    """Render a 3-vector as ``(x, y, z)`` with two fractional digits.

    The integer-part zero is dropped for magnitudes below one (``-.36``,
    ``.70``) with the sign kept; an exact zero component renders as ``0``.
    """
    return "(" + ", ".join(_format_component(c) for c in position) + ")"


def _format_component(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError(f"position component must be finite, got {value!r}")
    if value == 0:
        return "0"
    text = f"{value:.2f}"
    if text.startswith("0."):
        return text[1:]
    if text.startswith("-0."):
        return "-" + text[2:]
    return text


def _yes_no(flag: bool) -> str:
    return "Yes" if flag else "No"


def _tags_line(tags: tuple[str, ...]) -> str:
    # No trailing space when the tag list is empty.
    return "Tags: " + ", ".join(tags) if tags else "Tags:"


def serialize_scene(scene: Scene) -> SceneDescription:
    """Serialize a valid scene; agents and objects keep their list order."""
    violations = validate_scene(scene)
    if violations:
        raise ValueError(f"cannot serialize invalid scene: {violations[0]}")

    lines = ["Scene Description:", RULE, "Actors:", RULE]
    for agent in scene.agents:
        lines += [
            f"Name: {agent.name}",
            f"ID: {agent.id}",
            _tags_line(agent.tags),
            f"Position: {format_position(agent.position)}",
            RULE,
        ]
    lines += [RULE, "Interactable Objects:", RULE]
    for obj in scene.objects:
        lines += [
            f"Object ID: {obj.id}",
            f"Name: {obj.name}",
            f"Is Grabbable: {_yes_no(obj.grabbable)}",
            f"Is Stationary: {_yes_no(obj.stationary)}",
            f"Is Stationary Compatible: {_yes_no(obj.stationary_compatible)}",
            f"Is Basic Interaction: {_yes_no(obj.basic)}",
            _tags_line(obj.tags),
            f"Position: {format_position(obj.position)}",
            RULE,
        ]
    lines += [RULE, "END", RULE]
    return SceneDescription(text="\n".join(lines) + "\n")

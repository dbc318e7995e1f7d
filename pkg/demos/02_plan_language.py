"""The action-plan string format: parsing, canonical form, validation.

A plan assigns each agent a queue of destinations. Every destination is
``Obj_n (interact, duration, speed, grab, stationary, basic)``. The same
module validates parsed plans against a scene: unknown references and
capability mismatches are always errors, range slips are warnings unless
strict mode is requested.
"""

from scenedirector import emit_plan, parse_plan, validate_plan
from scenedirector import AgentSpec, ObjectSpec, Scene

# Flip a light switch, then sit down at a desk.
CANONICAL = "A_1 {Obj_1 (T, 2, 1, F, F, T), Obj_2 (T, 5, 1, F, T, F)}"

plan = parse_plan(CANONICAL)
for entry in plan.entries:
    print(f"{entry.agent_id}:")
    for dest in entry.destinations:
        print(f"  {dest.kind:>10}  {dest.object_id}  {dest.duration}s at {dest.speed}x")

# Whitespace and trailing commas are tolerated; emission is canonical.
messy = "A_1{Obj_1(T,2,1,F,F,T),  Obj_2 ( T , 5 , 1 , F , T , F ) ,},"
assert parse_plan(messy) == plan
print("\ncanonical form:", emit_plan(plan))

# Validation against a scene that has a switch (basic) and a desk (stationary).
scene = Scene(
    agents=(AgentSpec(name="Guy", id="A_1", position=(0, 0.2, 0)),),
    objects=(
        ObjectSpec(id="Obj_1", name="Light Switch", basic=True, position=(0, 0.2, 0)),
        ObjectSpec(id="Obj_2", name="Desk", stationary=True, position=(3, 0.2, 0)),
    ),
)
report = validate_plan(plan, scene, mode="strict")
print(f"strict: structurally valid = {report.is_structurally_valid}")
for violation in report.violations:
    print(f"  [{violation.severity}] {violation.code}: {violation.message}")

# A plan with a one-second visit: fine when lenient, an error when strict.
quick = parse_plan("A_1 {Obj_2 (F, 1, 1.5, F, F, F)}")
for mode in ("lenient", "strict"):
    report = validate_plan(quick, scene, mode=mode)
    print(f"{mode}: valid={report.is_structurally_valid} "
          f"violations={[(v.severity, v.code) for v in report.violations]}")

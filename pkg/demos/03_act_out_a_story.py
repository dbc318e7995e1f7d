"""Generate a plan with the mock provider and act it out in the simulator.

The mock is a deterministic stand-in for a hosted model: same scene and
seed, same story. The simulator executes it with exact event times:
straight-line travel, timed interactions, the grab/carry/destroy
lifecycle, and light toggles.
"""

from scenedirector import (
    ScenarioClass,
    build_scenario,
    check_feasibility,
    mock_plan,
    parse_plan,
    render_timeline,
    simulate,
)

scene = build_scenario(ScenarioClass.from_label("5O-2A", layout_seed=1))
print("cast:", ", ".join(f"{a.name} ({a.id})" for a in scene.agents))
print("props:", ", ".join(f"{o.name} ({o.id})" for o in scene.objects))

text = mock_plan(scene, seed=11)
print("\nplan:", text)

plan = parse_plan(text)
print("predicted conflicts:", check_feasibility(scene, plan) or "none")

trace = simulate(scene, plan, policy="wait")
print(f"\n{len(trace.events)} events, finished at t={trace.end_time():.2f}s")
print("destroyed props:", sorted(trace.destroyed_objects) or "none")
print("device states:", trace.object_states)

print()
print(render_timeline(trace, format="text"))

"""Two agents, one chair: occupancy prediction and the two conflict policies.

Interactions hold their object exclusively. The static feasibility check
adds walking time to interaction time per agent and predicts overlapping
claims before anything runs; the simulator then either queues the loser
(policy "wait") or aborts (policy "fail").
"""

from scenedirector import (
    ActionPlan,
    AgentPlan,
    AgentSpec,
    Destination,
    ObjectSpec,
    OccupancyConflictError,
    Scene,
    check_feasibility,
    simulate,
)

scene = Scene(
    agents=(
        AgentSpec(name="Ava", id="A_1", position=(0.0, 0.2, 0.0)),
        AgentSpec(name="Leo", id="A_2", position=(7.0, 0.2, 0.0)),
    ),
    objects=(
        ObjectSpec(id="Obj_1", name="Armchair", stationary=True, position=(2.0, 0.2, 0.0)),
    ),
)

sit = lambda duration: Destination("Obj_1", interact=True, duration=duration,
                                   speed=1.0, stationary=True)
plan = ActionPlan(entries=(
    AgentPlan("A_1", (sit(6.0),)),  # arrives t=2, wants the chair until t=8
    AgentPlan("A_2", (sit(5.0),)),  # arrives t=5, wants it until t=10
))

for conflict in check_feasibility(scene, plan):
    print(f"predicted: {conflict.kind} on {conflict.object_id} "
          f"between {conflict.agents} over {conflict.interval}")

try:
    simulate(scene, plan, policy="fail")
except OccupancyConflictError as exc:
    print(f"policy=fail: {exc}")

trace = simulate(scene, plan, policy="wait")
for record in trace.conflicts:
    waited = record.interval[1] - record.interval[0]
    print(f"policy=wait: {record.agents[1]} waited {waited:.1f}s for "
          f"{record.object_id} behind {record.agents[0]}")
second_sit = next(e for e in trace.events
                  if e.kind == "interact_start" and e.agent_id == "A_2")
print(f"Leo finally sits at t={second_sit.time:.1f}s")

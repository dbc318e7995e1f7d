"""Discrete-event execution of an action plan over a scene.

Agents are point entities moving in straight lines on the (x, z) plane of
an open floor; the y component of authored positions is carried as
metadata only. Execution is event-driven with exact event times (no fixed
timestep), so arrival instants equal straight-line distance divided by
speed, and traces are bit-stable for golden tests.

Destination semantics by kind:

* walk (interact=F): move to the object, wait ``duration`` seconds, move on.
* normal (interact=T, no type flag): move, then hold the object's exclusive
  occupancy for ``duration`` seconds between interact_start/interact_end.
* grab: move, attach the object (it leaves world availability and rides the
  upper action channel), play the pickup for ``duration`` seconds, then
  carry it along; it is dropped and destroyed when the next destination
  completes, or at queue end if the grab was last.
* stationary: move, then hold a sustained action on the lower channel for
  ``duration`` seconds. A carried object may layer with it only when the
  target is stationary-compatible; otherwise the carry is dropped on
  arrival with a warning detail.
* basic: move, then a short contact that toggles the object's boolean
  state (lights on/off and the like).

Normal/stationary/basic interactions occupy their object exclusively from
interact_start to interact_end. A second agent needing a busy object either
waits until it frees (policy="wait", recording the waited interval as a
conflict) or aborts the run (policy="fail"). Objects destroyed by a grab
are gone for good; any later reference to one fails the run. When its queue
empties, each agent emits ``idle`` and stops.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .director import ActionPlan, Destination, validate_plan
from .scene import ObjectSpec, Scene, Vec3


def distance_xz(a: Vec3, b: Vec3) -> float:
    """Straight-line distance on the horizontal plane (x and z components)."""
    return math.hypot(a[0] - b[0], a[2] - b[2])


class SimulationError(Exception):
    """Base class for runtime execution failures."""


class ObjectUnavailableError(SimulationError):
    """A destination references an object that was grabbed or destroyed."""

    def __init__(self, agent_id: str, object_id: str, time: float):
        super().__init__(
            f"agent {agent_id} references {object_id} at t={time:g}s, "
            "but it has left the world (grabbed or destroyed)"
        )
        self.agent_id = agent_id
        self.object_id = object_id
        self.time = time


class OccupancyConflictError(SimulationError):
    """Two agents need the same exclusive object at once (policy=fail)."""

    def __init__(self, object_id: str, agents: tuple[str, str], interval: tuple[float, float]):
        super().__init__(
            f"object {object_id} is required by {agents[1]} during "
            f"[{interval[0]:g}, {interval[1]:g}]s while {agents[0]} holds it"
        )
        self.object_id = object_id
        self.agents = agents
        self.interval = interval


@dataclass(frozen=True)
class SimEvent:
    time: float
    kind: str  # move_start | arrive | interact_start | interact_end | attach
    #           | drop_destroy | toggle | conflict | idle
    agent_id: str | None = None
    object_id: str | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "time": self.time,
            "agent_id": self.agent_id,
            "kind": self.kind,
            "object_id": self.object_id,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class AgentState:
    """Snapshot of one agent after the run."""

    agent_id: str
    position: tuple[float, float]  # (x, z)
    mode: str  # idle | moving | interacting
    carried_object: str | None = None
    lower_channel: str | None = None
    upper_channel: str | None = None
    queue_cursor: int = 0


@dataclass(frozen=True)
class ConflictRecord:
    object_id: str
    agents: tuple[str, str]  # (holder, waiter)
    interval: tuple[float, float]


@dataclass(frozen=True)
class SimTrace:
    """Complete record of one execution."""

    events: tuple[SimEvent, ...]
    final_states: dict[str, AgentState]
    object_states: dict[str, bool]
    destroyed_objects: frozenset[str]
    conflicts: tuple[ConflictRecord, ...]

    def events_for(self, agent_id: str) -> list[SimEvent]:
        return [e for e in self.events if e.agent_id == agent_id]

    def end_time(self) -> float:
        return self.events[-1].time if self.events else 0.0

    def to_jsonl(self) -> str:
        return "".join(json.dumps(e.to_dict()) + "\n" for e in self.events)


def write_trace(trace: SimTrace, path: str | Path) -> None:
    Path(path).write_text(trace.to_jsonl(), encoding="utf-8")


@dataclass
class _AgentRun:
    agent_id: str
    queue: tuple[Destination, ...]
    position: Vec3
    cursor: int = 0
    carried: str | None = None
    pending_drop: str | None = None
    pending_cursor: int = -1
    lower_channel: str | None = None
    mode: str = "idle"
    block_started: float | None = None
    block_holder: str | None = None


class _Runner:
    def __init__(self, scene: Scene, plan: ActionPlan, policy: str):
        self.scene = scene
        self.policy = policy
        self.objects: dict[str, ObjectSpec] = scene.object_map()
        queues = {entry.agent_id: entry.destinations for entry in plan.entries}
        self.runs = {
            agent.id: _AgentRun(agent.id, queues.get(agent.id, ()), agent.position)
            for agent in scene.agents
        }
        self.events: list[SimEvent] = []
        self.conflicts: list[ConflictRecord] = []
        self.unavailable: set[str] = set()  # attached or destroyed
        self.destroyed: set[str] = set()
        self.busy_until: dict[str, float] = {}
        self.holder: dict[str, str] = {}
        self.object_states = {o.id: o.initial_state for o in scene.objects if o.basic}
        self.heap: list[tuple[float, int, str, str]] = []
        self.seq = 0

    # -- scheduling ------------------------------------------------------

    def schedule(self, time: float, agent_id: str, phase: str) -> None:
        heapq.heappush(self.heap, (time, self.seq, agent_id, phase))
        self.seq += 1

    def emit(self, time: float, kind: str, agent_id: str | None = None,
             object_id: str | None = None, detail: str = "") -> None:
        self.events.append(SimEvent(time, kind, agent_id, object_id, detail))

    def run(self) -> SimTrace:
        for agent in self.scene.agents:
            self.schedule(0.0, agent.id, "begin")
        while self.heap:
            time, _, agent_id, phase = heapq.heappop(self.heap)
            getattr(self, f"_{phase}")(self.runs[agent_id], time)
        return SimTrace(
            events=tuple(self.events),
            final_states={
                run.agent_id: AgentState(
                    agent_id=run.agent_id,
                    position=(run.position[0], run.position[2]),
                    mode=run.mode,
                    carried_object=run.carried,
                    lower_channel=run.lower_channel,
                    upper_channel=f"carry:{run.carried}" if run.carried else None,
                    queue_cursor=run.cursor,
                )
                for run in self.runs.values()
            },
            object_states=dict(self.object_states),
            destroyed_objects=frozenset(self.destroyed),
            conflicts=tuple(self.conflicts),
        )

    # -- phases ----------------------------------------------------------

    def _begin(self, run: _AgentRun, time: float) -> None:
        if run.cursor >= len(run.queue):
            self._finalize(run, time)
            return
        dest = run.queue[run.cursor]
        self._require_available(run, dest.object_id, time)
        obj = self.objects[dest.object_id]
        run.mode = "moving"
        self.emit(time, "move_start", run.agent_id, obj.id,
                  f"to {obj.id} at speed {dest.speed:g}")
        arrival = time + distance_xz(run.position, obj.position) / dest.speed
        self.schedule(arrival, run.agent_id, "arrive")

    def _arrive(self, run: _AgentRun, time: float) -> None:
        dest = run.queue[run.cursor]
        obj = self.objects[dest.object_id]
        run.position = obj.position
        self.emit(time, "arrive", run.agent_id, obj.id, f"at {obj.id}")
        self._require_available(run, obj.id, time)

        if not dest.interact:  # walk-only visit, no occupancy
            self.schedule(time + dest.duration, run.agent_id, "finish")
            return
        if dest.grab:
            self.unavailable.add(obj.id)
            run.carried = obj.id
            self.emit(time, "attach", run.agent_id, obj.id, "picked up, carried on upper channel")
            self._start_interaction(run, dest, time)
            return
        if dest.stationary and run.carried and not obj.stationary_compatible:
            # Target cannot layer with a carry: drop early rather than fail.
            self._drop(run, time,
                       f"dropped early: {obj.id} is not stationary-compatible with a carry")
        self._acquire(run, time)

    def _acquire(self, run: _AgentRun, time: float) -> None:
        dest = run.queue[run.cursor]
        object_id = dest.object_id
        self._require_available(run, object_id, time)
        free_at = self.busy_until.get(object_id, 0.0)
        if free_at > time:
            holder = self.holder[object_id]
            if self.policy == "fail":
                raise OccupancyConflictError(object_id, (holder, run.agent_id), (time, free_at))
            if run.block_started is None:
                run.block_started = time
                run.block_holder = holder
            self.schedule(free_at, run.agent_id, "acquire")
            return
        if run.block_started is not None:
            waited = (run.block_started, time)
            self.emit(time, "conflict", run.agent_id, object_id,
                      f"waited [{waited[0]:g}, {waited[1]:g}]s behind {run.block_holder}")
            self.conflicts.append(
                ConflictRecord(object_id, (run.block_holder or "", run.agent_id), waited))
            run.block_started = None
            run.block_holder = None
        self._start_interaction(run, dest, time)

    def _start_interaction(self, run: _AgentRun, dest: Destination, time: float) -> None:
        run.mode = "interacting"
        if not dest.grab:  # grabs remove the object instead of occupying it
            self.busy_until[dest.object_id] = time + dest.duration
            self.holder[dest.object_id] = run.agent_id
        if dest.stationary:
            run.lower_channel = f"hold:{dest.object_id}"
        self.emit(time, "interact_start", run.agent_id, dest.object_id, dest.kind)
        self.schedule(time + dest.duration, run.agent_id, "finish")

    def _finish(self, run: _AgentRun, time: float) -> None:
        dest = run.queue[run.cursor]
        if dest.interact:
            if dest.basic:
                state = not self.object_states.get(dest.object_id, False)
                self.object_states[dest.object_id] = state
                self.emit(time, "toggle", run.agent_id, dest.object_id,
                          f"{'off->on' if state else 'on->off'}")
            if dest.stationary:
                run.lower_channel = None
            self.emit(time, "interact_end", run.agent_id, dest.object_id, dest.kind)
        # A grab picked up before this destination drops once this one is done.
        if run.pending_drop is not None and run.pending_cursor < run.cursor:
            self._drop(run, time, "dropped and destroyed after use")
        if dest.grab:
            run.pending_drop = dest.object_id
            run.pending_cursor = run.cursor
        run.cursor += 1
        run.mode = "idle"
        self.schedule(time, run.agent_id, "begin")

    def _finalize(self, run: _AgentRun, time: float) -> None:
        if run.pending_drop is not None:
            self._drop(run, time, "dropped and destroyed at queue end")
        run.mode = "idle"
        detail = "queue complete" if run.queue else "no destinations assigned"
        self.emit(time, "idle", run.agent_id, None, detail)

    # -- helpers ---------------------------------------------------------

    def _drop(self, run: _AgentRun, time: float, detail: str) -> None:
        object_id = run.pending_drop or run.carried
        assert object_id is not None
        self.destroyed.add(object_id)
        self.unavailable.add(object_id)
        self.emit(time, "drop_destroy", run.agent_id, object_id, detail)
        if run.carried == object_id:
            run.carried = None
        run.pending_drop = None
        run.pending_cursor = -1

    def _require_available(self, run: _AgentRun, object_id: str, time: float) -> None:
        if object_id in self.unavailable and object_id != run.carried:
            raise ObjectUnavailableError(run.agent_id, object_id, time)


def simulate(scene: Scene, plan: ActionPlan, policy: str = "wait") -> SimTrace:
    """Execute a plan over a scene and return the full event trace.

    ``policy`` selects conflict handling: "wait" queues agents on busy
    objects (the waited interval is recorded), "fail" raises
    OccupancyConflictError at the first overlap. The plan must be
    structurally valid against the scene (reference, capability, and reuse
    errors are rejected up front; out-of-range durations or speeds are
    tolerated).
    """
    if policy not in ("wait", "fail"):
        raise ValueError(f"policy must be 'wait' or 'fail', got {policy!r}")
    report = validate_plan(plan, scene, mode="lenient")
    errors = report.errors()
    if errors:
        raise ValueError(
            f"plan is not structurally valid against the scene: {errors[0].message}"
        )
    return _Runner(scene, plan, policy).run()


# -- static feasibility estimate ----------------------------------------------

@dataclass(frozen=True)
class PredictedConflict:
    kind: str  # "occupancy" | "grabbed-reuse"
    object_id: str
    agents: tuple[str, ...]
    interval: tuple[float, float] | None = None


def check_feasibility(scene: Scene, plan: ActionPlan) -> list[PredictedConflict]:
    """Static occupancy estimate: overlapping claims and grabbed-object reuse.

    Per agent, cumulative time advances by straight-line travel time plus
    interaction duration; every interacting destination claims its object
    for [arrival, arrival + duration). Cross-agent overlapping claims on
    the same object and any reuse of a grabbed object are flagged. An empty
    result guarantees that ``simulate(policy="fail")`` completes, since the
    estimate uses the same kinematics the simulator executes.
    """
    agents = scene.agent_map()
    objects = scene.object_map()
    claims: dict[str, list[tuple[float, float, str]]] = {}
    references: dict[str, list[str]] = {}
    grabbed: set[str] = set()

    for entry in plan.entries:
        agent = agents.get(entry.agent_id)
        if agent is None:
            raise ValueError(f"plan references unknown agent {entry.agent_id}")
        clock = 0.0
        position = agent.position
        for dest in entry.destinations:
            obj = objects.get(dest.object_id)
            if obj is None:
                raise ValueError(f"plan references unknown object {dest.object_id}")
            arrival = clock + distance_xz(position, obj.position) / dest.speed
            if dest.interact:
                claims.setdefault(obj.id, []).append(
                    (arrival, arrival + dest.duration, entry.agent_id))
            references.setdefault(obj.id, []).append(entry.agent_id)
            if dest.grab:
                grabbed.add(obj.id)
            clock = arrival + dest.duration
            position = obj.position

    conflicts: list[PredictedConflict] = []
    for object_id in sorted(claims):
        intervals = claims[object_id]
        for i in range(len(intervals)):
            for j in range(i + 1, len(intervals)):
                a_start, a_end, a_agent = intervals[i]
                b_start, b_end, b_agent = intervals[j]
                if a_agent != b_agent and a_start < b_end and b_start < a_end:
                    conflicts.append(PredictedConflict(
                        kind="occupancy",
                        object_id=object_id,
                        agents=(a_agent, b_agent),
                        interval=(max(a_start, b_start), min(a_end, b_end)),
                    ))
    for object_id in sorted(grabbed):
        if len(references[object_id]) > 1:
            conflicts.append(PredictedConflict(
                kind="grabbed-reuse",
                object_id=object_id,
                agents=tuple(references[object_id]),
            ))
    return conflicts

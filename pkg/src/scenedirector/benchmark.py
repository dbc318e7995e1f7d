"""Provider benchmark harness: scenario classes, timed trials, statistics.

Five standard scenario classes scale the scene from one object and one
agent up to ten objects and five agents. For each class the scene is built
once, so every provider receives identical prompt text; providers are then
exercised sequentially for a fixed number of trials each. Trials record
end-to-end latency and a structural-validity report; only structurally
valid replies are retained for the statistics, though failed-trial
latencies are kept in the raw records for diagnostics.

A read-only reference dataset of previously published hosted-provider
latencies ships with the package for side-by-side display; nothing ever
asserts against it, since those magnitudes depend on live services.
"""

from __future__ import annotations

import csv
import io
import re
import random
import statistics
import time
from dataclasses import dataclass
from importlib import resources

from .director import ValidityReport, Violation, validate_text
from .gateway import GatewayError, ProviderConfig, generate, strip_code_fences
from .scene import AgentSpec, ObjectSpec, Scene, validate_scene

STANDARD_LABELS = ("1O-1A", "5O-1A", "5O-2A", "5O-5A", "10O-5A")

_LABEL_RE = re.compile(r"(\d+)O-(\d+)A\Z")

# Object catalog: name, capability flags, tags. Composition for a class is
# fixed (catalog order, cycled), only placement and ordering are seeded.
_CATALOG = (
    ("Light Switch", dict(basic=True), ("light", "switch", "toggle")),
    ("Chair", dict(stationary=True, stationary_compatible=True), ("chair", "sit", "relax")),
    ("Book", dict(grabbable=True), ("book", "read", "carry")),
    ("Computer", dict(stationary=True), ("work", "desktop", "office work")),
    ("Plant", dict(), ("plant", "decor", "look at")),
    ("Bed", dict(stationary=True), ("bed", "sleep", "rest")),
    ("Box", dict(grabbable=True), ("box", "carry", "storage")),
    ("Couch", dict(stationary=True, stationary_compatible=True), ("couch", "sit", "lounge")),
)

_AGENT_ROSTER = (
    ("Guy", ("male", "college student", "casual")),
    ("Mia", ("female", "worker", "focused")),
    ("Sam", ("nonbinary", "artist", "curious")),
    ("Ava", ("female", "athlete", "energetic")),
    ("Leo", ("male", "retiree", "calm")),
    ("Zoe", ("female", "student", "playful")),
    ("Max", ("male", "engineer", "tidy")),
)


@dataclass(frozen=True)
class ScenarioClass:
    """One benchmark configuration, named by its object and agent counts."""

    label: str
    object_count: int
    agent_count: int
    layout_seed: int = 0

    def __post_init__(self):
        match = _LABEL_RE.fullmatch(self.label)
        if not match:
            raise ValueError(f"scenario label {self.label!r} must look like '5O-2A'")
        objects, agents = int(match.group(1)), int(match.group(2))
        if (objects, agents) != (self.object_count, self.agent_count):
            raise ValueError(
                f"label {self.label!r} implies {objects} objects / {agents} agents, "
                f"got {self.object_count}/{self.agent_count}"
            )

    @classmethod
    def from_label(cls, label: str, layout_seed: int = 0) -> "ScenarioClass":
        match = _LABEL_RE.fullmatch(label)
        if not match:
            raise ValueError(f"scenario label {label!r} must look like '5O-2A'")
        return cls(label, int(match.group(1)), int(match.group(2)), layout_seed)


def standard_classes(layout_seed: int = 0) -> list[ScenarioClass]:
    return [ScenarioClass.from_label(label, layout_seed) for label in STANDARD_LABELS]


def build_scenario(scenario: ScenarioClass) -> Scene:
    """Deterministically lay out a scene for a scenario class.

    The same (label, layout_seed) pair always yields the identical scene:
    the RNG is seeded from both, positions land on a bounded plane and are
    rounded to the two decimals the description format renders.
    """
    rng = random.Random(f"{scenario.label}:{scenario.layout_seed}")

    def place() -> tuple[float, float, float]:
        return (
            round(rng.uniform(-8.0, 8.0), 2),
            round(rng.uniform(0.1, 0.3), 2),
            round(rng.uniform(-8.0, 8.0), 2),
        )

    agents = []
    for i in range(scenario.agent_count):
        name, tags = _AGENT_ROSTER[i % len(_AGENT_ROSTER)]
        agents.append(AgentSpec(name=name, id=f"A_{i + 1}", tags=tags, position=place()))

    picks = [_CATALOG[i % len(_CATALOG)] for i in range(scenario.object_count)]
    rng.shuffle(picks)
    objects = []
    for i, (name, flags, tags) in enumerate(picks):
        objects.append(ObjectSpec(id=f"Obj_{i + 1}", name=name, tags=tags,
                                  position=place(), **flags))

    scene = Scene(agents=tuple(agents), objects=tuple(objects))
    assert not validate_scene(scene)
    return scene


@dataclass(frozen=True)
class BenchmarkRecord:
    """One timed trial of one provider on one scenario."""

    provider: str
    scenario: str
    trial: int
    latency: float
    validity: ValidityReport
    retained: bool


@dataclass(frozen=True)
class BenchmarkStats:
    """Descriptive statistics for one provider x scenario cell."""

    provider: str
    scenario: str
    mean: float | None
    sd: float | None
    trial_count: int
    retained_count: int
    validity_rate: float
    single_sample: bool = False


def run_benchmark(providers: list[ProviderConfig], classes: list[ScenarioClass],
                  trials: int, mode: str = "lenient") -> list[BenchmarkRecord]:
    """Issue ``trials`` generation calls per provider per scenario class.

    The scene for each class is built once and shared across providers.
    Provider failures never abort the sweep: they become non-retained
    records whose latency is the elapsed time of the failed attempt.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    records: list[BenchmarkRecord] = []
    for scenario in classes:
        scene = build_scenario(scenario)
        for config in providers:
            for trial in range(trials):
                started = time.perf_counter()
                try:
                    result = generate(config, scene)
                except GatewayError as exc:
                    elapsed = time.perf_counter() - started
                    report = ValidityReport(
                        parse_ok=False,
                        violations=(Violation("error", "provider-error", str(exc), config.provider),),
                    )
                    records.append(BenchmarkRecord(
                        provider=config.provider, scenario=scenario.label, trial=trial,
                        latency=elapsed, validity=report, retained=False,
                    ))
                    continue
                cleaned, _ = strip_code_fences(result.raw_text)
                report, _ = validate_text(cleaned, scene, mode=mode)
                records.append(BenchmarkRecord(
                    provider=config.provider, scenario=scenario.label, trial=trial,
                    latency=result.latency, validity=report,
                    retained=report.is_structurally_valid,
                ))
    return records


def _scenario_sort_key(label: str) -> tuple[int, int, str]:
    match = _LABEL_RE.fullmatch(label)
    if match:
        return (int(match.group(1)), int(match.group(2)), label)
    return (1 << 30, 1 << 30, label)


def summarize(records: list[BenchmarkRecord]) -> list[BenchmarkStats]:
    """Per (provider, scenario) cell: mean/SD over retained trials only.

    SD is the sample standard deviation (n-1 denominator); a single
    retained trial reports sd=0 with the ``single_sample`` flag set. Output
    order is sorted, so the result is invariant under record permutation.
    """
    cells: dict[tuple[str, str], list[BenchmarkRecord]] = {}
    for record in records:
        cells.setdefault((record.provider, record.scenario), []).append(record)

    stats: list[BenchmarkStats] = []
    for provider, scenario in sorted(
        cells, key=lambda key: (key[0], _scenario_sort_key(key[1]))
    ):
        group = cells[(provider, scenario)]
        retained = [r.latency for r in group if r.retained]
        if not retained:
            mean = sd = None
            single = False
        elif len(retained) == 1:
            mean, sd, single = retained[0], 0.0, True
        else:
            mean, sd, single = statistics.mean(retained), statistics.stdev(retained), False
        stats.append(BenchmarkStats(
            provider=provider,
            scenario=scenario,
            mean=mean,
            sd=sd,
            trial_count=len(group),
            retained_count=len(retained),
            validity_rate=len(retained) / len(group),
            single_sample=single,
        ))
    return stats


# -- report output --------------------------------------------------------------

def records_to_csv(records: list[BenchmarkRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["provider", "scenario", "trial", "latency_s", "valid", "retained"])
    for r in records:
        writer.writerow([
            r.provider, r.scenario, r.trial, f"{r.latency:.6f}",
            str(r.validity.is_structurally_valid).lower(), str(r.retained).lower(),
        ])
    return buffer.getvalue()


def _fmt(value: float | None) -> str:
    return f"{value:.2f}" if value is not None else "-"


def stats_to_markdown(stats: list[BenchmarkStats], include_reference: bool = True) -> str:
    """Markdown table of mean/SD per provider per scenario.

    Layout mirrors the reference dataset: one row per scenario, an M and an
    SD column per provider, optionally followed by the published reference
    numbers for side-by-side reading.
    """
    providers = sorted({s.provider for s in stats})
    scenarios = sorted({s.scenario for s in stats}, key=_scenario_sort_key)
    by_cell = {(s.provider, s.scenario): s for s in stats}

    lines = ["# Benchmark report", "", "Response time (in seconds) per scenario and provider.", ""]
    header = "| Scenario | " + " | ".join(f"{p} M | {p} SD" for p in providers) + " |"
    rule = "|" + "---|" * (1 + 2 * len(providers))
    lines += [header, rule]
    for scenario in scenarios:
        row = [scenario]
        for provider in providers:
            cell = by_cell.get((provider, scenario))
            row += [_fmt(cell.mean), _fmt(cell.sd)] if cell else ["-", "-"]
        lines.append("| " + " | ".join(row) + " |")
    lines += ["", "## Validity", "", "| Provider | Scenario | Trials | Retained | Validity rate |",
              "|---|---|---|---|---|"]
    for s in stats:
        lines.append(f"| {s.provider} | {s.scenario} | {s.trial_count} | "
                     f"{s.retained_count} | {s.validity_rate:.2f} |")
    if include_reference:
        lines += ["", reference_markdown().rstrip()]
    lines += ["", "SD is the sample standard deviation (n-1 denominator); "
              "single-trial cells report SD 0.", ""]
    return "\n".join(lines)


def load_reference_table() -> list[dict]:
    """Published hosted-provider latencies bundled as a read-only dataset."""
    text = (
        resources.files("scenedirector")
        .joinpath("data/reference_latencies.csv")
        .read_text(encoding="utf-8")
    )
    return list(csv.DictReader(io.StringIO(text)))


def reference_markdown() -> str:
    rows = load_reference_table()
    providers = sorted({r["provider"] for r in rows})
    scenarios = sorted({r["scenario"] for r in rows}, key=_scenario_sort_key)
    by_cell = {(r["provider"], r["scenario"]): r for r in rows}
    lines = ["## Reference (published hosted-provider latencies, not locally reproducible)", ""]
    lines.append("| Scenario | " + " | ".join(f"{p} M | {p} SD" for p in providers) + " |")
    lines.append("|" + "---|" * (1 + 2 * len(providers)))
    for scenario in scenarios:
        row = [scenario]
        for provider in providers:
            ref = by_cell[(provider, scenario)]
            row += [ref["mean_s"], ref["sd_s"]]
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"

"""Command-line entry point exposing the pipeline and each stage.

Subcommands::

    validate   check a scene file against the model invariants
    serialize  print the plain-language scene description
    generate   request a plan string from a provider (or the mock)
    parse      parse a plan file and validate it against a scene
    simulate   execute a plan file and emit the trace / timeline
    run        full pipeline: load -> serialize -> generate -> parse ->
               validate -> simulate, writing all artifacts to a directory
    bench      timed provider sweep over scenario classes
    estimate   scenario-count estimate for (m, v, d, n)

Exit codes::

    0   success
    2   usage error (bad flags)
    3   configuration error (provider config, scenario labels)
    10  I/O failure (missing or unreadable file)
    11  scene file syntax error
    12  scene invariant violation
    13  provider/generation failure
    14  plan parse failure
    15  plan structurally invalid
    16  simulation failure (occupancy conflict or destroyed-object reuse)

Provider API keys are read from environment variables named in the
provider config, never from flags. The config file path comes from
``--config`` or the SCENE_DIRECTOR_CONFIG environment variable.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import benchmark as bench_mod
from .director import PlanError, parse_plan, validate_text
from .gateway import (
    GatewayError,
    ProviderConfig,
    default_config,
    generate,
    load_provider_configs,
    strip_code_fences,
)
from .scene import (
    Scene,
    ScenarioParams,
    SceneFormatError,
    SceneInvariantError,
    estimate_scenarios,
    load_scene,
    validate_scene,
)
from .serializer import serialize_scene
from .simulator import SimulationError, simulate, write_trace
from .timeline import render_timeline

EXIT_OK = 0
EXIT_CONFIG = 3
EXIT_IO = 10
EXIT_SCENE_SYNTAX = 11
EXIT_SCENE_INVARIANT = 12
EXIT_GENERATION = 13
EXIT_PLAN_PARSE = 14
EXIT_PLAN_INVALID = 15
EXIT_SIMULATION = 16

CONFIG_ENV_VAR = "SCENE_DIRECTOR_CONFIG"


class _CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _fail(code: int, message: str) -> "_CliFailure":
    return _CliFailure(code, message)


def _load_scene(path: str) -> Scene:
    try:
        return load_scene(path)
    except SceneInvariantError as exc:
        raise _fail(EXIT_SCENE_INVARIANT, f"invalid scene {path}: {exc}") from exc
    except SceneFormatError as exc:
        raise _fail(EXIT_SCENE_SYNTAX, f"unreadable scene {path}: {exc}") from exc
    except OSError as exc:
        raise _fail(EXIT_IO, f"cannot read scene file {path}: {exc}") from exc


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _fail(EXIT_IO, f"cannot read {path}: {exc}") from exc


def _resolve_provider(name: str, config_path: str | None) -> ProviderConfig:
    path = config_path or os.environ.get(CONFIG_ENV_VAR)
    if path:
        try:
            configs = load_provider_configs(path)
        except OSError as exc:
            raise _fail(EXIT_IO, f"cannot read provider config {path}: {exc}") from exc
        except (ValueError, TypeError) as exc:
            raise _fail(EXIT_CONFIG, f"bad provider config {path}: {exc}") from exc
        if name in configs:
            return configs[name]
    try:
        return default_config(name)
    except ValueError as exc:
        raise _fail(EXIT_CONFIG, str(exc)) from exc


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- subcommands ---------------------------------------------------------------

def cmd_validate(args) -> int:
    try:
        scene = load_scene(args.scene)
    except SceneInvariantError as exc:
        for violation in exc.violations:
            print(violation)
        return EXIT_SCENE_INVARIANT
    except SceneFormatError as exc:
        print(f"unreadable scene {args.scene}: {exc}")
        return EXIT_SCENE_SYNTAX
    except OSError as exc:
        print(f"cannot read scene file {args.scene}: {exc}")
        return EXIT_IO
    violations = validate_scene(scene)
    for violation in violations:
        print(violation)
    if violations:
        return EXIT_SCENE_INVARIANT
    print(f"ok: {len(scene.agents)} agent(s), {len(scene.objects)} object(s)")
    return EXIT_OK


def cmd_serialize(args) -> int:
    scene = _load_scene(args.scene)
    _write_or_print(serialize_scene(scene).text, args.out)
    return EXIT_OK


def cmd_generate(args) -> int:
    scene = _load_scene(args.scene)
    config = _resolve_provider(args.provider, args.config)
    try:
        result = generate(config, scene)
    except GatewayError as exc:
        raise _fail(EXIT_GENERATION, f"generation failed: {exc}") from exc
    except ValueError as exc:
        raise _fail(EXIT_SCENE_INVARIANT, str(exc)) from exc
    print(f"latency: {result.latency:.3f}s  provider: {result.provider} "
          f"({result.model_name})", file=sys.stderr)
    _write_or_print(result.raw_text + ("\n" if not result.raw_text.endswith("\n") else ""),
                    args.out)
    return EXIT_OK


def cmd_parse(args) -> int:
    scene = _load_scene(args.scene)
    text, _ = strip_code_fences(_read_text(args.plan))
    mode = "strict" if args.strict else "lenient"
    report, _ = validate_text(text, scene, mode=mode)
    print(json.dumps(report.to_dict(), indent=2))
    if not report.parse_ok:
        return EXIT_PLAN_PARSE
    if not report.is_structurally_valid:
        return EXIT_PLAN_INVALID
    return EXIT_OK


def cmd_simulate(args) -> int:
    scene = _load_scene(args.scene)
    text, _ = strip_code_fences(_read_text(args.plan))
    try:
        plan = parse_plan(text)
    except PlanError as exc:
        raise _fail(EXIT_PLAN_PARSE, f"cannot parse plan: {exc}") from exc
    try:
        trace = simulate(scene, plan, policy=args.policy)
    except SimulationError as exc:
        raise _fail(EXIT_SIMULATION, f"simulation failed: {exc}") from exc
    except ValueError as exc:
        raise _fail(EXIT_PLAN_INVALID, str(exc)) from exc
    if args.timeline:
        _write_or_print(render_timeline(trace, format=args.timeline), args.out)
    else:
        _write_or_print(trace.to_jsonl(), args.out)
    return EXIT_OK


def cmd_run(args) -> int:
    scene = _load_scene(args.scene)
    config = _resolve_provider(args.provider, args.config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    description = serialize_scene(scene)
    (out_dir / "scene_description.txt").write_text(description.text, encoding="utf-8")

    try:
        result = generate(config, scene)
    except GatewayError as exc:
        raise _fail(EXIT_GENERATION, f"generation failed: {exc}") from exc
    raw = result.raw_text
    (out_dir / "reply.txt").write_text(raw + ("" if raw.endswith("\n") else "\n"),
                                       encoding="utf-8")

    text, _ = strip_code_fences(raw)
    mode = "strict" if args.strict else "lenient"
    report, plan = validate_text(text, scene, mode=mode)
    payload = report.to_dict()
    payload["provider"] = result.provider
    payload["latency_s"] = result.latency
    (out_dir / "validity.json").write_text(json.dumps(payload, indent=2) + "\n",
                                           encoding="utf-8")
    if plan is None:
        print(f"reply did not parse; see {out_dir / 'validity.json'}", file=sys.stderr)
        return EXIT_PLAN_PARSE
    if not report.is_structurally_valid:
        print(f"reply is structurally invalid; see {out_dir / 'validity.json'}",
              file=sys.stderr)
        return EXIT_PLAN_INVALID

    try:
        trace = simulate(scene, plan, policy=args.policy)
    except SimulationError as exc:
        raise _fail(EXIT_SIMULATION, f"simulation failed: {exc}") from exc
    write_trace(trace, out_dir / "trace.jsonl")
    suffix = "svg" if args.timeline == "svg" else "txt"
    (out_dir / f"timeline.{suffix}").write_text(
        render_timeline(trace, format=args.timeline), encoding="utf-8")
    print(f"ok: wrote artifacts to {out_dir}", file=sys.stderr)
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.trials < 1:
        raise _fail(EXIT_CONFIG, f"--trials must be >= 1, got {args.trials}")
    providers = [_resolve_provider(name, args.config) for name in args.provider]
    if not providers:
        raise _fail(EXIT_CONFIG, "at least one --provider is required")
    try:
        if args.classes == "all":
            classes = bench_mod.standard_classes(args.seed)
        else:
            classes = [bench_mod.ScenarioClass.from_label(label.strip(), args.seed)
                       for label in args.classes.split(",") if label.strip()]
    except ValueError as exc:
        raise _fail(EXIT_CONFIG, str(exc)) from exc
    if not classes:
        raise _fail(EXIT_CONFIG, "at least one scenario class is required")

    mode = "strict" if args.strict else "lenient"
    records = bench_mod.run_benchmark(providers, classes, args.trials, mode=mode)
    stats = bench_mod.summarize(records)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "records.csv").write_text(bench_mod.records_to_csv(records), encoding="utf-8")
    (out_dir / "report.md").write_text(bench_mod.stats_to_markdown(stats), encoding="utf-8")
    failed = sum(1 for r in records if not r.retained)
    print(f"{len(records)} trial(s), {failed} not retained; report in {out_dir}",
          file=sys.stderr)
    return EXIT_OK


def cmd_estimate(args) -> int:
    try:
        params = ScenarioParams(m=args.m, v=args.v, d=args.d, n=args.n)
        total = estimate_scenarios(params)
    except ValueError as exc:
        raise _fail(EXIT_CONFIG, str(exc)) from exc
    print(total)
    return EXIT_OK


# -- argument wiring -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scenedirector",
        description="Scene-to-behavior pipeline: describe a scene, obtain an "
                    "action plan from a language-model provider, validate it, "
                    "and execute it in a discrete-event simulator.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="enable info logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scene file")
    p.add_argument("--scene", required=True, help="scene JSON file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("serialize", help="print the plain-language scene description")
    p.add_argument("--scene", required=True, help="scene JSON file")
    p.add_argument("--out", help="write to file instead of stdout")
    p.set_defaults(func=cmd_serialize)

    p = sub.add_parser("generate", help="request a plan string from a provider")
    p.add_argument("--scene", required=True, help="scene JSON file")
    p.add_argument("--provider", required=True, help="provider name (or 'mock')")
    p.add_argument("--config", help=f"providers.toml path (or ${CONFIG_ENV_VAR})")
    p.add_argument("--out", help="write raw reply to file instead of stdout")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("parse", help="parse a plan file and validate against a scene")
    p.add_argument("--plan", required=True, help="file holding the plan string")
    p.add_argument("--scene", required=True, help="scene JSON file")
    p.add_argument("--strict", action="store_true",
                   help="treat duration/speed range violations as errors")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("simulate", help="execute a plan file over a scene")
    p.add_argument("--scene", required=True, help="scene JSON file")
    p.add_argument("--plan", required=True, help="file holding the plan string")
    p.add_argument("--policy", choices=("wait", "fail"), default="wait",
                   help="conflict handling (default: wait)")
    p.add_argument("--timeline", choices=("svg", "text"),
                   help="emit a timeline document instead of the JSONL trace")
    p.add_argument("--out", help="write output to file instead of stdout")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("run", help="full pipeline into an output directory")
    p.add_argument("--scene", required=True, help="scene JSON file")
    p.add_argument("--provider", required=True, help="provider name (or 'mock')")
    p.add_argument("--out", required=True, help="output directory for artifacts")
    p.add_argument("--policy", choices=("wait", "fail"), default="wait",
                   help="conflict handling (default: wait)")
    p.add_argument("--strict", action="store_true",
                   help="treat duration/speed range violations as errors")
    p.add_argument("--timeline", choices=("svg", "text"), default="svg",
                   help="timeline artifact format (default: svg)")
    p.add_argument("--config", help=f"providers.toml path (or ${CONFIG_ENV_VAR})")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="timed provider sweep over scenario classes")
    p.add_argument("--provider", action="append", default=[], required=False,
                   help="provider name; repeat for several")
    p.add_argument("--classes", default="all",
                   help="comma-separated scenario labels, or 'all' (default)")
    p.add_argument("--trials", type=int, default=5, help="trials per provider per class")
    p.add_argument("--seed", type=int, default=0, help="layout seed for scenario scenes")
    p.add_argument("--strict", action="store_true",
                   help="strict validity for retention decisions")
    p.add_argument("--out", required=True, help="output directory for CSV and report")
    p.add_argument("--config", help=f"providers.toml path (or ${CONFIG_ENV_VAR})")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("estimate", help="scenario-count estimate (m*v*d)**n")
    p.add_argument("--m", type=int, required=True, help="interactable object count")
    p.add_argument("--v", type=int, required=True, help="spatial/contextual variants per object")
    p.add_argument("--d", type=int, required=True, help="duration/timing variations")
    p.add_argument("--n", type=int, required=True, help="agent count")
    p.set_defaults(func=cmd_estimate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except _CliFailure as failure:
        print(f"error: {failure}", file=sys.stderr)
        return failure.code


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

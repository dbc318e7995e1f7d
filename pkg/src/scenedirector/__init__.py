"""Scene-to-behavior pipeline.

Compose a scene of agents and interactable objects, serialize it into a
plain-language description, obtain an action-plan string from a language
model provider (or a deterministic mock), parse and validate the plan, and
execute it in a discrete-event simulator. A benchmark harness measures
provider latency and structural validity over standard scenario classes.
"""

from .scene import (
    AgentSpec,
    ObjectSpec,
    ScenarioParams,
    Scene,
    SceneError,
    SceneFormatError,
    SceneInvariantError,
    estimate_scenarios,
    load_scene,
    save_scene,
    scene_from_dict,
    scene_to_dict,
    validate_scene,
)
from .serializer import SceneDescription, format_position, serialize_scene
from .director import (
    ActionPlan,
    AgentPlan,
    Destination,
    PlanError,
    PlanInvariantError,
    PlanSyntaxError,
    ValidityReport,
    Violation,
    emit_plan,
    parse_plan,
    validate_plan,
    validate_text,
)
from .gateway import (
    GatewayError,
    GenerationResult,
    MissingCredentialError,
    ProviderConfig,
    ProviderRequestError,
    build_prompt,
    build_request,
    default_config,
    extract_text,
    generate,
    generate_with_retries,
    load_provider_configs,
    load_system_prompt,
    mock_plan,
    strip_code_fences,
    system_prompt_sha256,
)
from .simulator import (
    AgentState,
    ConflictRecord,
    ObjectUnavailableError,
    OccupancyConflictError,
    PredictedConflict,
    SimEvent,
    SimTrace,
    SimulationError,
    check_feasibility,
    distance_xz,
    simulate,
    write_trace,
)
from .timeline import render_timeline
from .benchmark import (
    BenchmarkRecord,
    BenchmarkStats,
    ScenarioClass,
    STANDARD_LABELS,
    build_scenario,
    load_reference_table,
    run_benchmark,
    standard_classes,
    stats_to_markdown,
    summarize,
)

__version__ = "0.1.0"

__all__ = [
    "AgentSpec", "ObjectSpec", "Scene", "ScenarioParams", "SceneError",
    "SceneFormatError", "SceneInvariantError", "estimate_scenarios", "load_scene",
    "save_scene", "scene_from_dict", "scene_to_dict", "validate_scene",
    "SceneDescription", "format_position", "serialize_scene",
    "ActionPlan", "AgentPlan", "Destination", "PlanError", "PlanInvariantError",
    "PlanSyntaxError", "ValidityReport", "Violation", "emit_plan", "parse_plan",
    "validate_plan", "validate_text",
    "GatewayError", "GenerationResult", "MissingCredentialError", "ProviderConfig",
    "ProviderRequestError", "build_prompt", "build_request", "default_config",
    "extract_text", "generate", "generate_with_retries", "load_provider_configs",
    "load_system_prompt", "mock_plan", "strip_code_fences", "system_prompt_sha256",
    "AgentState", "ConflictRecord", "ObjectUnavailableError", "OccupancyConflictError",
    "PredictedConflict", "SimEvent", "SimTrace", "SimulationError", "check_feasibility",
    "distance_xz", "simulate", "write_trace",
    "render_timeline",
    "BenchmarkRecord", "BenchmarkStats", "ScenarioClass", "STANDARD_LABELS",
    "build_scenario", "load_reference_table", "run_benchmark", "standard_classes",
    "stats_to_markdown", "summarize",
]

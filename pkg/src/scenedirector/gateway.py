"""Provider gateway: prompt assembly, chat-completion dispatch, mock planner.

The gateway normalizes four hosted chat-completion APIs (chatgpt, claude,
gemini, grok) and a deterministic local mock to one contract: a (system
message, user message) pair goes in, reply text and a wall-clock latency
come out. Requests are one-shot; there is no retry or backoff on the
timed path. Vendor-specific wire shapes live in ``build_request`` /
``extract_text`` so they can be unit-tested without network access.

The mock provider is the test oracle for the whole pipeline: it produces
plans that are valid by construction (capability-matched flags, in-range
durations and speeds, no grabbed-object reuse, no overlapping occupancy
under the static timeline estimate), optionally after a configurable
artificial delay so latency plumbing can be exercised.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import random
import re
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

import requests

from .director import ActionPlan, AgentPlan, Destination, emit_plan
from .scene import Scene, validate_scene
from .serializer import SceneDescription, serialize_scene
from .simulator import distance_xz

log = logging.getLogger(__name__)

PROVIDERS = ("chatgpt", "claude", "gemini", "grok", "mock")

DEFAULT_MODELS = {
    "chatgpt": "gpt-4.1-mini",
    "claude": "claude-sonnet-4-5",
    "gemini": "gemini-2.5-flash",
    "grok": "grok-4-1-fast",
    "mock": "mock",
}

DEFAULT_ENDPOINTS = {
    "chatgpt": "https://api.openai.com/v1/chat/completions",
    "claude": "https://api.anthropic.com/v1/messages",
    "gemini": "https://generativelanguage.googleapis.com/v1beta/models",
    "grok": "https://api.x.ai/v1/chat/completions",
    "mock": "",
}

DEFAULT_KEY_VARS = {
    "chatgpt": "OPENAI_API_KEY",
    "claude": "ANTHROPIC_API_KEY",
    "gemini": "GEMINI_API_KEY",
    "grok": "XAI_API_KEY",
}


class GatewayError(Exception):
    """Base class for provider gateway failures."""


class MissingCredentialError(GatewayError):
    """The environment variable named by the config holds no API key."""


class ProviderRequestError(GatewayError):
    """Network failure, timeout, or non-2xx provider response."""


@dataclass(frozen=True)
class ProviderConfig:
    """How to reach one provider. Credentials are named, never stored."""

    provider: str
    model_name: str = ""
    endpoint: str = ""
    api_key_ref: str | None = None
    timeout: float = 120.0
    mock_latency: float | None = None
    mock_seed: int | None = None
    max_tokens: int | None = None
    temperature: float | None = None
    debug_log: str | None = None

    def __post_init__(self):
        if self.provider not in PROVIDERS:
            raise ValueError(f"unknown provider {self.provider!r}; expected one of {PROVIDERS}")
        if not self.timeout > 0:
            raise ValueError(f"timeout must be > 0, got {self.timeout}")
        if self.provider != "mock" and not self.api_key_ref:
            raise ValueError(f"provider {self.provider!r} requires api_key_ref")


def default_config(provider: str, **overrides) -> ProviderConfig:
    """A ready-to-use config for a provider with stock endpoint and model."""
    fields = {
        "provider": provider,
        "model_name": DEFAULT_MODELS.get(provider, ""),
        "endpoint": DEFAULT_ENDPOINTS.get(provider, ""),
        "api_key_ref": DEFAULT_KEY_VARS.get(provider),
    }
    fields.update(overrides)
    return ProviderConfig(**fields)


def load_provider_configs(path: str | Path) -> dict[str, ProviderConfig]:
    """Read a providers.toml file: one table per provider entry.

    Table names double as provider names unless the table sets an explicit
    ``provider`` field; all other fields override the stock defaults.
    """
    try:
        import tomllib  # Python >= 3.11
    except ImportError:
        import tomli as tomllib
    with open(path, "rb") as handle:
        data = tomllib.load(handle)
    configs = {}
    for name, table in data.items():
        if not isinstance(table, dict):
            raise ValueError(f"{path}: entry {name!r} must be a table")
        provider = table.pop("provider", name)
        configs[name] = default_config(provider, **table)
    return configs


@dataclass(frozen=True)
class GenerationResult:
    """One provider reply with its end-to-end latency."""

    raw_text: str
    latency: float
    provider: str
    model_name: str
    timestamp: datetime


# -- prompt assembly ----------------------------------------------------------

def load_system_prompt() -> str:
    """The behavioral system prompt, shipped as a versioned resource."""
    return (
        resources.files("scenedirector")
        .joinpath("prompts/system_prompt.txt")
        .read_text(encoding="utf-8")
    )


def system_prompt_sha256() -> str:
    """Content hash of the system prompt; pinned in tests to catch drift."""
    return hashlib.sha256(load_system_prompt().encode("utf-8")).hexdigest()


def build_prompt(description: SceneDescription) -> tuple[str, str]:
    """Assemble the (system, user) message pair for a chat completion.

    The system text is scene-independent; the user text is the serialized
    scene description verbatim.
    """
    if not description.text.strip():
        raise ValueError("scene description must be non-empty")
    return load_system_prompt(), description.text


# -- vendor wire adapters -----------------------------------------------------

@dataclass(frozen=True)
class WireRequest:
    url: str
    headers: dict
    body: dict


def build_request(config: ProviderConfig, system_text: str, user_text: str,
                  api_key: str) -> WireRequest:
    """Map the common message pair onto one vendor's request shape."""
    if config.provider in ("chatgpt", "grok"):
        body = {
            "model": config.model_name,
            "messages": [
                {"role": "system", "content": system_text},
                {"role": "user", "content": user_text},
            ],
        }
        if config.max_tokens is not None:
            body["max_tokens"] = config.max_tokens
        if config.temperature is not None:
            body["temperature"] = config.temperature
        return WireRequest(
            url=config.endpoint,
            headers={"Authorization": f"Bearer {api_key}", "Content-Type": "application/json"},
            body=body,
        )
    if config.provider == "claude":
        body = {
            "model": config.model_name,
            "max_tokens": config.max_tokens if config.max_tokens is not None else 1024,
            "system": system_text,
            "messages": [{"role": "user", "content": user_text}],
        }
        if config.temperature is not None:
            body["temperature"] = config.temperature
        return WireRequest(
            url=config.endpoint,
            headers={
                "x-api-key": api_key,
                "anthropic-version": "2023-06-01",
                "content-type": "application/json",
            },
            body=body,
        )
    if config.provider == "gemini":
        body = {
            "system_instruction": {"parts": [{"text": system_text}]},
            "contents": [{"role": "user", "parts": [{"text": user_text}]}],
        }
        if config.temperature is not None:
            body["generationConfig"] = {"temperature": config.temperature}
        return WireRequest(
            url=f"{config.endpoint.rstrip('/')}/{config.model_name}:generateContent",
            headers={"x-goog-api-key": api_key, "Content-Type": "application/json"},
            body=body,
        )
    raise ValueError(f"provider {config.provider!r} has no wire adapter")


def extract_text(provider: str, payload: dict) -> str:
    """Pull the reply text out of one vendor's response payload."""
    try:
        if provider in ("chatgpt", "grok"):
            return payload["choices"][0]["message"]["content"]
        if provider == "claude":
            return "".join(
                block["text"] for block in payload["content"] if block.get("type") == "text"
            )
        if provider == "gemini":
            parts = payload["candidates"][0]["content"]["parts"]
            return "".join(part.get("text", "") for part in parts)
    except (KeyError, IndexError, TypeError) as exc:
        raise ProviderRequestError(
            f"{provider} response payload has unexpected shape: {_excerpt(payload)}"
        ) from exc
    raise ValueError(f"provider {provider!r} has no wire adapter")


def _excerpt(payload, limit: int = 400) -> str:
    text = payload if isinstance(payload, str) else json.dumps(payload, default=str)
    return text[:limit]


_FENCE_RE = re.compile(r"\A```[A-Za-z0-9_-]*\s*\n(.*?)\n?```\s*\Z", re.DOTALL)


def strip_code_fences(text: str) -> tuple[str, bool]:
    """Remove surrounding whitespace and one Markdown code fence, if present.

    Returns the cleaned text and whether a fence was actually stripped.
    """
    cleaned = text.strip()
    match = _FENCE_RE.match(cleaned)
    if match:
        log.info("stripped a Markdown code fence from provider reply")
        return match.group(1).strip(), True
    return cleaned, False


# -- generation ---------------------------------------------------------------

def generate(config: ProviderConfig, scene: Scene) -> GenerationResult:
    """Serialize the scene, send one chat-completion request, time it.

    Latency covers request send to full response receipt. The scene is
    never mutated; repeated mock generation with equal inputs yields
    byte-identical text.
    """
    violations = validate_scene(scene)
    if violations:
        raise ValueError(f"cannot generate from invalid scene: {violations[0]}")
    if not scene.agents or not scene.objects:
        raise ValueError("generation needs at least one agent and one object in the scene")

    system_text, user_text = build_prompt(serialize_scene(scene))

    if config.provider == "mock":
        started = time.perf_counter()
        if config.mock_latency:
            time.sleep(config.mock_latency)
        text = mock_plan(scene, config.mock_seed or 0)
        latency = time.perf_counter() - started
        return GenerationResult(
            raw_text=text,
            latency=latency,
            provider=config.provider,
            model_name=config.model_name or "mock",
            timestamp=datetime.now(timezone.utc),
        )

    api_key = os.environ.get(config.api_key_ref or "")
    if not api_key:
        raise MissingCredentialError(
            f"environment variable {config.api_key_ref!r} is not set; "
            f"it must hold the {config.provider} API key"
        )
    request = build_request(config, system_text, user_text, api_key)

    started = time.perf_counter()
    try:
        response = requests.post(
            request.url, headers=request.headers, json=request.body, timeout=config.timeout
        )
    except requests.exceptions.Timeout as exc:
        raise ProviderRequestError(
            f"{config.provider} request timed out after {config.timeout}s"
        ) from exc
    except requests.exceptions.RequestException as exc:
        raise ProviderRequestError(f"{config.provider} request failed: {exc}") from exc
    latency = time.perf_counter() - started

    _debug_log(config, request, response)
    if response.status_code >= 400:
        raise ProviderRequestError(
            f"{config.provider} returned HTTP {response.status_code}: {_excerpt(response.text)}"
        )
    text = extract_text(config.provider, response.json())
    return GenerationResult(
        raw_text=text,
        latency=latency,
        provider=config.provider,
        model_name=config.model_name,
        timestamp=datetime.now(timezone.utc),
    )


def generate_with_retries(config: ProviderConfig, scene: Scene,
                          attempts: int = 3) -> GenerationResult:
    """Convenience wrapper retrying transient failures.

    Never used on benchmark timing paths, which are contractually one-shot.
    """
    last: Exception | None = None
    for _ in range(max(1, attempts)):
        try:
            return generate(config, scene)
        except ProviderRequestError as exc:
            last = exc
    raise last  # type: ignore[misc]


def _debug_log(config: ProviderConfig, request: WireRequest, response) -> None:
    if not config.debug_log:
        return
    record = {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "provider": config.provider,
        "url": request.url,
        "body": request.body,
        "status": response.status_code,
        "response": _excerpt(response.text, 2000),
    }
    with open(config.debug_log, "a", encoding="utf-8") as handle:
        handle.write(json.dumps(record) + "\n")


# -- deterministic mock planner -------------------------------------------------

_MOCK_SPEEDS = (1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0)
_MOCK_BASIC_DURATIONS = (3.0, 3.5, 4.0, 4.5, 5.0)


def mock_plan(scene: Scene, seed: int) -> str:
    """Deterministic stand-in for a model reply.

    Assigns each agent 1-3 destinations drawn from the scene, honoring every
    behavioral rule in strict form: flags match object capabilities, speeds
    sit in [1, 4], durations in [2, 16] (triggered basic interactions in
    [3, 5]), grabbed objects are used exactly once, and no two agents'
    estimated occupancy intervals overlap on the same object. When no
    interaction fits, the destination degrades to a plain walk-to visit,
    so valid scenes always yield a plan.
    """
    if not scene.agents or not scene.objects:
        raise ValueError("mock planning needs at least one agent and one object")

    rng = random.Random(seed)
    occupancy: dict[str, list[tuple[float, float]]] = {}
    grabbed: set[str] = set()
    referenced: set[str] = set()
    entries = []

    for agent_index, agent in enumerate(scene.agents):
        last_agent = agent_index == len(scene.agents) - 1
        clock = 0.0
        position = agent.position
        steps = rng.randint(1, min(3, len(scene.objects)))
        destinations: list[Destination] = []

        for step in range(steps):
            available = [o for o in scene.objects if o.id not in grabbed]
            if not available:  # unreachable thanks to the grab guard below
                break
            chosen: Destination | None = None
            for _ in range(8):
                obj = rng.choice(available)
                speed = rng.choice(_MOCK_SPEEDS)
                if obj.grabbable:
                    # A grab destroys the object: only take one nobody has
                    # referenced, and keep at least one usable object behind
                    # for everyone else.
                    if obj.id in referenced:
                        continue
                    if len(available) < 2 and not (last_agent and step == steps - 1):
                        continue
                    duration = float(rng.randint(2, 16))
                    dest = Destination(obj.id, interact=True, duration=duration,
                                       speed=speed, grab=True)
                elif obj.stationary:
                    duration = float(rng.randint(2, 16))
                    dest = Destination(obj.id, interact=True, duration=duration,
                                       speed=speed, stationary=True)
                elif obj.basic:
                    duration = rng.choice(_MOCK_BASIC_DURATIONS)
                    dest = Destination(obj.id, interact=True, duration=duration,
                                       speed=speed, basic=True)
                else:
                    duration = float(rng.randint(2, 16))
                    dest = Destination(obj.id, interact=False, duration=duration, speed=speed)

                arrival = clock + distance_xz(position, obj.position) / speed
                interval = (arrival, arrival + dest.duration)
                if dest.interact and not dest.grab and _overlaps(occupancy.get(obj.id, ()), interval):
                    continue
                if dest.grab:
                    grabbed.add(obj.id)
                if dest.interact:
                    occupancy.setdefault(obj.id, []).append(interval)
                referenced.add(obj.id)
                clock = interval[1]
                position = obj.position
                chosen = dest
                break

            if chosen is None:
                # Walk-to-only fallback: occupies nothing, always feasible.
                obj = rng.choice(available)
                speed = rng.choice(_MOCK_SPEEDS)
                duration = float(rng.randint(2, 16))
                chosen = Destination(obj.id, interact=False, duration=duration, speed=speed)
                referenced.add(obj.id)
                clock += distance_xz(position, obj.position) / speed + duration
                position = obj.position
            destinations.append(chosen)

        entries.append(AgentPlan(agent_id=agent.id, destinations=tuple(destinations)))

    return emit_plan(ActionPlan(entries=tuple(entries)))


def _overlaps(intervals, candidate: tuple[float, float]) -> bool:
    start, end = candidate
    return any(start < b and a < end for a, b in intervals)

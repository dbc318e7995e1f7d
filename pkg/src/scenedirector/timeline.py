"""Timeline rendering of simulation traces: one lane per agent.

Spans are reconstructed purely from the event stream (move_start/arrive
pairs and interact_start/interact_end pairs), instantaneous events become
point markers, so equal traces always render to identical documents.
"""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

from .simulator import SimTrace

_SPAN_FILL = {
    "move": "#cbd5e1",
    "normal": "#60a5fa",
    "grab": "#f59e0b",
    "stationary": "#34d399",
    "basic": "#a78bfa",
}
_MARKER_FILL = {
    "attach": "#b45309",
    "drop_destroy": "#dc2626",
    "toggle": "#7c3aed",
    "conflict": "#ef4444",
    "idle": "#64748b",
}


@dataclass(frozen=True)
class Span:
    kind: str  # "move" or an interaction kind
    start: float
    end: float
    object_id: str | None


@dataclass(frozen=True)
class Marker:
    kind: str
    time: float
    label: str


@dataclass(frozen=True)
class Lane:
    agent_id: str
    spans: tuple[Span, ...]
    markers: tuple[Marker, ...]


def extract_lanes(trace: SimTrace) -> list[Lane]:
    """Pair up start/end events per agent into renderable spans."""
    lanes = []
    for agent_id in trace.final_states:
        spans: list[Span] = []
        markers: list[Marker] = []
        move_from: tuple[float, str | None] | None = None
        interact_from: tuple[float, str | None, str] | None = None
        for event in trace.events_for(agent_id):
            if event.kind == "move_start":
                move_from = (event.time, event.object_id)
            elif event.kind == "arrive" and move_from is not None:
                spans.append(Span("move", move_from[0], event.time, event.object_id))
                move_from = None
            elif event.kind == "interact_start":
                interact_from = (event.time, event.object_id, event.detail or "normal")
            elif event.kind == "interact_end" and interact_from is not None:
                start, object_id, kind = interact_from
                spans.append(Span(kind, start, event.time, object_id))
                interact_from = None
            elif event.kind in _MARKER_FILL:
                label = f"{event.kind} {event.object_id}" if event.object_id else event.kind
                markers.append(Marker(event.kind, event.time, label))
        lanes.append(Lane(agent_id, tuple(spans), tuple(markers)))
    return lanes


def render_timeline(trace: SimTrace, format: str = "text") -> str:
    """Render a trace as a text table or a standalone SVG document."""
    if format == "text":
        return _render_text(trace)
    if format == "svg":
        return _render_svg(trace)
    raise ValueError(f"unsupported timeline format {format!r}; expected 'text' or 'svg'")


def _render_text(trace: SimTrace) -> str:
    lanes = extract_lanes(trace)
    lines = [f"timeline: {len(lanes)} lane(s), {len(trace.events)} event(s), "
             f"end t={trace.end_time():.3f}s"]
    for lane in lanes:
        lines.append(f"{lane.agent_id}:")
        items: list[tuple[float, int, str]] = []
        for span in lane.spans:
            target = f" {span.object_id}" if span.object_id else ""
            items.append((span.start, 0,
                          f"  [{span.start:9.3f} .. {span.end:9.3f}] {span.kind}{target}"))
        for marker in lane.markers:
            items.append((marker.time, 1, f"  @{marker.time:9.3f} {marker.label}"))
        items.sort(key=lambda item: (item[0], item[1]))
        lines.extend(text for _, _, text in items)
    return "\n".join(lines) + "\n"


def _render_svg(trace: SimTrace) -> str:
    lanes = extract_lanes(trace)
    lane_height, lane_gap, label_width, pad = 34, 10, 90, 20
    chart_width = 860
    end = max(trace.end_time(), 1e-9)
    width = label_width + chart_width + 2 * pad
    height = pad * 2 + max(len(lanes), 1) * (lane_height + lane_gap) + 30

    def x_of(t: float) -> float:
        return label_width + pad + (t / end) * chart_width

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace" font-size="11">',
        f'<text x="{pad}" y="14">agent timelines (t = 0 .. {end:.3f}s)</text>',
    ]
    for row, lane in enumerate(lanes):
        y = pad + 10 + row * (lane_height + lane_gap)
        parts.append(f'<text x="{pad}" y="{y + lane_height / 2 + 4}">'
                     f'{escape(lane.agent_id)}</text>')
        parts.append(
            f'<line x1="{x_of(0):.1f}" y1="{y + lane_height / 2:.1f}" '
            f'x2="{x_of(end):.1f}" y2="{y + lane_height / 2:.1f}" '
            f'stroke="#e2e8f0" stroke-width="1"/>'
        )
        for span in lane.spans:
            x = x_of(span.start)
            w = max(x_of(span.end) - x, 1.0)
            fill = _SPAN_FILL.get(span.kind, _SPAN_FILL["normal"])
            title = f"{span.kind} {span.object_id or ''} [{span.start:.3f}, {span.end:.3f}]"
            parts.append(
                f'<rect x="{x:.1f}" y="{y}" width="{w:.1f}" height="{lane_height}" '
                f'rx="3" fill="{fill}" class="span span-{span.kind}">'
                f"<title>{escape(title)}</title></rect>"
            )
        for marker in lane.markers:
            cx = x_of(marker.time)
            fill = _MARKER_FILL.get(marker.kind, "#334155")
            parts.append(
                f'<circle cx="{cx:.1f}" cy="{y + lane_height + 4}" r="3" fill="{fill}" '
                f'class="marker marker-{marker.kind}">'
                f"<title>{escape(marker.label)} @{marker.time:.3f}s</title></circle>"
            )
    axis_y = height - 18
    parts.append(f'<line x1="{x_of(0):.1f}" y1="{axis_y}" x2="{x_of(end):.1f}" y2="{axis_y}" '
                 f'stroke="#475569" stroke-width="1"/>')
    for i in range(11):
        t = end * i / 10
        parts.append(f'<text x="{x_of(t) - 8:.1f}" y="{axis_y + 14}" fill="#475569">'
                     f"{t:.1f}</text>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

"""Deterministic SVG rendering of deployments.

Points are drawn as small dots, candidate sites as star markers and each
trace's selected sites as disk outlines.  Layers get slightly different radii
so overlapping deployments of different algorithms stay visible.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from .coverage import Instance
from .errors import InstanceMismatchError
from .trace import SolutionTrace

COLORS = {"sg": "#d62728", "resque": "#ff7f0e", "random-rewire": "#2ca02c"}
FALLBACK_COLORS = ("#9467bd", "#8c564b", "#e377c2", "#17becf")
RADIUS_STEP = 0.04


def _fmt(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def _star(cx, cy, r):
    pts = []
    for k in range(10):
        rad = r if k % 2 == 0 else 0.45 * r
        a = math.pi / 2 + k * math.pi / 5
        pts.append(f"{_fmt(cx + rad * math.cos(a))},{_fmt(cy - rad * math.sin(a))}")
    return " ".join(pts)


def render_svg(instance: Instance, traces: Sequence[SolutionTrace], width: int = 800) -> str:
    if not traces:
        raise ValueError("at least one trace is required")
    for t in traces:
        if t.fingerprint != instance.fingerprint:
            raise InstanceMismatchError(f"trace for {t.algorithm!r} does not belong to this instance")

    layers = len(traces)
    pad_r = float(instance.radii.max()) * (1 + RADIUS_STEP * layers)
    xy = [instance.points, instance.sites]
    xmin = min(float(a[:, 0].min()) for a in xy) - pad_r
    xmax = max(float(a[:, 0].max()) for a in xy) + pad_r
    ymin = min(float(a[:, 1].min()) for a in xy) - pad_r
    ymax = max(float(a[:, 1].max()) for a in xy) + pad_r
    span = max(xmax - xmin, ymax - ymin, 1e-9)
    scale = width / span
    height = int(math.ceil((ymax - ymin) * scale))

    def tx(x):
        return (x - xmin) * scale

    def ty(y):
        return (ymax - y) * scale

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        '<g id="points" fill="#1f77b4">',
    ]
    dot = max(0.8, 0.002 * width)
    for x, y in instance.points.tolist():
        out.append(f'<circle class="point" cx="{_fmt(tx(x))}" cy="{_fmt(ty(y))}" r="{_fmt(dot)}"/>')
    out.append("</g>")

    for k, t in enumerate(traces):
        color = COLORS.get(t.algorithm, FALLBACK_COLORS[k % len(FALLBACK_COLORS)])
        grow = 1 + RADIUS_STEP * k
        out.append(
            f'<g id="layer-{k}" class="disk-layer" data-algorithm="{escape(t.algorithm)}" '
            f'data-radius-scale="{_fmt(grow)}" fill="none" stroke="{color}" stroke-width="1.5">'
        )
        for e in t.final_set:
            (x, y), r = instance.sites[e].tolist(), float(instance.radii[e])
            out.append(
                f'<circle class="disk" data-site="{instance.site_ids[e]}" cx="{_fmt(tx(x))}" '
                f'cy="{_fmt(ty(y))}" r="{_fmt(r * grow * scale)}"/>'
            )
        out.append("</g>")

    out.append('<g id="sites" fill="#000000">')
    marker = max(3.0, 0.008 * width)
    for (x, y), sid in zip(instance.sites.tolist(), instance.site_ids):
        out.append(f'<polygon class="site" data-site="{sid}" points="{_star(tx(x), ty(y), marker)}"/>')
    out.append("</g>")

    out.append('<g id="legend" font-family="sans-serif" font-size="12">')
    for k, t in enumerate(traces):
        color = COLORS.get(t.algorithm, FALLBACK_COLORS[k % len(FALLBACK_COLORS)])
        label = f"{t.algorithm}: f = {_fmt(t.value)}"
        out.append(f'<text x="8" y="{16 + 14 * k}" fill="{color}">{escape(label)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def save_svg(instance: Instance, traces: Sequence[SolutionTrace], path, width: int = 800) -> None:
    Path(path).write_text(render_svg(instance, traces, width), encoding="utf-8")

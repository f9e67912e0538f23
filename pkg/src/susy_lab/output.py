"""Deterministic CSV / JSON / SVG writers."""
from __future__ import annotations

import csv
import json
import math
from importlib import metadata
from pathlib import Path

from .susy_core import format_float

SVG_W, SVG_H = 800, 600
MARGIN = 60


def artifact_version():
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0.0.0"


def run_metadata(kernel, s=None, g=None, grid=None, tolerances=None, **extra):
    meta = {
        "artifact": "susy_lab",
        "version": artifact_version(),
        "kernel": kernel.describe() if kernel is not None else None,
        "g": g,
        "s": s,
    }
    if grid is not None:
        meta.update(L=grid.L, points=grid.points, h=grid.h)
    meta["tolerances"] = dict(tolerances or {})
    meta.update(extra)
    return _clean(meta)


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if hasattr(obj, "item"):
        return _clean(obj.item())
    return obj


def dumps(obj):
    return json.dumps(_clean(obj), indent=2) + "\n"


def write_json(path, obj):
    Path(path).write_text(dumps(obj))


def write_table(path, header, rows):
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([format_float(v) if isinstance(v, float) else v for v in row])


def _fmt(v):
    return f"{v:.2f}"


def svg_plot(curves, hlines=(), xlim=None, ylim=None, title=""):
    """Line plot as an SVG string.

    curves: list of (x, y, stroke_width, label); hlines: list of (y, label).
    Output depends only on the inputs: no ids, no timestamps.
    """
    xs = [v for c in curves for v in c[0]]
    ys = [v for c in curves for v in c[1]] + [h[0] for h in hlines]
    x0, x1 = xlim or (min(xs), max(xs))
    y0, y1 = ylim or (min(ys), max(ys))
    if y1 == y0:
        y1 = y0 + 1.0
    pw, ph = SVG_W - 2 * MARGIN, SVG_H - 2 * MARGIN

    def px(x):
        return MARGIN + (x - x0) / (x1 - x0) * pw

    def py(y):
        return SVG_H - MARGIN - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SVG_W} {SVG_H}" width="{SVG_W}" height="{SVG_H}">',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="black" stroke-width="1"/>',
    ]
    if title:
        out.append(f'<text x="{SVG_W / 2:.2f}" y="{MARGIN / 2:.2f}" text-anchor="middle" font-family="sans-serif" font-size="16">{title}</text>')
    for i in range(5):
        xv = x0 + (x1 - x0) * i / 4
        yv = y0 + (y1 - y0) * i / 4
        out.append(f'<text x="{_fmt(px(xv))}" y="{SVG_H - MARGIN + 18}" text-anchor="middle" font-family="sans-serif" font-size="12">{xv:.3g}</text>')
        out.append(f'<text x="{MARGIN - 6}" y="{_fmt(py(yv) + 4)}" text-anchor="end" font-family="sans-serif" font-size="12">{yv:.3g}</text>')
    out.append(f'<clipPath id="plot"><rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}"/></clipPath>')
    for y, label in hlines:
        out.append(f'<line x1="{MARGIN}" y1="{_fmt(py(y))}" x2="{SVG_W - MARGIN}" y2="{_fmt(py(y))}" stroke="gray" stroke-width="1" stroke-dasharray="6,4" clip-path="url(#plot)"><title>{label}</title></line>')
    for x, y, width, label in curves:
        pts = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(x, y))
        out.append(f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="{width}" clip-path="url(#plot)"><title>{label}</title></polyline>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

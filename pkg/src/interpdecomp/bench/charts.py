"""Per-dataset SVG charts: relative error and time against rank, one line per algorithm."""
import math
import re
from collections import defaultdict
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .harness import ALGORITHMS

COLORS = {"svd_baseline": "#555555", "det_id": "#1f77b4", "rand_id": "#d62728"}
PANEL_W, PANEL_H = 360, 260
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 64, 16, 36, 48
LEGEND_H = 28


def _series(records, field):
    """``{algorithm: [(rank, mean value)]}`` over successful records."""
    acc = defaultdict(lambda: defaultdict(list))
    for r in records:
        v = getattr(r, field)
        if r.ok and v is not None and not math.isnan(v):
            acc[r.algorithm][r.rank].append(v)
    return {alg: sorted((k, float(np.mean(vs))) for k, vs in by_rank.items())
            for alg, by_rank in acc.items()}


def _ticks(lo, hi, n=5):
    if hi <= lo:
        return [lo]
    return list(np.linspace(lo, hi, n))


def _fmt_tick(v):
    return f"{v:.3g}"


def _panel(x0, title, ylabel, series):
    out = [f'<g transform="translate({x0},0)">']
    left, top = MARGIN_L, MARGIN_T
    w = PANEL_W - MARGIN_L - MARGIN_R
    h = PANEL_H - MARGIN_T - MARGIN_B
    out.append(f'<text x="{PANEL_W / 2:.1f}" y="20" text-anchor="middle" '
               f'font-size="14">{escape(title)}</text>')
    out.append(f'<rect x="{left}" y="{top}" width="{w}" height="{h}" fill="none" stroke="#000"/>')

    pts = [p for line in series.values() for p in line]
    if pts:
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        xlo, xhi = min(xs), max(xs)
        ylo, yhi = min(0.0, min(ys)), max(ys)
        if xhi == xlo:
            xlo, xhi = xlo - 1, xhi + 1
        if yhi == ylo:
            yhi = ylo + 1.0
        sx = lambda v: left + (v - xlo) / (xhi - xlo) * w
        sy = lambda v: top + h - (v - ylo) / (yhi - ylo) * h
        for t in _ticks(xlo, xhi):
            out.append(f'<line x1="{sx(t):.1f}" y1="{top + h}" x2="{sx(t):.1f}" '
                       f'y2="{top + h + 4}" stroke="#000"/>')
            out.append(f'<text x="{sx(t):.1f}" y="{top + h + 16}" text-anchor="middle" '
                       f'font-size="10">{_fmt_tick(t)}</text>')
        for t in _ticks(ylo, yhi):
            out.append(f'<line x1="{left - 4}" y1="{sy(t):.1f}" x2="{left}" '
                       f'y2="{sy(t):.1f}" stroke="#000"/>')
            out.append(f'<text x="{left - 6}" y="{sy(t) + 3:.1f}" text-anchor="end" '
                       f'font-size="10">{_fmt_tick(t)}</text>')
        for alg in ALGORITHMS:
            line = series.get(alg)
            if not line:
                continue
            color = COLORS[alg]
            coords = " ".join(f"{sx(k):.2f},{sy(v):.2f}" for k, v in line)
            out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" '
                       f'stroke-width="1.5" class="{alg}"/>')
            for k, v in line:
                out.append(f'<circle cx="{sx(k):.2f}" cy="{sy(v):.2f}" r="2.5" fill="{color}"/>')

    out.append(f'<text x="{left + w / 2:.1f}" y="{PANEL_H - 10}" text-anchor="middle" '
               f'font-size="12">rank k</text>')
    out.append(f'<text x="14" y="{top + h / 2:.1f}" text-anchor="middle" font-size="12" '
               f'transform="rotate(-90 14 {top + h / 2:.1f})">{escape(ylabel)}</text>')
    out.append("</g>")
    return out


def chart_svg(dataset, records):
    width, height = 2 * PANEL_W, PANEL_H + LEGEND_H
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
             f'viewBox="0 0 {width} {height}">',
             f'<title>{escape(dataset)}</title>',
             '<rect width="100%" height="100%" fill="#fff"/>']
    parts += _panel(0, f"{dataset}: relative error", "relative error",
                    _series(records, "relative_error"))
    parts += _panel(PANEL_W, f"{dataset}: time", "time (s)", _series(records, "wall_time_s"))
    present = [a for a in ALGORITHMS if any(r.algorithm == a for r in records)]
    x = MARGIN_L
    for alg in present:
        y = PANEL_H + LEGEND_H / 2
        parts.append(f'<line x1="{x}" y1="{y}" x2="{x + 20}" y2="{y}" '
                     f'stroke="{COLORS[alg]}" stroke-width="2"/>')
        parts.append(f'<text x="{x + 26}" y="{y + 4}" font-size="12">{escape(alg)}</text>')
        x += 130
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _safe_name(name):
    return re.sub(r"[^A-Za-z0-9_.-]", "_", name) or "dataset"


def emit_charts(records, directory):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    by_dataset = defaultdict(list)
    for r in records:
        by_dataset[r.dataset].append(r)
    paths = []
    for dataset, rs in sorted(by_dataset.items()):
        path = directory / f"{_safe_name(dataset)}.svg"
        path.write_text(chart_svg(dataset, rs))
        paths.append(path)
    return paths

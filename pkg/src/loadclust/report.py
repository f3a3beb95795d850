"""Self-contained HTML report: one inline-SVG panel per cluster."""

from __future__ import annotations

import html
import math

import numpy as np

PANEL_W, PANEL_H = 360, 220
PAD_L, PAD_R, PAD_T, PAD_B = 40, 10, 10, 24

_STYLE = """
body { font-family: sans-serif; margin: 1.5em; color: #222; }
h1 { font-size: 1.3em; }
table.cvi { border-collapse: collapse; margin-bottom: 1em; }
table.cvi td, table.cvi th { border: 1px solid #bbb; padding: 2px 8px; text-align: right; }
.panels { display: flex; flex-wrap: wrap; gap: 12px; }
.panel { border: 1px solid #ccc; padding: 6px; }
.panel h2 { font-size: 1em; margin: 0 0 4px 0; }
.flags { color: #a33; font-size: 0.9em; }
"""


def _fmt(v, digits=4):
    if v is None or (isinstance(v, float) and not math.isfinite(v)):
        return "n/a"
    return f"{v:.{digits}f}"


def _polyline(y, lo, hi, cls):
    d = len(y)
    span = hi - lo if hi > lo else 1.0
    w = PANEL_W - PAD_L - PAD_R
    h = PANEL_H - PAD_T - PAD_B
    pts = " ".join(
        f"{PAD_L + (w * i / (d - 1) if d > 1 else 0):.2f},{PAD_T + h * (1 - (v - lo) / span):.2f}"
        for i, v in enumerate(y))
    return f'<polyline class="{cls}" points="{pts}"/>'


def _panel_svg(curves, center, lo, hi, x_ticks):
    parts = [f'<svg width="{PANEL_W}" height="{PANEL_H}" '
             f'viewBox="0 0 {PANEL_W} {PANEL_H}">',
             '<style>.member{fill:none;stroke:#7aa6d6;stroke-width:0.7;stroke-opacity:0.35}'
             '.center{fill:none;stroke:#000;stroke-width:2.4}'
             '.axis{stroke:#888;stroke-width:1}text{font-size:9px;fill:#555}</style>']
    x0, y0 = PAD_L, PANEL_H - PAD_B
    parts.append(f'<line class="axis" x1="{x0}" y1="{PAD_T}" x2="{x0}" y2="{y0}"/>')
    parts.append(f'<line class="axis" x1="{x0}" y1="{y0}" x2="{PANEL_W - PAD_R}" y2="{y0}"/>')
    parts.append(f'<text x="2" y="{PAD_T + 8}">{_fmt(hi, 2)}</text>')
    parts.append(f'<text x="2" y="{y0}">{_fmt(lo, 2)}</text>')
    w = PANEL_W - PAD_L - PAD_R
    for frac, text in x_ticks:
        parts.append(f'<text x="{PAD_L + w * frac - 10:.1f}" y="{PANEL_H - 8}">{html.escape(text)}</text>')
    for y in curves:
        parts.append(_polyline(y, lo, hi, "member"))
    parts.append(_polyline(center, lo, hi, "center"))
    parts.append("</svg>")
    return "\n".join(parts)


def _x_ticks(grid, d):
    if not grid or d < 2:
        return []
    ticks = []
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        t = grid[int(round(frac * (d - 1)))]
        ticks.append((frac, t.strftime("%H:%M") if hasattr(t, "strftime") else str(t)))
    return ticks


def render_report(curves, labels, assignment, *, centers=None, grid=None, title="Cluster report",
                  validity=None, run_id=None, dropped=None):
    """Build the HTML text.

    ``curves`` is the n x d matrix to draw (rows in ``labels`` order).
    ``centers`` defaults to ``assignment.centers`` when those live in the
    same d-dimensional space, otherwise to the member means.
    """
    curves = np.asarray(curves, dtype=float)
    index = {lab: i for i, lab in enumerate(labels)}
    rows = np.array([index[lab] for lab in assignment.labels])
    clusters = np.asarray(assignment.clusters)
    k = assignment.k
    if centers is None:
        centers = assignment.centers if assignment.centers.shape[1] == curves.shape[1] else None
    ticks = _x_ticks(list(grid) if grid is not None else None, curves.shape[1])

    out = ["<!DOCTYPE html>", '<html lang="en">', "<head>", '<meta charset="utf-8">',
           f"<title>{html.escape(title)}</title>", f"<style>{_STYLE}</style>", "</head>", "<body>",
           f"<h1>{html.escape(title)}</h1>"]
    summary = [f"n = {len(clusters)}", f"k = {k}", f"algorithm = {html.escape(assignment.algorithm)}"]
    if run_id:
        summary.append(f"run {html.escape(run_id)}")
    out.append(f"<p>{' | '.join(summary)}</p>")
    if validity is not None:
        out.append('<table class="cvi"><tr><th>silhouette</th><th>Davies-Bouldin</th>'
                   '<th>Calinski-Harabasz</th><th>inertia</th></tr>')
        out.append(f"<tr><td>{_fmt(validity.silhouette)}</td><td>{_fmt(validity.davies_bouldin)}</td>"
                   f"<td>{_fmt(validity.calinski_harabasz, 2)}</td><td>{_fmt(validity.inertia)}</td></tr>"
                   "</table>")
        if validity.flags:
            out.append('<p class="flags">' + "<br>".join(html.escape(f) for f in validity.flags) + "</p>")
    if dropped:
        out.append(f'<p class="flags">dropped series: {len(dropped)}</p>')

    out.append('<div class="panels">')
    for c in range(k):
        member_rows = rows[clusters == c]
        member_curves = curves[member_rows]
        center = centers[c] if centers is not None else member_curves.mean(axis=0)
        lo = float(min(member_curves.min(), center.min()))
        hi = float(max(member_curves.max(), center.max()))
        out.append(f'<div class="panel" data-cluster="{c}" data-members="{len(member_rows)}">')
        out.append(f"<h2>Cluster {c} ({len(member_rows)} members)</h2>")
        out.append(_panel_svg(member_curves, center, lo, hi, ticks))
        out.append("</div>")
    out.append("</div>")
    out.append("</body></html>")
    return "\n".join(out) + "\n"

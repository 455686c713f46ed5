"""Static SVG 1.1 line charts from run CSVs."""
from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

from .harness import fmt, read_csv

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=150, top=30, bottom=55)
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f")
DASHES = ("", "6,4", "2,3", "8,3,2,3")


def _ticks(lo: float, hi: float, n: int = 5):
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


def _group(header, rows):
    keys = header[2:]
    groups = {}
    for r in rows:
        groups.setdefault(tuple(r[2:]), []).append((r[0], r[1]))
    return keys, groups


def render(header, rows, title: str = "") -> str:
    keys, groups = _group(header, rows)
    xs = [r[0] for r in rows]
    ys = [r[1] for r in rows]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1
    if y1 - y0 < 1e-12:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(x):
        return MARGIN["left"] + (x - x0) / (x1 - x0) * pw

    def py(y):
        return MARGIN["top"] + (y1 - y) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{pw}" height="{ph}" '
        'fill="none" stroke="#000000" stroke-width="1"/>',
    ]
    for t in _ticks(x0, x1):
        x = px(t)
        out.append(f'<line x1="{x:.2f}" y1="{MARGIN["top"] + ph}" x2="{x:.2f}" y2="{MARGIN["top"] + ph + 5}" stroke="#000000"/>')
        out.append(
            f'<text x="{x:.2f}" y="{MARGIN["top"] + ph + 20}" font-size="12" text-anchor="middle">{fmt(round(t, 6))}</text>'
        )
    for t in _ticks(y0, y1):
        y = py(t)
        out.append(f'<line x1="{MARGIN["left"] - 5}" y1="{y:.2f}" x2="{MARGIN["left"]}" y2="{y:.2f}" stroke="#000000"/>')
        out.append(
            f'<text x="{MARGIN["left"] - 8}" y="{y + 4:.2f}" font-size="12" text-anchor="end">{fmt(round(t, 4))}</text>'
        )
    out.append(
        f'<text x="{MARGIN["left"] + pw / 2:.2f}" y="{HEIGHT - 12}" font-size="14" text-anchor="middle">tau = Omega t</text>'
    )
    out.append(
        f'<text x="18" y="{MARGIN["top"] + ph / 2:.2f}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 18 {MARGIN["top"] + ph / 2:.2f})">{escape(header[1])}</text>'
    )
    if title:
        out.append(f'<text x="{MARGIN["left"] + pw / 2:.2f}" y="20" font-size="14" text-anchor="middle">{escape(title)}</text>')
    for n, (params, pts) in enumerate(groups.items()):
        color, dash = COLORS[n % len(COLORS)], DASHES[n % len(DASHES)]
        points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in pts)
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        label = ", ".join(f"{k}={fmt(v)}" for k, v in zip(keys, params)) or header[1]
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash_attr} points="{points}">'
            f"<title>{escape(label)}</title></polyline>"
        )
        ly = MARGIN["top"] + 15 + 18 * n
        lx = WIDTH - MARGIN["right"] + 10
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 25}" y2="{ly}" stroke="{color}" stroke-width="1.5"{dash_attr}/>')
        out.append(f'<text x="{lx + 30}" y="{ly + 4}" font-size="11">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def plot(csv_path, out_svg) -> Path:
    meta, header, rows = read_csv(csv_path)
    out_svg = Path(out_svg)
    out_svg.write_text(render(header, rows, title=meta.get("run", "")), encoding="utf-8")
    return out_svg

"""Deterministic SVG drawings of planar tessellation windows."""

from __future__ import annotations

import numpy as np

from .geometry import GeometryError
from .tessellation import Tessellation

PALETTE = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"]
SIZE = 600
SAMPLES = 16


def clip_polygon(poly: np.ndarray, a: np.ndarray, b: float) -> np.ndarray:
    """Sutherland-Hodgman clip of a convex polygon against ``a . k <= b``."""
    out = []
    m = len(poly)
    for i in range(m):
        p, q = poly[i], poly[(i + 1) % m]
        vp, vq = a @ p - b, a @ q - b
        if vp <= 0:
            out.append(p)
        if vp * vq < 0:
            out.append(p + (q - p) * (vp / (vp - vq)))
    return np.array(out) if out else np.zeros((0, 2))


def tile_polygon(tess: Tessellation, i: int, sides: int = 64) -> np.ndarray:
    """Tile ``i`` clipped to the window, as vertices in the centered chart."""
    chart = tess.chart
    th = 2 * np.pi * np.arange(sides) / sides
    poly = chart.radius * np.stack([np.cos(th), np.sin(th)], axis=1)
    A, b = chart.rows(tess.rows(i))
    for a, bb in zip(A, b):
        if len(poly) == 0:
            break
        poly = clip_polygon(poly, a, bb)
    return poly


def _display(tess: Tessellation, k: np.ndarray) -> np.ndarray:
    """Chart points to 2-D display coordinates in the space's own chart."""
    X = tess.chart.to_canonical(k)
    if tess.space.kind == "spherical":
        return k  # gnomonic projection around the window center
    space = tess.space
    if space.chart == "hyperboloid":
        space = space.with_chart("klein")
    return np.atleast_2d(space.from_canonical(X))


def render_svg(tess: Tessellation, pairings=()) -> str:
    """Tile boundaries as polylines; walls colour-keyed by the pairing symbol."""
    if tess.space.dim != 2:
        raise GeometryError("drawing needs a 2-dimensional space")
    face_symbol = {}
    for sp in pairings:
        face_symbol.setdefault(sp.face, sp.symbol)
    symbols = sorted({sp.symbol for sp in pairings})
    color = {s: PALETTE[i % len(PALETTE)] for i, s in enumerate(symbols)}
    segments = []  # (points, stroke, dashed)
    for i in range(len(tess)):
        poly = tile_polygon(tess, i)
        if len(poly) < 3:
            continue
        A, b = tess.chart.rows(tess.rows(i))
        scale = np.linalg.norm(A, axis=1)
        for j in range(len(poly)):
            p, q = poly[j], poly[(j + 1) % len(poly)]
            mid = 0.5 * (p + q)
            resid = np.abs(A @ mid - b) / np.maximum(scale, 1e-300)
            on = [int(np.argmin(resid))] if len(resid) and resid.min() <= 1e-7 else []
            ts = np.linspace(0, 1, SAMPLES + 1)[:, None]
            pts = _display(tess, p + ts * (q - p))
            if len(on):
                sym = face_symbol.get(on[0])
                stroke = color.get(sym, "#333333") if sym else "#333333"
                segments.append((pts, stroke, False))
            else:
                segments.append((pts, "#bbbbbb", True))
    if not segments:
        raise GeometryError("nothing to draw")
    allpts = np.vstack([s[0] for s in segments])
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    span = max(float(np.max(hi - lo)), 1e-12)
    pad = 20

    def to_px(pts):
        xy = (pts - lo) / span * (SIZE - 2 * pad) + pad
        xy[:, 1] = SIZE - xy[:, 1]
        return " ".join(f"{x:.3f},{y:.3f}" for x, y in xy)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]
    base = tile_polygon(tess, 0)
    if len(base) >= 3:
        closed = np.vstack([base, base[:1]])
        ring = np.vstack([_display(tess, p + np.linspace(0, 1, SAMPLES + 1)[:, None] * (q - p))
                          for p, q in zip(closed, closed[1:])])
        lines.append(f'<polygon points="{to_px(ring)}" fill="#f3f0d8" stroke="none"/>')
    for pts, stroke, dashed in segments:
        dash = ' stroke-dasharray="4 3"' if dashed else ""
        lines.append(f'<polyline points="{to_px(pts)}" fill="none" stroke="{stroke}" '
                     f'stroke-width="1.5"{dash}/>')
    for k, s in enumerate(symbols):
        lines.append(f'<text x="{10}" y="{20 + 16 * k}" font-size="13" fill="{color[s]}">{s}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"

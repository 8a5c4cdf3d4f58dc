"""SVG figure of a case report: banded contours, Dirichlet set, markers, nodal lines."""

from __future__ import annotations

import numpy as np

# 10 samples of the viridis ramp, low to high
PALETTE = (
    "#440154",
    "#482878",
    "#3e4989",
    "#31688e",
    "#26828e",
    "#1f9e89",
    "#35b779",
    "#6ece58",
    "#b5de2b",
    "#fde725",
)
DIRICHLET_STROKE = "#d62728"
NEUMANN_STROKE = "#333333"
NODAL_STROKE = "#ffffff"
MARKER_FILL = "#ff7f0e"

WIDTH = 640.0
MARGIN = 20.0


def _clip(poly: list, vals: list, level: float, keep_above: bool) -> tuple[list, list]:
    """Clip a convex polygon with linear data to {u >= level} (or {u <= level})."""
    out_p, out_v = [], []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        a, b = vals[i], vals[(i + 1) % n]
        ina = a >= level if keep_above else a <= level
        inb = b >= level if keep_above else b <= level
        if ina:
            out_p.append(p)
            out_v.append(a)
        if ina != inb:
            t = (level - a) / (b - a)
            out_p.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
            out_v.append(level)
    return out_p, out_v


def band_polygons(vertices, triangles, values, n_bands: int = 10) -> list[list]:
    """Per band, the list of polygons where band_lo <= u <= band_hi (P1 interpolation)."""
    V = np.asarray(vertices, float)
    T = np.asarray(triangles, int)
    u = np.asarray(values, float)
    lo, hi = float(u.min()), float(u.max())
    if hi <= lo:
        hi = lo + 1.0
    edges = np.linspace(lo, hi, n_bands + 1)
    bands: list[list] = [[] for _ in range(n_bands)]
    idx = np.clip(np.searchsorted(edges, u, side="right") - 1, 0, n_bands - 1)
    for tri in T:
        b = idx[tri]
        pts = [tuple(V[i]) for i in tri]
        vals = [float(u[i]) for i in tri]
        if b.min() == b.max():
            bands[int(b[0])].append(pts)
            continue
        for k in range(int(b.min()), int(b.max()) + 1):
            p, v = _clip(pts, vals, edges[k], True)
            if len(p) >= 3:
                p, v = _clip(p, v, edges[k + 1], False)
            if len(p) >= 3:
                bands[k].append(p)
    return bands


class _Frame:
    def __init__(self, V: np.ndarray):
        self.x0, self.y0 = V.min(axis=0)
        x1, y1 = V.max(axis=0)
        span = max(x1 - self.x0, y1 - self.y0, 1e-12)
        self.s = (WIDTH - 2 * MARGIN) / span
        self.w = WIDTH
        self.h = (y1 - self.y0) * self.s + 2 * MARGIN
        self.y1 = y1

    def xy(self, p) -> str:
        x = MARGIN + (p[0] - self.x0) * self.s
        y = MARGIN + (self.y1 - p[1]) * self.s
        return f"{x:.3f} {y:.3f}"


def _path(frame: _Frame, polys) -> str:
    parts = []
    for poly in polys:
        parts.append("M" + " L".join(frame.xy(p) for p in poly) + " Z")
    return " ".join(parts)


def render_svg(report) -> str:
    """SVG document for a :class:`CaseReport` (or its JSON dict) carrying a ``field`` section."""
    data = report.to_json() if hasattr(report, "to_json") else report
    f = data.get("field")
    if not f:
        raise ValueError("report carries no field to draw")
    V = np.asarray(f["vertices"], float)
    frame = _Frame(V)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{frame.w:.0f}" height="{frame.h:.0f}" '
        f'viewBox="0 0 {frame.w:.3f} {frame.h:.3f}">',
        f"<title>{data.get('case', '')}</title>",
        '<rect width="100%" height="100%" fill="#ffffff"/>',
        '<g id="bands">',
    ]
    for k, polys in enumerate(band_polygons(V, f["triangles"], f["values"], len(PALETTE))):
        if polys:
            c = PALETTE[k]
            out.append(f'<path fill="{c}" stroke="{c}" stroke-width="0.4" d="{_path(frame, polys)}"/>')
    out.append("</g>")

    def segments(edges, colour, width, gid):
        if len(edges) == 0:
            return
        d = " ".join(f"M{frame.xy(V[a])} L{frame.xy(V[b])}" for a, b in edges)
        out.append(f'<path id="{gid}" fill="none" stroke="{colour}" stroke-width="{width}" stroke-linecap="round" d="{d}"/>')

    segments(f.get("neumann_edges", []), NEUMANN_STROKE, 1, "neumann")
    segments(f.get("dirichlet_edges", []), DIRICHLET_STROKE, 4, "dirichlet")
    lines = f.get("nodal_lines", [])
    if lines:
        d = " ".join("M" + " L".join(frame.xy(p) for p in pl) for pl in lines)
        out.append(f'<path id="nodal" fill="none" stroke="{NODAL_STROKE}" stroke-width="2" stroke-dasharray="6 3" d="{d}"/>')
    markers = f.get("markers", [])
    if markers:
        out.append('<g id="critical">')
        for p in markers:
            x, y = frame.xy(p).split()
            out.append(f'<circle cx="{x}" cy="{y}" r="6" fill="{MARKER_FILL}" stroke="#000000" stroke-width="1.5"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"

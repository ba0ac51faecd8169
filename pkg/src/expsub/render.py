"""SVG figures: circle diagrams for S^1, orthographic hemispheres and the
projective disk for S^2, amoeba scatter plots and window heat maps."""
from __future__ import annotations

import math

import numpy as np

from .geometry import IN, UNDECIDED, SphericalSet, fibonacci_sphere
from .laurent import Direction

INK = "#222"
HIT = "#c0392b"
SHADE = "#e6a09a"
GREY = "#999"


class UnsupportedDimension(ValueError):
    pass


def _f(x: float) -> str:
    return f"{x:.3f}".rstrip("0").rstrip(".")


def _svg(w: int, h: int, body: list[str], title: str = "") -> str:
    head = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
            f'viewBox="0 0 {w} {h}">', '<rect width="100%" height="100%" fill="white"/>']
    if title:
        head.append(f'<text x="{w / 2:.0f}" y="18" text-anchor="middle" font-family="sans-serif" '
                    f'font-size="13" fill="{INK}">{title}</text>')
    return "\n".join(head + body + ["</svg>"]) + "\n"


def _polyline(pts, colour, width, close=False) -> str:
    tag = "polygon" if close else "polyline"
    s = " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)
    return f'<{tag} points="{s}" fill="none" stroke="{colour}" stroke-width="{width}"/>'


def _circle_runs(s: SphericalSet, n: int = 1440):
    th = 2 * math.pi * np.arange(n) / n
    flags = [s.contains(Direction.from_vector((math.cos(t), math.sin(t)))) for t in th]
    runs, start = [], None
    for i in range(n + 1):
        f = flags[i % n] == IN
        if f and start is None:
            start = i
        if not f and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, n))
    if runs and flags[0] == IN and len(runs) > 1 and runs[-1][1] >= n - 1:
        first = runs.pop(0)
        runs[-1] = (runs[-1][0], first[1] + n)
    return [(th[0] + 2 * math.pi * a / n, 2 * math.pi * b / n) for a, b in runs], flags


def render_circle(s: SphericalSet, title: str = "", size: int = 320) -> str:
    cx = cy = size / 2
    r = size * 0.38
    body = [f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" fill="none" stroke="{GREY}" stroke-width="1"/>']
    for deg in (0, 90, 180, 270):
        t = math.radians(deg)
        body.append(f'<text x="{_f(cx + 1.15 * r * math.cos(t))}" y="{_f(cy - 1.15 * r * math.sin(t) + 4)}" '
                    f'text-anchor="middle" font-family="sans-serif" font-size="10" fill="{GREY}">{deg}</text>')
    runs, _ = _circle_runs(s)
    for a, b in runs:
        if b - a < math.radians(0.6):
            continue
        ts = np.linspace(a, b, max(4, int((b - a) / math.radians(1)) + 2))
        body.append(_polyline([(cx + r * math.cos(t), cy - r * math.sin(t)) for t in ts], HIT, 5))
    for c in s.cells:
        if c.kind == "point":
            p = c.interior_point()
            t = math.atan2(p[1], p[0])
            x0, y0 = cx + 0.88 * r * math.cos(t), cy - 0.88 * r * math.sin(t)
            x1, y1 = cx + 1.08 * r * math.cos(t), cy - 1.08 * r * math.sin(t)
            body.append(f'<line x1="{_f(x0)}" y1="{_f(y0)}" x2="{_f(x1)}" y2="{_f(y1)}" '
                        f'stroke="{HIT}" stroke-width="3"/>')
    return _svg(size, size, body, title)


def _great_arc(a, b, n: int = 48):
    a = np.asarray(a, float) / np.linalg.norm(a)
    b = np.asarray(b, float) / np.linalg.norm(b)
    w = math.acos(max(-1.0, min(1.0, float(a @ b))))
    if w < 1e-12:
        return [a]
    return [(math.sin((1 - t) * w) * a + math.sin(t * w) * b) / math.sin(w)
            for t in np.linspace(0, 1, n)]


def _sphere_samples(s: SphericalSet, n: int) -> np.ndarray:
    U = fibonacci_sphere(n)
    keep = [s.contains(Direction.from_vector(tuple(u))) == IN for u in U]
    return U[np.array(keep, bool)] if len(U) else U


def render_sphere(s: SphericalSet, title: str = "", size: int = 300, samples: int = 6000,
                  disk: bool = True) -> str:
    """Orthographic views of the upper and lower hemispheres; with ``disk``
    a third panel shows the projective disk (antipodes identified)."""
    r = size * 0.4
    panels = 3 if disk else 2
    W, H = size * panels, size + 20
    body = []
    pts = _sphere_samples(s, samples)
    arcs = []
    for c in s.cells:
        if c.kind == "arc":
            ex = c.extreme_rays()
            if len(ex) == 2:
                arcs.append(_great_arc(ex[0], ex[1]))
        elif c.kind == "point":
            arcs.append([np.asarray(c.interior_point(), float) / np.linalg.norm(c.interior_point())])
    for k, (label, sign) in enumerate((("upper", 1), ("lower", -1), ("disk", 0))[:panels]):
        cx, cy = size * k + size / 2, size / 2 + 20
        body.append(f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" fill="none" stroke="{GREY}"/>')
        body.append(f'<text x="{_f(cx)}" y="{_f(cy + r + 16)}" text-anchor="middle" '
                    f'font-family="sans-serif" font-size="10" fill="{GREY}">{label}</text>')

        def proj(u, sign=sign):
            u = np.asarray(u, float)
            if sign == 0 and u[2] < 0:
                u = -u
            if sign == -1:
                return cx + r * u[0], cy + r * u[1]
            return cx + r * u[0], cy - r * u[1]

        def visible(u, sign=sign):
            return True if sign == 0 else sign * u[2] >= -1e-9

        for u in pts:
            if visible(u):
                x, y = proj(u)
                body.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="1.6" fill="{SHADE}"/>')
        for arc in arcs:
            seg = [proj(u) for u in arc if visible(u)]
            if len(seg) == 1:
                body.append(f'<circle cx="{_f(seg[0][0])}" cy="{_f(seg[0][1])}" r="3" fill="{HIT}"/>')
            elif len(seg) > 1:
                body.append(_polyline(seg, HIT, 2.5))
    return _svg(W, H, body, title)


def render_sset(s: SphericalSet, style: str = "auto", title: str = "") -> str:
    if s.dim == 2:
        return render_circle(s, title)
    if s.dim == 3:
        return render_sphere(s, title, disk=style in ("auto", "disk"))
    raise UnsupportedDimension(f"cannot draw a sphere of dimension {s.dim - 1}")


def render_cloud(X: np.ndarray, title: str = "", size: int = 400, axes=(0, 1),
                 clip: float | None = 8.0, max_points: int = 20000) -> str:
    """Scatter of amoeba points projected on two coordinates."""
    X = np.asarray(X, float)
    if len(X) > max_points:
        X = X[np.linspace(0, len(X) - 1, max_points).astype(int)]
    P = X[:, list(axes)] if len(X) else np.zeros((0, 2))
    if clip is not None and len(P):
        P = P[(np.abs(P) <= clip).all(axis=1)]
    lim = clip or (float(np.abs(P).max()) if len(P) else 1.0)
    scale = size * 0.45 / lim
    c = size / 2
    body = [f'<line x1="0" y1="{_f(c)}" x2="{size}" y2="{_f(c)}" stroke="{GREY}"/>',
            f'<line x1="{_f(c)}" y1="0" x2="{_f(c)}" y2="{size}" stroke="{GREY}"/>']
    for x, y in P:
        body.append(f'<circle cx="{_f(c + scale * x)}" cy="{_f(c - scale * y)}" r="0.8" fill="{INK}"/>')
    return _svg(size, size, body, title)


def render_window(values: np.ndarray, title: str = "", cell: int = 8) -> str:
    """Heat map of a 2d window of torus values (distance to 0 mod 1)."""
    v = np.asarray(values, float)
    if v.ndim != 2:
        raise UnsupportedDimension("window heat maps need a 2d slice")
    d = np.minimum(v, 1 - v) * 2
    n, m = d.shape
    body = []
    for i in range(n):
        for j in range(m):
            g = int(255 * (1 - d[i, j]))
            body.append(f'<rect x="{i * cell}" y="{(m - 1 - j) * cell + 24}" width="{cell}" '
                        f'height="{cell}" fill="rgb(255,{g},{g})"/>')
    return _svg(n * cell, m * cell + 24, body, title)


def undecided_count(s: SphericalSet, n: int = 720) -> int:
    if s.dim != 2:
        return 0
    _, flags = _circle_runs(s, n)
    return sum(1 for f in flags if f == UNDECIDED)

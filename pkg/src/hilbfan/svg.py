"""Standalone SVG renderings of fans, boundary diagrams, and dot plots.

Each emitter returns one complete <svg> document as a string.  The
markup is write-only output: nothing here is parsed back, so the
documents carry no ids, scripts, or styles beyond inline presentation
attributes, and the drawing order is deterministic (sorted points,
fixed decimal formatting, no timestamps).  Floating point appears only
in this module, strictly for layout; every mathematical object arrives
already computed exactly.
"""

import math
from xml.sax.saxutils import escape

from .fan import BoundaryDiagram, Fan2D
from .segre3 import SupportPicture

INK = "#1f2430"
ACCENT = "#8a93a6"
FONT = "font-family='Menlo, Consolas, monospace'"


def _fmt(v: float) -> str:
    s = f"{v:.2f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def _text(x: float, y: float, s: str, size: int = 13, anchor: str = "middle",
          color: str = INK) -> str:
    return (f"<text x='{_fmt(x)}' y='{_fmt(y)}' font-size='{size}' "
            f"text-anchor='{anchor}' fill='{color}' {FONT}>{escape(s)}</text>")


def _line(x1: float, y1: float, x2: float, y2: float, width: float = 1.5,
          color: str = INK) -> str:
    return (f"<line x1='{_fmt(x1)}' y1='{_fmt(y1)}' x2='{_fmt(x2)}' "
            f"y2='{_fmt(y2)}' stroke='{color}' stroke-width='{_fmt(width)}'/>")


def _document(width: float, height: float, body: list[str]) -> str:
    head = (f"<svg xmlns='http://www.w3.org/2000/svg' width='{_fmt(width)}' "
            f"height='{_fmt(height)}' "
            f"viewBox='0 0 {_fmt(width)} {_fmt(height)}'>")
    return "\n".join([head, *body, "</svg>"]) + "\n"


def _label_text(label) -> str:
    if isinstance(label, tuple):
        return "(" + ", ".join(_label_text(v) for v in label) + ")"
    return str(label)


def _is_ray(entry) -> bool:
    # diagram entries mix primitive integer rays with staircase labels,
    # and labels may themselves be tuples when several factors move
    return (isinstance(entry, tuple) and len(entry) == 2
            and all(isinstance(v, int) for v in entry))


def _unit(ray: tuple[int, int]) -> tuple[float, float]:
    n = math.hypot(ray[0], ray[1])
    return (ray[0] / n, ray[1] / n)


def _angle(ray: tuple[int, int]) -> float:
    return math.atan2(ray[1], ray[0])


class _Frame:
    """Maps mathematical coordinates onto the SVG pixel grid.

    Built from the set of points the drawing will touch; keeps the
    aspect ratio, flips the y axis, and centers the content inside the
    margins.  The title band at the top is part of the margin.
    """

    __slots__ = ("scale", "ox", "oy", "width", "height")

    def __init__(self, pts: list[tuple[float, float]], size: float,
                 margin: float, top: float):
        minx = min(p[0] for p in pts)
        maxx = max(p[0] for p in pts)
        miny = min(p[1] for p in pts)
        maxy = max(p[1] for p in pts)
        span = max(maxx - minx, maxy - miny, 1e-9)
        self.scale = (size - 2 * margin) / span
        self.width = size
        self.height = size + top
        inner_w = (maxx - minx) * self.scale
        inner_h = (maxy - miny) * self.scale
        self.ox = margin + (size - 2 * margin - inner_w) / 2 - minx * self.scale
        self.oy = top + margin + (size - 2 * margin - inner_h) / 2 + maxy * self.scale

    def to(self, p: tuple[float, float]) -> tuple[float, float]:
        return (self.ox + p[0] * self.scale, self.oy - p[1] * self.scale)


def _radial(body: list[str], frame: _Frame, rays, labels_at) -> None:
    """Rays from the origin plus label text at prescribed polar spots.

    `rays` is a list of (primitive ray, tip radius); `labels_at` a list
    of (angle, radius, text, size).  Shared by the fan and the boundary
    diagram emitters, which differ only in what they place where.
    """
    cx, cy = frame.to((0.0, 0.0))
    for ray, tip in rays:
        ux, uy = _unit(ray)
        px, py = frame.to((ux * tip, uy * tip))
        body.append(_line(cx, cy, px, py))
        lx, ly = frame.to((ux * (tip + 0.13), uy * (tip + 0.13)))
        body.append(_text(lx, ly + 4, f"({ray[0]}, {ray[1]})", 11, color=ACCENT))
    for ang, rad, txt, size in labels_at:
        px, py = frame.to((math.cos(ang) * rad, math.sin(ang) * rad))
        body.append(_text(px, py + 4, txt, size))


def fan_svg(fan: Fan2D, size: float = 420.0) -> str:
    """Complete plane fan: every ray drawn, every cone labeled."""
    title = f"fan of {_label_text(fan.source)}"
    subtitle = f"family {fan.family.name}, char {fan.char}"
    body = []
    if not fan.rays:
        frame = _Frame([(-1.2, -1.2), (1.2, 1.2)], size, 40.0, 46.0)
        cx, cy = frame.to((0.0, 0.0))
        body.append(f"<circle cx='{_fmt(cx)}' cy='{_fmt(cy)}' r='3' fill='{INK}'/>")
        body.append(_text(cx, cy - 14, _label_text(fan.cones[0].label), 13))
        body.append(_text(cx, cy + 22, "fixed under the whole family", 11,
                          color=ACCENT))
    else:
        frame = _Frame([(-1.25, -1.25), (1.25, 1.25)], size, 40.0, 46.0)
        labels = []
        angles = [_angle(r) for r in fan.rays]
        for k, cone in enumerate(fan.cones):
            a1 = angles[k]
            a2 = angles[(k + 1) % len(angles)]
            gap = (a2 - a1) % (2 * math.pi) or 2 * math.pi
            labels.append((a1 + gap / 2, 0.62, _label_text(cone.label), 12))
        _radial(body, frame, [(r, 1.0) for r in fan.rays], labels)
    body.append(_text(size / 2, 22, title, 14))
    body.append(_text(size / 2, 39, subtitle, 11, color=ACCENT))
    return _document(frame.width, frame.height, body)


def diagram_svg(diag: BoundaryDiagram, size: float = 420.0) -> str:
    """Boundary diagram: the clockwise ray chain with ideals between.

    The two affine chart rays are already absent from the diagram, so
    only the boundary walls appear; the top ideal sits counterclockwise
    of the first ray whether or not the entries list carries it.
    """
    rays = [e for e in diag.entries if _is_ray(e)]
    between = [e for e in diag.entries if not _is_ray(e)]
    if diag.top_shown and between:
        between = between[1:]
    body = []
    if not rays:
        frame = _Frame([(-1.2, -1.2), (1.2, 1.2)], size, 40.0, 46.0)
        cx, cy = frame.to((0.0, 0.0))
        body.append(_text(cx, cy, _label_text(diag.top_ideal), 13))
        body.append(_text(cx, cy + 20, "no boundary walls", 11, color=ACCENT))
    else:
        angles = [_angle(r) for r in rays]
        labels = [(_angle(rays[0]) + 0.32, 0.8, _label_text(diag.top_ideal), 12)]
        for k, lab in enumerate(between):
            # entries run clockwise, so the sector lies below angles[k]
            gap = (angles[k] - angles[k + 1]) % (2 * math.pi)
            labels.append((angles[k] - gap / 2, 0.8, _label_text(lab), 12))
        pts = [(math.cos(a) * 1.3, math.sin(a) * 1.3) for a in angles]
        pts += [(math.cos(a) * (r + 0.15), math.sin(a) * (r + 0.15))
                for a, r, _, _ in labels]
        pts.append((0.0, 0.0))
        frame = _Frame(pts, size, 52.0, 46.0)
        _radial(body, frame, [(r, 1.0) for r in rays], labels)
    body.append(_text(size / 2, 22, "boundary diagram", 14))
    body.append(_text(size / 2, 39,
                      f"top ideal {_label_text(diag.top_ideal)}", 11,
                      color=ACCENT))
    return _document(frame.width, frame.height, body)


def support3_svg(picture: SupportPicture, cell: float = 34.0) -> str:
    """Dot plot of a three-parameter support: x is the a-exponent, y the
    b-exponent, dot radius grows with the largest c-exponent present,
    and a column whose deepest point lies outside the monomial span is
    drawn hollow."""
    deepest: dict[tuple[int, int], int] = {}
    for p in sorted(picture.points):
        key = (p[0], p[1])
        deepest[key] = max(deepest.get(key, 0), p[2])
    max_a = max((k[0] for k in deepest), default=0)
    max_b = max((k[1] for k in deepest), default=0)
    max_c = max(deepest.values(), default=0)
    base, step = 3.5, 3.0
    if max_c > 0:
        step = min(step, (cell / 2 - base - 2) / max_c)

    left, top = 46.0, 54.0
    grid_w = (max_a + 1) * cell
    grid_h = (max_b + 1) * cell
    legend = [str(p) for p in picture.sporadic]
    width = max(left + grid_w + 20, 40 + 7.0 * max((len(s) for s in legend),
                                                   default=0))
    height = top + grid_h + 40 + 16 * len(legend)

    def at(a: int, b: int) -> tuple[float, float]:
        return (left + (a + 0.5) * cell, top + (max_b - b + 0.5) * cell)

    body = [_text(width / 2, 22, "coordinate span support", 14),
            _text(width / 2, 39,
                  f"{len(picture.points)} points, "
                  f"{len(legend)} generators off the monomial span", 11,
                  color=ACCENT)]
    for (a, b), c in sorted(deepest.items()):
        x, y = at(a, b)
        r = base + step * c
        hollow = not picture.monomial_flags[(a, b, c)]
        if hollow:
            body.append(f"<circle cx='{_fmt(x)}' cy='{_fmt(y)}' r='{_fmt(r)}' "
                        f"fill='none' stroke='{INK}' stroke-width='1.6'/>")
        else:
            body.append(f"<circle cx='{_fmt(x)}' cy='{_fmt(y)}' r='{_fmt(r)}' "
                        f"fill='{INK}'/>")
    for a in range(max_a + 1):
        x, _ = at(a, 0)
        body.append(_text(x, top + grid_h + 16, str(a), 10, color=ACCENT))
    for b in range(max_b + 1):
        _, y = at(0, b)
        body.append(_text(left - 14, y + 4, str(b), 10, color=ACCENT))
    body.append(_text(left + grid_w / 2, top + grid_h + 32, "a exponent", 11))
    body.append(_text(left - 14, top - 10, "b", 11))
    y0 = top + grid_h + 40
    for k, s in enumerate(legend):
        body.append(_text(20, y0 + 16 * (k + 1), s, 11, anchor="start"))
    return _document(width, height, body)

"""Deterministic SVG rendering: legend panel at the left, mini world at the right.

Output is canonical text: fixed element and attribute order, individuals
sorted by id, arrows sorted by (relation, from, to), no timestamps.  Byte
identity for identical input is part of the contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from .world import Ontograph

GLYPHS = ("circle_person", "square_object", "triangle", "diamond", "star", "generic")

ARROW_DASH = {"solid": None, "dashed": "8 4", "dotted": "2 3"}

_GLYPH_FILL = {
    "circle_person": "#4477aa",
    "square_object": "#ccbb44",
    "triangle": "#66ccee",
    "diamond": "#ee6677",
    "star": "#aa3377",
    "generic": "#bbbbbb",
}

# Unit outlines (scaled by the icon radius); fixed literals keep output stable.
_TRIANGLE = ((0.0, -1.0), (0.95, 0.75), (-0.95, 0.75))
_DIAMOND = ((0.0, -1.0), (1.0, 0.0), (0.0, 1.0), (-1.0, 0.0))
_STAR = ((0.0, -1.0), (0.22, -0.31), (0.95, -0.31), (0.36, 0.12), (0.59, 0.81),
         (0.0, 0.38), (-0.59, 0.81), (-0.36, 0.12), (-0.95, -0.31), (-0.22, -0.31))

_MARGIN = 16
_LEGEND_W = 170
_ROW_H = 36
_LEGEND_R = 10


class RenderConfigError(ValueError):
    """The legend references an icon or arrow style the config does not provide."""


@dataclass(frozen=True)
class RenderConfig:
    cell_size: int = 120
    icons: dict[str, str] = field(default_factory=lambda: {g: g for g in GLYPHS})
    arrow_styles: dict[str, str | None] = field(default_factory=lambda: dict(ARROW_DASH))


DEFAULT_CONFIG = RenderConfig()


def _fmt(value: float) -> str:
    if float(value).is_integer():
        return str(int(value))
    return f"{value:.1f}"


def _glyph(glyph: str, cx: float, cy: float, r: float) -> str:
    fill = _GLYPH_FILL[glyph]
    if glyph == "circle_person":
        head = f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy - 0.55 * r)}" r="{_fmt(0.38 * r)}" fill="{fill}" stroke="#333333"/>'
        body = f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy + 0.35 * r)}" r="{_fmt(0.62 * r)}" fill="{fill}" stroke="#333333"/>'
        return head + body
    if glyph == "square_object":
        side = 1.7 * r
        return (f'<rect x="{_fmt(cx - side / 2)}" y="{_fmt(cy - side / 2)}" '
                f'width="{_fmt(side)}" height="{_fmt(side)}" fill="{fill}" stroke="#333333"/>')
    if glyph == "generic":
        return f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(0.85 * r)}" fill="{fill}" stroke="#333333"/>'
    outline = {"triangle": _TRIANGLE, "diamond": _DIAMOND, "star": _STAR}[glyph]
    points = " ".join(f"{_fmt(cx + ux * r)},{_fmt(cy + uy * r)}" for ux, uy in outline)
    return f'<polygon points="{points}" fill="{fill}" stroke="#333333"/>'


def _check_config(world: Ontograph, config: RenderConfig) -> None:
    for td in world.legend.types:
        glyph = config.icons.get(td.icon)
        if glyph is None or glyph not in GLYPHS:
            raise RenderConfigError(f"unknown icon {td.icon!r} for type {td.name!r}")
    for rd in world.legend.relations:
        if rd.style not in config.arrow_styles:
            raise RenderConfigError(f"unknown arrow style {rd.style!r} for relation {rd.name!r}")
    if any(not ind.types for ind in world.individuals) and "generic" not in config.icons.values():
        raise RenderConfigError("untyped individuals need the generic icon")


def _icon_for(world: Ontograph, config: RenderConfig, types: frozenset[str]) -> str:
    for td in world.legend.types:
        if td.name in types:
            return config.icons[td.icon]
    return "generic"


def _positions(world: Ontograph, cell: int, ox: int, oy: int) -> dict[str, tuple[float, float]]:
    ids = sorted(ind.id for ind in world.individuals)
    explicit = world.positions or {}
    placed: dict[str, tuple[float, float]] = {}
    auto = [i for i in ids if i not in explicit]
    start_row = 1 + max((y for _, y in explicit.values()), default=-1) if explicit else 0
    cols = max(1, math.ceil(math.sqrt(len(auto)))) if auto else 1
    for ident in ids:
        if ident in explicit:
            gx, gy = explicit[ident]
        else:
            k = auto.index(ident)
            gx, gy = k % cols, start_row + k // cols
        placed[ident] = (ox + gx * cell + cell / 2, oy + gy * cell + cell / 2)
    return placed


def _arrow_path(sx: float, sy: float, tx: float, ty: float, r: float,
                shift: float) -> str:
    dx, dy = tx - sx, ty - sy
    dist = math.hypot(dx, dy)
    if dist < 1e-9:
        # Coincident centers: draw a short loop so the arrow stays visible.
        return _loop_path(sx, sy, r)
    ux, uy = dx / dist, dy / dist
    px, py = -uy, ux
    x1 = sx + ux * (r + 3) + px * shift
    y1 = sy + uy * (r + 3) + py * shift
    x2 = tx - ux * (r + 8) + px * shift
    y2 = ty - uy * (r + 8) + py * shift
    return f"M {_fmt(x1)} {_fmt(y1)} L {_fmt(x2)} {_fmt(y2)}"


def _loop_path(cx: float, cy: float, r: float) -> str:
    return (f"M {_fmt(cx + 0.7 * r)} {_fmt(cy - 0.7 * r)} "
            f"C {_fmt(cx + 2.4 * r)} {_fmt(cy - 2.1 * r)}, "
            f"{_fmt(cx + 2.6 * r)} {_fmt(cy + 1.1 * r)}, "
            f"{_fmt(cx + 1.15 * r)} {_fmt(cy + 0.45 * r)}")


def render(world: Ontograph, config: RenderConfig = DEFAULT_CONFIG) -> str:
    """Render a valid ontograph to a standalone SVG 1.1 document."""
    _check_config(world, config)
    cell = config.cell_size
    r = round(cell * 0.22)

    ox = _LEGEND_W + 2 * _MARGIN
    oy = _MARGIN
    placed = _positions(world, cell, ox, oy)

    if placed:
        world_w = max(x for x, _ in placed.values()) + cell / 2 - ox
        world_h = max(y for _, y in placed.values()) + cell / 2 - oy
    else:
        world_w, world_h = cell, cell
    legend_rows = len(world.legend.types) + len(world.legend.relations)
    legend_h = 2 * _MARGIN + max(1, legend_rows) * _ROW_H
    width = int(math.ceil(ox + world_w + _MARGIN))
    height = int(math.ceil(max(legend_h, oy + world_h) + _MARGIN))

    parts: list[str] = []
    parts.append('<?xml version="1.0" encoding="UTF-8"?>')
    parts.append(f"<!-- ontograph: {escape(world.id)} -->")
    parts.append(f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
                 f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">')
    parts.append('<defs><marker id="arrowhead" viewBox="0 0 8 6" refX="8" refY="3" '
                 'markerWidth="8" markerHeight="6" orient="auto">'
                 '<path d="M 0 0 L 8 3 L 0 6 z" fill="#333333"/></marker></defs>')

    # Legend panel: every type, then every relation, one row each.
    parts.append('<g class="legend">')
    parts.append(f'<rect class="legend-frame" x="{_MARGIN}" y="{_MARGIN}" '
                 f'width="{_LEGEND_W}" height="{legend_h - _MARGIN}" '
                 'fill="none" stroke="#999999"/>')
    row_y = _MARGIN + _ROW_H // 2 + 6
    for td in world.legend.types:
        glyph = _glyph(config.icons[td.icon], _MARGIN + 24, row_y, _LEGEND_R)
        parts.append(f'<g class="legend-entry">{glyph}'
                     f'<text x="{_MARGIN + 48}" y="{row_y + 4}" font-family="sans-serif" '
                     f'font-size="13">{escape(td.name)}</text></g>')
        row_y += _ROW_H
    for rd in world.legend.relations:
        dash = config.arrow_styles[rd.style]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        sample = (f'<path class="legend-arrow" d="M {_MARGIN + 10} {row_y} L {_MARGIN + 38} {row_y}" '
                  f'stroke="#333333" fill="none"{dash_attr} marker-end="url(#arrowhead)"/>')
        parts.append(f'<g class="legend-entry">{sample}'
                     f'<text x="{_MARGIN + 48}" y="{row_y + 4}" font-family="sans-serif" '
                     f'font-size="13">{escape(rd.name)}</text></g>')
        row_y += _ROW_H
    parts.append("</g>")

    parts.append('<g class="world">')
    parts.append(f'<rect class="world-frame" x="{ox - _MARGIN // 2}" y="{oy - _MARGIN // 2}" '
                 f'width="{int(math.ceil(world_w + _MARGIN))}" height="{int(math.ceil(world_h + _MARGIN))}" '
                 'fill="none" stroke="#999999"/>')

    for ind in sorted(world.individuals, key=lambda i: i.id):
        cx, cy = placed[ind.id]
        glyph = _glyph(_icon_for(world, config, ind.types), cx, cy, r)
        label = ""
        if ind.label:
            label = (f'<text x="{_fmt(cx)}" y="{_fmt(cy + r + 16)}" font-family="sans-serif" '
                     f'font-size="13" text-anchor="middle">{escape(ind.label)}</text>')
        parts.append(f'<g class="individual" data-id="{escape(ind.id)}">{glyph}{label}</g>')

    style_of = {rd.name: rd.style for rd in world.legend.relations}
    edges = sorted(world.relations, key=lambda e: (e.rel, e.source, e.target))
    directed: dict[tuple[str, str], list[str]] = {}
    for e in edges:
        directed.setdefault((e.source, e.target), []).append(e.rel)
    for e in edges:
        dash = config.arrow_styles[style_of[e.rel]]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        if e.source == e.target:
            d = _loop_path(*placed[e.source], r)
        else:
            group = directed[(e.source, e.target)]
            k = group.index(e.rel)
            shift = (k - (len(group) - 1) / 2) * 10
            if (e.target, e.source) in directed:
                shift += 5
            sx, sy = placed[e.source]
            tx, ty = placed[e.target]
            d = _arrow_path(sx, sy, tx, ty, r, shift)
        parts.append(f'<path class="arrow" data-rel="{escape(e.rel)}" d="{d}" '
                     f'stroke="#333333" fill="none"{dash_attr} marker-end="url(#arrowhead)"/>')
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

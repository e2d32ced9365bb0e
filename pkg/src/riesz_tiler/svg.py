"""SVG figures of 2D instances: the cell complex of [0,1)^2 colored by
profile, and the region colored by the parts of its splitting."""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from pathlib import Path

from .errors import DimensionError
from .geometry import BoxUnion, HalfOpenBox

PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
)
SCALE = 80.0
MARGIN = 30.0


def _outline(shape):
    return shape.corners_2d() if isinstance(shape, HalfOpenBox) else list(shape.vertices)


def _points_attr(pts, ox, oy, ymax):
    return " ".join(f"{ox + float(x) * SCALE:.3f},{oy + (ymax - float(y)) * SCALE:.3f}" for x, y in pts)


def render_svg(region, splitting, cx, path, table=None) -> Path:
    """Write a two-panel figure (normalized coordinates) and return its path.

    Left: every cell of ``cx`` once, as ``<polygon id="cell-i">``, filled by
    profile.  Right: the region with its parts in distinct colors, its
    outline and the integer points nearby, plus a legend.
    """
    if cx.dimension != 2 or region.dim != 2:
        raise DimensionError(f"SVG rendering needs a 2D instance, got {cx.dimension}D")
    (x0, y0), (x1, y1) = region.bounding_box()
    x0, y0 = math.floor(x0), math.floor(y0)
    x1, y1 = math.ceil(x1), math.ceil(y1)
    left_w = SCALE
    right_ox = MARGIN * 2 + left_w
    width = right_ox + (x1 - x0) * SCALE + MARGIN
    k = splitting.level
    legend_h = 18 * (k + 1)
    height = MARGIN * 2 + max(1, y1 - y0) * SCALE + legend_h
    svg = ET.Element(
        "svg", xmlns="http://www.w3.org/2000/svg", width=f"{width:.0f}", height=f"{height:.0f}",
        viewBox=f"0 0 {width:.0f} {height:.0f}",
    )
    ET.SubElement(svg, "title").text = f"level-{k} tiling, {len(cx.cells)} cells"

    cells_g = ET.SubElement(svg, "g", id="cells")
    profile_of = table.cell_profile if table is not None else None
    for i, cell in enumerate(cx.cells):
        color = PALETTE[(profile_of[i] if profile_of is not None else 0) % len(PALETTE)]
        poly = ET.SubElement(
            cells_g, "polygon", id=f"cell-{i}",
            points=_points_attr(_outline(cell.shape), MARGIN, MARGIN, 1),
            fill=color, stroke="#222", **{"stroke-width": "0.5"},
        )
        poly.set("data-translates", ";".join(",".join(map(str, t)) for t in cell.translates))

    # right panel: y measured from the top of the region's integer hull
    ox = right_ox - x0 * SCALE
    parts_g = ET.SubElement(svg, "g", id="parts")
    for j, part in enumerate(splitting.parts):
        color = PALETTE[j % len(PALETTE)]
        for cell_no, (cell, t) in enumerate(part):
            shape = cell.shape.translate(t)
            ET.SubElement(
                parts_g, "polygon", id=f"part{j + 1}-piece{cell_no}",
                points=_points_attr(_outline(shape), ox, MARGIN, y1),
                fill=color, **{"fill-opacity": "0.8"},
            )
    outline_g = ET.SubElement(svg, "g", id="outline", fill="none", stroke="#000")
    shapes = region.boxes if isinstance(region, BoxUnion) else [region]
    for shape in shapes:
        ET.SubElement(outline_g, "polygon", points=_points_attr(_outline(shape), ox, MARGIN, y1),
                      **{"stroke-width": "1.5"})
    lattice_g = ET.SubElement(svg, "g", id="lattice", fill="#000")
    for gx in range(x0, x1 + 1):
        for gy in range(y0, y1 + 1):
            ET.SubElement(lattice_g, "circle", cx=f"{ox + gx * SCALE:.3f}",
                          cy=f"{MARGIN + (y1 - gy) * SCALE:.3f}", r="2")

    legend = ET.SubElement(svg, "g", id="legend", **{"font-size": "12", "font-family": "sans-serif"})
    ly = MARGIN * 1.5 + max(1, y1 - y0) * SCALE
    for j in range(k):
        ET.SubElement(legend, "rect", x=f"{MARGIN}", y=f"{ly + 18 * j:.1f}", width="12", height="12",
                      fill=PALETTE[j % len(PALETTE)])
        ET.SubElement(legend, "text", x=f"{MARGIN + 18}", y=f"{ly + 18 * j + 11:.1f}").text = f"part {j + 1}"

    path = Path(path)
    ET.ElementTree(svg).write(path, encoding="utf-8", xml_declaration=True)
    return path

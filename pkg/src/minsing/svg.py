"""SVG drawings of planar regions with their lattice points.

The region path is written in data coordinates inside a group that flips
the y axis, so the ``d`` attribute can be read back and tested directly
against lattice points.
"""

from __future__ import annotations

import math
from typing import Sequence

from .geometry import DEFAULT_TOL, ConvexRegion, bounding_box, boundary_polygon, lattice_points


def plot_box(region: ConvexRegion, margin: float = 1.0) -> tuple:
    """A drawing window: the bounding box of the base, widened for a recession cone."""
    lows, highs = bounding_box(region.base())
    lows = [math.floor(float(x)) - margin for x in lows]
    highs = [math.ceil(float(x)) + margin for x in highs]
    if region.recession:
        extra = max(h - lo for lo, h in zip(lows, highs))
        highs = [h + extra for h in highs]
    return tuple(lows), tuple(highs)


def path_data(polygon: Sequence[Sequence[float]]) -> str:
    pts = [f"{x!r} {y!r}" for x, y in polygon]
    return "M " + " L ".join(pts) + " Z"


def parse_path(d: str) -> list[tuple]:
    """Inverse of :func:`path_data`."""
    body = d.strip().removeprefix("M").removesuffix("Z")
    out = []
    for chunk in body.split("L"):
        x, y = chunk.split()
        out.append((float(x), float(y)))
    return out


def region_svg(
    region: ConvexRegion,
    title: str = "",
    box: tuple | None = None,
    samples: int = 256,
    tol: float = DEFAULT_TOL,
) -> str:
    """Shaded region, its integer points as dots, and the coordinate axes."""
    if box is None:
        box = plot_box(region)
    (x0, y0), (x1, y1) = box
    poly = boundary_polygon(region, samples, box if region.recession else None, tol)
    pts = lattice_points(region, box=box, tol=tol) if region.recession else lattice_points(region, tol=tol)
    w, h = x1 - x0, y1 - y0
    unit = w / 200
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="480" height="{480 * h / w:.0f}" '
        f'viewBox="{x0!r} {-y1!r} {w!r} {h!r}">',
    ]
    if title:
        lines.append(f"  <title>{title}</title>")
    lines += [
        '  <g transform="scale(1,-1)">',
        f'    <line x1="{x0!r}" y1="0" x2="{x1!r}" y2="0" stroke="black" stroke-width="{unit!r}"/>',
        f'    <line x1="0" y1="{y0!r}" x2="0" y2="{y1!r}" stroke="black" stroke-width="{unit!r}"/>',
        f'    <path id="region" d="{path_data(poly)}" fill="#9ecae1" fill-opacity="0.7" '
        f'stroke="#08519c" stroke-width="{unit!r}"/>',
    ]
    for p in pts:
        lines.append(
            f'    <circle class="lattice" cx="{float(p[0])!r}" cy="{float(p[1])!r}" r="{2 * unit!r}" fill="#08306b"/>'
        )
    lines += ["  </g>", "</svg>"]
    return "\n".join(lines) + "\n"

#!/usr/bin/env python3
"""
Drawings of arcs on the n x n grid, origin at the bottom-left with y growing upward.
"""

from typing import List

import svgwrite

from arc_model import ArcSet
from errors import MalformedCertificate

CELL = 15
MARGIN = 15
DOT_RADIUS = 4
MEMBER, EMPTY = "*", "."


def render_ascii(X: ArcSet) -> str:
    """n rows of n cells, top row is y = n - 1"""
    n = X.n
    members = {p.xy for p in X.points}
    rows = ["".join(MEMBER if (x, y) in members else EMPTY for x in range(n))
            for y in reversed(range(n))]
    return "\n".join(rows) + "\n"


def parse_ascii(text: str) -> ArcSet:
    rows: List[str] = [r.strip() for r in text.strip().splitlines()]
    n = len(rows)
    if any(len(r) != n or set(r) - {MEMBER, EMPTY} for r in rows):
        raise MalformedCertificate(f"not an {n} x {n} grid of '{MEMBER}' and '{EMPTY}'")
    return ArcSet.of(n, ((x, n - 1 - i) for i, row in enumerate(rows)
                         for x, ch in enumerate(row) if ch == MEMBER))


def _coord(n: int, x: int, y: int):
    return MARGIN + x * CELL, MARGIN + (n - 1 - y) * CELL


def render_svg(X: ArcSet) -> str:
    """Ruled grid with a filled circle on every arc point"""
    n = X.n
    side = 2 * MARGIN + (n - 1) * CELL
    dwg = svgwrite.Drawing(profile="full", size=(side, side))
    grid = dwg.add(dwg.g(id="grid", stroke="gray", stroke_width=1))
    for k in range(n):
        grid.add(dwg.line(start=_coord(n, k, 0), end=_coord(n, k, n - 1)))
        grid.add(dwg.line(start=_coord(n, 0, k), end=_coord(n, n - 1, k)))
    dots = dwg.add(dwg.g(id="arc", fill="black"))
    for p in X.points:
        dots.add(dwg.circle(center=_coord(n, p.x, p.y), r=DOT_RADIUS))
    return dwg.tostring()

#!/usr/bin/env python3
"""
Lines of Z_n^2 and collinearity.

A line is the image mod n of an integer line {(a + u*k, b + v*k)} with
gcd(u, v) = 1, i.e. a coset of a maximal cyclic subgroup. For squarefree n
three points are collinear iff D(a, b, c) = 0; for other n the determinant
is only necessary, and collinearity is decided by line membership (split over
the prime-power factors of n).
"""

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Set, Tuple

import numpy as np

from errors import ArcError, MixedModuli, NotPrimitive, NotSquarefree
from modular_core import (
    Point, same_modulus, det3, is_prime, is_squarefree, prime_power_parts, project, units,
)


class Direction(NamedTuple):
    u: int
    v: int
    n: int

    @classmethod
    def of(cls, u: int, v: int, n: int) -> "Direction":
        return cls(u % n, v % n, n)

    @property
    def is_primitive(self) -> bool:
        return gcd(gcd(self.u, self.v), self.n) == 1

    def canonical(self) -> "Direction":
        """Lexicographically least unit multiple"""
        u, v = min(((w * self.u) % self.n, (w * self.v) % self.n) for w in units(self.n))
        return Direction(u, v, self.n)

    @property
    def is_canonical(self) -> bool:
        return self.is_primitive and self.canonical() == self


@lru_cache(maxsize=None)
def primitive_directions(n: int) -> Tuple[Direction, ...]:
    """One canonical representative per cyclic subgroup of order n"""
    dirs = []
    for u in range(n):
        for v in range(n):
            d = Direction(u, v, n)
            if d.is_primitive and d.canonical() == d:
                dirs.append(d)
    return tuple(dirs)


@dataclass(frozen=True, eq=False)
class Line:
    """A line of Z_n^2; equality is by point set, not by parameterization"""
    base: Point
    direction: Direction
    points: Tuple[Point, ...]

    def __eq__(self, other) -> bool:
        return isinstance(other, Line) and self.points == other.points

    def __hash__(self) -> int:
        return hash(self.points)

    def __contains__(self, p: Point) -> bool:
        return p in self.point_set

    def __len__(self) -> int:
        return len(self.points)

    @property
    def point_set(self) -> FrozenSet[Point]:
        return frozenset(self.points)

    def __str__(self) -> str:
        return " ".join(str(p) for p in self.points)


def line_from(base: Point, direction: Direction) -> Line:
    if direction.n != base.n:
        raise MixedModuli(f"base in Z_{base.n}, direction in Z_{direction.n}")
    if not direction.is_primitive:
        raise NotPrimitive(f"direction ({direction.u},{direction.v}) is not primitive mod {direction.n}")
    n = base.n
    pts = tuple(sorted(Point((base.x + k * direction.u) % n, (base.y + k * direction.v) % n, n)
                       for k in range(n)))
    return Line(base, direction, pts)


@dataclass(frozen=True, eq=False)
class LineTable:
    """All distinct lines of Z_n^2 with a point -> line ids index; immutable once built"""
    n: int
    lines: Tuple[Line, ...]
    incidence: Dict[Point, Tuple[int, ...]] = field(repr=False)

    def __len__(self) -> int:
        return len(self.lines)

    def lines_at(self, a: Point) -> Tuple[int, ...]:
        return self.incidence[a]

    def lines_through(self, a: Point, b: Point) -> List[int]:
        """Ids of all lines containing both a and b, in id order"""
        common = set(self.incidence[a]).intersection(self.incidence[b])
        return sorted(common)

    def has_common_line(self, a: Point, b: Point, c: Point) -> bool:
        return any(c in self.lines[i] for i in self.lines_through(a, b))

    def incidence_matrix(self) -> np.ndarray:
        """0/1 matrix, one row per line id, one column per point in lexicographic order (x*n + y)"""
        matrix = np.zeros((len(self.lines), self.n * self.n), dtype=np.uint8)
        for i, line in enumerate(self.lines):
            for p in line.points:
                matrix[i, p.x * self.n + p.y] = 1
        return matrix

    def rows(self) -> List[str]:
        return [str(line) for line in self.lines]


@lru_cache(maxsize=None)
def enumerate_lines(n: int) -> LineTable:
    """
    Every line of Z_n^2, ids assigned in lexicographic order of sorted point sets.
    Each direction contributes n parallel lines (its cosets).
    """
    found: Dict[Tuple[Point, ...], Line] = {}
    for d in primitive_directions(n):
        covered: Set[Tuple[int, int]] = set()
        for x in range(n):
            for y in range(n):
                if (x, y) in covered:
                    continue
                line = line_from(Point(x, y, n), d)
                covered.update(p.xy for p in line.points)
                found.setdefault(line.points, line)
    lines = tuple(found[key] for key in sorted(found))
    incidence: Dict[Point, List[int]] = {Point(x, y, n): [] for x in range(n) for y in range(n)}
    for i, line in enumerate(lines):
        for p in line.points:
            incidence[p].append(i)
    return LineTable(n, lines, {p: tuple(ids) for p, ids in incidence.items()})


@lru_cache(maxsize=None)
def _subgroups(q: int) -> Tuple[FrozenSet[Tuple[int, int]], ...]:
    return tuple(frozenset(((k * d.u) % q, (k * d.v) % q) for k in range(q))
                 for d in primitive_directions(q))


@lru_cache(maxsize=None)
def _through_origin(q: int, dx: int, dy: int) -> FrozenSet[Tuple[int, int]]:
    """Points c of Z_q^2 with (0,0), d, c collinear: union of the subgroups containing d"""
    hits: Set[Tuple[int, int]] = set()
    for group in _subgroups(q):
        if (dx, dy) in group:
            hits |= group
    return frozenset(hits)


def _collinear_prime_power(a: Point, b: Point, c: Point) -> bool:
    q = a.n
    d, e = b - a, c - a
    if d.xy == (0, 0) or e.xy == (0, 0):
        return True
    return e.xy in _through_origin(q, d.x, d.y)


def collinear_det(a: Point, b: Point, c: Point) -> bool:
    n = same_modulus(a, b, c)
    if not is_squarefree(n):
        raise NotSquarefree(f"determinant test is unsound mod {n}")
    return det3(a, b, c).value == 0


def collinear(a: Point, b: Point, c: Point, table: Optional[LineTable] = None) -> bool:
    """
    Three points are collinear iff some line contains all of them.
    Repeated points count as collinear.
    """
    n = same_modulus(a, b, c)
    if a == b or a == c or b == c:
        return True
    if table is not None:
        return table.has_common_line(a, b, c)
    if is_squarefree(n):
        return det3(a, b, c).value == 0
    # collinear mod n iff collinear mod every coprime prime-power factor
    for q in prime_power_parts(n):
        pa, pb, pc = project(a, q), project(b, q), project(c, q)
        if is_prime(q):
            if det3(pa, pb, pc).value != 0:
                return False
        elif not _collinear_prime_power(pa, pb, pc):
            return False
    return True


def det_zero_points(a: Point, b: Point) -> List[Point]:
    """All c with D(a, b, c) = 0, by a vectorized scan"""
    n = same_modulus(a, b)
    xs, ys = np.meshgrid(np.arange(n), np.arange(n))
    det = ((b.x - a.x) * (ys - a.y) - (xs - a.x) * (b.y - a.y)) % n
    return [Point(int(x), int(y), n) for y, x in np.argwhere(det == 0)]


def blocked_points(a: Point, b: Point, table: Optional[LineTable] = None) -> Set[Point]:
    """
    Points c (other than a, b) collinear with a and b.
    With a table: union of the lines through a and b. Otherwise determinant
    scan for squarefree n, general oracle scan for the rest.
    """
    n = same_modulus(a, b)
    if a == b:
        raise ArcError("blocked_points needs two distinct points")
    if table is not None:
        hits = set()
        for i in table.lines_through(a, b):
            hits.update(table.lines[i].points)
    elif is_squarefree(n):
        hits = set(det_zero_points(a, b))
    else:
        hits = {c for x in range(n) for y in range(n)
                for c in (Point(x, y, n),) if collinear(a, b, c)}
    hits.discard(a)
    hits.discard(b)
    return hits

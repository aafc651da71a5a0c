#!/usr/bin/env python3
"""
Exact maximum-arc search over Z_n^2.

Backtracking over cells in row-major order (y major, x minor). Selecting a
cell marks every cell collinear with it and an earlier selection OUT; a
subtree is pruned when an admissible upper bound cannot beat the best arc so
far. The torus is a pair of int bitmasks (IN, OUT), bit y*n + x per cell.

Modes:
    generic    prime n: fixes the triangle (0,0), (1,0), (0,1).
               composite n: one root {(0,0), (d,0)} per divisor d < n, in
               increasing d. GL_2(Z_n) sends any difference of content d
               (gcd of its coordinates and n) to (d,0), so the root for d
               covers every arc whose smallest pairwise content is d, and
               no two of its points may differ by a vector of smaller content.
    seeded_2p  n = 2p, p >= 5 prime; fixes the triangle and excludes the three
               translates a + (p,0), a + (0,p), a + (p,p) of every selected a,
               which is exact for arcs larger than p + 3

Every root carries a group of affine maps fixing it as a set. Once the first
point below the root has been explored, its whole orbit under that group is
set OUT. symmetry=False drops all of this and fixes (0,0) only.

Parallel runs split the tree into jobs (split_work) executed in a process pool;
workers share one monotonically increasing best size and the merge reproduces
the serial arc exactly.
"""

import logging
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import permutations
from math import gcd
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple, Union

from arc_model import AffineMap, ArcSet, SEED, is_arc, is_complete
from certificates import Certificate, from_arcset
from config import DEFAULT_THREADS, PROGRESS_EVERY, SPLIT_DEPTH
from errors import BudgetExhausted, CellNotFree, InvalidMode, NotAnArc
from geometry import blocked_points, enumerate_lines
from modular_core import Modulus, Point, is_prime, is_squarefree, units

logger = logging.getLogger(__name__)

MODES = ("generic", "seeded_2p")
BOUNDS = ("free", "pencil")
SHARED_POLL = 1024

# Set in pool workers by _init_worker
_shared_best = None


@dataclass(frozen=True)
class SearchOptions:
    mode: str = "generic"
    threads: int = DEFAULT_THREADS
    node_budget: Optional[int] = None
    initial_best: int = 0
    split_depth: int = SPLIT_DEPTH
    progress_every: int = PROGRESS_EVERY
    bounds: Tuple[str, ...] = BOUNDS
    include: Tuple[Tuple[int, int], ...] = ()
    exclude: Tuple[Tuple[int, int], ...] = ()
    debug: bool = False
    fallback: bool = True
    symmetry: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidMode(f"unknown mode {self.mode!r}, expected one of {MODES}")
        if self.threads < 1:
            raise InvalidMode(f"threads must be >= 1, got {self.threads}")
        if self.split_depth < 0:
            raise InvalidMode(f"split depth must be >= 0, got {self.split_depth}")
        if self.node_budget is not None and self.node_budget < 1:
            raise InvalidMode(f"node budget must be >= 1, got {self.node_budget}")
        unknown = set(self.bounds) - set(BOUNDS)
        if unknown:
            raise InvalidMode(f"unknown bounds {sorted(unknown)}")
        if self.mode == "seeded_2p" and (self.include or self.exclude):
            raise InvalidMode("include/exclude constraints are not allowed in seeded_2p mode")

    @property
    def constrained(self) -> bool:
        return bool(self.include or self.exclude)


@dataclass
class SearchResult:
    n: int
    best: ArcSet
    proven: bool
    nodes: int
    wall_time: float
    mode: str = "generic"
    tau_lower: Optional[int] = None
    tau_upper: Optional[int] = None
    fallback: bool = False
    exhausted: bool = False

    @property
    def size(self) -> int:
        return len(self.best)


class TorusGeometry:
    """Per-modulus bitmask tables: cell order, blocked pair masks, line pencils"""

    def __init__(self, n: int):
        Modulus(n)
        self.n = n
        self.size = n * n
        self.full = (1 << self.size) - 1
        self.cells = tuple(Point(c % n, c // n, n) for c in range(self.size))
        self.squarefree = is_squarefree(n)
        self._offsets: Dict[Tuple[int, int], Tuple[Tuple[int, int], ...]] = {}
        self._pairs: Dict[Tuple[int, int], int] = {}
        self._pencils: Optional[Tuple[Tuple[int, ...], ...]] = None
        self._thin: Dict[int, Tuple[Tuple[int, int], ...]] = {}
        self._near: Dict[Tuple[int, int], int] = {}

    def cell(self, x: int, y: int) -> int:
        return (y % self.n) * self.n + (x % self.n)

    def mask_of(self, coords) -> int:
        mask = 0
        for x, y in coords:
            mask |= 1 << self.cell(x, y)
        return mask

    def _blocked_offsets(self, dx: int, dy: int) -> Tuple[Tuple[int, int], ...]:
        """Cells collinear with the origin and (dx, dy); blocked sets are translation invariant"""
        key = (dx, dy)
        if key not in self._offsets:
            origin, d = Point(0, 0, self.n), Point(dx, dy, self.n)
            table = None if self.squarefree else enumerate_lines(self.n)
            self._offsets[key] = tuple(sorted(c.xy for c in blocked_points(origin, d, table)))
        return self._offsets[key]

    def pair_mask(self, i: int, j: int) -> int:
        key = (i, j) if i < j else (j, i)
        mask = self._pairs.get(key)
        if mask is None:
            a, b = self.cells[key[0]], self.cells[key[1]]
            n = self.n
            mask = 0
            for ox, oy in self._blocked_offsets((b.x - a.x) % n, (b.y - a.y) % n):
                mask |= 1 << (((a.y + oy) % n) * n + (a.x + ox) % n)
            self._pairs[key] = mask
        return mask

    @property
    def pencils(self) -> Tuple[Tuple[int, ...], ...]:
        """Per cell: masks of the lines through it"""
        if self._pencils is None:
            table = enumerate_lines(self.n)
            line_masks = [self.mask_of(p.xy for p in line.points) for line in table.lines]
            self._pencils = tuple(tuple(line_masks[i] for i in table.lines_at(p)) for p in self.cells)
        return self._pencils

    def translates_mask(self, c: int) -> int:
        """a + (p,0), a + (0,p), a + (p,p) for n = 2p"""
        p = self.n // 2
        a = self.cells[c]
        return self.mask_of(((a.x + p, a.y), (a.x, a.y + p), (a.x + p, a.y + p)))

    def content(self, c: int) -> int:
        """gcd(x, y, n) of a cell read as a vector; n for the origin"""
        a = self.cells[c]
        return gcd(a.x, a.y, self.n)

    def near_mask(self, c: int, d: int) -> int:
        """Cells e with content(e - c) < d"""
        key = (c, d)
        mask = self._near.get(key)
        if mask is None:
            if d not in self._thin:
                self._thin[d] = tuple(v.xy for v in self.cells if gcd(v.x, v.y, self.n) < d)
            a = self.cells[c]
            mask = self.mask_of((a.x + ox, a.y + oy) for ox, oy in self._thin[d])
            self._near[key] = mask
        return mask

    def cells_in(self, mask: int) -> Tuple[int, ...]:
        found = []
        while mask:
            low = mask & -mask
            found.append(low.bit_length() - 1)
            mask ^= low
        return tuple(found)

    def arc_of(self, cells) -> ArcSet:
        return ArcSet.of(self.n, (self.cells[c] for c in cells))


@lru_cache(maxsize=None)
def torus_geometry(n: int) -> TorusGeometry:
    return TorusGeometry(n)


class SearchState:
    """IN / OUT masks and the selection stack; FREE is everything else"""

    def __init__(self, geometry: TorusGeometry, seeded: bool = False, content: int = 1):
        self.geometry = geometry
        self.seeded = seeded
        # minimum content of any difference between two selected points
        self.content = content
        self.in_mask = 0
        self.out_mask = 0
        self.solution: List[int] = []

    @property
    def free_mask(self) -> int:
        return self.geometry.full & ~(self.in_mask | self.out_mask)

    @property
    def in_count(self) -> int:
        return len(self.solution)

    @property
    def free_count(self) -> int:
        return self.free_mask.bit_count()

    @property
    def out_count(self) -> int:
        return self.out_mask.bit_count()

    def is_free(self, c: int) -> bool:
        return not ((self.in_mask | self.out_mask) >> c) & 1

    def snapshot(self) -> Tuple[int, int, int]:
        return self.in_mask, self.out_mask, len(self.solution)

    def restore(self, snap: Tuple[int, int, int]) -> None:
        self.in_mask, self.out_mask, k = snap
        del self.solution[k:]

    def select(self, c: int) -> None:
        if not self.is_free(c):
            raise CellNotFree(f"cell {self.geometry.cells[c]} is not free")
        out = self.out_mask
        for s in self.solution:
            out |= self.geometry.pair_mask(s, c)
        if self.seeded:
            out |= self.geometry.translates_mask(c)
        if self.content > 1:
            out |= self.geometry.near_mask(c, self.content)
        self.in_mask |= 1 << c
        self.out_mask = out & ~self.in_mask
        self.solution.append(c)

    def set_out(self, c: int) -> None:
        self.out_mask |= (1 << c) & ~self.in_mask

    def next_free(self, start: int) -> Optional[int]:
        rest = self.free_mask >> start
        if not rest:
            return None
        return start + (rest & -rest).bit_length() - 1

    def points(self) -> List[Point]:
        return [self.geometry.cells[c] for c in self.solution]


def select_point(state: SearchState, p: Point) -> SearchState:
    """Mark p IN and everything it now blocks OUT"""
    state.select(state.geometry.cell(p.x, p.y))
    return state


class Job(NamedTuple):
    """A subtree: cells selected below the root, cells set OUT on the way, next candidate"""
    path: Tuple[int, ...]
    excluded: Tuple[int, ...]
    start: int
    root: int = 0


@dataclass
class _Root:
    state: SearchState
    start: int
    size: int
    index: int = 0
    symmetries: Tuple[AffineMap, ...] = ()
    _orbits: Dict[int, int] = field(default_factory=dict)

    def orbit_mask(self, c: int) -> int:
        """Images of cell c under the maps fixing the root"""
        mask = self._orbits.get(c)
        if mask is None:
            geometry = self.state.geometry
            a = geometry.cells[c]
            mask = 1 << c
            for f in self.symmetries:
                b = f(a)
                mask |= 1 << geometry.cell(b.x, b.y)
            self._orbits[c] = mask
        return mask


def triangle_symmetries(n: int) -> Tuple[AffineMap, ...]:
    """The six affine maps permuting (0,0), (1,0), (0,1)"""
    maps = []
    for (ax, ay), (bx, by), (cx, cy) in permutations(SEED):
        maps.append(AffineMap(n, bx - ax, cx - ax, by - ay, cy - ay, ax, ay))
    return tuple(maps)


def pair_symmetries(n: int, d: int) -> Tuple[AffineMap, ...]:
    """
    Maps fixing {(0,0), (d,0)} as a set: (x, y) -> (x + a*y, u*y) for a in
    Z_n and u a unit, each also composed with v -> (d,0) - v.
    """
    maps = []
    for u in units(n):
        for a in range(n):
            maps.append(AffineMap(n, 1, a, 0, u))
            maps.append(AffineMap(n, -1, -a, 0, -u, d, 0))
    return tuple(maps)


def _make_roots(geometry: TorusGeometry, options: SearchOptions) -> List[_Root]:
    """Search roots in the order the serial run visits them"""
    n = geometry.n
    seeded = options.mode == "seeded_2p"
    if options.constrained:
        state = SearchState(geometry)
        try:
            for x, y in options.include:
                state.select(geometry.cell(x, y))
        except CellNotFree as e:
            raise NotAnArc(f"included points are not an arc: {e}") from e
        for x, y in options.exclude:
            state.set_out(geometry.cell(x, y))
        return [_Root(state, 0, len(state.solution))]
    if seeded or (options.symmetry and is_prime(n)):
        state = SearchState(geometry, seeded=seeded)
        for x, y in SEED:
            state.select(geometry.cell(x, y))
        symmetries = triangle_symmetries(n) if options.symmetry else ()
        return [_Root(state, geometry.cell(1, 1), 3, symmetries=symmetries)]
    if not options.symmetry:
        state = SearchState(geometry)
        state.select(geometry.cell(0, 0))
        return [_Root(state, 1, 1)]
    roots = []
    for d in (d for d in range(1, n) if n % d == 0):
        state = SearchState(geometry, content=d)
        state.select(geometry.cell(0, 0))
        state.select(geometry.cell(d, 0))
        roots.append(_Root(state, 0, 2, index=len(roots), symmetries=pair_symmetries(n, d)))
    return roots


def _check_mode(n: int, options: SearchOptions) -> None:
    if options.mode == "seeded_2p":
        p = n // 2
        if n % 2 or p < 5 or not is_prime(p):
            raise InvalidMode(f"seeded_2p needs n = 2p with p >= 5 prime, got n = {n}")


def _retire(root: _Root, state: SearchState, c: int, top: bool) -> int:
    """Set c OUT after its subtree; at the top level its whole orbit goes too"""
    gone = (root.orbit_mask(c) if top else 1 << c) & state.free_mask
    state.out_mask |= gone
    return gone


def split_work(root: _Root, depth: int) -> Iterator[Job]:
    """
    Jobs in the order the serial search visits them. Replaying every job and
    keeping the first largest arc gives the serial answer.
    """
    state = root.state
    geometry = state.geometry

    def walk(start: int, remaining: int, excluded: Tuple[int, ...]) -> Iterator[Job]:
        c = state.next_free(start)
        if remaining == 0 or c is None:
            yield Job(tuple(state.solution[root.size:]), excluded, start, root.index)
            return
        top = bool(root.symmetries) and len(state.solution) == root.size
        while c is not None:
            snap = state.snapshot()
            state.select(c)
            yield from walk(c + 1, remaining - 1, excluded)
            state.restore(snap)
            excluded += geometry.cells_in(_retire(root, state, c, top))
            c = state.next_free(c + 1)

    snap = state.snapshot()
    try:
        yield from walk(root.start, depth, ())
    finally:
        state.restore(snap)


class _Search:
    """Depth-first runs over one or more roots, sharing the best arc"""

    def __init__(self, geometry: TorusGeometry, options: SearchOptions):
        self.geometry = geometry
        self.options = options
        self.root: Optional[_Root] = None
        self.nodes = 0
        self.best: Tuple[int, ...] = ()
        self.floor = options.initial_best
        self.use_free = "free" in options.bounds
        self.use_pencil = "pencil" in options.bounds

    def upper(self, state: SearchState) -> int:
        bound = self.geometry.size
        if self.use_free:
            bound = state.in_count + state.free_count
        if self.use_pencil and state.solution:
            pencils = self.geometry.pencils
            live = state.free_mask | state.in_mask
            for a in state.solution:
                others = live & ~(1 << a)
                bound = min(bound, 1 + sum(1 for m in pencils[a] if m & others))
        return bound

    def pruned(self, state: SearchState) -> bool:
        upper = self.upper(state)
        return upper <= len(self.best) or upper < self.floor

    def _visit(self, state: SearchState) -> None:
        self.nodes += 1
        budget = self.options.node_budget
        if budget is not None and self.nodes > budget:
            raise BudgetExhausted(f"node budget {budget} exhausted")
        if self.options.debug and not is_arc(self.geometry.arc_of(state.solution)):
            raise NotAnArc(f"search state is not an arc: {state.points()}")
        if len(state.solution) > len(self.best):
            self.best = tuple(state.solution)
            self._publish(len(self.best))
        if self.nodes % SHARED_POLL == 0 and _shared_best is not None:
            self.floor = max(self.floor, _shared_best.value)
        every = self.options.progress_every
        if every and self.nodes % every == 0:
            logger.info(f"nodes={self.nodes} best={len(self.best)}")

    def _publish(self, size: int) -> None:
        if _shared_best is None:
            return
        with _shared_best.get_lock():
            if _shared_best.value < size:
                _shared_best.value = size

    def attempt(self, state: SearchState, start: int) -> None:
        self._visit(state)
        if self.pruned(state):
            return
        root = self.root
        top = bool(root.symmetries) and len(state.solution) == root.size
        c = state.next_free(start)
        while c is not None:
            snap = state.snapshot()
            state.select(c)
            self.attempt(state, c + 1)
            state.restore(snap)
            _retire(root, state, c, top)
            if self.pruned(state):
                return
            c = state.next_free(c + 1)

    def run(self, root: _Root, state: SearchState, start: int) -> bool:
        """Returns True when the subtree was exhausted"""
        self.root = root
        try:
            self.attempt(state, start)
        except BudgetExhausted:
            logger.warning(f"budget exhausted after {self.nodes} nodes, best={len(self.best)}")
            return False
        return True


def _replay(root: _Root, job: Job) -> SearchState:
    state = root.state
    for c in job.excluded:
        state.set_out(c)
    for c in job.path:
        state.select(c)
    return state


def _run_job(n: int, options: SearchOptions, index: int, job: Job) -> Tuple[int, Tuple[int, ...], int, bool]:
    geometry = torus_geometry(n)
    root = _make_roots(geometry, options)[job.root]
    search = _Search(geometry, options)
    complete = search.run(root, _replay(root, job), job.start)
    return index, search.best, search.nodes, complete


def _init_worker(shared) -> None:
    global _shared_best
    _shared_best = shared


def _context():
    try:
        return multiprocessing.get_context("fork")
    except ValueError:
        return multiprocessing.get_context()


def _pool(threads: int, shared) -> ProcessPoolExecutor:
    return ProcessPoolExecutor(max_workers=threads, mp_context=_context(),
                               initializer=_init_worker, initargs=(shared,))


def _search(n: int, options: SearchOptions) -> Tuple[Tuple[int, ...], int, bool]:
    """(best cells, nodes, exhausted) for one mode, serial or parallel"""
    geometry = torus_geometry(n)
    roots = _make_roots(geometry, options)
    logger.debug(f"n={n}: {len(roots)} search roots")
    if options.threads == 1 or options.split_depth == 0:
        search = _Search(geometry, options)
        for root in roots:
            if not search.run(root, root.state, root.start):
                return search.best, search.nodes, True
        return search.best, search.nodes, False

    jobs = [job for root in roots for job in split_work(root, options.split_depth)]
    logger.info(f"dispatching {len(jobs)} jobs to {options.threads} workers")
    shared = _context().Value("i", options.initial_best)
    with _pool(options.threads, shared) as executor:
        futures = [executor.submit(_run_job, n, options, i, job) for i, job in enumerate(jobs)]
        outcomes = sorted(f.result() for f in futures)

    best: Tuple[int, ...] = ()
    nodes = 0
    exhausted = False
    for _, cells, job_nodes, complete in outcomes:
        nodes += job_nodes
        exhausted |= not complete
        # first largest in job order, as the serial run would see it
        if len(cells) > len(best):
            best = cells
    return best, nodes, exhausted


def solve(n: Union[int, Modulus], options: Optional[SearchOptions] = None) -> SearchResult:
    """
    Largest arc of Z_n^2.

    A node budget cut is reported as exhausted=True, proven=False with the
    best arc found so far.

    Raises:
        InvalidMode: seeded_2p for n other than 2p with p >= 5 prime
    """
    n = n.n if isinstance(n, Modulus) else n
    Modulus(n)
    options = options or SearchOptions()
    _check_mode(n, options)
    geometry = torus_geometry(n)
    started = time.perf_counter()

    best, nodes, exhausted = _search(n, options)
    result = SearchResult(n=n, best=geometry.arc_of(best), proven=not exhausted, nodes=nodes,
                          wall_time=0.0, mode=options.mode, exhausted=exhausted)
    if options.mode == "seeded_2p" and not exhausted:
        p = n // 2
        if result.size > p + 3:
            result.tau_lower = result.tau_upper = result.size
        elif options.fallback:
            logger.info(f"seeded best {result.size} <= p + 3 = {p + 3}, rerunning in generic mode")
            generic = replace(options, mode="generic", initial_best=max(options.initial_best, result.size))
            g_best, g_nodes, g_exhausted = _search(n, generic)
            if len(g_best) >= result.size:
                result.best = geometry.arc_of(g_best)
            result.nodes += g_nodes
            result.exhausted = g_exhausted
            result.proven = not g_exhausted
            result.fallback = True
            if result.proven:
                result.tau_lower = result.tau_upper = result.size
        else:
            result.proven = False
            result.tau_lower = max(p + 1, result.size)
            result.tau_upper = p + 3
    elif result.proven and not options.constrained:
        result.tau_lower = result.tau_upper = result.size
    elif not options.constrained:
        result.tau_lower = result.size

    result.wall_time = time.perf_counter() - started
    logger.info(f"solve n={n} mode={options.mode}: size={result.size} proven={result.proven} "
                f"nodes={result.nodes} time={result.wall_time:.2f}s")
    return result


def certify(result: SearchResult) -> Certificate:
    if not is_arc(result.best):
        raise NotAnArc(f"search result for n={result.n} is not an arc")
    return from_arcset(result.best, arc=True, complete=is_complete(result.best), maximum=result.proven)

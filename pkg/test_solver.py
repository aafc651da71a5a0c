#!/usr/bin/env python3
"""
Test the exact maximum-arc search
"""

import logging
from itertools import combinations
from math import gcd

import pytest

from arc_model import SEED, is_arc, is_complete
from certificates import verify_certificate
from errors import CellNotFree, InvalidMode, NotAnArc
from geometry import blocked_points, collinear, enumerate_lines
from modular_core import Modulus, Point, units
from solver import (
    Job, SearchOptions, SearchState, _make_roots, _run_job, certify, pair_symmetries, select_point, solve, split_work,
    torus_geometry, triangle_symmetries,
)


def grown_maximum(n: int) -> int:
    """Largest arc through the origin, grown one point at a time with no pruning"""
    pts = Modulus(n).points()
    best = 1

    def grow(current, start):
        nonlocal best
        best = max(best, len(current))
        for i in range(start, len(pts)):
            c = pts[i]
            if not any(collinear(a, b, c) for a, b in combinations(current, 2)):
                current.append(c)
                grow(current, i + 1)
                current.pop()

    grow([pts[0]], 1)
    return best


def cells_of(state: SearchState, mask: int):
    return {state.geometry.cells[c] for c in range(state.geometry.size) if (mask >> c) & 1}


def test_select_point_blocks_pair_line():
    state = SearchState(torus_geometry(6))
    select_point(state, Point(0, 0, 6))
    assert state.in_count == 1 and state.out_count == 0
    select_point(state, Point(1, 0, 6))
    assert cells_of(state, state.out_mask) == blocked_points(Point(0, 0, 6), Point(1, 0, 6))
    assert state.in_count + state.free_count + state.out_count == 36
    with pytest.raises(CellNotFree):
        select_point(state, Point(3, 0, 6))
    with pytest.raises(CellNotFree):
        select_point(state, Point(1, 0, 6))


def test_seeded_select_excludes_translates():
    state = SearchState(torus_geometry(10), seeded=True)
    select_point(state, Point(2, 3, 10))
    out = cells_of(state, state.out_mask)
    assert {Point(7, 3, 10), Point(2, 8, 10), Point(7, 8, 10)} <= out


def test_snapshot_restore():
    state = SearchState(torus_geometry(5))
    select_point(state, Point(0, 0, 5))
    snap = state.snapshot()
    select_point(state, Point(1, 2, 5))
    state.restore(snap)
    assert state.snapshot() == snap
    assert state.solution == [0]


@pytest.mark.parametrize("n", [4, 6])
def test_pair_masks_match_blocked_points(n):
    geometry = torus_geometry(n)
    table = enumerate_lines(n)
    for j in range(1, geometry.size):
        expected = blocked_points(geometry.cells[0], geometry.cells[j], table)
        mask = geometry.pair_mask(0, j)
        assert {geometry.cells[c] for c in range(geometry.size) if (mask >> c) & 1} == expected


@pytest.mark.parametrize("n, tau", [(2, 4), (3, 4), (4, 6), (5, 6), (6, 8), (7, 8)])
def test_solve_small_moduli(n, tau):
    result = solve(n, SearchOptions(threads=1))
    assert result.size == tau
    assert result.proven and not result.exhausted
    assert (result.tau_lower, result.tau_upper) == (tau, tau)
    assert is_arc(result.best)


@pytest.mark.slow
@pytest.mark.parametrize("n, tau", [(8, 8), (9, 9), (11, 12), (12, 12), (13, 14)])
def test_solve_desk_moduli(n, tau):
    result = solve(n, SearchOptions(threads=4))
    assert result.size == tau and result.proven


@pytest.mark.slow
@pytest.mark.parametrize("n, tau", [(10, 12), (14, 12)])
def test_seeded_matches_generic(n, tau):
    seeded = solve(n, SearchOptions(mode="seeded_2p", threads=4))
    assert seeded.size == tau and seeded.proven and not seeded.fallback
    assert seeded.best.points[:3] == (Point(0, 0, n), Point(0, 1, n), Point(1, 0, n))
    generic = solve(n, SearchOptions(threads=4))
    assert generic.size == tau


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_grown_oracle(n):
    assert solve(n, SearchOptions(threads=1)).size == grown_maximum(n)


@pytest.mark.slow
def test_grown_oracle_mod_6():
    assert solve(6, SearchOptions(threads=1)).size == grown_maximum(6) == 8


def test_certify():
    result = solve(6, SearchOptions(threads=1))
    cert = certify(result)
    assert len(cert.points) == 8
    assert cert.claims.arc and cert.claims.complete and cert.claims.maximum
    assert verify_certificate(cert).ok
    assert is_complete(result.best)


def test_budget_cut():
    result = solve(6, SearchOptions(threads=1, node_budget=5))
    assert result.exhausted and not result.proven
    assert result.nodes > 5
    assert is_arc(result.best)
    cert = certify(result)
    assert cert.claims.maximum is False
    assert verify_certificate(cert).ok


def test_invalid_modes():
    for n in (6, 8, 9):
        with pytest.raises(InvalidMode):
            solve(n, SearchOptions(mode="seeded_2p"))
    with pytest.raises(InvalidMode):
        SearchOptions(mode="fast")
    with pytest.raises(InvalidMode):
        SearchOptions(threads=0)
    with pytest.raises(InvalidMode):
        SearchOptions(mode="seeded_2p", include=((0, 0),))
    with pytest.raises(InvalidMode):
        SearchOptions(bounds=("free", "magic"))


def test_include_must_be_an_arc():
    with pytest.raises(NotAnArc):
        solve(6, SearchOptions(include=((0, 0), (1, 1), (2, 2))))


def test_include_and_exclude():
    result = solve(6, SearchOptions(include=((2, 3),), exclude=((0, 0),)))
    assert (2, 3) in result.best and (0, 0) not in result.best
    assert result.size == 8


@pytest.mark.parametrize("bounds", [(), ("free",), ("pencil",)])
def test_pruning_does_not_change_answer(bounds):
    reference = solve(4, SearchOptions(threads=1))
    assert solve(4, SearchOptions(threads=1, bounds=bounds)).best == reference.best


@pytest.mark.slow
@pytest.mark.parametrize("n", [6, 8, 9])
def test_pruning_does_not_change_answer_slow(n):
    reference = solve(n, SearchOptions(threads=1))
    assert solve(n, SearchOptions(threads=1, bounds=("free",))).best == reference.best


@pytest.mark.parametrize("n, tau", [(2, 4), (3, 4), (4, 6), (5, 6), (6, 8), (7, 8), (8, 8)])
def test_debug_mode_checks_every_node(n, tau):
    assert solve(n, SearchOptions(threads=1, debug=True)).size == tau


def test_roots_cover_divisors():
    n = 12
    geometry = torus_geometry(n)
    roots = _make_roots(geometry, SearchOptions())
    assert [root.index for root in roots] == [0, 1, 2, 3, 4]
    for root, d in zip(roots, [1, 2, 3, 4, 6]):
        state = root.state
        assert state.solution == [geometry.cell(0, 0), geometry.cell(d, 0)]
        assert root.size == 2 and root.start == 0
        for c in geometry.cells_in(state.free_mask):
            a = geometry.cells[c]
            assert geometry.content(c) >= d
            assert gcd(a.x - d, a.y, n) >= d


def test_near_mask_excludes_small_differences():
    geometry = torus_geometry(8)
    state = SearchState(geometry, content=2)
    select_point(state, Point(3, 1, 8))
    for c in geometry.cells_in(state.out_mask):
        a = geometry.cells[c]
        assert gcd(a.x - 3, a.y - 1, 8) < 2
    assert state.is_free(geometry.cell(5, 3)) and not state.is_free(geometry.cell(4, 1))


@pytest.mark.parametrize("n, d", [(4, 1), (6, 2), (8, 2), (9, 3), (12, 4)])
def test_pair_symmetries(n, d):
    maps = pair_symmetries(n, d)
    group = set(maps)
    assert len(group) == len(maps) == 2 * n * len(units(n))
    root = {Point(0, 0, n), Point(d, 0, n)}
    for f in maps:
        assert {f(p) for p in root} == root
    for f in maps[:12]:
        for g in maps:
            assert f.compose(g) in group
    origin = Point(0, 0, n)
    for f in maps[:12]:
        for p in Modulus(n).points():
            v = f(p) - f(origin)
            assert gcd(v.x, v.y, n) == gcd(p.x, p.y, n)


def test_triangle_symmetries_keep_seeded_translates():
    n, p = 10, 5
    maps = triangle_symmetries(n)
    seed = {Point(x, y, n) for x, y in SEED}
    assert len(set(maps)) == 6
    shifts = {(p, 0), (0, p), (p, p)}
    for f in maps:
        assert {f(a) for a in seed} == seed
        for a in Modulus(n).points():
            images = {((f(a + s).x - f(a).x) % n, (f(a + s).y - f(a).y) % n) for s in shifts}
            assert images == shifts


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_symmetry_reduction_keeps_tau(n):
    reduced = solve(n, SearchOptions(threads=1))
    plain = solve(n, SearchOptions(threads=1, symmetry=False))
    assert reduced.size == plain.size
    assert reduced.proven and plain.proven


@pytest.mark.slow
@pytest.mark.parametrize("n", [8, 9])
def test_symmetry_reduction_keeps_tau_slow(n):
    assert solve(n, SearchOptions(threads=4)).size == solve(n, SearchOptions(threads=4, symmetry=False)).size


def test_split_work_depth_zero():
    roots = _make_roots(torus_geometry(6), SearchOptions())
    assert len(roots) == 3
    for root in roots:
        jobs = list(split_work(root, 0))
        assert jobs == [Job((), (), 0, root.index)]


def test_split_work_seeded_fourth_points():
    n = 10
    geometry = torus_geometry(n)
    [root] = _make_roots(geometry, SearchOptions(mode="seeded_2p"))
    before = root.state.snapshot()
    jobs = list(split_work(root, 1))
    assert root.state.snapshot() == before
    firsts = [job.path[0] for job in jobs]
    assert all(len(job.path) == 1 for job in jobs)
    assert firsts == sorted(firsts)
    assert firsts[0] == geometry.cell(1, 1)
    for i, c in enumerate(firsts):
        orbit = root.orbit_mask(c)
        assert not any((orbit >> e) & 1 for e in firsts[:i])


@pytest.mark.parametrize("depth", [1, 2, 3])
def test_jobs_reproduce_serial_answer(depth):
    """Replaying every job and keeping the first largest arc equals the serial run"""
    n = 6
    options = SearchOptions(threads=1)
    serial = solve(n, options)
    geometry = torus_geometry(n)
    jobs = [job for root in _make_roots(geometry, options) for job in split_work(root, depth)]
    assert {job.root for job in jobs} == {0, 1, 2}
    best = ()
    for i, job in enumerate(jobs):
        _, cells, _, complete = _run_job(n, options, i, job)
        assert complete
        if len(cells) > len(best):
            best = cells
    assert geometry.arc_of(best) == serial.best


def test_parallel_matches_serial():
    serial = solve(6, SearchOptions(threads=1))
    parallel = solve(6, SearchOptions(threads=4, split_depth=2))
    assert parallel.best == serial.best
    assert parallel.proven


@pytest.mark.slow
@pytest.mark.parametrize("n, mode", [(8, "generic"), (9, "generic"), (10, "seeded_2p")])
def test_parallel_matches_serial_slow(n, mode):
    serial = solve(n, SearchOptions(mode=mode, threads=1))
    parallel = solve(n, SearchOptions(mode=mode, threads=4))
    assert parallel.best == serial.best


def test_progress_lines(caplog):
    caplog.set_level(logging.INFO, logger="solver")
    solve(4, SearchOptions(threads=1, progress_every=1))
    assert "nodes=1 best=2" in caplog.text


if __name__ == "__main__":
    test_select_point_blocks_pair_line()
    test_seeded_select_excludes_translates()
    for n, tau in [(2, 4), (3, 4), (4, 6), (5, 6), (6, 8)]:
        result = solve(n, SearchOptions(threads=1))
        print(f"tau({n}) = {result.size} proven={result.proven} nodes={result.nodes}")
        assert result.size == tau

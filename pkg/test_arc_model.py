#!/usr/bin/env python3
"""
Test arcs, lifts, normalization and bounds
"""

import random
from itertools import permutations
from pathlib import Path

import pytest

from arc_model import (
    CLASSES, KNOWN_TAU, PUBLISHED_BOUNDS, SEED, AffineMap, ArcSet, alpha2_lift, alphap_lift, apply_affine,
    class_counts, is_arc, is_complete, normalize_2p, oval_arc, realize_class_permutation, upper_bounds,
)
from certificates import fixture_witnesses, load_certificate, to_arcset
from errors import ArcError, MixedModuli, NotAnArc, NotComplete, NotInvertible, NotOddPrime, TooSmall
from modular_core import Modulus, Point
from solver import SearchOptions, SearchState, solve, torus_geometry

FIXTURES = Path(__file__).resolve().parent / "fixtures"


def bundled(name: str) -> ArcSet:
    return to_arcset(load_certificate(FIXTURES / name))


Z6, Z10, Z14, Z22, Z24 = (bundled(f) for f in (
    "arc_z6.json", "arc_z10.json", "arc_z14.json", "arc_z22.json", "arc_z24.json"))


def random_map(n: int, rng: random.Random) -> AffineMap:
    while True:
        m = [rng.randrange(n) for _ in range(4)]
        try:
            return AffineMap(n, *m, rng.randrange(n), rng.randrange(n))
        except NotInvertible:
            continue


def test_arcset_normalizes_points():
    X = ArcSet.of(6, [(7, 1), (1, 1), (0, 0)])
    assert X.points == (Point(0, 0, 6), Point(1, 1, 6))
    assert (1, 1) in X
    with pytest.raises(MixedModuli):
        ArcSet.of(6, [Point(0, 0, 10)])


def test_is_arc():
    assert is_arc(Z6)
    assert not is_arc(ArcSet.of(6, [(0, 0), (1, 1), (2, 2)]))
    assert is_arc(ArcSet.of(6, [(0, 0), (3, 3)]))
    assert is_arc(ArcSet.of(6, []))


@pytest.mark.parametrize("X", [Z6, Z10, Z14, Z22, Z24], ids=["z6", "z10", "z14", "z22", "z24"])
def test_bundled_arcs_are_complete(X):
    assert is_arc(X)
    assert is_complete(X)


def test_bundled_sizes():
    assert [len(X) for X in (Z6, Z10, Z14, Z22, Z24)] == [8, 12, 12, 18, 20]


def test_is_complete():
    assert not is_complete(ArcSet.of(6, [(0, 0)]))
    with pytest.raises(NotAnArc):
        is_complete(ArcSet.of(6, [(0, 0), (1, 1), (2, 2)]))


def test_apply_affine():
    assert apply_affine(AffineMap.identity(6), Z6) == Z6
    moved = apply_affine(AffineMap.translation(6, 1, 1), Z6)
    assert len(moved) == 8 and is_arc(moved)
    assert (1, 1) in moved
    swap = AffineMap(6, 0, 1, 1, 0)
    assert apply_affine(swap, ArcSet.of(6, [(1, 0)])) == ArcSet.of(6, [(0, 1)])
    with pytest.raises(NotInvertible):
        AffineMap(6, 2, 0, 0, 1)
    with pytest.raises(MixedModuli):
        apply_affine(AffineMap.identity(10), Z6)


def test_compose():
    rng = random.Random(7)
    for _ in range(20):
        f, g = random_map(10, rng), random_map(10, rng)
        for p in Z10.points:
            assert f.compose(g)(p) == f(g(p))


@pytest.mark.parametrize("X", [Z6, Z10, Z14], ids=["z6", "z10", "z14"])
def test_affine_maps_preserve_arcs(X):
    rng = random.Random(X.n)
    for _ in range(200):
        image = apply_affine(random_map(X.n, rng), X)
        assert len(image) == len(X)
        assert is_arc(image)


def test_alpha2_definition():
    assert alpha2_lift(ArcSet.of(3, [(1, 2)])) == ArcSet.of(6, [(2, 4)])
    empty = alpha2_lift(ArcSet.of(5, []))
    assert empty.n == 10 and len(empty) == 0
    assert not is_complete(empty)
    with pytest.raises(NotOddPrime):
        alpha2_lift(ArcSet.of(4, []))
    with pytest.raises(NotAnArc):
        alpha2_lift(ArcSet.of(5, [(0, 0), (1, 1), (2, 2)]))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_alpha2_preserves_completeness(p):
    X = solve(p).best
    assert len(X) == p + 1
    assert is_complete(X)
    lifted = alpha2_lift(X)
    assert lifted.n == 2 * p and len(lifted) == p + 1
    assert is_complete(lifted)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_alphap_lift(p):
    full = ArcSet.of(2, CLASSES)
    lifted = alphap_lift(full, p)
    assert lifted == ArcSet.of(2 * p, [(0, 0), (p, 0), (0, p), (p, p)])
    assert is_complete(lifted)


def test_alphap_errors():
    with pytest.raises(NotComplete):
        alphap_lift(ArcSet.of(2, [(0, 0), (1, 0), (0, 1)]), 3)
    with pytest.raises(NotOddPrime):
        alphap_lift(ArcSet.of(2, CLASSES), 9)


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_oval_arc(p):
    X = oval_arc(p)
    assert len(X) == p + 1
    assert is_arc(X)
    assert is_complete(X)


def shadow(q: Point):
    return q.x % 2, q.y % 2


def test_realize_identity_and_generators():
    assert realize_class_permutation(CLASSES, 5) == AffineMap.identity(10)
    sigma3 = [(0, 0), (0, 1), (1, 1), (1, 0)]
    assert realize_class_permutation(sigma3, 5) == AffineMap(10, 1, 0, 1, 1)
    with pytest.raises(NotOddPrime):
        realize_class_permutation(CLASSES, 2)
    with pytest.raises(ArcError):
        realize_class_permutation([(0, 0), (0, 0), (1, 0), (1, 1)], 5)


@pytest.mark.parametrize("p", [3, 5])
def test_realize_every_class_permutation(p):
    points = Modulus(2 * p).points()
    for images in permutations(CLASSES):
        sigma = dict(zip(CLASSES, images))
        f = realize_class_permutation(sigma, p)
        assert all(shadow(f(u)) == sigma[shadow(u)] for u in points)


def test_class_counts():
    counts = class_counts(Z6)
    assert [counts[c] for c in CLASSES] == [2, 2, 2, 2]
    assert sum(class_counts(Z22).values()) == 18


def contains_seed(X: ArcSet) -> bool:
    return all(xy in X for xy in SEED)


@pytest.mark.parametrize("X", [Z10, Z22], ids=["z10", "z22"])
def test_normalize_bundled(X):
    f, image = normalize_2p(X)
    assert contains_seed(image)
    assert len(image) == len(X)
    assert apply_affine(f, X) == image
    assert is_arc(image)


def test_normalize_translated_arc():
    moved = apply_affine(AffineMap.translation(10, 3, 7), Z10)
    assert not contains_seed(moved)
    f, image = normalize_2p(moved)
    assert contains_seed(image) and len(image) == 12 and is_arc(image)


@pytest.mark.parametrize("X", [Z10, Z14], ids=["z10", "z14"])
def test_normalize_random_images(X):
    rng = random.Random(2 * X.n)
    for _ in range(20):
        moved = apply_affine(random_map(X.n, rng), X)
        f, image = normalize_2p(moved)
        assert contains_seed(image)
        assert len(image) == len(X)
        assert apply_affine(f, moved) == image


def test_normalize_preconditions():
    with pytest.raises(TooSmall):
        normalize_2p(ArcSet.of(10, Z10.points[:8]))
    with pytest.raises(NotOddPrime):
        normalize_2p(Z6)
    with pytest.raises(NotAnArc):
        normalize_2p(ArcSet.of(10, list(Z10.points) + [Point(2, 2, 10)]))


def cells_outside(n: int, classes) -> tuple:
    return tuple((x, y) for x in range(n) for y in range(n) if (x % 2, y % 2) not in classes)


def test_two_class_arcs_are_small():
    """Arcs of Z_6^2 meeting at most two parity classes have at most p + 1 = 4 points"""
    for pair in [(a, b) for i, a in enumerate(CLASSES) for b in CLASSES[i + 1:]]:
        result = solve(6, SearchOptions(exclude=cells_outside(6, pair)))
        assert result.proven
        assert result.size <= 4


@pytest.mark.parametrize("pair", [(a, b) for i, a in enumerate(CLASSES) for b in CLASSES[i + 1:]])
def test_two_class_arcs_are_small_mod_10(pair):
    """Random maximal arcs of Z_10^2 inside two parity classes have at most p + 1 = 6 points"""
    n = 10
    geometry = torus_geometry(n)
    allowed = [geometry.cell(x, y) for x in range(n) for y in range(n) if (x % 2, y % 2) in pair]
    rng = random.Random(str(pair))
    for _ in range(200):
        rng.shuffle(allowed)
        state = SearchState(geometry)
        for c in allowed:
            if state.is_free(c):
                state.select(c)
        assert state.in_count <= 6
    assert is_arc(geometry.arc_of(state.solution))


@pytest.mark.parametrize("v", [(3, 0), (0, 3), (3, 3)])
def test_translate_pairs_cap_arcs(v):
    """An arc of Z_6^2 holding a and a + v, v in {(p,0), (0,p), (p,p)}, has at most p + 3 = 6 points"""
    result = solve(6, SearchOptions(include=((0, 0), v)))
    assert result.proven
    assert result.size <= 6


@pytest.mark.slow
def test_translate_pairs_cap_arcs_mod_10():
    result = solve(10, SearchOptions(include=((0, 0), (5, 0))))
    assert result.size <= 8


PUBLISHED_UPPER = {26: 28, 27: 28, 28: 32, 30: 36, 32: 35, 33: 36, 34: 36, 35: 40, 36: 36, 38: 40, 39: 42, 40: 40}


def test_published_upper_bounds_reproduced():
    for n, upper in PUBLISHED_UPPER.items():
        assert upper_bounds(n).upper == upper, n
        assert PUBLISHED_BOUNDS[n][1] == upper


def test_bound_arithmetic_alone():
    """Everything but the prime powers 27 and 32 follows from the bound rules"""
    for n, upper in PUBLISHED_UPPER.items():
        if n in (27, 32):
            continue
        assert upper_bounds(n, published={}).upper == upper, n


def test_bounds_examples():
    b = upper_bounds(26)
    assert (b.lower, b.upper) == (20, 28)
    assert str(b) == "20 <= tau(26) <= 28"
    assert str(upper_bounds(7)) == "tau(7) = 8"
    assert upper_bounds(22, known={}).upper == 24
    assert upper_bounds(22).exact and upper_bounds(22).upper == 18
    assert upper_bounds(35).upper == 40
    assert upper_bounds(30, chain_composites=True).upper == 30


def test_bounds_consistent_everywhere():
    for n in range(2, 65):
        b = upper_bounds(n)
        assert 4 <= b.lower <= b.upper <= 2 * n
        if b.witness is not None:
            assert is_arc(b.witness)
            assert len(b.witness) <= b.lower
    for n, tau in KNOWN_TAU.items():
        assert upper_bounds(n).upper == tau


def test_bounds_witnesses():
    p = 13
    b = upper_bounds(2 * p)
    assert b.witness is not None and len(b.witness) == p + 1
    assert upper_bounds(10, witnesses=fixture_witnesses(FIXTURES)).witness == Z10
    assert len(upper_bounds(2).witness) == 4


if __name__ == "__main__":
    test_is_arc()
    test_apply_affine()
    test_realize_identity_and_generators()
    test_normalize_translated_arc()
    test_published_upper_bounds_reproduced()
    test_bounds_examples()
    print("✅ arc model tests passed")

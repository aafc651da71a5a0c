#!/usr/bin/env python3
"""
Arcs of Z_n^2: arc / completeness checks, affine automorphisms, the lifting
maps alpha_2 (Z_p -> Z_2p) and alpha_p (Z_2 -> Z_2p), normalization of large
arcs of Z_2p^2 onto the seed (0,0), (1,0), (0,1), and bound arithmetic for tau.
"""

import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from errors import (
    ArcError, InvalidMode, MixedModuli, NotAnArc, NotComplete, NotInvertible, NotOddPrime, TooSmall,
)
from geometry import LineTable, blocked_points, collinear
from modular_core import Modulus, Point, Residue, crt, is_prime, mod_inv

logger = logging.getLogger(__name__)

# parity classes (x mod 2, y mod 2) in the order used for permutations: index 0..3
CLASSES: Tuple[Tuple[int, int], ...] = ((0, 0), (0, 1), (1, 0), (1, 1))
SEED: Tuple[Tuple[int, int], ...] = ((0, 0), (1, 0), (0, 1))


@dataclass(frozen=True)
class ArcSet:
    """A modulus plus a point set claimed (not assumed) to be an arc"""
    n: int
    points: Tuple[Point, ...]

    @classmethod
    def of(cls, n: int, coords: Iterable) -> "ArcSet":
        Modulus(n)
        pts = set()
        for c in coords:
            if isinstance(c, Point):
                if c.n != n:
                    raise MixedModuli(f"point {c} lives in Z_{c.n}, not Z_{n}")
                pts.add(c)
            else:
                x, y = c
                pts.add(Point.of(int(x), int(y), n))
        return cls(n, tuple(sorted(pts)))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p) -> bool:
        if not isinstance(p, Point):
            p = Point.of(p[0], p[1], self.n)
        return p in set(self.points)

    def coords(self) -> List[List[int]]:
        return [[p.x, p.y] for p in self.points]


def is_arc(X: ArcSet, table: Optional[LineTable] = None) -> bool:
    return not any(collinear(a, b, c, table) for a, b, c in combinations(X.points, 3))


def covered_points(X: ArcSet, table: Optional[LineTable] = None) -> set:
    covered = set()
    for a, b in combinations(X.points, 2):
        covered |= blocked_points(a, b, table)
    return covered


def is_complete(X: ArcSet, table: Optional[LineTable] = None) -> bool:
    """Every point outside X is collinear with two points of X"""
    if not is_arc(X, table):
        raise NotAnArc(f"{len(X)}-point set in Z_{X.n}^2 is not an arc")
    covered = covered_points(X, table)
    members = set(X.points)
    return all(p in covered or p in members for p in Modulus(X.n).points())


@dataclass(frozen=True)
class AffineMap:
    """u -> M u + t over Z_n with det M a unit"""
    n: int
    m00: int
    m01: int
    m10: int
    m11: int
    tx: int = 0
    ty: int = 0

    def __post_init__(self):
        for name in ("m00", "m01", "m10", "m11", "tx", "ty"):
            object.__setattr__(self, name, getattr(self, name) % self.n)
        if not self.det.is_unit:
            raise NotInvertible(f"det {self.det.value} is not a unit mod {self.n}")

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(n, 1, 0, 0, 1)

    @classmethod
    def translation(cls, n: int, vx: int, vy: int) -> "AffineMap":
        return cls(n, 1, 0, 0, 1, vx, vy)

    @property
    def det(self) -> Residue:
        return Residue.of(self.m00 * self.m11 - self.m01 * self.m10, self.n)

    @property
    def matrix(self) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        return (self.m00, self.m01), (self.m10, self.m11)

    def __call__(self, p: Point) -> Point:
        if p.n != self.n:
            raise MixedModuli(f"map on Z_{self.n}, point in Z_{p.n}")
        return Point((self.m00 * p.x + self.m01 * p.y + self.tx) % self.n,
                     (self.m10 * p.x + self.m11 * p.y + self.ty) % self.n, self.n)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other"""
        if other.n != self.n:
            raise MixedModuli(f"maps on Z_{self.n} and Z_{other.n}")
        return AffineMap(
            self.n,
            self.m00 * other.m00 + self.m01 * other.m10,
            self.m00 * other.m01 + self.m01 * other.m11,
            self.m10 * other.m00 + self.m11 * other.m10,
            self.m10 * other.m01 + self.m11 * other.m11,
            self.m00 * other.tx + self.m01 * other.ty + self.tx,
            self.m10 * other.tx + self.m11 * other.ty + self.ty,
        )

    def __str__(self) -> str:
        return (f"x' = {self.m00}*x + {self.m01}*y + {self.tx} (mod {self.n})\n"
                f"y' = {self.m10}*x + {self.m11}*y + {self.ty} (mod {self.n})")


def apply_affine(f: AffineMap, X: ArcSet) -> ArcSet:
    if f.n != X.n:
        raise MixedModuli(f"map on Z_{f.n}, arc in Z_{X.n}")
    if not f.det.is_unit:
        raise NotInvertible(f"det {f.det.value} is not a unit mod {f.n}")
    return ArcSet.of(X.n, (f(p) for p in X.points))


def _require_odd_prime(p: int) -> None:
    if p < 3 or not is_prime(p):
        raise NotOddPrime(f"{p} is not an odd prime")


def alpha2_lift(X: ArcSet) -> ArcSet:
    """(i, j) mod p -> (2i, 2j) mod 2p; completeness is preserved"""
    p = X.n
    _require_odd_prime(p)
    if not is_arc(X):
        raise NotAnArc(f"{len(X)}-point set in Z_{p}^2 is not an arc")
    # the image of i is the residue mod 2p that is 0 mod 2 and 2i mod p
    lift = {i: crt([(0, 2), ((2 * i) % p, p)])[0] for i in range(p)}
    return ArcSet.of(2 * p, ((lift[q.x], lift[q.y]) for q in X.points))


def alphap_lift(X: ArcSet, p: int) -> ArcSet:
    """(i, j) mod 2 -> (p*i, p*j) mod 2p, defined on the only complete arc of Z_2^2"""
    _require_odd_prime(p)
    if X.n != 2:
        raise MixedModuli(f"alpha_p lifts arcs of Z_2^2, got Z_{X.n}^2")
    if len(X) != 4:
        raise NotComplete("the only complete arc of Z_2^2 is Z_2^2 itself")
    return ArcSet.of(2 * p, ((p * q.x, p * q.y) for q in X.points))


def _perm_tuple(sigma: Union[Mapping, Sequence]) -> Tuple[int, ...]:
    if isinstance(sigma, Mapping):
        images = [tuple(sigma[c]) for c in CLASSES]
    else:
        images = [tuple(s) for s in sigma]
    try:
        perm = tuple(CLASSES.index((i % 2, j % 2)) for i, j in images)
    except (ValueError, TypeError):
        raise ArcError(f"not a permutation of Z_2^2: {sigma!r}")
    if sorted(perm) != [0, 1, 2, 3]:
        raise ArcError(f"not a permutation of Z_2^2: {sigma!r}")
    return perm


def _compose_perm(s: Tuple[int, ...], t: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(s[t[i]] for i in range(4))


# adjacent transpositions of CLASSES and maps of Z_2p^2 realizing them
_GENERATOR_PERMS = {
    1: (1, 0, 2, 3),  # (0,0) <-> (0,1)
    2: (0, 2, 1, 3),  # (0,1) <-> (1,0)
    3: (0, 1, 3, 2),  # (1,0) <-> (1,1)
}


def _generator_map(k: int, n: int) -> AffineMap:
    if k == 1:
        # (x, y) -> (x, x + y + 1)
        return AffineMap(n, 1, 0, 1, 1, 0, 1)
    if k == 2:
        return AffineMap(n, 0, 1, 1, 0)
    return AffineMap(n, 1, 0, 1, 1)


def _transposition_word(perm: Tuple[int, ...]) -> Tuple[int, ...]:
    """Shortest word w with perm = s_w[0] o s_w[1] o ..., first in BFS order"""
    start = (0, 1, 2, 3)
    queue = deque([(start, ())])
    seen = {start}
    while queue:
        current, word = queue.popleft()
        if current == perm:
            return word
        for k, gen in _GENERATOR_PERMS.items():
            nxt = _compose_perm(gen, current)
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, (k,) + word))
    raise ArcError(f"unreachable permutation {perm}")


def realize_class_permutation(sigma: Union[Mapping, Sequence], p: int) -> AffineMap:
    """
    An automorphism f of Z_2p^2 whose parity class map is sigma: class(f(u)) = sigma(class(u)) for all u.

    Args:
        sigma: permutation of Z_2^2, as a mapping class -> class or as the images
            of (0,0), (0,1), (1,0), (1,1) in that order
        p: odd prime
    """
    _require_odd_prime(p)
    perm = _perm_tuple(sigma)
    n = 2 * p
    f = AffineMap.identity(n)
    for k in _transposition_word(perm):
        f = f.compose(_generator_map(k, n))
    return f


def class_counts(X: ArcSet) -> Counter:
    """Number of points of X in each parity class"""
    if X.n % 2:
        raise InvalidMode(f"parity classes need an even modulus, got {X.n}")
    return Counter((p.x % 2, p.y % 2) for p in X.points)


def normalize_2p(X: ArcSet) -> Tuple[AffineMap, ArcSet]:
    """
    Map a large arc of Z_2p^2 (p >= 5, |X| > p + 3) onto one containing
    (0,0), (1,0), (0,1).

    Returns:
        (f, f(X))
    """
    n = X.n
    p = n // 2
    if n % 2 or p < 5 or not is_prime(p):
        raise NotOddPrime(f"normalization needs n = 2p with p >= 5 prime, got n = {n}")
    if len(X) <= p + 3:
        raise TooSmall(f"|X| = {len(X)} <= p + 3 = {p + 3}")
    if not is_arc(X):
        raise NotAnArc(f"{len(X)}-point set in Z_{n}^2 is not an arc")

    counts = class_counts(X)
    chosen = None
    for perm in permutations(range(4)):
        after = {perm[i]: counts[CLASSES[i]] for i in range(4)}
        if after[0] >= 1 and after[1] >= 1 and after[2] >= 3:
            chosen = perm
            break
    if chosen is None:
        raise ArcError(f"no class permutation fits {dict(counts)}")
    f = realize_class_permutation([CLASSES[k] for k in chosen], p)
    image = apply_affine(f, X)
    logger.debug(f"normalize_2p: class permutation {chosen}, counts {dict(counts)}")

    origin = next(q for q in image.points if (q.x % 2, q.y % 2) == (0, 0))
    f = AffineMap.translation(n, -origin.x, -origin.y).compose(f)
    image = apply_affine(f, X)

    a_side = [q for q in image.points if (q.x % 2, q.y % 2) == (0, 1)]
    b_side = [q for q in image.points if (q.x % 2, q.y % 2) == (1, 0)]
    for a in a_side:
        for b in b_side:
            delta = Residue.of(a.x * b.y - b.x * a.y, n)
            if not delta.is_unit:
                continue
            inv = mod_inv(delta).value
            # sends a -> (1, 0), b -> (0, 1), origin fixed
            m = AffineMap(n, inv * b.y, -inv * b.x, -inv * a.y, inv * a.x)
            f = m.compose(f)
            logger.debug(f"normalize_2p: a = {a}, b = {b}, cross determinant {delta.value}")
            return f, apply_affine(f, X)
    raise ArcError("no pair with a unit cross determinant; arc too small or not an arc")


def oval_arc(p: int) -> ArcSet:
    """The ellipse x^2 - d*y^2 = 1 (d the least non-residue): p + 1 points, no three collinear"""
    _require_odd_prime(p)
    squares = {(x * x) % p for x in range(p)}
    d = min(k for k in range(1, p) if k not in squares)
    return ArcSet.of(p, ((x, y) for x in range(p) for y in range(p) if (x * x - d * y * y) % p == 1))


def unit_square(n: int) -> ArcSet:
    return ArcSet.of(n, ((0, 0), (1, 0), (0, 1), (1, 1)))


# Exact values of tau for non-prime n (primes follow the p + 1 formula)
KNOWN_TAU: Dict[int, int] = {
    4: 6, 6: 8, 8: 8, 9: 9, 10: 12, 12: 12, 14: 12, 15: 15, 16: 14,
    18: 17, 20: 18, 21: 18, 22: 18, 24: 20, 25: 20,
}

# Published (lower, upper) bounds for non-prime 26 <= n <= 40
PUBLISHED_BOUNDS: Dict[int, Tuple[int, int]] = {
    26: (20, 28), 27: (20, 28), 28: (22, 32), 30: (23, 36), 32: (23, 35), 33: (23, 36),
    34: (22, 36), 35: (26, 40), 36: (25, 36), 38: (23, 40), 39: (24, 42), 40: (26, 40),
}


def prime_tau(p: int) -> int:
    return 4 if p == 2 else p + 1


@dataclass
class Bounds:
    n: int
    lower: int
    upper: int
    provenance: List[str] = field(default_factory=list)
    witness: Optional[ArcSet] = None

    def __post_init__(self):
        if self.lower > self.upper:
            raise ArcError(f"inconsistent bounds {self.lower} > {self.upper} for n = {self.n}")

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def __str__(self) -> str:
        if self.exact:
            return f"tau({self.n}) = {self.upper}"
        return f"{self.lower} <= tau({self.n}) <= {self.upper}"


def _exact(n: int, known: Mapping[int, int]) -> Optional[int]:
    if n in known:
        return known[n]
    if is_prime(n):
        return prime_tau(n)
    return None


def _is_prime_power(n: int) -> bool:
    return n >= 2 and len(Modulus(n).factors) == 1


def _upper(n: int, known: Mapping[int, int], published: Mapping[int, Tuple[int, int]],
           chain_composites: bool, memo: Dict[int, Tuple[int, str]]) -> Tuple[int, str]:
    """Best upper bound for n from bound arithmetic alone; (value, provenance)"""
    if n in memo:
        return memo[n]
    candidates = [(2 * n, f"{n} rows, at most 2 points each")]
    p = n // 2
    if n % 2 == 0 and p > 2 and is_prime(p):
        candidates.append((2 * p + 2, f"tau(2p) <= 2p + 2 with p = {p}"))
    for m in range(2, n):
        k = n // m
        if n % m or m >= k or gcd(m, k) != 1:
            continue
        um, _ = _factor_upper(m, known, published, chain_composites, memo)
        uk, _ = _factor_upper(k, known, published, chain_composites, memo)
        value = min(m * uk, k * um)
        candidates.append((value, f"coprime split {m}*{k}: min({m}*{uk}, {k}*{um})"))
    if n in published:
        candidates.append((published[n][1], f"published upper bound for n = {n}"))
    memo[n] = min(candidates)
    return memo[n]


def _factor_upper(f: int, known, published, chain_composites, memo) -> Tuple[int, str]:
    exact = _exact(f, known)
    if exact is not None and (chain_composites or _is_prime_power(f)):
        return exact, f"tau({f}) = {exact}"
    return _upper(f, known, published, chain_composites, memo)


def upper_bounds(n: int, known: Optional[Mapping[int, int]] = None,
                 published: Optional[Mapping[int, Tuple[int, int]]] = None,
                 witnesses: Optional[Mapping[int, ArcSet]] = None,
                 chain_composites: bool = False) -> Bounds:
    """
    Bounds on tau(Z_n^2).

    Upper: coprime splits tau(mn) <= min(m*tau(n), n*tau(m)) recursing on the
    factors, the prime formula, tau(2p) <= 2p + 2, the row bound 2n and any
    published bound. Unless chain_composites is set, only prime-power factors
    use exact values; composite factors are bounded recursively.
    Lower: known values, published bounds, stored witnesses, the alpha lifts.
    """
    Modulus(n)
    known = KNOWN_TAU if known is None else known
    published = PUBLISHED_BOUNDS if published is None else published
    witnesses = witnesses or {}
    p = n // 2
    twice_prime = n % 2 == 0 and p > 2 and is_prime(p)

    lower_candidates: List[Tuple[int, str, Optional[ArcSet]]] = [(4, "unit square", unit_square(n))]
    if n == 2:
        lower_candidates.append((4, "Z_2^2 itself", ArcSet.of(2, CLASSES)))
    if is_prime(n) and n > 2:
        lower_candidates.append((n + 1, "ellipse x^2 - d*y^2 = 1", oval_arc(n)))
    if twice_prime:
        lower_candidates.append((p + 1, f"alpha_2 lift of an oval of Z_{p}^2", alpha2_lift(oval_arc(p))))
    if n in published:
        lower_candidates.append((published[n][0], f"published lower bound for n = {n}", None))
    if n in witnesses:
        lower_candidates.append((len(witnesses[n]), "stored certificate", witnesses[n]))

    exact = _exact(n, known)
    if exact is not None:
        provenance = [f"exact: tau({n}) = {exact}" + (" (prime formula)" if is_prime(n) else " (known value)")]
        witness = max((c for c in lower_candidates if c[2] is not None and len(c[2]) == exact),
                      key=lambda c: c[0], default=None)
        return Bounds(n, exact, exact, provenance, witness[2] if witness else None)

    upper, upper_note = _upper(n, known, published, chain_composites, {})
    best = max(lower_candidates, key=lambda c: c[0])
    witnessed = [c for c in lower_candidates if c[2] is not None]
    witness = max(witnessed, key=lambda c: c[0])[2] if witnessed else None
    return Bounds(n, best[0], upper,
                  [f"lower {best[0]}: {best[1]}", f"upper {upper}: {upper_note}"], witness)

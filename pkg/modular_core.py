#!/usr/bin/env python3
"""
Exact arithmetic over Z_n.
Extended gcd, inverses, factorization, CRT, coordinatewise projections and the
3x3 determinant D(a, b, c) with a row of ones on top.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, List, NamedTuple, Tuple

from config import HARD_MAX_MODULUS
from errors import ArcError, MixedModuli, ModulusOutOfRange, NotADivisor, NotAUnit


def egcd(a: int, b: int) -> Tuple[int, int, int]:
    """
    Extended Euclid.

    Returns:
        (g, s, t) with g = gcd(a, b) >= 0 and g = s*a + t*b
    """
    if a == 0 and b == 0:
        return 0, 0, 0
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@lru_cache(maxsize=None)
def factorize(n: int) -> Tuple[Tuple[int, int], ...]:
    """Trial division; returns ((prime, exponent), ...) in increasing prime order"""
    if n < 2:
        raise ModulusOutOfRange(f"cannot factorize {n}")
    factors = []
    rest = n
    p = 2
    while p * p <= rest:
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            factors.append((p, e))
        p += 1
    if rest > 1:
        factors.append((rest, 1))
    return tuple(factors)


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n))


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == ((n, 1),)


def prime_power_parts(n: int) -> List[int]:
    """Pairwise coprime prime-power factors of n, e.g. 24 -> [8, 3]"""
    return [p ** e for p, e in factorize(n)]


@lru_cache(maxsize=None)
def units(n: int) -> Tuple[int, ...]:
    return tuple(w for w in range(1, n) if gcd(w, n) == 1)


def crt(pairs: Iterable[Tuple[int, int]]) -> Tuple[int, int]:
    """
    Chinese remaindering.

    Args:
        pairs: (residue, modulus) with pairwise coprime moduli

    Returns:
        (value, product of moduli)
    """
    value, modulus = 0, 1
    for residue, m in pairs:
        g, s, _ = egcd(modulus, m)
        if g != 1:
            raise ArcError(f"moduli {modulus} and {m} are not coprime")
        # value + modulus*k ≡ residue (mod m)
        k = ((residue - value) * s) % m
        value += modulus * k
        modulus *= m
        value %= modulus
    return value, modulus


@dataclass(frozen=True)
class Modulus:
    """The n of Z_n^2"""
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2 or self.n > HARD_MAX_MODULUS:
            raise ModulusOutOfRange(f"modulus {self.n!r} outside [2, {HARD_MAX_MODULUS}]")

    @property
    def factors(self) -> Tuple[Tuple[int, int], ...]:
        return factorize(self.n)

    @property
    def is_squarefree(self) -> bool:
        return is_squarefree(self.n)

    def residue(self, value: int) -> "Residue":
        return Residue.of(value, self.n)

    def point(self, x: int, y: int) -> "Point":
        return Point.of(x, y, self.n)

    def points(self) -> List["Point"]:
        """All n^2 points in lexicographic (x, y) order"""
        return [Point(x, y, self.n) for x in range(self.n) for y in range(self.n)]


class Residue(NamedTuple):
    value: int
    n: int

    @classmethod
    def of(cls, value: int, n: int) -> "Residue":
        return cls(value % n, n)

    @property
    def is_unit(self) -> bool:
        return gcd(self.value, self.n) == 1

    def __int__(self) -> int:
        return self.value


class Point(NamedTuple):
    """A point of Z_n^2; ordering is lexicographic in (x, y)"""
    x: int
    y: int
    n: int

    @classmethod
    def of(cls, x: int, y: int, n: int) -> "Point":
        return cls(x % n, y % n, n)

    def __add__(self, other):
        if isinstance(other, Point):
            same_modulus(self, other)
            return Point((self.x + other.x) % self.n, (self.y + other.y) % self.n, self.n)
        dx, dy = other
        return Point((self.x + dx) % self.n, (self.y + dy) % self.n, self.n)

    def __sub__(self, other: "Point") -> "Point":
        same_modulus(self, other)
        return Point((self.x - other.x) % self.n, (self.y - other.y) % self.n, self.n)

    def scale(self, k: int) -> "Point":
        return Point((k * self.x) % self.n, (k * self.y) % self.n, self.n)

    @property
    def xy(self) -> Tuple[int, int]:
        return self.x, self.y

    def __str__(self) -> str:
        return f"{self.x},{self.y}"


def same_modulus(*points: Point) -> int:
    n = points[0].n
    for p in points[1:]:
        if p.n != n:
            raise MixedModuli(f"points live in Z_{n} and Z_{p.n}")
    return n


def mod_inv(a: Residue) -> Residue:
    g, s, _ = egcd(a.value, a.n)
    if g != 1:
        raise NotAUnit(f"{a.value} is not a unit mod {a.n} (gcd {g})")
    return Residue.of(s, a.n)


def det3(a: Point, b: Point, c: Point) -> Residue:
    """
    D(a, b, c) mod n, via the translated 2x2 expansion
    (b - a) x (c - a), which equals the cofactor expansion of
    | 1 1 1 ; a_x b_x c_x ; a_y b_y c_y |.
    """
    n = same_modulus(a, b, c)
    return Residue.of((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y), n)


def project(p: Point, m: int) -> Point:
    """phi_m: coordinatewise reduction Z_n -> Z_m for m | n"""
    if m < 1 or p.n % m != 0:
        raise NotADivisor(f"{m} does not divide {p.n}")
    return Point(p.x % m, p.y % m, m)

"""Exact rational plane geometry.

Everything here works on :class:`fractions.Fraction` coordinates.  Angles are
never computed; comparisons go through the *diamond angle*, a rational,
strictly monotone reparametrisation of the polar angle onto ``[0, 4)`` where
``2`` stands for a half-turn.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import NamedTuple, Union

RationalLike = Union[int, Fraction, str]


def Q(value: RationalLike) -> Fraction:
    """Coerce ``value`` to a Fraction.

    Strings follow the ``"p/q"`` convention of the JSON formats; floats are
    refused because they would silently break exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational")
        return Fraction(text)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def format_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class Vec2(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x: RationalLike, y: RationalLike) -> "Vec2":
        return cls(Q(x), Q(y))

    def __add__(self, other):  # type: ignore[override]
        return Vec2(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Vec2(self.x - other[0], self.y - other[1])

    def __neg__(self):
        return Vec2(-self.x, -self.y)

    def __mul__(self, k):  # type: ignore[override]
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return Vec2(self.x / k, self.y / k)

    def norm2(self) -> Fraction:
        return self.x * self.x + self.y * self.y

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def as_strings(self) -> list[str]:
        return [format_rational(self.x), format_rational(self.y)]


ZERO = Vec2(Fraction(0), Fraction(0))


def cross(a, b) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def dot(a, b) -> Fraction:
    return a[0] * b[0] + a[1] * b[1]


def orient(a, b, c) -> int:
    """Sign of the turn a -> b -> c (+1 counterclockwise)."""
    v = cross(Vec2(b[0] - a[0], b[1] - a[1]), Vec2(c[0] - a[0], c[1] - a[1]))
    return (v > 0) - (v < 0)


def diamond(v) -> Fraction:
    """Diamond angle of a nonzero vector, in [0, 4)."""
    x, y = v
    if x == 0 and y == 0:
        raise ValueError("diamond angle of the zero vector")
    if y >= 0:
        if x >= 0:
            return Fraction(y) / (x + y)
        return 1 - Fraction(x) / (-x + y)
    if x < 0:
        return 2 - Fraction(y) / (-x - y)
    return 3 + Fraction(x) / (x - y)


def rel_diamond(a, v) -> Fraction:
    """Diamond angle of ``v`` measured counterclockwise from ``a``.

    Equals 0 iff v is a positive multiple of a and 2 iff v points opposite.
    """
    return diamond((dot(a, v), cross(a, v)))


def parallel(a, b) -> bool:
    return cross(a, b) == 0


def same_ray(a, b) -> bool:
    return cross(a, b) == 0 and dot(a, b) > 0


def primitive(v) -> tuple[int, int]:
    """Positive rescaling of a rational vector to coprime integer coordinates."""
    x, y = Q(v[0]), Q(v[1])
    if x == 0 and y == 0:
        raise ValueError("zero vector has no direction")
    den = x.denominator * y.denominator // gcd(x.denominator, y.denominator)
    ix, iy = int(x * den), int(y * den)
    g = gcd(ix, iy)
    return ix // g, iy // g


class Direction(NamedTuple):
    """Unoriented direction: primitive integer vector, first nonzero entry > 0."""

    x: int
    y: int

    @classmethod
    def of(cls, v) -> "Direction":
        px, py = primitive(v)
        if px < 0 or (px == 0 and py < 0):
            px, py = -px, -py
        return cls(px, py)

    def vec(self) -> Vec2:
        return Vec2(Fraction(self.x), Fraction(self.y))

    def __str__(self) -> str:
        return f"{self.x},{self.y}"


def in_closed_arc(a, b, v) -> bool:
    """True if v lies in the counterclockwise arc [a, b] (arc angle < 2pi)."""
    return rel_diamond(a, v) <= rel_diamond(a, b)


def point_on_segment(p, a, b) -> bool:
    if cross(Vec2(b[0] - a[0], b[1] - a[1]), Vec2(p[0] - a[0], p[1] - a[1])) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segment_intersection(p0, p1, q0, q1):
    """Intersection of closed segments.

    Returns ``None`` (disjoint), ``("point", P)`` or ``("overlap", A, B)``.
    """
    r = Vec2(p1[0] - p0[0], p1[1] - p0[1])
    s = Vec2(q1[0] - q0[0], q1[1] - q0[1])
    qp = Vec2(q0[0] - p0[0], q0[1] - p0[1])
    denom = cross(r, s)
    if denom == 0:
        if cross(qp, r) != 0:
            return None
        rr = dot(r, r)
        if rr == 0:
            return ("point", Vec2(*p0)) if point_on_segment(p0, q0, q1) else None
        t0 = dot(qp, r) / rr
        t1 = t0 + dot(s, r) / rr
        lo, hi = max(Fraction(0), min(t0, t1)), min(Fraction(1), max(t0, t1))
        if lo > hi:
            return None
        a = Vec2(p0[0] + r.x * lo, p0[1] + r.y * lo)
        if lo == hi:
            return ("point", a)
        return ("overlap", a, Vec2(p0[0] + r.x * hi, p0[1] + r.y * hi))
    t = cross(qp, s) / denom
    u = cross(qp, r) / denom
    if 0 <= t <= 1 and 0 <= u <= 1:
        return ("point", Vec2(p0[0] + r.x * t, p0[1] + r.y * t))
    return None


def signed_area2(vertices) -> Fraction:
    n = len(vertices)
    return sum((cross(vertices[i], vertices[(i + 1) % n]) for i in range(n)), Fraction(0))

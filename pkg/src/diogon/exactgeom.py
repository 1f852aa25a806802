"""Exact scalars and distance-geometry predicates.

Rationals are :class:`fractions.Fraction`. Irrational coordinates of a planar
integer-distance configuration all live in one quadratic field Q(sqrt(s)), so
:class:`Surd` only needs to represent ``base + coeff*sqrt(s)`` for a single
squarefree ``s``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import NamedTuple, Union

Rat = Fraction
Number = Union[int, Fraction]


class DomainError(ValueError):
    """Raised when an argument lies outside an operation's domain."""


class RadicandMismatch(ArithmeticError):
    """Two surds with different radicands cannot be combined."""


def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, r)`` with ``n == s * r*r`` and ``s`` squarefree.

    Trial division; the values seen here are bounded by a few times dmax**4.
    """
    if n < 0:
        raise DomainError(f"negative value {n}")
    if n == 0:
        return 0, 0
    s, r = 1, 1
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            r *= p ** (e // 2)
            if e % 2:
                s *= p
        p += 1 if p == 2 else 2
    s *= m
    return s, r


def squarefree_part(n: int) -> int:
    return squarefree_split(n)[0]


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def rational_sqrt(x: Number) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    x = Fraction(x)
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


@dataclass(frozen=True)
class Surd:
    """The number ``base + coeff*sqrt(radicand)`` with a squarefree radicand.

    Radicands 0 and 1 are folded into ``base`` so that rationals have exactly
    one representation (``radicand == 1``, ``coeff == 0``).
    """

    base: Fraction = Fraction(0)
    coeff: Fraction = Fraction(0)
    radicand: int = 1

    def __post_init__(self):
        base, coeff, s = Fraction(self.base), Fraction(self.coeff), int(self.radicand)
        if s < 0:
            raise DomainError("radicand must be non-negative")
        if s in (0, 1):
            base, coeff, s = base + coeff * s, Fraction(0), 1
        else:
            t, r = squarefree_split(s)
            if r != 1:
                coeff, s = coeff * r, t
        if coeff == 0:
            s = 1
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "radicand", s)

    @classmethod
    def sqrt(cls, x: Number) -> "Surd":
        """Exact square root of a non-negative rational as a surd."""
        x = Fraction(x)
        if x < 0:
            raise DomainError(f"sqrt of negative {x}")
        # sqrt(p/q) = sqrt(p*q)/q
        s, r = squarefree_split(x.numerator * x.denominator)
        return cls(Fraction(0), Fraction(r, x.denominator), s) if s else cls()

    @property
    def is_rational(self) -> bool:
        return self.coeff == 0

    def _common(self, other) -> tuple["Surd", int]:
        if not isinstance(other, Surd):
            other = Surd(Fraction(other))
        if self.coeff == 0:
            return other, other.radicand
        if other.coeff == 0 or other.radicand == self.radicand:
            return other, self.radicand
        raise RadicandMismatch(f"sqrt({self.radicand}) vs sqrt({other.radicand})")

    def __add__(self, other) -> "Surd":
        if not isinstance(other, (Surd, int, Fraction)):
            return NotImplemented
        o, s = self._common(other)
        return Surd(self.base + o.base, self.coeff + o.coeff, s)

    __radd__ = __add__

    def __neg__(self) -> "Surd":
        return Surd(-self.base, -self.coeff, self.radicand)

    def __sub__(self, other) -> "Surd":
        if not isinstance(other, (Surd, int, Fraction)):
            return NotImplemented
        return self + (-(other if isinstance(other, Surd) else Surd(Fraction(other))))

    def __rsub__(self, other) -> "Surd":
        return (-self) + other

    def __mul__(self, other) -> "Surd":
        if not isinstance(other, (Surd, int, Fraction)):
            return NotImplemented
        o, s = self._common(other)
        return Surd(
            self.base * o.base + self.coeff * o.coeff * s,
            self.base * o.coeff + self.coeff * o.base,
            s,
        )

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Surd":
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        out = Surd(1)
        for _ in range(e):
            out = out * self
        return out

    def square(self) -> "Surd":
        return self * self

    def to_fraction(self) -> Fraction:
        if self.coeff:
            raise ValueError(f"{self} is irrational")
        return self.base

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.coeff == 0 and self.base == other
        if isinstance(other, Surd):
            return (self.base, self.coeff, self.radicand) == (other.base, other.coeff, other.radicand)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.base, self.coeff, self.radicand))

    def __float__(self) -> float:
        return float(self.base) + float(self.coeff) * self.radicand ** 0.5

    def __str__(self) -> str:
        return format_surd(self)

    def __repr__(self) -> str:
        return f"Surd({format_surd(self)!r})"


def sign_of(x: Union[Surd, Number]) -> int:
    """Exact sign of ``a + b*sqrt(s)``: compare a**2 with b**2*s when signs differ."""
    if not isinstance(x, Surd):
        x = Fraction(x)
        return (x > 0) - (x < 0)
    a, b, s = x.base, x.coeff, x.radicand
    sa, sb = (a > 0) - (a < 0), (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    lhs, rhs = a * a, b * b * s
    if lhs == rhs:
        return 0
    return sa if lhs > rhs else sb


def _fmt_rat(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def format_surd(x: Union[Surd, Number]) -> str:
    """Serialize as ``p/q`` or ``p/q+r/s*sqrt(n)`` (``-`` for a negative coefficient)."""
    if not isinstance(x, Surd):
        return _fmt_rat(Fraction(x))
    if x.coeff == 0:
        return _fmt_rat(x.base)
    op = "-" if x.coeff < 0 else "+"
    return f"{_fmt_rat(x.base)}{op}{_fmt_rat(abs(x.coeff))}*sqrt({x.radicand})"


_SURD_RE = re.compile(r"^(-?\d+)/(\d+)(?:([+-])(\d+)/(\d+)\*sqrt\((\d+)\))?$")


def parse_surd(text: str) -> Surd:
    m = _SURD_RE.match(text.strip())
    if not m:
        raise ValueError(f"malformed exact number {text!r}")
    base = Fraction(int(m.group(1)), int(m.group(2)))
    if m.group(3) is None:
        return Surd(base)
    coeff = Fraction(int(m.group(4)), int(m.group(5)))
    if m.group(3) == "-":
        coeff = -coeff
    return Surd(base, coeff, int(m.group(6)))


# --------------------------------------------------------------------------
# Cayley-Menger forms
# --------------------------------------------------------------------------

def cm3(d01sq: Number, d02sq: Number, d12sq: Number) -> Fraction:
    """16 * (triangle area)**2 from the three squared side lengths.

    Negative result means the distances violate the triangle inequality.
    """
    a, b, c = Fraction(d01sq), Fraction(d02sq), Fraction(d12sq)
    if a < 0 or b < 0 or c < 0:
        raise DomainError("squared distances must be non-negative")
    return 2 * (a * b + b * c + c * a) - (a * a + b * b + c * c)


def cm3_int(a2: int, b2: int, c2: int) -> int:
    return 2 * (a2 * b2 + b2 * c2 + c2 * a2) - (a2 * a2 + b2 * b2 + c2 * c2)


def _det3(m) -> Number:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def cm4_squared(d01: Number, d02: Number, d03: Number, d12: Number, d13: Number, d23: Number) -> Number:
    """Bordered 5x5 Cayley-Menger determinant of four points from squared distances.

    Equals 288 * volume**2 (regular unit tetrahedron gives 4). Computed as
    det of twice the Gram matrix based at point 0, which is the same number.
    """
    g = (
        (2 * d01, d01 + d02 - d12, d01 + d03 - d13),
        (d01 + d02 - d12, 2 * d02, d02 + d03 - d23),
        (d01 + d03 - d13, d02 + d03 - d23, 2 * d03),
    )
    return _det3(g)


def cm4(q) -> Fraction:
    """Cayley-Menger determinant of a quadrilateral's six distances; 0 iff coplanar."""
    return Fraction(cm4_squared(*q.squared_points()))


# --------------------------------------------------------------------------
# Planar embedding
# --------------------------------------------------------------------------

Point = tuple[Surd, Surd]


class PlanarEmbedding(NamedTuple):
    """Exact coordinates of A, B, C, D over Q(sqrt(radicand))."""

    points: tuple[Point, Point, Point, Point]
    radicand: int


class NotRealizable(NamedTuple):
    reason: str
    detail: str = ""

    def __bool__(self) -> bool:
        return False


def dist2(p: Point, q: Point) -> Surd:
    dx, dy = p[0] - q[0], p[1] - q[1]
    return dx * dx + dy * dy


def cross(o: Point, p: Point, q: Point) -> Surd:
    """z-component of (p - o) x (q - o)."""
    return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])


def orient(o: Point, p: Point, q: Point) -> int:
    return sign_of(cross(o, p, q))


# triangles of ABCD as index triples into squared_points() order
_TRIANGLES = {
    "ABC": (0, 1, 3),  # ab, ac, bc
    "ABD": (2, 0, 4),  # ad, ab, bd
    "ACD": (1, 2, 5),  # ac, ad, cd
    "BCD": (3, 4, 5),  # bc, bd, cd
}


def triangle_cm3s(q) -> dict[str, int]:
    """cm3 of each of the four triangles of the labeled quadrilateral."""
    sq = q.squared_points()
    return {name: cm3_int(sq[i], sq[j], sq[k]) for name, (i, j, k) in _TRIANGLES.items()}


def embed(q) -> PlanarEmbedding | NotRealizable:
    """Place A=(0,0), B=(|AB|,0), C with y >= 0 and solve for D exactly.

    Returns :class:`NotRealizable` (falsy) with a reason code when the six
    distances do not describe four coplanar points.
    """
    for name, t in triangle_cm3s(q).items():
        if t < 0:
            return NotRealizable("triangle", name)
    if cm4(q) != 0:
        return NotRealizable("nonplanar", "cm4 != 0")
    ab = q.ab
    d01, d02, d03, d12, d13, d23 = q.squared_points()  # ab ac ad bc bd cd
    t_c = cm3_int(d01, d02, d12)
    t_d = cm3_int(d01, d03, d13)
    s_c, r_c = squarefree_split(t_c)
    s_d, r_d = squarefree_split(t_d)
    if t_c and t_d and s_c != s_d:
        return NotRealizable("radicand", f"{s_c} vs {s_d}")
    s = s_c or s_d or 1
    two_ab = 2 * ab
    a = (Surd(), Surd())
    b = (Surd(ab), Surd())
    c = (Surd(Fraction(d01 + d02 - d12, two_ab)), Surd(0, Fraction(r_c, two_ab), s))
    xd = Surd(Fraction(d01 + d03 - d13, two_ab))
    yd = Surd(0, Fraction(r_d, two_ab), s)
    d = None
    for cand in ((xd, yd), (xd, -yd)):
        if dist2(c, cand) == d23:
            d = cand
            break
    if d is None:
        return NotRealizable("nonplanar", "no reflection of D matches |CD|")
    return PlanarEmbedding((a, b, c, d), s)

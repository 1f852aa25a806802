"""Pell equation x^2 - D*y^2 = 1 and the side-2 quadrilateral family it parametrizes."""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .exactgeom import DomainError


@dataclass(frozen=True, order=True)
class PellSolution:
    x: int
    y: int
    D: int

    def __post_init__(self):
        if self.x * self.x - self.D * self.y * self.y != 1:
            raise DomainError(f"({self.x}, {self.y}) does not solve x^2 - {self.D}y^2 = 1")
        if self.x < 1 or self.y < 0:
            raise DomainError("Pell solutions are taken with x >= 1, y >= 0")

    @property
    def trivial(self) -> bool:
        return self.y == 0


def _check_d(D: int) -> None:
    if D < 2 or isqrt(D) ** 2 == D:
        raise DomainError(f"D={D} must be a non-square integer >= 2")


def pell_fundamental(D: int) -> PellSolution:
    """Least positive solution from the convergents of the continued fraction of sqrt(D)."""
    _check_d(D)
    a0 = isqrt(D)
    m, d, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    while p * p - D * q * q != 1:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return PellSolution(p, q, D)


def pell_norm(x: int, y: int, D: int = 12) -> int:
    return x * x - D * y * y


def brahmagupta_product(a1: int, b1: int, c1: int, d1: int, D: int = 12) -> tuple[int, int]:
    """(a1*c1 - D*b1*d1, a1*d1 - b1*c1), whose norm is norm(a1, b1) * norm(c1, d1)."""
    return a1 * c1 - D * b1 * d1, a1 * d1 - b1 * c1


def pell_compose(p: PellSolution, q: PellSolution, *, minus: bool = False) -> PellSolution:
    """Brahmagupta composition of two solutions.

    The default uses plus signs, (x1*x2 + D*y1*y2, x1*y2 + y1*x2), and moves up
    the solution sequence. ``minus=True`` uses the conjugate form
    (x1*x2 - D*y1*y2, x1*y2 - y1*x2) with absolute values, which divides
    instead; composing a solution with itself this way gives the trivial (1, 0).
    """
    if p.D != q.D:
        raise DomainError(f"cannot compose solutions for D={p.D} and D={q.D}")
    D = p.D
    if minus:
        x, y = brahmagupta_product(p.x, p.y, q.x, q.y, D)
        return PellSolution(abs(x), abs(y), D)
    return PellSolution(p.x * q.x + D * p.y * q.y, p.x * q.y + p.y * q.x, D)


def pell_stream(D: int, count: int) -> list[PellSolution]:
    if count < 1:
        raise DomainError("count must be positive")
    fund = pell_fundamental(D)
    out = [fund]
    while len(out) < count:
        out.append(pell_compose(out[-1], fund))
    return out


def pell_to_quad(s: PellSolution) -> tuple[int, int]:
    """Map x = 2b + 1, y = c for D = 12; the result satisfies b(b+1) = 3c^2."""
    if s.D != 12:
        raise DomainError("pell_to_quad needs a D = 12 solution")
    if s.x % 2 == 0:
        raise DomainError(f"x={s.x} is even, cannot equal 2b+1")
    return (s.x - 1) // 2, s.y


def side2_family_quad(s: PellSolution):
    """Quadrilateral with a side 2 built from a D=12 solution (2a+1)^2 - 12d^2 = 1.

    Sides AB=a, BC=2, CD=2d, DA=d and diagonals AC=a+1, BD=2d.
    """
    from .model import QuadDistances

    a, d = pell_to_quad(s)
    return QuadDistances(a, 2, 2 * d, d, a + 1, 2 * d)


def matches_side2_family(q) -> tuple[int, int] | None:
    """(a, d) if some dihedral relabeling of q is the Pell side-2 pattern, else None."""
    from .model import dihedral_orbit

    for r in dihedral_orbit(q):
        a, d = r.ab, r.da
        if (r.bc, r.cd, r.ac, r.bd) == (2, 2 * d, a + 1, 2 * d) and (2 * a + 1) ** 2 - 12 * d * d == 1:
            return a, d
    return None

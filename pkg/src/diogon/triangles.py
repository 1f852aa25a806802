"""Integer triangles with one prescribed side."""

from __future__ import annotations

from dataclasses import dataclass

from .exactgeom import DomainError


@dataclass(frozen=True)
class ThirdSideSet:
    k: int
    a: int
    options: frozenset[int]
    degenerate: frozenset[int]


def lemma1_check(k1: int, sides: tuple[int, int]) -> bool:
    """A triangle with a unit side and integer other sides must be isosceles."""
    if k1 != 1:
        raise DomainError("lemma1_check is defined for a unit side only")
    b, c = sides
    return b == c and b >= 1


def third_side_options(k: int, a: int) -> ThirdSideSet:
    """All b making (k, a, b) a proper triangle, plus the flat ones.

    Strict inequality forces |a - b| < k, so b lies in a window of width
    2k - 1 around a.
    """
    if k < 1 or a < 1:
        raise DomainError("k and a must be positive")
    options = frozenset(b for b in range(max(1, a - k + 1), a + k) if a + b > k)
    degenerate = frozenset(b for b in {a + k, a - k, k - a} if b >= 1)
    return ThirdSideSet(k, a, options, degenerate)


def enumerate_triangles(k: int, amax: int) -> list[tuple[int, int, int]]:
    """Non-degenerate integer triangles (k, a, b), a <= b <= amax, sorted."""
    if k < 1:
        raise DomainError("k must be positive")
    out = []
    for a in range(1, amax + 1):
        for b in third_side_options(k, a).options:
            if a <= b <= amax:
                out.append((k, a, b))
    return sorted(out)

"""Labeled quadrilateral records, canonical forms and shape predicates."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .exactgeom import (
    DomainError,
    NotRealizable,
    PlanarEmbedding,
    Surd,
    cm4,
    cm4_squared,
    cross,
    embed,
    orient,
    rational_sqrt,
    sign_of,
    triangle_cm3s,
)


class PreconditionError(ValueError):
    """An operation was called on a configuration outside its precondition."""


FIELDS = ("ab", "bc", "cd", "da", "ac", "bd")


@dataclass(frozen=True, order=True)
class QuadDistances:
    """The six distances of a labeled quadrilateral ABCD.

    Sides are ab, bc, cd, da (the closed polyline A->B->C->D); ac and bd are
    the diagonals. Ordering is lexicographic on (ab, bc, cd, da, ac, bd).
    """

    ab: int
    bc: int
    cd: int
    da: int
    ac: int
    bd: int

    def __post_init__(self):
        for name in FIELDS:
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise DomainError(f"{name} must be a positive integer, got {v!r}")

    @classmethod
    def from_tuple(cls, t) -> "QuadDistances":
        return cls(*(int(v) for v in t))

    def as_tuple(self) -> tuple[int, ...]:
        return (self.ab, self.bc, self.cd, self.da, self.ac, self.bd)

    def sides(self) -> tuple[int, int, int, int]:
        return (self.ab, self.bc, self.cd, self.da)

    def diagonals(self) -> tuple[int, int]:
        return (self.ac, self.bd)

    def squared_points(self) -> tuple[int, ...]:
        """Squared distances in point-pair order AB, AC, AD, BC, BD, CD."""
        return (self.ab ** 2, self.ac ** 2, self.da ** 2, self.bc ** 2, self.bd ** 2, self.cd ** 2)

    def __str__(self) -> str:
        return "({},{},{},{};{},{})".format(*self.as_tuple())


@dataclass(frozen=True)
class SquaredQuad:
    """Six squared distances (exact rationals) of a labeled quadrilateral.

    Used for configurations whose distances are not integers, e.g. random
    rational-coordinate trapezoids in property tests.
    """

    ab2: Fraction
    bc2: Fraction
    cd2: Fraction
    da2: Fraction
    ac2: Fraction
    bd2: Fraction

    @classmethod
    def from_points(cls, a, b, c, d) -> "SquaredQuad":
        def d2(p, q):
            return Fraction((p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2)

        return cls(d2(a, b), d2(b, c), d2(c, d), d2(d, a), d2(a, c), d2(b, d))

    def squared_points(self) -> tuple[Fraction, ...]:
        return (self.ab2, self.ac2, self.da2, self.bc2, self.bd2, self.cd2)


def _squares(q: Union[QuadDistances, SquaredQuad]) -> tuple:
    """(ab2, bc2, cd2, da2, ac2, bd2) for either record type."""
    if isinstance(q, QuadDistances):
        return tuple(v * v for v in q.as_tuple())
    return (q.ab2, q.bc2, q.cd2, q.da2, q.ac2, q.bd2)


# --------------------------------------------------------------------------
# relabelings
# --------------------------------------------------------------------------

def _pair_index(i: int, j: int) -> int:
    """Index into (ab, bc, cd, da, ac, bd) of the pair of points i, j (A=0..D=3)."""
    return {
        frozenset((0, 1)): 0,
        frozenset((1, 2)): 1,
        frozenset((2, 3)): 2,
        frozenset((3, 0)): 3,
        frozenset((0, 2)): 4,
        frozenset((1, 3)): 5,
    }[frozenset((i, j))]


_PAIRS = ((0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3))


def _perm_index_map(perm: tuple[int, ...]) -> tuple[int, ...]:
    """New label L sits at old point perm[L]; return the source index for each field."""
    return tuple(_pair_index(perm[i], perm[j]) for i, j in _PAIRS)


DIHEDRAL = tuple(
    _perm_index_map(p)
    for p in (
        (0, 1, 2, 3), (1, 2, 3, 0), (2, 3, 0, 1), (3, 0, 1, 2),
        (0, 3, 2, 1), (1, 0, 3, 2), (2, 1, 0, 3), (3, 2, 1, 0),
    )
)
ALL_PERMS = tuple(_perm_index_map(p) for p in itertools.permutations(range(4)))


def relabel(q: QuadDistances, index_map: tuple[int, ...]) -> QuadDistances:
    t = q.as_tuple()
    return QuadDistances(*(t[i] for i in index_map))


def relabel_tuple(t: tuple, index_map: tuple[int, ...]) -> tuple:
    return tuple(t[i] for i in index_map)


def dihedral_orbit(q: QuadDistances) -> list[QuadDistances]:
    return [relabel(q, m) for m in DIHEDRAL]


def canonical_tuple(t: tuple) -> tuple:
    return min(tuple(t[i] for i in m) for m in DIHEDRAL)


def canonical_form(q: QuadDistances) -> QuadDistances:
    """Lexicographically least relabeling under the 8 symmetries of the 4-cycle."""
    return QuadDistances(*canonical_tuple(q.as_tuple()))


# --------------------------------------------------------------------------
# classification
# --------------------------------------------------------------------------

class Kind(str, enum.Enum):
    NON_METRIC = "nonmetric"
    NON_PLANAR = "nonplanar"
    DEGENERATE = "degenerate"
    CONVEX = "convex"
    CONCAVE = "concave"
    # convex point set, but the labeling's sides AB and CD (or BC and DA) cross
    SELF_INTERSECTING = "selfintersecting"


@dataclass(frozen=True)
class ConfigClass:
    kind: Kind
    detail: Optional[str] = None

    def __str__(self) -> str:
        names = {
            Kind.NON_METRIC: "NonMetric",
            Kind.NON_PLANAR: "NonPlanar",
            Kind.DEGENERATE: "DegenerateCollinear",
            Kind.CONVEX: "Convex",
            Kind.CONCAVE: "Concave",
            Kind.SELF_INTERSECTING: "SelfIntersecting",
        }
        return names[self.kind] + (f"[{self.detail}]" if self.detail else "")


def classify_embedded(q: QuadDistances, emb: PlanarEmbedding | NotRealizable | None = None) -> tuple[ConfigClass, PlanarEmbedding | None]:
    """Classification plus the embedding it was decided on (None if unrealizable)."""
    cms = triangle_cm3s(q)
    bad = [name for name, t in cms.items() if t < 0]
    if bad:
        return ConfigClass(Kind.NON_METRIC, bad[0]), None
    if cm4(q) != 0:
        return ConfigClass(Kind.NON_PLANAR), None
    if emb is None:
        emb = embed(q)
    if not emb:
        # metric with cm4 == 0 always embeds; kept as a guard
        return ConfigClass(Kind.NON_PLANAR, emb.reason), None
    flat = [name for name, t in cms.items() if t == 0]
    if flat:
        return ConfigClass(Kind.DEGENERATE, flat[0]), emb
    a, b, c, d = emb.points
    pts = {"A": a, "B": b, "C": c, "D": d}
    for name in "ABCD":
        others = [pts[o] for o in "ABCD" if o != name]
        if _strictly_inside(pts[name], *others):
            return ConfigClass(Kind.CONCAVE, name), emb
    if _segments_cross(a, c, b, d):
        return ConfigClass(Kind.CONVEX), emb
    return ConfigClass(Kind.SELF_INTERSECTING), emb


def classify(q: QuadDistances) -> ConfigClass:
    """Realizability and shape class of a labeled distance record."""
    return classify_embedded(q)[0]


def _strictly_inside(p, a, b, c) -> bool:
    o1, o2, o3 = orient(a, b, p), orient(b, c, p), orient(c, a, p)
    return o1 != 0 and o1 == o2 == o3


def _segments_cross(p1, p2, q1, q2) -> bool:
    """Proper crossing of segments p1p2 and q1q2 (no three points collinear)."""
    return orient(p1, p2, q1) * orient(p1, p2, q2) < 0 and orient(q1, q2, p1) * orient(q1, q2, p2) < 0


def _require(q: QuadDistances, kinds: tuple[Kind, ...], op: str) -> ConfigClass:
    cls = classify(q)
    if cls.kind not in kinds:
        raise PreconditionError(f"{op} requires {'/'.join(k.value for k in kinds)} input, got {cls}")
    return cls


# --------------------------------------------------------------------------
# shape flags
# --------------------------------------------------------------------------

def ptolemy_gap(q: QuadDistances) -> int:
    """ab*cd + bc*da - ac*bd; zero exactly for cyclic convex quadrilaterals."""
    return q.ab * q.cd + q.bc * q.da - q.ac * q.bd


def is_cyclic(q: QuadDistances) -> bool:
    _require(q, (Kind.CONVEX,), "is_cyclic")
    return ptolemy_gap(q) == 0


def is_tangential(q: QuadDistances) -> bool:
    _require(q, (Kind.CONVEX,), "is_tangential")
    return q.ab + q.cd == q.bc + q.da


class Trapezoid(str, enum.Enum):
    NONE = "none"
    PAIR_BC_AD = "pair_BC_AD"
    PAIR_AB_CD = "pair_AB_CD"
    PARALLELOGRAM = "parallelogram"


def _parallel_pairs(emb: PlanarEmbedding) -> tuple[bool, bool]:
    a, b, c, d = emb.points

    def par(p, q, r, s) -> bool:
        u = (q[0] - p[0], q[1] - p[1])
        v = (s[0] - r[0], s[1] - r[1])
        return sign_of(u[0] * v[1] - u[1] * v[0]) == 0

    return par(b, c, a, d), par(a, b, c, d)


def is_trapezoid(q: QuadDistances) -> Trapezoid:
    """Which pair of opposite sides is exactly parallel in the embedding."""
    cls, emb = classify_embedded(q)
    if cls.kind not in (Kind.CONVEX, Kind.CONCAVE):
        raise PreconditionError(f"is_trapezoid requires a convex or concave polygon, got {cls}")
    return trapezoid_of(emb)


def trapezoid_of(emb: PlanarEmbedding) -> Trapezoid:
    bc_ad, ab_cd = _parallel_pairs(emb)
    if bc_ad and ab_cd:
        return Trapezoid.PARALLELOGRAM
    if bc_ad:
        return Trapezoid.PAIR_BC_AD
    if ab_cd:
        return Trapezoid.PAIR_AB_CD
    return Trapezoid.NONE


# --------------------------------------------------------------------------
# trapezoid identities
# --------------------------------------------------------------------------

_ROTATE = DIHEDRAL[1]  # A'=B, B'=C, C'=D, D'=A


def _bc_ad_parallel_squared(sq: tuple) -> bool:
    """Distance-only test that vectors BC and AD are parallel and same-directed.

    (C-B).(D-A) = (ac2 + bd2 - ab2 - cd2) / 2, so parallel iff its square is
    bc2*da2. Requires the four points to be coplanar.
    """
    ab2, bc2, cd2, da2, ac2, bd2 = sq
    dot2 = ac2 + bd2 - ab2 - cd2
    return dot2 > 0 and dot2 * dot2 == 4 * bc2 * da2


def _trapezoid_squares(q, op: str, allow_ab_cd: bool) -> tuple:
    """Squared distances relabeled so that BC is parallel to AD."""
    if isinstance(q, QuadDistances):
        kind = is_trapezoid(q)
        if kind in (Trapezoid.PAIR_BC_AD, Trapezoid.PARALLELOGRAM):
            return _squares(q)
        if kind is Trapezoid.PAIR_AB_CD and allow_ab_cd:
            return _squares(relabel(q, _ROTATE))
        raise PreconditionError(f"{op} requires a trapezoid, got {kind.value} for {q}")
    if cm4_squared(*q.squared_points()) != 0:
        raise PreconditionError(f"{op}: configuration is not planar")
    sq = _squares(q)
    if _bc_ad_parallel_squared(sq):
        return sq
    if allow_ab_cd:
        rot = relabel_tuple(sq, _ROTATE)
        if _bc_ad_parallel_squared(rot):
            return rot
    raise PreconditionError(f"{op} requires a trapezoid")


def quad_identity_eq1(q) -> Fraction:
    """ac^2 + bd^2 - ab^2 - cd^2 - 2*bc*da for a trapezoid with BC || AD.

    Zero on every such trapezoid. Accepts integer records or SquaredQuad.
    """
    ab2, bc2, cd2, da2, ac2, bd2 = _trapezoid_squares(q, "quad_identity_eq1", allow_ab_cd=False)
    bc_da = rational_sqrt(Fraction(bc2) * Fraction(da2))
    if bc_da is None:
        raise PreconditionError("bc*da is irrational, sides cannot be parallel")
    return Fraction(ac2 + bd2 - ab2 - cd2) - 2 * bc_da


def quad_identity_eq9(q) -> Union[Fraction, Surd]:
    """(d+c)(a-b)(a+b) - (d-c)(d1-d2)(d1+d2) with a=|AB|, b=|CD|, c=|BC|, d=|AD|.

    d1, d2 are the diagonals AC, BD. A trapezoid whose parallel pair is AB, CD
    is evaluated on its rotated labeling. Returns a Fraction when the value is
    rational (always for integer records).
    """
    ab2, bc2, cd2, da2, ac2, bd2 = _trapezoid_squares(q, "quad_identity_eq9", allow_ab_cd=True)
    c, d = Surd.sqrt(bc2), Surd.sqrt(da2)
    val = (d + c) * Fraction(ab2 - cd2) - (d - c) * Fraction(ac2 - bd2)
    return val.base if val.is_rational else val


# --------------------------------------------------------------------------
# catalog entries
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Flags:
    cyclic: bool = False
    tangential: bool = False
    trapezoid: bool = False
    parallelogram: bool = False


@dataclass(frozen=True)
class KRole:
    k: int
    role: str  # "side" | "diagonal"


@dataclass(frozen=True)
class CatalogEntry:
    canonical: QuadDistances
    cls: ConfigClass
    flags: Flags
    k_roles: tuple[KRole, ...]
    radicand: int
    coords: tuple = field(default=(), compare=False)
    trapezoid: Trapezoid = Trapezoid.NONE


def k_roles_of(q: QuadDistances, k: int) -> tuple[KRole, ...]:
    roles = []
    if k in q.sides():
        roles.append(KRole(k, "side"))
    if k in q.diagonals():
        roles.append(KRole(k, "diagonal"))
    return tuple(roles)


def make_entry(q: QuadDistances, k: Optional[int] = None) -> CatalogEntry:
    """Classify and flag the canonical relabeling of q.

    Raises PreconditionError if q is not a realizable polygon labeling.
    """
    canon = canonical_form(q)
    cls, emb = classify_embedded(canon)
    if emb is None or cls.kind is Kind.SELF_INTERSECTING:
        raise PreconditionError(f"{canon} is not a catalogable polygon ({cls})")
    flags = Flags()
    trap = Trapezoid.NONE
    if cls.kind in (Kind.CONVEX, Kind.CONCAVE):
        trap = trapezoid_of(emb)
        convex = cls.kind is Kind.CONVEX
        flags = Flags(
            cyclic=convex and ptolemy_gap(canon) == 0,
            tangential=convex and canon.ab + canon.cd == canon.bc + canon.da,
            trapezoid=trap is not Trapezoid.NONE,
            parallelogram=trap is Trapezoid.PARALLELOGRAM,
        )
    return CatalogEntry(
        canonical=canon,
        cls=cls,
        flags=flags,
        k_roles=k_roles_of(canon, k) if k is not None else (),
        radicand=emb.radicand,
        coords=emb.points,
        trapezoid=trap,
    )

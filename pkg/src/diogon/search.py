"""Bounded exhaustive search for integer-distance quadrilaterals and point sets.

The quadrilateral search fixes the distance equal to k as side AB (role
``side``) or diagonal AC (role ``diagonal``); every dihedral orbit with k in
that role has such a representative, and results are deduplicated by
canonical form. Around the diagonal AC both B and D are solved exactly:
with T = 16*area^2 of a triangle on AC, |BD| is rational only if T_B and T_D
share a squarefree part s, so D-triangles are bucketed by s and only
same-bucket pairs are tried.
"""

from __future__ import annotations

import enum
import itertools
import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Iterable, Optional

from .exactgeom import Surd, cm3_int, squarefree_split
from .model import (
    CatalogEntry,
    Kind,
    QuadDistances,
    canonical_tuple,
    classify_embedded,
    make_entry,
)
from .triangles import third_side_options

THREADS_ENV = "DIOGON_THREADS"


class ConfigError(ValueError):
    pass


class SearchLimitExceeded(RuntimeError):
    """The visit budget ran out; ``partial`` holds what was found so far."""

    def __init__(self, partial, visited: int, completed_partitions: int):
        super().__init__(f"visit limit exceeded after {visited} candidates ({completed_partitions} partitions complete)")
        self.partial = partial
        self.visited = visited
        self.completed_partitions = completed_partitions


class Role(str, enum.Enum):
    SIDE = "side"
    DIAGONAL = "diagonal"
    ANY = "any"


class Shape(str, enum.Enum):
    CONVEX = "convex"
    CONCAVE = "concave"
    ANY = "any"


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV}={raw!r} is not an integer") from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be positive, got {n}")
    return n


@dataclass(frozen=True)
class SearchConfig:
    n: int = 4
    k: int = 2
    k_role: Role = Role.ANY
    dmax: int = 10
    shape: Shape = Shape.ANY
    require_cyclic: bool = False
    require_tangential: bool = False
    require_trapezoid: bool = False
    threads: int = 1
    include_degenerate: bool = False
    max_visited: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "k_role", Role(self.k_role))
        object.__setattr__(self, "shape", Shape(self.shape))

    def validate(self) -> "SearchConfig":
        if self.n not in (3, 4, 5, 6, 7):
            raise ConfigError(f"n must be 3..7, got {self.n}")
        if self.k < 1:
            raise ConfigError("k must be a positive integer")
        if self.dmax < self.k:
            raise ConfigError(f"dmax ({self.dmax}) must be at least k ({self.k})")
        if self.threads < 1:
            raise ConfigError("threads must be positive")
        flags = self.require_cyclic or self.require_tangential or self.require_trapezoid
        if self.n != 4 and (self.shape is not Shape.ANY or flags or self.k_role is not Role.ANY):
            raise ConfigError("point-set and triangle modes support only role=any, shape=any and no shape flags")
        if (self.require_cyclic or self.require_tangential) and self.shape is Shape.CONCAVE:
            raise ConfigError("cyclic/tangential flags apply to convex quadrilaterals only")
        return self

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "role": self.k_role.value,
            "dmax": self.dmax,
            "shape": self.shape.value,
            "cyclic": self.require_cyclic,
            "tangential": self.require_tangential,
            "trapezoid": self.require_trapezoid,
            "threads": self.threads,
            "include_degenerate": self.include_degenerate,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SearchConfig":
        return cls(
            n=d["n"], k=d["k"], k_role=d["role"], dmax=d["dmax"], shape=d["shape"],
            require_cyclic=d["cyclic"], require_tangential=d["tangential"],
            require_trapezoid=d["trapezoid"], threads=d.get("threads", 1),
            include_degenerate=d.get("include_degenerate", False),
        )


# --------------------------------------------------------------------------
# quadrilateral search
# --------------------------------------------------------------------------

@dataclass
class PartitionResult:
    index: int
    tuples: list  # canonical 6-tuples accepted in this partition
    visited: int


def partitions(cfg: SearchConfig) -> list[tuple[str, int]]:
    """Independent work units: (mode, free outer value)."""
    units = []
    if cfg.k_role in (Role.SIDE, Role.ANY):
        units += [("side", ac) for ac in range(1, cfg.dmax + 1)]
    if cfg.k_role in (Role.DIAGONAL, Role.ANY):
        units += [("diagonal", ab) for ab in range(1, cfg.dmax + 1)]
    return units


def _base_triangles(base: int, dmax: int, degenerate: bool, legs: Optional[Iterable[int]] = None):
    """Triangles (u, v) on a base of length `base`, bucketed by squarefree part of cm3.

    u is the leg at the base's first endpoint, v at the second. Flat triangles
    (cm3 = 0) go in bucket 0 when requested.
    """
    buckets: dict[int, list[tuple[int, int, int]]] = defaultdict(list)
    us = range(1, dmax + 1) if legs is None else legs
    b2 = base * base
    for u in us:
        opts = third_side_options(base, u)
        vs = set(opts.options)
        if degenerate:
            vs |= opts.degenerate
        for v in sorted(vs):
            if v > dmax:
                continue
            t = cm3_int(b2, u * u, v * v)
            s, r = squarefree_split(t)
            buckets[s].append((u, v, r))
    return buckets


def _scan_partition(cfg: SearchConfig, mode: str, value: int) -> tuple[list, int]:
    k, dmax = cfg.k, cfg.dmax
    convex_only = cfg.shape is Shape.CONVEX
    if mode == "side":
        ab, ac = k, value
        b_tris = _base_triangles(ac, dmax, cfg.include_degenerate, legs=[ab])
    else:
        ac, ab = k, value
        b_tris = _base_triangles(ac, dmax, cfg.include_degenerate, legs=[ab])
    d_tris = _base_triangles(ac, dmax, cfg.include_degenerate)
    four_ac2 = 4 * ac * ac
    dmax2 = dmax * dmax
    flat = [(u, v, r, 0) for u, v, r in d_tris.get(0, [])]
    tagged = {s: [(u, v, r, s) for u, v, r in ts] for s, ts in d_tris.items() if s}
    everything = [t for s in sorted(tagged) for t in tagged[s]] + flat
    found = set()
    visited = 0
    for s_b, b_list in b_tris.items():
        partners = tagged.get(s_b, []) + flat if s_b else everything
        for _ab, bc, r_b in b_list:
            base_p = ab * ab - bc * bc
            for da, cd, r_d, s_d in partners:
                p = base_p - da * da + cd * cd
                p2 = p * p
                s = s_b or s_d
                if convex_only:
                    signs = (1,)
                elif r_b == 0 or r_d == 0:
                    signs = (1,)  # both reflections of D coincide
                else:
                    signs = (1, -1)
                for sign in signs:
                    visited += 1
                    num = p2 + s * (r_b + sign * r_d) ** 2
                    if num % four_ac2:
                        continue
                    bd2 = num // four_ac2
                    if bd2 < 1 or bd2 > dmax2:
                        continue
                    bd = isqrt(bd2)
                    if bd * bd != bd2:
                        continue
                    if convex_only and not _convex_prefilter(ab, bc, cd, da, ac, bd):
                        continue
                    found.add((ab, bc, cd, da, ac, bd))
    accepted = []
    for t in sorted(found):
        q = QuadDistances(*t)
        if _accept(cfg, q):
            accepted.append(canonical_tuple(t))
    return sorted(set(accepted)), visited


def _convex_prefilter(ab, bc, cd, da, ac, bd) -> bool:
    """Necessary conditions for a convex labeling: diagonal sums exceed opposite-side
    sums, and Ptolemy's inequality."""
    if ac + bd <= ab + cd or ac + bd <= bc + da:
        return False
    return ac * bd <= ab * cd + bc * da


def _accept(cfg: SearchConfig, q: QuadDistances) -> bool:
    cls, _ = classify_embedded(q)
    kind = cls.kind
    if kind is Kind.DEGENERATE:
        return cfg.include_degenerate and cfg.shape is Shape.ANY
    if kind is Kind.CONVEX:
        if cfg.shape is Shape.CONCAVE:
            return False
    elif kind is Kind.CONCAVE:
        if cfg.shape is Shape.CONVEX:
            return False
    else:
        return False
    convex = kind is Kind.CONVEX
    if cfg.require_cyclic and not (convex and q.ab * q.cd + q.bc * q.da == q.ac * q.bd):
        return False
    if cfg.require_tangential and not (convex and q.ab + q.cd == q.bc + q.da):
        return False
    if cfg.require_trapezoid:
        from .model import Trapezoid, trapezoid_of

        _, emb = classify_embedded(q)
        if trapezoid_of(emb) is Trapezoid.NONE:
            return False
    return True


def _run_unit(args) -> PartitionResult:
    cfg, index, (mode, value) = args
    tuples, visited = _scan_partition(cfg, mode, value)
    return PartitionResult(index, tuples, visited)


@dataclass
class QuadSearchOutcome:
    config: SearchConfig
    entries: list[CatalogEntry]
    visited: int
    partitions: int
    complete: bool = True


def run_quad_search(
    cfg: SearchConfig,
    *,
    start_partition: int = 0,
    seed_tuples: Iterable[tuple] = (),
    on_partition: Optional[Callable[[int, list, int], None]] = None,
    seed_visited: int = 0,
) -> QuadSearchOutcome:
    """Run the quadrilateral search, optionally resuming after a completed partition.

    ``on_partition(index, canonical_tuples_so_far, visited_so_far)`` is called in
    partition order after each unit completes.
    """
    cfg.validate()
    if cfg.n != 4:
        raise ConfigError("run_quad_search handles n = 4 only")
    units = partitions(cfg)
    work = [(cfg, i, u) for i, u in enumerate(units) if i >= start_partition]
    seen: set = set(seed_tuples)
    visited = seed_visited
    if cfg.threads > 1 and len(work) > 1:
        pool = ProcessPoolExecutor(max_workers=cfg.threads)
        results = pool.map(_run_unit, work, chunksize=1)
    else:
        pool = None
        results = map(_run_unit, work)
    try:
        for res in results:
            seen.update(res.tuples)
            visited += res.visited
            if on_partition is not None:
                on_partition(res.index, sorted(seen), visited)
            if cfg.max_visited is not None and visited > cfg.max_visited:
                partial = [make_entry(QuadDistances(*t), cfg.k) for t in sorted(seen)]
                raise SearchLimitExceeded(partial, visited, res.index + 1)
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    entries = [make_entry(QuadDistances(*t), cfg.k) for t in sorted(seen)]
    return QuadSearchOutcome(cfg, entries, visited, len(units))


def enumerate_quads(cfg: SearchConfig) -> list[CatalogEntry]:
    """All realizable labeled quadrilaterals matching cfg, canonical and sorted."""
    return run_quad_search(cfg).entries


def naive_enumerate_quads(cfg: SearchConfig) -> list[tuple]:
    """Unpruned six-fold loop over all distance tuples, filtered by classify.

    Reference oracle for small dmax; returns canonical tuples.
    """
    out = set()
    r = range(1, cfg.dmax + 1)
    for t in itertools.product(r, repeat=6):
        q = QuadDistances(*t)
        ab, bc, cd, da, ac, bd = t
        if cfg.k_role is Role.SIDE and cfg.k not in (ab, bc, cd, da):
            continue
        if cfg.k_role is Role.DIAGONAL and cfg.k not in (ac, bd):
            continue
        if cfg.k_role is Role.ANY and cfg.k not in t:
            continue
        if _accept(cfg, q):
            out.add(canonical_tuple(t))
    return sorted(out)


# --------------------------------------------------------------------------
# n-point sets
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PointSetRecord:
    """An n-point planar integer distance set, no three collinear."""

    n: int
    distances: tuple[tuple[int, ...], ...]  # canonical distance matrix
    radicand: int
    coords: tuple = field(default=(), compare=False)


@dataclass
class PointSetOutcome:
    records: list[PointSetRecord]
    visited: int
    complete: bool = True


def _canonical_matrix(dm: list[list[int]]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Least upper-triangle tuple over all orderings, and the ordering achieving it."""
    n = len(dm)
    best, best_perm = None, None
    for perm in itertools.permutations(range(n)):
        key = tuple(dm[perm[i]][perm[j]] for i in range(n) for j in range(i + 1, n))
        if best is None or key < best:
            best, best_perm = key, perm
    return best, best_perm


def enumerate_ngon_pointsets(
    n: int,
    k: int,
    dmax: int,
    max_visited: Optional[int] = None,
    on_progress: Optional[Callable[[int, list], None]] = None,
    progress_every: int = 100_000,
) -> PointSetOutcome:
    """Planar n-point integer-distance sets with a distance k and all distances <= dmax.

    P0 = (0, 0), P1 = (k, 0). Every other point is fixed by its distances to
    P0 and P1 up to reflection; its y-coordinate is q*sqrt(s) with s the
    squarefree part of the triangle's cm3, and points from different s can
    never be at integer distance. Within one s the compatible points are
    grown into cliques with exact collinearity checks.
    """
    if n < 3:
        raise ConfigError("n must be at least 3")
    if k < 1 or dmax < k:
        raise ConfigError("need 1 <= k <= dmax")
    groups: dict[int, list[tuple[Fraction, Fraction, int, int]]] = defaultdict(list)
    k2 = k * k
    for r0 in range(1, dmax + 1):
        for r1 in sorted(third_side_options(k, r0).options):
            if r1 > dmax:
                continue
            t = cm3_int(k2, r0 * r0, r1 * r1)
            s, r = squarefree_split(t)
            x = Fraction(r0 * r0 - r1 * r1 + k2, 2 * k)
            q = Fraction(r, 2 * k)
            groups[s].append((x, q, r0, r1))
            groups[s].append((x, -q, r0, r1))
    visited = 0
    next_report = progress_every
    found: dict[tuple, PointSetRecord] = {}
    dmax2 = dmax * dmax

    def collinear(p, a, b) -> bool:
        # y = q*sqrt(s) in all three points, so the cross product is sqrt(s) * this
        return (a[0] - p[0]) * (b[1] - p[1]) - (a[1] - p[1]) * (b[0] - p[0]) == 0

    origin, unit = (Fraction(0), Fraction(0)), (Fraction(k), Fraction(0))
    for s in sorted(groups):
        pts = groups[s]
        m = len(pts)
        dist = {}
        adj = [set() for _ in range(m)]
        for i in range(m):
            for j in range(i + 1, m):
                visited += 1
                pi, pj = pts[i], pts[j]
                d2 = (pi[0] - pj[0]) ** 2 + s * (pi[1] - pj[1]) ** 2
                if d2.denominator != 1 or d2 > dmax2 or d2 == 0:
                    continue
                d = isqrt(d2.numerator)
                if d * d != d2:
                    continue
                if collinear(origin, pi, pj) or collinear(unit, pi, pj):
                    continue
                dist[i, j] = dist[j, i] = d
                adj[i].add(j)
                adj[j].add(i)

        def extend(clique: list[int], cands: list[int]):
            nonlocal visited, next_report
            if len(clique) == n - 2:
                yield list(clique)
                return
            for idx, c in enumerate(cands):
                visited += 1
                if max_visited is not None and visited > max_visited:
                    raise SearchLimitExceeded(None, visited, 0)
                if on_progress is not None and visited >= next_report:
                    next_report = visited + progress_every
                    on_progress(visited, sorted(found.values(), key=lambda r: r.distances))
                if any(collinear(pts[a], pts[b], pts[c]) for a, b in itertools.combinations(clique, 2)):
                    continue
                nxt = [d for d in cands[idx + 1:] if d in adj[c]]
                yield from extend(clique + [c], nxt)

        try:
            for clique in extend([], list(range(m))):
                labels = [None, None] + clique
                size = n
                dm = [[0] * size for _ in range(size)]
                for i in range(size):
                    for j in range(i + 1, size):
                        if i == 0 and j == 1:
                            d = k
                        elif i < 2:
                            p = pts[labels[j]]
                            d = p[2] if i == 0 else p[3]
                        else:
                            d = dist[labels[i], labels[j]]
                        dm[i][j] = dm[j][i] = d
                key, perm = _canonical_matrix(dm)
                if key in found:
                    continue
                coords_all = [(Surd(0), Surd(0)), (Surd(k), Surd(0))] + [
                    (Surd(pts[c][0]), Surd(0, pts[c][1], s)) for c in clique
                ]
                matrix = tuple(tuple(dm[perm[i]][perm[j]] for j in range(size)) for i in range(size))
                found[key] = PointSetRecord(n, matrix, s if s else 1, tuple(coords_all[p] for p in perm))
        except SearchLimitExceeded as exc:
            exc.partial = PointSetOutcome(sorted(found.values(), key=lambda r: r.distances), visited, False)
            raise
    records = sorted(found.values(), key=lambda r: r.distances)
    return PointSetOutcome(records, visited)


# --------------------------------------------------------------------------
# collinear configurations for k = 3
# --------------------------------------------------------------------------

def collinear_valid(a: int, b: int, ac: int, cd_offset: int) -> bool:
    """Exact check of A on BD with |AB| = |BC| = a, |AC| = ac, |AD| = b, |CD| = b + cd_offset."""
    t = cm3_int(a * a, ac * ac, a * a)  # triangle B A C
    if a < 1 or b < 1 or t <= 0:
        return False
    B, A, D = (Surd(0), Surd(0)), (Surd(a), Surd(0)), (Surd(a + b), Surd(0))
    C = (Surd(Fraction(2 * a * a - ac * ac, 2 * a)), Surd.sqrt(Fraction(t, 4 * a * a)))

    def d2(p, q):
        return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2

    return (d2(A, B), d2(B, C), d2(A, C), d2(A, D), d2(C, D), d2(B, D)) == (
        a * a, a * a, ac * ac, b * b, (b + cd_offset) ** 2, (a + b) ** 2
    )


def _collinear_pairs(amax: int, ac: int, cd_offset: int) -> list[tuple[int, int]]:
    """All (a, b), a <= amax, passing :func:`collinear_valid`.

    With B = (0, 0), A = (a, 0), D = (a + b, 0) and C fixed by |BC|, |AC|,
    |CD|^2 - (b + offset)^2 is linear in b, so each a has at most one root.
    """
    out = []
    for a in range(1, amax + 1):
        t = cm3_int(a * a, ac * ac, a * a)
        if t <= 0:
            continue
        xc = Fraction(2 * a * a - ac * ac, 2 * a)
        # (a + b - xc)^2 + yc^2 = (b + o)^2  ->  b * (2(a - xc) - 2o) = o^2 - (a - xc)^2 - yc^2
        u = a - xc
        coef = 2 * u - 2 * cd_offset
        if coef == 0:
            continue
        b = (cd_offset * cd_offset - u * u - Fraction(t, 4 * a * a)) / coef
        if b.denominator == 1 and b >= 1 and collinear_valid(a, int(b), ac, cd_offset):
            out.append((a, int(b)))
    return out


def collinear_case_v(k: int = 3, amax: int = 100) -> list[tuple[int, int]]:
    """(a, b) with A on BD, |AB|=|BC|=a, |AC|=k, |AD|=b, |CD|=b+1, validated exactly."""
    if k != 3:
        raise ConfigError("the collinear case is stated for k = 3")
    return _collinear_pairs(amax, 3, 1)


def collinear_case_vi(k: int = 3, amax: int = 100) -> list[tuple[int, int]]:
    """Same with |CD| = b + 2."""
    if k != 3:
        raise ConfigError("the collinear case is stated for k = 3")
    return _collinear_pairs(amax, 3, 2)


PRINTED_CASE_V = ((9, 8), (5, 16))
PRINTED_CASE_VI = ((3, 2), (5, 5))


def case_v_report(amax: int = 100) -> dict:
    """Computed pairs for the two collinear k=3 cases next to the printed ones."""
    out = {}
    for name, fn, offset, printed in (
        ("V", collinear_case_v, 1, PRINTED_CASE_V),
        ("VI", collinear_case_vi, 2, PRINTED_CASE_VI),
    ):
        got = fn(3, amax)
        in_range = {p for p in printed if p[0] <= amax}
        invalid = sorted(p for p in printed if not collinear_valid(p[0], p[1], 3, offset))
        extra = sorted(set(got) - set(printed))
        agrees = set(got) == in_range and not invalid
        note = "computed pairs match the printed pairs" if agrees else (
            f"discrepancy: printed {sorted(printed)} but exact validation gives {got} for a <= {amax}"
        )
        out[name] = {
            "computed": got,
            "printed": sorted(printed),
            "agrees": agrees,
            "printed_not_valid": invalid,
            "valid_not_printed": extra,
            "note": note,
        }
    return out

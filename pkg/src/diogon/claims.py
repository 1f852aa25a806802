"""Registry of bounded existence/nonexistence claims and their verifier."""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Callable

from .model import CatalogEntry, QuadDistances, make_entry
from .pell import matches_side2_family
from .search import (
    PointSetRecord,
    SearchConfig,
    enumerate_ngon_pointsets,
    run_quad_search,
)

TRAP_2344 = QuadDistances(2, 3, 2, 4, 4, 4)


class Verdict(str, enum.Enum):
    HOLDS_UP_TO_BOUND = "HOLDS_UP_TO_BOUND"
    REFUTED = "REFUTED"
    # an existence claim whose examples all exceed the bound
    NOT_EXHIBITED = "NOT_EXHIBITED"


class UnknownClaim(KeyError):
    pass


@dataclass
class ClaimReport:
    claim_id: str
    config: SearchConfig
    verdict: Verdict
    witnesses: list = field(default_factory=list)
    exhibits: list = field(default_factory=list)
    visited: int = 0
    elapsed: float = 0.0
    expected: Verdict = Verdict.HOLDS_UP_TO_BOUND
    statement: str = ""
    notes: list[str] = field(default_factory=list)

    @property
    def as_expected(self) -> bool:
        return self.verdict is self.expected


@dataclass(frozen=True)
class Claim:
    claim_id: str
    statement: str
    run: Callable[[int, int], tuple]  # (dmax, threads) -> (config, witnesses, exhibits, visited, notes)
    open_question: bool = False


def _quads(threads: int, **kw):
    cfg = SearchConfig(n=4, threads=threads, **kw)
    out = run_quad_search(cfg)
    return cfg, out.entries, out.visited


def _no_quads(**fixed):
    def run(dmax, threads):
        cfg, entries, visited = _quads(threads, dmax=dmax, **fixed)
        return cfg, entries, [], visited, []
    return run


def _side2_all_cyclic(dmax, threads):
    cfg, entries, visited = _quads(threads, k=2, k_role="side", dmax=dmax, shape="convex")
    return cfg, [e for e in entries if not e.flags.cyclic], entries, visited, []


def _side2_pell(dmax, threads):
    cfg, entries, visited = _quads(threads, k=2, k_role="side", dmax=dmax, shape="convex")
    bad, good, notes = [], [], []
    for e in entries:
        m = matches_side2_family(e.canonical)
        if m is None:
            bad.append(e)
        else:
            good.append(e)
            notes.append(f"{e.canonical}: AB=a={m[0]}, DA=d={m[1]}, (2a+1)^2 - 12d^2 = 1")
    return cfg, bad, good, visited, notes


def _parallelograms(dmax, threads):
    cfg, entries, visited = _quads(threads, k=2, dmax=dmax, shape="convex", require_trapezoid=True)
    return cfg, [e for e in entries if e.flags.parallelogram], [], visited, []


def _unique_trapezoid(dmax, threads):
    cfg, entries, visited = _quads(threads, k=2, dmax=dmax, shape="convex", require_trapezoid=True)
    trap = [e for e in entries if e.canonical == TRAP_2344]
    others = [e for e in entries if e.canonical != TRAP_2344]
    notes = ["permitted exception: the (2,3,2,4;4,4) trapezoid"] if trap else []
    return cfg, others, trap, visited, notes


def _k3_bounds(dmax, threads):
    cfg, k3, visited = _quads(threads, k=3, dmax=dmax)
    _, k1, v1 = _quads(threads, k=1, dmax=dmax)
    notes = [] if k3 else [f"no quadrilateral with a distance 3 has all distances <= {dmax}"]
    return cfg, k1, k3, visited + v1, notes


def _no_pointset(n, k):
    def run(dmax, threads):
        cfg = SearchConfig(n=n, k=k, dmax=dmax, threads=threads)
        out = enumerate_ngon_pointsets(n, k, dmax)
        return cfg, out.records, [], out.visited, []
    return run


REGISTRY: dict[str, Claim] = {
    c.claim_id: c
    for c in (
        Claim("NO_DISTANCE_ONE", "no quadrilateral (convex or concave) has a side or diagonal equal to 1",
              _no_quads(k=1, k_role="any", shape="any")),
        Claim("SIDE2_ALL_CYCLIC", "every convex quadrilateral with a side 2 is cyclic", _side2_all_cyclic),
        Claim("NO_CYCLIC_DIAGONAL_2", "no cyclic quadrilateral has a diagonal equal to 2",
              _no_quads(k=2, k_role="diagonal", shape="convex", require_cyclic=True)),
        Claim("NO_TANGENTIAL_DIAGONAL_2", "no tangential quadrilateral has a diagonal equal to 2",
              _no_quads(k=2, k_role="diagonal", shape="convex", require_tangential=True)),
        Claim("NO_SIDE2_PARALLELOGRAM", "no parallelogram has a side or diagonal equal to 2", _parallelograms),
        Claim("UNIQUE_SIDE2_TRAPEZOID", "the (2,3,2,4;4,4) trapezoid is the only trapezoid with a side or diagonal 2",
              _unique_trapezoid),
        Claim("NO_TANGENTIAL_SIDE2_XIV", "no tangential convex quadrilateral has a side equal to 2",
              _no_quads(k=2, k_role="side", shape="convex", require_tangential=True)),
        Claim("SIDE2_PELL_RELATION",
              "every convex side-2 quadrilateral is (a,2,2d,d;a+1,2d) up to relabeling with (2a+1)^2 - 12d^2 = 1",
              _side2_pell),
        Claim("K3_BOUNDS", "quadrilaterals with a distance 3 exist; none with a distance 1", _k3_bounds),
        Claim("NO_DIAGONAL_2", "no quadrilateral has a diagonal equal to 2 (open)",
              _no_quads(k=2, k_role="diagonal", shape="any"), open_question=True),
        Claim("NO_PENTAGON_K1", "no 5-point set has a distance 1", _no_pointset(5, 1)),
        Claim("NO_PENTAGON_K2", "no 5-point set has a distance 2 (conjecture)", _no_pointset(5, 2), open_question=True),
        Claim("NO_PENTAGON_K3", "no 5-point set has a distance 3 (conjecture)", _no_pointset(5, 3), open_question=True),
        Claim("NO_HEXAGON_K3", "no 6-point set has a distance 3 (conjecture)", _no_pointset(6, 3), open_question=True),
        Claim("NO_HEPTAGON_K3", "no 7-point set has a distance 3 (conjecture)", _no_pointset(7, 3), open_question=True),
    )
}


def _revalidate(w) -> None:
    if isinstance(w, CatalogEntry):
        again = make_entry(w.canonical, w.k_roles[0].k if w.k_roles else None)
        if again != w:
            raise AssertionError(f"witness {w.canonical} does not re-validate")
    elif isinstance(w, PointSetRecord):
        for i, p in enumerate(w.coords):
            for j, q in enumerate(w.coords):
                dx, dy = p[0] - q[0], p[1] - q[1]
                if dx * dx + dy * dy != w.distances[i][j] ** 2:
                    raise AssertionError("point-set witness does not re-validate")


def verify_claim(claim_id: str, dmax: int, threads: int = 1) -> ClaimReport:
    try:
        claim = REGISTRY[claim_id]
    except KeyError:
        raise UnknownClaim(claim_id) from None
    t0 = time.perf_counter()
    cfg, witnesses, exhibits, visited, notes = claim.run(dmax, threads)
    for w in witnesses:
        _revalidate(w)
    if witnesses:
        verdict = Verdict.REFUTED
    elif claim_id == "K3_BOUNDS" and not exhibits:
        verdict = Verdict.NOT_EXHIBITED
    else:
        verdict = Verdict.HOLDS_UP_TO_BOUND
    return ClaimReport(
        claim_id=claim_id,
        config=cfg,
        verdict=verdict,
        witnesses=list(witnesses),
        exhibits=list(exhibits),
        visited=visited,
        elapsed=time.perf_counter() - t0,
        statement=claim.statement,
        notes=notes,
    )

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diogon.model import Kind, QuadDistances
from diogon.search import (
    THREADS_ENV,
    ConfigError,
    SearchConfig,
    SearchLimitExceeded,
    case_v_report,
    collinear_case_v,
    collinear_case_vi,
    collinear_valid,
    default_threads,
    enumerate_ngon_pointsets,
    enumerate_quads,
    naive_enumerate_quads,
    partitions,
    run_quad_search,
)
from oracles import brute_pointsets, divisor_case_v, divisor_case_vi, float_points

TRAP = QuadDistances(2, 3, 2, 4, 4, 4)


def tuples(entries):
    return [e.canonical.as_tuple() for e in entries]


@pytest.mark.parametrize(
    "kw",
    [
        dict(k=0),
        dict(k=3, dmax=2),
        dict(n=8),
        dict(threads=0),
        dict(shape="concave", require_cyclic=True),
        dict(n=5, shape="convex"),
        dict(n=3, k_role="side"),
    ],
)
def test_config_validation(kw):
    with pytest.raises(ConfigError):
        SearchConfig(**kw).validate()


def test_config_dict_roundtrip():
    cfg = SearchConfig(k=3, k_role="diagonal", dmax=12, shape="convex", require_cyclic=True, threads=4)
    assert SearchConfig.from_dict(cfg.to_dict()) == cfg


def test_default_threads(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "3")
    assert default_threads() == 3
    monkeypatch.delenv(THREADS_ENV)
    assert default_threads() >= 1


def test_partitions_cover_both_roles():
    cfg = SearchConfig(k=2, dmax=5)
    assert len(partitions(cfg)) == 10
    assert {m for m, _ in partitions(cfg)} == {"side", "diagonal"}


def test_side2_trapezoid_found():
    cfg = SearchConfig(k=2, k_role="side", dmax=8, shape="convex")
    entries = enumerate_quads(cfg)
    assert tuples(entries) == [TRAP.as_tuple()]
    assert entries[0].flags.cyclic and entries[0].trapezoid.value == "pair_BC_AD"


@pytest.mark.parametrize(
    "kw",
    [
        dict(k=1),
        dict(k=2),
        dict(k=3),
        dict(k=4, dmax=7),
        dict(k=2, include_degenerate=True),
        dict(k=3, include_degenerate=True),
        dict(k=3, shape="convex"),
        dict(k=3, k_role="diagonal"),
        dict(k=4, k_role="side", dmax=7, require_trapezoid=True),
    ],
)
def test_pruned_equals_naive(kw):
    cfg = SearchConfig(**{"dmax": 8, **kw}).validate()
    assert tuples(enumerate_quads(cfg)) == naive_enumerate_quads(cfg)


def _dihedral_min(m, cycle):
    best = None
    for r in range(4):
        for order in (cycle[r:] + cycle[:r], (cycle[r:] + cycle[:r])[::-1]):
            a, b, c, d = order
            t = (m[a][b], m[b][c], m[c][d], m[d][a], m[a][c], m[b][d])
            best = t if best is None or t < best else best
    return best


def _simple(t):
    pts = float_points(t)

    def crosses(p1, p2, q1, q2):
        def o(a, b, c):
            return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

        return o(p1, p2, q1) * o(p1, p2, q2) < 0 and o(q1, q2, p1) * o(q1, q2, p2) < 0

    a, b, c, d = pts
    return not crosses(a, b, c, d) and not crosses(b, c, d, a)


@pytest.mark.parametrize("k,dmax", [(2, 20), (3, 20), (4, 24), (7, 25), (8, 22)])
def test_quads_cover_every_four_point_set(k, dmax):
    # each planar 4-point set has three cyclic labelings; the simple ones are cataloged
    expected = set()
    for key in brute_pointsets(4, k, dmax):
        m = [key[4 * i:4 * i + 4] for i in range(4)]
        for cycle in ((0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 1, 3)):
            t = _dihedral_min(m, cycle)
            if _simple(t):
                expected.add(t)
    assert set(tuples(enumerate_quads(SearchConfig(k=k, dmax=dmax)))) == expected


def test_role_union_is_any():
    side = set(tuples(enumerate_quads(SearchConfig(k=3, k_role="side", dmax=15))))
    diag = set(tuples(enumerate_quads(SearchConfig(k=3, k_role="diagonal", dmax=15))))
    anyr = set(tuples(enumerate_quads(SearchConfig(k=3, k_role="any", dmax=15))))
    assert side | diag == anyr


@settings(max_examples=10, deadline=None)
@given(st.integers(2, 5), st.integers(6, 14), st.integers(1, 6))
def test_monotone_in_dmax(k, dmax, extra):
    small = tuples(enumerate_quads(SearchConfig(k=k, dmax=dmax)))
    big = [t for t in tuples(enumerate_quads(SearchConfig(k=k, dmax=dmax + extra))) if max(t) <= dmax]
    assert small == big


def test_search_is_deterministic_across_threads():
    base = tuples(enumerate_quads(SearchConfig(k=3, dmax=14)))
    assert tuples(enumerate_quads(SearchConfig(k=3, dmax=14, threads=3))) == base
    assert tuples(enumerate_quads(SearchConfig(k=3, dmax=14))) == base


def test_side_two_census():
    entries = enumerate_quads(SearchConfig(k=2, k_role="side", dmax=60, shape="convex"))
    assert tuples(entries) == [(2, 3, 2, 4, 4, 4), (2, 48, 28, 56, 49, 56)]
    assert all(e.flags.cyclic for e in entries)


def test_k1_is_empty():
    assert enumerate_quads(SearchConfig(k=1, dmax=15)) == []


def test_degenerate_included_only_on_request():
    with_flat = enumerate_quads(SearchConfig(k=1, dmax=4, include_degenerate=True))
    assert with_flat and all(e.cls.kind is Kind.DEGENERATE for e in with_flat)
    assert QuadDistances(1, 1, 1, 3, 2, 2).as_tuple() in tuples(with_flat)


def test_resume_matches_uninterrupted_run():
    cfg = SearchConfig(k=3, dmax=16)
    full = run_quad_search(cfg)
    snaps = {}
    run_quad_search(cfg, on_partition=lambda i, t, v: snaps.__setitem__(i, (list(t), v)))
    tup, vis = snaps[6]
    resumed = run_quad_search(cfg, start_partition=7, seed_tuples=tup, seed_visited=vis)
    assert tuples(resumed.entries) == tuples(full.entries)
    assert resumed.visited == full.visited


def test_visit_limit_reports_partial():
    with pytest.raises(SearchLimitExceeded) as info:
        run_quad_search(SearchConfig(k=3, dmax=20, max_visited=50))
    assert info.value.visited > 50
    assert isinstance(info.value.partial, list)


@pytest.mark.parametrize("n,k,dmax", [(5, 1, 10), (5, 2, 12), (5, 3, 8), (5, 3, 11), (6, 3, 9), (5, 4, 9)])
def test_pointsets_match_brute_force(n, k, dmax):
    got = {tuple(v for row in r.distances for v in row) for r in enumerate_ngon_pointsets(n, k, dmax).records}
    assert got == brute_pointsets(n, k, dmax)


def test_pointset_coordinates_reproduce_distances():
    for rec in enumerate_ngon_pointsets(6, 3, 14).records:
        for (i, p), (j, q) in itertools.combinations(enumerate(rec.coords), 2):
            assert (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2 == rec.distances[i][j] ** 2


def test_pointset_limit_and_progress():
    seen = []
    enumerate_ngon_pointsets(5, 3, 12, on_progress=lambda v, r: seen.append(v), progress_every=100)
    assert seen and all(b - a >= 100 for a, b in zip(seen, seen[1:]))
    with pytest.raises(SearchLimitExceeded) as info:
        enumerate_ngon_pointsets(5, 3, 20, max_visited=10)
    assert info.value.partial.complete is False


def test_case_v_matches_divisor_oracle():
    assert set(collinear_case_v(3, 100)) == divisor_case_v(100)
    assert collinear_case_v(3, 8) == [(5, 40), (6, 16)]
    with pytest.raises(ConfigError):
        collinear_case_v(2, 10)


def test_case_vi_matches_divisor_oracle():
    assert set(collinear_case_vi(3, 100)) == divisor_case_vi(200)


def test_case_v_report_records_discrepancy():
    rep = case_v_report(100)
    assert rep["V"]["agrees"] is False
    assert rep["V"]["printed_not_valid"] == [(5, 16)]
    assert rep["V"]["valid_not_printed"] == [(5, 40), (6, 16)]
    assert "discrepancy" in rep["V"]["note"]
    assert rep["VI"]["printed_not_valid"] == [(3, 2), (5, 5)]
    assert collinear_valid(9, 8, 3, 1) and not collinear_valid(5, 16, 3, 1)


@pytest.mark.parametrize("raw", ["not-a-number", "0"])
def test_bad_threads_env_rejected(monkeypatch, raw):
    monkeypatch.setenv(THREADS_ENV, raw)
    with pytest.raises(ConfigError):
        default_threads()

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diogon.catalog import (
    CSV_FIELDS,
    CatalogFormatError,
    RunManifest,
    digest,
    emit_csv,
    emit_json,
    entry_to_json,
    parse_csv,
    parse_json,
    read_checkpoint,
    write_checkpoint,
)
from diogon.search import SearchConfig, enumerate_ngon_pointsets, enumerate_quads
from diogon.triangles import enumerate_triangles


@pytest.fixture(scope="module")
def run():
    cfg = SearchConfig(k=4, dmax=22)
    entries = enumerate_quads(cfg)
    return cfg, entries, RunManifest(cfg, 123, digest(entries), len(entries))


def test_entry_schema(run):
    _, entries, _ = run
    d = entry_to_json(entries[0])
    assert set(d) == {"distances", "class", "flags", "k_roles", "radicand", "coords"}
    assert set(d["distances"]) == {"ab", "bc", "cd", "da", "ac", "bd"}
    assert set(d["flags"]) == {"cyclic", "tangential", "trapezoid", "parallelogram"}
    assert all(isinstance(x, str) for pt in d["coords"] for x in pt)


def test_json_roundtrip(run):
    _, entries, manifest = run
    m2, items = parse_json(emit_json(manifest, entries))
    assert items == entries
    assert [e.coords for e in items] == [e.coords for e in entries]
    assert m2.to_json() == manifest.to_json()


def test_csv_roundtrip_and_crosscheck(run):
    _, entries, manifest = run
    text = emit_csv(manifest, entries)
    assert text.splitlines()[1] == ",".join(CSV_FIELDS)
    m2, items = parse_csv(text)
    assert items == entries
    _, from_json = parse_json(emit_json(manifest, entries))
    for a, b in zip(items, from_json):
        assert entry_to_json(a) == entry_to_json(b)
    assert m2.digest == manifest.digest


def test_no_floats_written(run):
    _, entries, manifest = run
    doc = json.loads(emit_json(manifest, entries))

    def walk(x):
        if isinstance(x, float):
            raise AssertionError(x)
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        if isinstance(x, list):
            for v in x:
                walk(v)

    walk(doc)


def test_tampering_detected(run):
    _, entries, manifest = run
    doc = json.loads(emit_json(manifest, entries))
    doc["entries"][0]["flags"]["cyclic"] = not doc["entries"][0]["flags"]["cyclic"]
    with pytest.raises(CatalogFormatError):
        parse_json(json.dumps(doc))
    doc = json.loads(emit_json(manifest, entries))
    doc["manifest"]["digest"] = "0" * 64
    with pytest.raises(CatalogFormatError):
        parse_json(json.dumps(doc))
    doc = json.loads(emit_json(manifest, entries))
    doc["entries"][0]["coords"][2][1] = "0/1+1/1*sqrt(2)"
    with pytest.raises(CatalogFormatError):
        parse_json(json.dumps(doc))


def test_pointsets_and_triangles_roundtrip():
    recs = enumerate_ngon_pointsets(5, 3, 20).records
    cfg = SearchConfig(n=5, k=3, dmax=20)
    man = RunManifest(cfg, 0, digest(recs), len(recs))
    assert parse_json(emit_json(man, recs))[1] == recs
    assert parse_csv(emit_csv(man, recs))[1] == recs
    tris = enumerate_triangles(2, 10)
    man = RunManifest(SearchConfig(n=3, k=2, dmax=10), 0, digest(tris), len(tris))
    assert parse_json(emit_json(man, tris))[1] == tris


@settings(max_examples=8, deadline=None)
@given(st.integers(2, 6), st.integers(8, 16))
def test_roundtrip_property(k, dmax):
    entries = enumerate_quads(SearchConfig(k=k, dmax=dmax))
    man = RunManifest(SearchConfig(k=k, dmax=dmax), 0, digest(entries), len(entries))
    assert parse_json(emit_json(man, entries))[1] == entries
    assert parse_csv(emit_csv(man, entries))[1] == entries


def test_digest_is_order_sensitive_and_stable(run):
    _, entries, _ = run
    assert digest(entries) == digest(list(entries))
    assert digest(entries) != digest(entries[::-1])


def test_checkpoint_roundtrip(tmp_path, run):
    cfg, entries, _ = run
    path = tmp_path / "ck.json"
    tuples = [e.canonical.as_tuple() for e in entries]
    write_checkpoint(str(path), cfg, 5, tuples, 999, "2026-01-01T00:00:00+00:00")
    ck = read_checkpoint(str(path), SearchConfig(k=4, dmax=22, threads=8))
    assert ck.last_partition == 5 and ck.tuples == tuples and ck.visited == 999
    with pytest.raises(CatalogFormatError):
        read_checkpoint(str(path), SearchConfig(k=4, dmax=23))
    doc = json.loads(path.read_text())
    doc["tuples"].pop()
    path.write_text(json.dumps(doc))
    with pytest.raises(CatalogFormatError):
        read_checkpoint(str(path))

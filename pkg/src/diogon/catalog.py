"""JSON/CSV catalogs, run manifests and checkpoints.

No floats are ever written: coordinates are exact strings ``p/q`` or
``p/q+r/s*sqrt(n)``.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Optional

from . import __version__
from .exactgeom import format_surd, parse_surd
from .model import CatalogEntry, Kind, KRole, QuadDistances, make_entry
from .search import PointSetRecord, SearchConfig

CLASS_NAMES = {Kind.CONVEX: "convex", Kind.CONCAVE: "concave", Kind.DEGENERATE: "degenerate"}


class CatalogFormatError(ValueError):
    pass


# --------------------------------------------------------------------------
# entries
# --------------------------------------------------------------------------

def entry_to_json(e: CatalogEntry) -> dict:
    q = e.canonical
    return {
        "distances": {"ab": q.ab, "bc": q.bc, "cd": q.cd, "da": q.da, "ac": q.ac, "bd": q.bd},
        "class": CLASS_NAMES[e.cls.kind],
        "flags": {
            "cyclic": e.flags.cyclic,
            "tangential": e.flags.tangential,
            "trapezoid": e.flags.trapezoid,
            "parallelogram": e.flags.parallelogram,
        },
        "k_roles": [{"k": r.k, "role": r.role} for r in e.k_roles],
        "radicand": e.radicand,
        "coords": [[format_surd(x), format_surd(y)] for x, y in e.coords],
    }


def entry_from_json(d: dict) -> CatalogEntry:
    """Rebuild an entry by re-deriving it from its distances; stored fields must agree."""
    try:
        dist = d["distances"]
        q = QuadDistances(*(int(dist[f]) for f in ("ab", "bc", "cd", "da", "ac", "bd")))
        ks = {int(r["k"]) for r in d["k_roles"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise CatalogFormatError(f"malformed entry: {exc}") from exc
    if len(ks) > 1:
        raise CatalogFormatError("entry mixes several k values")
    e = make_entry(q, ks.pop() if ks else None)
    if e.canonical != q:
        raise CatalogFormatError(f"{q} is not in canonical form")
    stored = entry_to_json(e)
    for key in ("class", "flags", "k_roles", "radicand"):
        if d.get(key) != stored[key]:
            raise CatalogFormatError(f"{key} of {q} does not re-validate: {d.get(key)!r} != {stored[key]!r}")
    coords = [[str(parse_surd(x)), str(parse_surd(y))] for x, y in d.get("coords", [])]
    if coords != stored["coords"]:
        raise CatalogFormatError(f"coordinates of {q} do not re-validate")
    return e


def pointset_to_json(r: PointSetRecord) -> dict:
    return {
        "n": r.n,
        "distances": [list(row) for row in r.distances],
        "radicand": r.radicand,
        "coords": [[format_surd(x), format_surd(y)] for x, y in r.coords],
    }


def pointset_from_json(d: dict) -> PointSetRecord:
    coords = tuple((parse_surd(x), parse_surd(y)) for x, y in d["coords"])
    rec = PointSetRecord(int(d["n"]), tuple(tuple(int(v) for v in row) for row in d["distances"]), int(d["radicand"]), coords)
    for i, p in enumerate(coords):
        for j, q in enumerate(coords):
            dx, dy = p[0] - q[0], p[1] - q[1]
            if dx * dx + dy * dy != rec.distances[i][j] ** 2:
                raise CatalogFormatError(f"point set coordinates disagree with distance ({i},{j})")
    return rec


def triangle_to_json(t: tuple[int, int, int]) -> dict:
    return {"sides": list(t)}


def item_to_json(item) -> dict:
    if isinstance(item, CatalogEntry):
        return entry_to_json(item)
    if isinstance(item, PointSetRecord):
        return pointset_to_json(item)
    return triangle_to_json(item)


def item_from_json(d: dict):
    if "sides" in d:
        return tuple(int(v) for v in d["sides"])
    if "n" in d:
        return pointset_from_json(d)
    return entry_from_json(d)


def digest(items) -> str:
    """Content hash of the canonical JSON encoding of the results."""
    blob = json.dumps([item_to_json(i) for i in items], sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


# --------------------------------------------------------------------------
# manifest + documents
# --------------------------------------------------------------------------

def now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunManifest:
    config: SearchConfig
    visited: int
    digest: str
    count: int
    started: str = field(default_factory=now)
    finished: str = field(default_factory=now)
    complete: bool = True
    version: str = __version__

    def to_json(self) -> dict:
        return {
            "tool": "diogon",
            "version": self.version,
            "config": self.config.to_dict(),
            "started": self.started,
            "finished": self.finished,
            "visited": self.visited,
            "count": self.count,
            "complete": self.complete,
            "digest": self.digest,
        }

    @classmethod
    def from_json(cls, d: dict) -> "RunManifest":
        return cls(
            config=SearchConfig.from_dict(d["config"]),
            visited=int(d["visited"]),
            digest=d["digest"],
            count=int(d["count"]),
            started=d["started"],
            finished=d["finished"],
            complete=bool(d.get("complete", True)),
            version=d["version"],
        )


def emit_json(manifest: RunManifest, items) -> str:
    doc = {"manifest": manifest.to_json(), "entries": [item_to_json(i) for i in items]}
    return json.dumps(doc, indent=2) + "\n"


def parse_json(text: str) -> tuple[RunManifest, list]:
    doc = json.loads(text)
    if set(doc) != {"manifest", "entries"}:
        raise CatalogFormatError("catalog must have exactly 'manifest' and 'entries'")
    items = [item_from_json(d) for d in doc["entries"]]
    manifest = RunManifest.from_json(doc["manifest"])
    if digest(items) != manifest.digest:
        raise CatalogFormatError("digest mismatch")
    return manifest, items


CSV_FIELDS = (
    "ab", "bc", "cd", "da", "ac", "bd", "class", "cyclic", "tangential",
    "trapezoid", "parallelogram", "k_roles", "radicand", "coords",
)


def _csv_row(e: CatalogEntry) -> dict:
    j = entry_to_json(e)
    row = dict(j["distances"])
    row["class"] = j["class"]
    row.update({k: str(v).lower() for k, v in j["flags"].items()})
    row["k_roles"] = "|".join(f"{r['k']}:{r['role']}" for r in j["k_roles"])
    row["radicand"] = j["radicand"]
    row["coords"] = ";".join(f"{x} {y}" for x, y in j["coords"])
    return row


def _json_from_csv_row(row: dict) -> dict:
    roles = []
    for part in filter(None, row["k_roles"].split("|")):
        k, role = part.split(":")
        roles.append({"k": int(k), "role": role})
    return {
        "distances": {f: int(row[f]) for f in ("ab", "bc", "cd", "da", "ac", "bd")},
        "class": row["class"],
        "flags": {f: row[f] == "true" for f in ("cyclic", "tangential", "trapezoid", "parallelogram")},
        "k_roles": roles,
        "radicand": int(row["radicand"]),
        "coords": [c.split(" ") for c in filter(None, row["coords"].split(";"))],
    }


def emit_csv(manifest: RunManifest, items) -> str:
    buf = io.StringIO()
    buf.write("# manifest " + json.dumps(manifest.to_json(), sort_keys=True) + "\n")
    quads = all(isinstance(i, CatalogEntry) for i in items)
    if quads:
        w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        for e in items:
            w.writerow(_csv_row(e))
    else:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["record"])
        for i in items:
            w.writerow([json.dumps(item_to_json(i), sort_keys=True)])
    return buf.getvalue()


def parse_csv(text: str) -> tuple[RunManifest, list]:
    first, _, rest = text.partition("\n")
    if not first.startswith("# manifest "):
        raise CatalogFormatError("CSV catalog must start with a manifest line")
    manifest = RunManifest.from_json(json.loads(first[len("# manifest "):]))
    reader = csv.DictReader(io.StringIO(rest))
    if reader.fieldnames and list(reader.fieldnames) == ["record"]:
        items = [item_from_json(json.loads(r["record"])) for r in reader]
    else:
        items = [entry_from_json(_json_from_csv_row(r)) for r in reader]
    if digest(items) != manifest.digest:
        raise CatalogFormatError("digest mismatch")
    return manifest, items


# --------------------------------------------------------------------------
# checkpoints
# --------------------------------------------------------------------------

def _tuples_digest(tuples) -> str:
    blob = json.dumps([list(t) for t in tuples], separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def write_checkpoint(path: str, cfg: SearchConfig, last_partition: int, tuples, visited: int, started: str) -> None:
    doc = {
        "manifest": {
            "tool": "diogon",
            "version": __version__,
            "config": cfg.to_dict(),
            "started": started,
            "visited": visited,
        },
        "last_partition": last_partition,
        "tuples": [list(t) for t in tuples],
        "prefix_digest": _tuples_digest(tuples),
    }
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".ckpt-")
    with os.fdopen(fd, "w") as fh:
        json.dump(doc, fh)
    os.replace(tmp, path)


@dataclass
class Checkpoint:
    config: SearchConfig
    last_partition: int
    tuples: list
    visited: int
    started: str


def read_checkpoint(path: str, cfg: Optional[SearchConfig] = None) -> Checkpoint:
    """Load a checkpoint, re-verifying the digest of the completed prefix."""
    with open(path) as fh:
        doc = json.load(fh)
    tuples = [tuple(t) for t in doc["tuples"]]
    if _tuples_digest(tuples) != doc["prefix_digest"]:
        raise CatalogFormatError("checkpoint prefix digest does not match its contents")
    if doc["manifest"]["version"] != __version__:
        raise CatalogFormatError("checkpoint written by a different version")
    saved = SearchConfig.from_dict(doc["manifest"]["config"])
    if cfg is not None:
        a, b = saved.to_dict(), cfg.to_dict()
        a.pop("threads"), b.pop("threads")
        if a != b:
            raise CatalogFormatError("checkpoint was written for a different search configuration")
    return Checkpoint(saved, int(doc["last_partition"]), tuples, int(doc["manifest"]["visited"]), doc["manifest"]["started"])

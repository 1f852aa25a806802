"""Command-line interface.

Exit codes: 0 success (or claim holds), 1 claim refuted/unexpected, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from .catalog import (
    CatalogFormatError,
    RunManifest,
    digest,
    emit_csv,
    emit_json,
    entry_to_json,
    item_to_json,
    now,
    read_checkpoint,
    write_checkpoint,
)
from .claims import REGISTRY, ClaimReport, UnknownClaim, verify_claim
from .exactgeom import DomainError, format_surd
from .model import Kind, QuadDistances, classify_embedded, ptolemy_gap, trapezoid_of
from .pell import pell_stream, pell_to_quad
from .search import (
    ConfigError,
    SearchConfig,
    SearchLimitExceeded,
    case_v_report,
    default_threads,
    enumerate_ngon_pointsets,
    run_quad_search,
)
from .triangles import enumerate_triangles

EXIT_OK, EXIT_REFUTED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# search
# --------------------------------------------------------------------------

def cmd_search(args) -> int:
    cfg = SearchConfig(
        n=args.n, k=args.k, k_role=args.role, dmax=args.dmax, shape=args.shape,
        require_cyclic=args.cyclic, require_tangential=args.tangential,
        require_trapezoid=args.trapezoid, threads=args.threads,
        include_degenerate=args.degenerate, max_visited=args.max_visited,
    ).validate()
    started = now()
    complete = True
    if cfg.n == 4:
        start, seed, seed_visited = 0, [], 0
        if args.resume:
            ck = read_checkpoint(args.resume, cfg)
            start, seed, seed_visited, started = ck.last_partition + 1, ck.tuples, ck.visited, ck.started
        hook = None
        if args.checkpoint:
            every = args.checkpoint_every or 1

            def hook(index, tuples, visited):
                if (index + 1) % every == 0:
                    write_checkpoint(args.checkpoint, cfg, index, tuples, visited, started)

        try:
            outcome = run_quad_search(cfg, start_partition=start, seed_tuples=seed,
                                      seed_visited=seed_visited, on_partition=hook)
            items, visited = outcome.entries, outcome.visited
        except SearchLimitExceeded as exc:
            items, visited, complete = exc.partial, exc.visited, False
    elif cfg.n == 3:
        items = enumerate_triangles(cfg.k, cfg.dmax)
        visited = len(items)
    else:
        progress = None
        if args.checkpoint:
            def progress(visited, records):
                partial = RunManifest(cfg, visited, digest(records), len(records), started=started, complete=False)
                _write(emit_json(partial, records), args.checkpoint)

        try:
            res = enumerate_ngon_pointsets(cfg.n, cfg.k, cfg.dmax, cfg.max_visited,
                                           on_progress=progress, progress_every=args.checkpoint_every or 100_000)
            items, visited = res.records, res.visited
        except SearchLimitExceeded as exc:
            items, visited, complete = exc.partial.records, exc.visited, False
    manifest = RunManifest(cfg, visited, digest(items), len(items), started=started, complete=complete)
    text = emit_json(manifest, items) if args.format == "json" else emit_csv(manifest, items)
    _write(text, args.out)
    if not complete:
        print(f"warning: search stopped at the visit limit; partial result with {len(items)} entries",
              file=sys.stderr)
    return EXIT_OK


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------

def report_to_json(r: ClaimReport) -> dict:
    return {
        "claim_id": r.claim_id,
        "statement": r.statement,
        "config": r.config.to_dict(),
        "verdict": r.verdict.value,
        "expected": r.expected.value,
        "witnesses": [item_to_json(w) for w in r.witnesses],
        "exhibits": [item_to_json(w) for w in r.exhibits],
        "visited": r.visited,
        "elapsed": round(r.elapsed, 3),
        "notes": r.notes,
    }


def _describe(item) -> str:
    if hasattr(item, "canonical"):
        return f"{item.canonical} {entry_to_json(item)['class']} flags={entry_to_json(item)['flags']}"
    return json.dumps(item_to_json(item))


def cmd_verify(args) -> int:
    try:
        report = verify_claim(args.claim, args.dmax, args.threads)
    except UnknownClaim:
        print(f"unknown claim {args.claim!r}; known: {', '.join(REGISTRY)}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "json":
        print(json.dumps(report_to_json(report), indent=2))
    else:
        print(f"{report.claim_id}: {report.verdict.value} (dmax={args.dmax}, visited={report.visited}, "
              f"{report.elapsed:.2f}s)")
        print(f"  {report.statement}")
        for w in report.witnesses:
            print(f"  witness: {_describe(w)}")
        for e in report.exhibits:
            print(f"  exhibit: {_describe(e)}")
        for n in report.notes:
            print(f"  note: {n}")
    return EXIT_OK if report.as_expected else EXIT_REFUTED


# --------------------------------------------------------------------------
# pell / classify / case-v
# --------------------------------------------------------------------------

def cmd_pell(args) -> int:
    sols = pell_stream(args.d, args.count)
    for s in sols:
        if args.quad:
            b, c = pell_to_quad(s)
            print(b, c)
        else:
            print(s.x, s.y)
    return EXIT_OK


def _parse_six(text: str) -> QuadDistances:
    parts = text.split(",")
    if len(parts) != 6:
        raise UsageError(f"expected six comma-separated integers ab,bc,cd,da,ac,bd, got {text!r}")
    try:
        return QuadDistances(*(int(p) for p in parts))
    except (ValueError, DomainError) as exc:
        raise UsageError(str(exc)) from None


def cmd_classify(args) -> int:
    q = _parse_six(args.distances)
    cls, emb = classify_embedded(q)
    if cls.kind is Kind.CONVEX:
        cyclic = ptolemy_gap(q) == 0
        tangential = q.ab + q.cd == q.bc + q.da
    else:
        cyclic = tangential = False
    parts = [str(cls)]
    if cls.kind in (Kind.CONVEX, Kind.CONCAVE):
        trap = trapezoid_of(emb)
        parts += [f"cyclic={str(cyclic).lower()}", f"tangential={str(tangential).lower()}",
                  f"trapezoid={trap.value}"]
    print("; ".join(parts))
    if emb is not None:
        print(f"radicand={emb.radicand}")
        for name, (x, y) in zip("ABCD", emb.points):
            print(f"{name} = ({format_surd(x)}, {format_surd(y)})")
    return EXIT_OK


def cmd_case_v(args) -> int:
    rep = case_v_report(args.amax)
    if args.format == "json":
        print(json.dumps(rep, indent=2))
        return EXIT_OK
    for case, r in rep.items():
        print(f"case {case}: computed {r['computed']}; printed {r['printed']}; "
              f"{'agrees' if r['agrees'] else 'DISAGREES'}")
        print(f"  {r['note']}")
        if not r["agrees"]:
            print(f"  printed pairs failing exact validation: {r['printed_not_valid']}")
            print(f"  valid pairs missing from the printed list: {r['valid_not_printed']}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="diogon", description="Integer-distance polygons: search, classify, verify.")
    p.add_argument("--version", action="version", version=f"diogon {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("search", help="enumerate configurations with a distance equal to k")
    s.add_argument("--n", type=int, choices=(3, 4, 5, 6, 7), default=4)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--role", choices=("side", "diagonal", "any"), default="any")
    s.add_argument("--dmax", type=_positive, required=True)
    s.add_argument("--shape", choices=("convex", "concave", "any"), default="any")
    s.add_argument("--cyclic", action="store_true")
    s.add_argument("--tangential", action="store_true")
    s.add_argument("--trapezoid", action="store_true")
    s.add_argument("--degenerate", action="store_true", help="also catalog collinear configurations")
    s.add_argument("--threads", type=_positive, default=None)
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--out")
    s.add_argument("--max-visited", type=_positive, default=None)
    s.add_argument("--checkpoint", help="write progress to this file")
    s.add_argument("--checkpoint-every", type=_positive, default=None,
                   help="partitions (n=4) or visited configurations (n>=5) between checkpoints")
    s.add_argument("--resume", help="continue from a checkpoint file")
    s.set_defaults(func=cmd_search)

    v = sub.add_parser("verify", help="check a registered claim up to a bound")
    v.add_argument("--claim", required=True)
    v.add_argument("--dmax", type=_positive, required=True)
    v.add_argument("--threads", type=_positive, default=None)
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.set_defaults(func=cmd_verify)

    pe = sub.add_parser("pell", help="solutions of x^2 - d*y^2 = 1")
    pe.add_argument("--d", type=int, required=True)
    pe.add_argument("--count", type=_positive, required=True)
    pe.add_argument("--quad", action="store_true", help="print b c with x = 2b+1, y = c (d = 12)")
    pe.set_defaults(func=cmd_pell)

    c = sub.add_parser("classify", help="classify a labeled six-distance record")
    c.add_argument("distances", help="ab,bc,cd,da,ac,bd")
    c.set_defaults(func=cmd_classify)

    cv = sub.add_parser("case-v", help="collinear k=3 configurations vs the printed pairs")
    cv.add_argument("--amax", type=_positive, default=100)
    cv.add_argument("--format", choices=("text", "json"), default="text")
    cv.set_defaults(func=cmd_case_v)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "threads", 0) is None:
            args.threads = default_threads()
        return args.func(args)
    except UsageError as exc:
        print(f"diogon: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, DomainError, CatalogFormatError) as exc:
        print(f"diogon: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

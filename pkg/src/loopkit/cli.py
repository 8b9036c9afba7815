"""Command-line surface: ``loopkit check|autotopisms|verify|enumerate|sweep``.

Exit status: 0 when everything selected holds, 1 when something fails,
2 on input errors.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import autotopisms as at
from . import harness
from .core import as_loop
from .enumerate import (
    MAX_EXHAUSTIVE,
    canonical_key,
    enumerate_loops,
    enumerate_special,
    search_s2bl_not_bol,
)
from .errors import LoopkitError, OrderTooLarge
from .identities import ALL_TAGS, PropertyId, check
from .subloops import SpecialLoop, make_special
from .tablefile import Report, parse_table_file, serialize_table

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
SWEEP_TAGS = ("R1", "T1_4", "T1_5", "T1_6", "C1_7", "L1_8", "L1_10", "T1_11",
              "T1_12", "T1_13", "C1_14", "C1_15", "T1_16", "T1_17")


def _trivial_special(L) -> SpecialLoop:
    # the order-1 loop has no subloop with two elements; only autotopisms accepts it
    mask = np.ones(1, dtype=bool)
    mask.setflags(write=False)
    return SpecialLoop(L, (L.identity,), mask)


def load_special(path: str, subloop: Optional[Sequence[int]] = None,
                 allow_trivial: bool = False) -> SpecialLoop:
    """Read a TableFile; ``subloop`` overrides the file's subloop line; default H = G.

    ``allow_trivial`` admits the order-1 loop with ``H = G = {e}``.
    """
    text = Path(path).read_text() if path != "-" else sys.stdin.read()
    table, subset = parse_table_file(text)
    L = as_loop(table)
    if subloop is not None:
        subset = tuple(subloop)
    if subset is None:
        if L.order == 1 and allow_trivial:
            return _trivial_special(L)
        subset = tuple(range(L.order))
    return make_special(L, subset)


def _header(rep: Report, GH: SpecialLoop) -> None:
    rep.add("order", GH.order)
    if GH.order <= MAX_EXHAUSTIVE:
        rep.add("canonical_key", canonical_key(GH.loop).hex())
    rep.add("subloop", GH.subset)


def _timed(rep: Report, t0: float) -> Report:
    rep.time_ms = int(1000 * (time.perf_counter() - t0))
    return rep


# ---------------------------------------------------------------- commands

def cmd_check(GH: SpecialLoop, properties: Sequence[str] = ()) -> tuple[Report, int]:
    t0 = time.perf_counter()
    props = [PropertyId.parse(p) for p in properties] or [PropertyId(t) for t in ALL_TAGS]
    rep = Report()
    _header(rep, GH)
    ok = True
    for p in props:
        r = check(GH, p)
        rep.add(f"property.{p}", r.holds)
        if not r.holds:
            ok = False
            rep.add(f"witness.{p}", r.witness)
            if r.clause:
                rep.add(f"clause.{p}", r.clause)
    return _timed(rep, t0), EXIT_OK if ok else EXIT_FAIL


def cmd_autotopisms(GH: SpecialLoop, kinds: Sequence[str] = at.KINDS,
                    listing: bool = False) -> tuple[Report, int]:
    t0 = time.perf_counter()
    rep = Report()
    _header(rep, GH)
    ok = True
    for kind in kinds:
        arr = at.enumerate_triple_array(GH, kind)
        g = at.group_axioms(arr)
        rep.add(f"count.{kind}", len(arr))
        rep.add(f"group.{kind}", g.is_group)
        ok &= g.is_group
        if listing:
            for i, t in enumerate(arr):
                rep.add(f"triple.{kind}.{i}", " | ".join(" ".join(map(str, p)) for p in t))
    return _timed(rep, t0), EXIT_OK if ok else EXIT_FAIL


def cmd_verify(GH: SpecialLoop, theorems: Sequence[str] = (),
               bounds: int = harness.DEFAULT_BOUNDS) -> tuple[Report, int]:
    t0 = time.perf_counter()
    tags = list(theorems) or list(harness.THEOREMS)
    rep = Report()
    _header(rep, GH)
    ctx = harness.Context(GH, bounds)
    failed = False
    for tag in tags:
        v = harness.verify(GH, tag, bounds, ctx)
        if not v.applicable:
            rep.add(f"theorem.{tag}", "not applicable")
        elif tag in harness.QUESTIONS:
            if tag == "Q1":
                rep.add(f"theorem.{tag}", "finding " + ("groups" if v.conclusion_holds else "not-groups"))
            else:
                rep.add(f"theorem.{tag}", f"finding s2bl_not_bol={int(v.stats['s2bl_not_bol'])}")
        else:
            rep.add(f"theorem.{tag}", "holds" if v.conclusion_holds else "fails")
            if v.failed:
                failed = True
                rep.add(f"witness.{tag}", v.counterexample)
    return _timed(rep, t0), EXIT_FAIL if failed else EXIT_OK


def _flags_line(flags: dict) -> str:
    return "flags: " + " ".join(f"{k}={int(v)}" for k, v in flags.items())


def cmd_enumerate(order: int, filt: str = "all", out: Optional[str] = None,
                  samples: int = 200, seed: int = 0) -> tuple[Report, int]:
    t0 = time.perf_counter()
    rep = Report()
    rep.add("order", order)
    rep.add("filter", filt)
    outdir = Path(out) if out else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)
    count = 0
    if filt == "all":
        if order > MAX_EXHAUSTIVE:
            raise OrderTooLarge(order, MAX_EXHAUSTIVE)
        for L in enumerate_loops(order):
            count += 1
            if outdir:
                (outdir / f"loop_{count:06d}.txt").write_text(serialize_table(L))
        rep.add("count.loops", count)
    else:
        res = search_s2bl_not_bol(order, samples=samples, seed=seed, min_order=order)
        stats = res.per_order[order]
        for f in res.findings:
            count += 1
            if outdir:
                text = serialize_table(f.loop, f.subloop, comments=[_flags_line(f.flags)])
                (outdir / f"finding_{count:06d}.txt").write_text(text)
        rep.add("exhaustive", stats["exhaustive"])
        rep.add("count.loops", stats["loops"])
        rep.add("count.hits", stats["hits"])
        rep.add("count.findings", count)
    return _timed(rep, t0), EXIT_OK


def cmd_sweep(max_order: int, tags: Sequence[str] = SWEEP_TAGS,
              bounds: int = harness.DEFAULT_BOUNDS, min_order: int = 2) -> tuple[Report, int]:
    if max_order > 6:
        raise OrderTooLarge(max_order, 6)

    def stream():
        for n in range(min_order, max_order + 1):
            yield from enumerate_special(n)

    res = harness.sweep(stream(), tags, bounds)
    rep = Report()
    rep.add("orders", f"{min_order}..{max_order}")
    rep.extend(res.lines())
    return rep, EXIT_FAIL if res.failures else EXIT_OK


# ---------------------------------------------------------------- argparse

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="loopkit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def with_file(p):
        p.add_argument("file", help="table file ('-' for stdin)")
        p.add_argument("--subloop", type=int, nargs="+", metavar="I",
                       help="elements of H (overrides the file; default H = G)")
        return p

    p = with_file(sub.add_parser("check", help="decide identities on G_H"))
    p.add_argument("--property", action="append", default=[],
                   help="property tag, e.g. S2_BOL or S_RPAP(-4); repeatable")
    p = with_file(sub.add_parser("autotopisms", help="enumerate autotopism triples"))
    p.add_argument("--kind", action="append", choices=at.KINDS, default=[])
    p.add_argument("--list", action="store_true", help="print every triple")
    p = with_file(sub.add_parser("verify", help="verify theorem tags"))
    p.add_argument("--theorem", action="append", default=[], choices=harness.THEOREMS)
    p.add_argument("--bounds", type=int, default=harness.DEFAULT_BOUNDS)
    p = sub.add_parser("enumerate", help="enumerate loops or search findings")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--filter", choices=("all", "s2bl-not-bol"), default="all")
    p.add_argument("--out", help="directory receiving one table file per item")
    p.add_argument("--samples", type=int, default=200, help="samples per order past 7")
    p.add_argument("--seed", type=int, default=0)
    p = sub.add_parser("sweep", help="verify theorems over the whole corpus")
    p.add_argument("--max-order", type=int, default=5)
    p.add_argument("--min-order", type=int, default=2)
    p.add_argument("--theorem", action="append", default=[], choices=harness.THEOREMS)
    p.add_argument("--bounds", type=int, default=harness.DEFAULT_BOUNDS)
    return ap


def run(argv: Optional[Sequence[str]] = None) -> tuple[Optional[Report], int, str]:
    """Parse and execute; returns ``(report, exit status, error message)``."""
    args = build_parser().parse_args(argv)
    try:
        if args.command == "enumerate":
            rep, code = cmd_enumerate(args.order, args.filter, args.out, args.samples, args.seed)
        elif args.command == "sweep":
            rep, code = cmd_sweep(args.max_order, args.theorem or SWEEP_TAGS,
                                  args.bounds, args.min_order)
        else:
            GH = load_special(args.file, args.subloop, args.command == "autotopisms")
            if args.command == "check":
                rep, code = cmd_check(GH, args.property)
            elif args.command == "autotopisms":
                rep, code = cmd_autotopisms(GH, args.kind or at.KINDS, args.list)
            else:
                rep, code = cmd_verify(GH, args.theorem, args.bounds)
    except (LoopkitError, OSError) as exc:
        return None, EXIT_INPUT, f"error: {exc}"
    return rep, code, ""


def main(argv: Optional[Sequence[str]] = None) -> int:
    rep, code, err = run(argv)
    if rep is not None:
        sys.stdout.write(rep.render())
    if err:
        print(err, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

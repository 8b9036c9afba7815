"""Finite loops, special loops ``(G_H, .)`` and second Smarandache Bol loops.

Set ``LOOPKIT_DISABLE_NUMBA=1`` to run every kernel through its numpy path.
"""
from .autotopisms import (
    AutotopismTriple,
    bol_triple,
    enumerate_triples,
    group_axioms,
    triple_holds,
)
from .core import (
    CayleyTable,
    Loop,
    Permutation,
    as_loop,
    build_table,
    cyclic_group,
    direct_product,
    left_translation,
    loop_from_rows,
    power,
    right_translation,
)
from .enumerate import canonical_key, enumerate_loops, enumerate_special, search_s2bl_not_bol
from .errors import LoopkitError
from .harness import Verdict, sweep, verify
from .identities import CheckResult, PropertyId, check
from .subloops import SpecialLoop, all_subloops, generated_subloop, make_special, whole
from .tablefile import Report, parse_table_file, serialize_table

__version__ = "0.1.0"

__all__ = [
    "AutotopismTriple", "CayleyTable", "CheckResult", "Loop", "LoopkitError",
    "Permutation", "PropertyId", "Report", "SpecialLoop", "Verdict",
    "all_subloops", "as_loop", "bol_triple", "build_table", "canonical_key",
    "check", "cyclic_group", "direct_product", "enumerate_loops",
    "enumerate_special", "enumerate_triples", "generated_subloop",
    "group_axioms", "left_translation", "loop_from_rows", "make_special",
    "parse_table_file", "power", "right_translation", "search_s2bl_not_bol",
    "serialize_table", "sweep", "triple_holds", "verify", "whole",
]

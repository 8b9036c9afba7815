"""Normalized loop enumeration, isomorph rejection and the S2-Bol search."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from . import kernels
from .core import Loop, as_loop, build_table
from .errors import OrderTooLarge
from .identities import check
from .subloops import SpecialLoop, all_subloops, make_special

MAX_EXHAUSTIVE = 7
FLAG_TAGS = ("S2_BOL", "BOL", "S2_RIP", "S2_RAP", "S3_RIP", "EXPONENT2", "NUCLEAR_SQUARE")


def _check_order(order: int, limit: int = MAX_EXHAUSTIVE):
    if order > limit:
        raise OrderTooLarge(order, limit)
    if order < 1:
        raise ValueError("order must be >= 1")


def enumerate_tables(order: int, batch: int = 1 << 14) -> Iterator[np.ndarray]:
    """Batches of flat normalized Latin squares, lexicographic order."""
    _check_order(order)
    cur = kernels.LatinCursor(order)
    while not cur.done:
        chunk = cur.next_batch(batch)
        if len(chunk):
            yield chunk


def enumerate_loops(order: int) -> Iterator[Loop]:
    for chunk in enumerate_tables(order):
        for row in chunk:
            yield as_loop(build_table(order, row.tolist()))


@lru_cache(maxsize=8)
def corpus(order: int) -> tuple[Loop, ...]:
    """Cached tuple of every normalized loop of ``order`` (use for order <= 6)."""
    return tuple(enumerate_loops(order))


def enumerate_special(order: int, min_h: int = 2) -> Iterator[SpecialLoop]:
    """Every ``(G, H)`` with G normalized of ``order`` and ``|H| >= min_h`` (H = G included)."""
    min_h = max(min_h, 2)
    for L in corpus(order) if order <= 6 else enumerate_loops(order):
        for H in all_subloops(L):
            if len(H) >= min_h:
                yield make_special(L, H)


# ---------------------------------------------------------------- isomorph rejection

@lru_cache(maxsize=None)
def _identity_fixing_perms(n: int, e: int) -> np.ndarray:
    P = kernels.all_permutations(n)
    return P[P[:, e] == 0]


def _relabel_all(T: np.ndarray, P: np.ndarray) -> np.ndarray:
    """``out[p, P[p,x], P[p,y]] = P[p, T[x,y]]`` for every relabeling ``p``."""
    inv = np.argsort(P, axis=1)
    rows = np.arange(len(P))[:, None, None]
    return P[rows, T[inv[:, :, None], inv[:, None, :]]]


def canonical_key(L: Loop, subset=None) -> bytes:
    """Minimum flattened table over all relabelings sending the identity to 0.

    With ``subset`` the relabeled indicator vector of H is appended, so
    keys of special loops coincide iff the pairs are isomorphic.
    """
    n = L.order
    _check_order(n)
    P = _identity_fixing_perms(n, L.identity)
    rel = _relabel_all(L.T.astype(np.intp), P).reshape(len(P), n * n)
    if subset is not None:
        ind = np.zeros((len(P), n), dtype=rel.dtype)
        ind[np.arange(len(P))[:, None], P[:, list(subset)]] = 1
        rel = np.concatenate([rel, ind], axis=1)
    best = np.lexsort(rel.T[::-1])[0]
    return rel[best].astype(np.uint8).tobytes()


def relabel(L: Loop, perm) -> Loop:
    """Isomorphic copy ``x -> perm[x]``."""
    P = np.asarray(perm)[None, :]
    T = _relabel_all(L.T.astype(np.intp), P)[0]
    return as_loop(build_table(L.order, T.ravel().tolist()))


# ---------------------------------------------------------------- sampling beyond the exhaustive cap

def sample_loop(order: int, rng: np.random.Generator, max_restarts: int = 1000) -> Loop:
    """One normalized loop from a randomized row-major backtrack (not uniform)."""
    n = order
    for _ in range(max_restarts):
        T = np.zeros((n, n), dtype=np.int64)
        T[0] = np.arange(n)
        T[:, 0] = np.arange(n)
        cells = [(i, j) for i in range(1, n) for j in range(1, n)]
        options: list[list[int]] = [[] for _ in cells]
        k, budget = 0, 50 * n * n
        fresh = True
        while 0 <= k < len(cells) and budget > 0:
            i, j = cells[k]
            if fresh:
                used = set(T[i, :j]) | set(T[:i, j])
                opts = [v for v in range(n) if v not in used]
                rng.shuffle(opts)
                options[k] = opts
            if options[k]:
                T[i, j] = options[k].pop()
                k += 1
                fresh = True
            else:
                k -= 1
                fresh = False
                budget -= 1
        if k == len(cells):
            return as_loop(build_table(n, T.ravel().tolist()))
    raise RuntimeError(f"no Latin square of order {order} found")


# ---------------------------------------------------------------- Question-2 search

@dataclass
class Finding:
    loop: Loop
    subloop: tuple[int, ...]
    flags: dict[str, bool]
    canonical_key: bytes
    exhaustive: bool = True
    order: int = field(init=False)

    def __post_init__(self):
        self.order = self.loop.order


def property_flags(GH: SpecialLoop) -> dict[str, bool]:
    return {tag: check(GH, tag).holds for tag in FLAG_TAGS}


@dataclass
class SearchReport:
    findings: list[Finding]
    per_order: dict[int, dict]  # order -> {"loops", "hits", "classes", "exhaustive"}


def search_s2bl_not_bol(max_order: int, samples: int = 200, seed: int = 0,
                        min_order: int = 1) -> SearchReport:
    """Special loops ``(G, H)``, ``H`` proper, satisfying the second
    Smarandache Bol identity while G is not a Bol loop.

    Orders up to 7 are exhaustive; larger orders draw ``samples`` random
    loops each and are labelled non-exhaustive.  Findings are deduplicated
    by the canonical key of the pair, keeping the first in corpus order.
    """
    findings: list[Finding] = []
    per_order: dict[int, dict] = {}
    for n in range(min_order, max_order + 1):
        seen: set[bytes] = set()
        hits = 0
        loops = 0
        if n <= MAX_EXHAUSTIVE:
            for chunk in enumerate_tables(n, batch=1 << 15):
                loops += len(chunk)
                rows, masks = kernels.s2bl_scan(chunk, n)
                for r, mask in zip(rows, masks):
                    hits += 1
                    L = as_loop(build_table(n, chunk[r].tolist()))
                    H = tuple(v for v in range(n) if (int(mask) >> v) & 1)
                    key = canonical_key(L, H)
                    if key in seen:
                        continue
                    seen.add(key)
                    GH = make_special(L, H)
                    findings.append(Finding(L, H, property_flags(GH), key, True))
            exhaustive = True
        else:
            rng = np.random.default_rng(seed + n)
            for _ in range(samples):
                L = sample_loop(n, rng)
                loops += 1
                if check(make_special(L, range(n)), "BOL").holds:
                    continue
                for H in all_subloops(L):
                    if len(H) < 2 or len(H) == n:
                        continue
                    GH = make_special(L, H)
                    if not check(GH, "S2_BOL").holds:
                        continue
                    hits += 1
                    key = _sample_key(L, H)
                    if key in seen:
                        continue
                    seen.add(key)
                    findings.append(Finding(L, H, property_flags(GH), key, False))
            exhaustive = False
        per_order[n] = {"loops": loops, "hits": hits, "classes": len(seen),
                        "exhaustive": exhaustive}
    return SearchReport(findings, per_order)


def _sample_key(L: Loop, H) -> bytes:
    # (n-1)! relabelings are too many past order 7; dedup sampled hits on the raw pair
    return bytes(L.flat()) + bytes(sorted(H))


def is_isomorphic_brute(A: Loop, B: Loop) -> Optional[tuple[int, ...]]:
    """Identity-preserving isomorphism ``A -> B`` by trying all bijections."""
    if A.order != B.order:
        return None
    n = A.order
    for perm in itertools.permutations(range(n)):
        if perm[A.identity] != B.identity:
            continue
        if all(perm[A.mul(x, y)] == B.mul(perm[x], perm[y])
               for x in range(n) for y in range(n)):
            return perm
    return None

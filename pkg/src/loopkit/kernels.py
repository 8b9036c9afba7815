"""Hot loops: Latin-square backtracking and autotopism candidate search.

Each kernel has a compiled path (numba) and a fallback.  The Latin
backtracker has no useful vectorized form, so its fallback is the same
function run by the interpreter.  The autotopism search falls back to a
numpy formulation that evaluates every candidate at once.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from ._accel import USE_NUMBA, njit

FULL, RIGHT, LEFT, BOTH = 0, 1, 2, 3
KIND_CODES = {"FULL": FULL, "RIGHT": RIGHT, "LEFT": LEFT, "BOTH": BOTH}
UNSET = 255


# ---------------------------------------------------------------- Latin squares

def _latin_fill_py(n, table, cand, row_used, col_used, state, out):
    """Resume a row-major backtrack over the cells ``(i, j)``, ``i, j >= 1``.

    Row 0 and column 0 of ``table`` hold ``0..n-1``.  Completed squares are
    copied into ``out`` until it is full.  ``state[0]`` is the cursor and
    ``state[1]`` is set once the search space is exhausted.  Returns the
    number of squares written.
    """
    cap = out.shape[0]
    cnt = 0
    if state[1] != 0:
        return 0
    m = n - 1
    nfree = m * m
    k = state[0]
    while k >= 0:
        if k == nfree:
            for c in range(n * n):
                out[cnt, c] = table[c]
            cnt += 1
            k -= 1
            if cnt == cap:
                state[0] = k
                if k < 0:
                    state[1] = 1
                return cnt
            continue
        i = k // m + 1
        j = k % m + 1
        v = cand[k]
        if v >= 0:
            row_used[i] ^= 1 << v
            col_used[j] ^= 1 << v
        used = row_used[i] | col_used[j]
        v += 1
        while v < n and (used >> v) & 1:
            v += 1
        if v < n:
            table[i * n + j] = v
            row_used[i] |= 1 << v
            col_used[j] |= 1 << v
            cand[k] = v
            k += 1
        else:
            cand[k] = -1
            k -= 1
    state[0] = -1
    state[1] = 1
    return cnt


_latin_fill_jit = njit(_latin_fill_py)


class LatinCursor:
    """Resumable enumeration state for normalized Latin squares of order ``n``."""

    def __init__(self, n: int):
        self.n = n
        table = np.zeros(n * n, dtype=np.int64)
        table[:n] = np.arange(n)
        table[::n] = np.arange(n)
        self.table = table
        self.cand = np.full(max((n - 1) ** 2, 1), -1, dtype=np.int64)
        self.row_used = np.array([1 << i for i in range(n)], dtype=np.int64)
        self.row_used[0] = (1 << n) - 1
        self.col_used = np.array([1 << j for j in range(n)], dtype=np.int64)
        self.col_used[0] = (1 << n) - 1
        self.state = np.zeros(2, dtype=np.int64)

    @property
    def done(self) -> bool:
        return bool(self.state[1])

    def next_batch(self, size: int = 4096, compiled: bool = USE_NUMBA) -> np.ndarray:
        out = np.empty((size, self.n * self.n), dtype=np.int64)
        fill = _latin_fill_jit if compiled else _latin_fill_py
        got = fill(self.n, self.table, self.cand, self.row_used, self.col_used,
                   self.state, out)
        return out[:got].astype(np.uint8)


def count_latin(n: int, compiled: bool = USE_NUMBA, batch: int = 1 << 16) -> int:
    cur = LatinCursor(n)
    total = 0
    while not cur.done:
        total += len(cur.next_batch(batch, compiled))
    return total


# ---------------------------------------------------------------- permutations

@lru_cache(maxsize=None)
def all_permutations(n: int) -> np.ndarray:
    """All ``n!`` permutations of ``0..n-1`` in lexicographic order."""
    arr = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    arr = arr.reshape(-1, n)
    arr.setflags(write=False)
    return arr


# ---------------------------------------------------------------- autotopisms

def _autotopism_core_py(T, ldiv, rdiv, perms, hmask, hlist, e, kind):
    """Candidate triples ``(U, V, W)`` with ``W`` derived, never enumerated.

    FULL/BOTH/RIGHT walk ``U`` over ``perms`` and the value ``b = eV`` over
    ``H``; then ``W = U R_b`` and ``V`` is read off from ``x = e``.  LEFT
    walks ``V`` and ``a = eU`` instead.  For RIGHT (LEFT) only ``V|H``
    (``U|H``) is pinned by the defining equation; other positions are left
    as ``UNSET`` for the caller to extend.
    """
    m, n = perms.shape
    h = hlist.shape[0]
    out = np.empty((m * h, 3, n), dtype=np.int64)
    cnt = 0
    W = np.empty(n, dtype=np.int64)
    X = np.empty(n, dtype=np.int64)
    for i in range(m):
        P = perms[i]
        if kind == FULL or kind == BOTH:
            ok = True
            for t in range(h):
                if not hmask[P[hlist[t]]]:
                    ok = False
                    break
            if not ok:
                continue
        for t in range(h):
            c = hlist[t]
            ok = True
            if kind == LEFT:
                # P = V, c = a = eU; W = V L_a; sU = (sW)/(eV)
                b = P[e]
                for y in range(n):
                    W[y] = T[c, P[y]]
                for y in range(n):
                    X[y] = UNSET
                for r in range(h):
                    s = hlist[r]
                    X[s] = rdiv[W[s], b]
                    if not hmask[X[s]]:
                        ok = False
                        break
                if not ok:
                    continue
                for r in range(h):
                    s = hlist[r]
                    for y in range(n):
                        if T[X[s], P[y]] != W[T[s, y]]:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    continue
                for y in range(n):
                    out[cnt, 0, y] = X[y]
                    out[cnt, 1, y] = P[y]
                    out[cnt, 2, y] = W[y]
                cnt += 1
                continue
            # P = U, c = b = eV; W = U R_b; V = W L_a^-1
            a = P[e]
            for x in range(n):
                W[x] = T[P[x], c]
            if kind == RIGHT:
                for x in range(n):
                    X[x] = UNSET
                for r in range(h):
                    s = hlist[r]
                    X[s] = ldiv[a, W[s]]
                    if not hmask[X[s]]:
                        ok = False
                        break
                if not ok:
                    continue
            else:
                for x in range(n):
                    X[x] = ldiv[a, W[x]]
                for r in range(h):
                    if not hmask[X[hlist[r]]]:
                        ok = False
                        break
                    if kind == FULL and not hmask[W[hlist[r]]]:
                        ok = False
                        break
                if not ok:
                    continue
            if kind == FULL:
                for x in range(n):
                    for y in range(n):
                        if T[P[x], X[y]] != W[T[x, y]]:
                            ok = False
                            break
                    if not ok:
                        break
            else:
                for x in range(n):
                    for r in range(h):
                        s = hlist[r]
                        if T[P[x], X[s]] != W[T[x, s]]:
                            ok = False
                            break
                    if not ok:
                        break
                if ok and kind == BOTH:
                    for r in range(h):
                        s = hlist[r]
                        for y in range(n):
                            if T[P[s], X[y]] != W[T[s, y]]:
                                ok = False
                                break
                        if not ok:
                            break
            if not ok:
                continue
            for x in range(n):
                out[cnt, 0, x] = P[x]
                out[cnt, 1, x] = X[x]
                out[cnt, 2, x] = W[x]
            cnt += 1
    return out[:cnt]


_autotopism_core_jit = njit(_autotopism_core_py)


def _autotopism_core_numpy(T, ldiv, rdiv, perms, hmask, hlist, e, kind):
    """Vectorized counterpart of :func:`_autotopism_core_py`."""
    n = T.shape[0]
    if kind in (FULL, BOTH):
        perms = perms[hmask[perms[:, hlist]].all(axis=1)]
    m = perms.shape[0]
    rows = np.arange(m)
    found = []
    for c in hlist:
        P = perms
        if kind == LEFT:
            W = T[c, P]
            b = P[:, e]
            X = np.full((m, n), UNSET, dtype=np.int64)
            X[:, hlist] = rdiv[W[:, hlist], b[:, None]]
            ok = hmask[X[:, hlist]].all(axis=1)
            # sU . yV == (sy)W over s in H, y in G
            lhs = T[X[:, hlist][:, :, None], P[:, None, :]]
            rhs = W[rows[:, None, None], T[hlist][None, :, :]]
            ok &= (lhs == rhs).all(axis=(1, 2))
            found.append(np.stack([X[ok], P[ok], W[ok]], axis=1))
            continue
        a = P[:, e]
        W = T[P, c]
        if kind == RIGHT:
            X = np.full((m, n), UNSET, dtype=np.int64)
            X[:, hlist] = ldiv[a[:, None], W[:, hlist]]
            ok = hmask[X[:, hlist]].all(axis=1)
        else:
            X = ldiv[a[:, None], W].astype(np.int64)
            ok = hmask[X[:, hlist]].all(axis=1)
            if kind == FULL:
                ok &= hmask[W[:, hlist]].all(axis=1)
        if kind == FULL:
            lhs = T[P[:, :, None], X[:, None, :]]
            rhs = W[rows[:, None, None], T[None, :, :]]
            ok &= (lhs == rhs).all(axis=(1, 2))
        else:
            lhs = T[P[:, :, None], X[:, hlist][:, None, :]]
            rhs = W[rows[:, None, None], T[:, hlist][None, :, :]]
            ok &= (lhs == rhs).all(axis=(1, 2))
            if kind == BOTH:
                lhs = T[P[:, hlist][:, :, None], X[:, None, :]]
                rhs = W[rows[:, None, None], T[hlist][None, :, :]]
                ok &= (lhs == rhs).all(axis=(1, 2))
        found.append(np.stack([P[ok], X[ok], W[ok]], axis=1))
    if not found:
        return np.empty((0, 3, n), dtype=np.int64)
    return np.concatenate(found).astype(np.int64)


def autotopism_core(T, ldiv, rdiv, hmask, hlist, e, kind, compiled=USE_NUMBA):
    n = T.shape[0]
    perms = all_permutations(n)
    args = (T.astype(np.int64), ldiv.astype(np.int64), rdiv.astype(np.int64),
            perms, hmask.astype(np.bool_), np.asarray(hlist, dtype=np.int64),
            int(e), int(kind))
    if compiled:
        return _autotopism_core_jit(*args)
    return _autotopism_core_numpy(*args)


# ---------------------------------------------------------------- Bol scan

def _is_bol_flat(t, n):
    for x in range(n):
        for y in range(n):
            xy = t[x * n + y]
            for z in range(n):
                lhs = t[t[xy * n + z] * n + y]
                rhs = t[x * n + t[t[y * n + z] * n + y]]
                if lhs != rhs:
                    return False
    return True


def _is_s2bol_flat(t, n, mask):
    for x in range(n):
        for z in range(n):
            for s in range(n):
                if not (mask >> s) & 1:
                    continue
                lhs = t[t[t[x * n + s] * n + z] * n + s]
                rhs = t[x * n + t[t[s * n + z] * n + s]]
                if lhs != rhs:
                    return False
    return True


def _closure_flat(t, n, mask):
    while True:
        new = mask
        for i in range(n):
            if (mask >> i) & 1:
                for j in range(n):
                    if (mask >> j) & 1:
                        new |= 1 << t[i * n + j]
        if new == mask:
            return mask
        mask = new


def _s2bl_scan_py(tables, n, out_rows, out_masks):
    """Tables (identity 0) that fail the Bol identity but satisfy the
    second Smarandache Bol identity for some proper subloop.

    Proper subloops of a loop of order ``n <= 7`` have at most three
    elements, and each is generated by any one non-identity member, so
    single-generator closures list them all.  Returns the hit count;
    hits go to ``out_rows`` (table index) and ``out_masks`` (bitmask of H).
    """
    cnt = 0
    full = (1 << n) - 1
    seen = np.zeros(n, dtype=np.int64)
    for r in range(tables.shape[0]):
        t = tables[r]
        if _is_bol_flat(t, n):
            continue
        nseen = 0
        for a in range(1, n):
            mask = _closure_flat(t, n, 1 | (1 << a))
            if mask == full:
                continue
            dup = False
            for q in range(nseen):
                if seen[q] == mask:
                    dup = True
                    break
            if dup:
                continue
            seen[nseen] = mask
            nseen += 1
            if _is_s2bol_flat(t, n, mask):
                out_rows[cnt] = r
                out_masks[cnt] = mask
                cnt += 1
    return cnt


_is_bol_flat = njit(_is_bol_flat)
_is_s2bol_flat = njit(_is_s2bol_flat)
_closure_flat = njit(_closure_flat)
_s2bl_scan_jit = njit(_s2bl_scan_py)


def _s2bl_scan_numpy(tables, n):
    """Batch Bol test in numpy; subloops of the non-Bol survivors in Python."""
    B = tables.reshape(-1, n, n).astype(np.intp)
    b = np.arange(len(B))[:, None, None, None]
    x = np.arange(n)[None, :, None, None]
    y = np.arange(n)[None, None, :, None]
    z = np.arange(n)[None, None, None, :]
    xy = B[b, x, y]
    lhs = B[b, B[b, xy, z], y]
    rhs = B[b, x, B[b, B[b, y, z], y]]
    bol = (lhs == rhs).reshape(len(B), -1).all(axis=1)
    rows, masks = [], []
    full = (1 << n) - 1
    for r in np.flatnonzero(~bol):
        T = B[r]
        seen = set()
        for a in range(1, n):
            members = {0, a}
            while True:
                new = members | {int(T[i, j]) for i in members for j in members}
                if new == members:
                    break
                members = new
            mask = sum(1 << v for v in members)
            if mask == full or mask in seen:
                continue
            seen.add(mask)
            Hs = np.array(sorted(members))
            xx, zz, ss = np.ix_(np.arange(n), np.arange(n), Hs)
            if (T[T[T[xx, ss], zz], ss] == T[xx, T[T[ss, zz], ss]]).all():
                rows.append(int(r))
                masks.append(mask)
    return np.array(rows, dtype=np.int64), np.array(masks, dtype=np.int64)


def s2bl_scan(tables: np.ndarray, n: int, compiled: bool = USE_NUMBA):
    """Return ``(rows, masks)`` of S2-Bol-but-not-Bol hits in a batch of flat tables."""
    if n > 7:
        raise ValueError("single-generator subloop scan is exact only for n <= 7")
    tables = np.ascontiguousarray(tables, dtype=np.int64)
    if not compiled:
        return _s2bl_scan_numpy(tables, n)
    out_rows = np.empty(len(tables) * n, dtype=np.int64)
    out_masks = np.empty(len(tables) * n, dtype=np.int64)
    got = _s2bl_scan_jit(tables, n, out_rows, out_masks)
    return out_rows[:got], out_masks[:got]

"""Slow, independent reference implementations used only by the tests.

Everything here works on plain nested lists with explicit loops and shares
no code with the package beyond reading ``Loop.flat()``.
"""
from __future__ import annotations

import itertools


def rows_of(L):
    n = L.order
    flat = L.flat()
    return [flat[i * n:(i + 1) * n] for i in range(n)]


class Scalar:
    """Scalar view of a loop: products, inverses, translations."""

    def __init__(self, L):
        self.n = L.order
        self.t = rows_of(L)
        self.e = next(e for e in range(self.n)
                      if self.t[e] == list(range(self.n))
                      and [r[e] for r in self.t] == list(range(self.n)))
        # x^rho: x * x^rho = e ; x^lambda: x^lambda * x = e
        self.rho = [next(y for y in range(self.n) if self.t[x][y] == self.e) for x in range(self.n)]
        self.lam = [next(y for y in range(self.n) if self.t[y][x] == self.e) for x in range(self.n)]

    def m(self, x, y):
        return self.t[x][y]

    def pw(self, s, k):
        base = s if k >= 0 else self.rho[s]
        out = self.e
        for _ in range(abs(k)):
            out = self.m(out, base)
        return out

    def R(self, s):
        return [self.m(x, s) for x in range(self.n)]

    def L(self, s):
        return [self.m(s, x) for x in range(self.n)]


def inv_perm(p):
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return out


def then(a, b):
    """``a`` followed by ``b``."""
    return [b[a[x]] for x in range(len(a))]


# ---------------------------------------------------------------- identities

def _first(gen):
    for inst, bad in gen:
        if bad:
            return inst
    return None


def identity_witness(L, H, tag, max_n=6, negative=False):
    """First violating instance in quantifier order, or None."""
    S = Scalar(L)
    m, rho, lam = S.m, S.rho, S.lam
    G = range(S.n)
    H = sorted(H)
    if tag == "BOL":
        return _first(((x, y, z), m(m(m(x, y), z), y) != m(x, m(m(y, z), y)))
                      for x in G for y in G for z in G)
    if tag == "S2_BOL":
        return _first(((x, z, s), m(m(m(x, s), z), s) != m(x, m(m(s, z), s)))
                      for x in G for z in G for s in H)
    if tag == "RIP":
        return _first(((x, y), m(m(y, x), rho[x]) != y) for x in G for y in G)
    if tag == "LIP":
        return _first(((x, y), m(lam[x], m(x, y)) != y) for x in G for y in G)
    if tag == "S2_RIP":
        return _first(((y, s), m(m(y, s), rho[s]) != y) for y in G for s in H)
    if tag == "S2_LIP":
        return _first(((y, s), m(lam[s], m(s, y)) != y) for y in G for s in H)
    if tag == "S3_RIP":
        return _first(((y, s), m(m(s, y), rho[y]) != s) for y in G for s in H)
    if tag == "RAP":
        return _first(((x, y), m(y, m(x, x)) != m(m(y, x), x)) for x in G for y in G)
    if tag == "LAP":
        return _first(((x, y), m(m(x, x), y) != m(x, m(x, y))) for x in G for y in G)
    if tag == "S2_RAP":
        return _first(((y, s), m(y, m(s, s)) != m(m(y, s), s)) for y in G for s in H)
    if tag == "S2_LAP":
        return _first(((y, s), m(m(s, s), y) != m(s, m(s, y))) for y in G for s in H)
    if tag == "NUCLEAR_SQUARE":
        return _first(((s, x, y), m(y, m(x, m(s, s))) != m(m(y, x), m(s, s)))
                      for s in H for x in G for y in G)
    if tag == "EXPONENT2":
        return _first(((s,), m(s, s) != S.e) for s in H)
    if tag in ("RPAP", "S_RPAP"):
        pivot = G if tag == "RPAP" else H
        exps = range(-max_n, 0) if negative else range(0, max_n + 1)

        def shifted(x, y, k):
            Ry = S.R(y)
            P = list(range(S.n))
            for _ in range(abs(k)):
                P = then(P, Ry if k > 0 else inv_perm(Ry))
            return P[x]

        return _first(((x, y, k), m(x, S.pw(y, k)) != shifted(x, y, k))
                      for x in G for y in pivot for k in exps)
    raise KeyError(tag)


def subloops_by_powerset(L):
    """Every subset containing e closed under products and both inverses."""
    S = Scalar(L)
    out = []
    for r in range(1, S.n + 1):
        for sub in itertools.combinations(range(S.n), r):
            ss = set(sub)
            if S.e not in ss:
                continue
            if all(S.m(a, b) in ss for a in sub for b in sub) and \
                    all(S.rho[a] in ss and S.lam[a] in ss for a in sub):
                out.append(sub)
    return sorted(out, key=lambda s: (len(s), s))


# ---------------------------------------------------------------- autotopisms

def triple_ok(L, H, U, V, W, kind):
    S = Scalar(L)
    Hs = set(H)
    G = range(S.n)

    def sbij(P):
        return {P[h] for h in Hs} == Hs

    if kind == "FULL":
        if not (sbij(U) and sbij(V) and sbij(W)):
            return False
        pairs = ((x, y) for x in G for y in G)
    elif kind == "RIGHT":
        if not sbij(V):
            return False
        pairs = ((x, s) for x in G for s in sorted(Hs))
    else:
        if not sbij(U):
            return False
        pairs = ((s, y) for s in sorted(Hs) for y in G)
    return all(S.m(U[x], V[y]) == W[S.m(x, y)] for x, y in pairs)


def brute_triples(L, H, kind):
    """All triples of the given kind by testing every ``(n!)^3`` candidate."""
    perms = [list(p) for p in itertools.permutations(range(L.order))]
    out = []
    for U in perms:
        for V in perms:
            for W in perms:
                if triple_ok(L, H, U, V, W, kind):
                    out.append((tuple(U), tuple(V), tuple(W)))
    return sorted(out)


# ---------------------------------------------------------------- Latin squares

def is_normalized_loop_table(rows):
    n = len(rows)
    full = list(range(n))
    if rows[0] != full or [r[0] for r in rows] != full:
        return False
    return all(sorted(r) == full for r in rows) and \
        all(sorted(r[j] for r in rows) == full for j in range(n))


def brute_tables(n):
    """Filter every one of the ``n^(n^2)`` tables (use for n <= 3)."""
    out = []
    for vals in itertools.product(range(n), repeat=n * n):
        rows = [list(vals[i * n:(i + 1) * n]) for i in range(n)]
        if is_normalized_loop_table(rows):
            out.append(list(vals))
    return out


def reduced_tables_4():
    """Fix the border of a 4x4 table and filter the 4^9 interiors."""
    out = []
    for inner in itertools.product(range(4), repeat=9):
        rows = [[0, 1, 2, 3]] + [[i] + list(inner[3 * (i - 1):3 * i]) for i in range(1, 4)]
        if is_normalized_loop_table(rows):
            out.append([v for r in rows for v in r])
    return sorted(out)


def count_by_row_permutations(n):
    """Second backtracker: choose whole rows among permutations starting with ``i``."""
    candidates = {i: [p for p in itertools.permutations(range(n)) if p[0] == i]
                  for i in range(1, n)}
    count = 0
    used_cols = [{j} for j in range(n)]

    def place(i):
        nonlocal count
        if i == n:
            count += 1
            return
        for p in candidates[i]:
            if any(p[j] in used_cols[j] for j in range(1, n)):
                continue
            for j in range(1, n):
                used_cols[j].add(p[j])
            place(i + 1)
            for j in range(1, n):
                used_cols[j].discard(p[j])

    place(1)
    return count

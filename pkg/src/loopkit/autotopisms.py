"""Autotopism triples of a special loop and the maps built from them.

A triple ``(U, V, W)`` has one of three kinds:

* ``FULL``  -- U, V, W map H onto H and ``xU.yV = (xy)W`` for all x, y in G;
* ``RIGHT`` -- V maps H onto H and ``xU.sV = (xs)W`` for x in G, s in H;
* ``LEFT``  -- U maps H onto H and ``sU.yV = (sy)W`` for s in H, y in G.

``BOTH`` is accepted by the enumerator for the intersection RIGHT and LEFT.
Bulk work uses triple arrays of shape ``(m, 3, n)``; the
:class:`AutotopismTriple` wrapper is for single triples.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .core import (
    Permutation,
    left_inverse_map,
    left_translation,
    right_inverse_map,
    right_translation,
)
from .errors import (
    NotInSubloop,
    NotSBijection,
    OrderMismatch,
    OrderTooLarge,
    PreconditionPropertyMissing,
)
from .identities import CheckResult, check
from .subloops import SpecialLoop

KINDS = ("FULL", "RIGHT", "LEFT")
MAX_ENUM_ORDER = 7


@dataclass(frozen=True)
class AutotopismTriple:
    U: Permutation
    V: Permutation
    W: Permutation
    kind: str = "FULL"

    def __post_init__(self):
        if not (self.U.order == self.V.order == self.W.order):
            raise OrderMismatch("triple components differ in order")

    @property
    def order(self) -> int:
        return self.U.order

    def as_array(self) -> np.ndarray:
        return np.array([self.U.image, self.V.image, self.W.image], dtype=np.int64)

    @classmethod
    def from_array(cls, arr, kind: str = "FULL") -> AutotopismTriple:
        return cls(*(Permutation.from_array(r) for r in arr), kind=kind)

    @classmethod
    def identity(cls, n: int, kind: str = "FULL") -> AutotopismTriple:
        i = Permutation.identity(n)
        return cls(i, i, i, kind)


@dataclass(frozen=True)
class CompanionRecord:
    map: Permutation
    companions: frozenset[int]
    kind: str  # FIRST, RIGHT or LEFT

    @property
    def is_pseudo_automorphism(self) -> bool:
        return bool(self.companions)


def is_s_bijection(GH: SpecialLoop, P: Permutation) -> bool:
    return P.maps_onto(GH.subset)


def _s_bijection_failure(GH: SpecialLoop, P: Permutation) -> Optional[int]:
    for h in GH.subset:
        if not GH.mask[P.image[h]]:
            return h
    return None


def triple_holds(GH: SpecialLoop, t: AutotopismTriple) -> CheckResult:
    """Exhaustive membership test for ``t`` under its kind.

    The witness is the first failing pair, ``(x, y)``, ``(x, s)`` or
    ``(s, y)``; an S-bijection failure reports ``clause = "SBIJ_<slot>"``
    and the element of H sent outside H.
    """
    if t.order != GH.order:
        raise OrderMismatch(f"triple of order {t.order} on a loop of order {GH.order}")
    need = {"FULL": "UVW", "RIGHT": "V", "LEFT": "U"}[t.kind]
    for slot in need:
        h = _s_bijection_failure(GH, getattr(t, slot))
        if h is not None:
            return CheckResult(False, (h,), 0, f"SBIJ_{slot}")
    T = GH.loop.T.astype(np.intp)
    U, V, W = t.U.array, t.V.array, t.W.array
    G = np.arange(GH.order)
    H = GH.H
    A, B = {"FULL": (G, G), "RIGHT": (G, H), "LEFT": (H, G)}[t.kind]
    x, y = np.ix_(A, B)
    bad = T[U[x], V[y]] != W[T[x, y]]
    if bad.any():
        i, j = np.unravel_index(int(np.argmax(bad)), bad.shape)
        return CheckResult(False, (int(A[i]), int(B[j])), int(bad.size), t.kind)
    return CheckResult(True, None, int(bad.size))


def bol_triple(GH: SpecialLoop, s: int) -> AutotopismTriple:
    """``(R_s^-1, L_s R_s, R_s)``; not validated here."""
    if not GH.mask[s]:
        raise NotInSubloop(f"{s} is not in H")
    R = right_translation(GH.loop, s)
    return AutotopismTriple(R.inverse(), left_translation(GH.loop, s) * R, R, "FULL")


def compose_triples(a: AutotopismTriple, b: AutotopismTriple) -> AutotopismTriple:
    """Componentwise product, ``a`` first."""
    if a.order != b.order:
        raise OrderMismatch(f"{a.order} != {b.order}")
    kind = a.kind if a.kind == b.kind else "FULL"
    return AutotopismTriple(a.U * b.U, a.V * b.V, a.W * b.W, kind)


def invert_triple(a: AutotopismTriple) -> AutotopismTriple:
    return AutotopismTriple(a.U.inverse(), a.V.inverse(), a.W.inverse(), a.kind)


# ---------------------------------------------------------------- enumeration

def _extend_free(core: np.ndarray, slot: int, free: np.ndarray) -> np.ndarray:
    """Fill the ``UNSET`` positions ``free`` of component ``slot`` with every bijection of ``free``."""
    if len(free) == 0 or len(core) == 0:
        return core
    fills = free[kernels.all_permutations(len(free))]
    k = len(fills)
    out = np.repeat(core, k, axis=0)
    block = out[:, slot, :]  # view
    block[:, free] = np.tile(fills, (len(core), 1))
    return out


def sort_triples(arr: np.ndarray) -> np.ndarray:
    """Lexicographic order on ``(U.image, V.image)``."""
    if len(arr) == 0:
        return arr
    m, _, n = arr.shape
    keys = arr[:, :2, :].reshape(m, 2 * n)
    return arr[np.lexsort(keys.T[::-1])]


def enumerate_triple_array(GH: SpecialLoop, kind: str = "FULL",
                           compiled: Optional[bool] = None) -> np.ndarray:
    """All triples of ``kind`` as an ``(m, 3, n)`` array, sorted."""
    n = GH.order
    if n > MAX_ENUM_ORDER:
        raise OrderTooLarge(n, MAX_ENUM_ORDER)
    L = GH.loop
    code = kernels.KIND_CODES[kind]
    kw = {} if compiled is None else {"compiled": compiled}
    core = kernels.autotopism_core(L.T, L.ldiv, L.rdiv, GH.mask, GH.H,
                                   L.identity, code, **kw)
    free = np.flatnonzero(~GH.mask)
    if kind == "RIGHT":
        core = _extend_free(core, 1, free)
    elif kind == "LEFT":
        core = _extend_free(core, 0, free)
    return sort_triples(core)


def enumerate_triples(GH: SpecialLoop, kind: str = "FULL") -> list[AutotopismTriple]:
    return [AutotopismTriple.from_array(r, kind)
            for r in enumerate_triple_array(GH, kind)]


# ---------------------------------------------------------------- triple arrays as groups

def triple_keys(arr: np.ndarray) -> np.ndarray:
    """Injective int64 code of each triple (base-``n`` digits; valid for n <= 7)."""
    m, _, n = arr.shape
    flat = arr.reshape(m, 3 * n).astype(np.int64)
    weights = n ** np.arange(3 * n - 1, -1, -1, dtype=np.int64)
    return flat @ weights


def compose_arrays(a: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Each triple of ``a`` followed by the single triple ``g``."""
    return g[np.arange(3)[None, :, None], a]


def invert_arrays(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    m, _, n = a.shape
    idx = np.arange(n)
    rows = np.arange(m)[:, None]
    for c in range(3):
        out[rows, c, a[:, c, :]] = idx
    return out


@dataclass
class GroupReport:
    size: int
    has_identity: bool
    closed: bool
    inverses: bool
    closure_witness: Optional[tuple] = None  # (a, b) with a*b outside the set
    inverse_witness: Optional[np.ndarray] = None
    generators: int = 0

    @property
    def is_group(self) -> bool:
        return self.has_identity and self.closed and self.inverses


def group_axioms(arr: np.ndarray) -> GroupReport:
    """Exact closure/identity/inverse test of a set of triples.

    Closure is certified without testing all pairs: generators are added
    one at a time and the generated subgroup ``K`` is grown by right
    multiplication.  ``K`` never leaves the set unless the set is not
    closed (the escaping product is returned); when every element has
    been absorbed the set equals ``K`` and is therefore a group.
    """
    m = len(arr)
    if m == 0:
        return GroupReport(0, False, True, True)
    n = arr.shape[2]
    keys = triple_keys(arr)
    order = np.argsort(keys)
    skeys = keys[order]

    def members(k):
        pos = np.searchsorted(skeys, k)
        pos = np.minimum(pos, m - 1)
        return skeys[pos] == k

    ident = np.tile(np.arange(n), (3, 1))[None]
    has_identity = bool(members(triple_keys(ident))[0])

    inv = invert_arrays(arr)
    inv_ok = members(triple_keys(inv))
    inverses = bool(inv_ok.all())
    inv_w = None if inverses else arr[int(np.argmin(inv_ok))]

    in_K = np.zeros(m, dtype=bool)
    K = ident.copy()
    kk = triple_keys(K)
    in_K[np.searchsorted(skeys, kk)[members(kk)]] = True
    gens: list[np.ndarray] = []
    for i in range(m):
        j = int(np.searchsorted(skeys, keys[i]))
        if in_K[j]:
            continue
        gens.append(arr[i])
        frontier = K
        while len(frontier):
            fresh = []
            for g in gens:
                prod = compose_arrays(frontier, g)
                pk = triple_keys(prod)
                ok = members(pk)
                if not ok.all():
                    bad = int(np.argmin(ok))
                    return GroupReport(m, has_identity, False, inverses,
                                       (frontier[bad], g), inv_w, len(gens))
                pos = np.searchsorted(skeys, pk)
                new = ~in_K[pos]
                if new.any():
                    pos_new, first = np.unique(pos[new], return_index=True)
                    in_K[pos_new] = True
                    fresh.append(prod[new][first])
            frontier = np.concatenate(fresh) if fresh else frontier[:0]
            if len(frontier):
                K = np.concatenate([K, frontier])
    return GroupReport(m, has_identity, True, inverses, None, inv_w, len(gens))


# ---------------------------------------------------------------- inverse-map transforms

def lemma_1_10_right(GH: SpecialLoop, t: AutotopismTriple) -> AutotopismTriple:
    """``(U, V, W) -> (W, J_rho V J_rho, U)``; needs the second Smarandache RIP."""
    if not check(GH, "S2_RIP").holds:
        raise PreconditionPropertyMissing("S2_RIP")
    J = right_inverse_map(GH.loop)
    return AutotopismTriple(t.W, J * t.V * J, t.U, "RIGHT")


def lemma_1_10_left(GH: SpecialLoop, t: AutotopismTriple) -> AutotopismTriple:
    """``(U, V, W) -> (J_lambda U J_lambda, W, V)``; needs the second Smarandache LIP."""
    if not check(GH, "S2_LIP").holds:
        raise PreconditionPropertyMissing("S2_LIP")
    J = left_inverse_map(GH.loop)
    return AutotopismTriple(J * t.U * J, t.W, t.V, "LEFT")


def lemma_1_10_left_as_stated(GH: SpecialLoop, t: AutotopismTriple) -> AutotopismTriple:
    """``(J_lambda U, W, V)`` -- kept so the one-sided form can be tested against the corpus."""
    J = left_inverse_map(GH.loop)
    return AutotopismTriple(J * t.U, t.W, t.V, "LEFT")


# ---------------------------------------------------------------- semi/pseudo-automorphisms

def _semi_automorphism(GH: SpecialLoop, Tm: Permutation, outer: np.ndarray,
                       outer_first: bool) -> CheckResult:
    if not is_s_bijection(GH, Tm):
        raise NotSBijection(repr(Tm))
    L = GH.loop
    e = L.identity
    if Tm(e) != e:
        return CheckResult(False, (e,), 1, "IDENTITY")
    T = L.T.astype(np.intp)
    P = Tm.array
    G = np.arange(L.order)
    if outer_first:
        s, y = np.ix_(outer, G)
    else:
        y, s = np.ix_(G, outer)
    # (sy.s)T == (sT.yT)sT
    bad = P[T[T[s, y], s]] != T[T[P[s], P[y]], P[s]]
    axes = (outer, G) if outer_first else (G, outer)
    if bad.any():
        i, j = np.unravel_index(int(np.argmax(bad)), bad.shape)
        return CheckResult(False, (int(axes[0][i]), int(axes[1][j])), int(bad.size) + 1,
                           "SEMI")
    return CheckResult(True, None, int(bad.size) + 1)


def is_s1_semi_automorphism(GH: SpecialLoop, Tm: Permutation) -> CheckResult:
    """``eT = e`` and ``(xy.x)T = (xT.yT)xT`` for all x, y; witness ``(x, y)``."""
    return _semi_automorphism(GH, Tm, np.arange(GH.order), True)


def is_s2_semi_automorphism(GH: SpecialLoop, Tm: Permutation) -> CheckResult:
    """``eT = e`` and ``(sy.s)T = (sT.yT)sT`` for y in G, s in H; witness ``(y, s)``."""
    return _semi_automorphism(GH, Tm, GH.H, False)


def saipl_check(GH: SpecialLoop, kind: str = "SECOND") -> CheckResult:
    J = right_inverse_map(GH.loop)
    if kind == "FIRST":
        return is_s1_semi_automorphism(GH, J)
    return is_s2_semi_automorphism(GH, J)


_PAUT_TRIPLE_KIND = {"FIRST": "FULL", "RIGHT": "RIGHT", "LEFT": "LEFT"}


def pseudo_automorphism_companions(GH: SpecialLoop, A: Permutation,
                                   kind: str = "FIRST") -> CompanionRecord:
    """All ``c`` in H with ``(A, A R_c, A R_c)`` a triple of the matching kind."""
    if not is_s_bijection(GH, A):
        raise NotSBijection(repr(A))
    tk = _PAUT_TRIPLE_KIND[kind]
    comps = set()
    for c in GH.subset:
        B = A * right_translation(GH.loop, c)
        if triple_holds(GH, AutotopismTriple(A, B, B, tk)).holds:
            comps.add(c)
    return CompanionRecord(A, frozenset(comps), kind)


def pseudo_automorphism_table(GH: SpecialLoop, kind: str = "FIRST") -> dict[tuple, frozenset]:
    """Every S-bijection with at least one companion, mapped to its companion set.

    Vectorized over all S-bijections; independent of the triple enumerator.
    """
    n = GH.order
    if n > MAX_ENUM_ORDER:
        raise OrderTooLarge(n, MAX_ENUM_ORDER)
    L = GH.loop
    T = L.T.astype(np.intp)
    H, hm = GH.H, GH.mask
    P = kernels.all_permutations(n)
    P = P[hm[P[:, H]].all(axis=1)]
    rows = np.arange(len(P))[:, None, None]
    G = np.arange(n)
    dom = {"FIRST": (G, G), "RIGHT": (G, H), "LEFT": (H, G)}[kind]
    out: dict[tuple, set] = {}
    for c in GH.subset:
        B = T[P, c]  # A R_c
        ok = hm[B[:, H]].all(axis=1)
        X, Y = dom
        lhs = T[P[:, X][:, :, None], B[:, Y][:, None, :]]
        rhs = B[rows, T[np.ix_(X, Y)][None]]
        ok &= (lhs == rhs).all(axis=(1, 2))
        for a in P[ok]:
            out.setdefault(tuple(int(v) for v in a), set()).add(int(c))
    return {k: frozenset(v) for k, v in sorted(out.items())}

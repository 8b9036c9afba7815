"""Machine checks of the structural theorems on special loops and corpora.

Each tag maps to a hypothesis and a conclusion evaluated exhaustively on a
single special loop.  :func:`sweep` folds verdicts over a corpus.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Optional

import numpy as np

from . import autotopisms as at
from .core import left_translation, right_translation
from .errors import OrderTooLarge, UnsupportedProperty
from .identities import CheckResult, PropertyId, check
from .subloops import SpecialLoop, restricted_loop, whole

THEOREMS = ("R1", "T1_4", "T1_5", "T1_6", "C1_7", "L1_8", "L1_9", "L1_10", "T1_11",
            "T1_12", "T1_13", "C1_14", "C1_15", "T1_16", "T1_17", "Q1", "Q2")
ENUMERATION_TAGS = ("L1_8", "L1_9", "L1_10", "T1_13", "T1_16", "T1_17", "Q1")
QUESTIONS = ("Q1", "Q2")
DEFAULT_BOUNDS = 5


@dataclass
class Verdict:
    theorem: str
    applicable: bool
    conclusion_holds: Optional[bool] = None
    counterexample: Optional[dict] = None
    stats: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.applicable and self.conclusion_holds is False


def _na(tag, **stats) -> Verdict:
    return Verdict(tag, False, None, None, stats)


def _done(tag, ok: bool, cex: Optional[dict] = None, **stats) -> Verdict:
    return Verdict(tag, True, ok, None if ok else cex, stats)


def holds_array(GH: SpecialLoop, arr: np.ndarray, kind: str) -> np.ndarray:
    """Vectorized :func:`autotopisms.triple_holds` over an ``(m, 3, n)`` array."""
    if len(arr) == 0:
        return np.zeros(0, dtype=bool)
    T = GH.loop.T.astype(np.intp)
    H, hm = GH.H, GH.mask
    G = np.arange(GH.order)
    U, V, W = arr[:, 0], arr[:, 1], arr[:, 2]
    ok = np.ones(len(arr), dtype=bool)
    for slot, P in zip("UVW", (U, V, W)):
        if slot in {"FULL": "UVW", "RIGHT": "V", "LEFT": "U"}[kind]:
            ok &= hm[P[:, H]].all(axis=1)
    X, Y = {"FULL": (G, G), "RIGHT": (G, H), "LEFT": (H, G)}[kind]
    rows = np.arange(len(arr))[:, None, None]
    lhs = T[U[:, X][:, :, None], V[:, Y][:, None, :]]
    rhs = W[rows, T[np.ix_(X, Y)][None]]
    return ok & (lhs == rhs).all(axis=(1, 2))


class Context:
    """Per special loop cache of property checks and triple enumerations."""

    def __init__(self, GH: SpecialLoop, bounds: int = DEFAULT_BOUNDS):
        self.GH = GH
        self.bounds = bounds
        self._checks: dict[str, CheckResult] = {}
        self._triples: dict[str, np.ndarray] = {}

    def check(self, tag) -> CheckResult:
        key = str(tag)
        if key not in self._checks:
            self._checks[key] = check(self.GH, tag)
        return self._checks[key]

    def triples(self, kind: str) -> np.ndarray:
        if kind not in self._triples:
            self._triples[kind] = at.enumerate_triple_array(self.GH, kind)
        return self._triples[kind]

    @cached_property
    def s2bl(self) -> bool:
        return self.check("S2_BOL").holds

    @cached_property
    def power_table(self) -> dict[int, np.ndarray]:
        """``k -> s^k`` for every s in H, ``|k| <= 2*bounds + 1``."""
        L = self.GH.loop
        T = L.T.astype(np.intp)
        H = self.GH.H
        rho = L.right_inv.astype(np.intp)[H]
        out = {0: np.full(len(H), L.identity, dtype=np.intp)}
        top = 2 * self.bounds + 1
        for k in range(1, top + 1):
            out[k] = T[out[k - 1], H]
            out[-k] = T[out[-k + 1], rho]
        return out


# ---------------------------------------------------------------- individual theorems

def _r1(c: Context) -> Verdict:
    if not c.s2bl:
        return _na("R1")
    sub = restricted_loop(c.GH)
    r = check(whole(sub), "BOL")
    cex = None
    if not r.holds:
        cex = {"witness": tuple(c.GH.subset[i] for i in r.witness)}
    return _done("R1", r.holds, cex)


def _t14(c: Context) -> Verdict:
    if not c.s2bl:
        return _na("T1_4")
    for tag in ("S2_RIP", "S2_RAP"):
        r = c.check(tag)
        if not r.holds:
            return _done("T1_4", False, {"property": tag, "witness": r.witness})
    return _done("T1_4", True)


def _first_bad(bad: np.ndarray, *axes) -> tuple:
    idx = np.unravel_index(int(np.argmax(bad)), bad.shape)
    return tuple(int(ax[i]) for ax, i in zip(axes, idx))


def _t15(c: Context) -> Verdict:
    if not c.s2bl:
        return _na("T1_5")
    T = c.GH.loop.T.astype(np.intp)
    H = c.GH.H
    G = np.arange(c.GH.order)
    pw = c.power_table
    ns = np.arange(-c.bounds, c.bounds + 1)
    bad = np.zeros((len(G), len(H), len(ns)), dtype=bool)
    x = G[:, None]
    s = H[None, :]
    for j, n in enumerate(ns):
        a = T[x, pw[n][None, :]]
        b = T[T[x, pw[n - 1][None, :]], s]
        d = T[T[x, s], pw[n - 1][None, :]]
        bad[:, :, j] = (a != b) | (a != d)
    if bad.any():
        return _done("T1_5", False, {"x_s_n": _first_bad(bad, G, H, ns)})
    return _done("T1_5", True, instances=int(bad.size))


def _t16(c: Context) -> Verdict:
    if not c.s2bl:
        return _na("T1_6")
    T = c.GH.loop.T.astype(np.intp)
    H = c.GH.H
    G = np.arange(c.GH.order)
    pw = c.power_table
    ms = np.arange(-c.bounds, c.bounds + 1)
    bad = np.zeros((len(G), len(H), len(ms), len(ms)), dtype=bool)
    x = G[:, None]
    for i, m in enumerate(ms):
        xm = T[x, pw[m][None, :]]
        for j, n in enumerate(ms):
            bad[:, :, i, j] = T[xm, pw[n][None, :]] != T[x, pw[m + n][None, :]]
    if bad.any():
        return _done("T1_6", False, {"x_s_m_n": _first_bad(bad, G, H, ms, ms)})
    return _done("T1_6", True, instances=int(bad.size))


def _c17(c: Context) -> Verdict:
    if not c.s2bl:
        return _na("C1_7")
    pos = c.check(PropertyId("S_RPAP", c.bounds))
    neg = c.check(PropertyId("S_RPAP", c.bounds, negative=True))
    stats = {"positive": pos.holds, "negative": neg.holds}
    for r in (pos, neg):
        if not r.holds:
            return _done("C1_7", False, {"x_s_n": r.witness}, **stats)
    return _done("C1_7", True, **stats)


def _keyset(arr):
    return set(at.triple_keys(arr).tolist()) if len(arr) else set()


def _l18(c: Context) -> Verdict:
    GH = c.GH
    H, hm = GH.H, GH.mask
    T = GH.loop.T.astype(np.intp)
    full = c.triples("FULL")
    right = c.triples("RIGHT")
    left = c.triples("LEFT")

    def restricts_to_autotopism(arr):
        if len(arr) == 0:
            return np.zeros(0, dtype=bool)
        ok = np.ones(len(arr), dtype=bool)
        for k in range(3):
            ok &= hm[arr[:, k][:, H]].all(axis=1)
        rows = np.arange(len(arr))[:, None, None]
        lhs = T[arr[:, 0][:, H][:, :, None], arr[:, 1][:, H][:, None, :]]
        rhs = arr[:, 2][rows, T[np.ix_(H, H)][None]]
        return ok & (lhs == rhs).all(axis=(1, 2))

    full_ok = holds_array(GH, full, "FULL").all() and restricts_to_autotopism(full).all()
    right_v = bool(hm[right[:, 1][:, H]].all()) if len(right) else True
    left_u = bool(hm[left[:, 0][:, H]].all()) if len(left) else True
    fk = _keyset(full)
    rk, lk = at.triple_keys(right), at.triple_keys(left)
    r_out = [i for i, k in enumerate(rk.tolist()) if k not in fk]
    l_out = [i for i, k in enumerate(lk.tolist()) if k not in fk]
    stats = {
        "full": len(full), "right": len(right), "left": len(left),
        "right_not_full": len(r_out), "left_not_full": len(l_out),
        "right_restricting_to_aut_H": int(restricts_to_autotopism(right).sum()),
        "left_restricting_to_aut_H": int(restricts_to_autotopism(left).sum()),
        "full_in_right": fk <= set(rk.tolist()), "full_in_left": fk <= set(lk.tolist()),
    }
    if r_out:
        stats["right_not_full_witness"] = right[r_out[0]].tolist()
    if l_out:
        stats["left_not_full_witness"] = left[l_out[0]].tolist()
    ok = bool(full_ok and right_v and left_u and stats["full_in_right"]
              and stats["full_in_left"])
    return _done("L1_8", ok, {"full_restriction": bool(full_ok), "right_v": right_v,
                              "left_u": left_u}, **stats)


def _l19(c: Context) -> Verdict:
    stats = {}
    cex = {}
    for kind in ("RIGHT", "LEFT"):
        rep = at.group_axioms(c.triples(kind))
        stats[kind.lower()] = rep.size
        stats[f"{kind.lower()}_generators"] = rep.generators
        if not rep.is_group:
            cex[kind] = {"identity": rep.has_identity, "closed": rep.closed,
                         "inverses": rep.inverses}
            if rep.closure_witness is not None:
                cex[kind]["pair"] = [w.tolist() for w in rep.closure_witness]
    return _done("L1_9", not cex, cex, **stats)


def _l110(c: Context) -> Verdict:
    GH = c.GH
    L = GH.loop
    rip, lip = c.check("S2_RIP").holds, c.check("S2_LIP").holds
    if not (rip or lip):
        return _na("L1_10")
    stats: dict[str, Any] = {"right_applicable": rip, "left_applicable": lip}
    cex = None
    ok = True
    if rip:
        R = c.triples("RIGHT")
        J = L.right_inv.astype(np.intp)
        moved = np.stack([R[:, 2], J[R[:, 1][:, J]], R[:, 0]], axis=1) if len(R) else R
        good = holds_array(GH, moved, "RIGHT")
        stats["right_checked"] = len(R)
        if not good.all():
            ok = False
            i = int(np.argmin(good))
            cex = {"side": "right", "triple": R[i].tolist()}
    if lip:
        Lt = c.triples("LEFT")
        J = L.left_inv.astype(np.intp)
        if len(Lt):
            moved = np.stack([J[Lt[:, 0][:, J]], Lt[:, 2], Lt[:, 1]], axis=1)
            stated = np.stack([Lt[:, 0][:, J], Lt[:, 2], Lt[:, 1]], axis=1)
        else:
            moved = stated = Lt
        good = holds_array(GH, moved, "LEFT")
        stats["left_checked"] = len(Lt)
        stats["left_one_sided_form_failures"] = int((~holds_array(GH, stated, "LEFT")).sum())
        if not good.all() and ok:
            ok = False
            i = int(np.argmin(good))
            cex = {"side": "left", "triple": Lt[i].tolist()}
    return _done("L1_10", ok, cex, **stats)


def _t111(c: Context) -> Verdict:
    lhs = c.s2bl
    failing = []
    for s in c.GH.subset:
        r = at.triple_holds(c.GH, at.bol_triple(c.GH, s))
        if not r.holds:
            failing.append((s, r.witness))
    rhs = not failing
    stats = {"s2_bol": lhs, "all_bol_triples": rhs, "failing_s": len(failing)}
    cex = None
    if lhs != rhs:
        cex = {"s2_bol": lhs, "failing": failing[:1]}
    return _done("T1_11", lhs == rhs, cex, **stats)


def _t112(c: Context) -> Verdict:
    if not c.s2bl:
        return _na("T1_12")
    saipl = at.saipl_check(c.GH, "SECOND")
    s3 = c.check("S3_RIP")
    stats = {"s2_saipl": saipl.holds, "s3_rip": s3.holds}
    cex = None
    if saipl.holds != s3.holds:
        cex = {"saipl_witness": saipl.witness, "s3_rip_witness": s3.witness}
    return _done("T1_12", saipl.holds == s3.holds, cex, **stats)


def _t113(c: Context) -> Verdict:
    if not c.s2bl:
        return _na("T1_13")
    full = c.triples("FULL")
    diag = full[(full[:, 0] == full[:, 2]).all(axis=1)] if len(full) else full
    for row in diag:
        T = at.Permutation.from_array(row[1])
        r = at.is_s2_semi_automorphism(c.GH, T)
        if not r.holds:
            return _done("T1_13", False, {"triple": row.tolist(), "witness": r.witness},
                         diagonal=len(diag))
    return _done("T1_13", True, diagonal=len(diag), full=len(full))


def _semi_lr(c: Context, tag: str, hyp: bool) -> Verdict:
    if not (hyp and c.s2bl):
        return _na(tag)
    L = c.GH.loop
    for s in c.GH.subset:
        T = left_translation(L, s) * right_translation(L, s).inverse()
        r = at.is_s2_semi_automorphism(c.GH, T)
        if not r.holds:
            return _done(tag, False, {"s": s, "witness": r.witness})
    return _done(tag, True)


def _factorization(c: Context, tag: str, arr: np.ndarray, kinds: tuple[str, ...]) -> Verdict:
    GH = c.GH
    L = GH.loop
    T = L.T.astype(np.intp)
    e = L.identity
    if len(arr) == 0:
        return _done(tag, True, triples=0)
    U, V, W = arr[:, 0], arr[:, 1], arr[:, 2]
    rows = np.arange(len(arr))[:, None]
    s1, s2 = U[:, e], V[:, e]
    c_el = T[T[s1, s2], s1]
    Rs1 = T[:, s1].T  # row r: R_{s1}
    Rs1_inv = np.empty_like(Rs1)
    Rs1_inv[rows, Rs1] = np.arange(L.order)
    A = Rs1_inv[rows, U]  # A = U R_{s1}^-1
    B = T[A, c_el[:, None]]  # A R_c
    cand = np.stack([A, B, B], axis=1)
    ok = GH.mask[c_el].copy()
    for kind in kinds:
        ok &= holds_array(GH, cand, kind)
    # (A, AR_c, AR_c) followed by the inverse of (R_s1^-1, L_s1 R_s1, R_s1)
    Ls1Rs1 = T[T[s1[:, None], np.arange(L.order)[None, :]], s1[:, None]]
    inv_mid = np.empty_like(Ls1Rs1)
    inv_mid[rows, Ls1Rs1] = np.arange(L.order)
    recon = np.stack([Rs1[rows, A], inv_mid[rows, B], Rs1_inv[rows, B]], axis=1)
    ok &= (recon == arr).all(axis=(1, 2))
    if not ok.all():
        i = int(np.argmin(ok))
        return _done(tag, False, {"triple": arr[i].tolist(), "companion": int(c_el[i])},
                     triples=len(arr))
    return _done(tag, True, triples=len(arr))


def _t116(c: Context) -> Verdict:
    if not c.s2bl:
        return _na("T1_16")
    return _factorization(c, "T1_16", c.triples("FULL"), ("FULL",))


def _t117(c: Context) -> Verdict:
    if not c.s2bl:
        return _na("T1_17")
    return _factorization(c, "T1_17", c.triples("BOTH"), ("RIGHT", "LEFT"))


def _q1(c: Context) -> Verdict:
    stats = {}
    all_groups = True
    cex = {}
    n = c.GH.order
    for kind in ("FIRST", "RIGHT", "LEFT"):
        table = at.pseudo_automorphism_table(c.GH, kind)
        maps = np.array(list(table), dtype=np.intp).reshape(-1, n)
        keys = {tuple(m) for m in table}
        closed = inverses = True
        witness = None
        # composition a then b: x -> b[a[x]]
        for i, a in enumerate(maps):
            comp = maps[:, a]  # row j: b_j o a, i.e. a then b_j
            for j, row in enumerate(comp):
                if tuple(int(v) for v in row) not in keys:
                    closed = False
                    witness = (maps[i].tolist(), maps[j].tolist())
                    break
            if not closed:
                break
        for a in maps:
            inv = np.argsort(a)
            if tuple(int(v) for v in inv) not in keys:
                inverses = False
                break
        stats[kind.lower()] = {"size": len(maps), "closed": closed, "inverses": inverses,
                               "with_identity": tuple(range(n)) in keys}
        if not (closed and inverses):
            all_groups = False
            cex[kind] = witness
    return Verdict("Q1", True, all_groups, None if all_groups else cex, stats)


def _q2(c: Context) -> Verdict:
    hit = (c.s2bl and not c.GH.is_whole
           and not check(whole(c.GH.loop), "BOL").holds)
    # a search question: the verdict is always answered, the finding lives in stats
    return Verdict("Q2", True, True, None, {"s2bl_not_bol": hit, "findings": int(hit)})


_DISPATCH = {
    "R1": _r1, "T1_4": _t14, "T1_5": _t15, "T1_6": _t16, "C1_7": _c17, "L1_8": _l18,
    "L1_9": _l19, "L1_10": _l110, "T1_11": _t111, "T1_12": _t112, "T1_13": _t113,
    "C1_14": lambda c: _semi_lr(c, "C1_14", c.check("NUCLEAR_SQUARE").holds),
    "C1_15": lambda c: _semi_lr(c, "C1_15", c.check("EXPONENT2").holds),
    "T1_16": _t116, "T1_17": _t117, "Q1": _q1, "Q2": _q2,
}


def verify(GH: SpecialLoop, tag: str, bounds: int = DEFAULT_BOUNDS,
           context: Optional[Context] = None) -> Verdict:
    if tag not in _DISPATCH:
        raise UnsupportedProperty(f"unknown theorem tag {tag!r}")
    if tag in ENUMERATION_TAGS and GH.order > at.MAX_ENUM_ORDER:
        raise OrderTooLarge(GH.order, at.MAX_ENUM_ORDER)
    if bounds < 1:
        raise ValueError("bounds must be >= 1")
    ctx = context if context is not None else Context(GH, bounds)
    return _DISPATCH[tag](ctx)


# ---------------------------------------------------------------- corpus sweeps

@dataclass
class Tally:
    applicable: int = 0
    held: int = 0
    failed: int = 0
    not_applicable: int = 0

    def add(self, v: Verdict):
        if not v.applicable:
            self.not_applicable += 1
        elif v.conclusion_holds:
            self.held += 1
        else:
            self.failed += 1
        if v.applicable:
            self.applicable += 1

    def __str__(self):
        return (f"applicable={self.applicable} held={self.held} failed={self.failed} "
                f"not_applicable={self.not_applicable}")


@dataclass
class SweepReport:
    tags: tuple[str, ...]
    instances: int = 0
    tallies: dict[str, Tally] = field(default_factory=dict)
    counterexamples: list[tuple[int, str, str, dict]] = field(default_factory=list)
    l18_right_not_full: Optional[dict] = None
    l18_left_not_full: Optional[dict] = None
    q2_findings: int = 0
    time_ms: int = 0

    @property
    def failures(self) -> int:
        return sum(t.failed for tag, t in self.tallies.items() if tag not in QUESTIONS)

    def lines(self) -> list[tuple[str, str]]:
        out = [("instances", str(self.instances))]
        for tag in self.tags:
            out.append((f"theorem.{tag}", str(self.tallies[tag])))
        for idx, tag, label, cex in self.counterexamples:
            out.append((f"counterexample.{tag}", f"#{idx} {label} {cex}"))
        if "L1_8" in self.tags:
            for name, found in (("right", self.l18_right_not_full),
                                ("left", self.l18_left_not_full)):
                out.append((f"existence.L1_8.{name}_not_full",
                            "not-found" if found is None else f"found {found}"))
        if "Q2" in self.tags:
            out.append(("question.Q2.findings", str(self.q2_findings)))
        out.append(("time_ms", str(self.time_ms)))
        return out


def describe(GH: SpecialLoop) -> str:
    return f"order={GH.order} table={GH.loop.flat()} H={list(GH.subset)}"


def sweep(corpus: Iterable[SpecialLoop], tags: Iterable[str],
          bounds: int = DEFAULT_BOUNDS, tag_filter=None) -> SweepReport:
    """Verify ``tags`` on every special loop of ``corpus``.

    ``tag_filter(index, GH, tag)`` may return False to skip a tag for one
    instance (used to sub-sample expensive tags).
    """
    tags = tuple(tags)
    rep = SweepReport(tags, tallies={t: Tally() for t in tags})
    t0 = time.perf_counter()
    for idx, GH in enumerate(corpus):
        rep.instances += 1
        ctx = Context(GH, bounds)
        for tag in tags:
            if tag_filter is not None and not tag_filter(idx, GH, tag):
                continue
            v = verify(GH, tag, bounds, ctx)
            rep.tallies[tag].add(v)
            if v.failed and tag not in QUESTIONS:
                rep.counterexamples.append((idx, tag, describe(GH), v.counterexample))
            if tag == "Q2" and v.stats["s2bl_not_bol"]:
                rep.q2_findings += 1
            if tag == "L1_8":
                if rep.l18_right_not_full is None and v.stats.get("right_not_full"):
                    rep.l18_right_not_full = {"index": idx, "instance": describe(GH),
                                              "triple": v.stats["right_not_full_witness"]}
                if rep.l18_left_not_full is None and v.stats.get("left_not_full"):
                    rep.l18_left_not_full = {"index": idx, "instance": describe(GH),
                                             "triple": v.stats["left_not_full_witness"]}
    rep.time_ms = int(1000 * (time.perf_counter() - t0))
    return rep

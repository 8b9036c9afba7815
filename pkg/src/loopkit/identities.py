"""Decide the named identities of a special loop, with witnesses.

Every check is an exhaustive sweep.  The sweep grid is laid out with the
quantified variables in the order they are listed in the identity
(outermost first), so the first ``True`` cell of the violation mask in
C order is the lexicographically first counterexample.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .core import Loop
from .errors import UnsupportedProperty
from .subloops import SpecialLoop, is_smarandache_exponent_two

SIMPLE_TAGS = (
    "BOL", "S2_BOL", "RIP", "LIP", "IP", "S2_RIP", "S2_LIP", "S2_IP", "S3_RIP",
    "RAP", "LAP", "AP", "S2_RAP", "S2_LAP", "S2_AP", "NUCLEAR_SQUARE", "EXPONENT2",
)
POWER_TAGS = ("RPAP", "S_RPAP")
ALL_TAGS = SIMPLE_TAGS + POWER_TAGS

# variable names of each witness tuple, outermost first
WITNESS_VARS = {
    "BOL": ("x", "y", "z"),
    "S2_BOL": ("x", "z", "s"),
    "RIP": ("x", "y"),
    "LIP": ("x", "y"),
    "S2_RIP": ("y", "s"),
    "S2_LIP": ("y", "s"),
    "S3_RIP": ("y", "s"),
    "RAP": ("x", "y"),
    "LAP": ("x", "y"),
    "S2_RAP": ("y", "s"),
    "S2_LAP": ("y", "s"),
    "RPAP": ("x", "y", "n"),
    "S_RPAP": ("x", "s", "n"),
    "NUCLEAR_SQUARE": ("s", "x", "y"),
    "EXPONENT2": ("s",),
}

CONJUNCTIONS = {
    "IP": ("RIP", "LIP"),
    "AP": ("RAP", "LAP"),
    "S2_IP": ("S2_RIP", "S2_LIP"),
    "S2_AP": ("S2_RAP", "S2_LAP"),
}

DEFAULT_MAX_N = 6


@dataclass(frozen=True)
class PropertyId:
    """A property tag; ``max_n`` bounds the exponent for the power tags.

    ``negative`` selects exponents ``-max_n..-1`` instead of ``0..max_n``.
    """

    tag: str
    max_n: Optional[int] = None
    negative: bool = False

    def __post_init__(self):
        if self.tag not in ALL_TAGS:
            raise UnsupportedProperty(f"unknown property {self.tag!r}")
        if self.tag in POWER_TAGS:
            if self.max_n is None:
                object.__setattr__(self, "max_n", DEFAULT_MAX_N)
            if self.max_n < 1:
                raise UnsupportedProperty("max_n must be >= 1")

    @classmethod
    def parse(cls, text: str) -> PropertyId:
        """``"S2_BOL"``, ``"RPAP(4)"`` or ``"S_RPAP(-4)"`` (negative exponents)."""
        m = re.fullmatch(r"\s*([A-Z0-9_]+)\s*(?:\(\s*(-?\d+)\s*\))?\s*", text)
        if not m:
            raise UnsupportedProperty(f"cannot parse property {text!r}")
        tag, arg = m.group(1), m.group(2)
        if arg is None:
            return cls(tag)
        if tag not in POWER_TAGS:
            raise UnsupportedProperty(f"{tag} takes no argument")
        k = int(arg)
        return cls(tag, abs(k), k < 0)

    def __str__(self):
        if self.tag in POWER_TAGS:
            return f"{self.tag}({-self.max_n if self.negative else self.max_n})"
        return self.tag


@dataclass(frozen=True)
class CheckResult:
    holds: bool
    witness: Optional[tuple[int, ...]] = None
    checked_instances: int = 0
    clause: Optional[str] = None  # failing sub-identity of a conjunction

    def __bool__(self):
        return self.holds


def _first(bad: np.ndarray, *axes: np.ndarray) -> Optional[tuple[int, ...]]:
    if not bad.any():
        return None
    idx = np.unravel_index(int(np.argmax(bad)), bad.shape)
    return tuple(int(ax[i]) for ax, i in zip(axes, idx))


def _result(bad: np.ndarray, *axes, clause=None) -> CheckResult:
    w = _first(bad, *axes)
    return CheckResult(w is None, w, int(bad.size), None if w is None else clause)


def _grid(*arrays):
    return np.ix_(*arrays)


def _tables(L: Loop):
    return L.T.astype(np.intp), L.right_inv.astype(np.intp), L.left_inv.astype(np.intp)


def _powers(L: Loop, elems: np.ndarray, k: int) -> np.ndarray:
    T, rho, _ = _tables(L)
    base = elems if k >= 0 else rho[elems]
    out = np.full(len(elems), L.identity, dtype=np.intp)
    for _ in range(abs(k)):
        out = T[out, base]
    return out


def _check_bol(L: Loop, pivot: np.ndarray, order: str) -> np.ndarray:
    """Violation mask of ``(xs.z)s = x(sz.s)`` with ``s`` drawn from ``pivot``."""
    T = L.T.astype(np.intp)
    n = np.arange(L.order)
    if order == "xyz":
        x, s, z = _grid(n, pivot, n)
    else:  # x, z, s
        x, z, s = _grid(n, n, pivot)
    lhs = T[T[T[x, s], z], s]
    rhs = T[x, T[T[s, z], s]]
    return lhs != rhs


def _simple(GH: SpecialLoop, tag: str) -> CheckResult:
    L = GH.loop
    T, rho, lam = _tables(L)
    G = np.arange(L.order)
    H = GH.H
    if tag == "BOL":
        return _result(_check_bol(L, G, "xyz"), G, G, G, clause=tag)
    if tag == "S2_BOL":
        return _result(_check_bol(L, H, "xzs"), G, G, H, clause=tag)
    if tag == "RIP":
        x, y = _grid(G, G)
        return _result(T[T[y, x], rho[x]] != y, G, G, clause=tag)
    if tag == "LIP":
        x, y = _grid(G, G)
        return _result(T[lam[x], T[x, y]] != y, G, G, clause=tag)
    if tag == "S2_RIP":
        y, s = _grid(G, H)
        return _result(T[T[y, s], rho[s]] != y, G, H, clause=tag)
    if tag == "S2_LIP":
        y, s = _grid(G, H)
        return _result(T[lam[s], T[s, y]] != y, G, H, clause=tag)
    if tag == "S3_RIP":
        y, s = _grid(G, H)
        return _result(T[T[s, y], rho[y]] != s, G, H, clause=tag)
    if tag == "RAP":
        x, y = _grid(G, G)
        return _result(T[y, T[x, x]] != T[T[y, x], x], G, G, clause=tag)
    if tag == "LAP":
        x, y = _grid(G, G)
        return _result(T[T[x, x], y] != T[x, T[x, y]], G, G, clause=tag)
    if tag == "S2_RAP":
        y, s = _grid(G, H)
        return _result(T[y, T[s, s]] != T[T[y, s], s], G, H, clause=tag)
    if tag == "S2_LAP":
        y, s = _grid(G, H)
        return _result(T[T[s, s], y] != T[s, T[s, y]], G, H, clause=tag)
    if tag == "NUCLEAR_SQUARE":
        s, x, y = _grid(H, G, G)
        sq = T[s, s]
        return _result(T[y, T[x, sq]] != T[T[y, x], sq], H, G, G, clause=tag)
    if tag == "EXPONENT2":
        holds = is_smarandache_exponent_two(GH)
        bad = T[H, H] != L.identity
        w = _first(bad, H)
        assert holds == (w is None)
        return CheckResult(holds, w, len(H), None if holds else tag)
    raise UnsupportedProperty(tag)


def _power_alternative(GH: SpecialLoop, pivot: np.ndarray, p: PropertyId) -> CheckResult:
    """``x y^n == x R_y^n`` over ``x in G``, ``y in pivot`` and the exponent range."""
    L = GH.loop
    T = L.T.astype(np.intp)
    rdiv = L.rdiv.astype(np.intp)
    G = np.arange(L.order)
    exps = np.arange(-p.max_n, 0) if p.negative else np.arange(0, p.max_n + 1)
    bad = np.zeros((len(G), len(pivot), len(exps)), dtype=bool)
    x, y = _grid(G, pivot)
    for j, k in enumerate(exps):
        lhs = T[x, _powers(L, pivot, int(k))[None, :]]
        cur = np.broadcast_to(x, (len(G), len(pivot)))
        for _ in range(abs(int(k))):
            cur = T[cur, y] if k > 0 else rdiv[cur, y]
        bad[:, :, j] = lhs != cur
    return _result(bad, G, pivot, exps, clause=p.tag)


def check(GH: SpecialLoop, p: Union[PropertyId, str]) -> CheckResult:
    if isinstance(p, str):
        p = PropertyId.parse(p)
    if p.tag in CONJUNCTIONS:
        total = 0
        for part in CONJUNCTIONS[p.tag]:
            r = _simple(GH, part)
            total += r.checked_instances
            if not r.holds:
                return CheckResult(False, r.witness, total, part)
        return CheckResult(True, None, total)
    if p.tag == "RPAP":
        return _power_alternative(GH, np.arange(GH.order), p)
    if p.tag == "S_RPAP":
        return _power_alternative(GH, GH.H, p)
    return _simple(GH, p.tag)


def right_nucleus(L: Loop) -> frozenset[int]:
    """``{a : y(xa) = (yx)a for all x, y}``."""
    T = L.T.astype(np.intp)
    G = np.arange(L.order)
    a, x, y = _grid(G, G, G)
    ok = (T[y, T[x, a]] == T[T[y, x], a]).all(axis=(1, 2))
    return frozenset(int(v) for v in np.flatnonzero(ok))


def smarandache_right_nucleus(GH: SpecialLoop) -> frozenset[int]:
    return right_nucleus(GH.loop) & frozenset(GH.subset)


def replay(GH: SpecialLoop, tag: str, witness: tuple[int, ...]) -> bool:
    """Re-evaluate a single instance with scalar products; True iff it is a violation."""
    L = GH.loop
    m = L.mul
    rho = lambda v: int(L.right_inv[v])  # noqa: E731
    lam = lambda v: int(L.left_inv[v])  # noqa: E731

    def pw(s, k):
        base = s if k >= 0 else rho(s)
        out = L.identity
        for _ in range(abs(k)):
            out = m(out, base)
        return out

    def shift(x, s, k):
        out = x
        for _ in range(abs(k)):
            out = m(out, s) if k > 0 else int(L.rdiv[out, s])
        return out

    if tag == "BOL":
        x, y, z = witness
        return m(m(m(x, y), z), y) != m(x, m(m(y, z), y))
    if tag == "S2_BOL":
        x, z, s = witness
        return m(m(m(x, s), z), s) != m(x, m(m(s, z), s))
    if tag == "RIP":
        x, y = witness
        return m(m(y, x), rho(x)) != y
    if tag == "LIP":
        x, y = witness
        return m(lam(x), m(x, y)) != y
    if tag == "S2_RIP":
        y, s = witness
        return m(m(y, s), rho(s)) != y
    if tag == "S2_LIP":
        y, s = witness
        return m(lam(s), m(s, y)) != y
    if tag == "S3_RIP":
        y, s = witness
        return m(m(s, y), rho(y)) != s
    if tag == "RAP":
        x, y = witness
        return m(y, m(x, x)) != m(m(y, x), x)
    if tag == "LAP":
        x, y = witness
        return m(m(x, x), y) != m(x, m(x, y))
    if tag == "S2_RAP":
        y, s = witness
        return m(y, m(s, s)) != m(m(y, s), s)
    if tag == "S2_LAP":
        y, s = witness
        return m(m(s, s), y) != m(s, m(s, y))
    if tag in ("RPAP", "S_RPAP"):
        x, y, k = witness
        return m(x, pw(y, k)) != shift(x, y, k)
    if tag == "NUCLEAR_SQUARE":
        s, x, y = witness
        sq = m(s, s)
        return m(y, m(x, sq)) != m(m(y, x), sq)
    if tag == "EXPONENT2":
        (s,) = witness
        return m(s, s) != L.identity
    raise UnsupportedProperty(tag)

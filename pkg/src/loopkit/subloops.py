"""Subloop closure, subloop enumeration and special loops ``(G_H, .)``."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .core import Loop, as_loop, table_from_array
from .errors import MissingIdentity, NotClosed, TrivialSubloop


def generated_subloop(L: Loop, seed: Iterable[int]) -> frozenset[int]:
    """Least subset containing ``seed`` and ``e`` closed under products and inverses."""
    members = {L.identity, *seed}
    work = list(members)
    T, li, ri = L.T, L.left_inv, L.right_inv
    while work:
        a = work.pop()
        new = {int(li[a]), int(ri[a])}
        for b in list(members):
            new.add(int(T[a, b]))
            new.add(int(T[b, a]))
        for c in new - members:
            members.add(c)
            work.append(c)
    return frozenset(members)


def all_subloops(L: Loop) -> list[tuple[int, ...]]:
    """Every subloop of ``L`` (including ``{e}`` and ``L``), sorted by size then lexicographically."""
    start = frozenset([L.identity])
    seen = {start}
    frontier = [start]
    cache: dict[frozenset, frozenset] = {}
    while frontier:
        nxt = []
        for S in frontier:
            for g in range(L.order):
                if g in S:
                    continue
                key = S | {g}
                if key not in cache:
                    cache[key] = generated_subloop(L, key)
                C = cache[key]
                if C not in seen:
                    seen.add(C)
                    nxt.append(C)
        frontier = nxt
    return sorted((tuple(sorted(S)) for S in seen), key=lambda s: (len(s), s))


@dataclass(frozen=True, eq=False)
class SpecialLoop:
    """A loop ``G`` with a designated non-trivial subloop ``H``."""

    loop: Loop
    subset: tuple[int, ...]
    mask: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return self.loop.order

    @property
    def H(self) -> np.ndarray:
        return np.asarray(self.subset, dtype=np.intp)

    @property
    def is_whole(self) -> bool:
        return len(self.subset) == self.loop.order

    def __eq__(self, other):
        if not isinstance(other, SpecialLoop):
            return NotImplemented
        return self.loop == other.loop and self.subset == other.subset

    def __hash__(self):
        return hash((self.loop, self.subset))

    def __repr__(self):
        return f"SpecialLoop(order={self.order}, H={list(self.subset)})"


def make_special(L: Loop, H: Iterable[int]) -> SpecialLoop:
    subset = tuple(sorted(set(int(h) for h in H)))
    if L.identity not in subset:
        raise MissingIdentity(f"identity {L.identity} not in subset {list(subset)}")
    if len(subset) < 2:
        raise TrivialSubloop("subloop must have at least two elements")
    mask = np.zeros(L.order, dtype=bool)
    mask[list(subset)] = True
    for s in subset:
        for t in subset:
            if not mask[L.T[s, t]]:
                raise NotClosed((s, t))
    for s in subset:
        if not (mask[L.left_inv[s]] and mask[L.right_inv[s]]):
            raise NotClosed((s, s))
    mask.setflags(write=False)
    return SpecialLoop(L, subset, mask)


def whole(L: Loop) -> SpecialLoop:
    """``(G_G, .)``: the special loop with ``H = G``."""
    return make_special(L, range(L.order))


def restricted_loop(GH: SpecialLoop) -> Loop:
    """``(H, .)`` as a loop on ``0..|H|-1`` (indices follow the sorted subset)."""
    H = GH.H
    index = {h: i for i, h in enumerate(GH.subset)}
    sub = GH.loop.T[np.ix_(H, H)]
    return as_loop(table_from_array([[index[int(v)] for v in row] for row in sub]))


def is_smarandache_exponent_two(GH: SpecialLoop) -> bool:
    H = GH.H
    return bool(np.all(GH.loop.T[H, H] == GH.loop.identity))

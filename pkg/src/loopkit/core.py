"""Cayley tables, loops, permutations and element powers.

Elements are the integers ``0..n-1``.  Maps act on the right, so for
permutations ``A`` and ``B`` the product ``A * B`` sends ``x`` to
``(x A) B``.  This keeps expressions such as ``A R_c`` readable in code.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    LengthMismatch,
    NoIdentity,
    NotAQuasigroup,
    OrderMismatch,
    OutOfRangeEntry,
)

MAX_ORDER = 255


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CayleyTable:
    """Dense ``n x n`` multiplication table, ``entries[x, y] = x*y``."""

    order: int
    entries: np.ndarray

    def flat(self) -> list[int]:
        return [int(v) for v in self.entries.ravel()]

    def __eq__(self, other):
        if not isinstance(other, CayleyTable):
            return NotImplemented
        return self.order == other.order and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.order, self.entries.tobytes()))


def build_table(order: int, entries: Iterable[int]) -> CayleyTable:
    """Build a table from a row-major list of ``order**2`` entries.

    Only ranges are checked here; algebraic axioms are :func:`as_loop`'s job.
    """
    if order < 1 or order > MAX_ORDER:
        raise LengthMismatch(f"order must be in 1..{MAX_ORDER}, got {order}")
    values = list(entries)
    if len(values) != order * order:
        raise LengthMismatch(f"expected {order * order} entries, got {len(values)}")
    for k, v in enumerate(values):
        if not 0 <= v < order:
            raise OutOfRangeEntry(k // order, k % order, v)
    arr = np.array(values, dtype=np.uint8).reshape(order, order)
    return CayleyTable(order, _frozen(arr))


def table_from_array(arr) -> CayleyTable:
    arr = np.asarray(arr)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise LengthMismatch(f"table must be square, got shape {arr.shape}")
    return build_table(arr.shape[0], arr.ravel().tolist())


@dataclass(frozen=True, eq=False)
class Permutation:
    """A bijection of ``0..n-1`` stored as its image list."""

    image: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.image) != list(range(len(self.image))):
            raise ValueError(f"not a bijection: {self.image}")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def from_array(cls, arr) -> Permutation:
        return cls(tuple(int(v) for v in arr))

    @property
    def order(self) -> int:
        return len(self.image)

    @cached_property
    def array(self) -> np.ndarray:
        return _frozen(np.array(self.image, dtype=np.intp))

    def __call__(self, x: int) -> int:
        return self.image[x]

    def __mul__(self, other: Permutation) -> Permutation:
        if self.order != other.order:
            raise OrderMismatch(f"{self.order} != {other.order}")
        return Permutation(tuple(other.image[v] for v in self.image))

    def inverse(self) -> Permutation:
        inv = [0] * self.order
        for x, v in enumerate(self.image):
            inv[v] = x
        return Permutation(tuple(inv))

    def __pow__(self, k: int) -> Permutation:
        base = self if k >= 0 else self.inverse()
        out = Permutation.identity(self.order)
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_identity(self) -> bool:
        return all(v == x for x, v in enumerate(self.image))

    def maps_onto(self, subset: Iterable[int]) -> bool:
        s = set(subset)
        return {self.image[x] for x in s} == s

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.image == other.image

    def __hash__(self):
        return hash(self.image)

    def __repr__(self):
        return f"Permutation({list(self.image)})"


class Loop:
    """A quasigroup with a two-sided identity.

    Build instances with :func:`as_loop`.  Inverse arrays and the two
    division tables are computed once since the identity checkers read
    them in their inner loops.
    """

    def __init__(self, table: CayleyTable, identity: int,
                 left_inv: np.ndarray, right_inv: np.ndarray,
                 ldiv: np.ndarray, rdiv: np.ndarray):
        self.table = table
        self.identity = identity
        self.left_inv = left_inv
        self.right_inv = right_inv
        # ldiv[x, z] = x\z, the y with x*y = z; rdiv[z, y] = z/y.
        self.ldiv = ldiv
        self.rdiv = rdiv

    @property
    def order(self) -> int:
        return self.table.order

    @property
    def T(self) -> np.ndarray:
        return self.table.entries

    def mul(self, x: int, y: int) -> int:
        return int(self.table.entries[x, y])

    def flat(self) -> list[int]:
        return self.table.flat()

    def __eq__(self, other):
        if not isinstance(other, Loop):
            return NotImplemented
        return self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"Loop(order={self.order}, identity={self.identity})"


def as_loop(t: CayleyTable) -> Loop:
    """Validate the Latin property and locate the identity."""
    T = t.entries.astype(np.intp)
    n = t.order
    full = np.arange(n)
    rows_ok = (np.sort(T, axis=1) == full).all(axis=1)
    if not rows_ok.all():
        raise NotAQuasigroup("row", int(np.argmin(rows_ok)))
    cols_ok = (np.sort(T, axis=0) == full[:, None]).all(axis=0)
    if not cols_ok.all():
        raise NotAQuasigroup("column", int(np.argmin(cols_ok)))
    identity = None
    for e in range(n):
        if np.array_equal(T[e], full) and np.array_equal(T[:, e], full):
            identity = e
            break
    if identity is None:
        raise NoIdentity("no two-sided identity element")

    ldiv = np.empty((n, n), dtype=np.uint8)
    rdiv = np.empty((n, n), dtype=np.uint8)
    rows = np.arange(n)[:, None]
    ldiv[rows, T] = full[None, :]
    rdiv[T, rows.T] = full[:, None]
    right_inv = ldiv[:, identity].copy()
    left_inv = rdiv[identity, :].copy()
    return Loop(t, identity, _frozen(left_inv), _frozen(right_inv),
                _frozen(ldiv), _frozen(rdiv))


def loop_from_rows(rows: Sequence[Sequence[int]]) -> Loop:
    return as_loop(table_from_array(rows))


def mul(L: Loop, x: int, y: int) -> int:
    return L.mul(x, y)


def left_translation(L: Loop, x: int) -> Permutation:
    """``L_x : y -> x*y``."""
    return Permutation.from_array(L.T[x, :])


def right_translation(L: Loop, x: int) -> Permutation:
    """``R_x : y -> y*x``."""
    return Permutation.from_array(L.T[:, x])


def right_inverse_map(L: Loop) -> Permutation:
    return Permutation.from_array(L.right_inv)


def left_inverse_map(L: Loop) -> Permutation:
    return Permutation.from_array(L.left_inv)


def power(L: Loop, s: int, k: int) -> int:
    """Left-nested power: ``s^0 = e``, ``s^k = s^(k-1) * s``.

    Negative exponents use the right inverse, ``s^-k = (s^rho)^k``.
    """
    base = s if k >= 0 else int(L.right_inv[s])
    out = L.identity
    for _ in range(abs(k)):
        out = L.mul(out, base)
    return out


def elementwise_power_shift(L: Loop, x: int, s: int, k: int) -> int:
    """``x`` right-multiplied ``k`` times by ``s`` (by ``s^rho`` when k < 0)."""
    base = s if k >= 0 else int(L.right_inv[s])
    out = x
    for _ in range(abs(k)):
        out = L.mul(out, base)
    return out


def cyclic_group(n: int) -> Loop:
    return loop_from_rows([[(i + j) % n for j in range(n)] for i in range(n)])


def direct_product(A: Loop, B: Loop) -> Loop:
    """Product loop on pairs ``(a, b)`` encoded as ``a * |B| + b``."""
    na, nb = A.order, B.order
    rows = []
    for a1 in range(na):
        for b1 in range(nb):
            rows.append([A.mul(a1, a2) * nb + B.mul(b1, b2)
                         for a2 in range(na) for b2 in range(nb)])
    return loop_from_rows(rows)

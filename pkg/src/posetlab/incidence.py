"""Incidence algebra of a finite poset: zeta matrix, Möbius function, inversion.

Two independent routes compute the Möbius function:

* :func:`mobius_by_inversion` inverts the unipotent zeta matrix, solving
  ``zeta @ mu = 1`` row by row from the top of a linear extension;
* :func:`mobius_by_recursion` runs ``mu(x, y) = -sum_{x <= z < y} mu(x, z)``,
  i.e. solves ``mu @ zeta = 1`` from the left.

All arithmetic is signed 64-bit with explicit overflow detection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import MobiusOverflow, NotComparable
from .poset import FinitePoset

INT64_MAX = int(np.iinfo(np.int64).max)
# Magnitude bound used for overflow guards: float64 estimates are
# accurate to far better than a factor 2 here.
_GUARD = float(2**62)


@dataclass(frozen=True)
class IncidenceMatrix:
    """Zeta matrix written in the basis ordered by ``order`` (a linear extension)."""

    order: tuple[int, ...]
    entries: np.ndarray

    @property
    def nilpotent(self) -> np.ndarray:
        return self.entries - np.eye(len(self.order), dtype=self.entries.dtype)


def zeta_matrix(P: FinitePoset) -> IncidenceMatrix:
    order = P.linear_extension
    entries = P.leq[np.ix_(order, order)].astype(np.int64)
    entries.flags.writeable = False
    return IncidenceMatrix(order, entries)


def checked_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``a @ b`` in int64, raising :class:`MobiusOverflow` if any partial sum could overflow."""
    bound = np.abs(a).astype(np.float64) @ np.abs(b).astype(np.float64)
    if bound.size and bound.max() >= _GUARD:
        i, j = (int(v) for v in np.unravel_index(int(bound.argmax()), bound.shape))
        raise MobiusOverflow(f"integer product exceeds the 64-bit range at entry ({i}, {j})", pair=(i, j))
    return a.astype(np.int64) @ b.astype(np.int64)


class MobiusTable:
    """Möbius values on the comparable pairs of a poset.

    Indexed by element pairs; incomparable pairs read as 0.
    """

    def __init__(self, P: FinitePoset, values: np.ndarray):
        values = np.asarray(values, dtype=np.int64).copy()
        values[~P.leq] = 0
        values.flags.writeable = False
        self.poset = P
        self.values = values

    def __getitem__(self, pair: tuple[int, int]) -> int:
        x, y = pair
        return int(self.values[x, y])

    def __eq__(self, other) -> bool:
        if not isinstance(other, MobiusTable):
            return NotImplemented
        return self.values.shape == other.values.shape and bool(np.array_equal(self.values, other.values))

    __hash__ = None

    def __repr__(self) -> str:
        return f"MobiusTable(size={self.values.shape[0]}, nonzero={int(np.count_nonzero(self.values))})"

    def items(self) -> Iterator[tuple[int, int, int]]:
        """``(x, y, mu)`` for every comparable pair, row-major."""
        for x, y in np.argwhere(self.poset.leq):
            yield int(x), int(y), int(self.values[x, y])

    def value_range(self) -> set[int]:
        return {int(v) for v in np.unique(self.values[self.poset.leq])}

    def differences(self, other: MobiusTable) -> list[tuple[int, int, int, int]]:
        """``(x, y, self, other)`` wherever the tables disagree."""
        return [
            (int(x), int(y), int(self.values[x, y]), int(other.values[x, y]))
            for x, y in np.argwhere(self.values != other.values)
        ]


def _from_extension(P: FinitePoset, order: Sequence[int], mu_ext: np.ndarray) -> MobiusTable:
    values = np.zeros_like(mu_ext)
    idx = np.asarray(order, dtype=np.int64)
    values[np.ix_(idx, idx)] = mu_ext
    return MobiusTable(P, values)


def _check_recursions(zeta: np.ndarray, mu: np.ndarray) -> None:
    eye = np.eye(zeta.shape[0], dtype=np.int64)
    if not (np.array_equal(checked_matmul(mu, zeta), eye) and np.array_equal(checked_matmul(zeta, mu), eye)):
        raise AssertionError("Möbius table fails the two-sided recursion")


def mobius_by_inversion(P: FinitePoset, *, verify: bool = True) -> MobiusTable:
    """Exact inverse of the zeta matrix by unipotent back substitution.

    Row ``i`` of the inverse (extension order) is
    ``e_i - zeta[i, i+1:] @ mu[i+1:]``; the result coincides with the
    terminating series ``sum_k (-N)^k``.  With ``verify`` the product with
    the zeta matrix is checked against the identity on both sides.
    """
    Z = zeta_matrix(P)
    zeta = Z.entries
    m = zeta.shape[0]
    mu = np.zeros((m, m), dtype=np.int64)
    for i in range(m - 1, -1, -1):
        above = np.flatnonzero(zeta[i, i + 1:]) + i + 1
        row = np.zeros(m, dtype=np.int64)
        if above.size:
            block = mu[above]
            bound = np.abs(block).astype(np.float64).sum(axis=0)
            if bound.max() >= _GUARD:
                j = int(bound.argmax())
                raise MobiusOverflow("Möbius value exceeds the 64-bit range", pair=(Z.order[i], Z.order[j]))
            row = -block.sum(axis=0)
        row[i] = 1
        mu[i] = row
    if verify:
        _check_recursions(zeta, mu)
    return _from_extension(P, Z.order, mu)


def mobius_by_recursion(P: FinitePoset) -> MobiusTable:
    """``mu(x, x) = 1`` and ``mu(x, y) = -sum_{x <= z < y} mu(x, z)``."""
    m = P.size
    lt = P.strict.astype(np.int64)
    lt_abs = P.strict.astype(np.float64)
    mu = np.zeros((m, m), dtype=np.int64)
    for x in range(m):
        row = np.zeros(m, dtype=np.int64)
        row[x] = 1
        for y in P.linear_extension:
            if y == x or not P.leq[x, y]:
                continue
            if np.abs(row).astype(np.float64) @ lt_abs[:, y] >= _GUARD:
                raise MobiusOverflow("Möbius value exceeds the 64-bit range", pair=(x, y))
            row[y] = -(row @ lt[:, y])
        mu[x] = row
    return MobiusTable(P, mu)


def mobius_by_series(P: FinitePoset) -> MobiusTable:
    """``sum_k (-1)^k N^k`` in exact Python integers.

    Chain counts in ``N^k`` grow quickly, so this is meant for small posets
    (it never overflows, but it is slow); the result is range-checked.
    """
    Z = zeta_matrix(P)
    m = len(Z.order)
    N = Z.nilpotent.astype(object)
    total = np.eye(m, dtype=np.int64).astype(object)
    term = total.copy()
    for _ in range(m):
        term = -(term @ N)
        if not term.any():
            break
        total = total + term
    for (i, j), v in np.ndenumerate(total):
        if abs(v) > INT64_MAX:
            raise MobiusOverflow("Möbius value exceeds the 64-bit range", pair=(Z.order[i], Z.order[j]))
    return _from_extension(P, Z.order, total.astype(np.int64))


def mobius_invert(P: FinitePoset, s: Sequence[int] | Mapping[int, int], mu: MobiusTable | None = None) -> list[int]:
    """Solve ``s(x) = sum_{y >= x} f(y)`` for ``f``: ``f(x) = sum_{y >= x} mu(x, y) s(y)``."""
    mu = mu if mu is not None else mobius_by_inversion(P)
    vec = np.array([int(s[x]) for x in range(P.size)], dtype=np.int64).reshape(-1, 1)
    return [int(v) for v in checked_matmul(mu.values, vec).ravel()]


def integrate(P: FinitePoset, f: Sequence[int] | Mapping[int, int]) -> list[int]:
    """The integration operator: ``(I f)(x) = sum_{y >= x} f(y)``."""
    vec = np.array([int(f[x]) for x in range(P.size)], dtype=np.int64).reshape(-1, 1)
    return [int(v) for v in checked_matmul(P.leq.astype(np.int64), vec).ravel()]


@dataclass(frozen=True)
class HallCheck:
    mu: int
    chi: int

    @property
    def ok(self) -> bool:
        return 1 + self.mu == self.chi

    def __iter__(self):
        return iter((self.mu, self.chi, self.ok))


def hall_check(P: FinitePoset, x: int, y: int, mu: MobiusTable | None = None, face_limit: int | None = None) -> HallCheck:
    """Compare ``1 + mu(x, y)`` with the Euler characteristic of the open interval's nerve."""
    from .complex import DEFAULT_FACE_LIMIT, euler_characteristic, nerve
    from .poset import interval

    if x == y or not P.leq[x, y]:
        raise NotComparable(f"hall_check needs {P.labels[x]} < {P.labels[y]}")
    sub, _ = interval(P, x, y, open=True)
    chi = euler_characteristic(nerve(sub, face_limit=face_limit or DEFAULT_FACE_LIMIT))
    value = mu[x, y] if mu is not None else mobius_by_inversion(P)[x, y]
    return HallCheck(int(value), chi)

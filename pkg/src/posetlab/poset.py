"""Explicit finite posets and their order-theoretic primitives.

A :class:`FinitePoset` is a tuple of display labels plus a dense boolean
matrix ``leq`` with ``leq[x, y]`` true iff ``x <= y``.  Elements *are* the
integer indices ``0..m-1``; labels never take part in any computation.

Example::

    >>> P = from_cover_relations(["a", "b", "c"], [(0, 1), (1, 2)])
    >>> cover_pairs(P)
    [(0, 1), (1, 2)]
    >>> bool(P.leq[0, 2])
    True
"""

from __future__ import annotations

import graphlib
import heapq
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import CycleDetected, NotAPartialOrder, NotComparable

_FAR = np.iinfo(np.int64).max


def _bool_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Boolean matrix product through BLAS (counts stay exact in float64)."""
    return (a.astype(np.float64) @ b.astype(np.float64)) > 0.5


def _check_partial_order(leq: np.ndarray) -> None:
    m = leq.shape[0]
    if m == 0:
        return
    if not leq.diagonal().all():
        x = int(np.flatnonzero(~leq.diagonal())[0])
        raise NotAPartialOrder(f"relation is not reflexive at element {x}")
    both = leq & leq.T
    np.fill_diagonal(both, False)
    if both.any():
        x, y = (int(v) for v in np.argwhere(both)[0])
        raise NotAPartialOrder(f"relation is not antisymmetric at ({x}, {y})")
    missing = _bool_product(leq, leq) & ~leq
    if missing.any():
        x, z = (int(v) for v in np.argwhere(missing)[0])
        raise NotAPartialOrder(f"relation is not transitive: {x} <= ... <= {z} but not {x} <= {z}")


class FinitePoset:
    """An immutable finite poset on the elements ``0..m-1``.

    ``labels`` are display-only.  ``leq`` is validated on construction unless
    ``check=False`` is passed by a caller that already knows the relation is
    a partial order.
    """

    def __init__(self, labels: Sequence[str], leq, *, check: bool = True):
        leq = np.array(leq, dtype=bool)
        if leq.ndim != 2 or leq.shape[0] != leq.shape[1]:
            raise ValueError(f"leq must be a square matrix, got shape {leq.shape}")
        if len(labels) != leq.shape[0]:
            raise ValueError(f"{len(labels)} labels for a {leq.shape[0]}-element relation")
        if check:
            _check_partial_order(leq)
        leq.flags.writeable = False
        self.labels: tuple[str, ...] = tuple(str(label) for label in labels)
        self.leq: np.ndarray = leq

    def __len__(self) -> int:
        return self.leq.shape[0]

    @property
    def size(self) -> int:
        return self.leq.shape[0]

    def __repr__(self) -> str:
        return f"FinitePoset(size={self.size}, covers={len(cover_pairs(self))})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.leq, other.leq)

    def __hash__(self) -> int:
        return hash((self.labels, self.leq.tobytes()))

    def le(self, x: int, y: int) -> bool:
        return bool(self.leq[x, y])

    def lt(self, x: int, y: int) -> bool:
        return x != y and bool(self.leq[x, y])

    def index(self, label: str) -> int:
        return self.labels.index(label)

    @cached_property
    def strict(self) -> np.ndarray:
        lt = self.leq.copy()
        np.fill_diagonal(lt, False)
        lt.flags.writeable = False
        return lt

    @cached_property
    def cover_matrix(self) -> np.ndarray:
        """``cover[x, y]`` iff ``y`` covers ``x``."""
        lt = self.strict
        cov = lt & ~_bool_product(lt, lt)
        cov.flags.writeable = False
        return cov

    @cached_property
    def upper_covers(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(y) for y in np.flatnonzero(row)) for row in self.cover_matrix)

    @cached_property
    def lower_covers(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(x) for x in np.flatnonzero(col)) for col in self.cover_matrix.T)

    @cached_property
    def linear_extension(self) -> tuple[int, ...]:
        """Topological order of the elements, smallest index first among ties."""
        lt = self.strict
        pending = lt.sum(axis=0).astype(np.int64)
        heap = [int(x) for x in np.flatnonzero(pending == 0)]
        heapq.heapify(heap)
        order = []
        while heap:
            x = heapq.heappop(heap)
            order.append(x)
            for y in np.flatnonzero(lt[x]):
                pending[y] -= 1
                if pending[y] == 0:
                    heapq.heappush(heap, int(y))
        return tuple(order)


def from_cover_relations(labels: Sequence[str], covers: Iterable[tuple[int, int]]) -> FinitePoset:
    """Build a poset from Hasse pairs ``(x, y)`` meaning ``x < y``.

    The pairs need not be irredundant; the result is their reflexive-transitive
    closure.  Raises :class:`CycleDetected` when the pairs contain a directed cycle.
    """
    m = len(labels)
    succ: list[list[int]] = [[] for _ in range(m)]
    graph: dict[int, set[int]] = {x: set() for x in range(m)}
    for x, y in covers:
        x, y = int(x), int(y)
        if not (0 <= x < m and 0 <= y < m):
            raise IndexError(f"cover pair ({x}, {y}) references an element outside 0..{m - 1}")
        if x == y:
            raise CycleDetected(f"self-loop at element {x}")
        succ[x].append(y)
        graph[y].add(x)
    try:
        order = list(graphlib.TopologicalSorter(graph).static_order())
    except graphlib.CycleError as exc:
        raise CycleDetected(f"cover relation has a directed cycle through {exc.args[1]}") from None
    reach = np.eye(m, dtype=bool)
    for x in reversed(order):
        for y in succ[x]:
            reach[x] |= reach[y]
    return FinitePoset(labels, reach, check=False)


def chain(m: int, labels: Sequence[str] | None = None) -> FinitePoset:
    """The total order ``0 < 1 < ... < m-1``."""
    labels = labels if labels is not None else [str(i) for i in range(m)]
    return FinitePoset(labels, np.triu(np.ones((m, m), dtype=bool)), check=False)


def antichain(m: int, labels: Sequence[str] | None = None) -> FinitePoset:
    labels = labels if labels is not None else [str(i) for i in range(m)]
    return FinitePoset(labels, np.eye(m, dtype=bool), check=False)


def cover_pairs(P: FinitePoset) -> list[tuple[int, int]]:
    """All pairs ``(x, y)`` such that ``y`` covers ``x``, sorted."""
    return [(int(x), int(y)) for x, y in np.argwhere(P.cover_matrix)]


def dual(P: FinitePoset) -> FinitePoset:
    return FinitePoset(P.labels, P.leq.T, check=False)


def induced_subposet(P: FinitePoset, elements: Iterable[int]) -> tuple[FinitePoset, list[int]]:
    """Restrict ``P`` to ``elements`` (kept in increasing index order).

    Returns the subposet and the list mapping its indices back into ``P``.
    """
    index = sorted({int(x) for x in elements})
    sub = P.leq[np.ix_(index, index)]
    return FinitePoset([P.labels[i] for i in index], sub, check=False), index


def interval(P: FinitePoset, x: int, y: int, open: bool = False) -> tuple[FinitePoset, list[int]]:
    """Closed interval ``[x, y]`` or, with ``open=True``, the open interval ``(x, y)``."""
    if not P.leq[x, y]:
        raise NotComparable(f"{P.labels[x]} is not <= {P.labels[y]}")
    between = P.leq[x] & P.leq[:, y]
    if open:
        between = between.copy()
        between[[x, y]] = False
    return induced_subposet(P, np.flatnonzero(between))


def up_set(P: FinitePoset, X: Iterable[int]) -> frozenset[int]:
    X = list(X)
    if not X:
        return frozenset()
    return frozenset(int(v) for v in np.flatnonzero(P.leq[X].any(axis=0)))


def down_set(P: FinitePoset, X: Iterable[int]) -> frozenset[int]:
    X = list(X)
    if not X:
        return frozenset()
    return frozenset(int(v) for v in np.flatnonzero(P.leq[:, X].any(axis=1)))


def minimal_elements(P: FinitePoset, subset: Iterable[int]) -> list[int]:
    subset = sorted(set(subset))
    return [x for x in subset if not any(P.lt(z, x) for z in subset)]


def maximal_elements(P: FinitePoset, subset: Iterable[int]) -> list[int]:
    subset = sorted(set(subset))
    return [x for x in subset if not any(P.lt(x, z) for z in subset)]


def least_upper_bound(P: FinitePoset, x: int, y: int) -> int | None:
    """Brute-force join: the upper bound lying below every other upper bound."""
    bounds = np.flatnonzero(P.leq[x] & P.leq[y])
    for u in bounds:
        if P.leq[u, bounds].all():
            return int(u)
    return None


def greatest_lower_bound(P: FinitePoset, x: int, y: int) -> int | None:
    bounds = np.flatnonzero(P.leq[:, x] & P.leq[:, y])
    for u in bounds:
        if P.leq[bounds, u].all():
            return int(u)
    return None


def connected_components(P: FinitePoset) -> list[list[int]]:
    comparable = P.leq | P.leq.T
    seen = np.zeros(P.size, dtype=bool)
    components = []
    for start in range(P.size):
        if seen[start]:
            continue
        members = np.zeros(P.size, dtype=bool)
        members[start] = True
        frontier = members.copy()
        while frontier.any():
            reached = comparable[frontier].any(axis=0) & ~members
            members |= reached
            frontier = reached
        seen |= members
        components.append([int(v) for v in np.flatnonzero(members)])
    return components


# -- grading -----------------------------------------------------------------


@dataclass(frozen=True)
class RankFunction:
    values: dict[int, int]

    def __getitem__(self, x: int) -> int:
        return self.values[x]


@dataclass(frozen=True)
class NotGraded:
    """Witness that a poset is not graded.

    ``lengths`` holds two different lengths of saturated chains between
    ``x`` and ``y`` (longest first), or for a rank conflict along a cycle of the
    Hasse diagram the cover length 1 and the rank difference forced elsewhere.
    """

    x: int
    y: int
    lengths: tuple[int, int]
    reason: str = "maximal chains of different lengths"

    def __bool__(self) -> bool:
        return False


def chain_length_bounds(P: FinitePoset) -> tuple[np.ndarray, np.ndarray]:
    """Longest and shortest saturated-chain lengths for every pair ``x <= y``.

    Entries for incomparable pairs are ``-1``.
    """
    m = P.size
    longest = np.full((m, m), -1, dtype=np.int64)
    shortest = np.full((m, m), _FAR, dtype=np.int64)
    np.fill_diagonal(longest, 0)
    np.fill_diagonal(shortest, 0)
    for z in P.linear_extension:
        for w in P.lower_covers[z]:
            col = longest[:, w]
            ok = col >= 0
            longest[ok, z] = np.maximum(longest[ok, z], col[ok] + 1)
            col = shortest[:, w]
            ok = col < _FAR
            shortest[ok, z] = np.minimum(shortest[ok, z], col[ok] + 1)
    shortest[shortest == _FAR] = -1
    return longest, shortest


def grading(P: FinitePoset) -> RankFunction | NotGraded:
    """Return a rank function, or a :class:`NotGraded` witness.

    Ranks are normalised so that the smallest rank in each connected
    component is 0 (every minimal element gets 0 when they all share a rank).
    """
    longest, shortest = chain_length_bounds(P)
    bad = (longest != shortest) & P.leq
    if bad.any():
        ext = P.linear_extension
        for x in ext:
            for y in ext:
                if bad[x, y]:
                    return NotGraded(x, y, (int(longest[x, y]), int(shortest[x, y])))
    rank: dict[int, int] = {}
    for component in connected_components(P):
        start = component[0]
        local = {start: 0}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            steps = [(y, 1) for y in P.upper_covers[x]] + [(y, -1) for y in P.lower_covers[x]]
            for y, step in steps:
                if y not in local:
                    local[y] = local[x] + step
                    queue.append(y)
                elif local[y] != local[x] + step:
                    lo, hi = (x, y) if step == 1 else (y, x)
                    return NotGraded(lo, hi, (1, local[hi] - local[lo]), reason="rank conflict around a Hasse cycle")
        base = min(local.values())
        rank.update({x: r - base for x, r in local.items()})
    return RankFunction(rank)


def height(P: FinitePoset) -> list[int]:
    """Length of the longest chain ending at each element."""
    longest, _ = chain_length_bounds(P)
    return [int(v) for v in longest.max(axis=0)] if P.size else []


# -- isomorphism ---------------------------------------------------------------


def _refined_colors(posets: Sequence[FinitePoset]) -> list[list[int]]:
    """Jointly refined vertex colours; equal colours are necessary for any isomorphism."""
    colors = []
    for P in posets:
        down = P.leq.sum(axis=0)
        up = P.leq.sum(axis=1)
        colors.append([(int(down[x]), int(up[x]), len(P.lower_covers[x]), len(P.upper_covers[x])) for x in range(P.size)])
    classes = -1
    while True:
        palette: dict = {}
        for cs in colors:
            for c in cs:
                palette.setdefault(c, len(palette))
        coded = [[palette[c] for c in cs] for cs in colors]
        if len(palette) == classes:
            return coded
        classes = len(palette)
        colors = [
            [
                (cs[x], tuple(sorted(cs[w] for w in P.lower_covers[x])), tuple(sorted(cs[w] for w in P.upper_covers[x])))
                for x in range(P.size)
            ]
            for P, cs in zip(posets, coded)
        ]


def find_isomorphism(P: FinitePoset, Q: FinitePoset) -> list[int] | None:
    """Search for an order-isomorphism ``f`` with ``f[x]`` the image of ``x``.

    Backtracking over colour-compatible assignments, extending along the
    Hasse diagram.  Exponential in the worst case; intended for desk scale.
    """
    m = P.size
    if m != Q.size or P.leq.sum() != Q.leq.sum():
        return None
    if m == 0:
        return []
    cp, cq = _refined_colors([P, Q])
    if sorted(cp) != sorted(cq):
        return None

    # Visit order: BFS over the undirected Hasse diagram, rarest colour first.
    freq: dict[int, int] = {}
    for c in cp:
        freq[c] = freq.get(c, 0) + 1
    order: list[int] = []
    anchor: list[tuple[int, int] | None] = []
    seen = [False] * m
    for start in sorted(range(m), key=lambda x: (freq[cp[x]], x)):
        if seen[start]:
            continue
        seen[start] = True
        queue = deque([(start, None)])
        while queue:
            x, via = queue.popleft()
            order.append(x)
            anchor.append(via)
            for y in P.upper_covers[x]:
                if not seen[y]:
                    seen[y] = True
                    queue.append((y, (x, +1)))
            for y in P.lower_covers[x]:
                if not seen[y]:
                    seen[y] = True
                    queue.append((y, (x, -1)))

    by_color: dict[int, list[int]] = {}
    for y in range(m):
        by_color.setdefault(cq[y], []).append(y)

    image = [-1] * m
    used = [False] * m
    placed_p = np.array(order, dtype=np.int64)
    placed_q = np.zeros(m, dtype=np.int64)

    def candidates(i: int):
        x = order[i]
        via = anchor[i]
        if via is None:
            pool = by_color[cp[x]]
        else:
            w, direction = via
            pool = Q.upper_covers[image[w]] if direction > 0 else Q.lower_covers[image[w]]
        for y in pool:
            if used[y] or cq[y] != cp[x]:
                continue
            ps, qs = placed_p[:i], placed_q[:i]
            if np.array_equal(P.leq[x, ps], Q.leq[y, qs]) and np.array_equal(P.leq[ps, x], Q.leq[qs, y]):
                yield y

    pending = [candidates(0)]
    i = 0
    while True:
        x = order[i]
        if image[x] >= 0:
            used[image[x]] = False
            image[x] = -1
        y = next(pending[i], None)
        if y is None:
            pending.pop()
            i -= 1
            if i < 0:
                return None
            continue
        image[x] = y
        used[y] = True
        placed_q[i] = y
        i += 1
        if i == m:
            return image
        pending.append(candidates(i))


def verify_isomorphism(P: FinitePoset, Q: FinitePoset, f: Sequence[int]) -> bool:
    """True iff ``f`` is a bijection with ``x <= y  <=>  f[x] <= f[y]``."""
    if P.size != Q.size or len(f) != P.size or sorted(f) != list(range(Q.size)):
        return False
    f = np.asarray(f, dtype=np.int64)
    return bool(np.array_equal(P.leq, Q.leq[np.ix_(f, f)]))

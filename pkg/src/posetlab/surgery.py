"""Connect-sums of two posets glued along a common induced subposet.

Given order-embeddings ``i0: Q -> P0`` and ``i1: Q -> P1`` the connect-sum
lives on the disjoint union ``P0 ⊔ P1`` (P1 indices shifted by ``|P0|``)
with ``x < y`` for ``x in P0``, ``y in P1`` iff some ``q`` has
``x <= i0(q)`` in ``P0`` and ``i1(q) <= y`` in ``P1``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from .errors import MConditionFailed, NotAnEmbedding
from .incidence import MobiusTable, checked_matmul, mobius_by_inversion
from .poset import FinitePoset, from_cover_relations, induced_subposet, maximal_elements, minimal_elements


@dataclass(frozen=True)
class EmbeddedSubposet:
    """A poset ``Q`` with maps ``i0[q]`` into ``P0`` and ``i1[q]`` into ``P1``."""

    Q: FinitePoset
    i0: tuple[int, ...]
    i1: tuple[int, ...]

    def __init__(self, Q: FinitePoset, i0: Sequence[int], i1: Sequence[int]):
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "i0", tuple(int(v) for v in i0))
        object.__setattr__(self, "i1", tuple(int(v) for v in i1))

    def validate(self, P0: FinitePoset, P1: FinitePoset) -> None:
        for name, P, f in (("i0", P0, self.i0), ("i1", P1, self.i1)):
            check_embedding(self.Q, P, f, name)

    @property
    def j0(self) -> dict[int, int]:
        """Transition ``Q1 -> P0``, ``i0 ∘ i1^{-1}``."""
        return dict(zip(self.i1, self.i0))

    @property
    def j1(self) -> dict[int, int]:
        """Transition ``Q0 -> P1``, ``i1 ∘ i0^{-1}``."""
        return dict(zip(self.i0, self.i1))


def check_embedding(Q: FinitePoset, P: FinitePoset, f: Sequence[int], name: str = "map") -> None:
    """Raise :class:`NotAnEmbedding` unless ``f`` is an injective order-embedding ``Q -> P``."""
    if len(f) != Q.size:
        raise NotAnEmbedding(f"{name} has {len(f)} images for {Q.size} elements")
    if any(not 0 <= v < P.size for v in f):
        raise NotAnEmbedding(f"{name} maps outside the target poset")
    if len(set(f)) != len(f):
        raise NotAnEmbedding(f"{name} is not injective")
    idx = np.asarray(f, dtype=np.int64)
    mismatch = Q.leq != P.leq[np.ix_(idx, idx)]
    if mismatch.any():
        q, r = (int(v) for v in np.argwhere(mismatch)[0])
        raise NotAnEmbedding(f"{name} does not reflect the order on the pair ({Q.labels[q]}, {Q.labels[r]})")


def bridge_matrix(P0: FinitePoset, P1: FinitePoset, E: EmbeddedSubposet) -> np.ndarray:
    """``B[x, y]`` iff some ``q`` has ``x <= i0(q)`` and ``i1(q) <= y``."""
    if not E.i0:
        return np.zeros((P0.size, P1.size), dtype=bool)
    below = P0.leq[:, list(E.i0)].astype(np.float64)
    above = P1.leq[list(E.i1), :].astype(np.float64)
    return (below @ above) > 0.5


def connect_sum(P0: FinitePoset, P1: FinitePoset, E: EmbeddedSubposet) -> tuple[FinitePoset, np.ndarray]:
    """The glued poset and its bridge matrix."""
    E.validate(P0, P1)
    B = bridge_matrix(P0, P1, E)
    m0, m1 = P0.size, P1.size
    leq = np.zeros((m0 + m1, m0 + m1), dtype=bool)
    leq[:m0, :m0] = P0.leq
    leq[m0:, m0:] = P1.leq
    leq[:m0, m0:] = B
    labels = [f"0:{label}" for label in P0.labels] + [f"1:{label}" for label in P1.labels]
    # Transitivity across the bridge is re-verified by the constructor.
    return FinitePoset(labels, leq), B


def _assemble(P: FinitePoset, mu0: MobiusTable, mu1: MobiusTable, cross: np.ndarray) -> MobiusTable:
    m0 = mu0.values.shape[0]
    values = np.zeros((P.size, P.size), dtype=np.int64)
    values[:m0, :m0] = mu0.values
    values[m0:, m0:] = mu1.values
    values[:m0, m0:] = cross
    return MobiusTable(P, values)


def mobius_conn_sum(P0: FinitePoset, P1: FinitePoset, E: EmbeddedSubposet) -> MobiusTable:
    """Möbius function of the connect-sum via the block inverse ``-mu0 B mu1``."""
    P, B = connect_sum(P0, P1, E)
    mu0 = mobius_by_inversion(P0)
    mu1 = mobius_by_inversion(P1)
    cross = -checked_matmul(checked_matmul(mu0.values, B.astype(np.int64)), mu1.values)
    return _assemble(P, mu0, mu1, cross)


@dataclass(frozen=True)
class MFailure:
    """``element`` whose candidate set has several extremal members."""

    element: int
    candidates: tuple[int, ...]

    def __bool__(self) -> bool:
        return False


def check_M_conditions(
    P: FinitePoset, Qside: Iterable[int], direction: Literal["plus", "minus"]
) -> dict[int, int] | MFailure:
    """Closest-member map onto ``Qside``.

    ``plus``: ``x -> min(Qside ∩ P^{>=x})``; ``minus``: ``y -> max(Qside ∩ P^{<=y})``.
    The map is defined exactly where the candidate set is nonempty.  If some
    candidate set has two or more minimal (maximal) members the first such
    element is returned as an :class:`MFailure`.
    """
    if direction not in ("plus", "minus"):
        raise ValueError(f"direction must be 'plus' or 'minus', not {direction!r}")
    side = np.zeros(P.size, dtype=bool)
    side[list(Qside)] = True
    result: dict[int, int] = {}
    for x in range(P.size):
        if direction == "plus":
            cands = np.flatnonzero(side & P.leq[x])
            extremal = minimal_elements(P, cands)
        else:
            cands = np.flatnonzero(side & P.leq[:, x])
            extremal = maximal_elements(P, cands)
        if len(extremal) > 1:
            return MFailure(x, tuple(extremal))
        if extremal:
            result[x] = extremal[0]
    return result


def mobius_cross_closed_form(P0: FinitePoset, P1: FinitePoset, E: EmbeddedSubposet) -> MobiusTable:
    """Möbius function of the connect-sum when the gluing sets are well placed.

    Requires the ``plus`` condition for ``i0(Q)`` in ``P0`` and the ``minus``
    condition for ``i1(Q)`` in ``P1``.  Cross values are then
    ``-mu_Q(q, q')`` at ``(i0(q), i1(q'))`` and zero elsewhere.
    """
    P, _ = connect_sum(P0, P1, E)
    for name, poset, side, direction in (("P0", P0, E.i0, "plus"), ("P1", P1, E.i1, "minus")):
        outcome = check_M_conditions(poset, side, direction)
        if isinstance(outcome, MFailure):
            raise MConditionFailed(
                f"{direction} condition fails in {name} at {poset.labels[outcome.element]}",
                outcome.element,
                outcome.candidates,
            )
    mu0 = mobius_by_inversion(P0)
    mu1 = mobius_by_inversion(P1)
    muQ = mobius_by_inversion(E.Q)
    cross = np.zeros((P0.size, P1.size), dtype=np.int64)
    i0 = np.asarray(E.i0, dtype=np.int64)
    i1 = np.asarray(E.i1, dtype=np.int64)
    if i0.size:
        cross[np.ix_(i0, i1)] = -muQ.values
    return _assemble(P, mu0, mu1, cross)


def satisfies_M(P0: FinitePoset, P1: FinitePoset, E: EmbeddedSubposet) -> bool:
    return not isinstance(check_M_conditions(P0, E.i0, "plus"), MFailure) and not isinstance(
        check_M_conditions(P1, E.i1, "minus"), MFailure
    )


# -- seeded random instances --------------------------------------------------


def random_poset(rng: random.Random, m: int, p: float = 0.3, prefix: str = "v") -> FinitePoset:
    """Transitive closure of a random DAG with edges ``i -> j`` (``i < j``) kept with probability ``p``."""
    edges = [(i, j) for i in range(m) for j in range(i + 1, m) if rng.random() < p]
    return from_cover_relations([f"{prefix}{i}" for i in range(m)], edges)


def random_embedding(rng: random.Random, Q: FinitePoset, P: FinitePoset) -> list[int] | None:
    """A uniformly-shuffled backtracking search for an order-embedding ``Q -> P``."""
    k = Q.size
    image: list[int] = []

    def extend(i: int) -> bool:
        if i == k:
            return True
        targets = [v for v in range(P.size) if v not in image]
        rng.shuffle(targets)
        for v in targets:
            if all(Q.leq[q, i] == P.leq[image[q], v] and Q.leq[i, q] == P.leq[v, image[q]] for q in range(i)):
                image.append(v)
                if extend(i + 1):
                    return True
                image.pop()
        return False

    return image if extend(0) else None


def random_surgery_instance(
    rng: random.Random, max_size: int = 12, max_glue: int = 4, p: float = 0.3
) -> tuple[FinitePoset, FinitePoset, EmbeddedSubposet]:
    """Random ``(P0, P1, E)``: ``Q`` is induced on a random subset of ``P0`` and embedded into ``P1``."""
    while True:
        P0 = random_poset(rng, rng.randint(1, max_size), p, prefix="a")
        P1 = random_poset(rng, rng.randint(1, max_size), p, prefix="b")
        k = rng.randint(0, min(max_glue, P0.size, P1.size))
        Q, i0 = induced_subposet(P0, rng.sample(range(P0.size), k))
        Q = FinitePoset([f"q{i}" for i in range(Q.size)], Q.leq, check=False)
        i1 = random_embedding(rng, Q, P1)
        if i1 is not None:
            return P0, P1, EmbeddedSubposet(Q, i0, i1)

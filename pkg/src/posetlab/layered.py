"""Layer structures, doubles of layered posets, and the (M) property.

A layer structure is an increasing sign map into ``{-1, +1}`` together with
an order-isomorphism ``lift`` from the lower layer onto the upper layer with
``x < lift(x)``.  The double is the connect-sum of two copies of the poset,
glued along upper layer -> lower layer via the drop map.  Element ``(x, -1)``
of the double has index ``x`` and ``(x, +1)`` has index ``x + m``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import LayerInvalid, MConditionFailed
from .incidence import MobiusTable, mobius_by_inversion
from .poset import (
    FinitePoset,
    greatest_lower_bound,
    induced_subposet,
    least_upper_bound,
    maximal_elements,
    minimal_elements,
)
from .surgery import EmbeddedSubposet, MFailure, connect_sum


@dataclass(frozen=True)
class LayerStructure:
    sign: tuple[int, ...]
    lift: Mapping[int, int]

    def __init__(self, sign: Sequence[int], lift: Mapping[int, int]):
        object.__setattr__(self, "sign", tuple(int(s) for s in sign))
        object.__setattr__(self, "lift", {int(k): int(v) for k, v in lift.items()})

    @property
    def drop(self) -> dict[int, int]:
        return {v: k for k, v in self.lift.items()}

    @property
    def upper(self) -> list[int]:
        return [x for x, s in enumerate(self.sign) if s == 1]

    @property
    def lower(self) -> list[int]:
        return [x for x, s in enumerate(self.sign) if s == -1]


@dataclass(frozen=True)
class LayerViolation:
    rule: str
    elements: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.rule} at {self.elements}"


def validate_layer(P: FinitePoset, L: LayerStructure, lattice: bool = False) -> LayerViolation | None:
    """First violated axiom of ``L`` on ``P``, or ``None``.

    With ``lattice=True`` also require both layers to be closed under joins and
    meets of ``P`` and ``lift`` to preserve them.
    """
    if len(L.sign) != P.size or any(s not in (-1, 1) for s in L.sign):
        return LayerViolation("sign must assign -1 or +1 to every element", ())
    for x, y in np.argwhere(P.leq):
        if L.sign[x] > L.sign[y]:
            return LayerViolation("sign is not increasing", (int(x), int(y)))
    lower, upper = L.lower, L.upper
    if sorted(L.lift) != lower or sorted(L.lift.values()) != upper:
        return LayerViolation("lift is not a bijection from the lower to the upper layer", ())
    for x in lower:
        if not P.lt(x, L.lift[x]):
            return LayerViolation("x < lift(x) fails", (x, L.lift[x]))
    for x in lower:
        for y in lower:
            if P.le(x, y) != P.le(L.lift[x], L.lift[y]):
                return LayerViolation("lift is not an order-isomorphism", (x, y))
    if lattice:
        for layer in (lower, upper):
            for x in layer:
                for y in layer:
                    for op in (least_upper_bound, greatest_lower_bound):
                        z = op(P, x, y)
                        if z is None or L.sign[z] != L.sign[x]:
                            return LayerViolation(f"layer not closed under {op.__name__}", (x, y))
        for x in lower:
            for y in lower:
                for op in (least_upper_bound, greatest_lower_bound):
                    if L.lift[op(P, x, y)] != op(P, L.lift[x], L.lift[y]):
                        return LayerViolation(f"lift does not preserve {op.__name__}", (x, y))
    return None


def double(P: FinitePoset, L: LayerStructure) -> tuple[FinitePoset, LayerStructure]:
    """The double of ``P`` and its canonical layer (sign = copy, lift = ``(x,-1) -> (x,+1)``)."""
    problem = validate_layer(P, L)
    if problem is not None:
        raise LayerInvalid(str(problem))
    m = P.size
    Q, upper = induced_subposet(P, L.upper)
    drop = L.drop
    glued, _ = connect_sum(P, P, EmbeddedSubposet(Q, upper, [drop[z] for z in upper]))
    labels = [f"({label},-1)" for label in P.labels] + [f"({label},+1)" for label in P.labels]
    D = FinitePoset(labels, glued.leq, check=False)
    canonical = LayerStructure([-1] * m + [1] * m, {x: x + m for x in range(m)})
    return D, canonical


@dataclass(frozen=True)
class PropertyMMaps:
    """``m_plus[x] = min (P+)^{>=x}`` and ``m_minus[x] = max (P-)^{<=x}``."""

    m_plus: tuple[int, ...]
    m_minus: tuple[int, ...]


def property_M_maps(P: FinitePoset, L: LayerStructure) -> PropertyMMaps | MFailure:
    """Both associated maps, or the first element where one is empty or not unique."""
    sign = np.asarray(L.sign)
    plus, minus = [], []
    for x in range(P.size):
        ups = minimal_elements(P, np.flatnonzero((sign == 1) & P.leq[x]))
        downs = maximal_elements(P, np.flatnonzero((sign == -1) & P.leq[:, x]))
        if len(ups) != 1:
            return MFailure(x, tuple(ups))
        if len(downs) != 1:
            return MFailure(x, tuple(downs))
        plus.append(ups[0])
        minus.append(downs[0])
    return PropertyMMaps(tuple(plus), tuple(minus))


def double_property_M(P: FinitePoset, L: LayerStructure, M: PropertyMMaps) -> PropertyMMaps:
    """Associated maps of the double, written directly from those of ``P``."""
    m = P.size
    drop = L.drop
    plus = [drop[M.m_plus[x]] + m for x in range(m)] + [x + m for x in range(m)]
    minus = list(range(m)) + [L.lift[M.m_minus[x]] for x in range(m)]
    return PropertyMMaps(tuple(plus), tuple(minus))


def mobius_double(
    P: FinitePoset,
    L: LayerStructure,
    mu: MobiusTable | None = None,
    mu_plus: MobiusTable | None = None,
) -> MobiusTable:
    """Möbius function of the double from ``mu`` of ``P`` and ``mu_plus`` of its upper layer.

    ``mu_plus`` is indexed by the induced upper-layer subposet (upper
    elements in increasing index order).  Same-copy entries repeat ``mu``;
    ``((x0,-1), (x1,+1))`` with ``x0`` upper and ``x1`` lower gives
    ``-mu_plus(x0, lift(x1))``; everything else is 0.
    """
    if isinstance(property_M_maps(P, L), MFailure):
        raise MConditionFailed("layer structure does not satisfy property (M)")
    D, _ = double(P, L)
    m = P.size
    upper = L.upper
    if mu is None:
        mu = mobius_by_inversion(P)
    if mu_plus is None:
        mu_plus = mobius_by_inversion(induced_subposet(P, upper)[0])
    pos = {x: i for i, x in enumerate(upper)}
    values = np.zeros((2 * m, 2 * m), dtype=np.int64)
    values[:m, :m] = mu.values
    values[m:, m:] = mu.values
    for x0 in upper:
        for x1, lifted in L.lift.items():
            values[x0, m + x1] = -mu_plus[pos[x0], pos[lifted]]
    return MobiusTable(D, values)

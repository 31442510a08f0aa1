"""The Bruhat-like lattice on subsets of ``{1, ..., n}``.

``S <= T`` iff ``#(S ∩ [k, n]) <= #(T ∩ [k, n])`` for every ``k``;
equivalently ``S`` is reachable from ``T`` by elementary left slides of
beads on a rod (move a bead one step left into an empty slot, or slide the
bead at position 1 off the rod).

Elements are :class:`LnElement` values: a bitmask (bit ``i-1`` set iff
``i`` is in the subset) plus the ambient size ``n``.  Closed forms work for
``n <= 63``; :func:`build_ln` materialises the explicit poset up to a
configurable cap for brute-force cross-checks, indexing each subset by its
bitmask.

>>> join(LnElement.parse(12, "1,4,6,7,11"), LnElement.parse(12, "2,5,9,10"))
LnElement(12, '1,4,6,9,11')
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import CapExceeded, NotComparable, NotElementary, SizeMismatch
from .layered import LayerStructure
from .poset import FinitePoset

MAX_N = 63
DEFAULT_CAP = 11


@dataclass(frozen=True, order=True)
class LnElement:
    n: int
    bits: int

    def __post_init__(self):
        if not 0 <= self.n <= MAX_N:
            raise ValueError(f"n must lie in 0..{MAX_N}, got {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bitmask {self.bits:#x} is not a subset of 1..{self.n}")

    @classmethod
    def of(cls, n: int, items: Iterable[int] = ()) -> LnElement:
        bits = 0
        for i in items:
            if not 1 <= i <= n:
                raise ValueError(f"{i} is not in 1..{n}")
            bits |= 1 << (i - 1)
        return cls(n, bits)

    @classmethod
    def parse(cls, n: int, text: str) -> LnElement:
        """Read ``"1,4,6"``; ``"{}"`` (or an empty string) is the empty set."""
        text = text.strip().strip("{}").strip()
        return cls.of(n, [int(t) for t in text.split(",")] if text else [])

    @classmethod
    def from_signs(cls, signs: Iterable[int]) -> LnElement:
        signs = list(signs)
        return cls.of(len(signs), [i for i, s in enumerate(signs, 1) if s == 1])

    def items(self) -> list[int]:
        return [i for i in range(1, self.n + 1) if self.bits >> (i - 1) & 1]

    def signs(self) -> tuple[int, ...]:
        return tuple(1 if self.bits >> (i - 1) & 1 else -1 for i in range(1, self.n + 1))

    def __contains__(self, i: int) -> bool:
        return 1 <= i <= self.n and bool(self.bits >> (i - 1) & 1)

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __iter__(self) -> Iterator[int]:
        return iter(self.items())

    def __str__(self) -> str:
        return ",".join(map(str, self.items())) or "{}"

    def __repr__(self) -> str:
        return f"LnElement({self.n}, {str(self)!r})"


def _same_n(*elements: LnElement) -> int:
    n = elements[0].n
    if any(e.n != n for e in elements):
        raise SizeMismatch(f"elements live in different ambient sizes {[e.n for e in elements]}")
    return n


def _mask(n: int) -> int:
    return (1 << n) - 1


def _suffix_counts(bits: int, n: int) -> list[int]:
    """``out[k-1] = #(S ∩ [k, n])`` for ``k = 1..n``."""
    out = [0] * n
    acc = 0
    for k in range(n, 0, -1):
        acc += bits >> (k - 1) & 1
        out[k - 1] = acc
    return out


# -- order ---------------------------------------------------------------------


def _leq_bits(s: int, t: int, n: int) -> bool:
    diff = 0
    for k in range(n - 1, -1, -1):
        diff += (t >> k & 1) - (s >> k & 1)
        if diff < 0:
            return False
    return True


def leq(S: LnElement, T: LnElement) -> bool:
    """The counting test, one right-to-left pass."""
    return _leq_bits(S.bits, T.bits, _same_n(S, T))


def elementary_left_slides(T: LnElement) -> list[LnElement]:
    """Every configuration one move below ``T``, ordered by the moved bead's position."""
    out = []
    for t in T.items():
        if t == 1:
            out.append(LnElement(T.n, T.bits & ~1))
        elif t - 1 not in T:
            out.append(LnElement(T.n, T.bits & ~(1 << (t - 1)) | (1 << (t - 2))))
    return out


def leq_by_reachability(S: LnElement, T: LnElement) -> bool:
    """Breadth-first search over elementary left slides starting from ``T``."""
    _same_n(S, T)
    target = rho(S)
    seen = {T}
    queue = deque([T])
    while queue:
        U = queue.popleft()
        if U == S:
            return True
        for V in elementary_left_slides(U):
            if V not in seen and rho(V) >= target:
                seen.add(V)
                queue.append(V)
    return False


def rho(S: LnElement) -> int:
    return sum(S.items())


@dataclass(frozen=True)
class DeltaProfile:
    """``values[k-1] = #(T ∩ [k, n]) - #(S ∩ [k, n])``."""

    values: tuple[int, ...]

    def __getitem__(self, k: int) -> int:
        return self.values[k - 1]

    @property
    def weight(self) -> int:
        return sum(self.values)


def delta_profile(S: LnElement, T: LnElement) -> DeltaProfile:
    n = _same_n(S, T)
    s, t = _suffix_counts(S.bits, n), _suffix_counts(T.bits, n)
    return DeltaProfile(tuple(b - a for a, b in zip(s, t)))


def weight(S: LnElement, T: LnElement) -> int:
    return delta_profile(S, T).weight


def is_elementary(S: LnElement, T: LnElement) -> bool:
    """Profile of 0's and 1's with no two consecutive 1's."""
    d = delta_profile(S, T).values
    return all(v in (0, 1) for v in d) and all(a * b == 0 for a, b in zip(d, d[1:]))


@dataclass(frozen=True)
class ElementaryDecomposition:
    """Bead picture of an elementary pair ``(S, T)``.

    A bead of ``T`` at ``nu + 1`` slides to ``nu`` in ``S`` for each ``nu``
    in ``nus``; ``B1 \\ A1`` is ``{1}`` when the bead at 1 slides off the
    rod.  ``Cs[j]`` holds the beads shared by ``S`` and ``T`` (other than 1)
    strictly between ``nus[j-1] + 1`` and ``nus[j]``, with sentinels
    ``nus[-1] + 1 := 1`` and ``nus[k] := n + 1``.
    """

    n: int
    nus: tuple[int, ...]
    A1: frozenset[int]
    B1: frozenset[int]
    Cs: tuple[frozenset[int], ...]

    def reassemble(self) -> tuple[LnElement, LnElement]:
        common = set().union(*self.Cs)
        S = LnElement.of(self.n, set(self.A1) | common | set(self.nus))
        T = LnElement.of(self.n, set(self.B1) | common | {nu + 1 for nu in self.nus})
        return S, T

    @property
    def weight(self) -> int:
        return len(self.nus) + len(self.B1 - self.A1)


def decompose_elementary(S: LnElement, T: LnElement) -> ElementaryDecomposition | None:
    """The decomposition forced by the Δ-profile, or ``None`` when not elementary."""
    if not is_elementary(S, T):
        return None
    n = S.n
    d = delta_profile(S, T).values
    nus = tuple(k - 1 for k in range(2, n + 1) if d[k - 1] == 1)
    A1 = frozenset({1}) if 1 in S and 1 in T else frozenset()
    B1 = A1 | (frozenset({1}) if d[0] == 1 else frozenset())
    common = {i for i in S.items() if i in T and i != 1}
    bounds = [1] + [nu + 1 for nu in nus]
    tops = list(nus) + [n + 1]
    Cs = tuple(frozenset(c for c in common if lo < c < hi) for lo, hi in zip(bounds, tops))
    return ElementaryDecomposition(n, nus, A1, B1, Cs)


# -- Möbius function -----------------------------------------------------------


def mobius_closed(S: LnElement, T: LnElement) -> int:
    """``(-1)^(rho(T) - rho(S))`` on elementary pairs, else 0."""
    if not is_elementary(S, T):
        return 0
    return -1 if (rho(T) - rho(S)) % 2 else 1


_MU_SMALL = {(0, 0, 0): 1, (1, 0, 0): 1, (1, 1, 1): 1, (1, 0, 1): -1, (1, 1, 0): 0}


def mobius_recursive(S: LnElement, T: LnElement) -> int:
    """Peel off the last coordinate(s) of the sign vectors until ``n <= 1``."""
    n = _same_n(S, T)
    s, t = S.bits, T.bits
    sign = 1
    while n > 1:
        sn, tn = s >> (n - 1) & 1, t >> (n - 1) & 1
        if sn == tn:
            n -= 1
        elif sn < tn and (s >> (n - 2) & 1) and not (t >> (n - 2) & 1):
            sign = -sign
            n -= 2
        else:
            return 0
        s &= _mask(n)
        t &= _mask(n)
    return sign * _MU_SMALL[(n, s, t)]


# -- lattice structure -----------------------------------------------------------


def m_plus(S: LnElement) -> LnElement:
    """Least element above ``S`` containing ``n``: trade ``max S`` for ``n``."""
    n = S.n
    if n == 0:
        raise ValueError("m_plus needs n >= 1")
    top = 1 << (n - 1)
    if S.bits & top:
        return S
    rest = S.bits & ~(1 << (S.bits.bit_length() - 1)) if S.bits else 0
    return LnElement(n, rest | top)


def m_minus(S: LnElement) -> LnElement:
    """Greatest element below ``S`` avoiding ``n``: trade ``n`` for the largest missing value.

    When nothing below ``n`` is missing, ``n`` is simply dropped.
    """
    n = S.n
    if n == 0:
        raise ValueError("m_minus needs n >= 1")
    top = 1 << (n - 1)
    if not S.bits & top:
        return S
    missing = ~S.bits & _mask(n - 1)
    gain = 1 << (missing.bit_length() - 1) if missing else 0
    return LnElement(n, (S.bits & ~top) | gain)


def sigma(S: LnElement) -> LnElement:
    """Complementation, the self-duality ``S -> {1..n} \\ S``."""
    return LnElement(S.n, ~S.bits & _mask(S.n))


def _join_bits(s: int, t: int, n: int) -> int:
    out = 0
    while n > 0:
        top = 1 << (n - 1)
        if s & top > t & top:
            s, t = t, s
        if (s ^ t) & top:
            # s lacks n, t has it: route s through m_plus, then drop the last coordinate
            s = s & ~(1 << (s.bit_length() - 1)) if s else 0
            out |= top
        else:
            out |= s & top
            s &= ~top
        t &= ~top
        n -= 1
    return out


def _meet_bits(s: int, t: int, n: int) -> int:
    out = 0
    while n > 0:
        top = 1 << (n - 1)
        if s & top > t & top:
            s, t = t, s
        if (s ^ t) & top:
            # s lacks n, t has it: route t through m_minus, result lacks n
            missing = ~t & (top - 1)
            t = (t & ~top) | (1 << (missing.bit_length() - 1) if missing else 0)
        else:
            out |= s & top
            s &= ~top
            t &= ~top
        n -= 1
    return out


def join(S: LnElement, T: LnElement) -> LnElement:
    """Least upper bound by recursion on the last sign coordinate."""
    n = _same_n(S, T)
    return LnElement(n, _join_bits(S.bits, T.bits, n))


def meet(S: LnElement, T: LnElement) -> LnElement:
    """Greatest lower bound by recursion on the last sign coordinate."""
    n = _same_n(S, T)
    return LnElement(n, _meet_bits(S.bits, T.bits, n))


def join_by_maxima(S: LnElement, T: LnElement) -> LnElement:
    """``S ∨ T = (S' ∨ T') ∪ {max(max S, max T)}`` with ``X' = X \\ {max X}``."""
    n = _same_n(S, T)
    s, t, out = S.bits, T.bits, 0
    while s and t:
        hs, ht = s.bit_length() - 1, t.bit_length() - 1
        out |= 1 << max(hs, ht)
        s &= ~(1 << hs)
        t &= ~(1 << ht)
    return LnElement(n, out | s | t)


def meet_by_minima(S: LnElement, T: LnElement) -> LnElement:
    """``S ∧ T = (S' ∧ T') ∪ {min(max S, max T)}``; the meet with ∅ is ∅."""
    n = _same_n(S, T)
    s, t, out = S.bits, T.bits, 0
    while s and t:
        hs, ht = s.bit_length() - 1, t.bit_length() - 1
        out |= 1 << min(hs, ht)
        s &= ~(1 << hs)
        t &= ~(1 << ht)
    return LnElement(n, out)


# -- doubling --------------------------------------------------------------------


def natural_layer(n: int) -> LayerStructure:
    """Sign ``+1`` iff ``n`` is present, lift ``S -> S ∪ {n}``, on ``build_ln(n)`` indices."""
    top = 1 << (n - 1)
    return LayerStructure([1 if b & top else -1 for b in range(1 << n)], {b: b | top for b in range(top)})


def psi(S: LnElement, eps: int) -> LnElement:
    """``(S, -1) -> S`` and ``(S, +1) -> S ∪ {n+1}``, into the next size up."""
    if eps not in (-1, 1):
        raise ValueError("eps must be -1 or +1")
    return LnElement(S.n + 1, S.bits | ((1 << S.n) if eps == 1 else 0))


def phi(S: LnElement) -> tuple[LnElement, int]:
    """Inverse of :func:`psi`."""
    n = S.n - 1
    top = 1 << n
    return LnElement(n, S.bits & ~top), (1 if S.bits & top else -1)


# -- intervals -------------------------------------------------------------------


def _xi(i: int, j: int, m: int) -> tuple[dict[int, int], int]:
    """Boolean coordinates on ``[i, j]`` inside the first ``m`` positions."""
    while m > 0 and not j >> (m - 1) & 1:
        m -= 1  # top position unused: the interval lives in a smaller ambient size
    if m == 0:
        return {0: 0}, 0
    top = 1 << (m - 1)
    if i & top:
        sub, d = _xi(i & ~top, j & ~top, m - 1)
        return {k | top: v for k, v in sub.items()}, d
    if m == 1:
        return {0: 0, 1: 1}, 1
    below = 1 << (m - 2)
    if not i & below or j & below:
        raise NotElementary("top bead of J does not pair with a bead of I one step left")
    sub, d = _xi(i & ~below, j & ~top, m - 2)
    out = {k | below: v for k, v in sub.items()}
    out.update({k | top: v | (1 << d) for k, v in sub.items()})
    return out, d + 1


def boole_interval_iso(I: LnElement, J: LnElement, verify: bool = True) -> dict[LnElement, int]:
    """Explicit isomorphism from ``[I, J]`` onto the boolean poset ``B_d``, ``d = rho(J) - rho(I)``.

    Values are bitmasks of subsets of ``{1..d}`` (the indices of
    :func:`boolean_poset`).  Each step either discards an unused top
    position, strips a shared top bead, or splits on whether the top bead of
    ``J`` sits at its own position or one step left.
    """
    n = _same_n(I, J)
    if not leq(I, J):
        raise NotComparable(f"{I} is not <= {J}")
    if not is_elementary(I, J):
        raise NotElementary(f"({I}, {J}) is not an elementary pair")
    raw, d = _xi(I.bits, J.bits, n)
    if d != rho(J) - rho(I):
        raise AssertionError("boolean dimension does not match the rank difference")
    iso = {LnElement(n, k): v for k, v in raw.items()}
    if verify:
        keys = list(iso)
        if len(set(iso.values())) != 1 << d or any(not (leq(I, K) and leq(K, J)) for K in keys):
            raise AssertionError("boolean coordinates are not a bijection onto the interval")
        for A in keys:
            for B in keys:
                if leq(A, B) != (iso[A] & ~iso[B] == 0):
                    raise AssertionError(f"boolean coordinates do not respect the order at ({A}, {B})")
    return iso


@dataclass(frozen=True)
class JoinReducibility:
    """``parts`` witnesses reducibility; ``covered`` is the unique lower cover otherwise."""

    reducible: bool
    parts: tuple[LnElement, LnElement] | None = None
    covered: LnElement | None = None


def has_gap(S: LnElement) -> bool:
    """Some ``1 < k < n`` is missing from ``S`` with members of ``S`` on both sides."""
    items = S.items()
    return any(b - a > 1 for a, b in zip(items, items[1:]))


def is_join_reducible(S: LnElement) -> JoinReducibility:
    """Gap criterion with the explicit witnesses.

    With ``S = {s_1 < ... < s_l}`` and ``j`` the first index where
    ``s_j - s_{j-1} > 1``: ``S_0`` lowers ``s_j`` by one and
    ``S_1 = {s_j, ..., s_j + (l - j)}``.  Without a gap, ``S`` is a run
    ``{j, ..., j + l}`` whose only lower cover moves its first bead left.
    """
    items = S.items()
    n = S.n
    for idx in range(1, len(items)):
        if items[idx] - items[idx - 1] > 1:
            sj = items[idx]
            S0 = LnElement.of(n, items[:idx] + [sj - 1] + items[idx + 1:])
            S1 = LnElement.of(n, range(sj, sj + len(items) - idx))
            return JoinReducibility(True, parts=(S0, S1))
    if not items:
        return JoinReducibility(False)
    first = items[0]
    rest = items[1:]
    covered = LnElement.of(n, ([first - 1] if first > 1 else []) + rest)
    return JoinReducibility(False, covered=covered)


# -- explicit posets ---------------------------------------------------------------


def ln_label(bits: int) -> str:
    return ",".join(str(i + 1) for i in range(bits.bit_length()) if bits >> i & 1) or "{}"


def ln_leq_matrix(n: int) -> np.ndarray:
    """Dense ``leq[S, T]`` over bitmask indices by the counting test."""
    size = 1 << n
    bits = np.arange(size, dtype=np.int64)
    ok = np.ones((size, size), dtype=bool)
    for k in range(n):
        counts = np.zeros(size, dtype=np.int64)
        for i in range(k, n):
            counts += bits >> i & 1
        ok &= counts[:, None] <= counts[None, :]
    return ok


def build_ln(n: int, cap: int = DEFAULT_CAP) -> FinitePoset:
    """Explicit poset on ``2^n`` elements; index ``b`` is the subset with bitmask ``b``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > cap:
        raise CapExceeded(f"build_ln({n}) exceeds the cap of {cap}")
    return FinitePoset([ln_label(b) for b in range(1 << n)], ln_leq_matrix(n))


def boolean_poset(k: int, cap: int = DEFAULT_CAP) -> FinitePoset:
    """Subsets of ``{1..k}`` ordered by inclusion, indexed by bitmask."""
    if k > cap:
        raise CapExceeded(f"boolean_poset({k}) exceeds the cap of {cap}")
    bits = np.arange(1 << k)
    leq = (bits[:, None] & ~bits[None, :]) == 0
    return FinitePoset([ln_label(int(b)) for b in bits], leq, check=False)


def elements(n: int) -> list[LnElement]:
    return [LnElement(n, b) for b in range(1 << n)]

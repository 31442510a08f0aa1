"""Shared fixtures and naive oracles that do not touch the package internals."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import strategies as st

from posetlab import ln
from posetlab.poset import FinitePoset, from_cover_relations


# -- naive oracles -------------------------------------------------------------


def naive_ln_leq(S: frozenset, T: frozenset, n: int) -> bool:
    """Counting test straight from the definition, on Python sets."""
    return all(len([i for i in S if i >= k]) <= len([i for i in T if i >= k]) for k in range(1, n + 1))


def subsets(n: int) -> list[frozenset]:
    """All subsets of 1..n, ordered by bitmask."""
    return [frozenset(i + 1 for i in range(n) if mask >> i & 1) for mask in range(1 << n)]


def to_set(S: ln.LnElement) -> frozenset:
    return frozenset(S.items())


def naive_mobius(leq) -> dict:
    """Möbius function by the defining recursion on a plain nested-list relation."""
    m = len(leq)
    mu = {}
    for x in range(m):
        above = sorted((y for y in range(m) if leq[x][y]), key=lambda y: sum(leq[z][y] for z in range(m)))
        for y in above:
            if y == x:
                mu[x, y] = 1
            else:
                mu[x, y] = -sum(mu[x, z] for z in above if z != y and leq[z][y] and (x, z) in mu)
    return mu


def naive_chains(leq) -> list[tuple]:
    """Every nonempty chain, by filtering all subsets."""
    m = len(leq)
    out = []
    for r in range(1, m + 1):
        for combo in itertools.combinations(range(m), r):
            if all(leq[a][b] or leq[b][a] for a, b in itertools.combinations(combo, 2)):
                out.append(combo)
    return out


def naive_covers(leq) -> set:
    m = len(leq)
    return {
        (x, y)
        for x in range(m)
        for y in range(m)
        if x != y and leq[x][y] and not any(z not in (x, y) and leq[x][z] and leq[z][y] for z in range(m))
    }


@lru_cache(maxsize=None)
def ln_poset(n: int) -> FinitePoset:
    return ln.build_ln(n)


def lnel(n: int, text: str) -> ln.LnElement:
    return ln.LnElement.parse(n, text)


# -- hypothesis strategies -----------------------------------------------------


@st.composite
def posets(draw, max_size: int = 8):
    m = draw(st.integers(0, max_size))
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    perm = draw(st.permutations(range(m)))
    covers = [(perm[i], perm[j]) for (i, j), k in zip(pairs, keep) if k]
    return from_cover_relations([f"e{i}" for i in range(m)], covers)


def ln_pairs(max_n: int = 8):
    return st.integers(1, max_n).flatmap(
        lambda n: st.tuples(st.just(n), st.integers(0, (1 << n) - 1), st.integers(0, (1 << n) - 1))
    )


# -- fixtures ------------------------------------------------------------------


@pytest.fixture
def chain4():
    return from_cover_relations(list("abcd"), [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def diamond():
    return from_cover_relations(["0", "a", "b", "1"], [(0, 1), (0, 2), (1, 3), (2, 3)])


@pytest.fixture
def rng():
    return random.Random(0)


@pytest.fixture(scope="session")
def L3():
    return ln_poset(3)


def as_lists(P: FinitePoset) -> list[list[bool]]:
    return np.asarray(P.leq).tolist()

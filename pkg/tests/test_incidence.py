import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import as_lists, ln_poset, naive_mobius, posets
from posetlab import ln
from posetlab.errors import MobiusOverflow, NotComparable
from posetlab.incidence import (
    MobiusTable,
    checked_matmul,
    hall_check,
    integrate,
    mobius_by_inversion,
    mobius_by_recursion,
    mobius_by_series,
    mobius_invert,
    zeta_matrix,
)
from posetlab.poset import antichain, chain, dual, from_cover_relations, interval


def b3(text):
    return ln.LnElement.parse(3, text).bits


# -- zeta matrix ---------------------------------------------------------------


def test_zeta_two_chain():
    assert zeta_matrix(chain(2)).entries.tolist() == [[1, 1], [0, 1]]


def test_zeta_antichain_is_identity():
    assert np.array_equal(zeta_matrix(antichain(3)).entries, np.eye(3))


def test_zeta_l2_full_upper_triangle():
    Z = zeta_matrix(ln_poset(2))
    assert np.array_equal(Z.entries, np.triu(np.ones((4, 4))))
    assert Z.order == (0, 1, 2, 3)


@settings(max_examples=60, deadline=None)
@given(posets())
def test_zeta_is_unipotent_in_extension_order(P):
    Z = zeta_matrix(P)
    assert np.array_equal(Z.entries, np.triu(Z.entries))
    assert (Z.entries.diagonal() == 1).all()
    assert not np.triu(Z.nilpotent, 0).diagonal().any()


def test_linear_extension_breaks_ties_by_index():
    P = from_cover_relations(list("abcd"), [(3, 0), (2, 1)])
    assert P.linear_extension == (2, 1, 3, 0)


# -- Möbius function -----------------------------------------------------------


def test_chain_mobius(chain4):
    mu = mobius_by_inversion(chain4)
    want = np.eye(4, dtype=int) - np.eye(4, k=1, dtype=int)
    assert np.array_equal(mu.values, want)


def test_diamond_mobius(diamond):
    assert mobius_by_inversion(diamond)[0, 3] == 1


def test_l3_mobius_values(L3):
    mu = mobius_by_inversion(L3)
    assert mu[b3("{}"), b3("2")] == 0
    assert mu[b3("2"), b3("1,3")] == 1


def test_singleton_recursion():
    assert mobius_by_recursion(chain(1)).values.tolist() == [[1]]


def test_antichain_recursion():
    assert np.array_equal(mobius_by_recursion(antichain(2)).values, np.eye(2))


def test_l4_chain_interval():
    mu = mobius_by_recursion(ln_poset(4))
    assert mu[0, ln.LnElement.parse(4, "1,2").bits] == 0


def test_incomparable_pairs_read_zero(diamond):
    mu = mobius_by_inversion(diamond)
    assert mu[1, 2] == 0 and mu[3, 0] == 0
    assert all(diamond.leq[x, y] for x, y, _ in mu.items())


@settings(max_examples=80, deadline=None)
@given(posets())
def test_three_routes_agree_with_naive(P):
    inv = mobius_by_inversion(P)
    assert inv == mobius_by_recursion(P)
    assert inv == mobius_by_series(P)
    naive = naive_mobius(as_lists(P))
    assert {(x, y): v for x, y, v in inv.items()} == naive


@settings(max_examples=60, deadline=None)
@given(posets())
def test_both_recursions_and_duality(P):
    mu = mobius_by_inversion(P).values
    S = P.leq.astype(np.int64)
    eye = np.eye(P.size, dtype=np.int64)
    assert np.array_equal(mu @ S, eye)
    assert np.array_equal(S @ mu, eye)
    assert np.array_equal(mobius_by_inversion(dual(P)).values, mu.T)


def test_overflow_is_reported():
    big = np.full((2, 2), 2**61, dtype=np.int64)
    with pytest.raises(MobiusOverflow) as info:
        checked_matmul(big, big)
    assert info.value.pair == (0, 0)


def test_table_differences(chain4):
    a = mobius_by_inversion(chain4)
    values = a.values.copy()
    values[0, 1] = 5
    b = MobiusTable(chain4, values)
    assert a != b
    assert a.differences(b) == [(0, 1, -1, 5)]


# -- inversion of functions ------------------------------------------------------


def test_invert_zero(L3):
    assert mobius_invert(L3, [0] * 8) == [0] * 8


def test_invert_delta_top(chain4):
    # f(top) = s(top), and the element just below the top picks up mu = -1
    f = mobius_invert(chain4, [0, 0, 0, 1])
    assert f == [0, 0, -1, 1]
    assert integrate(chain4, f) == [0, 0, 0, 1]


def test_invert_random_on_l3(L3):
    rng = random.Random(0)
    s = [rng.randint(-10, 10) for _ in range(8)]
    f = mobius_invert(L3, s)
    assert [sum(f[y] for y in range(8) if L3.leq[x, y]) for x in range(8)] == s
    assert integrate(L3, f) == s


@settings(max_examples=60, deadline=None)
@given(posets(), st.data())
def test_invert_round_trip(P, data):
    s = data.draw(st.lists(st.integers(-1000, 1000), min_size=P.size, max_size=P.size))
    assert integrate(P, mobius_invert(P, s)) == s


# -- Hall's formula -------------------------------------------------------------


def test_hall_cover_pair(chain4):
    mu, chi, ok = hall_check(chain4, 1, 2)
    assert (mu, chi, ok) == (-1, 0, True)


def test_hall_antichain_interval(L3):
    assert tuple(hall_check(L3, b3("2"), b3("1,3"))) == (1, 2, True)


def test_hall_chain_interval(L3):
    assert tuple(hall_check(L3, b3("{}"), b3("1,2"))) == (0, 1, True)


@pytest.mark.parametrize("x,y", [(2, 2), (3, 1)])
def test_hall_needs_strict_pair(chain4, x, y):
    with pytest.raises(NotComparable):
        hall_check(chain4, x, y)


@settings(max_examples=40, deadline=None)
@given(posets(max_size=9))
def test_hall_on_random_posets(P):
    mu = mobius_by_inversion(P)
    for x, y in np.argwhere(P.strict):
        if interval(P, x, y, open=True)[0].size <= 20:
            assert hall_check(P, x, y, mu=mu).ok

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ln_pairs, ln_poset, naive_ln_leq, subsets, to_set
from posetlab import ln
from posetlab.errors import CapExceeded, NotComparable, NotElementary, SizeMismatch
from posetlab.incidence import mobius_by_inversion
from posetlab.layered import property_M_maps
from posetlab.poset import (
    chain,
    cover_pairs,
    dual,
    find_isomorphism,
    greatest_lower_bound,
    interval,
    least_upper_bound,
    verify_isomorphism,
)
from posetlab.surgery import MFailure


def E(n, text):
    return ln.LnElement.parse(n, text)


# -- elements ------------------------------------------------------------------


def test_parse_and_format():
    S = E(12, "1,4,6,9,11")
    assert S.items() == [1, 4, 6, 9, 11]
    assert str(S) == "1,4,6,9,11"
    assert repr(S) == "LnElement(12, '1,4,6,9,11')"
    assert str(E(3, "{}")) == "{}" and E(3, "").bits == 0


def test_signs_view_agrees():
    S = E(5, "2,3,5")
    assert S.signs() == (-1, 1, 1, -1, 1)
    assert ln.LnElement.from_signs(S.signs()) == S
    assert 3 in S and 4 not in S and len(S) == 3


@pytest.mark.parametrize("n,bits", [(2, 4), (-1, 0), (64, 0)])
def test_element_validation(n, bits):
    with pytest.raises(ValueError):
        ln.LnElement(n, bits)


def test_word_sized_elements():
    S = ln.LnElement.of(63, [1, 40, 63])
    assert ln.rho(S) == 104
    assert ln.leq(S, ln.sigma(ln.LnElement(63, 0)))


def test_size_mismatch():
    with pytest.raises(SizeMismatch):
        ln.leq(E(2, "1"), E(3, "1"))
    with pytest.raises(SizeMismatch):
        ln.delta_profile(E(2, "1"), E(3, "1"))


# -- order ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "n,s,t,want",
    [(2, "1", "2", True), (3, "2", "2", True), (3, "1,2", "3", False), (3, "3", "1,2", False), (3, "2", "1,3", True)],
)
def test_leq_examples(n, s, t, want):
    assert ln.leq(E(n, s), E(n, t)) is want
    assert ln.leq_by_reachability(E(n, s), E(n, t)) is want


def test_l2_is_four_chain():
    P = ln.build_ln(2)
    assert [P.labels[i] for i in P.linear_extension] == ["{}", "1", "2", "1,2"]
    assert np.array_equal(P.leq[np.ix_([0, 1, 2, 3], [0, 1, 2, 3])], chain(4).leq)


def test_monotone_boolean_map_not_reflected():
    for n in range(1, 6):
        for S in ln.elements(n):
            for T in ln.elements(n):
                if S.bits & ~T.bits == 0:
                    assert ln.leq(S, T)
    assert ln.leq(E(2, "1"), E(2, "2")) and not {1} <= {2}


@pytest.mark.parametrize("n", range(1, 8))
def test_three_order_definitions_agree(n):
    P = ln_poset(n)
    sets = subsets(n)
    naive = np.array([[naive_ln_leq(a, b, n) for b in sets] for a in sets])
    assert np.array_equal(P.leq, naive)
    slides = [[S.bits for S in ln.elementary_left_slides(T)] for T in ln.elements(n)]
    reach = np.eye(1 << n, dtype=bool)
    for T in sorted(range(1 << n), key=lambda b: ln.rho(ln.LnElement(n, b))):
        for S in slides[T]:
            reach[:, T] |= reach[:, S]
    assert np.array_equal(P.leq, reach)
    if n <= 5:
        for S, T in itertools.product(ln.elements(n), repeat=2):
            assert ln.leq_by_reachability(S, T) == P.leq[S.bits, T.bits]


# -- bead slides -----------------------------------------------------------------


@pytest.mark.parametrize("n,t,want", [(3, "{}", []), (3, "1,3", ["3", "1,2"]), (3, "1,2,3", ["2,3"])])
def test_slides(n, t, want):
    assert [str(S) for S in ln.elementary_left_slides(E(n, t))] == want


@pytest.mark.parametrize("n", range(1, 7))
def test_slides_are_covers(n):
    covers = set(cover_pairs(ln_poset(n)))
    from_slides = {(S.bits, T.bits) for T in ln.elements(n) for S in ln.elementary_left_slides(T)}
    assert from_slides == covers
    assert all(ln.rho(T) - ln.rho(S) == 1 for T in ln.elements(n) for S in ln.elementary_left_slides(T))


# -- rank and profiles ------------------------------------------------------------


def test_rho():
    assert ln.rho(E(5, "{}")) == 0
    assert ln.rho(E(12, "1,4,6,7,11")) == 29
    assert ln.rho(ln.sigma(E(7, "{}"))) == 28


@settings(max_examples=200)
@given(ln_pairs(12))
def test_rho_of_complement(data):
    n, s, _ = data
    S = ln.LnElement(n, s)
    assert ln.rho(S) + ln.rho(ln.sigma(S)) == n * (n + 1) // 2


def test_delta_examples():
    assert ln.delta_profile(E(3, "2"), E(3, "2")).values == (0, 0, 0)
    d = ln.delta_profile(E(3, "2"), E(3, "1,3"))
    assert d.values == (1, 0, 1) and d.weight == 2 and d[3] == 1
    assert ln.weight(E(3, "2"), E(3, "1,3")) == 2


@settings(max_examples=300)
@given(ln_pairs(12))
def test_delta_profile_properties(data):
    n, s, t = data
    S, T = ln.LnElement(n, s), ln.LnElement(n, t)
    d = ln.delta_profile(S, T).values
    assert all(a - b in (-1, 0, 1) for a, b in zip(d, d[1:] + (0,)))
    assert ln.leq(S, T) == all(v >= 0 for v in d)
    assert list(d) == [len(to_set(T) & set(range(k, n + 1))) - len(to_set(S) & set(range(k, n + 1))) for k in range(1, n + 1)]
    if ln.is_elementary(S, T):
        assert ln.weight(S, T) == ln.rho(T) - ln.rho(S)
        assert len(T) - len(S) in (0, 1)


# -- elementary pairs ------------------------------------------------------------


@pytest.mark.parametrize("n,s,t,want", [(3, "2", "2", True), (3, "{}", "2", False), (3, "2", "1,3", True)])
def test_elementary_examples(n, s, t, want):
    assert ln.is_elementary(E(n, s), E(n, t)) is want
    assert (ln.decompose_elementary(E(n, s), E(n, t)) is not None) is want


@settings(max_examples=300)
@given(ln_pairs(12))
def test_decomposition_reassembles(data):
    n, s, t = data
    S, T = ln.LnElement(n, s), ln.LnElement(n, t)
    dec = ln.decompose_elementary(S, T)
    if dec is None:
        assert not ln.is_elementary(S, T)
        return
    assert dec.reassemble() == (S, T)
    assert dec.A1 <= dec.B1 <= {1}
    assert all(b - a > 1 for a, b in zip(dec.nus, dec.nus[1:]))
    assert dec.weight == ln.rho(T) - ln.rho(S)


# -- Möbius function -------------------------------------------------------------


def test_mobius_examples():
    S = E(3, "1,2")
    assert ln.mobius_closed(S, S) == 1
    assert ln.mobius_closed(E(3, "2"), E(3, "1,3")) == 1
    assert ln.mobius_closed(E(3, "{}"), E(3, "1,2")) == 0
    assert ln.mobius_recursive(E(1, "{}"), E(1, "1")) == -1
    assert ln.mobius_recursive(E(3, "2"), E(3, "1,3")) == 1
    assert ln.mobius_recursive(E(3, "3"), E(3, "2")) == 0  # s_n > t_n


@pytest.mark.parametrize("n", range(1, 7))
def test_mobius_paths_agree(n):
    mu = mobius_by_inversion(ln_poset(n))
    for S, T in itertools.product(ln.elements(n), repeat=2):
        assert ln.mobius_closed(S, T) == ln.mobius_recursive(S, T) == mu[S.bits, T.bits]


@settings(max_examples=300)
@given(ln_pairs(20))
def test_mobius_paths_agree_large_n(data):
    n, s, t = data
    S, T = ln.LnElement(n, s), ln.LnElement(n, t)
    value = ln.mobius_closed(S, T)
    assert value == ln.mobius_recursive(S, T)
    if len(T) - len(S) not in (0, 1):
        assert value == 0


def test_mobius_self_duality_on_l4():
    for S, T in itertools.product(ln.elements(4), repeat=2):
        assert ln.mobius_closed(S, T) == ln.mobius_closed(ln.sigma(T), ln.sigma(S))


# -- lattice operations ----------------------------------------------------------


def test_worked_join_meet():
    S, T = E(12, "1,4,6,7,11"), E(12, "2,5,9,10")
    assert str(ln.join(S, T)) == "1,4,6,9,11"
    assert str(ln.meet(S, T)) == "2,5,7,10"
    assert ln.join_by_maxima(S, T) == ln.join(S, T)
    assert ln.meet_by_minima(S, T) == ln.meet(S, T)


@settings(max_examples=200)
@given(ln_pairs(12))
def test_trivial_lattice_identities(data):
    n, s, t = data
    S, T = ln.LnElement(n, s), ln.LnElement(n, t)
    empty = ln.LnElement(n, 0)
    assert ln.join(S, S) == S and ln.meet(S, S) == S
    assert ln.join(empty, T) == T and ln.meet(empty, T) == empty
    assert ln.join(S, T) == ln.join(T, S) == ln.join_by_maxima(S, T)
    assert ln.meet(S, T) == ln.meet(T, S) == ln.meet_by_minima(S, T)
    assert ln.rho(ln.join(S, T)) + ln.rho(ln.meet(S, T)) == ln.rho(S) + ln.rho(T)


@pytest.mark.parametrize("n", range(1, 7))
def test_join_meet_are_bounds(n):
    P = ln_poset(n)
    for S, T in itertools.product(ln.elements(n), repeat=2):
        assert ln.join(S, T).bits == least_upper_bound(P, S.bits, T.bits)
        assert ln.meet(S, T).bits == greatest_lower_bound(P, S.bits, T.bits)


@pytest.mark.parametrize("n", range(1, 7))
def test_complements_are_unique(n):
    full, empty = ln.sigma(ln.LnElement(n, 0)), ln.LnElement(n, 0)
    for S, T in itertools.product(ln.elements(n), repeat=2):
        if ln.join(S, T) == full and ln.meet(S, T) == empty:
            assert T == ln.sigma(S)


def test_lattice_complement_can_fail():
    # {1} < {2,3} in L3, so the join with the set complement is {2,3}, not the top
    S = E(3, "1")
    assert ln.join(S, ln.sigma(S)) == E(3, "2,3")
    assert ln.meet(S, ln.sigma(S)) == S


# -- m+, m-, sigma ---------------------------------------------------------------


def test_m_examples():
    assert str(ln.m_plus(E(17, "2,5,7,8,11"))) == "2,5,7,8,17"
    assert str(ln.m_minus(E(17, "2,5,7,8,16,17"))) == "2,5,7,8,15,16"
    assert ln.m_plus(E(5, "{}")) == E(5, "5")


@pytest.mark.parametrize("n", range(2, 8))
def test_m_minus_of_top_singleton(n):
    # the greatest set without n below {n} is {n-1}, not the empty set
    got = ln.m_minus(ln.LnElement.of(n, [n]))
    assert got == ln.LnElement.of(n, [n - 1])
    assert ln.leq(ln.LnElement(n, 0), got) and got != ln.LnElement(n, 0)


def test_m_minus_in_l1():
    assert ln.m_minus(E(1, "1")) == E(1, "{}")


@pytest.mark.parametrize("n", range(1, 8))
def test_m_maps_by_scan(n):
    P = ln_poset(n)
    top = 1 << (n - 1)
    M = property_M_maps(P, ln.natural_layer(n))
    assert not isinstance(M, MFailure)
    for S in ln.elements(n):
        ups = [b for b in range(1 << n) if b & top and P.leq[S.bits, b]]
        downs = [b for b in range(1 << n) if not b & top and P.leq[b, S.bits]]
        plus, minus = ln.m_plus(S), ln.m_minus(S)
        assert all(P.leq[plus.bits, b] for b in ups) and plus.bits in ups
        assert all(P.leq[b, minus.bits] for b in downs) and minus.bits in downs
        assert plus.bits == M.m_plus[S.bits] and minus.bits == M.m_minus[S.bits]
        assert minus == ln.sigma(ln.m_plus(ln.sigma(S)))
        assert ln.sigma(ln.m_minus(S)) == ln.m_plus(ln.sigma(S))


def test_sigma_examples():
    assert str(ln.sigma(E(3, "1,3"))) == "2"
    assert ln.sigma(E(4, "{}")) == E(4, "1,2,3,4")


@settings(max_examples=300)
@given(ln_pairs(14))
def test_sigma_is_order_reversing_involution(data):
    n, s, t = data
    S, T = ln.LnElement(n, s), ln.LnElement(n, t)
    assert ln.sigma(ln.sigma(S)) == S
    assert ln.leq(S, T) == ln.leq(ln.sigma(T), ln.sigma(S))
    assert (n in S) != (n in ln.sigma(S))


# -- doubling --------------------------------------------------------------------


def test_psi_phi_examples():
    assert ln.psi(E(2, "{}"), 1) == E(3, "3")
    assert ln.phi(E(3, "2")) == (E(2, "2"), -1)


@pytest.mark.parametrize("n", range(1, 6))
def test_psi_round_trip(n):
    for S in ln.elements(n + 1):
        assert ln.psi(*ln.phi(S)) == S
    for S in ln.elements(n):
        for eps in (-1, 1):
            assert ln.phi(ln.psi(S, eps)) == (S, eps)


# -- boolean intervals -----------------------------------------------------------


def test_boole_singleton():
    S = E(4, "1,3")
    assert ln.boole_interval_iso(S, S) == {S: 0}


def test_boole_diamond():
    iso = ln.boole_interval_iso(E(3, "2"), E(3, "1,3"))
    # bit 0 records K = {1}, bit 1 records eps = +1
    assert {str(k): v for k, v in iso.items()} == {"2": 0, "1,2": 1, "3": 2, "1,3": 3}


@pytest.mark.parametrize("n", range(1, 7))
def test_boole_on_all_elementary_pairs(n):
    P = ln_poset(n)
    for I, J in itertools.product(ln.elements(n), repeat=2):
        if not ln.leq(I, J) or not ln.is_elementary(I, J):
            continue
        iso = ln.boole_interval_iso(I, J)
        d = ln.rho(J) - ln.rho(I)
        sub, index = interval(P, I.bits, J.bits)
        B = ln.boolean_poset(d)
        assert verify_isomorphism(sub, B, [iso[ln.LnElement(n, b)] for b in index])
        if d == 1:
            assert sub.size == 2


def test_boole_errors():
    with pytest.raises(NotElementary):
        ln.boole_interval_iso(E(3, "{}"), E(3, "2"))
    with pytest.raises(NotComparable):
        ln.boole_interval_iso(E(3, "3"), E(3, "1,2"))


# -- join reducibility ---------------------------------------------------------------


def test_gap_example():
    r = ln.is_join_reducible(E(5, "2,5"))
    assert r.reducible
    S0, S1 = r.parts
    assert (str(S0), str(S1)) == ("2,4", "5")
    assert least_upper_bound(ln_poset(5), S0.bits, S1.bits) == E(5, "2,5").bits


def test_run_is_irreducible():
    r = ln.is_join_reducible(E(5, "2,3"))
    assert not r.reducible and r.covered == E(5, "1,3")


@pytest.mark.parametrize("text", ["{}", "1", "4", "1,2,3"])
def test_irreducible_without_gap(text):
    assert not ln.is_join_reducible(E(5, text)).reducible
    assert not ln.has_gap(E(5, text))


@pytest.mark.parametrize("n", range(1, 7))
def test_gap_criterion_matches_brute_force(n):
    P = ln_poset(n)
    for S in ln.elements(n):
        below = [b for b in range(1 << n) if P.strict[b, S.bits]]
        brute = any(least_upper_bound(P, y, z) == S.bits for y in below for z in below)
        r = ln.is_join_reducible(S)
        assert r.reducible == brute == ln.has_gap(S)
        if r.reducible:
            S0, S1 = r.parts
            assert P.strict[S0.bits, S.bits] and P.strict[S1.bits, S.bits]
            assert ln.join(S0, S1) == S
        elif S.bits:
            assert [r.covered.bits] == [x for x, y in cover_pairs(P) if y == S.bits]


# -- explicit posets -------------------------------------------------------------


def test_small_builds():
    assert np.array_equal(ln.build_ln(1).leq, chain(2).leq)
    B2 = ln.boolean_poset(2)
    assert cover_pairs(B2) == [(0, 1), (0, 2), (1, 3), (2, 3)]
    assert ln.build_ln(0).size == 1


def test_cap():
    with pytest.raises(CapExceeded):
        ln.build_ln(12)
    assert ln.build_ln(3, cap=3).size == 8


@pytest.mark.parametrize("n", range(1, 6))
def test_gradedness_by_chain_enumeration(n):
    P = ln_poset(n)
    up = [[y for x2, y in cover_pairs(P) if x2 == x] for x in range(P.size)]

    def lengths(x, target):
        if x == target:
            yield 0
        for y in up[x]:
            if P.leq[y, target]:
                for k in lengths(y, target):
                    yield k + 1

    for S in ln.elements(n):
        assert set(lengths(0, S.bits)) == {ln.rho(S)}


def test_l3_self_dual():
    L3 = ln_poset(3)
    f = [ln.sigma(S).bits for S in ln.elements(3)]
    assert verify_isomorphism(L3, dual(L3), f)
    assert find_isomorphism(L3, dual(L3)) is not None

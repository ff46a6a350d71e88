import itertools

import pytest
from hypothesis import given, settings, strategies as st

from basecraft.actions import pair_action, product_action
from basecraft.catalog import get_case
from basecraft.basesize import exact_base_size
from basecraft.perm import Perm
from basecraft.permcore import BudgetExceeded, PermGroup
from basecraft.prodaction import (anchored_tuple_count, anchored_tuple_estimate, ceil_log2,
                                  distinguishing_number, floor_log2, multinomial_ceiling,
                                  product_base_size, product_criterion, regular_orbit_count,
                                  regular_orbit_count_anchored, wreath_base_bound)


def sym(n):
    return PermGroup([Perm([1, 0] + list(range(2, n))), Perm(list(range(1, n)) + [0])], n)


def cyclic(n):
    return PermGroup([Perm(list(range(1, n)) + [0])], n)


def elements(G):
    return [tuple(g) for g in G.chain.elements()]


def brute_distinguishing(P):
    nontrivial = [g for g in elements(P) if g != tuple(range(P.degree))]
    for k in range(1, P.degree + 1):
        for col in itertools.product(range(k), repeat=P.degree):
            if all(any(col[g[i]] != col[i] for i in range(P.degree)) for g in nontrivial):
                return k


def brute_regular_orbits(L, d):
    els = elements(L)
    seen = set()
    count = 0
    for t in itertools.product(range(L.degree), repeat=d):
        if t in seen:
            continue
        orbit = {tuple(g[x] for x in t) for g in els}
        seen |= orbit
        if len(orbit) == len(els):
            count += 1
    return count


groups = st.integers(2, 6).flatmap(
    lambda n: st.lists(st.permutations(range(n)), min_size=1, max_size=2))


@settings(max_examples=40, deadline=None)
@given(groups)
def test_distinguishing_number_matches_brute_force(perms):
    P = PermGroup([Perm(p) for p in perms], len(perms[0]))
    assert distinguishing_number(P) == brute_distinguishing(P)


@settings(max_examples=30, deadline=None)
@given(groups, st.integers(0, 3))
def test_regular_orbit_routes_match_brute_force(perms, d):
    L = PermGroup([Perm(p) for p in perms], len(perms[0]))
    expected = brute_regular_orbits(L, d)
    assert regular_orbit_count(L, d) == expected
    assert regular_orbit_count_anchored(L, d) == expected


def test_distinguishing_numbers_of_standard_groups():
    for m in range(2, 8):
        assert distinguishing_number(sym(m)) == m
    for m in range(3, 10):
        # C_m needs 2 colours except in tiny degrees
        assert distinguishing_number(cyclic(m)) == 2
    assert distinguishing_number(PermGroup([], 4)) == 1
    with pytest.raises(BudgetExceeded):
        distinguishing_number(sym(17))


def test_s5_wreath_c2():
    L = sym(5)
    C2 = PermGroup([Perm([1, 0])], 2)
    assert regular_orbit_count(L, 5) == 11
    assert regular_orbit_count(L, 4) == 1
    v = product_criterion(L, C2, 4)
    assert v.d_P == 2 and v.reg == 1 and not v.holds
    assert product_base_size(L, C2) == 5
    G, _ = product_action(L, 2, C2)
    assert exact_base_size(G).value == 5


def test_product_criterion_against_direct_base_size():
    C2 = PermGroup([Perm([1, 0])], 2)
    S3 = sym(3)
    for L in (sym(3), sym(4), cyclic(4)):
        for P in (C2, S3):
            G, _ = product_action(L, P.degree, P)
            assert product_base_size(L, P) == exact_base_size(G).value


def test_s8_on_bisections_regular_orbits():
    L = get_case("as1/S8/S4wrS2").action
    assert L.degree == 35
    assert regular_orbit_count(L, 5) == 600
    assert regular_orbit_count_anchored(L, 5) == 600


def test_anchored_estimate_brackets_exact_count():
    L, _ = pair_action(sym(7))
    exact = anchored_tuple_count(L, 0, 4)
    est = anchored_tuple_estimate(L, 0, 4, samples=4000, seed=3)
    lo, hi = est.interval
    assert lo <= exact <= hi


def test_log_helpers_and_wreath_bound():
    assert [ceil_log2(x) for x in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]
    assert [floor_log2(x) for x in (1, 2, 3, 4, 7, 8)] == [0, 1, 1, 2, 2, 3]
    assert wreath_base_bound(5, 5, 3) == 5
    assert wreath_base_bound(1, 9, 4) == 4
    with pytest.raises(ValueError):
        wreath_base_bound(2, 1, 1)


def test_multinomial_ceiling():
    assert multinomial_ceiling(4, 2) == 6
    assert multinomial_ceiling(5, 5) == 120
    assert multinomial_ceiling(3, 1) == 1


@pytest.mark.parametrize("L", [sym(3), sym(4), cyclic(5), cyclic(6)], ids=["S3", "S4", "C5", "C6"])
def test_wreath_c2_q_matches_enumeration(L):
    from basecraft.basesize import q_bound
    from basecraft.prodaction import wreath_c2_q_bound
    C2 = PermGroup([Perm([1, 0])], 2)
    G, _ = product_action(L, 2, C2)
    for c in (1, 2, 3, 4):
        assert wreath_c2_q_bound(L, c).total == q_bound(G, c).total

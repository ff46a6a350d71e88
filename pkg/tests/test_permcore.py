import random
from itertools import permutations
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from basecraft.perm import Perm, compose, conjugate, num_fixed, prime_order
from basecraft.permcore import (PermGroup, alternating_group, centraliser, conjugacy_orbit,
                                conjugates_and_intersection_order, cyclic_group,
                                find_element_mapping, normaliser, prime_order_class_data,
                                schreier_sims, subgroup_from_elements, symmetric_group)
from basecraft.catalog import bundled_group


def closure(gens, n):
    """All elements of <gens>, by breadth-first multiplication."""
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    gens = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def random_gens(draw_seed, n, k):
    rng = random.Random(draw_seed)
    out = []
    for _ in range(k):
        p = list(range(n))
        rng.shuffle(p)
        out.append(Perm(p))
    return out


@pytest.mark.parametrize("n", range(1, 9))
def test_symmetric_and_alternating_orders(n):
    assert symmetric_group(n).order() == factorial(n)
    assert alternating_group(n).order() == max(1, factorial(n) // 2)


def test_order_without_declared_order():
    G = PermGroup(symmetric_group(8).gens, 8)
    assert G.order() == 40320


def test_unreachable_declared_order_is_refused():
    with pytest.raises(ValueError):
        PermGroup(alternating_group(5).gens, 5, order=120).order()


def test_mathieu_orders():
    assert bundled_group("M11").order() == 7920
    assert bundled_group("M12").order() == 95040


def test_stabilisers_of_a8():
    A8 = alternating_group(8)
    assert A8.pointwise_stabiliser([0, 1, 2, 3, 4]).order() == 3
    assert A8.pointwise_stabiliser([0, 1, 2, 3, 4, 5]).order() == 1
    assert A8.stabiliser(3).order() == 2520


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(2, 6), k=st.integers(1, 3))
def test_chain_matches_closure(seed, n, k):
    gens = random_gens(seed, n, k)
    elements = closure(gens, n)
    G = PermGroup(gens, n)
    assert G.order() == len(elements)
    assert set(G.chain.elements()) == elements
    for g in permutations(range(n)):
        assert G.contains(g) == (g in elements)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(3, 6))
def test_pointwise_stabiliser_matches_filter(seed, n):
    gens = random_gens(seed, n, 2)
    G = PermGroup(gens, n)
    pts = [0, n - 1]
    expected = [g for g in closure(gens, n) if all(g[p] == p for p in pts)]
    assert G.pointwise_stabiliser(pts).order() == len(expected)


def test_random_elements_are_uniform_enough():
    G = symmetric_group(4)
    rng = random.Random(3)
    counts = {}
    for _ in range(24000):
        g = G.random_element(rng)
        counts[g] = counts.get(g, 0) + 1
    assert len(counts) == 24
    assert max(counts.values()) < 1300 and min(counts.values()) > 700


def test_subgroup_from_elements():
    els = list(closure([Perm.parse("(0 1 2 3)", 4)], 4))
    H = subgroup_from_elements(els, 4)
    assert H.order() == 4


def test_centraliser_and_normaliser():
    S5 = symmetric_group(5)
    t = Perm.parse("(0 1)", 5)
    assert centraliser(S5, t).order() == 12
    C5 = cyclic_group(5)
    assert normaliser(S5, C5).order() == 20


def test_find_element_mapping():
    S6 = symmetric_group(6)
    g = find_element_mapping(S6, [0, 1, 2], [5, 3, 1])
    assert [g[0], g[1], g[2]] == [5, 3, 1]
    C6 = cyclic_group(6)
    assert find_element_mapping(C6, [0, 1], [1, 0]) is None


def brute_classes(G):
    """Prime-order classes as (prime, size, fixed points), from conjugating every element."""
    els = list(G.chain.elements())
    seen = set()
    out = []
    for x in els:
        if x in seen or not prime_order(x):
            continue
        cls = {conjugate(x, g) for g in els}
        seen |= cls
        out.append((prime_order(x), len(cls), num_fixed(x)))
    return sorted(out)


@pytest.mark.parametrize("G", [symmetric_group(5), alternating_group(6), cyclic_group(6)],
                         ids=["S5", "A6", "C6"])
def test_class_data_against_brute_force(G):
    got = sorted((c.prime, c.class_size, c.fixed_points) for c in prime_order_class_data(G))
    assert got == brute_classes(G)


def test_s5_classes():
    got = sorted((c.prime, c.class_size, c.fixed_points) for c in prime_order_class_data(symmetric_group(5)))
    assert got == [(2, 10, 3), (2, 15, 1), (3, 20, 2), (5, 24, 0)]


def test_partial_class_data_is_marked():
    G = symmetric_group(7)
    data = prime_order_class_data(G, cap=100, samples=300)
    assert data
    for c in data:
        if c.complete:
            assert len(conjugacy_orbit(tuple(c.rep), G.gens)) == c.class_size


def test_intersection_order():
    S4 = symmetric_group(4)
    H = S4.stabiliser(3)
    x = Perm.parse("(2 3)", 4)
    # H ∩ H^x fixes both 2 and 3
    assert conjugates_and_intersection_order(H, x) == 2


def test_schreier_sims_prefix():
    ch = schreier_sims(symmetric_group(6).gens, 6, prefix=[4, 2])
    assert ch.base[:2] == [4, 2]
    assert ch.order == 720

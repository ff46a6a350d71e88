import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from basecraft.actions import coset_action, pair_action, psl2_group, psl2_subgroup
from basecraft.basesize import (BaseCertificate, NoRegularOrbitCertificate, coset_base_size,
                                coset_stabiliser_order, count_base_tuples, double_coset_size,
                                exact_base_probability, exact_base_size, greedy_base, is_base,
                                lemma_calc_bound, log_lower_bound, mc_base_probability,
                                no_regular_orbit_certificate, q_bound, random_base_search,
                                wilson_interval)
from basecraft.perm import Perm, compose, invert
from basecraft.permcore import PermGroup


def sym(n):
    return PermGroup([Perm([1, 0] + list(range(2, n))), Perm(list(range(1, n)) + [0])], n)


def elements(G):
    return [tuple(g) for g in G.chain.elements()]


def is_prime(k):
    return k > 1 and all(k % p for p in range(2, int(k**0.5) + 1))


def elt_order(g):
    ident = tuple(range(len(g)))
    x, k = g, 1
    while x != ident:
        x, k = compose(x, g), k + 1
    return k


def brute_base_size(G):
    nontrivial = [g for g in elements(G) if g != tuple(range(G.degree))]
    for k in range(G.degree + 1):
        for pts in itertools.combinations(range(G.degree), k):
            if all(any(g[p] != p for p in pts) for g in nontrivial):
                return k


def brute_tuple_count(G, d):
    nontrivial = [g for g in elements(G) if g != tuple(range(G.degree))]
    return sum(1 for pts in itertools.product(range(G.degree), repeat=d)
               if all(any(g[p] != p for p in pts) for g in nontrivial))


def brute_q(G, c):
    n = G.degree
    total = Fraction(0)
    for g in elements(G):
        if is_prime(elt_order(g)):
            total += Fraction(sum(1 for i in range(n) if g[i] == i), n) ** c
    return total


perm_lists = st.integers(3, 7).flatmap(
    lambda n: st.lists(st.permutations(range(n)), min_size=1, max_size=2))


def group_of(perms):
    n = len(perms[0])
    return PermGroup([Perm(p) for p in perms], n)


@settings(max_examples=40, deadline=None)
@given(perm_lists)
def test_exact_base_size_matches_brute_force(perms):
    G = group_of(perms)
    res = exact_base_size(G)
    assert res.exact and res.value == brute_base_size(G)
    assert is_base(G, res.hi_certificate.points)
    assert log_lower_bound(G) <= res.value <= len(greedy_base(G))


@settings(max_examples=30, deadline=None)
@given(perm_lists, st.integers(0, 3))
def test_tuple_count_matches_brute_force(perms, d):
    G = group_of(perms)
    assert count_base_tuples(G, d) == brute_tuple_count(G, d)


@settings(max_examples=30, deadline=None)
@given(perm_lists, st.integers(1, 4))
def test_q_matches_brute_force_and_bounds_failure(perms, c):
    G = group_of(perms)
    rep = q_bound(G, c)
    assert rep.mode == "exact"
    assert rep.total == brute_q(G, c)
    # a random c-tuple fails to be a base with probability at most Q(G, c)
    assert 1 - exact_base_probability(G, c) <= rep.total
    if rep.certifies:
        assert exact_base_size(G).value <= c


@pytest.mark.parametrize("c", [2, 3, 4])
def test_q_stabiliser_mode_agrees_with_class_mode(c):
    G, _ = pair_action(sym(8))
    full = q_bound(G, c)
    via_stab = q_bound(G, c, cap=2000)
    assert full.mode == "exact" and via_stab.mode == "exact-stabiliser"
    assert full.total == via_stab.total


def test_q_values_for_pgl27():
    model = psl2_group(7, "PGL")
    assert q_bound(model.G, 4).total == Fraction(87, 256)
    G, _ = pair_action(model.G)
    assert q_bound(G, 4).total == Fraction(225, 10976)


def test_known_base_sizes():
    assert exact_base_size(sym(6)).value == 5
    G, _ = pair_action(sym(8))
    res = exact_base_size(G)
    assert res.value == 5 and res.lo_detail["no_base_of_size"] == 4


def test_certificate_replay_roundtrip():
    G, _ = pair_action(sym(6))
    res = exact_base_size(G)
    payload = json.loads(json.dumps(res.hi_certificate.to_json(G)))
    assert BaseCertificate.replay(payload)
    payload["points"] = payload["points"][:-1]
    assert not BaseCertificate.replay(payload)


def test_random_base_search():
    G = sym(5)
    assert random_base_search(G, 4, seed=3).points
    assert random_base_search(G, 3, seed=3) is None


def test_exact_probability_for_pgl_pairs():
    q = 7
    G, _ = pair_action(psl2_group(q, "PGL").G)
    assert exact_base_probability(G, 2) == Fraction(4 * (q - 1), q * (q + 1))


def test_mc_is_deterministic_across_threads():
    G, _ = pair_action(psl2_group(11).G)
    a = mc_base_probability(G, 2, 2500, seed=9, threads=1)
    b = mc_base_probability(G, 2, 2500, seed=9, threads=3)
    assert a == b
    lo, hi = a.interval
    assert lo <= float(exact_base_probability(G, 2)) <= hi


def test_wilson_interval_edges():
    assert wilson_interval(0, 0) == (0.0, 1.0)
    lo, hi = wilson_interval(0, 100)
    assert lo == 0.0 and 0 < hi < 0.05
    lo, hi = wilson_interval(100, 100)
    assert hi == 1.0 and lo > 0.95


def test_lemma_calc_bound():
    assert lemma_calc_bound(6, 12, 2) == 3
    assert lemma_calc_bound(0, 5, 3) == 0
    assert lemma_calc_bound(17, 17, 4) == 17
    # A = 432 k, B = (q - 1)(q^3 + 1) with q = 2^7, k = 7: just above 4/q, not below
    q = 2**7
    value = lemma_calc_bound(432 * 7, (q - 1) * (q**3 + 1), 2)
    assert value == Fraction(9144576, 266338431)
    assert value > Fraction(4, q)
    with pytest.raises(ValueError):
        lemma_calc_bound(1, 0, 2)


def brute_double_coset(G, H, x):
    hs = elements(H)
    return len({compose(compose(a, x), b) for a in hs for b in hs})


def has_regular_suborbit(G, H):
    A, table = coset_action(G, H)
    # H fixes the coset H itself; find it among the reps
    hs = [h for h in elements(H) if h != tuple(range(G.degree))]
    for x in table.reps:
        x = tuple(x)
        xi = invert(x)
        if not any(H.chain.contains(compose(compose(x, h), xi)) for h in hs):
            return True
    return False


@settings(max_examples=15, deadline=None)
@given(st.permutations(range(6)), st.lists(st.permutations(range(6)), min_size=1, max_size=2))
def test_double_cosets_and_certificate_against_brute_force(x, hgens):
    G = sym(6)
    H = group_of(hgens)
    assert double_coset_size(H, tuple(x)) == brute_double_coset(G, H, tuple(x))
    cert, info = no_regular_orbit_certificate(G, H, trials=50, seed=1)
    regular = has_regular_suborbit(G, H)
    assert (cert is None) == regular
    if cert is not None:
        payload = json.loads(json.dumps(cert.to_json(G, H)))
        assert NoRegularOrbitCertificate.replay(payload)




def test_coset_route_agrees_with_action_route():
    model = psl2_group(8)
    G = model.G
    H = psl2_subgroup(model, "nonsplit")
    A, _ = coset_action(G, H)
    res = coset_base_size(G, H, seed=2)
    assert res.hi == exact_base_size(A).value
    assert coset_stabiliser_order(H, []) == H.order()

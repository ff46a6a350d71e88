import itertools
from math import comb, gcd

import pytest
from hypothesis import given, settings, strategies as st

from basecraft.actions import (coset_action, enumerate_subspaces, frobenius_perm,
                               gaussian_binomial, orbit_action, pair_action, perp_perm,
                               product_action, psl2_group, psl2_subgroup, set_action,
                               subspace_domain, unitary_pair_model,
                               vector_action)
from basecraft.gf import GF
from basecraft.matgrp import classical_generators, MatGroupSpec
from basecraft.perm import Perm
from basecraft.permcore import PermGroup


def sym(n):
    return PermGroup([Perm([1, 0] + list(range(2, n))), Perm(list(range(1, n)) + [0])], n)


def span(F, vecs):
    out = {tuple([0] * len(vecs[0]))}
    for v in vecs:
        out |= {tuple(F.add(x, F.mul(c, y)) for x, y in zip(u, v))
                for u in list(out) for c in range(F.q)}
    return frozenset(out)


@pytest.mark.parametrize("n,m,q", [(3, 1, 2), (3, 2, 3), (4, 2, 2), (4, 2, 3), (3, 1, 4), (4, 1, 5)])
def test_subspace_count_against_span_enumeration(n, m, q):
    F = GF(q)
    vectors = list(itertools.product(range(q), repeat=n))
    spaces = set()
    for vecs in itertools.combinations(vectors, m):
        S = span(F, list(vecs))
        if len(S) == q**m:
            spaces.add(S)
    assert len(spaces) == gaussian_binomial(n, m, q)
    listed = list(enumerate_subspaces(F, n, m))
    assert len(listed) == len(spaces)
    assert {span(F, list(w)) for w in listed} == spaces


def test_isotropic_subspace_counts():
    # totally isotropic points of Sp4(3): every point; lines: (q^2+1)(q+1)
    gens, form = classical_generators(MatGroupSpec.parse("Sp-4-3"))
    F = gens[0].field
    assert len(subspace_domain(F, 4, 1, "totally-isotropic", form)) == 40
    assert len(subspace_domain(F, 4, 2, "totally-isotropic", form)) == 40
    # isotropic points of the unitary 5-space over GF(4): 165
    gens, form = classical_generators(MatGroupSpec.parse("SU-5-2"))
    assert len(subspace_domain(gens[0].field, 5, 1, "totally-isotropic", form)) == 165
    with pytest.raises(ValueError):
        subspace_domain(F, 4, 1, "totally-isotropic")


def test_semilinear_maps_preserve_domains():
    F = GF(9)
    dom = subspace_domain(F, 4, 2)
    phi = frobenius_perm(F, dom)
    assert (phi * phi).is_identity()
    perp = perp_perm(F, dom)
    assert (perp * perp).is_identity()


def test_vector_action_is_faithful():
    gens, _ = classical_generators(MatGroupSpec.parse("GL-2-3"))
    G, dom = vector_action(gens, 2)
    assert len(dom) == 8 and G.order() == 48


@pytest.mark.parametrize("q", [4, 5, 7, 8, 9, 11])
def test_psl2_subgroup_orders(q):
    d = gcd(2, q - 1)
    model = psl2_group(q)
    G = model.G
    assert G.order() == q * (q * q - 1) // d
    assert psl2_subgroup(model, "P1").order() == q * (q - 1) // d
    assert psl2_subgroup(model, "split").order() == 2 * (q - 1) // d
    assert psl2_subgroup(model, "nonsplit").order() == 2 * (q + 1) // d


def test_psl2_subline_and_klein_normalisers():
    model = psl2_group(9)
    assert psl2_subgroup(model, "subline").order() == 24
    assert psl2_subgroup(psl2_group(7), "v4").order() == 24
    assert psl2_subgroup(psl2_group(11), "v4").order() == 12
    with pytest.raises(ValueError):
        psl2_subgroup(psl2_group(8), "v4")


@pytest.mark.parametrize("q,ext,order", [(8, "PSigmaL", 1512), (9, "PGammaL", 1440),
                                         (9, "PGL", 720), (9, "PSigmaL", 720),
                                         (9, [(1, 1)], 720), (16, "PGammaL", 16320)])
def test_psl2_extensions(q, ext, order):
    assert psl2_group(q, ext).G.order() == order


def test_coset_action_matches_point_action():
    G = sym(6)
    H = G.stabiliser(0)
    A, table = coset_action(G, H)
    assert A.degree == 6 and A.order() == 720 and table.kernel_order == 1
    # A5 is transitive of degree 6 inside S6 but not a point stabiliser
    B, _ = coset_action(G, G.stabiliser(0).stabiliser(1))
    assert B.degree == 30 and B.order() == 720


def test_coset_action_kernel():
    G = sym(4)
    # the Klein four-group is normal, so the action on its cosets has kernel V4
    V = PermGroup([Perm([1, 0, 3, 2]), Perm([2, 3, 0, 1])], 4)
    A, table = coset_action(G, V)
    assert A.degree == 6 and A.order() == 6 and table.kernel_order == 4


def test_pair_action():
    G = sym(5)
    P, dom = pair_action(G)
    assert len(dom) == comb(5, 2) and P.order() == 120
    assert all(a < b for a, b in dom.labels)


def test_set_action():
    G, dom = set_action(sym(6), [0, 1, 2])
    assert len(dom) == 20 and G.order() == 720


def test_orbit_action_closure():
    gens = [Perm([1, 2, 0])]
    perms, dom = orbit_action(gens, [(0, 1)], lambda t, g: tuple(g[x] for x in t))
    assert len(dom) == 3


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 4), st.integers(1, 3))
def test_product_action_degree_and_order(k, m):
    L = sym(k)
    P = sym(m) if m > 1 else None
    G, dom = product_action(L, m, P)
    assert G.degree == k**m == len(dom)
    top = 1 if m == 1 else P.order()
    assert G.order() == L.order() ** m * top


def test_product_action_moves_coordinates():
    L = sym(3)
    P = PermGroup([Perm([1, 0])], 2)
    G, dom = product_action(L, 2, P)
    swap = G.gens[-1]
    for i, (a, b) in enumerate(dom.labels):
        assert dom.labels[swap[i]] == (b, a)


@pytest.mark.parametrize("q", [5, 7, 9])
def test_unitary_pair_model(q):
    m = unitary_pair_model(q)
    assert len(m.domain) == q * (q - 1) // 2
    assert m.G.order() == q * (q * q - 1) // gcd(2, q - 1)

import pytest
from hypothesis import given
from hypothesis import strategies as st

from basecraft.perm import Perm, compose, conjugate, invert, prime_order


def perms(n):
    return st.permutations(list(range(n))).map(Perm)


def test_product_applies_left_factor_first():
    a = Perm.from_cycles([(0, 1)], 3)
    b = Perm.from_cycles([(1, 2)], 3)
    # 0 -> 1 under a, then 1 -> 2 under b
    assert (a * b)[0] == 2


def test_parse_formats():
    assert Perm.parse("[2,0,1]") == Perm((2, 0, 1))
    assert Perm.parse("(0 1 2)(3 4)", 5) == Perm((1, 2, 0, 4, 3))
    assert Perm.parse("(1,2,3)", 3, offset=1) == Perm((1, 2, 0))
    assert Perm.parse("()", 4).is_identity()
    with pytest.raises(ValueError):
        Perm.parse("(0 1)")
    with pytest.raises(ValueError):
        Perm.parse("[0,0,1]")
    with pytest.raises(ValueError):
        Perm.parse("(0 1)(1 2)", 3)
    with pytest.raises(ValueError):
        Perm.parse("(0 5)", 3)


def test_degree_mismatch():
    with pytest.raises(ValueError):
        Perm((1, 0)) * Perm((0, 2, 1))


def test_cycles_and_order():
    g = Perm.parse("(0 1 2)(3 4)", 6)
    assert g.order() == 6
    assert g.cycles() == [(0, 1, 2), (3, 4)]
    assert g.fixed_points() == 1
    assert g.sign() == -1
    assert Perm.parse(g.to_cycle_str(), 6) == g
    assert Perm.parse(g.to_list_str()) == g
    assert prime_order(tuple(Perm.parse("(0 1)(2 3)", 5))) == 2
    assert prime_order(tuple(g)) == 0
    assert prime_order(tuple(Perm.identity(3))) == 0


@given(perms(7), perms(7), perms(7))
def test_group_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * a.inverse() == Perm.identity(7)
    assert compose(a, invert(a)) == tuple(range(7))


@given(perms(6), perms(6))
def test_conjugation(x, g):
    assert x.conj(g) == g.inverse() * x * g
    assert Perm(conjugate(x, g)).order() == x.order()


@given(perms(8), st.integers(-20, 20))
def test_power(a, e):
    expected = Perm.identity(8)
    step = a if e >= 0 else a.inverse()
    for _ in range(abs(e)):
        expected = expected * step
    assert a ** e == expected

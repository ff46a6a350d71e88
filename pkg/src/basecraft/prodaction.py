"""Product action machinery: distinguishing numbers, regular orbit counts and the
wreath product base size bound.

For ``G = L wr P`` in product action on ``Gamma^m`` (``P`` transitive on
``m`` coordinates), ``b(G) <= k`` iff ``reg(L, k) >= d(P)``, where ``reg(L, k)``
counts regular ``L``-orbits on ``k``-tuples and ``d(P)`` is the distinguishing
number of ``P``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from statistics import NormalDist

from .basesize import (DEFAULT_NODE_BUDGET, BaseTester, QReport, count_base_tuples, q_report,
                       wilson_interval)
from .perm import prime_order
from .permcore import BudgetExceeded, PermGroup, orbits_of, prime_order_class_data

MAX_COLOUR_POINTS = 16


def distinguishing_number(P: PermGroup, budget: int = DEFAULT_NODE_BUDGET) -> int:
    """Least number of colours admitting a colouring with trivial stabiliser in ``P``."""
    m = P.degree
    if m > MAX_COLOUR_POINTS:
        raise BudgetExceeded(f"{m} points exceed the exact search limit {MAX_COLOUR_POINTS}")
    if P.order() == 1:
        return 1
    # a colouring is fixed by a nontrivial element iff it is fixed by one of prime order
    witnesses = [g for g in P.chain.elements() if prime_order(g)]
    order = P.order()
    nodes = 0
    for k in range(2, m + 1):
        # a regular orbit of colourings needs |P| colourings with one class-size vector
        if multinomial_ceiling(m, k) < order:
            continue
        colours = [0] * m

        def dfs(i: int, used: int, alive: list) -> bool:
            nonlocal nodes
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"colouring search exceeded {budget} nodes")
            if i == m:
                return not alive
            # colours are interchangeable, so a new colour is always the next unused one
            for c in range(min(used + 1, k)):
                colours[i] = c
                keep = [x for x in alive if _consistent(x, i, colours)]
                if dfs(i + 1, max(used, c + 1), keep):
                    return True
            return False

        if dfs(0, 0, witnesses):
            return k
    return m


def _consistent(x: tuple, i: int, colours: list) -> bool:
    """Whether ``x`` still preserves the colouring once point ``i`` is coloured."""
    j = x[i]
    if j <= i and colours[j] != colours[i]:
        return False
    for a in range(i):
        if x[a] == i and colours[a] != colours[i]:
            return False
    return True


def regular_orbit_count(L: PermGroup, d: int, budget: int = DEFAULT_NODE_BUDGET) -> int:
    """Number of regular ``L``-orbits on ``d``-tuples of points."""
    total = count_base_tuples(L, d, budget)
    order = L.order()
    if total % order:
        raise AssertionError(f"base tuple count {total} not divisible by |L| = {order}")
    return total // order


def regular_orbit_count_anchored(L: PermGroup, d: int, budget: int = DEFAULT_NODE_BUDGET) -> int:
    """``reg(L, d)`` from anchored counts summed over one point per ``L``-orbit.

    An independent route to :func:`regular_orbit_count`.
    """
    if d == 0:
        return 1 if L.order() == 1 else 0
    total = 0
    for orb in orbits_of(L.gens, L.degree):
        total += len(orb) * anchored_tuple_count(L, orb[0], d, budget=budget)
    return total // L.order()


def ceil_log2(x: int) -> int:
    if x < 1:
        raise ValueError("log of a nonpositive number")
    return (x - 1).bit_length()


def floor_log2(x: int) -> int:
    if x < 1:
        raise ValueError("log of a nonpositive number")
    return x.bit_length() - 1


def wreath_base_bound(d_P: int, gamma_size: int, b_LK: int) -> int:
    """``ceil(ceil(log2 d(P)) / floor(log2 |Gamma|)) + b(L, K)``."""
    if gamma_size < 2:
        raise ValueError("|Gamma| must be at least 2")
    num = ceil_log2(d_P)
    den = floor_log2(gamma_size)
    return -(-num // den) + b_LK


def anchored_tuple_count(L: PermGroup, gamma: int, d: int, budget: int = DEFAULT_NODE_BUDGET) -> int:
    """Number of base ``d``-tuples of ``L`` whose first entry is ``gamma``."""
    if d < 1:
        raise ValueError("d must be at least 1")
    return count_base_tuples(L.pointwise_stabiliser([gamma]), d - 1, budget)


@dataclass
class AnchoredEstimate:
    estimate: float
    interval: tuple
    samples: int
    strata: int

    def to_json(self) -> dict:
        return {"estimate": self.estimate, "interval": list(self.interval),
                "samples": self.samples, "strata": self.strata}


def anchored_tuple_estimate(L: PermGroup, gamma: int, d: int, samples: int, seed: int,
                            confidence: float = 0.95) -> AnchoredEstimate:
    """Monte Carlo estimate of :func:`anchored_tuple_count`.

    Sampling is stratified by the ``L_gamma``-orbit of the second entry, with
    samples allocated in proportion to orbit size. The interval sums per-stratum
    Wilson intervals at a Bonferroni-corrected level, so it is conservative.
    """
    if d < 2:
        t = float(anchored_tuple_count(L, gamma, d))
        return AnchoredEstimate(t, (t, t), 0, 0)
    n = L.degree
    K = L.pointwise_stabiliser([gamma])
    orbs = orbits_of(K.gens, n)
    z = NormalDist().inv_cdf(1 - (1 - confidence) / (2 * len(orbs)))
    rng = random.Random(seed)
    space = n ** (d - 2)
    est = lo = hi = 0.0
    used = 0
    for orb in orbs:
        w = len(orb) * space
        k = max(1, round(samples * len(orb) / n))
        tester = BaseTester(K.pointwise_stabiliser([orb[0]]))
        hits = 0
        for _ in range(k):
            if tester.is_base([rng.randrange(n) for _ in range(d - 2)]):
                hits += 1
        used += k
        a, b = wilson_interval(hits, k, z)
        est += w * hits / k
        lo += w * a
        hi += w * b
    return AnchoredEstimate(est, (lo, hi), used, len(orbs))


@dataclass
class ProductVerdict:
    d_P: int
    reg: int
    k: int
    holds: bool

    def to_json(self) -> dict:
        return {"d_P": self.d_P, "reg": self.reg, "k": self.k,
                "b_at_most_k": self.holds}


def product_criterion(L: PermGroup, P: PermGroup, k: int,
                      budget: int = DEFAULT_NODE_BUDGET) -> ProductVerdict:
    """Decide ``b(L wr P) <= k`` in product action via ``reg(L, k) >= d(P)``."""
    d_P = distinguishing_number(P, budget)
    reg = regular_orbit_count(L, k, budget)
    return ProductVerdict(d_P, reg, k, reg >= d_P)


def product_base_size(L: PermGroup, P: PermGroup, budget: int = DEFAULT_NODE_BUDGET) -> int:
    """Least ``k`` with ``reg(L, k) >= d(P)``."""
    d_P = distinguishing_number(P, budget)
    k = 0
    n = L.degree
    while True:
        if n**k >= L.order() and regular_orbit_count(L, k, budget) >= d_P:
            return k
        k += 1


def wreath_c2_q_class_data(L: PermGroup) -> list:
    """Prime-order class data of ``L wr C2`` in product action on ``Gamma^2``, from ``L`` alone.

    Rows are ``(None, prime, count, fixed_points)`` grouped by prime and fixed
    point count. A base-group element ``(k1, k2)`` of prime order ``r`` fixes
    ``fix(k1) fix(k2)`` points. An element outside the base group has prime
    order only if it is an involution ``(k, k^-1)`` times the swap, and each of
    these ``|L|`` involutions fixes ``|Gamma|`` points.
    """
    n = L.degree
    by_prime: dict = {}
    for cd in prime_order_class_data(L):
        counts = by_prime.setdefault(cd.prime, {n: 1})
        counts[cd.fixed_points] = counts.get(cd.fixed_points, 0) + cd.class_size
    rows: dict = {}
    for r, counts in by_prime.items():
        for f1, m1 in counts.items():
            for f2, m2 in counts.items():
                key = (r, f1 * f2)
                rows[key] = rows.get(key, 0) + m1 * m2
        # drop the identity pair
        rows[(r, n * n)] -= 1
        if rows[(r, n * n)] == 0:
            del rows[(r, n * n)]
    key = (2, n)
    rows[key] = rows.get(key, 0) + L.order()
    return [(None, r, m, f) for (r, f), m in sorted(rows.items())]


def wreath_c2_q_bound(L: PermGroup, c: int) -> QReport:
    """Exact ``Q(L wr C2, c)`` in product action without enumerating the wreath product."""
    return q_report(L.degree**2, c, "exact-wreath", wreath_c2_q_class_data(L))


def multinomial_ceiling(m: int, k: int) -> int:
    """Largest number of colourings sharing one vector of colour class sizes."""
    base, extra = divmod(m, k)
    sizes = [base + 1] * extra + [base] * (k - extra)
    out = 1
    total = 0
    for s in sizes:
        for i in range(1, s + 1):
            total += 1
            out = out * total // i
    return out


__all__ = [
    "distinguishing_number", "regular_orbit_count", "regular_orbit_count_anchored",
    "wreath_base_bound", "anchored_tuple_count", "anchored_tuple_estimate",
    "product_criterion", "product_base_size", "ProductVerdict", "AnchoredEstimate",
    "ceil_log2", "floor_log2", "multinomial_ceiling", "wreath_c2_q_bound",
    "wreath_c2_q_class_data",
]

"""Permutation groups: stabiliser chains, membership, order, classes.

A :class:`StabChain` is built by randomized Schreier-Sims. When the caller
knows an upper bound for the group order (a closed formula, or the index of a
stabiliser in a group whose order is already certified) the random phase
stops once the chain reaches that order; the chain is then complete because a
partial chain can only under-count. Otherwise a deterministic Schreier
generator pass verifies the chain before it is returned.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import prod

from .perm import Perm, compose, conjugate, invert, num_fixed, perm_order, prime_order

DEFAULT_ENUM_CAP = 10**7
# consecutive useless sifts tolerated while chasing a declared order
_KNOWN_ORDER_PATIENCE = 400
# consecutive useless sifts before switching to deterministic verification
_RANDOM_PHASE_PATIENCE = 30


class BudgetExceeded(RuntimeError):
    """A computation would exceed its declared element or domain budget."""


class Level:
    """One level of a stabiliser chain with an explicit transversal.

    ``trans[y]`` maps the level's base point to ``y``; ``uinv[y]`` is its inverse.
    """

    __slots__ = ("point", "gens", "orbit", "trans", "uinv")

    def __init__(self, point: int, n: int):
        ident = tuple(range(n))
        self.point = point
        self.gens: list[tuple] = []
        self.orbit = [point]
        self.trans = {point: ident}
        self.uinv = {point: ident}

    def add_gen(self, s: tuple) -> None:
        self.gens.append(s)
        trans, uinv, orbit = self.trans, self.uinv, self.orbit
        start = len(orbit)
        for idx in range(start):
            x = orbit[idx]
            y = s[x]
            if y not in trans:
                u = compose(trans[x], s)
                trans[y] = u
                uinv[y] = invert(u)
                orbit.append(y)
        idx = start
        gens = self.gens
        while idx < len(orbit):
            x = orbit[idx]
            ux = trans[x]
            for g in gens:
                y = g[x]
                if y not in trans:
                    u = compose(ux, g)
                    trans[y] = u
                    uinv[y] = invert(u)
                    orbit.append(y)
            idx += 1


def _sift(levels, g: tuple, start: int = 0):
    """Sift ``g`` through ``levels[start:]``; return (residue, level index reached)."""
    for i in range(start, len(levels)):
        lv = levels[i]
        b = g[lv.point]
        if b == lv.point:
            continue
        u = lv.uinv.get(b)
        if u is None:
            return g, i
        g = tuple(map(u.__getitem__, g))
    return g, len(levels)


class ProductReplacement:
    """Product replacement ("rattle") random elements of ``<gens>``."""

    def __init__(self, gens, n: int, rng: random.Random, slots: int = 10, warmup: int = 60):
        self.n = n
        self.rng = rng
        gens = [tuple(g) for g in gens]
        self.acc = tuple(range(n))
        if not gens:
            self.state = []
            return
        state = list(gens)
        while len(state) < slots:
            state.extend(gens)
        self.state = state[: max(slots, len(gens))]
        for _ in range(warmup):
            self()

    def __call__(self) -> tuple:
        st = self.state
        if not st:
            return self.acc
        rng = self.rng
        i = rng.randrange(len(st))
        j = rng.randrange(len(st) - 1) if len(st) > 1 else 0
        if len(st) > 1 and j >= i:
            j += 1
        other = st[j] if rng.random() < 0.5 else invert(st[j])
        if rng.random() < 0.5:
            st[i] = compose(st[i], other)
        else:
            st[i] = compose(other, st[i])
        self.acc = compose(self.acc, st[i])
        return self.acc


class StabChain:
    """Verified base and strong generating set."""

    def __init__(self, degree: int, levels: list[Level]):
        self.degree = degree
        self.levels = levels

    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self.levels]

    @property
    def orbit_sizes(self) -> list[int]:
        return [len(lv.orbit) for lv in self.levels]

    @property
    def order(self) -> int:
        return prod(len(lv.orbit) for lv in self.levels)

    @property
    def strong_generators(self) -> list[tuple]:
        return list(self.levels[0].gens) if self.levels else []

    def sift(self, g: tuple):
        return _sift(self.levels, tuple(g))

    def contains(self, g) -> bool:
        res, _ = _sift(self.levels, tuple(g))
        return all(i == j for i, j in enumerate(res))

    def random_element(self, rng: random.Random) -> tuple:
        """Uniformly random element: a random transversal entry from each level."""
        g = tuple(range(self.degree))
        for lv in reversed(self.levels):
            u = lv.trans[lv.orbit[rng.randrange(len(lv.orbit))]]
            g = compose(g, u)
        return g

    def sub(self, k: int) -> "StabChain":
        """Chain of the pointwise stabiliser of the first ``k`` base points."""
        return StabChain(self.degree, self.levels[k:])

    def elements(self):
        """Iterate over every element exactly once."""
        yield from _iter_elements(self.levels, 0, self.degree)


def _iter_elements(levels, i: int, n: int):
    if i == len(levels):
        yield tuple(range(n))
        return
    ts = list(levels[i].trans.values())
    for h in _iter_elements(levels, i + 1, n):
        for u in ts:
            yield tuple(map(u.__getitem__, h))


def schreier_sims(gens, degree: int, order: int | None = None, prefix=(), seed: int = 0,
                  sampler=None) -> StabChain:
    """Build a stabiliser chain of ``<gens>`` whose base starts with ``prefix``.

    ``order``, when given, must be an upper bound for the group order; the
    construction then stops as soon as the chain reaches it and raises if it
    cannot. ``sampler`` is an optional zero-argument callable returning random
    group elements; product replacement is used otherwise.
    """
    n = degree
    gens = [tuple(g) for g in gens]
    for g in gens:
        if len(g) != n:
            raise ValueError(f"generator of degree {len(g)} in a group of degree {n}")
    ident = tuple(range(n))
    rng = random.Random(seed)
    levels: list[Level] = []
    seen = set()
    for p in prefix:
        if not 0 <= p < n:
            raise ValueError(f"base point {p} outside degree {n}")
        if p not in seen:
            seen.add(p)
            levels.append(Level(p, n))

    def insert(g: tuple) -> bool:
        res, j = _sift(levels, g)
        if res == ident:
            return False
        if j == len(levels):
            moved = next(i for i in range(n) if res[i] != i)
            levels.append(Level(moved, n))
        for k in range(j + 1):
            levels[k].add_gen(res)
        return True

    for g in gens:
        insert(g)

    if sampler is None:
        sampler = ProductReplacement(gens, n, rng)

    if order is not None:
        misses = 0
        cur = prod(len(lv.orbit) for lv in levels)
        while cur < order:
            if insert(sampler()):
                misses = 0
                cur = prod(len(lv.orbit) for lv in levels)
            else:
                misses += 1
                if misses > _KNOWN_ORDER_PATIENCE:
                    raise ValueError(f"group order stalled at {cur}, expected {order}")
        if cur > order:
            raise ValueError(f"group order {cur} exceeds the declared bound {order}")
        return StabChain(n, levels)

    misses = 0
    while misses < _RANDOM_PHASE_PATIENCE and gens:
        if insert(sampler()):
            misses = 0
        else:
            misses += 1
    _verify(levels, n, insert)
    return StabChain(n, levels)


def _verify(levels: list[Level], n: int, insert) -> None:
    """Deterministic Schreier generator check; extends ``levels`` until complete."""
    ident = tuple(range(n))
    i = len(levels) - 1
    while i >= 0:
        lv = levels[i]
        restart = None
        for gamma in list(lv.orbit):
            u = lv.trans[gamma]
            for s in list(lv.gens):
                h = compose(compose(u, s), lv.uinv[s[gamma]])
                if h == ident:
                    continue
                res, j = _sift(levels, h, i + 1)
                if res != ident:
                    before = len(levels)
                    insert(res)
                    restart = min(j, len(levels) - 1) if len(levels) == before else len(levels) - 1
                    break
            if restart is not None:
                break
        if restart is not None:
            i = restart
        else:
            i -= 1


class PermGroup:
    """A permutation group given by generators, with a lazily built chain.

    ``order`` may be supplied when an upper bound for the group order is known
    for certain (for example a closed formula for a group preserving a form);
    the chain construction is then cut short once that order is reached.
    """

    def __init__(self, gens, degree: int | None = None, order: int | None = None,
                 name: str | None = None, chain: StabChain | None = None, seed: int = 0):
        gens = [Perm(g) for g in gens]
        if degree is None:
            if not gens:
                raise ValueError("degree required for a group with no generators")
            degree = len(gens[0])
        for g in gens:
            if len(g) != degree:
                raise ValueError(f"generator degree {len(g)} differs from {degree}")
        self.degree = degree
        self.gens = gens
        self.name = name
        self._declared_order = order
        self._chain = chain
        self._seed = seed

    @property
    def chain(self) -> StabChain:
        if self._chain is None:
            self._chain = schreier_sims(self.gens, self.degree, order=self._declared_order,
                                        seed=self._seed)
        return self._chain

    def order(self) -> int:
        return self.chain.order

    def __len__(self):
        raise TypeError("use order(); group orders can exceed sys.maxsize")

    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def contains(self, g) -> bool:
        if len(g) != self.degree:
            raise ValueError(f"degree mismatch: {len(g)} vs {self.degree}")
        return self.chain.contains(g)

    def __contains__(self, g) -> bool:
        return self.contains(g)

    def is_trivial(self) -> bool:
        return all(g.is_identity() for g in self.gens)

    def random_element(self, rng: random.Random) -> Perm:
        return Perm(self.chain.random_element(rng))

    def product_replacement(self, rng: random.Random) -> ProductReplacement:
        return ProductReplacement(self.gens, self.degree, rng)

    def elements(self, cap: int = DEFAULT_ENUM_CAP):
        if self.order() > cap:
            raise BudgetExceeded(f"group order {self.order()} exceeds enumeration cap {cap}")
        return self.chain.elements()

    def base_chain(self, prefix, seed: int = 0) -> StabChain:
        """A chain whose base starts with ``prefix`` (reuses the cached chain if it does)."""
        prefix = list(dict.fromkeys(prefix))
        ch = self.chain
        if ch.base[: len(prefix)] == prefix:
            return ch
        rng = random.Random(seed)
        return schreier_sims(self.gens, self.degree, order=ch.order, prefix=prefix,
                             seed=seed, sampler=lambda: ch.random_element(rng))

    def pointwise_stabiliser(self, points, seed: int = 0) -> "PermGroup":
        points = list(dict.fromkeys(points))
        if not points:
            return self
        ch = self.base_chain(points, seed=seed)
        sub = ch.sub(len(points))
        gens = list(sub.levels[0].gens) if sub.levels else []
        return PermGroup(gens, self.degree, chain=sub)

    def stabiliser(self, point: int) -> "PermGroup":
        return self.pointwise_stabiliser([point])

    def orbit(self, point: int) -> list[int]:
        seen = {point}
        out = [point]
        for x in out:
            for g in self.gens:
                y = g[x]
                if y not in seen:
                    seen.add(y)
                    out.append(y)
        return out

    def orbits(self) -> list[list[int]]:
        return orbits_of(self.gens, self.degree)

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree if self.degree else True

    def subgroup(self, gens, order: int | None = None) -> "PermGroup":
        for g in gens:
            if not self.contains(g):
                raise ValueError("generator not in the ambient group")
        return PermGroup(gens, self.degree, order=order)

    def __repr__(self):
        label = self.name or "PermGroup"
        return f"<{label} degree={self.degree} gens={len(self.gens)}>"


def orbits_of(gens, n: int) -> list[list[int]]:
    seen = bytearray(n)
    out = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = 1
        orb = [start]
        for x in orb:
            for g in gens:
                y = g[x]
                if not seen[y]:
                    seen[y] = 1
                    orb.append(y)
        out.append(orb)
    return out


def symmetric_group(n: int) -> PermGroup:
    if n <= 1:
        return PermGroup([], max(n, 1), name=f"S{n}")
    gens = [Perm.from_cycles([[0, 1]], n), Perm.from_cycles([list(range(n))], n)]
    return PermGroup(gens, n, order=_factorial(n), name=f"S{n}")


def alternating_group(n: int) -> PermGroup:
    if n <= 2:
        return PermGroup([], max(n, 1), name=f"A{n}")
    gens = [Perm.from_cycles([[i, i + 1, i + 2]], n) for i in range(n - 2)]
    return PermGroup(gens, n, order=_factorial(n) // 2, name=f"A{n}")


def cyclic_group(n: int) -> PermGroup:
    return PermGroup([Perm.from_cycles([list(range(n))], n)] if n > 1 else [], n, order=n,
                     name=f"C{n}")


def _factorial(n: int) -> int:
    return prod(range(1, n + 1))


def subgroup_from_elements(elements, degree: int, seed: int = 0) -> PermGroup:
    """The group whose element set is ``elements`` (which must be closed)."""
    elements = [tuple(e) for e in elements]
    rng = random.Random(seed)
    ch = schreier_sims([], degree, order=len(elements),
                       sampler=lambda: elements[rng.randrange(len(elements))])
    gens = list(ch.levels[0].gens) if ch.levels else []
    return PermGroup(gens, degree, chain=ch)


def filter_subgroup(G: PermGroup, pred, cap: int = DEFAULT_ENUM_CAP, seed: int = 0) -> PermGroup:
    """Subgroup of ``G`` of elements satisfying ``pred``; ``pred`` must cut out a subgroup."""
    return subgroup_from_elements([g for g in G.elements(cap) if pred(g)], G.degree, seed)


def normaliser(G: PermGroup, H: PermGroup, cap: int = DEFAULT_ENUM_CAP) -> PermGroup:
    """``N_G(H)`` by filtering the elements of ``G``."""
    hg = [tuple(h) for h in H.gens]
    return filter_subgroup(G, lambda g: all(H.contains(conjugate(h, g)) for h in hg), cap)


def centraliser(G: PermGroup, x, cap: int = DEFAULT_ENUM_CAP) -> PermGroup:
    x = tuple(x)
    return filter_subgroup(G, lambda g: compose(g, x) == compose(x, g), cap)


def find_element_mapping(G: PermGroup, src, dst):
    """An element of ``G`` mapping the tuple ``src`` to ``dst`` pointwise, or None."""
    src, dst = list(src), list(dst)
    ch = G.base_chain(src)
    g = tuple(range(G.degree))
    # walk the chain: at level i find u with src[i]^(u * g) = dst[i]
    for i, lv in enumerate(ch.levels[: len(src)]):
        ginv = invert(g)
        target = ginv[dst[i]]
        u = lv.trans.get(target)
        if u is None:
            return None
        g = compose(u, g)
    return Perm(g)


@dataclass
class ClassData:
    """A conjugacy class of elements of prime order."""

    rep: Perm
    prime: int
    class_size: int
    fixed_points: int
    complete: bool = True
    members: list | None = field(default=None, repr=False)


def conjugacy_orbit(x: tuple, gens, cap: int | None = None):
    """Conjugation orbit of ``x`` under ``<gens>``; None if it exceeds ``cap``."""
    seen = {x}
    out = [x]
    for y in out:
        for g in gens:
            z = conjugate(y, g)
            if z not in seen:
                seen.add(z)
                out.append(z)
                if cap is not None and len(out) > cap:
                    return None
    return out


def prime_order_class_data(G: PermGroup, cap: int = DEFAULT_ENUM_CAP, seed: int = 0,
                           keep_members: bool = False, samples: int = 2000) -> list[ClassData]:
    """Classes of prime-order elements of ``G`` with sizes and fixed-point counts.

    Exact when ``|G| <= cap``; otherwise classes are discovered from random
    elements and marked incomplete when their size could not be computed.
    """
    gens = [tuple(g) for g in G.gens]
    if G.order() <= cap:
        todo = {}
        for g in G.chain.elements():
            r = prime_order(g)
            if r:
                todo[g] = r
        out = []
        while todo:
            x = min(todo)
            r = todo[x]
            orb = conjugacy_orbit(x, gens)
            for y in orb:
                del todo[y]
            out.append(ClassData(Perm(x), r, len(orb), num_fixed(x), True,
                                 orb if keep_members else None))
        out.sort(key=lambda c: (c.prime, -c.fixed_points, c.class_size, c.rep))
        return out

    rng = random.Random(seed)
    found: list[ClassData] = []
    known: set = set()
    for _ in range(samples):
        g = G.chain.random_element(rng)
        o = perm_order(g)
        for r in _primes_dividing(o):
            x = _power(g, o // r)
            if x in known:
                continue
            orb = conjugacy_orbit(x, gens, cap)
            if orb is None:
                found.append(ClassData(Perm(x), r, 0, num_fixed(x), False))
                known.add(x)
            else:
                known.update(orb)
                found.append(ClassData(Perm(min(orb)), r, len(orb), num_fixed(x), True))
    return found


def _primes_dividing(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _power(g: tuple, e: int) -> tuple:
    result = tuple(range(len(g)))
    base = g
    while e:
        if e & 1:
            result = compose(result, base)
        base = compose(base, base)
        e >>= 1
    return result


def conjugates_and_intersection_order(H: PermGroup, x, cap: int = DEFAULT_ENUM_CAP) -> int:
    """``|H ∩ H^x|`` where ``H^x = x^-1 H x``, by filtering the elements of ``H``."""
    if H.order() > cap:
        raise BudgetExceeded(f"|H| = {H.order()} exceeds cap {cap}")
    xinv = invert(tuple(x))
    ch = H.chain
    count = 0
    for h in ch.elements():
        # h in H^x  iff  x h x^-1 in H
        if ch.contains(conjugate(h, xinv)):
            count += 1
    return count

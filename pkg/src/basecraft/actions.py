"""Permutation actions: subspaces, cosets, pairs, product action, and L2(q) models.

Every builder returns permutations on a :class:`LabelledDomain`, whose labels
are canonical objects (reduced echelon bases, coset representatives, index
tuples) so that domains can be dumped and compared across implementations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb, gcd

from .gf import Field, embedding, field_make, prime_power
from .matgrp import ClassicalForm, Matrix, vec_mat
from .perm import Perm, compose
from .permcore import BudgetExceeded, PermGroup, filter_subgroup, find_element_mapping

MAX_DOMAIN = 10**6


@dataclass
class LabelledDomain:
    labels: list
    index: dict = field(repr=False)

    @classmethod
    def from_labels(cls, labels) -> "LabelledDomain":
        labels = list(labels)
        index = {lab: i for i, lab in enumerate(labels)}
        if len(index) != len(labels):
            raise ValueError("domain labels are not distinct")
        return cls(labels, index)

    def __len__(self):
        return len(self.labels)

    def dump(self) -> str:
        """One label per line."""
        return "\n".join(_label_str(lab) for lab in self.labels) + "\n"


def _label_str(lab) -> str:
    if isinstance(lab, tuple):
        return " ".join(_label_str(x) for x in lab) if any(isinstance(x, tuple) for x in lab) \
            else ",".join(map(str, lab))
    return str(lab)


def induced_perm(domain: LabelledDomain, fn) -> Perm:
    """Permutation of ``domain`` induced by the label map ``fn``."""
    idx = domain.index
    try:
        return Perm(idx[fn(lab)] for lab in domain.labels)
    except KeyError as exc:
        raise ValueError(f"map does not preserve the domain: {exc}") from None


# -- subspaces ----------------------------------------------------------------

def rref(F: Field, rows) -> tuple:
    """Reduced row echelon form with zero rows dropped."""
    m = [list(r) for r in rows]
    n = len(m[0]) if m else 0
    out = []
    col = 0
    r = 0
    while r < len(m) and col < n:
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][col])
        m[r] = [F.mul(inv, a) for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                c = m[i][col]
                m[i] = [F.sub(a, F.mul(c, b)) for a, b in zip(m[i], m[r])]
        r += 1
        col += 1
    for i in range(r):
        out.append(tuple(m[i]))
    return tuple(out)


def gaussian_binomial(n: int, m: int, q: int) -> int:
    """Number of m-subspaces of GF(q)^n by the recursion [n,m] = [n-1,m-1] + q^m [n-1,m]."""
    if m < 0 or m > n:
        return 0
    if m == 0 or m == n:
        return 1
    return gaussian_binomial(n - 1, m - 1, q) + q**m * gaussian_binomial(n - 1, m, q)


def enumerate_subspaces(F: Field, n: int, m: int):
    """All m-subspaces of F^n as RREF bases."""
    q = F.q
    for pivots in combinations(range(n), m):
        pset = set(pivots)
        free = [(i, c) for i, p in enumerate(pivots) for c in range(p + 1, n) if c not in pset]
        for vals in product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(m)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, c), v in zip(free, vals):
                rows[i][c] = v
            yield tuple(tuple(r) for r in rows)


def _totally_isotropic(form: ClassicalForm, basis) -> bool:
    if form.quad is not None:
        if any(form.quadratic(v) for v in basis):
            return False
    for i, u in enumerate(basis):
        for v in basis[i:]:
            if form.bilinear(u, v):
                return False
    return True


def _nondegenerate(form: ClassicalForm, basis) -> bool:
    F = form.field
    gram = Matrix(F, [[form.bilinear(u, v) for v in basis] for u in basis])
    return gram.det() != 0


def subspace_domain(F: Field, n: int, m: int, constraint: str = "all",
                    form: ClassicalForm | None = None) -> LabelledDomain:
    if constraint not in ("all", "totally-isotropic", "nondegenerate"):
        raise ValueError(f"unknown constraint {constraint!r}")
    if constraint != "all" and form is None:
        raise ValueError(f"constraint {constraint!r} needs a form")
    total = gaussian_binomial(n, m, F.q)
    if total > MAX_DOMAIN:
        raise BudgetExceeded(f"{total} subspaces exceed the domain budget")
    labels = []
    for w in enumerate_subspaces(F, n, m):
        if constraint == "totally-isotropic" and not _totally_isotropic(form, w):
            continue
        if constraint == "nondegenerate" and not _nondegenerate(form, w):
            continue
        labels.append(w)
    return LabelledDomain.from_labels(labels)


def matrix_perm(A: Matrix, domain: LabelledDomain) -> Perm:
    F = A.field
    rows = A.rows
    return induced_perm(domain, lambda w: rref(F, [vec_mat(F, v, rows) for v in w]))


def subspace_action(gens, n: int, q: int | Field, m: int, constraint: str = "all",
                    form: ClassicalForm | None = None, order: int | None = None,
                    extra_perms=()) -> tuple[PermGroup, LabelledDomain]:
    """Action of matrices on m-subspaces (optionally constrained by ``form``)."""
    F = q if isinstance(q, Field) else (gens[0].field if gens else _field_of(q))
    domain = subspace_domain(F, n, m, constraint, form)
    perms = [matrix_perm(A, domain) for A in gens] + list(extra_perms)
    return PermGroup(perms, len(domain), order=order), domain


def _field_of(q: int) -> Field:
    p, f = prime_power(q)
    return field_make(p, f)


def frobenius_perm(F: Field, domain: LabelledDomain, j: int = 1) -> Perm:
    """Entrywise ``a -> a^(p^j)`` on subspace labels (RREF is preserved)."""
    return induced_perm(domain, lambda w: tuple(tuple(F.frob(a, j) for a in r) for r in w))


def perp_perm(F: Field, domain: LabelledDomain) -> Perm:
    """``W -> W^perp`` for the standard dot product; needs ``dim W = n/2``."""
    def perp(w):
        n = len(w[0])
        # null space of the matrix with rows w
        rr = rref(F, w)
        pivots = [next(c for c in range(n) if r[c]) for r in rr]
        free = [c for c in range(n) if c not in pivots]
        basis = []
        for fc in free:
            v = [0] * n
            v[fc] = 1
            for r, p in zip(rr, pivots):
                v[p] = F.neg(r[fc])
            basis.append(v)
        return rref(F, basis)
    return induced_perm(domain, perp)


def vector_domain(F: Field, n: int) -> LabelledDomain:
    """Nonzero vectors of F^n."""
    labels = [v for v in product(range(F.q), repeat=n) if any(v)]
    if len(labels) > MAX_DOMAIN:
        raise BudgetExceeded(f"{len(labels)} vectors exceed the domain budget")
    return LabelledDomain.from_labels(labels)


def vector_action(gens, n: int, order: int | None = None) -> tuple[PermGroup, LabelledDomain]:
    """Faithful action of a linear group on the nonzero vectors."""
    F = gens[0].field
    domain = vector_domain(F, n)
    perms = [induced_perm(domain, lambda v, A=A: vec_mat(F, v, A.rows)) for A in gens]
    return PermGroup(perms, len(domain), order=order), domain


# -- generic induced actions --------------------------------------------------

def orbit_action(gens, seeds, act, degree_cap: int = MAX_DOMAIN):
    """Closure of ``seeds`` under ``act(obj, g)`` for ``g`` in ``gens``.

    Returns the induced permutations and the domain of reached objects.
    """
    labels = list(dict.fromkeys(seeds))
    index = {lab: i for i, lab in enumerate(labels)}
    images = [[] for _ in gens]
    i = 0
    while i < len(labels):
        obj = labels[i]
        for k, g in enumerate(gens):
            y = act(obj, g)
            j = index.get(y)
            if j is None:
                j = len(labels)
                if j >= degree_cap:
                    raise BudgetExceeded(f"orbit exceeds {degree_cap} points")
                index[y] = j
                labels.append(y)
            images[k].append(j)
        i += 1
    return [Perm(im) for im in images], LabelledDomain(labels, index)


def set_action(G: PermGroup, seed_set) -> tuple[PermGroup, LabelledDomain]:
    """Action of ``G`` on the orbit of a set of points (labels are sorted tuples)."""
    seed = tuple(sorted(seed_set))
    perms, dom = orbit_action(G.gens, [seed], lambda s, g: tuple(sorted(g[x] for x in s)))
    return PermGroup(perms, len(dom)), dom


def set_stabiliser(G: PermGroup, points, cap: int = 10**7) -> PermGroup:
    """Setwise stabiliser by element filter."""
    s = frozenset(points)
    return filter_subgroup(G, lambda g: all(g[x] in s for x in s), cap)


# -- cosets -------------------------------------------------------------------

@dataclass
class CosetTable:
    G: PermGroup
    H: PermGroup
    reps: list
    degree: int
    kernel_order: int


def _canonical_rep(hlevels, g: tuple) -> tuple:
    """Lexicographically least element of the right coset ``H g``."""
    for lv in hlevels:
        best = min(lv.orbit, key=g.__getitem__)
        if best != lv.point:
            g = compose(lv.trans[best], g)
    return g


def coset_action(G: PermGroup, H: PermGroup, max_index: int = MAX_DOMAIN,
                 check_subgroup: bool = True) -> tuple[PermGroup, CosetTable]:
    """Action of ``G`` by right multiplication on the right cosets of ``H``.

    Coset 0 is ``H`` itself, so its stabiliser is ``H`` modulo the kernel.
    """
    if check_subgroup:
        for h in H.gens:
            if not G.contains(h):
                raise ValueError("H is not a subgroup of G")
    index = G.order() // H.order()
    if index > max_index:
        raise BudgetExceeded(f"index {index} exceeds {max_index}")
    hlevels = H.chain.levels
    ident = tuple(range(G.degree))
    start = _canonical_rep(hlevels, ident)
    reps = [start]
    lookup = {start: 0}
    gens = [tuple(g) for g in G.gens]
    images = [[] for _ in gens]
    i = 0
    while i < len(reps):
        r = reps[i]
        for k, x in enumerate(gens):
            c = _canonical_rep(hlevels, compose(r, x))
            j = lookup.get(c)
            if j is None:
                j = len(reps)
                lookup[c] = j
                reps.append(c)
            images[k].append(j)
        i += 1
    if len(reps) != index:
        raise AssertionError(f"found {len(reps)} cosets, expected {index}")
    perms = [Perm(im) for im in images]
    try:
        action = PermGroup(perms, index, order=G.order())
        action.order()
        kernel = 1
    except ValueError:
        action = PermGroup(perms, index)
        kernel = G.order() // action.order()
    return action, CosetTable(G, H, [Perm(r) for r in reps], index, kernel)


# -- pairs and products -------------------------------------------------------

def pair_action(G: PermGroup, max_degree: int = MAX_DOMAIN) -> tuple[PermGroup, LabelledDomain]:
    """Induced action on unordered pairs ``(i, j)`` with ``i < j``."""
    n = G.degree
    if comb(n, 2) > max_degree:
        raise BudgetExceeded(f"{comb(n, 2)} pairs exceed {max_degree}")
    dom = LabelledDomain.from_labels(combinations(range(n), 2))
    idx = dom.index
    perms = []
    for g in G.gens:
        perms.append(Perm(idx[(a, b) if a < b else (b, a)]
                          for a, b in ((g[x], g[y]) for x, y in dom.labels)))
    return PermGroup(perms, len(dom)), dom


def product_action(L: PermGroup, m: int, P: PermGroup | None = None,
                   max_degree: int = 10**7) -> tuple[PermGroup, LabelledDomain]:
    """``L wr P`` on ``Gamma^m``; point ``(x_0..x_{m-1})`` has index ``sum x_i k^i``.

    ``P`` permutes coordinates: the image of ``(x_i)`` under ``pi`` has
    coordinate ``pi[i]`` equal to ``x_i``.
    """
    k = L.degree
    deg = k**m
    if deg > max_degree:
        raise BudgetExceeded(f"degree {deg} exceeds {max_degree}")
    if P is None:
        P = PermGroup([], m)
    if P.degree != m:
        raise ValueError(f"top group has degree {P.degree}, expected {m}")
    weights = [k**i for i in range(m)]

    def idx(t):
        return sum(x * w for x, w in zip(t, weights))

    labels = [tuple((i // w) % k for w in weights) for i in range(deg)]
    dom = LabelledDomain(labels, {t: i for i, t in enumerate(labels)})
    order_labels = labels
    perms = []
    reps = [orb[0] for orb in P.orbits()] if m > 0 else []
    for c in reps:
        for g in L.gens:
            perms.append(Perm(idx(t[:c] + (g[t[c]],) + t[c + 1:]) for t in order_labels))
    for pi in P.gens:
        def move(t, pi=pi):
            out = [0] * m
            for i, x in enumerate(t):
                out[pi[i]] = x
            return tuple(out)
        perms.append(Perm(idx(move(t)) for t in order_labels))
    nontrivial = not L.is_trivial()
    order = L.order() ** m * P.order() if nontrivial else None
    return PermGroup(perms, deg, order=order), dom


# -- two-dimensional linear groups ----------------------------------------------

NAMED_EXTENSIONS = {
    "PSL": (),
    "PGL": ((1, 0),),
    "PSigmaL": ((0, 1),),
    "PGammaL": ((1, 0), (0, 1)),
}


def out_subgroup_order(extras, d: int, f: int) -> int:
    """Order of the subgroup of ``C_d x C_f`` generated by the pairs ``(a, j)``."""
    seen = {(0, 0)}
    frontier = [(0, 0)]
    gens = [(a % d, j % f) for a, j in extras]
    while frontier:
        a, j = frontier.pop()
        for b, k in gens:
            y = ((a + b) % d, (j + k) % f)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return len(seen)


@dataclass
class L2Model:
    """``G`` with ``L2(q) <= G <= PGammaL2(q)`` acting on the projective line."""

    q: int
    field: Field
    G: PermGroup
    domain: LabelledDomain
    extras: tuple
    name: str

    def point(self, a: int, b: int) -> int:
        """Index of the 1-space spanned by ``a e1 + b e2`` (field codes)."""
        return self.domain.index[rref(self.field, [(a, b)])]

    @property
    def mu(self) -> int:
        return self.field.primitive

    def sl2_gens(self) -> list[Perm]:
        return self.G.gens[: self._n_sl2]

    _n_sl2: int = 0


def _ext_name(extras) -> str:
    for name, ex in NAMED_EXTENSIONS.items():
        if tuple(extras) == ex:
            return name
    parts = []
    for a, j in extras:
        s = ("delta" if a == 1 else f"delta^{a}") if a else ""
        if j:
            s += ("*" if s else "") + ("phi" if j == 1 else f"phi^{j}")
        parts.append(s or "1")
    return "PSL.<" + ",".join(parts) + ">"


def psl2_group(q: int, ext="PSL") -> L2Model:
    """``<L2(q), delta^a phi^j ...>`` on the ``q+1`` points of the projective line.

    ``ext`` is a named extension (PSL, PGL, PSigmaL, PGammaL) or a sequence of
    ``(a, j)`` pairs, each adjoining ``delta^a phi^j`` with ``delta`` the image
    of ``diag(mu, 1)`` and ``phi`` the Frobenius map on coordinates.
    """
    p, f = prime_power(q)
    if q > 128:
        raise ValueError(f"q = {q} outside the supported range")
    F = field_make(p, f)
    extras = NAMED_EXTENSIONS[ext] if isinstance(ext, str) else tuple(tuple(e) for e in ext)
    dom = subspace_domain(F, 2, 1)
    minus1 = F.neg(1)
    sl2 = [Matrix(F, [[1, F.exp(k)], [0, 1]]) for k in range(f)]
    sl2.append(Matrix(F, [[0, 1], [minus1, 0]]))
    perms = [matrix_perm(A, dom) for A in sl2]
    delta = matrix_perm(Matrix.diag(F, [F.primitive, 1]), dom)
    phi = frobenius_perm(F, dom, 1)
    for a, j in extras:
        g = Perm.identity(len(dom))
        for _ in range(a):
            g = g * delta
        for _ in range(j):
            g = g * phi
        perms.append(g)
    d = gcd(2, q - 1)
    order = q * (q * q - 1) // d * out_subgroup_order(extras, d, f)
    G = PermGroup(perms, len(dom), order=order, name=f"{_ext_name(extras)}({q})")
    model = L2Model(q, F, G, dom, extras, _ext_name(extras))
    model._n_sl2 = len(sl2)
    return model


def psl2_socle(model: L2Model) -> PermGroup:
    return PermGroup(model.G.gens[: model._n_sl2], model.G.degree,
                     order=model.q * (model.q**2 - 1) // gcd(2, model.q - 1))


def _nonsplit_torus_gen(model: L2Model) -> Perm:
    """Image of the companion matrix of a primitive element of GF(q^2)."""
    F = model.field
    big = field_make(F.p, 2 * F.f)
    lam = big.primitive
    tr = big.add(lam, big.frob(lam, F.f))
    nm = big.mul(lam, big.frob(lam, F.f))
    emb = embedding(F, big)
    back = {c: i for i, c in enumerate(emb)}
    C = Matrix(F, [[0, 1], [F.neg(back[nm]), back[tr]]])
    return matrix_perm(C, model.domain)


def psl2_subgroup(model: L2Model, kind: str, cap: int = 10**6) -> PermGroup:
    """The point stabiliser ``H`` of ``G`` for one of the L2(q) subgroup types.

    ``kind``: ``P1`` (stabiliser of <e1>), ``split`` (stabiliser of the pair
    {<e1>, <e2>}), ``nonsplit`` (normaliser of a nonsplit torus), ``subline``
    (stabiliser of the subline over the prime field) or ``v4`` (normaliser of
    a Klein four-group of L2(p)).
    """
    G = model.G
    F = model.field
    if kind == "P1":
        return G.stabiliser(model.point(1, 0))
    if kind == "split":
        a, b = model.point(1, 0), model.point(0, 1)
        K = G.pointwise_stabiliser([a, b])
        swap = find_element_mapping(G, [a, b], [b, a])
        if swap is None:
            return K
        return PermGroup(list(K.gens) + [swap], G.degree, order=2 * K.order())
    if kind == "nonsplit":
        c = _nonsplit_torus_gen(model)
        t = c if model.q % 2 == 0 else c * c
        T = {tuple(x) for x in _cyclic_elements(t)}
        return filter_subgroup(G, lambda g: tuple(_conj(t, g)) in T, cap)
    if kind == "subline":
        pts = frozenset([model.point(1, a) for a in range(F.p)] + [model.point(0, 1)])
        return filter_subgroup(G, lambda g: all(g[x] in pts for x in pts), cap)
    if kind == "v4":
        if F.f != 1 or F.p == 2:
            raise ValueError("Klein four-group normalisers are built for odd prime q only")
        s = matrix_perm(Matrix(F, [[0, 1], [F.neg(1), 0]]), model.domain)
        a, b = _sum_of_two_squares(F, F.neg(1))
        t = matrix_perm(Matrix(F, [[a, b], [b, F.neg(a)]]), model.domain)
        V = {tuple(x) for x in (Perm.identity(G.degree), s, t, s * t)}
        return filter_subgroup(G, lambda g: tuple(_conj(s, g)) in V and tuple(_conj(t, g)) in V,
                               cap)
    raise ValueError(f"unknown L2 subgroup type {kind!r}")


def _conj(x, g):
    from .perm import conjugate
    return conjugate(x, g)


def _cyclic_elements(x: Perm) -> list[Perm]:
    out = [Perm.identity(len(x))]
    y = x
    while not y.is_identity():
        out.append(y)
        y = y * x
    return out


def _sum_of_two_squares(F: Field, target: int) -> tuple[int, int]:
    for a in range(F.q):
        for b in range(F.q):
            if F.add(F.mul(a, a), F.mul(b, b)) == target:
                return a, b
    raise ValueError("no representation as a sum of two squares")


# -- unitary model of L2(q) on orthogonal pairs ---------------------------------

@dataclass
class UnitaryPairModel:
    """``U2(q)`` with extensions acting on orthogonal pairs of nondegenerate 1-spaces.

    The natural module is GF(q^2)^2 with orthonormal basis ``u, v`` for the
    form ``(x, y) = x0 y0^q + x1 y1^q``.
    """

    q: int
    field: Field
    G: PermGroup
    domain: LabelledDomain
    extras: tuple

    def pair(self, w) -> int:
        return self.domain.index[self.pair_label(w)]

    def pair_label(self, w) -> tuple:
        F = self.field
        j = F.f // 2
        a, b = w
        perp = (F.frob(b, j), F.neg(F.frob(a, j)))
        return tuple(sorted([rref(F, [tuple(w)])[0], rref(F, [perp])[0]]))


def unitary_pair_model(q: int, extras=(), seed: int = 0) -> UnitaryPairModel:
    """``<SU2(q), delta^a phi^j ...>`` on the ``q(q-1)/2`` orthogonal pairs.

    ``delta`` is ``diag(lambda^(q-1), 1)`` and ``phi`` is ``(a u + b v) -> (a^p u + b^p v)``
    on GF(q^2); ``lambda`` is the primitive element of GF(q^2).
    """
    p, f = prime_power(q)
    F = field_make(p, 2 * f)
    j = f
    labels = set()
    for a in range(F.q):
        for b in range(F.q):
            if (a or b) and F.add(F.pow(a, q + 1), F.pow(b, q + 1)) != 0:
                w = (a, b)
                perp = (F.frob(b, j), F.neg(F.frob(a, j)))
                labels.add(tuple(sorted([rref(F, [w])[0], rref(F, [perp])[0]])))
    dom = LabelledDomain.from_labels(sorted(labels))

    def pair_perm(fn):
        return induced_perm(dom, lambda lab: tuple(sorted(rref(F, [fn(v)])[0] for v in lab)))

    def mat_fn(A):
        return lambda v: vec_mat(F, v, A.rows)

    rng = random.Random(seed)
    # b^(q+1) = t has q+1 solutions for t != 0 in GF(q)
    norms: dict[int, list[int]] = {}
    for b in range(F.q):
        norms.setdefault(F.pow(b, q + 1), []).append(b)

    def random_su2() -> Matrix:
        while True:
            a = rng.randrange(F.q)
            t = F.sub(1, F.pow(a, q + 1))
            bs = norms.get(t)
            if bs:
                b = rng.choice(bs)
                return Matrix(F, [[a, b], [F.neg(F.frob(b, j)), F.frob(a, j)]])

    socle_order = q * (q * q - 1) // gcd(2, q - 1)
    sl_perms = [pair_perm(mat_fn(random_su2())) for _ in range(4)]
    for attempt in range(20):
        # reaching the socle order certifies that the random matrices generate SU2(q)
        socle = PermGroup(sl_perms, len(dom), order=socle_order, seed=attempt)
        try:
            socle.order()
            break
        except ValueError:
            sl_perms.append(pair_perm(mat_fn(random_su2())))
    else:
        raise AssertionError("random SU2 elements failed to generate the group")
    lam = F.primitive
    delta = pair_perm(mat_fn(Matrix.diag(F, [F.pow(lam, q - 1), 1])))
    phi = pair_perm(lambda v: tuple(F.frob(x, 1) for x in v))
    extras = tuple(tuple(e) for e in extras)
    perms = list(sl_perms)
    for a, k in extras:
        g = Perm.identity(len(dom))
        for _ in range(a):
            g = g * delta
        for _ in range(k):
            g = g * phi
        perms.append(g)
    G = PermGroup(perms, len(dom)) if extras else socle
    return UnitaryPairModel(q, F, G, dom, extras)

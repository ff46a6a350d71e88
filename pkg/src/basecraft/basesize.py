"""Base sizes: lower bounds, searches, fixed point ratio sums and base probabilities.

All probabilities and ratio sums are exact :class:`fractions.Fraction` values;
floats appear only in Monte Carlo summaries.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt

from .perm import Perm, num_fixed, prime_order
from .permcore import (DEFAULT_ENUM_CAP, BudgetExceeded, PermGroup,
                       conjugates_and_intersection_order, orbits_of, prime_order_class_data)

DEFAULT_TRIALS = 10**4
DEFAULT_NODE_BUDGET = 10**6


# -- certificates ---------------------------------------------------------------

def group_payload(G: PermGroup) -> dict:
    return {"degree": G.degree, "generators": [g.to_list_str() for g in G.gens]}


def group_from_payload(payload: dict) -> PermGroup:
    n = payload["degree"]
    return PermGroup([Perm.parse(s, n) for s in payload["generators"]], n)


@dataclass
class BaseCertificate:
    points: list
    verified: bool = False

    def to_json(self, G: PermGroup | None = None) -> dict:
        out = {"kind": "base", "points": list(self.points), "verified": self.verified}
        if G is not None:
            out["group"] = group_payload(G)
        return out

    @staticmethod
    def replay(payload: dict) -> bool:
        """Re-verify a serialized certificate from its own data."""
        G = group_from_payload(payload["group"])
        return is_base(G, payload["points"])


@dataclass
class BaseSizeResult:
    """``lo <= b(G) <= hi``, each endpoint with a certificate."""

    lo: int
    lo_kind: str
    hi: int
    hi_certificate: BaseCertificate
    lo_detail: dict = field(default_factory=dict)
    nodes: int = 0

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> int | None:
        return self.lo if self.exact else None

    def to_json(self, G: PermGroup | None = None) -> dict:
        out = {
            "lo": self.lo,
            "lo_certificate": {"kind": self.lo_kind, **self.lo_detail},
            "hi": self.hi,
            "hi_certificate": self.hi_certificate.to_json(),
            "exact": self.value,
            "nodes": self.nodes,
        }
        if G is not None:
            out["group"] = group_payload(G)
        return out


# -- basic operations -----------------------------------------------------------

def is_base(G: PermGroup, points) -> bool:
    """True iff the pointwise stabiliser of ``points`` in ``G`` is trivial."""
    points = list(points)
    for p in points:
        if not 0 <= p < G.degree:
            raise ValueError(f"point {p} outside degree {G.degree}")
    if G.order() == 1:
        return True
    if not points:
        return False
    return G.pointwise_stabiliser(points).order() == 1


def log_lower_bound(G: PermGroup) -> int:
    """Least ``k`` with ``n^k >= |G|``, i.e. the ceiling of log|G| / log n."""
    n = G.degree
    order = G.order()
    if order == 1:
        return 0
    if n < 2:
        raise ValueError("degree must be at least 2")
    k = 0
    power = 1
    while power < order:
        power *= n
        k += 1
    return k


def _stabiliser_step(K: PermGroup, point: int, seed: int = 0) -> PermGroup:
    return K.pointwise_stabiliser([point], seed=seed)


def random_base_search(G: PermGroup, c: int, trials: int = DEFAULT_TRIALS,
                       seed: int = 0) -> BaseCertificate | None:
    """Look for a base of size ``c`` among random ``c``-subsets.

    Failure proves nothing.
    """
    if c < 0:
        raise ValueError("c must be nonnegative")
    if G.order() == 1:
        return BaseCertificate([], True)
    n = G.degree
    if c == 0 or c > n:
        return None
    rng = random.Random(seed)
    for _ in range(trials):
        pts = rng.sample(range(n), c)
        K = G
        for p in pts:
            K = _stabiliser_step(K, p)
            if K.order() == 1:
                return BaseCertificate(sorted(pts), True)
    return None


def greedy_base(G: PermGroup) -> list[int]:
    """A base chosen greedily: each point lies in a largest orbit of the current stabiliser."""
    pts = []
    K = G
    while K.order() > 1:
        orbs = orbits_of(K.gens, K.degree)
        best = max(orbs, key=len)
        pts.append(best[0])
        K = _stabiliser_step(K, best[0])
    return pts


class _Search:
    """Depth-first search for a base of a fixed size over orbit representatives."""

    def __init__(self, budget: int):
        self.budget = budget
        self.nodes = 0
        self.smallest_leaf = None

    def run(self, K: PermGroup, r: int, chosen: list):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"search exceeded {self.budget} nodes")
        order = K.order()
        if order == 1:
            return chosen
        if r == 0:
            self._leaf(order)
            return None
        orbs = [o for o in orbits_of(K.gens, K.degree) if len(o) > 1]
        if not orbs:
            self._leaf(order)
            return None
        largest = max(len(o) for o in orbs)
        # a stabiliser of r more points has order at least |K| / largest^r
        if largest**r < order:
            self._leaf(-(-order // largest**r))
            return None
        if r == 1:
            for o in orbs:
                if len(o) == order:
                    return chosen + [o[0]]
            self._leaf(order // largest)
            return None
        # fail-first: largest orbits (smallest stabilisers) first
        orbs.sort(key=lambda o: (-len(o), o[0]))
        for o in orbs:
            res = self.run(_stabiliser_step(K, o[0]), r - 1, chosen + [o[0]])
            if res is not None:
                return res
        return None

    def _leaf(self, order: int):
        if self.smallest_leaf is None or order < self.smallest_leaf:
            self.smallest_leaf = order


def exact_base_size(G: PermGroup, budget: int = DEFAULT_NODE_BUDGET,
                    start: int | None = None) -> BaseSizeResult:
    """Exact base size by exhausting orbit representatives of point stabilisers.

    For each ``k`` from the logarithmic bound upward, a depth-first search over
    orbit representatives either finds a base of size ``k`` or proves none
    exists (every ``k``-point stabiliser is nontrivial). If the node budget
    runs out the result is an interval.
    """
    hi_pts = greedy_base(G)
    hi = len(hi_pts)
    hi_cert = BaseCertificate(hi_pts, is_base(G, hi_pts))
    lo = log_lower_bound(G) if G.order() > 1 else 0
    lo_kind = "log-bound"
    lo_detail = {"order": G.order(), "degree": G.degree}
    if start is not None and start > lo:
        raise ValueError("start must not exceed the logarithmic bound")
    nodes = 0
    k = lo
    while k < hi:
        search = _Search(budget - nodes)
        try:
            found = search.run(G, k, [])
        except BudgetExceeded:
            return BaseSizeResult(lo, lo_kind, hi, hi_cert, lo_detail, budget)
        nodes += search.nodes
        if found is not None:
            hi = k
            hi_cert = BaseCertificate(found, is_base(G, found))
            break
        lo = k + 1
        lo_kind = "exhaustive"
        lo_detail = {"no_base_of_size": k, "nodes": search.nodes,
                     "min_stabiliser_order_at_least": search.smallest_leaf}
        k += 1
    return BaseSizeResult(lo, lo_kind, hi, hi_cert, lo_detail, nodes)


# -- fixed point ratio sums -----------------------------------------------------

@dataclass
class QRow:
    rep: Perm | None
    prime: int
    class_size: int
    fixed_points: int
    fpr: Fraction
    contribution: Fraction


@dataclass
class QReport:
    """``Q(G, c) = sum |x^G| fpr(x)^c`` over classes of elements of prime order.

    ``mode`` is ``exact`` (rows are conjugacy classes), ``exact-stabiliser``
    (rows group elements by prime and fixed-point count, computed from a point
    stabiliser) or ``partial-lower-bound`` (never certifies).
    """

    c: int
    degree: int
    rows: list
    total: Fraction
    mode: str

    @property
    def certifies(self) -> bool:
        return self.mode != "partial-lower-bound" and self.total < 1

    def to_json(self) -> dict:
        return {
            "c": self.c,
            "degree": self.degree,
            "mode": self.mode,
            "total": str(self.total),
            "total_float": float(self.total),
            "certifies_b_at_most_c": self.certifies,
            "rows": [
                {
                    "rep": r.rep.to_cycle_str() if r.rep is not None else None,
                    "prime": r.prime,
                    "class_size": r.class_size,
                    "fixed_points": r.fixed_points,
                    "fpr": str(r.fpr),
                    "contribution": str(r.contribution),
                }
                for r in self.rows
            ],
        }


def q_bound(G: PermGroup, c: int, cap: int = DEFAULT_ENUM_CAP, classes=None,
            seed: int = 0) -> QReport:
    """``Q(G, c)`` as an exact rational.

    With ``|G| <= cap`` the sum runs over conjugacy classes of ``G``. Otherwise,
    for transitive ``G`` with a point stabiliser of order at most ``cap``, the
    identity ``sum_{x in G} fix(x)^c = n sum_{x in G_a} fix(x)^(c-1)`` gives the
    exact total from the stabiliser alone. Failing both, the report is a
    partial lower bound.
    """
    return q_bounds(G, [c], cap, classes, seed)[c]


def q_bounds(G: PermGroup, cs, cap: int = DEFAULT_ENUM_CAP, classes=None,
             seed: int = 0) -> dict:
    """:func:`q_bound` for several ``c`` sharing one pass over the group."""
    mode, data = q_class_data(G, cap, classes, seed)
    return {c: q_report(G.degree, c, mode, data) for c in cs}


def q_class_data(G: PermGroup, cap: int = DEFAULT_ENUM_CAP, classes=None, seed: int = 0):
    """``(mode, [(rep, prime, class_size, fixed_points)])`` behind :func:`q_bound`."""
    if classes is None and G.order() <= cap:
        classes = prime_order_class_data(G, cap)
    if classes is not None and all(cd.complete for cd in classes) and G.order() <= cap:
        return "exact", [(cd.rep, cd.prime, cd.class_size, cd.fixed_points) for cd in classes]
    if G.is_transitive():
        H = G.stabiliser(0)
        if H.order() <= cap:
            return "exact-stabiliser", _stabiliser_class_data(H, G.degree)
    classes = prime_order_class_data(G, cap, seed=seed)
    return "partial-lower-bound", [(cd.rep, cd.prime, cd.class_size, cd.fixed_points)
                                   for cd in classes if cd.complete]


def q_report(n: int, c: int, mode: str, data) -> QReport:
    rows = []
    for rep, r, size, f in data:
        fpr = Fraction(f, n)
        rows.append(QRow(rep, r, size, f, fpr, size * fpr**c))
    return QReport(c, n, rows, sum((row.contribution for row in rows), Fraction(0)), mode)


def _stabiliser_class_data(H: PermGroup, n: int) -> list:
    counts: dict = {}
    reps: dict = {}
    for h in H.chain.elements():
        r = prime_order(h)
        if r:
            key = (r, num_fixed(h))
            counts[key] = counts.get(key, 0) + 1
            reps.setdefault(key, h)
    # each x in G with f fixed points lies in exactly f point stabilisers
    return [(Perm(reps[key]), key[0], n * m // key[1], key[1])
            for key, m in sorted(counts.items())]


def lemma_calc_bound(A: int, B: int, c: int) -> Fraction:
    """``B (A/B)^c``: the bound on ``sum |x_i^G| fpr(x_i)^c`` when ``sum |x_i^G ∩ H| <= A``
    and every ``|x_i^G| >= B``."""
    if A < 0 or B < 1:
        raise ValueError("need A >= 0 and B >= 1")
    return B * Fraction(A, B) ** c


# -- base probabilities ---------------------------------------------------------

def count_base_tuples(K: PermGroup, d: int, budget: int = DEFAULT_NODE_BUDGET) -> int:
    """Number of ``d``-tuples of points whose pointwise stabiliser in ``K`` is trivial."""
    counter = _TupleCounter(K.degree, budget)
    return counter.count(K, d)


class _TupleCounter:
    def __init__(self, n: int, budget: int):
        self.n = n
        self.budget = budget
        self.nodes = 0

    def count(self, K: PermGroup, d: int) -> int:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"tuple count exceeded {self.budget} nodes")
        order = K.order()
        if order == 1:
            return self.n**d
        if d == 0:
            return 0
        orbs = orbits_of(K.gens, K.degree)
        largest = max(len(o) for o in orbs)
        if largest**d < order:
            return 0
        if d == 1:
            return sum(len(o) for o in orbs if len(o) == order)
        total = 0
        fixed = sum(1 for o in orbs if len(o) == 1)
        if fixed:
            total += fixed * self.count(K, d - 1)
        for o in orbs:
            if len(o) > 1:
                total += len(o) * self.count(_stabiliser_step(K, o[0]), d - 1)
        return total


def exact_base_probability(G: PermGroup, c: int, budget: int = DEFAULT_NODE_BUDGET) -> Fraction:
    """Probability that a uniform ``c``-tuple of points is a base, exactly."""
    return Fraction(count_base_tuples(G, c, budget), G.degree**c)


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054):
    if trials == 0:
        return (0.0, 1.0)
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    # pin the endpoints exactly, since rounding otherwise leaves 0 or 1 just outside
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return (lo, hi)


class _Node:
    """A stabiliser in the tuple-canonicalisation tree, built on first use."""

    __slots__ = ("K", "order", "rep_of", "parent", "ginv", "children", "n")

    def __init__(self, K: PermGroup):
        self.K = K
        self.order = K.order()
        self.children = {}
        self.rep_of = None

    def _prepare(self):
        n = self.K.degree
        gens = [tuple(g) for g in self.K.gens]
        self.ginv = [_inv(g) for g in gens]
        rep_of = [-1] * n
        parent = [None] * n
        for start in range(n):
            if rep_of[start] >= 0:
                continue
            rep_of[start] = start
            queue = [start]
            for x in queue:
                for k, g in enumerate(gens):
                    y = g[x]
                    if rep_of[y] < 0:
                        rep_of[y] = start
                        parent[y] = k
                        queue.append(y)
        self.rep_of = rep_of
        self.parent = parent

    def canonicalise(self, pts: list) -> int:
        """Map ``pts[0]`` to its orbit representative, carrying the other points along."""
        if self.rep_of is None:
            self._prepare()
        p = pts[0]
        rep = self.rep_of[p]
        parent = self.parent
        ginv = self.ginv
        while p != rep:
            h = ginv[parent[p]]
            for i in range(len(pts)):
                pts[i] = h[pts[i]]
            p = pts[0]
        return rep

    def child(self, rep: int) -> "_Node":
        node = self.children.get(rep)
        if node is None:
            node = _Node(_stabiliser_step(self.K, rep))
            self.children[rep] = node
        return node


def _inv(g: tuple) -> tuple:
    out = [0] * len(g)
    for i, j in enumerate(g):
        out[j] = i
    return tuple(out)


class BaseTester:
    """Tests many tuples for the base property, sharing stabiliser computations."""

    def __init__(self, G: PermGroup):
        self.root = _Node(G)

    def is_base(self, pts) -> bool:
        pts = list(pts)
        node = self.root
        while True:
            if node.order == 1:
                return True
            if not pts:
                return False
            rep = node.canonicalise(pts)
            pts = pts[1:]
            node = node.child(rep)


@dataclass
class MCEstimate:
    successes: int
    samples: int
    interval: tuple

    @property
    def estimate(self) -> float:
        return self.successes / self.samples if self.samples else 0.0

    def to_json(self) -> dict:
        return {"successes": self.successes, "samples": self.samples,
                "estimate": self.estimate, "wilson95": list(self.interval)}


BATCH = 1000


def mc_base_probability(G: PermGroup, c: int, samples: int, seed: int,
                        threads: int = 1) -> MCEstimate:
    """Monte Carlo estimate of the base probability with a Wilson 95% interval.

    Samples are drawn in fixed-size batches, each with its own seed derived
    from ``seed``, so the result does not depend on ``threads``.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    n = G.degree
    tester = BaseTester(G)
    tester.is_base([0] * c)  # builds the root eagerly before threads share it
    sizes = [BATCH] * (samples // BATCH) + ([samples % BATCH] if samples % BATCH else [])

    def run(i: int) -> int:
        rng = random.Random(f"{seed}:{i}")
        hits = 0
        for _ in range(sizes[i]):
            if tester.is_base([rng.randrange(n) for _ in range(c)]):
                hits += 1
        return hits

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hits = sum(pool.map(run, range(len(sizes))))
    else:
        hits = sum(run(i) for i in range(len(sizes)))
    return MCEstimate(hits, samples, wilson_interval(hits, samples))


# -- double cosets --------------------------------------------------------------

@dataclass
class NoRegularOrbitCertificate:
    reps: list
    sizes: list
    slack: int
    group_order: int
    h_order: int

    def to_json(self, G: PermGroup | None = None, H: PermGroup | None = None) -> dict:
        out = {
            "kind": "no-regular-orbit",
            "reps": [Perm(r).to_list_str() for r in self.reps],
            "sizes": list(self.sizes),
            "slack": self.slack,
            "group_order": self.group_order,
            "h_order": self.h_order,
        }
        if G is not None:
            out["G"] = group_payload(G)
        if H is not None:
            out["H"] = group_payload(H)
        return out

    @staticmethod
    def replay(payload: dict) -> bool:
        G = group_from_payload(payload["G"])
        H = group_from_payload(payload["H"])
        n = G.degree
        reps = [Perm.parse(s, n) for s in payload["reps"]]
        return verify_no_regular_orbit(G, H, reps)


def double_coset_size(H: PermGroup, x, cap: int = DEFAULT_ENUM_CAP) -> int:
    """``|HxH| = |H|^2 / |H ∩ H^x|``."""
    h = H.order()
    return h * h // conjugates_and_intersection_order(H, x, cap)


def _coset_orbit(H: PermGroup, x: tuple) -> set:
    """Canonical representatives of the right cosets ``Hy`` inside ``HxH``."""
    from .actions import _canonical_rep
    from .perm import compose
    levels = H.chain.levels
    start = _canonical_rep(levels, tuple(x))
    seen = {start}
    queue = [start]
    gens = [tuple(g) for g in H.gens]
    for y in queue:
        for g in gens:
            z = _canonical_rep(levels, compose(y, g))
            if z not in seen:
                seen.add(z)
                queue.append(z)
    return seen


def verify_no_regular_orbit(G: PermGroup, H: PermGroup, reps) -> bool:
    """Check conditions (a) and (b) and that the reps lie in distinct double cosets."""
    from .actions import _canonical_rep
    h = H.order()
    g = G.order()
    total = 0
    seen: set = set()
    for x in reps:
        if not G.contains(x):
            return False
        key = _canonical_rep(H.chain.levels, tuple(x))
        if key in seen:
            return False
        orbit = _coset_orbit(H, x)
        seen |= orbit
        size = double_coset_size(H, x)
        if size != h * len(orbit) or size >= h * h:
            return False
        total += size
    return total > g - h * h


def no_regular_orbit_certificate(G: PermGroup, H: PermGroup, trials: int = 2000,
                                 seed: int = 0, cap: int = DEFAULT_ENUM_CAP):
    """Certificate that ``H`` has no regular orbit on the cosets of ``H``.

    Random double coset representatives are accumulated first; if that does
    not succeed the full double coset decomposition is computed. Returns
    ``(certificate or None, info)``; ``info["regular_double_cosets"]`` is set
    when the full decomposition finds a regular orbit, which makes a
    certificate impossible.
    """
    from .actions import _canonical_rep
    h = H.order()
    g = G.order()
    if h > cap:
        raise BudgetExceeded(f"|H| = {h} exceeds cap {cap}")
    target = g - h * h
    levels = H.chain.levels
    reps, sizes, seen = [], [], set()
    total = 0
    regular = 0

    def consider(x):
        nonlocal total, regular
        key = _canonical_rep(levels, tuple(x))
        if key in seen:
            return
        orbit = _coset_orbit(H, x)
        seen.update(orbit)
        size = double_coset_size(H, x, cap)
        if size >= h * h:
            regular += 1
            return
        reps.append(tuple(x))
        sizes.append(size)
        total += size

    consider(tuple(range(G.degree)))
    rng = random.Random(seed)
    for _ in range(trials):
        if total > target:
            break
        consider(G.chain.random_element(rng))
    phase = "random"
    if total <= target:
        phase = "systematic"
        from .actions import coset_action
        _, table = coset_action(G, H)
        for r in table.reps:
            consider(tuple(r))
    info = {"phase": phase, "double_cosets_found": len(reps) + regular,
            "regular_double_cosets": regular, "covered": total + regular * h * h,
            "group_order": g}
    if total > target:
        cert = NoRegularOrbitCertificate(reps, sizes, total - target, g, h)
        return cert, info
    return None, info


# -- bases from coset intersections ---------------------------------------------

def coset_stabiliser_order(H: PermGroup, xs, cap: int = DEFAULT_ENUM_CAP) -> int:
    """``|H ∩ H^x1 ∩ ...|``: the pointwise stabiliser of the cosets ``H, H x1, ...``.

    Works in the representation of ``G`` without building the coset action.
    """
    if H.order() > cap:
        raise BudgetExceeded(f"|H| = {H.order()} exceeds cap {cap}")
    from .perm import compose, invert
    ch = H.chain
    conj = [(tuple(x), invert(tuple(x))) for x in xs]
    count = 0
    for h in ch.elements():
        # h fixes H x iff x h x^-1 lies in H
        if all(ch.contains(compose(compose(x, h), xi)) for x, xi in conj):
            count += 1
    return count


def random_coset_base(G: PermGroup, H: PermGroup, k: int, trials: int = 200, seed: int = 0,
                      cap: int = DEFAULT_ENUM_CAP):
    """Random search for ``x1..x(k-1)`` making ``{H, H x1, ...}`` a base for ``G`` on ``G/H``."""
    from .perm import compose, invert
    if H.order() > cap:
        raise BudgetExceeded(f"|H| = {H.order()} exceeds cap {cap}")
    if k < 1:
        return None
    ch = H.chain
    ident = tuple(range(H.degree))
    nontrivial = [h for h in ch.elements() if h != ident]
    rng = random.Random(seed)
    for _ in range(trials):
        xs = [G.chain.random_element(rng) for _ in range(k - 1)]
        alive = nontrivial
        for x in xs:
            xi = invert(x)
            alive = [h for h in alive if ch.contains(compose(compose(x, h), xi))]
            if not alive:
                break
        if not alive:
            return xs
    return None


def coset_base_size(G: PermGroup, H: PermGroup, trials: int = 200, seed: int = 0,
                    cap: int = DEFAULT_ENUM_CAP) -> BaseSizeResult:
    """Base size of ``G`` on ``G/H`` from the logarithmic bound and random coset bases.

    Exact only when the random search meets the lower bound.
    """
    n = G.order() // H.order()
    order = G.order()
    lo = 0
    power = 1
    while power < order:
        power *= n
        lo += 1
    k = lo
    while True:
        xs = random_coset_base(G, H, k, trials, seed, cap)
        if xs is not None:
            reps = [Perm(tuple(range(G.degree))).to_list_str()] + [Perm(x).to_list_str() for x in xs]
            verified = coset_stabiliser_order(H, xs, cap) == 1
            cert = BaseCertificate(reps, verified)
            return BaseSizeResult(lo, "log-bound", k, cert, {"order": order, "degree": n})
        k += 1
        if k > n:
            raise AssertionError("no base found; the action is not faithful")

"""Dense matrices over GF(q), classical forms and classical generator sets.

Vectors are row vectors and matrices act on the right (``v -> v A``), which
matches the right action of permutations. Entries are field codes (see
:mod:`basecraft.gf`).

Standard forms (``n = 2m`` or ``2m + 1``):

* symplectic: Gram matrix antidiagonal, ``+1`` above the antidiagonal midpoint
  and ``-1`` below, so ``B(e_i, e_{n-1-i}) = 1`` for ``i < m``;
* unitary over GF(q^2): antidiagonal ones, twisted by ``a -> a^q``;
* quadratic plus: ``Q(x) = sum_{i<m} x_i x_{n-1-i}``;
* quadratic minus: hyperbolic pairs plus an anisotropic middle block
  ``x^2 + a x y + b y^2`` with ``X^2 + aX + b`` the modulus of GF(q^2);
* quadratic odd (q odd): hyperbolic pairs plus ``x_m^2``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import prod

from .gf import Field, field_make, prime_power


class SingularMatrix(ValueError):
    pass


class Matrix:
    """An immutable n x n matrix over a :class:`Field`, entries stored as codes."""

    __slots__ = ("field", "rows", "n")

    def __init__(self, field: Field, rows):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        n = len(rows)
        for r in rows:
            if len(r) != n:
                raise ValueError("matrix must be square")
            for x in r:
                if not 0 <= x < field.q:
                    raise ValueError(f"entry {x} not in {field!r}")
        self.field = field
        self.rows = rows
        self.n = n

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, field: Field, entries) -> "Matrix":
        entries = list(entries)
        n = len(entries)
        return cls(field, [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def elementary(cls, field: Field, n: int, i: int, j: int, a: int) -> "Matrix":
        """Identity plus ``a`` in position (i, j), i != j."""
        rows = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
        rows[i][j] = a
        return cls(field, rows)

    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field!r} vs {other.field!r}")
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __mul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        F = self.field
        add, mul = F.add, F.mul
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                s = 0
                for a, b in zip(r, c):
                    if a and b:
                        s = add(s, mul(a, b))
                row.append(s)
            out.append(row)
        return Matrix(F, out)

    def __pow__(self, e: int) -> "Matrix":
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = Matrix.identity(self.field, self.n)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.field == other.field and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"Matrix({self.field!r}, {[list(r) for r in self.rows]})"

    def entry(self, i: int, j: int) -> int:
        return self.rows[i][j]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, list(zip(*self.rows)))

    def frob(self, j: int = 1) -> "Matrix":
        F = self.field
        return Matrix(F, [[F.frob(x, j) for x in r] for r in self.rows])

    def conj_transpose(self, j: int) -> "Matrix":
        """Transpose of the entrywise ``a -> a^(p^j)`` image."""
        return self.frob(j).transpose()

    def apply(self, v) -> tuple:
        """Row vector ``v`` times this matrix."""
        return vec_mat(self.field, v, self.rows)

    def det(self) -> int:
        F = self.field
        m = [list(r) for r in self.rows]
        n = self.n
        d = 1
        for col in range(n):
            piv = next((r for r in range(col, n) if m[r][col]), None)
            if piv is None:
                return 0
            if piv != col:
                m[col], m[piv] = m[piv], m[col]
                d = F.neg(d)
            pv = m[col][col]
            d = F.mul(d, pv)
            inv = F.inv(pv)
            for r in range(col + 1, n):
                if m[r][col]:
                    factor = F.mul(m[r][col], inv)
                    m[r] = [F.sub(a, F.mul(factor, b)) for a, b in zip(m[r], m[col])]
        return d

    def inverse(self) -> "Matrix":
        F = self.field
        n = self.n
        m = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((r for r in range(col, n) if m[r][col]), None)
            if piv is None:
                raise SingularMatrix("matrix is singular")
            m[col], m[piv] = m[piv], m[col]
            inv = F.inv(m[col][col])
            m[col] = [F.mul(inv, a) for a in m[col]]
            for r in range(n):
                if r != col and m[r][col]:
                    factor = m[r][col]
                    m[r] = [F.sub(a, F.mul(factor, b)) for a, b in zip(m[r], m[col])]
        return Matrix(F, [r[n:] for r in m])

    def is_scalar(self) -> bool:
        a = self.rows[0][0]
        return all(self.rows[i][j] == (a if i == j else 0)
                   for i in range(self.n) for j in range(self.n))

    def codes(self) -> list[int]:
        """Row-major serialization."""
        return [x for r in self.rows for x in r]

    @classmethod
    def from_codes(cls, field: Field, n: int, codes) -> "Matrix":
        codes = list(codes)
        if len(codes) != n * n:
            raise ValueError(f"expected {n * n} codes, got {len(codes)}")
        return cls(field, [codes[i * n:(i + 1) * n] for i in range(n)])


def vec_mat(F: Field, v, rows) -> tuple:
    add, mul = F.add, F.mul
    out = [0] * len(rows[0])
    for a, r in zip(v, rows):
        if a:
            for j, b in enumerate(r):
                if b:
                    out[j] = add(out[j], mul(a, b))
    return tuple(out)


def dot(F: Field, u, v) -> int:
    s = 0
    for a, b in zip(u, v):
        if a and b:
            s = F.add(s, F.mul(a, b))
    return s


@dataclass(frozen=True)
class ClassicalForm:
    """A reflexive form, optionally with a quadratic form polarising to it.

    ``gram`` gives ``B(x, y) = x G sigma(y)^T`` with ``sigma = a -> a^(p^twist)``.
    ``quad`` is an upper-triangular coefficient table with
    ``Q(x) = sum_{i<=j} quad[i][j] x_i x_j``.
    """

    kind: str
    gram: Matrix
    twist: int = 0
    quad: tuple | None = None

    @property
    def field(self) -> Field:
        return self.gram.field

    def bilinear(self, x, y) -> int:
        F = self.field
        ys = [F.frob(b, self.twist) for b in y] if self.twist else y
        return dot(F, vec_mat(F, x, self.gram.rows), ys)

    def quadratic(self, x) -> int:
        if self.quad is None:
            raise ValueError(f"{self.kind} form has no quadratic form")
        F = self.field
        s = 0
        n = len(x)
        for i in range(n):
            if not x[i]:
                continue
            for j in range(i, n):
                c = self.quad[i][j]
                if c and x[j]:
                    s = F.add(s, F.mul(c, F.mul(x[i], x[j])))
        return s

    def is_isotropic(self, x) -> bool:
        """Singular for quadratic forms, isotropic for the others."""
        if self.quad is not None:
            return self.quadratic(x) == 0
        return self.bilinear(x, x) == 0


def preserves_form(A: Matrix, form: ClassicalForm | None) -> bool:
    """True iff ``A`` is an isometry of ``form`` (and of its quadratic form)."""
    if form is None or form.kind == "none":
        return True
    if A.n != form.gram.n:
        raise ValueError("dimension mismatch")
    G = form.gram
    At = A.conj_transpose(form.twist) if form.twist else A.transpose()
    if A * G * At != G:
        return False
    if form.quad is not None:
        for i in range(A.n):
            e = [1 if k == i else 0 for k in range(A.n)]
            if form.quadratic(A.apply(e)) != form.quadratic(e):
                return False
    return True


# -- standard forms ---------------------------------------------------------

def symplectic_form(F: Field, n: int) -> ClassicalForm:
    if n % 2:
        raise ValueError("symplectic forms need even dimension")
    m = n // 2
    minus1 = F.neg(1)
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][n - 1 - i] = 1 if i < m else minus1
    return ClassicalForm("symplectic", Matrix(F, rows))


def unitary_form(F: Field, n: int) -> ClassicalForm:
    """Antidiagonal Hermitian form on GF(q^2)^n; ``F`` must have even degree."""
    if F.f % 2:
        raise ValueError("unitary forms live over GF(q^2)")
    rows = [[1 if j == n - 1 - i else 0 for j in range(n)] for i in range(n)]
    return ClassicalForm("unitary", Matrix(F, rows), twist=F.f // 2)


def quadratic_form(F: Field, n: int, kind: str) -> ClassicalForm:
    """``kind`` in {"plus", "minus", "odd"}."""
    quad = [[0] * n for _ in range(n)]
    if kind == "plus":
        if n % 2:
            raise ValueError("plus type needs even dimension")
        for i in range(n // 2):
            quad[i][n - 1 - i] = 1
    elif kind == "minus":
        if n % 2 or n < 2:
            raise ValueError("minus type needs even dimension")
        m = n // 2
        for i in range(m - 1):
            quad[i][n - 1 - i] = 1
        # x^2 + a x y + b y^2 anisotropic: X^2 + aX + b is the GF(q^2) modulus
        big = field_make(F.p, 2 * F.f)
        if F.f == 1:
            b_code, a_code = big.modulus[0], big.modulus[1]
        else:
            b_code, a_code = _min_poly_quadratic(F, big)
        quad[m - 1][m - 1] = 1
        quad[m - 1][m] = a_code
        quad[m][m] = b_code
    elif kind == "odd":
        if n % 2 == 0:
            raise ValueError("odd type needs odd dimension")
        if F.p == 2:
            raise ValueError("odd-dimensional orthogonal groups need odd q")
        m = n // 2
        for i in range(m):
            quad[i][n - 1 - i] = 1
        quad[m][m] = 1
    else:
        raise ValueError(f"unknown quadratic kind {kind!r}")
    gram = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            c = quad[i][j]
            if not c:
                continue
            if i == j:
                gram[i][i] = F.add(gram[i][i], F.add(c, c))
            else:
                gram[i][j] = F.add(gram[i][j], c)
                gram[j][i] = F.add(gram[j][i], c)
    return ClassicalForm("quadratic-" + kind, Matrix(F, gram), quad=tuple(map(tuple, quad)))


def _min_poly_quadratic(F: Field, big: Field) -> tuple[int, int]:
    """(b, a) for the least irreducible X^2 + aX + b over a non-prime field F."""
    for a in range(F.q):
        for b in range(F.q):
            # irreducible iff no root in F
            if all(F.add(F.add(F.mul(x, x), F.mul(a, x)), b) for x in range(F.q)):
                return b, a
    raise AssertionError("no irreducible quadratic found")


# -- order formulas -----------------------------------------------------------

def order_formula(family: str, n: int, q: int) -> int:
    """Order of the classical group ``family(n, q)`` (q the defining field for SU/GU)."""
    if family == "GL":
        return q ** (n * (n - 1) // 2) * prod(q**i - 1 for i in range(1, n + 1))
    if family == "SL":
        return order_formula("GL", n, q) // (q - 1)
    if family == "GU":
        return q ** (n * (n - 1) // 2) * prod(q**i - (-1) ** i for i in range(1, n + 1))
    if family == "SU":
        return order_formula("GU", n, q) // (q + 1)
    if family == "Sp":
        m = n // 2
        return q ** (m * m) * prod(q ** (2 * i) - 1 for i in range(1, m + 1))
    if family in ("OmegaPlus", "OmegaMinus"):
        m = n // 2
        eps = 1 if family == "OmegaPlus" else -1
        o = 2 * q ** (m * (m - 1)) * (q**m - eps) * prod(q ** (2 * i) - 1 for i in range(1, m))
        return o // (4 if q % 2 else 2)
    if family == "SO-odd":
        m = n // 2
        return q ** (m * m) * prod(q ** (2 * i) - 1 for i in range(1, m + 1))
    raise ValueError(f"unknown family {family!r}")


def centre_order(family: str, n: int, q: int) -> int:
    """Order of the scalar subgroup of ``family(n, q)``."""
    from math import gcd
    if family == "GL":
        return q - 1
    if family == "SL":
        return gcd(n, q - 1)
    if family == "GU":
        return q + 1
    if family == "SU":
        return gcd(n, q + 1)
    if family == "Sp":
        return gcd(2, q - 1)
    if family == "OmegaPlus":
        m = n // 2
        return 2 if q % 2 and (q**m - 1) % 4 == 0 else 1
    if family == "OmegaMinus":
        m = n // 2
        return 2 if q % 2 and (q**m + 1) % 4 == 0 else 1
    if family == "SO-odd":
        return 1
    raise ValueError(f"unknown family {family!r}")


# -- generators ---------------------------------------------------------------

SUPPORTED = {
    "SL": (range(2, 7), 13),
    "GL": (range(2, 7), 13),
    "SU": (range(2, 6), 4),
    "GU": (range(2, 6), 4),
    "Sp": ((4,), 8),
    "OmegaPlus": ((4, 6, 8), 3),
    "OmegaMinus": ((4, 6, 8), 3),
    "SO-odd": ((3, 5, 7), 3),
}


@dataclass(frozen=True)
class MatGroupSpec:
    family: str
    n: int
    q: int

    @classmethod
    def parse(cls, text: str) -> "MatGroupSpec":
        """Parse ``family-n-q``, e.g. ``SU-5-2``."""
        parts = text.rsplit("-", 2)
        if len(parts) != 3:
            raise ValueError(f"group spec must look like FAMILY-n-q, got {text!r}")
        return cls(parts[0], int(parts[1]), int(parts[2]))

    def __str__(self):
        return f"{self.family}-{self.n}-{self.q}"

    def check(self) -> None:
        if self.family not in SUPPORTED:
            raise ValueError(f"unsupported family {self.family!r}")
        dims, qmax = SUPPORTED[self.family]
        if self.n not in dims or self.q > qmax:
            raise ValueError(f"unsupported group {self}")
        prime_power(self.q)
        if self.family == "SO-odd" and self.q % 2 == 0:
            raise ValueError("SO-odd needs odd q")

    @property
    def field(self) -> Field:
        p, f = prime_power(self.q)
        if self.family in ("SU", "GU"):
            return field_make(p, 2 * f)
        return field_make(p, f)

    def order(self) -> int:
        return order_formula(self.family, self.n, self.q)


def _transvection(F: Field, n: int, v, w, a: int) -> Matrix:
    """``x -> x + a * (x . w) v`` as a matrix: I + a * w^T v."""
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            e = 1 if i == j else 0
            row.append(F.add(e, F.mul(a, F.mul(w[i], v[j]))))
        rows.append(row)
    return Matrix(F, rows)


def _linear_map(F: Field, n: int, fn) -> Matrix:
    """Matrix of the linear map ``fn`` (rows are images of basis vectors)."""
    return Matrix(F, [fn(tuple(1 if k == i else 0 for k in range(n))) for i in range(n)])


def _sl_gens(F: Field, n: int) -> list[Matrix]:
    gens = [Matrix.elementary(F, n, 0, 1, F.exp(k)) for k in range(F.f)]
    if n == 2:
        gens.append(Matrix(F, [[0, 1], [F.neg(1), 0]]))
    else:
        rows = [[0] * n for _ in range(n)]
        for i in range(n - 1):
            rows[i][i + 1] = 1
        rows[n - 1][0] = 1 if n % 2 else F.neg(1)
        gens.append(Matrix(F, rows))
    if F.q > 3:
        d = [1] * n
        d[0], d[1] = F.primitive, F.inv(F.primitive)
        gens.append(Matrix.diag(F, d))
    return gens


def _sp_gens(F: Field, n: int, form: ClassicalForm) -> list[Matrix]:
    gens = []
    basis = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    vecs = list(basis) + [tuple(F.add(a, b) for a, b in zip(basis[i], basis[i + 1]))
                          for i in range(n - 1)]
    for v in vecs:
        for k in range(F.f):
            a = F.exp(k)
            gens.append(_linear_map(F, n, lambda x, v=v, a=a: tuple(
                F.add(xi, F.mul(F.mul(a, form.bilinear(x, v)), vi)) for xi, vi in zip(x, v))))
    return gens


def _unitary_gens(F: Field, n: int, form: ClassicalForm, general: bool) -> list[Matrix]:
    j = form.twist
    q = F.p ** j  # the base field size: F = GF(q^2)
    # trace-zero scalars a + a^q = 0
    tr0 = [a for a in range(1, F.q) if F.add(a, F.frob(a, j)) == 0]
    isotropic = [_unit(n, i) for i in range(n) if form.bilinear(_unit(n, i), _unit(n, i)) == 0]
    # one isotropic vector with each support of size 2 or 3, leading coordinate 1
    from itertools import combinations as _comb, product as _product
    for size in (2, 3):
        for support in _comb(range(n), size):
            for rest in _product(range(1, F.q), repeat=size - 1):
                v = [0] * n
                v[support[0]] = 1
                for pos, c in zip(support[1:], rest):
                    v[pos] = c
                v = tuple(v)
                if form.bilinear(v, v) == 0:
                    isotropic.append(v)
                    break
    gens = []
    # trace-zero scalars form a 1-space over GF(q); take an additive GF(p)-basis of it
    nu = F.pow(F.primitive, q + 1)
    scal = [F.mul(tr0[0], F.pow(nu, k)) for k in range(j)]
    for w in isotropic:
        for a in scal:
            gens.append(_linear_map(F, n, lambda x, w=w, a=a: tuple(
                F.add(xi, F.mul(F.mul(a, form.bilinear(x, w)), wi)) for xi, wi in zip(x, w))))
    lam = F.primitive
    if n >= 3:
        d = [1] * n
        d[0] = lam
        d[n - 1] = F.inv(F.frob(lam, j))
        if n % 2:
            d[n // 2] = F.pow(lam, q - 1)
        else:
            d[1] = F.frob(lam, j)
            d[n - 2] = F.inv(lam)
        gens.append(Matrix.diag(F, d))
    if n == 3 and q == 2:
        # transvections only generate 3^(1+2):2 here; adjoin a quaternion subgroup
        gens.extend(_quaternion_pair(F, n, form))
    if general:
        d = [1] * n
        d[0] = lam
        d[n - 1] = F.inv(F.frob(lam, j))
        gens.append(Matrix.diag(F, d))
    return gens


def _quaternion_pair(F: Field, n: int, form: ClassicalForm) -> list[Matrix]:
    """Two non-commuting isometries A, B of order 4 with A^2 = B^2 (so <A, B> = Q8)."""
    from itertools import product as _product
    ident = Matrix.identity(F, n)
    fours = []
    for codes in _product(range(F.q), repeat=n * n):
        A = Matrix.from_codes(F, n, codes)
        if A.det() != 1 or not preserves_form(A, form):
            continue
        A2 = A * A
        if A2 != ident and A2 * A2 == ident:
            for B in fours:
                if B * B == A2 and A * B != B * A:
                    return [B, A]
            fours.append(A)
    raise ValueError("no quaternion subgroup found")


def _unit(n: int, i: int) -> tuple:
    return tuple(1 if k == i else 0 for k in range(n))


def siegel(form: ClassicalForm, u, v) -> Matrix:
    """Siegel transformation ``x -> x + B(x,u) v - B(x,v) u - Q(v) B(x,u) u``.

    ``u`` must be singular and ``v`` orthogonal to ``u``.
    """
    F = form.field
    n = len(u)
    qv = form.quadratic(v)

    def fn(x):
        bu = form.bilinear(x, u)
        bv = form.bilinear(x, v)
        cu = F.sub(F.neg(bv), F.mul(qv, bu))
        return tuple(F.add(F.add(xi, F.mul(bu, vi)), F.mul(cu, ui)) for xi, ui, vi in zip(x, u, v))

    return _linear_map(F, n, fn)


def reflection(form: ClassicalForm, a) -> Matrix:
    """``x -> x - B(x,a)/Q(a) a`` for nonsingular ``a``."""
    F = form.field
    qa = form.quadratic(a)
    if qa == 0:
        raise ValueError("reflection vector must be nonsingular")
    return _linear_map(F, len(a), lambda x: tuple(
        F.sub(xi, F.mul(F.div(form.bilinear(x, a), qa), ai)) for xi, ai in zip(x, a)))


def _orthogonal_gens(F: Field, n: int, form: ClassicalForm, with_so: bool) -> list[Matrix]:
    gens = []
    basis = [_unit(n, i) for i in range(n)]
    singular = [e for e in basis if form.quadratic(e) == 0]
    for u in singular:
        for v in basis:
            if v == u or form.bilinear(u, v) != 0:
                continue
            for k in range(F.f):
                a = F.exp(k)
                gens.append(siegel(form, u, tuple(F.mul(a, x) for x in v)))
    if with_so:
        nonsing = [v for v in _small_vectors(F, n) if form.quadratic(v)]
        a = next(v for v in nonsing if F.is_square(form.quadratic(v)))
        b = next(v for v in nonsing if not F.is_square(form.quadratic(v)))
        gens.append(reflection(form, a) * reflection(form, b))
    return gens


def _small_vectors(F: Field, n: int):
    for i in range(n):
        yield _unit(n, i)
    for i in range(n):
        for j in range(i + 1, n):
            for c in range(1, F.q):
                v = [0] * n
                v[i] = 1
                v[j] = c
                yield tuple(v)


def classical_generators(spec: MatGroupSpec | str) -> tuple[list[Matrix], ClassicalForm | None]:
    """Generators and preserved form for a supported classical group."""
    if isinstance(spec, str):
        spec = MatGroupSpec.parse(spec)
    spec.check()
    F = spec.field
    n = spec.n
    fam = spec.family
    if fam in ("SL", "GL"):
        gens = _sl_gens(F, n)
        if fam == "GL":
            gens.append(Matrix.diag(F, [F.primitive] + [1] * (n - 1)))
        return gens, None
    if fam == "Sp":
        form = symplectic_form(F, n)
        return _sp_gens(F, n, form), form
    if fam in ("SU", "GU"):
        form = unitary_form(F, n)
        return _unitary_gens(F, n, form, fam == "GU"), form
    if fam == "OmegaPlus":
        form = quadratic_form(F, n, "plus")
        return _orthogonal_gens(F, n, form, False), form
    if fam == "OmegaMinus":
        form = quadratic_form(F, n, "minus")
        return _orthogonal_gens(F, n, form, False), form
    if fam == "SO-odd":
        form = quadratic_form(F, n, "odd")
        return _orthogonal_gens(F, n, form, True), form
    raise ValueError(f"unsupported family {fam!r}")


def in_family(A: Matrix, spec: MatGroupSpec, form: ClassicalForm | None) -> bool:
    """Containment test used for the upper half of order certification.

    Checks the form and the determinant. For the orthogonal families this
    certifies membership of SO only, so the order formula for Omega is then
    an upper bound only after the chain order is matched exactly.
    """
    if not preserves_form(A, form):
        return False
    d = A.det()
    if spec.family in ("SL", "SU", "Sp", "OmegaPlus", "OmegaMinus", "SO-odd"):
        return d == 1
    return d != 0


def random_word(gens: list[Matrix], length: int, rng: random.Random) -> Matrix:
    F = gens[0].field
    m = Matrix.identity(F, gens[0].n)
    for _ in range(length):
        m = m * rng.choice(gens)
    return m

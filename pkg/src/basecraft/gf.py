"""Arithmetic in small finite fields GF(p^f).

Elements are coded as integers in ``[0, q)``: the code of the residue
``c_0 + c_1 x + ... + c_{f-1} x^{f-1}`` is ``c_0 + c_1 p + ... + c_{f-1} p^{f-1}``.
Multiplication goes through log/antilog tables and addition through a Zech
logarithm table, so both are O(1) once a field is built.

The modulus is the monic irreducible of degree ``f`` whose lower coefficients
have the smallest code, which makes element codes reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

MAX_FIELD_SIZE = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
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


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, f)`` with ``q == p**f``; raise if q is not a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    ps = prime_factors(q)
    if len(ps) != 1:
        raise ValueError(f"{q} is not a prime power")
    p = ps[0]
    f = 0
    while q > 1:
        q //= p
        f += 1
    return p, f


# -- polynomials over Z_p as coefficient lists, lowest degree first --------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _monic_polys(degree: int, p: int):
    for code in range(p ** degree):
        coeffs = []
        c = code
        for _ in range(degree):
            coeffs.append(c % p)
            c //= p
        yield coeffs + [1]


def is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _trim(list(poly))
    n = len(poly) - 1
    if n < 1:
        return False
    for d in range(1, n // 2 + 1):
        for g in _monic_polys(d, p):
            if not _poly_mod(poly, g, p):
                return False
    return True


def _code_to_digits(code: int, p: int, f: int) -> list[int]:
    out = []
    for _ in range(f):
        out.append(code % p)
        code //= p
    return out


def _digits_to_code(digits: list[int], p: int) -> int:
    code = 0
    for d in reversed(digits):
        code = code * p + d
    return code


class Field:
    """The finite field GF(p^f) with table-driven arithmetic on integer codes."""

    def __init__(self, p: int, f: int = 1):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if f < 1:
            raise ValueError("extension degree must be >= 1")
        q = p ** f
        if q > MAX_FIELD_SIZE:
            raise ValueError(f"field size {q} exceeds {MAX_FIELD_SIZE}")
        self.p, self.f, self.q = p, f, q

        if f == 1:
            self.modulus = (0, 1)
        else:
            for cand in _monic_polys(f, p):
                if is_irreducible(cand, p):
                    self.modulus = tuple(cand)
                    break

        n = q - 1
        factors = prime_factors(n) if n > 1 else []
        for g in range(1, q):
            if g == 1 and q > 2:
                continue
            if all(self._slow_pow(g, n // r) != 1 for r in factors):
                self.primitive = g
                break

        exp = [0] * (2 * n if n else 2)
        log = [-1] * q
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, self.primitive)
        for i in range(n, len(exp)):
            exp[i] = exp[i - n]
        self._exp, self._log = exp, log

        # zech[k] = log(1 + g^k), or -1 when 1 + g^k == 0
        zech = [-1] * max(n, 1)
        for k in range(n):
            s = self._slow_add(1, exp[k])
            zech[k] = log[s] if s else -1
        self._zech = zech
        self._neg_one_log = log[self._slow_neg(1)] if q > 2 else 0

    # slow polynomial arithmetic, used only while building tables
    def _slow_add(self, a: int, b: int) -> int:
        p, f = self.p, self.f
        da, db = _code_to_digits(a, p, f), _code_to_digits(b, p, f)
        return _digits_to_code([(x + y) % p for x, y in zip(da, db)], p)

    def _slow_neg(self, a: int) -> int:
        p, f = self.p, self.f
        return _digits_to_code([(-x) % p for x in _code_to_digits(a, p, f)], p)

    def _slow_mul(self, a: int, b: int) -> int:
        if self.f == 1:
            return a * b % self.p
        p, f = self.p, self.f
        prod = _poly_mul(_trim(_code_to_digits(a, p, f)), _trim(_code_to_digits(b, p, f)), p)
        r = _poly_mod(prod, list(self.modulus), p)
        return _digits_to_code(r + [0] * (f - len(r)), p)

    def _slow_pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return result

    # fast arithmetic on codes
    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        if self.p == 2:
            return a ^ b
        la = self._log[a]
        n = self.q - 1
        z = self._zech[(self._log[b] - la) % n]
        if z < 0:
            return 0
        return self._exp[la + z]

    def neg(self, a: int) -> int:
        if a == 0 or self.p == 2:
            return a
        return self._exp[self._log[a] + self._neg_one_log]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in " + repr(self))
        if a == 0:
            return 0
        return self._exp[(self._log[a] - self._log[b]) % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def log(self, a: int) -> int:
        """Discrete log of a nonzero code to the base of the primitive element."""
        if a == 0:
            raise ValueError("log of zero")
        return self._log[a]

    def exp(self, k: int) -> int:
        return self._exp[k % (self.q - 1)]

    def frob(self, a: int, j: int = 1) -> int:
        """``a ** (p ** j)``."""
        if a == 0:
            return 0
        return self._exp[(self._log[a] * pow(self.p, j, self.q - 1)) % (self.q - 1)]

    def order_of(self, a: int) -> int:
        """Multiplicative order of a nonzero code."""
        n = self.q - 1
        k = self._log[a]
        from math import gcd
        return n // gcd(n, k)

    def digits(self, a: int) -> list[int]:
        return _code_to_digits(a, self.p, self.f)

    def from_digits(self, digits) -> int:
        return _digits_to_code([d % self.p for d in digits], self.p)

    def from_int(self, n: int) -> int:
        """Code of the image of the integer ``n`` in the prime subfield."""
        return n % self.p

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        return self._log[a] % 2 == 0

    def subfield(self, e: int) -> list[int]:
        """Codes of the subfield GF(p^e), e dividing f."""
        if self.f % e:
            raise ValueError(f"GF({self.p}^{e}) is not a subfield of {self!r}")
        step = (self.q - 1) // (self.p ** e - 1)
        return [0] + sorted(self._exp[k] for k in range(0, self.q - 1, step))

    # element-level API
    def __call__(self, code: int) -> "FieldElem":
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} out of range for {self!r}")
        return FieldElem(self, code)

    @property
    def zero(self) -> "FieldElem":
        return FieldElem(self, 0)

    @property
    def one(self) -> "FieldElem":
        return FieldElem(self, 1)

    @property
    def gen(self) -> "FieldElem":
        return FieldElem(self, self.primitive)

    def elements(self) -> list["FieldElem"]:
        return [FieldElem(self, c) for c in range(self.q)]

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.f) == (other.p, other.f)

    def __hash__(self):
        return hash((self.p, self.f))

    def __repr__(self):
        return f"GF({self.p}^{self.f})" if self.f > 1 else f"GF({self.p})"


@dataclass(frozen=True)
class FieldElem:
    field: Field
    code: int

    def _check(self, other) -> int:
        if isinstance(other, int):
            return self.field.from_int(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        if other.field != self.field:
            raise ValueError(f"cannot mix elements of {self.field!r} and {other.field!r}")
        return other.code

    def __add__(self, other):
        b = self._check(other)
        return FieldElem(self.field, self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._check(other)
        return FieldElem(self.field, self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._check(other)
        return FieldElem(self.field, self.field.sub(b, self.code))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.code))

    def __mul__(self, other):
        b = self._check(other)
        return FieldElem(self.field, self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._check(other)
        return FieldElem(self.field, self.field.div(self.code, b))

    def __pow__(self, e: int):
        return FieldElem(self.field, self.field.pow(self.code, e))

    def inverse(self) -> "FieldElem":
        return FieldElem(self.field, self.field.inv(self.code))

    def frobenius(self, j: int = 1) -> "FieldElem":
        return FieldElem(self.field, self.field.frob(self.code, j))

    def order(self) -> int:
        return self.field.order_of(self.code)

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        return self.code

    def __repr__(self):
        return f"{self.field!r}({self.code})"


@lru_cache(maxsize=None)
def field_make(p: int, f: int = 1) -> Field:
    return Field(p, f)


def GF(q: int) -> Field:
    p, f = prime_power(q)
    return field_make(p, f)


def frobenius(a: FieldElem, j: int) -> FieldElem:
    return a.frobenius(j)


def embedding(small: Field, big: Field) -> list[int]:
    """Table ``t`` with ``t[c]`` the code in ``big`` of the element coded ``c`` in ``small``.

    The image of ``x`` is the smallest root in ``big`` of the modulus of ``small``.
    """
    if small.p != big.p or big.f % small.f:
        raise ValueError(f"{small!r} does not embed in {big!r}")
    if small.f == 1:
        return list(range(small.q))
    mod = small.modulus
    for r in range(big.q):
        acc = 0
        power = 1
        for c in mod:
            acc = big.add(acc, big.mul(big.from_int(c), power))
            power = big.mul(power, r)
        if acc == 0:
            break
    table = []
    for code in range(small.q):
        acc = 0
        power = 1
        for d in small.digits(code):
            acc = big.add(acc, big.mul(big.from_int(d), power))
            power = big.mul(power, r)
        table.append(acc)
    return table

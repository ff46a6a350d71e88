"""Permutations of {0, ..., n-1} stored as image tuples.

``g[i]`` is the image of ``i`` under ``g``. Permutations act on the right, so
``(a * b)[i] == b[a[i]]``: apply ``a`` first, then ``b``.

Text formats:

* image list: ``[2,0,1]``
* cycle notation: ``(0 1 2)(3 4)``, degree supplied separately; ``()`` is the identity
"""

from __future__ import annotations

import re
from math import lcm

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def compose(a: tuple, b: tuple) -> tuple:
    """Plain-tuple product ``a * b`` (first ``a``, then ``b``)."""
    return tuple(map(b.__getitem__, a))


def invert(a: tuple) -> tuple:
    inv = [0] * len(a)
    for i, j in enumerate(a):
        inv[j] = i
    return tuple(inv)


def conjugate(x: tuple, g: tuple) -> tuple:
    """``g^-1 x g``: the permutation sending ``g[i]`` to ``g[x[i]]``."""
    out = [0] * len(x)
    for i, xi in enumerate(x):
        out[g[i]] = g[xi]
    return tuple(out)


def cycle_lengths(a: tuple) -> list[int]:
    seen = bytearray(len(a))
    out = []
    for i in range(len(a)):
        if not seen[i]:
            k = 0
            j = i
            while not seen[j]:
                seen[j] = 1
                j = a[j]
                k += 1
            out.append(k)
    return out


def perm_order(a: tuple) -> int:
    return lcm(*cycle_lengths(a)) if a else 1


def prime_order(a: tuple) -> int:
    """The prime ``r`` if ``a`` has prime order ``r``, else 0."""
    r = 0
    for k in cycle_lengths(a):
        if k == 1:
            continue
        if r == 0:
            r = k
        elif k != r:
            return 0
    if r == 0:
        return 0
    d = 2
    while d * d <= r:
        if r % d == 0:
            return 0
        d += 1
    return r


def num_fixed(a: tuple) -> int:
    return sum(1 for i, j in enumerate(a) if i == j)


class Perm(tuple):
    """An immutable permutation; a tuple of images with group operations."""

    __slots__ = ()

    def __new__(cls, images=()):
        return tuple.__new__(cls, images)

    @classmethod
    def checked(cls, images) -> "Perm":
        p = cls(images)
        if sorted(p) != list(range(len(p))):
            raise ValueError(f"not a permutation of 0..{len(p) - 1}: {list(p)}")
        return p

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(range(n))

    @classmethod
    def from_cycles(cls, cycles, n: int) -> "Perm":
        img = list(range(n))
        seen = set()
        for cyc in cycles:
            cyc = list(cyc)
            for x in cyc:
                if not 0 <= x < n:
                    raise ValueError(f"point {x} outside degree {n}")
                if x in seen:
                    raise ValueError(f"point {x} repeated in cycle notation")
                seen.add(x)
            for i, x in enumerate(cyc):
                img[x] = cyc[(i + 1) % len(cyc)]
        return cls(img)

    @classmethod
    def parse(cls, text: str, n: int | None = None, offset: int = 0) -> "Perm":
        """Parse either ``[2,0,1]`` or ``(0 1 2)(3 4)``.

        ``offset`` is subtracted from every point in cycle notation, so 1-based
        data can be read with ``offset=1``. Cycle notation needs ``n``.
        """
        text = text.strip()
        if text.startswith("["):
            if not text.endswith("]"):
                raise ValueError(f"unterminated image list: {text!r}")
            body = text[1:-1].strip()
            images = [int(t) for t in re.split(r"[,\s]+", body) if t] if body else []
            p = cls.checked(images)
            if n is not None and len(p) != n:
                raise ValueError(f"image list has degree {len(p)}, expected {n}")
            return p
        if n is None:
            raise ValueError("cycle notation needs an explicit degree")
        if re.sub(r"\([^()]*\)", "", text).strip():
            raise ValueError(f"malformed cycle notation: {text!r}")
        cycles = []
        for m in _CYCLE_RE.finditer(text):
            body = m.group(1).strip()
            if not body:
                continue
            cycles.append([int(t) - offset for t in re.split(r"[,\s]+", body) if t])
        return cls.from_cycles(cycles, n)

    @property
    def degree(self) -> int:
        return len(self)

    def __mul__(self, other):
        if not isinstance(other, tuple):
            return NotImplemented
        if len(other) != len(self):
            raise ValueError(f"degree mismatch: {len(self)} vs {len(other)}")
        return Perm(map(other.__getitem__, self))

    def __rmul__(self, other):
        return NotImplemented

    def inverse(self) -> "Perm":
        return Perm(invert(self))

    def __invert__(self):
        return self.inverse()

    def __pow__(self, e: int) -> "Perm":
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = tuple(range(len(self)))
        while e:
            if e & 1:
                result = compose(result, base)
            base = compose(base, base)
            e >>= 1
        return Perm(result)

    def conj(self, g) -> "Perm":
        """``g^-1 self g``."""
        return Perm(conjugate(self, g))

    def image(self, i: int) -> int:
        return self[i]

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self))

    def order(self) -> int:
        return perm_order(self)

    def fixed_points(self) -> int:
        return num_fixed(self)

    def support(self) -> list[int]:
        return [i for i, j in enumerate(self) if i != j]

    def cycles(self, singletons: bool = False) -> list[tuple[int, ...]]:
        seen = bytearray(len(self))
        out = []
        for i in range(len(self)):
            if seen[i]:
                continue
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = 1
                cyc.append(j)
                j = self[j]
            if len(cyc) > 1 or singletons:
                out.append(tuple(cyc))
        return out

    def sign(self) -> int:
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    def to_cycle_str(self, offset: int = 0) -> str:
        cs = self.cycles()
        if not cs:
            return "()"
        return "".join("(" + " ".join(str(x + offset) for x in c) + ")" for c in cs)

    def to_list_str(self) -> str:
        return "[" + ",".join(map(str, self)) + "]"

    def __repr__(self):
        return f"Perm({self.to_cycle_str()}, n={len(self)})"

    def __str__(self):
        return self.to_cycle_str()

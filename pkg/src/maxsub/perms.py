"""Permutations on {0, ..., degree-1} backed by numpy index arrays.

Composition is left-to-right: (p * q)(x) == q(p(x)), i.e. points are acted
on from the right, x^(pq) = (x^p)^q.  The text syntax uses disjoint cycles
on 1-based points, e.g. "(1,2)(3,4)"; the identity prints as "()".
"""

from __future__ import annotations

import re
from math import lcm

import numpy as np

_POINT_DTYPE = np.int32


class Permutation:
    """An immutable permutation of fixed degree."""

    __slots__ = ("images", "degree", "_hash")

    def __init__(self, images, degree=None):
        arr = np.asarray(images, dtype=_POINT_DTYPE)
        if degree is not None and len(arr) != degree:
            raise ValueError(f"expected degree {degree}, got {len(arr)}")
        arr.flags.writeable = False
        self.images = arr
        self.degree = len(arr)
        self._hash = None

    @classmethod
    def identity(cls, degree):
        return cls(np.arange(degree, dtype=_POINT_DTYPE))

    @classmethod
    def from_cycles(cls, degree, cycles):
        """Build from 0-based cycles, e.g. [(0,1),(2,3)]."""
        img = np.arange(degree, dtype=_POINT_DTYPE)
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:]):
                img[a] = b
            if cyc:
                img[cyc[-1]] = cyc[0]
        p = cls(img)
        p._check()
        return p

    def _check(self):
        if sorted(self.images.tolist()) != list(range(self.degree)):
            raise ValueError("images are not a bijection")

    def __mul__(self, other):
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Permutation(other.images[self.images])

    def inv(self):
        out = np.empty(self.degree, dtype=_POINT_DTYPE)
        out[self.images] = np.arange(self.degree, dtype=_POINT_DTYPE)
        return Permutation(out)

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        result = Permutation.identity(self.degree)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, point):
        return int(self.images[point])

    def is_identity(self):
        return bool(np.array_equal(self.images, np.arange(self.degree)))

    def cycles(self, include_fixed=False):
        """Disjoint cycles as lists of 0-based points."""
        seen = np.zeros(self.degree, dtype=bool)
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = int(self.images[start])
            while j != start:
                seen[j] = True
                cyc.append(j)
                j = int(self.images[j])
            if len(cyc) > 1 or include_fixed:
                out.append(cyc)
        return out

    def order(self):
        lengths = [len(c) for c in self.cycles()] or [1]
        return lcm(*lengths)

    def __eq__(self, other):
        return (isinstance(other, Permutation)
                and self.degree == other.degree
                and np.array_equal(self.images, other.images))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.images.tobytes())
        return self._hash

    def key(self):
        """Canonical sort key (the image tuple)."""
        return tuple(self.images.tolist())

    def __repr__(self):
        return f"Permutation({format_cycles(self)!r}, degree={self.degree})"

    def __str__(self):
        return format_cycles(self)


_CYCLE_RE = re.compile(r"\(\s*([0-9]+(?:\s*,\s*[0-9]+)*)?\s*\)")


def parse_cycles(text, degree=None):
    """Parse 1-based disjoint-cycle syntax into a Permutation.

    The degree defaults to the largest point mentioned; "()" parses to the
    identity (degree must then be given or defaults to 1).
    """
    stripped = text.strip()
    if not stripped:
        raise ValueError("empty permutation text")
    pos = 0
    cycles = []
    maxpt = 0
    for m in _CYCLE_RE.finditer(stripped):
        if m.start() != pos:
            raise ValueError(f"bad permutation syntax at position {pos}: {text!r}")
        pos = m.end()
        if m.group(1):
            pts = [int(s) for s in m.group(1).split(",")]
            if any(p < 1 for p in pts):
                raise ValueError("points are 1-based")
            if len(set(pts)) != len(pts):
                raise ValueError(f"repeated point in cycle: {m.group(0)}")
            maxpt = max(maxpt, max(pts))
            cycles.append([p - 1 for p in pts])
    if pos != len(stripped):
        raise ValueError(f"bad permutation syntax at position {pos}: {text!r}")
    if degree is None:
        degree = max(maxpt, 1)
    elif maxpt > degree:
        raise ValueError(f"point {maxpt} exceeds degree {degree}")
    return Permutation.from_cycles(degree, cycles)


def format_cycles(p):
    """Render in the 1-based cycle syntax; identity is "()"."""
    cycles = p.cycles()
    if not cycles:
        return "()"
    return "".join("(" + ",".join(str(x + 1) for x in cyc) + ")" for cyc in cycles)

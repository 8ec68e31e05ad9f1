"""Color-set algebra.

A color set is a k-subset of the palette ``[q] = {1..q}`` stored as a bit
vector: bit ``c`` is set iff color ``c + 1`` belongs to the set.  Colors are
1-based in every textual form and 0-based in the bits.

``Psi(q, k)`` is the family of all k-subsets of ``[q]`` in colexicographic
order.  For subsets of equal size, colex order coincides with the numeric
order of the bit vectors, so index ``j`` of ``Psi`` is the j-th smallest
k-bit integer below ``2**q``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import DomainError, ParseError, UnsupportedPaletteError

MAX_PALETTE = 64


def check_palette(q):
    if q < 0:
        raise DomainError(f"palette size must be non-negative, got {q}")
    if q > MAX_PALETTE:
        raise UnsupportedPaletteError(f"palette of {q} colors exceeds the {MAX_PALETTE}-color limit")


@dataclass(frozen=True, order=True)
class ColorSet:
    """An immutable subset of the palette ``[q]``."""

    bits: int
    q: int

    def __post_init__(self):
        check_palette(self.q)
        if self.bits < 0 or self.bits >> self.q:
            raise DomainError(f"bits {self.bits:#x} fall outside a palette of {self.q} colors")

    @property
    def k(self):
        return self.bits.bit_count()

    def colors(self):
        """Member colors, 1-based and ascending."""
        out = []
        b = self.bits
        while b:
            low = b & -b
            out.append(low.bit_length())
            b ^= low
        return tuple(out)

    def __contains__(self, color):
        return 1 <= color <= self.q and bool(self.bits >> (color - 1) & 1)

    def __len__(self):
        return self.k

    def __iter__(self):
        return iter(self.colors())

    def __str__(self):
        return "{" + ",".join(str(c) for c in self.colors()) + "}"


def make_color_set(colors, q):
    """Build a ColorSet from 1-based colors.

    >>> str(make_color_set({2, 1}, 5))
    '{1,2}'
    """
    check_palette(q)
    bits = 0
    for c in colors:
        if not 1 <= c <= q:
            raise DomainError(f"color {c} is outside the palette [1..{q}]")
        bits |= 1 << (c - 1)
    return ColorSet(bits, q)


_SET_RE = re.compile(r"^\{\s*(\d+(\s*,\s*\d+)*)?\s*\}$")


def parse_color_set(text, q):
    """Parse the ``{c1,c2,...}`` rendering back into a ColorSet."""
    text = text.strip()
    if not _SET_RE.match(text):
        raise ParseError(f"malformed color set {text!r}")
    body = text[1:-1].strip()
    colors = [int(tok) for tok in body.split(",")] if body else []
    if len(set(colors)) != len(colors):
        raise ParseError(f"repeated color in {text!r}")
    return make_color_set(colors, q)


def is_legal_pair(a, b, i):
    """True iff ``a`` and ``b`` share at most ``i`` colors."""
    if a.q != b.q:
        raise DomainError(f"color sets over different palettes ({a.q} vs {b.q})")
    return (a.bits & b.bits).bit_count() <= i


def complement_set(c):
    return ColorSet(((1 << c.q) - 1) ^ c.bits, c.q)


@dataclass(frozen=True)
class Psi:
    """All k-subsets of ``[q]`` in canonical (colex) order."""

    q: int
    k: int
    sets: tuple
    index: dict = field(repr=False, compare=False)

    def __len__(self):
        return len(self.sets)

    def __getitem__(self, j):
        return self.sets[j]

    def __iter__(self):
        return iter(self.sets)

    def index_of(self, c):
        if c.q != self.q or c.k != self.k:
            raise DomainError(f"{c} is not a {self.k}-subset of [{self.q}]")
        return self.index[c.bits]

    @property
    def bits(self):
        """The bit vectors as a ``uint64`` array (Psi order)."""
        return _bits_array(self.q, self.k)

    def legal_matrix(self, i):
        """``P x P`` uint8 matrix with 1 where the pair shares at most ``i`` colors."""
        return _legal_matrix(self.q, self.k, i)


@lru_cache(maxsize=None)
def enumerate_psi(q, k):
    check_palette(q)
    if k < 0:
        raise DomainError(f"set size must be non-negative, got {k}")
    if k > q:
        masks = []
    else:
        masks = sorted(sum(1 << c for c in combo) for combo in combinations(range(q), k))
    sets = tuple(ColorSet(m, q) for m in masks)
    return Psi(q, k, sets, {m: j for j, m in enumerate(masks)})


@lru_cache(maxsize=64)
def _bits_array(q, k):
    arr = np.array([c.bits for c in enumerate_psi(q, k).sets], dtype=np.uint64)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=64)
def _legal_matrix(q, k, i):
    bits = _bits_array(q, k)
    if len(bits) == 0:
        mat = np.zeros((0, 0), dtype=np.uint8)
    else:
        shared = np.bitwise_count(bits[:, None] & bits[None, :])
        mat = (shared <= i).astype(np.uint8)
    mat.setflags(write=False)
    return mat

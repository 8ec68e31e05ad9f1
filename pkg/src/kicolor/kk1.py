"""(k, k-1)-chromatic numbers through classic coloring.

Under i = k-1 two adjacent vertices only need *different* k-sets, so each
k-subset acts as one ordinary color: the answer is the least q with
``comb(q, k) >= chi(G)``.  ``chi`` itself comes from inclusion-exclusion over
the vertex-subset lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import DomainError, ResourceExceeded

MAX_VERTICES = 24


@dataclass(frozen=True)
class ChromaticResult:
    chi: int
    q_kk1: int
    k: int

    def witnesses(self):
        """The two binomial inequalities that pin ``q_kk1``."""
        q, k = self.q_kk1, self.k
        lines = [f"C({q},{k}) = {comb(q, k)} >= {self.chi}"]
        if q > k:
            lines.append(f"C({q - 1},{k}) = {comb(q - 1, k)} < {self.chi}")
        return lines


def independent_set_counts(g):
    """``out[X]`` = number of independent subsets (empty set included) of vertex set X."""
    n = g.n
    out = np.zeros(1 << n, dtype=np.int64)
    out[0] = 1
    for b in range(n):
        low = np.arange(1 << b, dtype=np.int64)
        # X = Y + {b}: independent sets avoiding b, plus those using b (so avoiding N(b))
        keep = ~np.int64(g.neighbor_mask(b))
        out[1 << b: 1 << (b + 1)] = out[low] + out[low & keep]
    return out


def chromatic_classic(g):
    """Exact chromatic number in O*(2^n) time.

    The number of ordered t-tuples of independent sets whose union is V equals
    ``sum_X (-1)^(n-|X|) s(X)^t`` with ``s(X)`` the independent-set count of X;
    chi is the least t where it is positive.  Terms are grouped by value and
    evaluated with Python integers, so no intermediate overflows.
    """
    n = g.n
    if n > MAX_VERTICES:
        raise ResourceExceeded(f"subset-lattice sweep limited to {MAX_VERTICES} vertices, got {n}")
    if n == 0:
        return 0
    if g.edge_count == 0:
        return 1
    counts = independent_set_counts(g)
    sizes = np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int64)
    sign = np.where((n - sizes) % 2 == 0, 1, -1)
    values, inverse = np.unique(counts, return_inverse=True)
    weight = np.zeros(len(values), dtype=np.int64)
    np.add.at(weight, inverse.ravel(), sign)
    terms = [(int(v), int(w)) for v, w in zip(values, weight) if w]
    for t in range(2, n + 1):
        if sum(w * v**t for v, w in terms) > 0:
            return t
    return n


def chi_k_kminus1(g, k):
    if k < 1:
        raise DomainError(f"k must be at least 1, got {k}")
    chi = chromatic_classic(g)
    q = k
    while comb(q, k) < chi:
        q += 1
    return ChromaticResult(chi, q, k)

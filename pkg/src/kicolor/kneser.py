"""Kneser graphs K(r, k), their natural colorings and small-scale structure checks."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .colorset import check_palette, enumerate_psi, make_color_set
from .errors import DomainError
from .graph import Graph
from .oracle import enumerate_colorings


@dataclass(frozen=True)
class KneserGraph:
    """Vertex ``v`` is labelled by ``labels[v]``, the v-th k-subset of [r] in Psi order."""

    r: int
    k: int
    graph: Graph
    labels: tuple

    @property
    def natural(self):
        """The coloring that gives every vertex its own label."""
        return dict(enumerate(self.labels))

    def vertex_of(self, colors):
        """Vertex whose label is the given 1-based color collection."""
        c = make_color_set(colors, self.r)
        return enumerate_psi(self.r, self.k).index_of(c)


def build_kneser(r, k):
    if k < 1 or r < k:
        raise DomainError(f"K({r},{k}) needs r >= k >= 1")
    check_palette(r)
    psi = enumerate_psi(r, k)
    disjoint = psi.legal_matrix(0)
    n = len(psi)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if disjoint[u, v]]
    return KneserGraph(r, k, Graph(n, edges), psi.sets)


def canonical_ti3set(r, k):
    """Vertices labelled [k-1] + {2k-1}, [k-1] + {2k}, [k-1] + {2k+1}.

    For k = 1 the shared part is empty and the three singletons are mutually
    adjacent; only the three-distinct-last-colors property survives.
    """
    if k < 1 or r < 2 * k + 1:
        raise DomainError(f"a totally independent 3-set needs r >= 2k+1 (r={r}, k={k})")
    psi = enumerate_psi(r, k)
    base = list(range(1, k))
    return tuple(psi.index_of(make_color_set(base + [last], r)) for last in (2 * k - 1, 2 * k, 2 * k + 1))


def color_classes(coloring, q):
    """For each color 1..q, the frozenset of vertices whose set contains it."""
    classes = {c: set() for c in range(1, q + 1)}
    for v, cs in coloring.items():
        for c in cs.colors():
            classes[c].add(v)
    return {c: frozenset(vs) for c, vs in classes.items()}


def is_natural_up_to_permutation(kg, coloring):
    """True iff ``coloring == sigma . natural`` for a permutation sigma of [r].

    Two colorings agree up to a color permutation exactly when their families
    of color classes coincide, so no permutation is enumerated.
    """
    if set(coloring) != set(range(kg.graph.n)):
        return False
    mine = color_classes(coloring, kg.r)
    ref = color_classes(kg.natural, kg.r)
    return set(mine.values()) == set(ref.values()) and len(set(mine.values())) == kg.r


def check_natural_uniqueness(r, k, budget=None):
    """Every proper (r, k, 0)-coloring of K(r, k) is a relabelled natural coloring."""
    from .solver import Params

    if r < 2 * k + 1:
        raise DomainError("uniqueness is only claimed for r >= 2k+1")
    kg = build_kneser(r, k)
    psi = enumerate_psi(r, k)
    params = Params(r, k, 0)
    found = 0
    for assign in enumerate_colorings(kg.graph, params, budget):
        found += 1
        if not is_natural_up_to_permutation(kg, {v: psi[c] for v, c in enumerate(assign)}):
            return False
    # every permutation of the natural coloring is itself proper and distinct
    n_perms = 1
    for j in range(2, r + 1):
        n_perms *= j
    return found == n_perms


def color_occurrence_profile(kg, coloring):
    """Number of vertices using each color 1..r under a proper (r, k, 0)-coloring."""
    from .solver import Params, is_proper

    if set(coloring) != set(range(kg.graph.n)):
        raise DomainError("coloring must cover every vertex")
    if not is_proper(kg.graph, coloring, Params(kg.r, kg.k, 0)):
        raise DomainError("coloring is not a proper (r,k,0)-coloring")
    return {c: len(vs) for c, vs in color_classes(coloring, kg.r).items()}


def ekr_bound(r, k):
    return comb(r - 1, k - 1)

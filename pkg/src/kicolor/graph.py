"""Simple undirected graphs, DIMACS ``.col`` I/O and forest decomposition.

Vertices are dense integers ``0..n-1`` internally and 1-based in files.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .errors import DomainError, ParseError


class Graph:
    """Immutable simple undirected graph with sorted adjacency lists."""

    __slots__ = ("n", "adj", "edge_count", "_masks")

    def __init__(self, n, edges=()):
        if n < 0:
            raise DomainError("vertex count must be non-negative")
        nbrs = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self.adj = tuple(tuple(sorted(s)) for s in nbrs)
        self.edge_count = sum(len(s) for s in nbrs) // 2
        masks = []
        for s in nbrs:
            m = 0
            for v in s:
                m |= 1 << v
            masks.append(m)
        self._masks = tuple(masks)

    def neighbors(self, v):
        return self.adj[v]

    def neighbor_mask(self, v):
        return self._masks[v]

    def degree(self, v):
        return len(self.adj[v])

    def has_edge(self, u, v):
        return bool(self._masks[u] >> v & 1)

    def edges(self):
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def vertices(self):
        return range(self.n)

    def induced(self, vertices):
        """Induced subgraph, relabelled to ``0..len(vertices)-1`` in the given order."""
        vertices = list(vertices)
        pos = {v: j for j, v in enumerate(vertices)}
        edges = [(pos[u], pos[v]) for u in vertices for v in self.adj[u] if v in pos and u < v]
        return Graph(len(vertices), edges)

    def relabel(self, perm):
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges()])

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.edge_count})"


# -- DIMACS -----------------------------------------------------------------

def parse_dimacs_graph(text):
    """Parse DIMACS ``.col`` text (``str`` or ``bytes``).

    Duplicate edges are merged. Errors carry the offending line number.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        tok = line.split()
        if tok[0] == "p":
            if n is not None:
                raise ParseError("duplicate problem line", lineno)
            if len(tok) != 4 or tok[1] not in ("edge", "col"):
                raise ParseError(f"malformed header {line!r}", lineno)
            try:
                n, _m = int(tok[2]), int(tok[3])
            except ValueError:
                raise ParseError(f"malformed header {line!r}", lineno) from None
            if n < 0 or _m < 0:
                raise ParseError("negative size in header", lineno)
        elif tok[0] == "e":
            if n is None:
                raise ParseError("edge before problem line", lineno)
            if len(tok) != 3:
                raise ParseError(f"malformed edge {line!r}", lineno)
            try:
                u, v = int(tok[1]), int(tok[2])
            except ValueError:
                raise ParseError(f"malformed edge {line!r}", lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"vertex index out of range 1..{n}", lineno)
            if u == v:
                raise ParseError(f"self-loop at vertex {u}", lineno)
            edges.append((u - 1, v - 1))
        else:
            raise ParseError(f"unknown line type {tok[0]!r}", lineno)
    if n is None:
        raise ParseError("missing problem line")
    return Graph(n, edges)


def write_dimacs_graph(g, comments=()):
    """Canonical DIMACS text: header, then ``e u v`` with ``u < v`` sorted."""
    lines = [f"c {c}" for c in comments]
    lines.append(f"p edge {g.n} {g.edge_count}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


# -- forests ----------------------------------------------------------------

@dataclass(frozen=True)
class RootedTree:
    root: int
    parent: dict       # vertex -> parent vertex (root maps to None)
    children: dict     # vertex -> tuple of children, ascending
    postorder: tuple   # every child precedes its parent

    @property
    def vertices(self):
        return frozenset(self.postorder)


@dataclass(frozen=True)
class RootedForest:
    trees: tuple

    def __len__(self):
        return len(self.trees)

    def vertices(self):
        return [v for t in self.trees for v in t.postorder]


def components(g, removed=frozenset()):
    """Connected components of ``g - removed``, each sorted, ordered by minimum vertex."""
    seen = set(removed)
    comps = []
    for s in range(g.n):
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def is_acyclic(g, removed=frozenset()):
    """True iff ``g - removed`` is a forest."""
    removed = set(removed)
    alive = g.n - len(removed)
    edges = sum(1 for u, v in g.edges() if u not in removed and v not in removed)
    return edges == alive - len(components(g, removed))


def induced_forest(g, s):
    """Root every tree of ``g - s`` at its smallest vertex.

    Raises DomainError when ``s`` is not a feedback vertex set.
    """
    s = frozenset(s)
    if any(not 0 <= v < g.n for v in s):
        raise DomainError("vertex set has members outside the graph")
    if not is_acyclic(g, s):
        raise DomainError("the given set is not a feedback vertex set")
    trees = []
    for comp in components(g, s):
        root = comp[0]
        parent = {root: None}
        children = {}
        order = [root]
        for x in order:
            kids = tuple(y for y in g.adj[x] if y not in s and y not in parent)
            for y in kids:
                parent[y] = x
            children[x] = kids
            order.extend(kids)
        post = []
        stack = [(root, False)]
        while stack:
            x, done = stack.pop()
            if done:
                post.append(x)
                continue
            stack.append((x, True))
            for y in reversed(children[x]):
                stack.append((y, False))
        trees.append(RootedTree(root, parent, children, tuple(post)))
    return RootedForest(tuple(trees))


# -- named and random graphs ---------------------------------------------

def empty_graph(n):
    return Graph(n)


def path_graph(n):
    return Graph(n, [(v, v + 1) for v in range(n - 1)])


def cycle_graph(n):
    if n < 3:
        raise DomainError("a simple cycle needs at least 3 vertices")
    return Graph(n, [(v, (v + 1) % n) for v in range(n)])


def complete_graph(n):
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def star_graph(leaves):
    """K(1, leaves) with the centre at vertex 0."""
    return Graph(leaves + 1, [(0, v) for v in range(1, leaves + 1)])


def petersen_graph():
    """Outer 5-cycle 0..4, inner pentagram 5..9, spokes v -- v+5."""
    outer = [(v, (v + 1) % 5) for v in range(5)]
    inner = [(5 + v, 5 + (v + 2) % 5) for v in range(5)]
    spokes = [(v, v + 5) for v in range(5)]
    return Graph(10, outer + inner + spokes)


def random_graph(n, p, rng=None):
    """Erdos-Renyi G(n, p)."""
    rng = rng if rng is not None else random.Random()
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def random_tree(n, rng=None):
    """Uniform random recursive tree: vertex v attaches to a random earlier vertex."""
    rng = rng if rng is not None else random.Random()
    return Graph(n, [(v, rng.randrange(v)) for v in range(1, n)])

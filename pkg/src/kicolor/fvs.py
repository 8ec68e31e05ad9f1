"""Feedback vertex sets: verification, exact search and a greedy fallback."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import DomainError, ParseError, ResourceExceeded
from .graph import is_acyclic

EXACT = "exact"
GREEDY = "greedy"
USER = "user-supplied"


@dataclass(frozen=True)
class FvsResult:
    vertices: frozenset
    method: str
    certified_minimum: bool

    def __len__(self):
        return len(self.vertices)

    def sorted(self):
        return sorted(self.vertices)


def verify_fvs(g, s):
    """True iff ``g - s`` has no cycle."""
    s = frozenset(s)
    if any(not 0 <= v < g.n for v in s):
        raise DomainError("vertex set has members outside the graph")
    return is_acyclic(g, s)


def user_fvs(g, s):
    s = frozenset(s)
    if not verify_fvs(g, s):
        raise DomainError("the supplied set is not a feedback vertex set")
    return FvsResult(s, USER, False)


# -- exact search ----------------------------------------------------------

def _adjacency(g):
    return {v: set(g.adj[v]) for v in range(g.n)}


def _delete(adj, v):
    for u in adj.pop(v):
        adj[u].discard(v)


def _prune_low_degree(adj):
    """Strip vertices of degree <= 1 until none remain; they lie on no cycle."""
    stack = [v for v, nb in adj.items() if len(nb) <= 1]
    while stack:
        v = stack.pop()
        if v not in adj or len(adj[v]) > 1:
            continue
        nbrs = adj.pop(v)
        for u in nbrs:
            adj[u].discard(v)
            if len(adj[u]) <= 1:
                stack.append(u)


def _shortest_cycle(adj):
    best = None
    for r in sorted(adj):
        parent = {r: None}
        depth = {r: 0}
        queue = deque([r])
        found = None
        while queue and found is None:
            x = queue.popleft()
            if best is not None and 2 * depth[x] + 1 >= len(best):
                break
            for y in sorted(adj[x]):
                if y not in depth:
                    depth[y] = depth[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif y != parent[x] and depth[y] >= depth[x]:
                    found = (x, y)
                    break
        if found is None:
            continue
        x, y = found
        left, right = [x], [y]
        while left[-1] != right[-1]:
            if depth[left[-1]] >= depth[right[-1]]:
                left.append(parent[left[-1]])
            else:
                right.append(parent[right[-1]])
        cycle = left + right[-2::-1]
        if best is None or len(cycle) < len(best):
            best = cycle
    return best


def _lower_bound(adj):
    """Every deletion removes at most max-degree edges and one vertex."""
    nv = len(adj)
    if nv == 0:
        return 0
    ne = sum(len(nb) for nb in adj.values()) // 2
    dmax = max(len(nb) for nb in adj.values())
    excess = ne - nv + 1
    if excess <= 0:
        return 0
    if dmax <= 1:
        return 0
    return -(-excess // (dmax - 1))


class _Search:
    def __init__(self, node_limit):
        self.nodes = 0
        self.node_limit = node_limit

    def run(self, adj, budget):
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise ResourceExceeded(f"exact FVS search exceeded {self.node_limit} nodes")
        _prune_low_degree(adj)
        if not adj:
            return []
        if budget <= 0 or _lower_bound(adj) > budget:
            return None
        cycle = _shortest_cycle(adj)
        # a degree-2 vertex can be traded for an end of its chain, which lies on the same cycle
        branch = [v for v in cycle if len(adj[v]) >= 3] or [min(cycle)]
        branch.sort(key=lambda v: (-len(adj[v]), v))
        for v in branch:
            sub = {x: set(nb) for x, nb in adj.items()}
            _delete(sub, v)
            rest = self.run(sub, budget - 1)
            if rest is not None:
                return [v] + rest
        return None


def find_fvs_exact(g, budget, node_limit=None):
    """Minimum feedback vertex set if one of size <= ``budget`` exists, else ``None``.

    Iterative deepening over the size; each round branches on the vertices of
    a shortest cycle. ``node_limit`` caps the total search nodes and raises
    ResourceExceeded when hit.
    """
    if budget < 0:
        raise DomainError("budget must be non-negative")
    search = _Search(node_limit)
    for size in range(budget + 1):
        found = search.run(_adjacency(g), size)
        if found is not None:
            s = frozenset(found)
            assert verify_fvs(g, s)
            return FvsResult(s, EXACT, True)
    return None


# -- greedy ----------------------------------------------------------------

def find_fvs_greedy(g):
    """Delete a max-degree vertex of the 2-core until acyclic, then drop redundant picks."""
    adj = _adjacency(g)
    picked = []
    while True:
        _prune_low_degree(adj)
        if not adj:
            break
        v = min(adj, key=lambda x: (-len(adj[x]), x))
        picked.append(v)
        _delete(adj, v)
    s = set(picked)
    for v in sorted(picked, reverse=True):
        if is_acyclic(g, s - {v}):
            s.discard(v)
    return FvsResult(frozenset(s), GREEDY, False)


def find_fvs(g, node_limit=200_000):
    """Exact search with a node cap, falling back to greedy when the cap is hit."""
    greedy = find_fvs_greedy(g)
    try:
        exact = find_fvs_exact(g, len(greedy), node_limit=node_limit)
    except ResourceExceeded:
        return greedy
    return exact if exact is not None else greedy


# -- file format: one 1-based vertex per line --------------------------------

def parse_fvs(text, n):
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    out = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        try:
            v = int(line)
        except ValueError:
            raise ParseError(f"expected a vertex index, got {line!r}", lineno) from None
        if not 1 <= v <= n:
            raise ParseError(f"vertex {v} out of range 1..{n}", lineno)
        out.add(v - 1)
    return frozenset(out)


def write_fvs(s):
    return "".join(f"{v + 1}\n" for v in sorted(s))

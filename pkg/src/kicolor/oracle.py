"""Brute-force ground truth for small instances.

Nothing here touches feedback vertex sets or tree DP: colorings are found by
plain backtracking over vertex -> color-set assignments, which keeps the
oracle independent of the solver it checks.
"""

from __future__ import annotations

from . import kernels
from .errors import DomainError, ResourceExceeded

DEFAULT_BUDGET = 10**8


def search_order(g):
    """Vertices by descending degree, ties by index."""
    return sorted(range(g.n), key=lambda v: (-g.degree(v), v))


def _prev_csr(g, order):
    pos = {v: j for j, v in enumerate(order)}
    ptr, idx = [0], []
    for j, v in enumerate(order):
        idx.extend(sorted(pos[u] for u in g.adj[v] if pos[u] < j))
        ptr.append(len(idx))
    return ptr, idx


def _search(g, params, count_mode, budget, backend):
    order = search_order(g)
    ptr, idx = _prev_csr(g, order)
    cap = DEFAULT_BUDGET if budget is None else budget
    return kernels.get(backend).brute_search(ptr, idx, params.legal(), count_mode, cap)


def brute_decide(g, params, budget=None, backend=None):
    """Exhaustive (q, k, i)-colorability test. Raises ResourceExceeded past ``budget`` nodes."""
    return _search(g, params, False, budget, backend)[0]


def brute_count(g, params, budget=None, backend=None):
    return _search(g, params, True, budget, backend)[0]


def brute_chromatic(g, k, i, budget=None, backend=None):
    """Least q >= k for which ``brute_decide`` succeeds, scanning upward."""
    from .solver import Params

    for q in range(k, k * (g.n + 2) + 1):
        if brute_decide(g, Params(q, k, i), budget, backend):
            return q
    raise DomainError("no palette up to k(n+2) works, which is impossible for a simple graph")


def enumerate_colorings(g, params, budget=None):
    """Yield every proper coloring as a tuple of Psi indices indexed by vertex."""
    cap = DEFAULT_BUDGET if budget is None else budget
    legal = params.legal()
    P = len(legal)
    masks = [sum(1 << c for c in range(P) if row[c]) for row in legal]
    order = search_order(g)
    pos = {v: j for j, v in enumerate(order)}
    prev = [[u for u in g.adj[v] if pos[u] < j] for j, v in enumerate(order)]
    full = (1 << P) - 1
    assign = [None] * g.n
    nodes = 0

    def walk(j):
        nonlocal nodes
        if j == g.n:
            yield tuple(assign)
            return
        cand = full
        for u in prev[j]:
            cand &= masks[assign[u]]
        v = order[j]
        while cand:
            low = cand & -cand
            cand ^= low
            nodes += 1
            if nodes > cap:
                raise ResourceExceeded(f"enumeration exceeded its budget of {cap} nodes")
            assign[v] = low.bit_length() - 1
            yield from walk(j + 1)
        assign[v] = None

    yield from walk(0)


def max_independent_set_size(g, budget=None):
    """Exact maximum independent set size by branch and reduce on vertex bitsets."""
    cap = DEFAULT_BUDGET if budget is None else budget
    nbr = [g.neighbor_mask(v) for v in range(g.n)]
    memo = {}
    nodes = 0

    def solve(alive):
        nonlocal nodes
        if not alive:
            return 0
        hit = memo.get(alive)
        if hit is not None:
            return hit
        nodes += 1
        if nodes > cap:
            raise ResourceExceeded(f"independent-set search exceeded its budget of {cap} nodes")
        best_v, best_d = -1, -1
        low_v, low_d = -1, g.n + 1
        rest = alive
        while rest:
            bit = rest & -rest
            rest ^= bit
            v = bit.bit_length() - 1
            d = (nbr[v] & alive).bit_count()
            if d > best_d:
                best_v, best_d = v, d
            if d < low_d:
                low_v, low_d = v, d
        if low_d <= 1:
            # some maximum independent set contains a vertex of degree <= 1
            result = 1 + solve(alive & ~nbr[low_v] & ~(1 << low_v))
        else:
            v = best_v
            result = max(solve(alive & ~(1 << v)), 1 + solve(alive & ~nbr[v] & ~(1 << v)))
        memo[alive] = result
        return result

    return solve((1 << g.n) - 1)

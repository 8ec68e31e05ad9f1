"""Feedback-vertex-set parameterized (q, k, i)-coloring.

Every proper coloring ``h`` of the FVS ``S`` is tried in turn; the forest
``G - S`` is then processed bottom-up, keeping for each forest vertex ``w``
the set of color sets ``C`` such that the subtree below ``w`` can be colored
consistently with ``h`` while ``w`` receives ``C``.  Counting replaces the
boolean table by the number of such subtree colorings.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import comb, gcd

from . import kernels
from .colorset import ColorSet, check_palette, enumerate_psi, is_legal_pair, parse_color_set
from .errors import DomainError, ParseError, UnsupportedPaletteError
from .fvs import FvsResult, find_fvs, verify_fvs
from .graph import induced_forest


@dataclass(frozen=True)
class Params:
    q: int
    k: int
    i: int

    def __post_init__(self):
        if self.k < 1:
            raise DomainError(f"k must be at least 1, got {self.k}")
        if self.i < 0:
            raise DomainError(f"i must be non-negative, got {self.i}")
        check_palette(self.q)

    @property
    def psi(self):
        return enumerate_psi(self.q, self.k)

    def legal(self):
        return self.psi.legal_matrix(self.i)

    def __str__(self):
        return f"({self.q},{self.k},{self.i})"


def _check_sets(f, params):
    for v, c in f.items():
        if not isinstance(c, ColorSet) or c.q != params.q or c.k != params.k:
            raise DomainError(f"vertex {v} is not assigned a {params.k}-subset of [{params.q}]")


def is_proper(g, f, params):
    """True iff every edge with both ends colored by ``f`` is a legal pair."""
    _check_sets(f, params)
    for u, v in g.edges():
        if u in f and v in f and not is_legal_pair(f[u], f[v], params.i):
            return False
    return True


# -- forest plan ---------------------------------------------------------------

@dataclass(frozen=True)
class ForestPlan:
    """Index arrays shared by both kernel backends.

    Forest positions ``0..m-1`` follow the concatenated post-orders of the
    trees; FVS positions ``0..s-1`` follow ascending vertex order.
    """

    forest: object
    s_vertices: tuple
    vertex_of: tuple
    child_ptr: tuple
    child_idx: tuple
    snbr_ptr: tuple
    snbr_idx: tuple
    sprev_ptr: tuple
    sprev_idx: tuple
    roots: tuple

    @property
    def m(self):
        return len(self.vertex_of)

    @property
    def s(self):
        return len(self.s_vertices)


def _csr(rows):
    ptr, idx = [0], []
    for row in rows:
        idx.extend(row)
        ptr.append(len(idx))
    return tuple(ptr), tuple(idx)


@lru_cache(maxsize=512)
def _plan(g, s):
    forest = induced_forest(g, s)
    s_sorted = tuple(sorted(s))
    spos = {v: j for j, v in enumerate(s_sorted)}
    order = tuple(forest.vertices())
    pos = {v: p for p, v in enumerate(order)}
    children = {}
    for t in forest.trees:
        children.update(t.children)
    child_ptr, child_idx = _csr([pos[u] for u in children[v]] for v in order)
    snbr_ptr, snbr_idx = _csr([spos[x] for x in g.adj[v] if x in spos] for v in order)
    sprev_ptr, sprev_idx = _csr(
        [spos[y] for y in g.adj[x] if y in spos and spos[y] < j] for j, x in enumerate(s_sorted)
    )
    roots = tuple(pos[t.root] for t in forest.trees)
    return ForestPlan(forest, s_sorted, order, child_ptr, child_idx, snbr_ptr, snbr_idx,
                      sprev_ptr, sprev_idx, roots)


def build_plan(g, s):
    return _plan(g, frozenset(s))


def _kernel(plan, params, backend):
    return kernels.get(backend).ForestKernel(plan, params.legal())


def _resolve_fvs(g, s):
    if s is None:
        return find_fvs(g).vertices
    if isinstance(s, FvsResult):
        s = s.vertices
    s = frozenset(s)
    if not verify_fvs(g, s):
        raise DomainError("the supplied set is not a feedback vertex set")
    return s


def _h_indices(plan, h, params, g):
    if set(h) != set(plan.s_vertices):
        raise DomainError("h must color exactly the feedback vertex set")
    _check_sets(h, params)
    sub = {v: h[v] for v in plan.s_vertices}
    if not is_proper(g, sub, params):
        raise DomainError("h is not a proper coloring of the feedback vertex set")
    psi = params.psi
    return tuple(psi.index_of(h[v]) for v in plan.s_vertices)


# -- single-h operations ----------------------------------------------------

def h_compatible_sets(w, h, g, params):
    """Color sets for ``w`` that form legal pairs with ``h`` on all colored neighbours."""
    if w in h:
        raise DomainError(f"vertex {w} belongs to the colored set")
    _check_sets(h, params)
    fixed = [h[x] for x in g.adj[w] if x in h]
    return [c for c in params.psi if all(is_legal_pair(c, d, params.i) for d in fixed)]


def extend_decide(g, s, h, params, backend=None):
    """Can the proper FVS coloring ``h`` be extended to all of ``g``?"""
    plan = build_plan(g, _resolve_fvs(g, s))
    hidx = _h_indices(plan, h, params, g)
    return _kernel(plan, params, backend).decide_prefix(hidx)


def dp_tables(g, s, h, params, mode="decide", backend=None):
    """Per forest vertex, the table over Psi (0/1 in decide mode, counts in count mode)."""
    plan = build_plan(g, _resolve_fvs(g, s))
    hidx = _h_indices(plan, h, params, g)
    kern = _kernel(plan, params, backend)
    if mode == "decide":
        rows = kern.decide_table(hidx)
    elif mode == "count":
        try:
            rows = kern.count_table(hidx)
        except OverflowError:
            rows = _kernel(plan, params, "python").count_table(hidx)
    else:
        raise DomainError(f"unknown table mode {mode!r}")
    return {v: list(rows[p]) for p, v in enumerate(plan.vertex_of)}


def _extract_from_tables(plan, rows, hidx, params):
    psi = params.psi
    legal = params.legal()
    chosen = {}
    pos = {v: p for p, v in enumerate(plan.vertex_of)}
    for t in plan.forest.trees:
        root_row = rows[pos[t.root]]
        first = next((c for c, ok in enumerate(root_row) if ok), None)
        if first is None:
            return None
        chosen[t.root] = first
        stack = [t.root]
        while stack:
            v = stack.pop()
            for u in t.children[v]:
                urow = rows[pos[u]]
                chosen[u] = next(c for c, ok in enumerate(urow) if ok and legal[chosen[v], c])
                stack.append(u)
    coloring = {v: psi[c] for v, c in zip(plan.s_vertices, hidx)}
    coloring.update((v, psi[c]) for v, c in chosen.items())
    return dict(sorted(coloring.items()))


def extend_extract(g, s, h, params, backend=None):
    """A full proper coloring extending ``h``, or ``None``.

    Roots take their smallest feasible Psi index; every other vertex takes the
    smallest feasible index legal against its parent's choice.
    """
    plan = build_plan(g, _resolve_fvs(g, s))
    hidx = _h_indices(plan, h, params, g)
    rows = _kernel(plan, params, backend).decide_table(hidx)
    return _extract_from_tables(plan, rows, hidx, params)


# -- whole-graph operations -------------------------------------------------------

def _run_units(fn, units, threads, stop_when=None):
    """Evaluate ``fn`` on each unit; results come back in unit order.

    With ``stop_when`` set, units not yet started are skipped once one result
    satisfies it (their slot holds ``None``).
    """
    if threads <= 1 or len(units) <= 1:
        out = []
        for u in units:
            r = fn(u)
            out.append(r)
            if stop_when is not None and stop_when(r):
                break
        return out
    done = threading.Event()

    def task(u):
        if done.is_set():
            return None
        r = fn(u)
        if stop_when is not None and stop_when(r):
            done.set()
        return r

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(task, units))


def decide(g, params, s=None, threads=1, backend=None):
    """Is ``g`` (q, k, i)-colorable?

    The first FVS vertex is pinned to the first color set: any proper coloring
    can be permuted onto one that satisfies this, so the answer is unchanged.
    """
    if g.n == 0:
        return True
    psi = params.psi
    if len(psi) == 0:
        return False
    if params.i >= params.k:
        return True
    plan = build_plan(g, _resolve_fvs(g, s))
    kern = _kernel(plan, params, backend)
    if plan.s == 0:
        units = [()]
    elif plan.s == 1:
        units = [(0,)]
    else:
        units = [(0, c) for c in range(len(psi))]
    results = _run_units(kern.decide_prefix, units, threads, stop_when=bool)
    return any(results)


def _moduli():
    """Pairwise coprime moduli just below 2^61, generated lazily."""
    chosen = []
    m = (1 << 61) - 1
    while True:
        if all(gcd(m, x) == 1 for x in chosen):
            chosen.append(m)
            yield m
        m -= 2


def _count_by_residues(kern, prefix, bound):
    """Exact count from residues modulo coprime moduli whose product exceeds ``bound``."""
    value, modulus = 0, 1
    for m in _moduli():
        r = kern.count_prefix(prefix, m)
        # Chinese remainder step: keep value mod modulus, extend to modulus * m
        t = ((r - value) * pow(modulus, -1, m)) % m
        value += modulus * t
        modulus *= m
        if modulus > bound:
            return value


def count_colorings(g, params, s=None, threads=1, backend=None):
    """Exact number of proper (q, k, i)-colorings of ``g``."""
    psi = params.psi
    if g.n == 0:
        return 1
    if len(psi) == 0:
        return 0
    if params.i >= params.k:
        return len(psi) ** g.n
    plan = build_plan(g, _resolve_fvs(g, s))
    kern = _kernel(plan, params, backend)
    bound = len(psi) ** g.n

    def unit(prefix):
        try:
            return kern.count_prefix(prefix)
        except OverflowError:
            return _count_by_residues(kern, prefix, bound)

    units = [()] if plan.s == 0 else [(c,) for c in range(len(psi))]
    total = 0
    for part in _run_units(unit, units, threads):
        total += part
    return total


def find_coloring(g, params, s=None, backend=None):
    """A proper (q, k, i)-coloring of ``g``, or ``None`` when none exists.

    The FVS coloring is the lexicographically first extendable one.
    """
    if g.n == 0:
        return {}
    psi = params.psi
    if len(psi) == 0:
        return None
    plan = build_plan(g, _resolve_fvs(g, s))
    kern = _kernel(plan, params, backend)
    prefix = ()
    if not kern.decide_prefix(prefix):
        return None
    while len(prefix) < plan.s:
        prefix = next(prefix + (c,) for c in range(len(psi)) if kern.decide_prefix(prefix + (c,)))
    rows = kern.decide_table(prefix)
    return _extract_from_tables(plan, rows, prefix, params)


def chromatic_number_ki(g, k, i, s=None, threads=1, backend=None):
    """Least q admitting a proper (q, k, i)-coloring, by binary search on q."""
    if k < 1 or i < 0:
        raise DomainError("need k >= 1 and i >= 0")
    if i >= k or g.n == 0:
        return k
    s = _resolve_fvs(g, s)
    lo, hi = k, k * (len(s) + 2)
    if hi > 64:
        hi = 64
        if not decide(g, Params(hi, k, i), s, threads, backend):
            raise UnsupportedPaletteError("chromatic number exceeds the 64-color palette")
    while lo < hi:
        mid = (lo + hi) // 2
        if decide(g, Params(mid, k, i), s, threads, backend):
            hi = mid
        else:
            lo = mid + 1
    return lo


def psi_size(params):
    return comb(params.q, params.k)


# -- coloring files: "v <vertex> {c1,c2,...}" ----------------------------------

def write_coloring(f):
    return "".join(f"v {v + 1} {f[v]}\n" for v in sorted(f))


def parse_coloring(text, n, q):
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        tok = line.split(None, 2)
        if len(tok) != 3 or tok[0] != "v":
            raise ParseError(f"expected 'v <vertex> {{set}}', got {line!r}", lineno)
        try:
            v = int(tok[1])
        except ValueError:
            raise ParseError(f"bad vertex {tok[1]!r}", lineno) from None
        if not 1 <= v <= n:
            raise ParseError(f"vertex {v} out of range 1..{n}", lineno)
        if v - 1 in out:
            raise ParseError(f"vertex {v} colored twice", lineno)
        try:
            out[v - 1] = parse_color_set(tok[2], q)
        except ParseError as exc:
            raise ParseError(str(exc), lineno) from None
        except DomainError as exc:
            raise ParseError(str(exc), lineno) from None
    return out

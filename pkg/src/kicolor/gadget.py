"""3-CNF to (2k+i, k, 0)-coloring reduction, its witness translations, and the complement lift.

Graph layout (0-based vertex ids, in this order):

* ``u``, ``w``
* ``A``: k-subsets of [2k+i] holding both or neither of the colors 2k, 2k+1
* per variable p: ``B_p``, the k-subsets holding exactly one of 2k, 2k+1;
  ``x_p`` is labelled [k-1]+{2k} and ``xbar_p`` is labelled [k-1]+{2k+1}
* per clause j: ``z_j`` (three vertices), then ``Gamma_j``, a full copy of
  K(2k+i, k) whose canonical totally independent 3-set is ``t_j``

Labelled blocks list their members in Psi order.  ``A`` plus any ``B_p``, and
each ``Gamma_j``, induce K(2k+i, k) on their labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import comb

from .colorset import complement_set, enumerate_psi, make_color_set, parse_color_set
from .errors import DomainError, ParseError
from .graph import Graph
from .kneser import canonical_ti3set
from .solver import Params, is_proper


# -- formulas ------------------------------------------------------------------

@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple

    def __post_init__(self):
        if self.num_vars < 0:
            raise DomainError("variable count must be non-negative")
        for clause in self.clauses:
            if len(clause) != 3:
                raise DomainError(f"clause {clause} does not have exactly 3 literals")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise DomainError(f"literal {lit} outside variables 1..{self.num_vars}")

    def evaluate(self, assignment):
        """``assignment`` maps variable (1-based) to bool."""
        return all(any(assignment[abs(l)] == (l > 0) for l in clause) for clause in self.clauses)

    def to_dimacs(self):
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines += [" ".join(str(l) for l in clause) + " 0" for clause in self.clauses]
        return "\n".join(lines) + "\n"


def parse_dimacs_cnf(text):
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    header = None
    clauses = []
    current = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "c%":
            continue
        last_line = lineno
        tok = line.split()
        if tok[0] == "p":
            if header is not None:
                raise ParseError("duplicate problem line", lineno)
            if len(tok) != 4 or tok[1] != "cnf":
                raise ParseError(f"malformed header {line!r}", lineno)
            try:
                header = (int(tok[2]), int(tok[3]))
            except ValueError:
                raise ParseError(f"malformed header {line!r}", lineno) from None
            continue
        if header is None:
            raise ParseError("clause before problem line", lineno)
        for t in tok:
            try:
                lit = int(t)
            except ValueError:
                raise ParseError(f"bad literal {t!r}", lineno) from None
            if lit == 0:
                if len(current) != 3:
                    raise DomainError(f"line {lineno}: clause {current} does not have exactly 3 literals")
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > header[0]:
                raise ParseError(f"literal {lit} outside variables 1..{header[0]}", lineno)
            else:
                current.append(lit)
    if header is None:
        raise ParseError("missing problem line")
    if current:
        raise ParseError("last clause is not terminated by 0", last_line)
    if len(clauses) != header[1]:
        raise ParseError(f"header announces {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], tuple(clauses))


def satisfying_assignments(formula):
    """All satisfying assignments, enumerated exhaustively (False before True)."""
    n = formula.num_vars
    for bits in product((False, True), repeat=n):
        a = dict(zip(range(1, n + 1), bits))
        if formula.evaluate(a):
            yield a


def is_satisfiable(formula):
    return next(satisfying_assignments(formula), None) is not None


# -- gadget --------------------------------------------------------------------

@dataclass(frozen=True)
class GadgetGraph:
    graph: Graph
    formula: CnfFormula
    k: int
    i: int
    roles: dict = field(repr=False)
    labels: dict = field(repr=False)

    @property
    def q(self):
        return 2 * self.k + self.i

    @property
    def params(self):
        return Params(self.q, self.k, 0)

    def role(self, name):
        return self.roles[name]

    def one(self, name):
        (v,) = self.roles[name]
        return v


def _both_or_neither(c, k):
    hits = (c.bits >> (2 * k - 1) & 1) + (c.bits >> (2 * k) & 1)
    return hits != 1


def block_sizes(k, i):
    """``(|A|, |B_p|, |Gamma_j|)`` as produced by the construction."""
    psi = enumerate_psi(2 * k + i, k)
    a = sum(1 for c in psi if _both_or_neither(c, k))
    return a, len(psi) - a, len(psi)


def stated_vertex_count(n, m, k, i):
    """The closed form 2 + C(2k+i-1,k-1) + n C(2k+i-1,k) + m (3 + C(2k+i,k))."""
    r = 2 * k + i
    return 2 + comb(r - 1, k - 1) + n * comb(r - 1, k) + m * (3 + comb(r, k))


def gadget_vertex_count(n, m, k, i):
    a, b, g = block_sizes(k, i)
    return 2 + a + n * b + m * (3 + g)


def build_gadget(formula, k, i):
    if k < 1 or i < 1:
        raise DomainError(f"the gadget needs k >= 1 and i >= 1 (k={k}, i={i})")
    r = 2 * k + i
    if r > 64:
        raise DomainError("2k+i must not exceed 64")
    psi = enumerate_psi(r, k)
    disjoint = psi.legal_matrix(0)
    a_sets = [j for j, c in enumerate(psi) if _both_or_neither(c, k)]
    b_sets = [j for j, c in enumerate(psi) if not _both_or_neither(c, k)]

    labels = {}      # vertex -> Psi index
    roles = {}
    edges = []
    nxt = 0

    def fresh(count):
        nonlocal nxt
        out = tuple(range(nxt, nxt + count))
        nxt += count
        return out

    def kneser_edges(block):
        for x in range(len(block)):
            for y in range(x + 1, len(block)):
                if disjoint[labels[block[x]], labels[block[y]]]:
                    edges.append((block[x], block[y]))

    def by_label(block, colors):
        target = psi.index_of(make_color_set(colors, r))
        return next(v for v in block if labels[v] == target)

    roles["u"], roles["w"] = fresh(1), fresh(1)
    u, w = roles["u"][0], roles["w"][0]
    a_block = fresh(len(a_sets))
    labels.update(zip(a_block, a_sets))
    roles["A"] = a_block
    kneser_edges(a_block)

    base = list(range(1, k))
    extra = range(2 * k + 2, r + 1)
    x_vertex, xbar_vertex = {}, {}
    for p in range(1, formula.num_vars + 1):
        block = fresh(len(b_sets))
        labels.update(zip(block, b_sets))
        roles[f"B_{p}"] = block
        for bv in block:
            for av in a_block:
                if disjoint[labels[bv], labels[av]]:
                    edges.append((av, bv))
        kneser_edges(block)
        x_vertex[p] = by_label(block, base + [2 * k])
        xbar_vertex[p] = by_label(block, base + [2 * k + 1])
        roles[f"x_{p}"] = (x_vertex[p],)
        roles[f"xbar_{p}"] = (xbar_vertex[p],)

    u_prime = by_label(a_block, range(1, k + 1))
    w_prime = by_label(a_block, range(k, 2 * k))
    roles["u_prime"], roles["w_prime"] = (u_prime,), (w_prime,)
    edges += [(u, w), (u, u_prime), (w, w_prime)]

    u_set = tuple(by_label(a_block, base + [c]) for c in extra)
    w_set = tuple(by_label(a_block, list(range(k, 2 * k - 1)) + [c]) for c in extra)
    roles["U_prime"], roles["W_prime"] = u_set, w_set
    edges += [(u, v) for v in u_set] + [(w, v) for v in w_set]

    ti3 = canonical_ti3set(r, k)
    for j, clause in enumerate(formula.clauses, start=1):
        z = fresh(3)
        gamma = fresh(len(psi))
        labels.update(zip(gamma, range(len(psi))))
        t = tuple(gamma[idx] for idx in ti3)
        roles[f"z_{j}"], roles[f"Gamma_{j}"], roles[f"t_{j}"] = z, gamma, t
        kneser_edges(gamma)
        for ell in range(3):
            lit = clause[ell]
            edges.append((w, z[ell]))
            edges.append((z[ell], xbar_vertex[lit] if lit > 0 else x_vertex[-lit]))
            edges.append((z[ell], t[ell]))
            edges += [(z[ell], v) for v in u_set]
            edges += [(t[ell], v) for v in w_set]

    graph = Graph(nxt, edges)
    return GadgetGraph(graph, formula, k, i, roles, {v: psi[j] for v, j in labels.items()})


# -- witness translation ---------------------------------------------------------

def _permuted(c, sigma, q):
    """Apply a color map (1-based dict, identity elsewhere) to a ColorSet."""
    return make_color_set([sigma.get(x, x) for x in c.colors()], q)


def assignment_to_coloring(gadget, assignment):
    """Proper (2k+i, k, 0)-coloring built from a satisfying assignment."""
    formula, k, q = gadget.formula, gadget.k, gadget.q
    if set(assignment) != set(range(1, formula.num_vars + 1)):
        raise DomainError("assignment must give a value to every variable")
    if not formula.evaluate(assignment):
        raise DomainError("assignment does not satisfy the formula")
    true_c, false_c = 2 * k, 2 * k + 1
    swap = {true_c: false_c, false_c: true_c}
    f = {}
    for v in gadget.role("A"):
        f[v] = gadget.labels[v]
    for p in range(1, formula.num_vars + 1):
        for v in gadget.role(f"B_{p}"):
            f[v] = gadget.labels[v] if assignment[p] else _permuted(gadget.labels[v], swap, q)
    f[gadget.one("u")] = make_color_set(range(k + 1, 2 * k + 1), q)
    f[gadget.one("w")] = make_color_set(list(range(1, k)) + [false_c], q)
    z_free = make_color_set(range(k, 2 * k), q)
    z_true = make_color_set(list(range(k, 2 * k - 1)) + [true_c], q)
    for j, clause in enumerate(formula.clauses, start=1):
        star = next(ell for ell, lit in enumerate(clause) if assignment[abs(lit)] == (lit > 0))
        for ell, zv in enumerate(gadget.role(f"z_{j}")):
            f[zv] = z_true if ell == star else z_free
        # t_star takes color 2k-1; the other two take 2k and 2k+1 in order
        targets = [true_c, false_c]
        wanted = {}
        for ell in range(3):
            wanted[2 * k - 1 + ell] = 2 * k - 1 if ell == star else targets.pop(0)
        for v in gadget.role(f"Gamma_{j}"):
            f[v] = _permuted(gadget.labels[v], wanted, q)
    f = dict(sorted(f.items()))
    if not is_proper(gadget.graph, f, gadget.params):
        raise AssertionError("constructed coloring is not proper")
    return f


def _classes_on(vertices, f, q):
    out = {c: set() for c in range(1, q + 1)}
    for v in vertices:
        for c in f[v].colors():
            out[c].add(v)
    return {c: frozenset(s) for c, s in out.items()}


def coloring_to_assignment(gadget, f):
    """Read a satisfying assignment off a proper (2k+i, k, 0)-coloring.

    The coloring of A fixes, for every natural color other than 2k and 2k+1,
    which actual color plays its part.  The two leftover actual colors stand
    for 2k and 2k+1; the one on ``u`` is the true color.
    """
    formula, k, q = gadget.formula, gadget.k, gadget.q
    params = gadget.params
    if set(f) != set(range(gadget.graph.n)):
        raise DomainError("coloring must cover every vertex of the gadget")
    if not is_proper(gadget.graph, f, params):
        raise DomainError("coloring is not a proper (2k+i,k,0)-coloring")
    a_block = gadget.role("A")
    natural = _classes_on(a_block, gadget.labels, q)
    actual = _classes_on(a_block, f, q)
    ambiguous = {2 * k, 2 * k + 1}
    sigma = {}
    for a, cls in natural.items():
        if a in ambiguous:
            continue
        matches = [c for c, acls in actual.items() if acls == cls]
        if len(matches) != 1:
            raise DomainError(f"cannot identify the color playing natural color {a} on A")
        sigma[a] = matches[0]
    if len(set(sigma.values())) != len(sigma):
        raise DomainError("coloring of A is not a relabelled natural coloring")
    pair = set(range(1, q + 1)) - set(sigma.values())
    on_u = pair & set(f[gadget.one("u")].colors())
    if len(on_u) != 1:
        raise DomainError("u does not carry exactly one of the two literal colors")
    (true_color,) = on_u
    out = {}
    for p in range(1, formula.num_vars + 1):
        xc = set(f[gadget.one(f"x_{p}")].colors()) & pair
        if len(xc) != 1:
            raise DomainError(f"x_{p} does not carry exactly one of the two literal colors")
        out[p] = true_color in xc
    if not formula.evaluate(out):
        raise DomainError("decoded assignment does not satisfy the formula")
    return out


# -- complement trick ------------------------------------------------------------

def complement_lift(g, f, params):
    """(2k+i, k, 0)-coloring -> (2k+i, k+i, i)-coloring by complementing every set."""
    if params.i != 0:
        raise DomainError("complement_lift expects a (q, k, 0)-coloring")
    i = params.q - 2 * params.k
    if i < 1:
        raise DomainError("complement_lift needs q = 2k+i with i >= 1")
    if not is_proper(g, f, params):
        raise DomainError("coloring is not proper")
    lifted = {v: complement_set(c) for v, c in f.items()}
    return lifted, Params(params.q, params.k + i, i)


def complement_lower(g, f, params):
    """Inverse of ``complement_lift``: (2k+i, k+i, i) -> (2k+i, k, 0)."""
    k = params.k - params.i
    if k < 1 or params.q != 2 * k + params.i:
        raise DomainError("complement_lower expects parameters (2k+i, k+i, i)")
    if not is_proper(g, f, params):
        raise DomainError("coloring is not proper")
    lowered = {v: complement_set(c) for v, c in f.items()}
    return lowered, Params(params.q, k, 0)


# -- roles sidecar -----------------------------------------------------------------

def write_roles(gadget):
    lines = [f"c q {gadget.q} k {gadget.k} i {gadget.i}"]
    for name, verts in gadget.roles.items():
        lines.append(f"role {name} " + " ".join(str(v + 1) for v in verts))
    for v in sorted(gadget.labels):
        lines.append(f"label {v + 1} {gadget.labels[v]}")
    return "\n".join(lines) + "\n"


def parse_roles(text, q):
    roles, labels = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        tok = line.split(None, 2)
        if tok[0] == "role" and len(tok) >= 2:
            rest = tok[2].split() if len(tok) == 3 else []
            roles[tok[1]] = tuple(int(x) - 1 for x in rest)
        elif tok[0] == "label" and len(tok) == 3:
            labels[int(tok[1]) - 1] = parse_color_set(tok[2], q)
        else:
            raise ParseError(f"unrecognised roles line {line!r}", lineno)
    return roles, labels

import itertools
import random

import pytest

from kicolor import kernels
from kicolor.colorset import make_color_set
from kicolor.errors import DomainError, UnsupportedPaletteError
from kicolor.fvs import find_fvs_exact, find_fvs_greedy, verify_fvs
from kicolor.graph import (
    Graph, complete_graph, cycle_graph, empty_graph, induced_forest, path_graph, random_graph,
    random_tree, star_graph,
)
from kicolor.oracle import brute_count, brute_decide, enumerate_colorings
from kicolor.solver import (
    Params, chromatic_number_ki, count_colorings, decide, dp_tables, extend_decide, extend_extract,
    find_coloring, h_compatible_sets, is_proper, parse_coloring, write_coloring,
)

from conftest import all_params, small_named_graphs

BACKENDS = sorted(kernels.available())


def cs(q, *colors):
    return make_color_set(colors, q)


def test_params_validation():
    with pytest.raises(DomainError):
        Params(3, 0, 0)
    with pytest.raises(DomainError):
        Params(3, 1, -1)
    with pytest.raises(UnsupportedPaletteError):
        Params(65, 2, 0)


def test_is_proper_examples():
    k3 = complete_graph(3)
    assert is_proper(k3, {0: cs(3, 1), 1: cs(3, 2), 2: cs(3, 3)}, Params(3, 1, 0))
    e = path_graph(2)
    f = {0: cs(3, 1, 2), 1: cs(3, 2, 3)}
    assert not is_proper(e, f, Params(3, 2, 0))
    assert is_proper(e, f, Params(3, 2, 1))
    # edges leaving the colored part are ignored
    assert is_proper(k3, {0: cs(3, 1)}, Params(3, 1, 0))


def test_h_compatible_examples():
    g = star_graph(2)   # centre 0, leaves 1 and 2
    p = Params(3, 1, 0)
    assert h_compatible_sets(0, {}, g, p) == list(p.psi)
    assert h_compatible_sets(0, {1: cs(3, 1), 2: cs(3, 2)}, g, p) == [cs(3, 3)]
    p = Params(5, 2, 0)
    got = h_compatible_sets(0, {1: cs(5, 1, 2)}, Graph(2, [(0, 1)]), p)
    assert sorted(c.colors() for c in got) == [(3, 4), (3, 5), (4, 5)]


def test_extend_decide_examples():
    c4 = cycle_graph(4)
    assert extend_decide(c4, {0}, {0: cs(2, 1)}, Params(2, 1, 0))
    k3 = complete_graph(3)
    assert not extend_decide(k3, {0, 1}, {0: cs(2, 1), 1: cs(2, 2)}, Params(2, 1, 0))
    assert extend_decide(star_graph(3), set(), {}, Params(3, 2, 1))
    assert brute_decide(star_graph(3), Params(3, 2, 1))


def test_extend_rejects_improper_h():
    with pytest.raises(DomainError):
        extend_decide(complete_graph(3), {0, 1}, {0: cs(2, 1), 1: cs(2, 1)}, Params(2, 1, 0))
    with pytest.raises(DomainError):
        extend_decide(cycle_graph(4), set(), {}, Params(2, 1, 0))


def test_extract_examples():
    f = extend_extract(cycle_graph(4), {0}, {0: cs(2, 1)}, Params(2, 1, 0))
    assert [f[v].colors() for v in range(4)] == [(1,), (2,), (1,), (2,)]
    assert extend_extract(complete_graph(3), {0, 1}, {0: cs(2, 1), 1: cs(2, 2)}, Params(2, 1, 0)) is None

    p = Params(3, 2, 1)
    f = extend_extract(path_graph(3), set(), {}, p)
    least = min(enumerate_colorings(path_graph(3), p))
    assert tuple(p.psi.index_of(f[v]) for v in range(3)) == least


def test_decide_examples(petersen):
    assert decide(complete_graph(4), Params(4, 1, 0))
    assert not decide(complete_graph(4), Params(3, 1, 0))
    assert decide(petersen, Params(5, 2, 0))
    assert not decide(petersen, Params(4, 2, 0))
    c5 = cycle_graph(5)
    assert decide(c5, Params(4, 2, 1)) == brute_decide(c5, Params(4, 2, 1))


def test_shortcuts():
    assert decide(empty_graph(0), Params(0, 1, 0))
    assert not decide(path_graph(1), Params(1, 2, 0))
    assert decide(complete_graph(6), Params(2, 2, 2))
    assert count_colorings(complete_graph(3), Params(4, 2, 2)) == 6 ** 3
    assert count_colorings(empty_graph(0), Params(3, 1, 0)) == 1
    assert count_colorings(path_graph(2), Params(1, 2, 0)) == 0


def test_count_examples():
    assert count_colorings(empty_graph(3), Params(3, 1, 0)) == 27
    assert count_colorings(path_graph(2), Params(3, 1, 0)) == 6
    c4 = cycle_graph(4)
    p = Params(3, 2, 1)
    assert count_colorings(c4, p) == brute_count(c4, p)
    # with k=2, i=1 over [3] only equal sets clash: proper 3-colorings of C4
    assert count_colorings(c4, p) == 18


def test_chromatic_examples():
    assert chromatic_number_ki(complete_graph(3), 1, 0) == 3
    assert chromatic_number_ki(cycle_graph(5), 2, 0) == 5
    assert not brute_decide(cycle_graph(5), Params(4, 2, 0))
    tree = random_tree(12, random.Random(4))
    for k in range(1, 4):
        for i in range(0, k):
            assert chromatic_number_ki(tree, k, i) == 2 * k - i
        assert chromatic_number_ki(tree, k, k) == k


@pytest.mark.parametrize("name,g", small_named_graphs().items())
def test_named_graphs_match_oracle(name, g):
    for p in all_params(6, 3):
        assert decide(g, p) == brute_decide(g, p), p
    for p in all_params(5, 3):
        assert count_colorings(g, p) == brute_count(g, p), p


@pytest.mark.parametrize("seed", range(12))
def test_random_graphs_match_oracle(seed):
    rng = random.Random(1000 + seed)
    g = random_graph(rng.randint(1, 8), rng.choice([0.2, 0.5, 0.8]), rng)
    for p in all_params(6, 3):
        got = decide(g, p)
        assert got == brute_decide(g, p), p
        if got:
            assert decide(g, Params(p.q + 1, p.k, p.i))
        f = find_coloring(g, p)
        assert (f is not None) == got
        if f is not None:
            assert is_proper(g, f, p) and set(f) == set(range(g.n))


def _witnesses(g, tree_vertices, w, c, h, params):
    """Proper colorings of the subtree below ``w`` with w -> c that agree with h."""
    verts = sorted(tree_vertices)
    psi = params.psi
    found = 0
    for assign in itertools.product(range(len(psi)), repeat=len(verts)):
        f = dict(h)
        f.update((v, psi[a]) for v, a in zip(verts, assign))
        if f[w] == psi[c] and is_proper(g, f, params):
            found += 1
    return found


def _subtree(tree, w):
    out = [w]
    for x in out:
        out.extend(tree.children[x])
    return out


@pytest.mark.parametrize("seed", range(8))
def test_dp_table_semantics(seed):
    rng = random.Random(seed)
    n_tree = rng.randint(1, 5)
    # a small tree plus one FVS vertex joined to a few tree vertices
    edges = [(v, rng.randrange(v)) for v in range(1, n_tree)]
    x = n_tree
    edges += [(x, v) for v in range(n_tree) if rng.random() < 0.5]
    g = Graph(n_tree + 1, edges)
    params = rng.choice([Params(3, 1, 0), Params(4, 2, 1), Params(5, 2, 0)])
    forest = induced_forest(g, {x})
    for hc in params.psi:
        h = {x: hc}
        dec = dp_tables(g, {x}, h, params, "decide")
        cnt = dp_tables(g, {x}, h, params, "count")
        for tree in forest.trees:
            for w in tree.postorder:
                sub = _subtree(tree, w)
                compat = set(h_compatible_sets(w, h, g, params))
                for c in range(len(params.psi)):
                    witnesses = _witnesses(g, sub, w, c, h, params)
                    assert cnt[w][c] == witnesses
                    assert dec[w][c] == (witnesses > 0)
                    if params.psi[c] not in compat:
                        assert cnt[w][c] == 0


@pytest.mark.parametrize("seed", range(10))
def test_fvs_independence(seed):
    rng = random.Random(seed)
    g = random_graph(rng.randint(3, 8), 0.5, rng)
    sets = [find_fvs_exact(g, g.n).vertices, find_fvs_greedy(g).vertices, frozenset(range(g.n))]
    extra = set(sets[0])
    extra.update(rng.sample(range(g.n), 2))
    sets.append(frozenset(extra))
    for s in sets:
        assert verify_fvs(g, s)
    for p in [Params(3, 1, 0), Params(4, 2, 1), Params(5, 2, 0), Params(5, 3, 2)]:
        assert len({decide(g, p, s) for s in sets}) == 1
        assert len({count_colorings(g, p, s) for s in sets}) == 1


@pytest.mark.parametrize("seed", range(6))
def test_parallel_determinism(seed):
    rng = random.Random(seed)
    g = random_graph(rng.randint(4, 9), 0.5, rng)
    for p in [Params(4, 1, 0), Params(5, 2, 1), Params(6, 2, 0)]:
        serial = count_colorings(g, p, threads=1)
        assert count_colorings(g, p, threads=4) == serial
        assert count_colorings(g, p, threads=3) == serial
        assert decide(g, p, threads=4) == decide(g, p, threads=1)


@pytest.mark.parametrize("seed", range(8))
def test_backends_agree(seed):
    rng = random.Random(seed)
    g = random_graph(rng.randint(1, 9), rng.choice([0.3, 0.6]), rng)
    for p in all_params(6, 3):
        answers = {(decide(g, p, backend=b), count_colorings(g, p, backend=b)) for b in BACKENDS}
        assert len(answers) == 1
        colorings = {tuple(sorted((v, str(c)) for v, c in (find_coloring(g, p, backend=b) or {}).items()))
                     for b in BACKENDS}
        assert len(colorings) == 1


def test_count_overflow_falls_back_to_big_integers():
    # 56^40 overflows 64 bits; counting must stay exact
    g = Graph(41, [(0, v) for v in range(1, 41)])
    p = Params(8, 3, 0)
    per_leaf = 10  # 3-sets disjoint from a fixed 3-set inside [8]
    assert count_colorings(g, p) == 56 * per_leaf ** 40
    tables = dp_tables(g, set(), {}, p, "count")
    assert tables[0][0] == per_leaf ** 40


def test_bound_check(rng):
    for _ in range(10):
        g = random_graph(rng.randint(2, 8), 0.5, rng)
        s = find_fvs_exact(g, g.n).vertices
        for k in (1, 2):
            for i in range(0, k):
                q = chromatic_number_ki(g, k, i, s)
                assert q <= k * (len(s) + 2)
                assert decide(g, Params(q, k, i)) and not decide(g, Params(q - 1, k, i))


def test_coloring_file_round_trip():
    p = Params(5, 2, 0)
    f = find_coloring(cycle_graph(5), p)
    text = write_coloring(f)
    assert text.splitlines()[0].startswith("v 1 {")
    assert parse_coloring(text, 5, 5) == f

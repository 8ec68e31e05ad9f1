import random
from math import comb

import pytest

from kicolor.errors import DomainError, ResourceExceeded
from kicolor.graph import (
    complete_graph, cycle_graph, empty_graph, path_graph, petersen_graph, random_graph, random_tree,
)
from kicolor.kk1 import chi_k_kminus1, chromatic_classic, independent_set_counts
from kicolor.oracle import brute_chromatic
from kicolor.solver import chromatic_number_ki


def test_classic_examples():
    assert chromatic_classic(complete_graph(4)) == 4
    assert chromatic_classic(cycle_graph(5)) == 3
    assert chromatic_classic(petersen_graph()) == 3 == brute_chromatic(petersen_graph(), 1, 0)
    assert chromatic_classic(empty_graph(0)) == 0
    assert chromatic_classic(empty_graph(4)) == 1


def test_independent_set_counts_small():
    counts = independent_set_counts(path_graph(3))
    # subsets of {0,1,2}: full set has {}, 0, 1, 2, {0,2}
    assert counts[0b111] == 5
    assert counts[0b011] == 3
    assert counts[0] == 1


def test_size_limit():
    with pytest.raises(ResourceExceeded):
        chromatic_classic(empty_graph(25))


@pytest.mark.parametrize("seed", range(25))
def test_classic_matches_oracle(seed):
    rng = random.Random(seed)
    g = random_graph(rng.randint(1, 9), rng.choice([0.3, 0.5, 0.8]), rng)
    chi = chromatic_classic(g)
    assert chi == brute_chromatic(g, 1, 0)
    perm = list(range(g.n))
    rng.shuffle(perm)
    assert chromatic_classic(g.relabel(perm)) == chi


def test_kk1_examples():
    r = chi_k_kminus1(complete_graph(3), 2)
    assert r.q_kk1 == 3
    for n in range(1, 8):
        for k in range(1, 4):
            q = chi_k_kminus1(complete_graph(n), k).q_kk1
            assert comb(q, k) >= n and (q == k or comb(q - 1, k) < n)
    tree = random_tree(10, random.Random(2))
    for k in range(1, 4):
        r = chi_k_kminus1(tree, k)
        assert r.chi == 2 and r.q_kk1 == k + 1
    c5 = chi_k_kminus1(cycle_graph(5), 2)
    assert (c5.chi, c5.q_kk1) == (3, 3)
    assert chromatic_number_ki(cycle_graph(5), 2, 1) == 3
    with pytest.raises(DomainError):
        chi_k_kminus1(cycle_graph(5), 0)


def test_witness_lines():
    assert chi_k_kminus1(cycle_graph(5), 2).witnesses() == ["C(3,2) = 3 >= 3", "C(2,2) = 1 < 3"]


@pytest.mark.parametrize("seed", range(12))
def test_three_engines_agree(seed):
    rng = random.Random(seed)
    g = random_graph(rng.randint(1, 7), rng.choice([0.3, 0.6]), rng)
    for k in range(1, 4):
        q = chi_k_kminus1(g, k).q_kk1
        assert q == chromatic_number_ki(g, k, k - 1) == brute_chromatic(g, k, k - 1)

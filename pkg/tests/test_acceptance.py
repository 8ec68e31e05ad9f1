"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line (shown in the terminal summary and with
``-s``) and then asserts, so a failing criterion also fails the suite.
"""

import itertools
import random
import sys
import time
from math import comb
from pathlib import Path

import pytest

from kicolor.fvs import find_fvs
from kicolor.gadget import (
    CnfFormula, assignment_to_coloring, build_gadget, coloring_to_assignment, is_satisfiable,
    satisfying_assignments, stated_vertex_count,
)
from kicolor.graph import petersen_graph, random_graph, random_tree
from kicolor.kk1 import chi_k_kminus1, chromatic_classic
from kicolor.kneser import build_kneser, check_natural_uniqueness, color_occurrence_profile
from kicolor.oracle import (
    brute_count, brute_decide, enumerate_colorings, max_independent_set_size,
)
from kicolor.solver import Params, chromatic_number_ki, count_colorings, decide, find_coloring

from conftest import all_params, record_acceptance

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "benchmarks"))

DENSITIES = (0.2, 0.5, 0.8)


def graph_family(count, max_n, seed):
    rng = random.Random(seed)
    out = []
    for j in range(count):
        n = rng.randint(1, max_n)
        out.append(random_graph(n, DENSITIES[j % 3], rng))
    return out


def solver_answers(graphs, params_list, fn, threads):
    """Run ``fn`` on every (graph, params) pair; the FVS is computed once per graph."""
    out = []
    for g in graphs:
        s = find_fvs(g).vertices
        out.append(tuple(fn(g, p, s, threads=threads) for p in params_list))
    return out


@pytest.fixture(scope="module")
def decision_family():
    graphs = graph_family(200, 8, seed=1)
    params = list(all_params(6, 3))
    return graphs, params


@pytest.fixture(scope="module")
def counting_family():
    graphs = graph_family(200, 7, seed=2)
    params = list(all_params(5, 3))
    return graphs, params


@pytest.fixture(scope="module")
def serial_runs():
    return {}


def test_criterion_01_decision_matches_oracle(decision_family, serial_runs):
    graphs, params = decision_family
    t0 = time.perf_counter()
    got = solver_answers(graphs, params, decide, threads=1)
    want = [tuple(brute_decide(g, p) for p in params) for g in graphs]
    elapsed = time.perf_counter() - t0
    serial_runs["decide"] = got
    bad = sum(a != b for ga, gb in zip(got, want) for a, b in zip(ga, gb))
    ok = bad == 0 and elapsed < 300
    record_acceptance("1 decision oracle equivalence", ok,
                      f"{len(graphs) * len(params)} instances, {bad} mismatches, {elapsed:.1f}s")
    assert ok


def test_criterion_02_count_matches_oracle(counting_family, serial_runs):
    graphs, params = counting_family
    t0 = time.perf_counter()
    got = solver_answers(graphs, params, count_colorings, threads=1)
    want = [tuple(brute_count(g, p) for p in params) for g in graphs]
    elapsed = time.perf_counter() - t0
    serial_runs["count"] = got
    bad = sum(a != b for ga, gb in zip(got, want) for a, b in zip(ga, gb))
    ok = bad == 0
    record_acceptance("2 counting oracle equivalence", ok,
                      f"{len(graphs) * len(params)} instances, {bad} mismatches, {elapsed:.1f}s")
    assert ok


def test_criterion_03_forest_formula():
    rng = random.Random(3)
    t0 = time.perf_counter()
    bad = []
    for _ in range(50):
        tree = random_tree(rng.randint(2, 30), rng)
        for k in range(1, 5):
            for i in range(0, k + 1):
                want = k if i == k else 2 * k - i
                got = chromatic_number_ki(tree, k, i)
                if got != want:
                    bad.append((tree.n, k, i, got))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 60
    record_acceptance("3 forest formula 2k-i (k when i=k)", ok, f"{len(bad)} mismatches, {elapsed:.1f}s")
    assert ok


def test_criterion_04_kneser_needs_r_colors():
    details = []
    ok = True
    for r, k in [(3, 1), (4, 1), (5, 2)]:
        kg = build_kneser(r, k)
        below = decide(kg.graph, Params(r - 1, k, 0))
        at = decide(kg.graph, Params(r, k, 0))
        target = comb(r - 1, k - 1)
        psi = Params(r, k, 0).psi
        colorings = [kg.natural, find_coloring(kg.graph, Params(r, k, 0))]
        colorings += [{v: psi[c] for v, c in enumerate(a)}
                      for a in enumerate_colorings(kg.graph, Params(r, k, 0))]
        uniform = all(set(color_occurrence_profile(kg, f).values()) == {target} for f in colorings)
        ok &= (not below) and at and uniform
        details.append(f"K({r},{k}): {r - 1} colors {below}, {r} colors {at}, "
                       f"{len(colorings)} profiles uniform={uniform}")
    record_acceptance("4 Kneser graphs need r colors, uniform profiles", ok, "; ".join(details))
    assert ok


def test_criterion_05_natural_coloring_unique():
    t0 = time.perf_counter()
    results = {(r, k): check_natural_uniqueness(r, k) for r, k in [(3, 1), (4, 1), (5, 2)]}
    elapsed = time.perf_counter() - t0
    ok = all(results.values()) and elapsed < 600
    record_acceptance("5 natural coloring unique up to permutation", ok, f"{results}, {elapsed:.1f}s")
    assert ok


def test_criterion_06_ekr_spot_check():
    size = max_independent_set_size(build_kneser(5, 2).graph)
    ok = size == 4
    record_acceptance("6 largest independent set of K(5,2) is 4", ok, f"got {size}")
    assert ok


def test_criterion_07_kk1_consistency():
    rng = random.Random(7)
    bad = 0
    for _ in range(100):
        g = random_graph(rng.randint(1, 7), rng.choice(DENSITIES), rng)
        k = rng.randint(1, 3)
        if chi_k_kminus1(g, k).q_kk1 != chromatic_number_ki(g, k, k - 1):
            bad += 1
    pet = chromatic_classic(petersen_graph())
    t0 = time.perf_counter()
    big = []
    for p in (0.3, 0.5, 0.7):
        g = random_graph(18, p, rng)
        chi = chromatic_classic(g)
        # independent check by the backtracking oracle
        big.append(brute_decide(g, Params(chi, 1, 0)) and not brute_decide(g, Params(chi - 1, 1, 0)))
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and pet == 3 and all(big) and elapsed < 120
    record_acceptance("7 (k,k-1) reduction agrees with the FVS solver", ok,
                      f"{bad} mismatches of 100, chi(Petersen)={pet}, n=18 checks {big} in {elapsed:.2f}s")
    assert ok


def test_criterion_08_complement_trick():
    rng = random.Random(8)
    bad = 0
    for _ in range(100):
        g = random_graph(rng.randint(1, 7), rng.choice(DENSITIES), rng)
        for k in (1, 2):
            for i in (1, 2):
                if decide(g, Params(2 * k + i, k, 0)) != decide(g, Params(2 * k + i, k + i, i)):
                    bad += 1
    ok = bad == 0
    record_acceptance("8 complement trick preserves colorability", ok, f"{bad} mismatches of 400")
    assert ok


def all_formulas(n, m):
    lits = [sign * v for v in range(1, n + 1) for sign in (1, -1)]
    for clauses in itertools.product(itertools.product(lits, repeat=3), repeat=m):
        yield CnfFormula(n, clauses)


def test_criterion_09_gadget_end_to_end():
    rng = random.Random(9)
    formulas = [f for n in range(0, 3) for m in range(0, 3) if n or not m for f in all_formulas(n, m)]
    for _ in range(20):
        clauses = tuple(tuple(rng.choice((1, -1)) * rng.randint(1, 3) for _ in range(3)) for _ in range(2))
        formulas.append(CnfFormula(3, clauses))
    t0 = time.perf_counter()
    wrong_answer = wrong_count = bad_round_trip = 0
    for f in formulas:
        gd = build_gadget(f, 1, 1)
        if gd.graph.n != stated_vertex_count(f.num_vars, len(f.clauses), 1, 1):
            wrong_count += 1
        sat = is_satisfiable(f)
        if decide(gd.graph, gd.params) != sat:
            wrong_answer += 1
        for a in satisfying_assignments(f):
            if not f.evaluate(coloring_to_assignment(gd, assignment_to_coloring(gd, a))):
                bad_round_trip += 1
    elapsed = time.perf_counter() - t0
    ok = not (wrong_answer or wrong_count or bad_round_trip) and elapsed < 600
    record_acceptance("9 gadget: colorable iff satisfiable (k=1, i=1)", ok,
                      f"{len(formulas)} formulas, {wrong_answer} wrong answers, {wrong_count} wrong "
                      f"vertex counts, {bad_round_trip} failed round trips, {elapsed:.1f}s")
    assert ok


def test_criterion_10_parallel_determinism(decision_family, counting_family, serial_runs):
    if "decide" not in serial_runs or "count" not in serial_runs:
        pytest.skip("needs criteria 1 and 2 in the same session")
    dg, dp = decision_family
    cg, cp = counting_family
    same_decide = solver_answers(dg, dp, decide, threads=4) == serial_runs["decide"]
    same_count = solver_answers(cg, cp, count_colorings, threads=4) == serial_runs["count"]
    ok = same_decide and same_count
    record_acceptance("10 4-way parallel runs reproduce criteria 1-2", ok,
                      f"decide identical={same_decide}, count identical={same_count}")
    assert ok


def test_scaling_proxy():
    from bench_backends import scaling_proxy

    rows = scaling_proxy(sizes=(1, 2, 3), params=Params(4, 2, 1), repeats=5)
    worst = max(norm for _, _, norm in rows)
    ok = worst <= 4
    record_acceptance("benchmark proxy: time grows no faster than 4x |Psi|^(|S|+2)", ok,
                      ", ".join(f"|S|={s}: {t * 1e3:.2f}ms (x{norm:.2f})" for s, t, norm in rows))
    assert ok

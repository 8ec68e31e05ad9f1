"""Compare the compiled and pure-Python kernels, and measure growth in |S|.

    python benchmarks/bench_backends.py [--repeats N] [--json out.json]

The scaling run keeps one random tree fixed and attaches s extra vertices,
pairwise non-adjacent, each joined to a few tree vertices.  Those s vertices
are passed as the feedback vertex set, so only the number of colorings of S
changes between runs.  The model cost is |Psi|^(s+2); ``normalised`` divides
each time by the model and by the s=1 value.
"""

import argparse
import json
import random
import time

from kicolor import kernels
from kicolor.graph import Graph, random_graph, random_tree
from kicolor.oracle import brute_count
from kicolor.solver import Params, count_colorings, decide
from kicolor.fvs import find_fvs


def best_time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def forest_with_fvs(s, tree_size=30, attach=3, seed=5):
    rng = random.Random(seed)
    tree = random_tree(tree_size, rng)
    edges = list(tree.edges())
    for j in range(s):
        x = tree_size + j
        edges += [(x, v) for v in rng.sample(range(tree_size), attach)]
    return Graph(tree_size + s, edges), frozenset(range(tree_size, tree_size + s))


def scaling_proxy(sizes=(1, 2, 3), params=Params(4, 2, 1), backend=None, repeats=5):
    """Rows of (s, seconds, normalised growth relative to |Psi|^(s+2))."""
    P = len(params.psi)
    rows = []
    for s in sizes:
        g, fvs = forest_with_fvs(s)
        count_colorings(g, params, fvs, backend=backend)   # warm caches
        t = best_time(lambda: count_colorings(g, params, fvs, backend=backend), repeats)
        rows.append([s, t])
    base = rows[0][1] / P ** (sizes[0] + 2)
    return [(s, t, (t / P ** (s + 2)) / base) for s, t in rows]


def workloads():
    rng = random.Random(11)
    graphs = [random_graph(n, 0.4, rng) for n in (10, 12, 14)]
    for g in graphs:
        s = find_fvs(g).vertices
        for p in (Params(5, 2, 1), Params(6, 2, 0), Params(6, 3, 1)):
            yield f"count n={g.n} |S|={len(s)} {p}", lambda g=g, s=s, p=p, b=None: count_colorings(g, p, s, backend=b)
            yield f"decide n={g.n} |S|={len(s)} {p}", lambda g=g, s=s, p=p, b=None: decide(g, p, s, backend=b)
    small = random_graph(7, 0.4, rng)
    yield "oracle count n=7 (5,2,1)", lambda b=None: brute_count(small, Params(5, 2, 1), backend=b)


def compare_backends(repeats=3):
    names = sorted(kernels.available())
    rows = []
    for label, fn in workloads():
        times = {b: best_time(lambda: fn(b=b), repeats) for b in names}
        rows.append({"workload": label, **times})
    return names, rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--json")
    args = ap.parse_args()

    names, rows = compare_backends(args.repeats)
    print(f"{'workload':44s}" + "".join(f"{b:>12s}" for b in names) + ("     speedup" if len(names) > 1 else ""))
    for r in rows:
        line = f"{r['workload']:44s}" + "".join(f"{r[b]:12.5f}" for b in names)
        if len(names) > 1:
            line += f"{r['python'] / r['cython']:12.1f}x"
        print(line)

    scaling = {b: scaling_proxy(backend=b, repeats=args.repeats) for b in names}
    print("\n|S| scaling, q=4 k=2 i=1 (normalised growth should stay <= 4)")
    for b, table in scaling.items():
        for s, t, norm in table:
            print(f"  {b:8s} |S|={s}  {t:.6f}s  normalised {norm:.3f}")

    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"backends": rows, "scaling": scaling}, fh, indent=2)


if __name__ == "__main__":
    main()

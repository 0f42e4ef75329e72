"""Compare the numba and numpy kernels on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 5]

Each line reports the best wall time of both backends after one warm-up call
(which absorbs numba compilation) and checks that the outputs agree.
"""
from __future__ import annotations

import argparse
import itertools
import time

import numpy as np

from treechk import _kernels as K
from treechk.checkers import preset
from treechk.constructions import gen_ary_pended, gen_k_rake
from treechk.core import enumerate_trees


def best_of(fn, repeat: int) -> tuple[float, object]:
    out = fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases():
    big = gen_ary_pended(3, 9)
    ip, ix = big.csr
    yield f"tree_diameter n={big.n}", (lambda: K._np_tree_diameter(ip, ix)), (lambda: int(K._nb_tree_diameter(ip, ix)))

    rake = gen_k_rake(2, 30)
    rip, rix = rake.csr
    yield f"graph_diameter n={rake.n}", (lambda: K._np_graph_diameter(rip, rix)), (lambda: int(K._nb_graph_diameter(rip, rix)))

    n = 9
    seqs = np.array(list(itertools.product(range(n), repeat=n - 2))[:200_000], dtype=np.int64)
    yield f"prufer_bfs_ordered n={n} batch={len(seqs)}", (lambda: K._np_prufer_bfs_ordered(seqs, n)), (lambda: K._nb_prufer_bfs_ordered(seqs, n))

    checker = preset("rake:2")
    shapes = list(enumerate_trees(9, 1))
    tables = {s: checker.rule_table(max(len(a) for a in s.adj)) for s in shapes}

    def scan(fn):
        total = 0
        for s in shapes:
            sip, six = s.csr
            md = max(len(a) for a in s.adj)
            total += len(fn(sip, six, checker.c, tables[s], md))
        return total

    def nb_scan(sip, six, c, table, md):
        rp, r = K._ready_lists(sip, six)
        return K._nb_scan_colorings(sip, six, c, table, md, rp, r)

    yield "scan_colorings rake:2 n=9 (47 shapes)", (lambda: scan(K._np_scan_colorings)), (lambda: scan(nb_scan))


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not K._HAVE_NUMBA:
        print("numba is not installed; nothing to compare")
        return
    print(f"{'kernel':<44} {'numpy s':>10} {'numba s':>10} {'speedup':>8}  agree")
    for name, np_fn, nb_fn in cases():
        t_np, out_np = best_of(np_fn, args.repeat)
        t_nb, out_nb = best_of(nb_fn, args.repeat)
        agree = np.array_equal(np.asarray(out_np), np.asarray(out_nb))
        print(f"{name:<44} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}  {agree}")


if __name__ == "__main__":
    main()

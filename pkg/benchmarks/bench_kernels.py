#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the two hot workloads (breadth-first group closure and Felsch coset
enumeration) on both backends, checks the outputs agree, and prints a
timing table. Sizes are chosen to finish in well under a minute on either
backend; pass --heavy for the large cases the verification suite uses.

Usage: python benchmarks/bench_kernels.py [--heavy]
"""

import argparse
import time

from braidcong._kernels import pykernels
from braidcong.braid import BraidWord
from braidcong.burau import integral_burau
from braidcong.cosets import braid_presentation

try:
    from braidcong._kernels import _core as core
except ImportError:
    core = None


def braid_mults(n, ell):
    mults = []
    for i in range(1, n):
        g = integral_burau(BraidWord.generator(n, i)).reduce_mod(ell)
        mults.append(g.encode())
        mults.append(g.inverse().encode())
    return mults


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return time.perf_counter() - t0, out


def bench_closure(name, n, ell, rows):
    mults = braid_mults(n, ell)
    t_pure, (blob_p, par_p, _, ok_p) = timed(
        pykernels.bfs_closure, mults, n, ell, 10**7
    )
    assert ok_p
    if core is None:
        rows.append((name, len(par_p), None, t_pure))
        return
    t_core, (blob_c, par_c, _, ok_c) = timed(core.bfs_closure, mults, n, ell, 10**7)
    assert ok_c and bytes(blob_c) == bytes(blob_p) and list(par_c) == list(par_p)
    rows.append((name, len(par_p), t_core, t_pure))


def bench_cosets(name, n, m, rows):
    pres = braid_presentation(n, m)
    t_pure, (st_p, order_p, def_p, _) = timed(
        pykernels.todd_coxeter, pres.ngens, list(pres.relators), 10**7, "felsch"
    )
    assert st_p == 0
    if core is None:
        rows.append((name, order_p, None, t_pure))
        return
    t_core, (st_c, order_c, def_c, _) = timed(
        core.todd_coxeter, pres.ngens, list(pres.relators), 10**7, "felsch"
    )
    assert st_c == 0 and order_c == order_p and def_c == def_p
    rows.append((name, order_p, t_core, t_pure))


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--heavy", action="store_true",
                        help="include the suite-scale workloads")
    args = parser.parse_args()

    if core is None:
        print("compiled kernels not available; timing the pure backend only\n")

    rows = []
    bench_closure("closure: braid image n=3 mod 16", 3, 16, rows)
    bench_closure("closure: braid image n=4 mod 4", 4, 4, rows)
    bench_closure("closure: braid image n=5 mod 2", 5, 2, rows)
    bench_cosets("cosets: braid quotient n=3 m=5", 3, 5, rows)
    bench_cosets("cosets: braid quotient n=4 m=3", 4, 3, rows)
    if args.heavy:
        bench_closure("closure: braid image n=5 mod 4", 5, 4, rows)
        bench_cosets("cosets: braid quotient n=5 m=3", 5, 3, rows)

    width = max(len(r[0]) for r in rows) + 2
    print(f"{'workload'.ljust(width)} {'size':>8} {'compiled':>10} {'pure':>10} {'speedup':>9}")
    for name, size, t_core, t_pure in rows:
        if t_core is None:
            print(f"{name.ljust(width)} {size:>8} {'-':>10} {t_pure:>9.3f}s {'-':>9}")
        else:
            print(
                f"{name.ljust(width)} {size:>8} {t_core:>9.3f}s {t_pure:>9.3f}s "
                f"{t_pure / t_core:>8.1f}x"
            )
    print("\noutputs verified identical across backends")


if __name__ == "__main__":
    main()

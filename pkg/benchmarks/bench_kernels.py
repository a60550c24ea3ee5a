"""Time the compiled kernels against the pure-Python ones.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from dyncol import kernels
from dyncol.colouring import witness_proper, witness_r_dynamic
from dyncol.construction import build, construction_params, with_explicit_m


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases():
    lg = build(construction_params(3, 2, 2))
    g = lg.graph
    dyn = witness_r_dynamic(lg).array
    proper = witness_proper(lg).array
    yield "first_improper_edge  G(3,2,2) clean", lambda k: k.first_improper_edge(g.indptr, g.indices, dyn)
    yield "first_starved_vertex G(3,2,2) clean", lambda k: k.first_starved_vertex(g.indptr, g.indices, dyn, 3)
    yield "first_starved_vertex G(3,2,2) reversed", lambda k: k.first_starved_vertex(
        g.indptr, g.indices, np.ascontiguousarray(proper[::-1]), 2
    )
    small = build(with_explicit_m(2, 2, 3)).graph.adjacency_masks()
    yield "brute_force_colouring G(2,2;3) k=2 r=2", lambda k: k.brute_force_colouring(small, 2, 2)
    c9 = [(1 << ((v - 1) % 9)) | (1 << ((v + 1) % 9)) for v in range(9)]
    yield "brute_force_colouring C9 k=4 r=3", lambda k: k.brute_force_colouring(c9, 4, 3)
    yield "brute_force_gamma    G(2,2;3) t=1", lambda k: k.brute_force_gamma(small, 1)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    if kernels.compiled_kernels is None:
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
    print(f"{'case':<42} {'python':>10} {'cython':>10} {'speedup':>8}")
    for name, fn in cases():
        py = best_of(lambda: fn(kernels.python_kernels), args.repeat)
        cy = best_of(lambda: fn(kernels.compiled_kernels), args.repeat)
        print(f"{name:<42} {py * 1e3:9.2f}ms {cy * 1e3:9.2f}ms {py / cy:7.1f}x")


if __name__ == "__main__":
    main()

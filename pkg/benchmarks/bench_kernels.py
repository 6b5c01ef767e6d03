"""Time the numba kernels against their numpy twins on random step paths.

Run: python benchmarks/bench_kernels.py [--jumps 200] [--repeat 5]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from cadlagity import _kernels
from cadlagity.corpus import CorpusSpec, generate_corpus
from cadlagity.oracles import GridSpec, _cell_nodes, _pair_kernel, _samples
from cadlagity.paths import distance_matrix


def _best_of(fn, args, repeat):
    fn(*args)  # warm-up (jit compile / caches)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--jumps", type=int, default=200)
    ap.add_argument("--grid", type=int, default=256)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    spec = CorpusSpec(count=1, min_jumps=args.jumps, max_jumps=args.jumps,
                      min_gap=0.5 / (args.jumps + 1), seed=1)
    f = generate_corpus(spec)[0]
    D = distance_matrix(f.values)
    T = f.knots
    m = f.n_pieces
    ts, at, vals = _samples(f, GridSpec(args.grid))
    DS = distance_matrix(vals)
    nodes = _cell_nodes(f, args.grid)
    DC = distance_matrix(f.values[np.searchsorted(f.breakpoints, 0.5 * (nodes[:-1] + nodes[1:]), side="right")])
    KQ = _pair_kernel(nodes, 3.5, 3)
    h = np.diff(nodes)

    cases = {
        "holder_max": (D, T, 0.5, np.inf),
        "hat_max": (D, T, 0.5),
        "triple_sum": (D, T, 0.25, 2.0, False, 0, m),
        "window_delta": (D, 0, m - 1),
        "window_n": (D, 0, m - 1),
        "range_n_table": (D,),
        "sample_triple_sup": (DS, ts, 0.5),
        "cell_triple_sum": (DC, h, KQ, 2.0),
        "sample_eta_sup": (DS, ts, at, 0.5),
    }
    nb, npf = _kernels.family("numba"), _kernels.family("numpy")
    print(f"pieces={m} samples={ts.size} cells={h.size}")
    print(f"{'kernel':<20}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}  agree")
    for name, a in cases.items():
        t_nb = _best_of(nb[name], a, args.repeat)
        t_np = _best_of(npf[name], a, args.repeat)
        r_nb, r_np = nb[name](*a), npf[name](*a)
        ok = np.allclose(r_nb, r_np, rtol=1e-12, atol=0)
        print(f"{name:<20}{1e3 * t_nb:>12.3f}{1e3 * t_np:>12.3f}{t_np / t_nb:>10.1f}  {ok}")


if __name__ == "__main__":
    main()

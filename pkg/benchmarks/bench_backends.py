"""Compare the numba kernels with their numpy/scipy fallbacks.

    python benchmarks/bench_backends.py [--repeat 20]

Both flavours live in ``pegembed._kernels`` regardless of the
``PEGEMBED_DISABLE_NUMBA`` flag, so one process can time both.  Compile
time is excluded by a warm-up call.
"""
import argparse
import time

import numpy as np

from pegembed import _kernels
from pegembed.embedder import EmbedderConfig, embed_biclique
from pegembed.hamiltonian import LogicalIsing
from pegembed.lattice import LatticeParams, build_lattice


def best_of(fn, repeat):
    fn()  # warm-up / JIT compile
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), float(np.median(times))


def routing_case(n_neighbours):
    p = LatticeParams(16)
    g = build_lattice(p)
    indptr, indices = g.csr
    e = embed_biclique(n_neighbours, n_neighbours, EmbedderConfig(p), g)
    chains = [np.asarray(c, dtype=np.int64) for c in e.hidden]
    used = np.zeros(g.n_qubits)
    for c in chains:
        used[c] += 1
    weight = 8.0 ** used
    ptr = np.zeros(len(chains) + 1, dtype=np.int64)
    np.cumsum([len(c) for c in chains], out=ptr[1:])
    nodes = np.concatenate(chains)
    return indptr, indices, weight, ptr, nodes


def ising_case(n_vars, seed=0):
    V = n_vars // 2
    model = LogicalIsing.random(V, n_vars - V, np.random.default_rng(seed))
    h, ja, jb, jv = model.arrays()
    return h, ja, jb, jv, 1e-9 * max(1.0, model.scale())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)

    rows = []
    for k in (5, 20, 60):
        case = routing_case(k)
        nb = best_of(lambda: _kernels.route_node_numba(*case), args.repeat)
        npy = best_of(lambda: _kernels.route_node_numpy(*case), args.repeat)
        rows.append((f"route_node, {k} neighbour chains", nb, npy))
    for n in (12, 16, 20):
        case = ising_case(n)
        reps = max(1, args.repeat // (4 if n >= 20 else 1))
        nb = best_of(lambda: _kernels.ground_states_numba(*case), reps)
        npy = best_of(lambda: _kernels.ground_states_numpy(*case), reps)
        rows.append((f"ground_states, {n} spins", nb, npy))

    print(f"{'kernel':<34}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for name, (nb_best, _), (np_best, _) in rows:
        print(f"{name:<34}{nb_best * 1e3:>12.3f}{np_best * 1e3:>12.3f}{np_best / nb_best:>9.1f}x")


if __name__ == "__main__":
    main()

"""Heuristic chain-growth embedder used as the comparison baseline.

Logical nodes are placed one at a time.  A node's chain is grown from the
root qubit that is cheapest to connect to every already placed neighbour
chain, where entering a qubit costs ``overuse_base ** (chains already on
it)``.  Overlaps are then worked out by rip-up-and-reroute sweeps, the
same negotiated-congestion idea used by FPGA routers: after each sweep
every qubit still shared by several chains accrues a history penalty, so a
contested qubit gets steadily more expensive until one chain gives it up.
"""
from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csgraph

from . import _kernels
from .embedder import Embedding
from .lattice import HardwareGraph
from .validator import validate

_MAX_EXPONENT = 60


@dataclass(frozen=True)
class HeuristicConfig:
    seed: int = 0
    max_tries: int = 10
    overuse_base: float = 8.0
    timeout: float | None = None  # seconds

    def __post_init__(self):
        if self.max_tries < 1:
            raise ValueError("max_tries must be >= 1")
        if not self.overuse_base > 1:
            raise ValueError("overuse_base must be > 1")


class HeuristicFailure(RuntimeError):
    """No vertex-disjoint embedding was found.

    ``overlap`` is the smallest number of shared qubits seen over all
    sweeps, or ``None`` when no complete placement was ever produced.
    """

    def __init__(self, reason: str, overlap: int | None, tries: int):
        super().__init__(f"{reason} (best overlap {overlap}, after {tries} sweep(s))")
        self.reason = reason
        self.overlap = overlap
        self.tries = tries


def _logical_adjacency(V: int, H: int, edges) -> list[list[int]]:
    if edges is None:
        vis = list(range(V))
        hid = list(range(V, V + H))
        return [hid[:] for _ in vis] + [vis[:] for _ in hid]
    adj: list[set] = [set() for _ in range(V + H)]
    for i, j in edges:
        if not (0 <= i < V and 0 <= j < H):
            raise ValueError(f"logical edge ({i}, {j}) outside K({V},{H})")
        adj[i].add(V + j)
        adj[V + j].add(i)
    return [sorted(a) for a in adj]


def _bfs_order(perm: np.ndarray, adj: list[list[int]]) -> list[int]:
    """Breadth-first order over the logical graph, seeded and tie-broken by
    ``perm``, so that every node after the first of its component has a
    placed neighbour when its turn comes."""
    rank = np.empty(len(perm), dtype=np.int64)
    rank[perm] = np.arange(len(perm))
    seen = np.zeros(len(perm), dtype=bool)
    out: list[int] = []
    for start in perm:
        if seen[start]:
            continue
        seen[start] = True
        queue = deque([int(start)])
        while queue:
            x = queue.popleft()
            out.append(x)
            for y in sorted(adj[x], key=rank.__getitem__):
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
    return out


def _usable_mask(graph: HardwareGraph) -> np.ndarray:
    """Qubits in the largest connected component of the enabled subgraph."""
    ncomp, labels = csgraph.connected_components(graph.adjacency, directed=False)
    deg = graph.degree()
    sizes = np.bincount(labels[deg > 0], minlength=ncomp)
    return labels == int(np.argmax(sizes))


class _Router:
    def __init__(self, graph: HardwareGraph, cfg: HeuristicConfig, rng):
        self.indptr, self.indices = graph.csr
        self.usable = _usable_mask(graph)
        self.usage = np.zeros(graph.n_qubits, dtype=np.int64)
        self.history = np.zeros(graph.n_qubits)
        self.cfg = cfg
        self.rng = rng

    def weights(self) -> np.ndarray:
        w = self.cfg.overuse_base ** np.minimum(self.usage, _MAX_EXPONENT).astype(float)
        w *= 1.0 + self.history
        w[~self.usable] = np.inf
        return w

    def place(self, neighbour_chains: Sequence[np.ndarray]) -> np.ndarray:
        weight = self.weights()
        if not neighbour_chains:
            free = np.flatnonzero(weight == weight.min())
            return np.array([self.rng.choice(free)], dtype=np.int64)
        nbr_ptr = np.zeros(len(neighbour_chains) + 1, dtype=np.int64)
        np.cumsum([len(c) for c in neighbour_chains], out=nbr_ptr[1:])
        nbr_nodes = np.concatenate(neighbour_chains).astype(np.int64)
        return _kernels.route_node(self.indptr, self.indices, weight, nbr_ptr, nbr_nodes)

    def overlap(self) -> int:
        return int(np.count_nonzero(self.usage > 1))

    def end_sweep(self) -> None:
        self.history += self.usage > 1


def heuristic_embed(V: int, H: int, graph: HardwareGraph,
                    cfg: HeuristicConfig = HeuristicConfig(),
                    edges: Iterable[tuple[int, int]] | None = None) -> Embedding:
    """Embed K(V, H), or the bipartite subgraph given by ``edges``.

    Raises :class:`HeuristicFailure` if the sweeps run out (``max_tries``) or
    the timeout expires before the chains become vertex-disjoint.
    """
    if graph.n_couplers == 0:
        raise HeuristicFailure("hardware graph has no couplers", None, 0)
    deadline = None if cfg.timeout is None else time.perf_counter() + cfg.timeout
    rng = np.random.default_rng(cfg.seed)
    edges = None if edges is None else [(int(i), int(j)) for i, j in edges]
    adj = _logical_adjacency(V, H, edges)
    n_nodes = V + H
    router = _Router(graph, cfg, rng)
    chains: list[np.ndarray | None] = [None] * n_nodes

    def reroute(x: int) -> None:
        old = chains[x]
        if old is not None:
            router.usage[old] -= 1
            chains[x] = None
        placed = [chains[y] for y in adj[x] if chains[y] is not None]
        new = router.place(placed)
        if len(new) == 0:
            raise HeuristicFailure(f"no route for logical node {x}", None, 0)
        chains[x] = new
        router.usage[new] += 1

    def timed_out() -> bool:
        return deadline is not None and time.perf_counter() > deadline

    best: int | None = None
    tries = 0
    while tries < cfg.max_tries:
        order = rng.permutation(n_nodes)
        if tries == 0:
            # every node but the first sees a placed neighbour
            order = _bfs_order(order, adj)
        for x in order:
            if timed_out():
                raise HeuristicFailure("timeout", best, tries)
            try:
                reroute(int(x))
            except HeuristicFailure as exc:
                raise HeuristicFailure(exc.reason, best, tries) from None
        tries += 1
        ov = router.overlap()
        router.end_sweep()
        best = ov if best is None else min(best, ov)
        if ov == 0:
            break
    else:
        raise HeuristicFailure("sweeps exhausted", best, tries)

    lp = graph.params
    params = {"M": lp.M if lp else None, "alpha": lp.alpha if lp else None,
              "m": None, "n": None, "C0": None}
    if lp is not None and lp.shift != lp.alpha // 2:
        params["shift"] = lp.shift
    out = [sorted(int(q) for q in c) for c in chains]
    emb = Embedding(out[:V], out[V:], params, "heuristic")
    if not validate(emb, graph, V, H, edges=edges).is_valid:
        raise HeuristicFailure("internal: result failed validation", best, tries)
    return emb

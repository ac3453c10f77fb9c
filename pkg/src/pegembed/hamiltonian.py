"""Ising parameters on K(V, H) and on an embedded lattice.

Energy convention throughout: ``E(s) = sum_i h_i s_i + sum_{i<j} J_ij s_i s_j``
with ``s_i`` in ``{-1, +1}``.  Chains are held together by ferromagnetic
(negative) couplers.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .embedder import Embedding
from .lattice import HardwareGraph, build_lattice

BRUTE_FORCE_LIMIT = 24


@dataclass
class LogicalIsing:
    """Biases and visible-hidden couplings of a bipartite Ising model.

    Variables are ordered visible ``0..V-1`` then hidden ``V..V+H-1``.
    ``J`` maps ``(i, j)`` (visible index, hidden index) to a coupling.
    """

    V: int
    H: int
    h: np.ndarray = None
    J: dict = field(default_factory=dict)

    def __post_init__(self):
        self.h = np.zeros(self.V + self.H) if self.h is None else np.asarray(self.h, dtype=float)
        if self.h.shape != (self.V + self.H,):
            raise ValueError(f"h must have length V+H = {self.V + self.H}")
        J = {}
        for (i, j), v in self.J.items():
            if not (0 <= i < self.V and 0 <= j < self.H):
                raise ValueError(f"coupling ({i}, {j}) is not a visible-hidden pair")
            J[(int(i), int(j))] = float(v)
        self.J = J

    @property
    def n_variables(self) -> int:
        return self.V + self.H

    @property
    def variables(self) -> list[int]:
        return list(range(self.V + self.H))

    def arrays(self):
        keys = sorted(self.J)
        ja = np.array([i for i, _ in keys], dtype=np.int64)
        jb = np.array([self.V + j for _, j in keys], dtype=np.int64)
        jv = np.array([self.J[k] for k in keys], dtype=float)
        return self.h.copy(), ja, jb, jv

    def scale(self) -> float:
        return float(np.abs(self.h).sum() + sum(abs(v) for v in self.J.values()))

    @classmethod
    def random(cls, V: int, H: int, rng, values=(-1.0, 1.0)) -> "LogicalIsing":
        values = np.asarray(values, dtype=float)
        h = rng.choice(values, size=V + H)
        J = {(i, j): float(rng.choice(values)) for i in range(V) for j in range(H)}
        return cls(V, H, h, J)

    def to_dict(self) -> dict:
        return {"V": self.V, "H": self.H, "h": self.h.tolist(),
                "J": [[i, j, v] for (i, j), v in sorted(self.J.items())]}

    @classmethod
    def from_dict(cls, d: dict) -> "LogicalIsing":
        J = {(int(i), int(j)): float(v) for i, j, v in d.get("J", [])}
        return cls(int(d["V"]), int(d["H"]), d.get("h"), J)


@dataclass
class PhysicalIsing:
    """Biases per qubit id and couplings per ``(a, b)`` coupler with ``a < b``."""

    h: dict = field(default_factory=dict)
    J: dict = field(default_factory=dict)

    @property
    def variables(self) -> list[int]:
        vs = set(self.h)
        for a, b in self.J:
            vs.add(a)
            vs.add(b)
        return sorted(vs)

    @property
    def n_variables(self) -> int:
        return len(self.variables)

    def arrays(self):
        variables = self.variables
        pos = {q: i for i, q in enumerate(variables)}
        h = np.array([self.h.get(q, 0.0) for q in variables], dtype=float)
        keys = sorted(self.J)
        ja = np.array([pos[a] for a, _ in keys], dtype=np.int64)
        jb = np.array([pos[b] for _, b in keys], dtype=np.int64)
        jv = np.array([self.J[k] for k in keys], dtype=float)
        return h, ja, jb, jv

    def scale(self) -> float:
        return float(sum(map(abs, self.h.values())) + sum(map(abs, self.J.values())))

    def to_dict(self) -> dict:
        return {"h": {str(q): v for q, v in sorted(self.h.items())},
                "J": [[a, b, v] for (a, b), v in sorted(self.J.items())]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict()) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "PhysicalIsing":
        h = {int(q): float(v) for q, v in d.get("h", {}).items()}
        J = {}
        for a, b, v in d.get("J", []):
            a, b = int(a), int(b)
            J[(min(a, b), max(a, b))] = float(v)
        return cls(h, J)


def _chain_owner(e: Embedding, n_qubits: int) -> np.ndarray:
    owner = np.full(n_qubits, -1, dtype=np.int64)
    for idx, chain in enumerate(e.chains):
        c = np.asarray(chain, dtype=np.int64)
        if (owner[c] >= 0).any() or len(set(chain)) != len(chain):
            raise ValueError(f"chain {idx} overlaps another chain")
        owner[c] = idx
    return owner


def embed_parameters(logical: LogicalIsing, e: Embedding, chain_strength: float,
                     graph: HardwareGraph | None = None) -> PhysicalIsing:
    """Transfer a logical model onto the embedding.

    Biases are split evenly over each chain.  Each visible-hidden pair gets
    its coupling on one coupler, the lexicographically smallest ``(a, b)``
    between the two chains.  Couplers inside a chain get ``-chain_strength``.
    Without ``graph`` the full lattice named in ``e.params`` is used.
    """
    if graph is None:
        graph = build_lattice(e.lattice_params())
    if chain_strength <= 0:
        raise ValueError("chain_strength must be positive")
    if (e.V, e.H) != (logical.V, logical.H):
        raise ValueError(f"embedding is {e.V}x{e.H}, model is {logical.V}x{logical.H}")
    owner = _chain_owner(e, graph.n_qubits)

    h: dict[int, float] = {}
    for idx, chain in enumerate(e.chains):
        share = logical.h[idx] / len(chain)
        for q in chain:
            h[int(q)] = float(share)

    edges = graph.edges  # already sorted by (a, b)
    oa, ob = owner[edges[:, 0]], owner[edges[:, 1]]
    used = (oa >= 0) & (ob >= 0)
    J: dict[tuple[int, int], float] = {}

    intra = used & (oa == ob)
    for a, b in edges[intra].tolist():
        J[(a, b)] = -float(chain_strength)

    V = e.V
    cross = used & ((oa < V) != (ob < V))
    ce = edges[cross]
    vi = np.where(oa[cross] < V, oa[cross], ob[cross])
    hj = np.where(oa[cross] < V, ob[cross], oa[cross]) - V
    key = vi * max(e.H, 1) + hj
    uniq, first = np.unique(key, return_index=True)
    witness = {(int(k) // max(e.H, 1), int(k) % max(e.H, 1)): tuple(ce[f].tolist())
               for k, f in zip(uniq, first)}

    for i in range(e.V):
        for j in range(e.H):
            value = logical.J.get((i, j), 0.0)
            coupler = witness.get((i, j))
            if coupler is None:
                if value != 0.0:
                    raise ValueError(f"no coupler between chains of logical edge ({i}, {j})")
                continue
            J[coupler] = float(value)
    return PhysicalIsing(h, dict(sorted(J.items())))


@dataclass(frozen=True)
class UnembedResult:
    sample: np.ndarray
    broken: np.ndarray

    @property
    def chain_break_fraction(self) -> float:
        return float(self.broken.mean()) if len(self.broken) else 0.0


def unembed_sample(sample: Mapping[int, int], e: Embedding) -> UnembedResult:
    """Majority vote per chain; a tie takes the value of the lowest-id qubit."""
    values = np.empty(len(e.chains), dtype=np.int64)
    broken = np.zeros(len(e.chains), dtype=bool)
    for idx, chain in enumerate(e.chains):
        try:
            spins = [int(sample[q]) for q in chain]
        except KeyError as exc:
            raise KeyError(f"sample has no value for qubit {exc.args[0]}") from None
        total = sum(spins)
        broken[idx] = abs(total) != len(spins)
        if total > 0:
            values[idx] = 1
        elif total < 0:
            values[idx] = -1
        else:
            values[idx] = spins[int(np.argmin(chain))]
    return UnembedResult(values, broken)


def _as_spin_vector(model, s) -> np.ndarray:
    if isinstance(s, Mapping):
        return np.array([s[v] for v in model.variables], dtype=float)
    s = np.asarray(s, dtype=float)
    if s.shape != (model.n_variables,):
        raise ValueError(f"expected {model.n_variables} spins, got shape {s.shape}")
    return s


def energy(model: LogicalIsing | PhysicalIsing, s) -> float:
    """Energy of spin assignment ``s`` (a mapping or a vector in ``model.variables`` order)."""
    h, ja, jb, jv = model.arrays()
    x = _as_spin_vector(model, s)
    return float(h @ x + (jv * x[ja] * x[jb]).sum())


def spins_from_index(idx, n: int) -> np.ndarray:
    """Bit ``i`` of ``idx`` set means variable ``i`` is ``+1``."""
    idx = np.atleast_1d(np.asarray(idx, dtype=np.int64))
    return (((idx[:, None] >> np.arange(n)) & 1) * 2 - 1).astype(np.int64)


def brute_force_ground(model: LogicalIsing | PhysicalIsing, limit: int = BRUTE_FORCE_LIMIT):
    """Exact minimum energy and all minimizing states by enumeration.

    States are rows of ``+-1`` in ``model.variables`` order, sorted by their
    bit pattern (variable ``i`` is bit ``i``, ``+1`` is a set bit).
    """
    h, ja, jb, jv = model.arrays()
    n = len(h)
    if n > limit:
        raise ValueError(f"{n} variables exceeds the brute-force limit of {limit}")
    if n == 0:
        return 0.0, np.zeros((1, 0), dtype=np.int64)
    tol = 1e-9 * max(1.0, model.scale())
    e_min, idx = _kernels.ground_states(h, ja, jb, jv, tol)
    return float(e_min), spins_from_index(np.sort(idx), n)


def default_chain_strength(logical: LogicalIsing) -> float:
    """``2 * (sum|h| + sum|J|)``, large enough that no ground state breaks a chain."""
    return 2.0 * max(logical.scale(), 0.5)


def check_embedding(logical: LogicalIsing, e: Embedding, graph: HardwareGraph | None = None,
                    chain_strength: float | None = None) -> dict:
    """Compare logical ground states with unembedded physical ones."""
    cs = default_chain_strength(logical) if chain_strength is None else chain_strength
    phys = embed_parameters(logical, e, cs, graph)
    e_log, s_log = brute_force_ground(logical)
    e_phys, s_phys = brute_force_ground(phys)
    variables = phys.variables
    decoded = set()
    n_broken = 0
    for row in s_phys:
        res = unembed_sample(dict(zip(variables, row.tolist())), e)
        n_broken += int(res.broken.any())
        decoded.add(tuple(res.sample.tolist()))
    expected = {tuple(r.tolist()) for r in s_log}
    return {
        "match": decoded == expected and n_broken == 0,
        "logical_energy": e_log,
        "physical_energy": e_phys,
        "logical_ground_states": sorted(expected),
        "unembedded_ground_states": sorted(decoded),
        "broken_ground_states": n_broken,
        "chain_strength": cs,
    }

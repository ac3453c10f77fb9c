"""Minor-embedding checks and chain statistics."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .embedder import Embedding
from .lattice import HardwareGraph

CHECKS = ("existence", "disjointness", "connectivity", "coverage")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    offenders: tuple = ()


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]

    @property
    def is_valid(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.is_valid

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "is_valid": self.is_valid,
            "checks": {c.name: {"pass": c.passed, "offenders": _jsonable(c.offenders)}
                       for c in self.checks},
        }


def _jsonable(offenders: tuple) -> list:
    return [list(x) if isinstance(x, tuple) else x for x in offenders]


def _chain_label(idx: int, V: int) -> str:
    return f"visible[{idx}]" if idx < V else f"hidden[{idx - V}]"


def _is_connected(chain: list[int], graph: HardwareGraph) -> bool:
    members = set(chain)
    if not members:
        return False
    start = chain[0]
    seen = {start}
    stack = [start]
    indptr, indices = graph.csr
    while stack:
        q = stack.pop()
        if not 0 <= q < graph.n_qubits:
            continue
        for r in indices[indptr[q]:indptr[q + 1]].tolist():
            if r in members and r not in seen:
                seen.add(r)
                stack.append(r)
    return seen == members


def coverage_matrix(e: Embedding, graph: HardwareGraph) -> np.ndarray:
    """Boolean ``(V, H)`` matrix: is there a coupler between the chains?"""
    chains = e.chains
    rows, cols = [], []
    for idx, chain in enumerate(chains):
        for q in chain:
            if 0 <= q < graph.n_qubits:
                rows.append(idx)
                cols.append(q)
    P = sparse.csr_matrix((np.ones(len(rows), dtype=np.int32), (rows, cols)),
                          shape=(len(chains), graph.n_qubits))
    C = (P @ graph.adjacency.astype(np.int32) @ P.T).toarray()
    return C[:e.V, e.V:] > 0


def validate(e: Embedding, g: HardwareGraph, V: int | None = None,
             H: int | None = None, edges=None) -> ValidationReport:
    """Check that ``e`` is a minor embedding of K(V, H) into ``g``.

    Every check runs regardless of earlier failures so the report lists all
    problems at once.  ``V``/``H`` default to the embedding's own layer sizes;
    a mismatch is reported as a coverage failure.  Pass ``edges`` (pairs of
    visible, hidden indices) to check a partial bipartite graph instead.
    """
    V = e.V if V is None else V
    H = e.H if H is None else H
    chains = e.chains

    missing = sorted({q for q in e.qubits() if not g.has_qubit(q)})
    existence = CheckResult("existence", not missing, tuple(missing))

    counts = Counter(e.qubits())
    shared = sorted(q for q, n in counts.items() if n > 1)
    disjoint = CheckResult("disjointness", not shared, tuple(shared))

    broken = tuple(_chain_label(i, e.V) for i, chain in enumerate(chains)
                   if not _is_connected(chain, g))
    connectivity = CheckResult("connectivity", not broken, broken)

    uncovered: list = []
    if (e.V, e.H) != (V, H):
        uncovered.append(f"shape {e.V}x{e.H} != {V}x{H}")
    else:
        cov = coverage_matrix(e, g)
        if edges is None:
            uncovered.extend((int(i), int(j)) for i, j in np.argwhere(~cov))
        else:
            uncovered.extend((int(i), int(j)) for i, j in sorted(set(edges)) if not cov[i, j])
    coverage = CheckResult("coverage", not uncovered, tuple(uncovered))

    return ValidationReport((existence, disjoint, connectivity, coverage))


def chain_length_lower_bound(opposite: int, alpha: int) -> int:
    """Shortest possible longest chain when a chain must touch ``opposite``
    chains through at most ``alpha`` crossings per qubit."""
    if opposite < 1 or alpha < 1:
        raise ValueError("opposite and alpha must be >= 1")
    return -(-opposite // alpha)


@dataclass(frozen=True)
class ChainMetrics:
    visible_lengths: tuple[int, ...]
    hidden_lengths: tuple[int, ...]
    threshold: int
    count_ge_threshold: int
    max_length: int
    mean_length: float
    visible_lower_bound: int | None = None
    hidden_lower_bound: int | None = None

    @property
    def lower_bound(self) -> int | None:
        bounds = [b for b in (self.visible_lower_bound, self.hidden_lower_bound) if b is not None]
        return max(bounds) if bounds else None

    def to_dict(self) -> dict:
        return {
            "max_length": self.max_length,
            "mean_length": self.mean_length,
            "threshold": self.threshold,
            "count_ge_threshold": self.count_ge_threshold,
            "visible_max": max(self.visible_lengths, default=0),
            "hidden_max": max(self.hidden_lengths, default=0),
            "visible_lower_bound": self.visible_lower_bound,
            "hidden_lower_bound": self.hidden_lower_bound,
        }


def chain_metrics(e: Embedding, threshold: int = 6, alpha: int | None = None) -> ChainMetrics:
    """Chain-length statistics; chains of length ``>= threshold`` are counted.

    ``alpha`` falls back to the embedding's recorded lattice parameters; the
    lower bounds are ``None`` when neither is available.
    """
    vis = tuple(len(c) for c in e.visible)
    hid = tuple(len(c) for c in e.hidden)
    lengths = vis + hid
    if alpha is None:
        alpha = e.params.get("alpha")
    vb = chain_length_lower_bound(e.H, alpha) if alpha and e.H else None
    hb = chain_length_lower_bound(e.V, alpha) if alpha and e.V else None
    return ChainMetrics(
        visible_lengths=vis,
        hidden_lengths=hid,
        threshold=threshold,
        count_ge_threshold=sum(1 for n in lengths if n >= threshold),
        max_length=max(lengths, default=0),
        mean_length=float(np.mean(lengths)) if lengths else math.nan,
        visible_lower_bound=vb,
        hidden_lower_bound=hb,
    )

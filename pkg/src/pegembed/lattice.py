"""Generalized Pegasus-style lattice G(M, alpha).

Qubits are addressed by ``(u, w, k, z)``: orientation (0 vertical, 1
horizontal), perpendicular tile offset, offset within the tile and parallel
tile offset.  It is often easier to think in terms of the *global wire
coordinate* ``c = alpha * w + k``; a wire is the run of qubits sharing
``(u, c)`` for ``z = 0 .. M-2``, and the integer label collapses to::

    id = z + (M - 1) * (c + alpha * M * u)

Geometrically a vertical qubit ``(c, z)`` is a segment at ``x = c`` spanning
``y`` in ``[S + alpha*z, S + alpha*(z+1))`` and a horizontal one is the
transposed segment.  Two perpendicular qubits share an internal coupler
exactly when their segments cross.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np
from scipy import sparse


class LatticeError(ValueError):
    """Invalid lattice parameters or qubit address."""


class EdgeListParseError(ValueError):
    def __init__(self, lineno: int, line: str, reason: str):
        super().__init__(f"line {lineno}: {reason}: {line!r}")
        self.lineno = lineno


@dataclass(frozen=True)
class LatticeParams:
    M: int
    alpha: int = 12
    shift: int | None = None

    def __post_init__(self):
        if self.shift is None:
            object.__setattr__(self, "shift", self.alpha // 2)
        if int(self.M) != self.M or self.M < 3:
            raise LatticeError(f"M must be an integer >= 3, got {self.M}")
        if int(self.alpha) != self.alpha or self.alpha < 2 or self.alpha % 2:
            raise LatticeError(f"alpha must be an even integer >= 2, got {self.alpha}")
        if not 0 <= self.shift < self.alpha:
            raise LatticeError(f"shift must lie in [0, alpha), got {self.shift}")

    @property
    def n_wires(self) -> int:
        """Wires per orientation."""
        return self.alpha * self.M

    @property
    def wire_length(self) -> int:
        return self.M - 1


class QubitCoord(NamedTuple):
    u: int
    w: int
    k: int
    z: int


def _check_coord(coord: QubitCoord, p: LatticeParams) -> None:
    u, w, k, z = coord
    bounds = (("u", u, 2), ("w", w, p.M), ("k", k, p.alpha), ("z", z, p.M - 1))
    for name, value, hi in bounds:
        if not 0 <= value < hi:
            raise LatticeError(f"coordinate field {name}={value} outside [0, {hi - 1}]")


def linear_id(coord: QubitCoord | tuple, params: LatticeParams) -> int:
    """Integer label of a qubit coordinate."""
    coord = QubitCoord(*coord)
    _check_coord(coord, params)
    u, w, k, z = coord
    return z + (params.M - 1) * (k + params.alpha * (w + params.M * u))


def coord_of(qubit: int, params: LatticeParams) -> QubitCoord:
    """Inverse of :func:`linear_id`."""
    if not 0 <= qubit < qubit_count(params):
        raise LatticeError(f"qubit id {qubit} outside [0, {qubit_count(params)})")
    rest, z = divmod(int(qubit), params.M - 1)
    rest, k = divmod(rest, params.alpha)
    u, w = divmod(rest, params.M)
    return QubitCoord(u, w, k, z)


def qubit_count(params: LatticeParams, per_orientation: bool = False) -> int:
    """Number of qubits in the lattice, ``2*alpha*M*(M-1)``.

    With ``per_orientation=True`` returns ``alpha*M*(M-1)``, the count of
    vertical (equivalently horizontal) qubits.
    """
    half = params.alpha * params.M * (params.M - 1)
    return half if per_orientation else 2 * half


def wire_of(qubit, params: LatticeParams):
    """Split labels into ``(u, c, z)``; works on scalars and arrays."""
    rest, z = np.divmod(qubit, params.M - 1)
    u, c = np.divmod(rest, params.alpha * params.M)
    return u, c, z


def qubit_on_wire(u, c, z, params: LatticeParams):
    return z + (params.M - 1) * (c + params.alpha * params.M * u)


def crossing_partner_z(c, params: LatticeParams):
    """Parallel offset at which a wire with global coordinate ``c`` meets the
    perpendicular wires, or -1 where the wire has no crossings."""
    c = np.asarray(c)
    q = np.floor_divide(c - params.shift, params.alpha)
    ok = (c >= params.shift) & (q <= params.M - 2)
    return np.where(ok, q, -1)


@dataclass(frozen=True, eq=False)
class HardwareGraph:
    """Immutable coupler graph over integer qubit labels.

    ``edges`` is an ``(E, 2)`` int64 array with ``a < b`` on every row, sorted
    lexicographically.  ``params`` is ``None`` for graphs loaded from a bare
    edge list.
    """

    params: LatticeParams | None
    n_qubits: int
    edges: np.ndarray
    disabled: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        e.setflags(write=False)
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "disabled", frozenset(int(q) for q in self.disabled))

    @property
    def n_couplers(self) -> int:
        return len(self.edges)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Symmetric adjacency as ``(indptr, indices)`` with sorted rows."""
        a, b = self.edges[:, 0], self.edges[:, 1]
        src = np.concatenate([a, b])
        dst = np.concatenate([b, a])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(self.n_qubits + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.n_qubits), out=indptr[1:])
        return indptr, dst.astype(np.int64)

    @cached_property
    def adjacency(self) -> sparse.csr_matrix:
        indptr, indices = self.csr
        data = np.ones(len(indices), dtype=np.int8)
        return sparse.csr_matrix((data, indices, indptr), shape=(self.n_qubits,) * 2)

    @cached_property
    def _edge_keys(self) -> np.ndarray:
        return self.edges[:, 0] * self.n_qubits + self.edges[:, 1]

    @cached_property
    def enabled_mask(self) -> np.ndarray:
        mask = np.ones(self.n_qubits, dtype=bool)
        if self.disabled:
            mask[np.fromiter(self.disabled, dtype=np.int64)] = False
        return mask

    def degree(self, qubit=None):
        indptr, _ = self.csr
        deg = np.diff(indptr)
        return deg if qubit is None else int(deg[qubit])

    def neighbors(self, qubit: int) -> np.ndarray:
        indptr, indices = self.csr
        return indices[indptr[qubit]:indptr[qubit + 1]]

    def are_coupled(self, a: int, b: int) -> bool:
        if a == b:
            return False
        a, b = min(a, b), max(a, b)
        key = a * self.n_qubits + b
        i = np.searchsorted(self._edge_keys, key)
        return bool(i < len(self._edge_keys) and self._edge_keys[i] == key)

    def has_qubit(self, qubit: int) -> bool:
        return 0 <= qubit < self.n_qubits and qubit not in self.disabled

    def coupler_set(self) -> set[tuple[int, int]]:
        return {(int(a), int(b)) for a, b in self.edges}


def _sorted_unique_edges(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    e = np.stack([lo, hi], axis=1).astype(np.int64)
    return np.unique(e, axis=0)


def build_lattice(params: LatticeParams) -> HardwareGraph:
    """Build G(M, alpha) with all qubits enabled."""
    M, alpha = params.M, params.alpha
    n_wires = params.n_wires

    # external couplers: (u, c, z) ~ (u, c, z+1)
    ext_u, ext_c, ext_z = np.meshgrid(
        np.arange(2), np.arange(n_wires), np.arange(M - 2), indexing="ij")
    ext_a = qubit_on_wire(ext_u, ext_c, ext_z, params).ravel()
    ext_b = ext_a + 1

    # internal couplers: vertical (c_a, z_a) crosses horizontal c_b in the
    # window starting at S + alpha*z_a, at horizontal offset z_b(c_a)
    c_a = np.arange(n_wires)
    z_b = crossing_partner_z(c_a, params)
    c_a = c_a[z_b >= 0]
    z_b = z_b[z_b >= 0]
    z_a = np.arange(M - 1)
    t = np.arange(alpha)
    CA, ZA, T = np.meshgrid(c_a, z_a, t, indexing="ij")
    ZB = np.broadcast_to(z_b[:, None, None], CA.shape)
    CB = params.shift + alpha * ZA + T
    int_a = qubit_on_wire(0, CA, ZA, params).ravel()
    int_b = qubit_on_wire(1, CB, ZB, params).ravel()

    edges = _sorted_unique_edges(
        np.concatenate([ext_a, int_a]), np.concatenate([ext_b, int_b]))
    return HardwareGraph(params, qubit_count(params), edges)


def disable_qubits(graph: HardwareGraph, ids: Iterable[int]) -> HardwareGraph:
    """Return a copy of ``graph`` with ``ids`` and their couplers removed."""
    ids = {int(q) for q in ids}
    bad = [q for q in ids if not 0 <= q < graph.n_qubits]
    if bad:
        raise LatticeError(f"qubit ids out of range: {sorted(bad)}")
    if not ids - graph.disabled:
        return graph
    mask = np.ones(graph.n_qubits, dtype=bool)
    mask[list(ids)] = False
    keep = mask[graph.edges[:, 0]] & mask[graph.edges[:, 1]]
    return HardwareGraph(graph.params, graph.n_qubits, graph.edges[keep],
                         graph.disabled | ids)


def export_edges(graph: HardwareGraph) -> str:
    """Edge-list text: one ``"a b"`` line per coupler, ``a < b``, sorted."""
    return "".join(f"{a} {b}\n" for a, b in graph.edges.tolist())


def import_edges(text: str, params: LatticeParams | None = None) -> HardwareGraph:
    """Parse an edge list written by :func:`export_edges`.

    The qubit range comes from ``params`` when given, otherwise from the
    largest label seen.  Qubits in range that carry no coupler are treated
    as disabled.
    """
    pairs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(lineno, line, "expected two qubit ids")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(lineno, line, "qubit ids must be integers") from None
        if a < 0 or b < 0 or a == b:
            raise EdgeListParseError(lineno, line, "invalid coupler")
        pairs.append((a, b))
    if pairs:
        arr = np.asarray(pairs, dtype=np.int64)
        edges = _sorted_unique_edges(arr[:, 0], arr[:, 1])
    else:
        edges = np.empty((0, 2), dtype=np.int64)

    if params is not None:
        n = qubit_count(params)
        if len(edges) and edges.max() >= n:
            raise LatticeError(f"edge list references qubit {int(edges.max())} >= {n}")
    else:
        n = int(edges.max()) + 1 if len(edges) else 0
    present = np.zeros(n, dtype=bool)
    present[edges.ravel()] = True
    disabled = frozenset(np.flatnonzero(~present).tolist())
    return HardwareGraph(params, n, edges, disabled)

"""Structured embedding of K(V, H) onto G(M, alpha).

Every logical node owns one wire.  Visible node ``i`` sits on the vertical
wire ``C0 + i`` and is extended along ``z`` until it has crossed every
hidden group; hidden node ``j`` (group ``g = j // n``, rank ``r = j % n``)
sits on the horizontal wire ``S + alpha*g + r``.  A vertical qubit at ``z = g``
sees exactly the horizontal wires of hidden group ``g``, so the chain
lengths are fixed by the layer sizes and no search is involved.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .lattice import HardwareGraph, LatticeParams, qubit_on_wire


class CapacityError(ValueError):
    """Requested bipartite graph does not fit the lattice."""

    def __init__(self, bound: str, requested: int, limit: int, detail: str = ""):
        msg = f"{bound} layer size {requested} exceeds capacity {limit}"
        super().__init__(msg + (f" ({detail})" if detail else ""))
        self.bound = bound
        self.requested = requested
        self.limit = limit


class EmbeddingError(ValueError):
    """Embedding footprint cannot be placed on the given graph."""

    def __init__(self, message: str, blocking=()):
        super().__init__(message)
        self.blocking = tuple(blocking)


@dataclass(frozen=True)
class EmbedderConfig:
    lattice: LatticeParams
    m: int = 4
    n: int = 8
    visible_start: int | None = None

    def __post_init__(self):
        lp = self.lattice
        if self.visible_start is None:
            object.__setattr__(self, "visible_start", lp.alpha)
        if self.m < 1 or self.n < 1:
            raise ValueError("group sizes m and n must be >= 1")
        if self.m + self.n > lp.alpha:
            raise ValueError(f"m + n = {self.m + self.n} exceeds alpha = {lp.alpha}")
        if not lp.shift <= self.visible_start < lp.n_wires:
            raise ValueError(
                f"visible_start must lie in [{lp.shift}, {lp.n_wires}), got {self.visible_start}")

    @property
    def C0(self) -> int:
        return self.visible_start


def capacity(config: EmbedderConfig) -> tuple[int, int]:
    """Largest ``(V, H)`` the structured construction accepts."""
    lp = config.lattice
    h_max = config.n * (lp.M - 1)
    v_max = min(lp.alpha * (lp.M - 1) - (config.C0 - lp.shift), lp.n_wires - config.C0)
    return v_max, h_max


def footprint_cells(V: int, H: int, m: int) -> tuple[int, int]:
    """Size of the used region in K(m, m) sub-cell units (reporting only)."""
    return math.ceil(V / m), math.ceil(H / m)


@dataclass(frozen=True)
class BlockPlan:
    """Layout of one structured embedding.

    ``L_v``/``L_h`` are the chain lengths; ``H_v``/``H_h`` the number of
    visible/hidden groups.  ``wire_stride`` and ``group_stride`` are the
    label increments between adjacent wires and between hidden groups;
    ``periodicity_v``, ``periodicity_h`` and ``n_periodicity`` name the
    same constants as used by the loop-based formulation.
    """

    V: int
    H: int
    config: EmbedderConfig
    L_v: int
    L_h: int
    H_v: int
    H_h: int
    start_v_id: int
    start_h_id: int
    wire_stride: int
    group_stride: int

    @property
    def periodicity_v(self) -> int:
        return self.start_v_id

    @property
    def periodicity_h(self) -> int:
        return self.start_h_id

    @property
    def n_periodicity(self) -> int:
        return self.wire_stride

    def visible_wire(self, i):
        return self.config.C0 + np.asarray(i)

    def hidden_wire(self, j):
        j = np.asarray(j)
        lp = self.config.lattice
        return lp.shift + lp.alpha * (j // self.config.n) + j % self.config.n

    def witness(self, i: int, j: int) -> tuple[int, int]:
        """The coupler that realises logical edge ``(i, j)``."""
        lp = self.config.lattice
        c_v = int(self.visible_wire(i))
        c_h = int(self.hidden_wire(j))
        z_v = j // self.config.n
        z_h = (c_v - lp.shift) // lp.alpha
        return (int(qubit_on_wire(0, c_v, z_v, lp)), int(qubit_on_wire(1, c_h, z_h, lp)))


def plan(V: int, H: int, config: EmbedderConfig) -> BlockPlan:
    if V < 1 or H < 1:
        raise ValueError("V and H must be >= 1")
    lp = config.lattice
    v_max, h_max = capacity(config)
    if H > h_max:
        raise CapacityError("hidden", H, h_max, f"n*(M-1) = {config.n}*{lp.M - 1}")
    if V > v_max:
        raise CapacityError("visible", V, v_max)
    L_v = math.ceil(H / config.n)
    L_h = math.ceil((V + config.C0 - lp.shift) / lp.alpha)
    return BlockPlan(
        V=V, H=H, config=config,
        L_v=L_v, L_h=L_h,
        H_v=math.ceil(V / config.m), H_h=math.ceil(H / config.n),
        start_v_id=int(qubit_on_wire(0, config.C0, 0, lp)),
        start_h_id=int(qubit_on_wire(1, lp.shift, 0, lp)),
        wire_stride=lp.M - 1,
        group_stride=lp.alpha * (lp.M - 1),
    )


@dataclass(frozen=True, eq=False)
class Embedding:
    """Chains of physical qubits for each logical node, visible then hidden."""

    visible: list[list[int]]
    hidden: list[list[int]]
    params: dict = field(default_factory=dict)
    provenance: str = "structured"

    @property
    def V(self) -> int:
        return len(self.visible)

    @property
    def H(self) -> int:
        return len(self.hidden)

    @property
    def chains(self) -> list[list[int]]:
        return self.visible + self.hidden

    def qubits(self) -> list[int]:
        return [q for chain in self.chains for q in chain]

    def to_dict(self) -> dict:
        return {
            "visible": self.visible,
            "hidden": self.hidden,
            "params": self.params,
            "provenance": self.provenance,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict()) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "Embedding":
        try:
            visible = [[int(q) for q in c] for c in d["visible"]]
            hidden = [[int(q) for q in c] for c in d["hidden"]]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed embedding: {exc}") from None
        return cls(visible, hidden, dict(d.get("params", {})), d.get("provenance", "structured"))

    @classmethod
    def from_json(cls, text: str) -> "Embedding":
        return cls.from_dict(json.loads(text))

    def __eq__(self, other):
        if not isinstance(other, Embedding):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def lattice_params(self) -> LatticeParams:
        p = self.params
        return LatticeParams(p["M"], p["alpha"], p.get("shift"))


def embed(bplan: BlockPlan, graph: HardwareGraph) -> Embedding:
    cfg = bplan.config
    lp = cfg.lattice
    if graph.params is not None and graph.params != lp:
        raise EmbeddingError(f"plan built for {lp}, graph is {graph.params}")

    zv = np.arange(bplan.L_v)
    zh = np.arange(bplan.L_h)
    c_v = bplan.visible_wire(np.arange(bplan.V))
    c_h = bplan.hidden_wire(np.arange(bplan.H))
    vis = qubit_on_wire(0, c_v[:, None], zv[None, :], lp)
    hid = qubit_on_wire(1, c_h[:, None], zh[None, :], lp)

    if graph.disabled:
        used = np.concatenate([vis.ravel(), hid.ravel()])
        blocked = used[~graph.enabled_mask[used]]
        if len(blocked):
            ids = sorted(int(q) for q in blocked)
            raise EmbeddingError(
                f"{len(ids)} disabled qubit(s) in footprint: {ids}; "
                "try another visible_start", ids)

    params = {"M": lp.M, "alpha": lp.alpha, "m": cfg.m, "n": cfg.n, "C0": cfg.C0}
    if lp.shift != lp.alpha // 2:
        params["shift"] = lp.shift
    return Embedding(vis.tolist(), hid.tolist(), params, "structured")


def embed_biclique(V: int, H: int, config: EmbedderConfig,
                   graph: HardwareGraph) -> Embedding:
    return embed(plan(V, H, config), graph)

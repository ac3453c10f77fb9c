"""Minor embeddings of complete bipartite graphs K(V, H) on G(M, alpha) lattices.

The structured embedder places every logical node on one wire and needs no
search; a heuristic chain-growth embedder is included for comparison.
"""
from ._accel import BACKEND
from .baseline import HeuristicConfig, HeuristicFailure, heuristic_embed
from .embedder import (BlockPlan, CapacityError, EmbedderConfig, Embedding, EmbeddingError,
                       capacity, embed, embed_biclique, plan)
from .hamiltonian import (LogicalIsing, PhysicalIsing, UnembedResult, brute_force_ground,
                          check_embedding, embed_parameters, energy, unembed_sample)
from .lattice import (EdgeListParseError, HardwareGraph, LatticeError, LatticeParams, QubitCoord,
                      build_lattice, coord_of, disable_qubits, export_edges, import_edges,
                      linear_id, qubit_count)
from .validator import ChainMetrics, ValidationReport, chain_length_lower_bound, chain_metrics, validate

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BlockPlan", "CapacityError", "ChainMetrics", "EdgeListParseError",
    "EmbedderConfig", "Embedding", "EmbeddingError", "HardwareGraph", "HeuristicConfig",
    "HeuristicFailure", "LatticeError", "LatticeParams", "LogicalIsing", "PhysicalIsing",
    "QubitCoord", "UnembedResult", "ValidationReport", "brute_force_ground", "build_lattice",
    "capacity", "chain_length_lower_bound", "chain_metrics", "check_embedding", "coord_of",
    "disable_qubits", "embed", "embed_biclique", "embed_parameters", "energy", "export_edges",
    "heuristic_embed", "import_edges", "linear_id", "plan", "qubit_count", "unembed_sample",
    "validate",
]

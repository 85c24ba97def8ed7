"""Exact treecut width and treedepth via CNF encodings and an external SAT solver."""

from .cnf import CnfFormula, VarRegistry, add_at_most_k, parse_model, write_dimacs
from .cuts import CutSplit, DecompositionTask, find_small_cut, split_treecut_tasks
from .graph import (
    GraphFormatError,
    Multigraph,
    connected_components,
    delta,
    generate_random,
    generate_standard,
    parse_graph,
)
from .oracle import oracle_tcw, oracle_tcw_general, oracle_td
from .search import SolveCall, TcwCertificate, WidthResult, search_width, verify_tcw_certificate
from .solver import SolverConfig, SolverError, resolve_solver, run_solver
from .tcw import (
    Derivation,
    TreecutDecomposition,
    derivation_width,
    encode_derivation,
    encode_width,
    to_decomposition,
    verify_tcw,
)
from .td import (
    TreedepthForest,
    add_td_symmetry,
    encode_td_partition,
    encode_td_treestructure,
    preprocess_td,
    verify_td,
)

__version__ = "0.1.0"

__all__ = [
    "CnfFormula",
    "CutSplit",
    "DecompositionTask",
    "Derivation",
    "GraphFormatError",
    "Multigraph",
    "SolveCall",
    "SolverConfig",
    "SolverError",
    "TcwCertificate",
    "TreecutDecomposition",
    "TreedepthForest",
    "VarRegistry",
    "WidthResult",
    "add_at_most_k",
    "add_td_symmetry",
    "connected_components",
    "delta",
    "derivation_width",
    "encode_derivation",
    "encode_td_partition",
    "encode_td_treestructure",
    "encode_width",
    "find_small_cut",
    "generate_random",
    "generate_standard",
    "oracle_tcw",
    "oracle_tcw_general",
    "oracle_td",
    "parse_graph",
    "parse_model",
    "preprocess_td",
    "resolve_solver",
    "run_solver",
    "search_width",
    "split_treecut_tasks",
    "to_decomposition",
    "verify_tcw",
    "verify_tcw_certificate",
    "verify_td",
    "write_dimacs",
]

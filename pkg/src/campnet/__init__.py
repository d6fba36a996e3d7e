"""Signed social network analysis for historical biographical corpora.

Builds per-dynasty signed graphs from relationship records, computes network
statistics and centralities, extracts seed-centered subgraphs, partitions
people into camps by minimizing signed imbalance (or maximizing signed
modularity), and serves three-part reports over a CLI and an HTTP API.
"""

from .graph import Sign, SignedEdge, SignedGraph, UnknownNodeError
from .ingest import (
    Dataset,
    DynastySpan,
    PersonRecord,
    RelationRecord,
    SignRule,
    assign_dynasty,
    build_dataset,
    build_graph,
    load_snapshot,
    parse_corpus,
    save_snapshot,
)
from .partition import (
    Algorithm,
    Objective,
    Partition,
    PartitionRequest,
    brute_force_partition,
    community_partition,
    greedy_partition,
    imbalance,
    signed_modularity,
    spectral_partition,
)
from .subgraph import SeedQuery, ball_sizes, extract_subgraph

__version__ = "0.1.0"

__all__ = [
    "Algorithm",
    "Dataset",
    "DynastySpan",
    "Objective",
    "Partition",
    "PartitionRequest",
    "PersonRecord",
    "RelationRecord",
    "SeedQuery",
    "Sign",
    "SignRule",
    "SignedEdge",
    "SignedGraph",
    "UnknownNodeError",
    "assign_dynasty",
    "ball_sizes",
    "brute_force_partition",
    "build_dataset",
    "build_graph",
    "community_partition",
    "extract_subgraph",
    "greedy_partition",
    "imbalance",
    "load_snapshot",
    "parse_corpus",
    "save_snapshot",
    "signed_modularity",
    "spectral_partition",
    "__version__",
]

"""Minimal perfect hashing via bipartite graph orientation."""

__version__ = "0.1.0"

from .hashing import MasterHash, master_hash
from .leafsearch import LeafConfig, LeafDescriptor, SearchFailure, find_seed
from .mphf import BuildConfig, DuplicateKeyError, MphfIndex, build
from .retrieval import Retrieval

__all__ = [
    "MasterHash",
    "master_hash",
    "LeafConfig",
    "LeafDescriptor",
    "SearchFailure",
    "find_seed",
    "BuildConfig",
    "DuplicateKeyError",
    "MphfIndex",
    "build",
    "Retrieval",
    "__version__",
]

"""Genus Vertex Deletion on bounded-treewidth graphs via flag-system embeddings."""

from .flags import Embedding, euler_genus, check_orientable
from .boundaried import BoundariedEmbedding
from .treedecomp import Graph, TreeDecomposition, decompose, parse_graph, parse_td
from .dp import solve, solve_orientable

__all__ = [
    "BoundariedEmbedding",
    "Embedding",
    "Graph",
    "TreeDecomposition",
    "check_orientable",
    "decompose",
    "euler_genus",
    "parse_graph",
    "parse_td",
    "solve",
    "solve_orientable",
]

__version__ = "0.1.0"

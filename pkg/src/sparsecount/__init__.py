"""Counting size-k vertex sets on sparse graphs through a compactor."""

from .algebra import AlgebraState, ds_algebra, get_algebra, is_algebra, vc_algebra
from .config import Config
from .errors import (
    ChecksumError,
    CompactorFormatError,
    DecompositionFailure,
    InvariantBreach,
    ParseError,
    PipelineError,
    PipelineStalled,
    SparseCountError,
    UnsupportedScale,
)
from .graph import BGraph, BStructure, Graph, format_edge_list, glue, parse_edge_list

__all__ = [
    "AlgebraState",
    "BGraph",
    "BStructure",
    "ChecksumError",
    "CompactorFormatError",
    "Config",
    "DecompositionFailure",
    "Graph",
    "InvariantBreach",
    "ParseError",
    "PipelineError",
    "PipelineStalled",
    "SparseCountError",
    "UnsupportedScale",
    "ds_algebra",
    "format_edge_list",
    "get_algebra",
    "glue",
    "is_algebra",
    "parse_edge_list",
    "vc_algebra",
]

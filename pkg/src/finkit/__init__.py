"""Vectors over FIN_k, staircase functions and canonization of front colorings."""
from ._kernels import BACKEND
from .errors import FinkError
from .finvec import (
    BlockSequence,
    KVector,
    SpanTerm,
    approximations,
    depth,
    iter_approximations,
    leq,
    span_contains,
    span_enumerate,
    span_size,
    tetris,
)
from .staircase import (
    StairFunction,
    enumerate_stair_functions,
    evaluate,
    is_sos,
    make_sos,
)

__version__ = "0.1.0"

"""Sparse shallow ReLU networks through linear programming.

Training problems are relaxed to measures over a discretized parameter
domain and solved as LPs whose vertex solutions have at most N active
neurons. Arbitrary trained networks can be sparsified to the same bound,
and generalization bounds are evaluated with exact transport distances.
"""

from .model import (
    RELU,
    Activation,
    Dataset,
    ParamDomain,
    ShallowParams,
    accuracy,
    active_count,
    forward,
    l1_norm,
    predict,
    residual_r,
)
from .simplex import LpProblem, LpSolution, SimplexStallError
from .simplex import solve as solve_lp
from .sparsify import sparsify

__all__ = [
    "RELU",
    "Activation",
    "Dataset",
    "LpProblem",
    "LpSolution",
    "ParamDomain",
    "ShallowParams",
    "SimplexStallError",
    "accuracy",
    "active_count",
    "forward",
    "l1_norm",
    "predict",
    "residual_r",
    "solve_lp",
    "sparsify",
]

__version__ = "0.1.0"

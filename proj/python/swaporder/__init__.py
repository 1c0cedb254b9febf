"""Entanglement swapping order evaluation and search for repeater paths."""

from ._core import *  # noqa: F401,F403
from ._core import (
    InvalidMoments,
    BudgetExceeded,
    EvalMode,
    Infeasible,
    InvalidOrder,
    PathSpec,
    SchemaError,
    ent,
)

__version__ = "0.1.0"

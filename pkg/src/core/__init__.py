"""
Core module - base components
"""

from .config import Config, get_config, set_config
from .constants import COLORS, VERSION
from .errors import (
    BudgetExceededError,
    DegenerateFrameError,
    DripError,
    IndeterminateError,
    InvalidInputError,
    OutOfDomainError,
)
from .matrix_io import format_matrix_csv, parse_matrix_csv, read_matrix, write_matrix

__all__ = [
    "Config",
    "get_config",
    "set_config",
    "COLORS",
    "VERSION",
    "DripError",
    "InvalidInputError",
    "OutOfDomainError",
    "BudgetExceededError",
    "IndeterminateError",
    "DegenerateFrameError",
    "format_matrix_csv",
    "parse_matrix_csv",
    "read_matrix",
    "write_matrix",
]

"""
CLI Commands
"""

from .decompose import cmd_decompose
from .drip import certify, cmd_drip
from .experiment import ExperimentConfig, ExperimentRecord, cmd_experiment, run_experiment
from .frame import cmd_frame, generate_frame
from .measure import cmd_measure, draw_matrix
from .recover import cmd_recover, solver_config
from .selftest import SelftestReport, cmd_selftest, run_selftest

__all__ = [
    "cmd_decompose",
    "certify",
    "cmd_drip",
    "ExperimentConfig",
    "ExperimentRecord",
    "cmd_experiment",
    "run_experiment",
    "cmd_frame",
    "generate_frame",
    "cmd_measure",
    "draw_matrix",
    "cmd_recover",
    "solver_config",
    "SelftestReport",
    "cmd_selftest",
    "run_selftest",
]

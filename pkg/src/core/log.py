"""
Logger setup
"""

from __future__ import annotations

import logging
import sys


LOG_FORMAT = "%(asctime)s - %(name)s - %(message)s"


def setup_logger(verbose: bool = False, quiet: bool = False) -> logging.Logger:
    """Configure root logging on stderr and return the toolkit logger"""
    if verbose:
        level = logging.DEBUG
    elif quiet:
        level = logging.WARNING
    else:
        level = logging.INFO

    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)
    return logging.getLogger("src")

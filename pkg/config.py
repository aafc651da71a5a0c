#!/usr/bin/env python3
"""
Configuration for the arcs toolkit.
Settings come from the environment (or a .env file next to the process).
"""

import logging
import sys
from pathlib import Path

from environs import Env

from errors import ModulusOutOfRange

env = Env()
env.read_env()

# Hard ceiling: every coordinate fits a machine word and a torus row one 64-bit mask
HARD_MAX_MODULUS = 64

MAX_MODULUS = min(env.int("ARCS_MAX_MODULUS", HARD_MAX_MODULUS), HARD_MAX_MODULUS)
DEFAULT_THREADS = env.int("ARCS_THREADS", 1)
SPLIT_DEPTH = env.int("ARCS_SPLIT_DEPTH", 1)
PROGRESS_EVERY = env.int("ARCS_PROGRESS_EVERY", 100000)
LOG_LEVEL = env.str("ARCS_LOG_LEVEL", "INFO")
FIXTURES_DIR = env.path("ARCS_FIXTURES_DIR", Path(__file__).resolve().parent / "fixtures")
HOST = env.str("ARCS_HOST", "0.0.0.0")
PORT = env.int("ARCS_PORT", 8000)

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


def configure_logging(level: str = None) -> None:
    """Route diagnostics to stderr so command output on stdout stays byte-stable"""
    logging.basicConfig(
        level=(level or LOG_LEVEL).upper(),
        format=LOG_FORMAT,
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def validate_modulus(n: int) -> int:
    """Reject moduli outside [2, MAX_MODULUS]"""
    if not isinstance(n, int) or isinstance(n, bool):
        raise ModulusOutOfRange(f"modulus must be an integer, got {n!r}")
    if n < 2 or n > MAX_MODULUS:
        raise ModulusOutOfRange(f"modulus {n} outside [2, {MAX_MODULUS}]")
    return n

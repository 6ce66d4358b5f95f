"""Symmetry detection and lex-leader symmetry breaking for ground answer set
programs, with brute-force semantic oracles for verification at desk scale."""

from .kernel import BACKEND as KERNEL_BACKEND  # noqa: F401
from .program import Program, Rule  # noqa: F401

__version__ = "0.1.0"

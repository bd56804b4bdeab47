"""
mp2s-lab - Main Package

Simulation and verification toolkit for multi-pass automata on two data
streams: a step-exact engine, set-disjointness automata and instances, and a
fooling-pair search for the lower-bound machinery.
"""

__version__ = "0.1.0"
__author__ = "mp2s-lab Team"
__license__ = "MIT"

from typing import List

__all__: List[str] = [
    "__version__",
    "__author__",
    "__license__",
]

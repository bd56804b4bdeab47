"""
The set-disjointness problem Disj_n.

Provides:
- The domain D_n, index sets, the oracle and stream samplers (problem)
- Subset-family instances in the reversed and pi layouts (instances)
- Disjointness automata, fixtures and oracle sweeps (builders)
"""

from typing import List

__all__: List[str] = []

"""
Lower-bound machinery for Disj_n.

Provides:
- Block partitions, head pairs and the checking relation (blocks)
- Exit-configuration bucketing, fooling-pair search and splice checks (foolbox)
- The parameter inequality and its remark checks (bounds)
"""

from typing import List

__all__: List[str] = []

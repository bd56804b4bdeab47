#!/usr/bin/env python3
"""
Example usage script for mp2s-lab.

Builds the two disjointness automata, checks them against the oracle, runs the
fooling-pair search on a deliberately broken automaton and evaluates the
lower-bound inequality.

Run from the repository root:
    python scripts/example_usage.py
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.disjointness.builders import build_crippled, build_sqrt, build_trivial, verify_against_oracle
from src.disjointness.instances import EnumerationSpec, Layout, LayoutKind, all_instances
from src.disjointness.problem import IndexSet, all_stream_pairs
from src.lowerbound.bounds import BoundMode, lower_bound_inequality
from src.lowerbound.foolbox import fooling_search
from src.utils.logger import setup_logger

logger = setup_logger(name="src", level="INFO")


def main():
    """Main example function."""
    logger.info("Starting mp2s-lab example")
    logger.info("=" * 60)

    # Example 1: oracle sweeps
    logger.info("Example 1: oracle sweeps")
    trivial = verify_against_oracle(build_trivial(2), all_stream_pairs(2), track_states=True)
    logger.info(f"trivial:2 agrees on {trivial.agreements}/{trivial.total}, reachable states {trivial.reachable_states}")
    sqrt = verify_against_oracle(build_sqrt(4), all_instances(4, Layout.reversed()))
    logger.info(f"sqrt:4 agrees on {sqrt.agreements}/{sqrt.total}")

    # Example 2: fooling search on an automaton that forgets indices 3 and 4
    logger.info("Example 2: fooling search")
    crippled = build_crippled(4, IndexSet.from_mask("1100"))
    outcome = fooling_search(crippled, 4, LayoutKind.REVERSED, EnumerationSpec.exhaustive())
    if outcome.witness:
        logger.info(outcome.witness.summary())
        logger.info(f"splice conditions: {outcome.witness.splice.model_dump(by_alias=True)}")

    # Example 3: the parameter inequality
    logger.info("Example 3: lower-bound inequality")
    for log2_m in (200, 300):
        report = lower_bound_inequality(1024, 1, 0, BoundMode.FORWARD, log2_m=log2_m)
        logger.info(f"n=1024 kf=1 lg m={log2_m}: lhs={report.lhs:.2f} {report.summary()}")

    logger.info("=" * 60)
    logger.info("Example completed")


if __name__ == "__main__":
    main()

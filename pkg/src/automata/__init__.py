"""
mp2s-automata: the model, the step-exact engine and the file formats.

Provides:
- Streams, parameters, canonical head layout and validated automata (model)
- Initial configuration, single steps, runs with traces and stall detection (engine)
- The line-oriented automaton description format and random table automata (tablefile)
- Stream files and JSON Lines trace files (streamio)
"""

from typing import List

from src.automata.engine import (
    Configuration,
    RunResult,
    StepRecord,
    Trace,
    initial_configuration,
    run,
    step,
    step_bound,
)
from src.automata.model import (
    END,
    Automaton,
    AutomatonParams,
    HeadId,
    StateSpace,
    Stream,
    StreamSide,
    head_layout,
    make_automaton,
)

__all__: List[str] = [
    "END",
    "Automaton",
    "AutomatonParams",
    "Configuration",
    "HeadId",
    "RunResult",
    "StateSpace",
    "StepRecord",
    "Stream",
    "StreamSide",
    "Trace",
    "head_layout",
    "initial_configuration",
    "make_automaton",
    "run",
    "step",
    "step_bound",
]

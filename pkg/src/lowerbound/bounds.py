"""Parameter inequality of the lower bounds and consistency checks of its remarks.

An mp2s-automaton with k heads and m states cannot solve Disj_n when

    k²·v·lg(n+1) + k·v·lg m + v·(1 + lg v) <= n

with v = kf²+1 (forward heads only, k = 2kf) or v = (kf²+kb²+1)·(2·kf·kb+1)
(general, k = 2kf+2kb). Logarithms are base 2 and evaluated in double precision;
m is passed as lg m so that astronomically large state budgets stay cheap.
"""

from __future__ import annotations

import logging
import math
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from src.utils.errors import InvalidParameterError, InvalidSizeError
from src.utils.validation import validate_non_negative_int, validate_positive_int

logger = logging.getLogger(__name__)


class BoundMode(str, Enum):
    FORWARD = "forward"
    GENERAL = "general"


class BoundsReport(BaseModel):
    """Bounds report; serialize with ``model_dump(by_alias=True)``."""

    model_config = ConfigDict(populate_by_name=True)

    mode: BoundMode
    n: int
    m_log2: float
    kf: int
    kb: int
    k: int
    v: int
    v1: Optional[int] = None
    v2: Optional[int] = None
    lhs: float
    rhs: int
    ruled_out: bool = Field(..., alias="ruledOut")
    margin: float

    def summary(self) -> str:
        return f"ruledOut={str(self.ruled_out).lower()} margin={self.margin:.2f}"


def block_count(kf: int, kb: int, mode: BoundMode) -> Tuple[int, int, int]:
    """(v, v1, v2) for the given head counts."""
    if mode is BoundMode.FORWARD:
        v = kf * kf + 1
        return v, v, 1
    v1 = kf * kf + kb * kb + 1
    v2 = 2 * kf * kb + 1
    return v1 * v2, v1, v2


def lower_bound_inequality(
    n: int,
    kf: int,
    kb: int,
    mode: BoundMode = BoundMode.FORWARD,
    m: Optional[int] = None,
    log2_m: Optional[float] = None,
) -> BoundsReport:
    """Evaluate the inequality for (n, m, kf, kb).

    Exactly one of ``m`` and ``log2_m`` must be given.

    Raises:
        InvalidParameterError: If m < 1, lg m < 0, kf < 0, kb < 0, or kb != 0 in forward mode
    """
    validate_positive_int(n, "n", error_cls=InvalidSizeError)
    validate_non_negative_int(kf, "kf")
    validate_non_negative_int(kb, "kb")
    mode = BoundMode(mode)

    if (m is None) == (log2_m is None):
        raise InvalidParameterError(
            "give exactly one of m and log2_m",
            details={"m": m, "log2_m": log2_m},
        )
    if m is not None:
        validate_positive_int(m, "m")
        log2_m = math.log2(m)
    elif not log2_m >= 0:
        raise InvalidParameterError(
            "log2_m must be non-negative",
            details={"parameter": "log2_m", "value": log2_m, "constraint": ">= 0"},
        )
    if mode is BoundMode.FORWARD and kb != 0:
        raise InvalidParameterError(
            "forward mode allows no backward heads",
            details={"parameter": "kb", "value": kb, "constraint": "== 0"},
        )

    k = 2 * kf + 2 * kb
    v, v1, v2 = block_count(kf, kb, mode)
    lhs = k * k * v * math.log2(n + 1) + k * v * log2_m + v * (1 + math.log2(v))
    report = BoundsReport(
        mode=mode,
        n=n,
        m_log2=log2_m,
        kf=kf,
        kb=kb,
        k=k,
        v=v,
        v1=v1 if mode is BoundMode.GENERAL else None,
        v2=v2 if mode is BoundMode.GENERAL else None,
        lhs=lhs,
        rhs=n,
        ruled_out=lhs <= n,
        margin=n - lhs,
    )
    logger.debug(f"bound {mode.value} n={n} kf={kf} kb={kb}: lhs={lhs:.4f} {report.summary()}")
    return report


# === Remark checks ===

def remark_conditions(n: int, kf: int) -> Tuple[bool, float]:
    """Whether 4kf <= (n / lg n)^{1/4}, and the largest admissible lg m = n / (4kf(kf²+1))."""
    if n < 2 or kf < 1:
        return False, 0.0
    holds = 4 * kf <= (n / math.log2(n)) ** 0.25
    return holds, n / (4 * kf * (kf * kf + 1))


class RemarkSample(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    n: int
    kf: int
    conditions_hold: bool = Field(..., alias="conditionsHold")
    m_log2: float
    lhs: float
    ruled_out: bool = Field(..., alias="ruledOut")
    margin: float


class RemarkReport(BaseModel):
    """Samples, violations (conditions hold, bound fails) and per-kf thresholds."""

    model_config = ConfigDict(populate_by_name=True)

    samples: List[RemarkSample]
    violations: List[RemarkSample]
    smallest_n: Dict[str, Optional[int]] = Field(default_factory=dict, alias="smallestN")


def smallest_power_of_two_ruled_out(kf: int, max_exponent: int = 128) -> Optional[int]:
    """Smallest n = 2^e with the remark's conditions holding and the bound ruling out."""
    for e in range(1, max_exponent + 1):
        n = 2 ** e
        holds, log2_m = remark_conditions(n, kf)
        if holds and lower_bound_inequality(n, kf, 0, BoundMode.FORWARD, log2_m=log2_m).ruled_out:
            return n
    return None


def remark_consistency(samples: Iterable[Tuple[int, int]]) -> RemarkReport:
    """For each (n, kf), evaluate the forward bound at the largest lg m the remark
    admits. Samples where the conditions fail are recorded but never violations.
    """
    rows: List[RemarkSample] = []
    for n, kf in samples:
        holds, log2_m = remark_conditions(n, kf)
        bound = lower_bound_inequality(n, kf, 0, BoundMode.FORWARD, log2_m=log2_m)
        rows.append(
            RemarkSample(
                n=n,
                kf=kf,
                conditions_hold=holds,
                m_log2=log2_m,
                lhs=bound.lhs,
                ruled_out=bound.ruled_out,
                margin=bound.margin,
            )
        )

    violations = [row for row in rows if row.conditions_hold and not row.ruled_out]
    if violations:
        logger.warning(f"{len(violations)} remark samples are not ruled out")
    kfs = sorted({row.kf for row in rows if row.kf >= 1})
    return RemarkReport(
        samples=rows,
        violations=violations,
        smallest_n={str(kf): smallest_power_of_two_ruled_out(kf) for kf in kfs},
    )


class RootHeadsSample(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    exponent: int
    kf: int
    m_log2: float
    ruled_out: bool = Field(..., alias="ruledOut")
    margin: float


class RootHeadsReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    samples: List[RootHeadsSample]
    ruled_out_from: Optional[int] = Field(None, alias="ruledOutFrom")


def fifth_root_remark(exponents: Sequence[int] = tuple(range(10, 201, 5))) -> RootHeadsReport:
    """n = 2^e with ⌈n^{1/5}⌉ forward heads per stream and lg m = ⌈n^{1/3}⌉.

    ``ruledOutFrom`` is the smallest tested exponent from which every larger
    tested exponent is ruled out (None if the largest one is not).
    """
    rows = []
    for e in sorted(exponents):
        validate_positive_int(e, "exponent")
        n = 2 ** e
        kf = math.ceil(2 ** (e / 5))
        log2_m = float(math.ceil(2 ** (e / 3)))
        bound = lower_bound_inequality(n, kf, 0, BoundMode.FORWARD, log2_m=log2_m)
        rows.append(
            RootHeadsSample(exponent=e, kf=kf, m_log2=log2_m, ruled_out=bound.ruled_out, margin=bound.margin)
        )

    ruled_out_from = None
    for row in reversed(rows):
        if not row.ruled_out:
            break
        ruled_out_from = row.exponent
    return RootHeadsReport(samples=rows, ruled_out_from=ruled_out_from)

"""Verification reports with a pass flag derived from the recorded numbers."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = ["VerificationReport", "MODES", "extended_ratio"]

# how ``lhs`` and ``rhs`` are compared; see VerificationReport.passed
MODES = ("le", "lt", "gt", "equal", "slope", "expected-divergence")


def extended_ratio(lhs: float, rhs: float) -> float:
    """``lhs/rhs`` with ``0/0 = 0``, ``x/0 = inf`` and ``x/inf = 0`` for finite ``x``."""
    if math.isnan(lhs) or math.isnan(rhs):
        return math.nan
    if math.isinf(rhs):
        return math.nan if math.isinf(lhs) else 0.0
    if rhs == 0.0:
        return 0.0 if lhs == 0.0 else math.copysign(math.inf, lhs)
    return lhs / rhs


@dataclass
class VerificationReport:
    """One verified (or refuted) relation between two computed numbers.

    ``tolerances`` must hold ``mode`` (one of :data:`MODES`) and ``rel``;
    ``quad`` adds the numerical error budget.  The pass flag is

    * ``le``: ``lhs/rhs <= 1 + rel + quad``
    * ``lt``: ``lhs < rhs`` (``rhs`` is an absolute threshold)
    * ``gt``: ``lhs > rhs``
    * ``equal``: ``|lhs/rhs - 1| <= rel + quad``
    * ``slope``: ``|lhs - rhs| <= rel`` (fitted against expected slope)
    * ``expected-divergence``: ``lhs = +inf`` while ``rhs`` is finite
    """

    case_id: str
    tag: str
    lhs: float
    rhs: float
    tolerances: dict
    provenance: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def __post_init__(self):
        mode = self.tolerances.get("mode")
        if mode not in MODES:
            raise ValueError(f"unknown comparison mode {mode!r}")
        self.lhs = float(self.lhs)
        self.rhs = float(self.rhs)

    @property
    def ratio(self) -> float:
        return extended_ratio(self.lhs, self.rhs)

    @property
    def slack(self) -> float:
        return self.tolerances.get("rel", 0.0) + self.tolerances.get("quad", 0.0)

    @property
    def passed(self) -> bool:
        mode = self.tolerances["mode"]
        lhs, rhs = self.lhs, self.rhs
        if mode == "expected-divergence":
            return lhs == math.inf and math.isfinite(rhs)
        if mode == "lt":
            return lhs < rhs
        if mode == "gt":
            return lhs > rhs
        if mode == "slope":
            return abs(lhs - rhs) <= self.tolerances["rel"]
        r = self.ratio
        if math.isnan(r):
            return False
        if mode == "le":
            return r <= 1.0 + self.slack
        return abs(r - 1.0) <= self.slack

    def summary(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return (f"{flag} {self.case_id} [{self.tag}] lhs={self.lhs:.10g} "
                f"rhs={self.rhs:.10g} ratio={self.ratio:.10g}")

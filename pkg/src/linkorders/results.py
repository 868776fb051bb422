"""Check results and reports shared by every verification suite."""
from __future__ import annotations

import functools
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np


@dataclass
class CheckResult:
    name: str
    params: dict
    max_abs_error: float
    tolerance: float
    elapsed_ms: float | None = None
    witness: dict | None = None
    details: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "pass" if self.max_abs_error < self.tolerance else "fail"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self, timings: bool = False) -> dict:
        out = {
            "name": self.name,
            "params": self.params,
            "status": self.status,
            "max_abs_error": _finite(self.max_abs_error),
            "tolerance": self.tolerance,
            "elapsed_ms": round(self.elapsed_ms, 3) if timings and self.elapsed_ms is not None else None,
        }
        if self.details:
            out["details"] = self.details
        if self.witness is not None and not self.passed:
            out["witness"] = self.witness
        return out


def _finite(x: float):
    return x if np.isfinite(x) else "inf"


@dataclass
class Report:
    suite: str
    params: dict
    seed: int
    tolerance: float | None
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self, timings: bool = False) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "checks": [c.to_dict(timings) for c in self.checks],
        }


def timed(fn: Callable[..., CheckResult]) -> Callable[..., CheckResult]:
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        result.elapsed_ms = (time.perf_counter() - start) * 1e3
        return result

    return wrapper

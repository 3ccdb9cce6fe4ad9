"""
Force-time traces and their evaluation against body-part thresholds.

A trace is split at the phase boundary (0.5 s unless configured otherwise):
the overall peak is the dynamic (Phase I) force, a stable plateau after the
boundary is the quasi-static (Phase II) force.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import get_settings
from .contact_model import BodyPartParams
from .errors import TraceParseError


logger = logging.getLogger(__name__)

TRACE_HEADER = ("time_s", "force_N")
PLATEAU_WINDOW_FRACTION = 0.2
PLATEAU_RELATIVE_SPREAD = 0.05
PLATEAU_ABSOLUTE_SPREAD_N = 2.0


class TraceSource(str, Enum):
    MEASURED = "measured"
    SIMULATED = "simulated"


@dataclass(frozen=True, eq=False)
class ForceTrace:
    times: np.ndarray  # s
    forces: np.ndarray  # N
    source: TraceSource = TraceSource.MEASURED

    def __post_init__(self) -> None:
        if self.times.shape != self.forces.shape or self.times.ndim != 1:
            raise TraceParseError("time and force columns must have the same length")
        if self.times.size < 2:
            raise TraceParseError("a trace needs at least 2 samples")
        if not (np.all(np.isfinite(self.times)) and np.all(np.isfinite(self.forces))):
            raise TraceParseError("trace contains non-finite values")
        steps = np.diff(self.times)
        if np.any(steps <= 0):
            raise TraceParseError("time must be strictly increasing", row=int(np.argmax(steps <= 0)) + 2)

    @classmethod
    def from_samples(
        cls, samples: Sequence[Tuple[float, float]], source: TraceSource = TraceSource.MEASURED
    ) -> "ForceTrace":
        data = np.asarray(samples, dtype=float).reshape(-1, 2)
        return cls(data[:, 0].copy(), data[:, 1].copy(), source)

    @property
    def samples(self) -> List[Tuple[float, float]]:
        return list(zip(self.times.tolist(), self.forces.tolist()))

    def __len__(self) -> int:
        return int(self.times.size)


@dataclass(frozen=True)
class TraceVerdict:
    peak_force: float
    peak_time: float
    quasistatic_force: Optional[float]  # None: no quasi-static phase
    phase_boundary: float
    transient_pass: bool
    quasistatic_pass: Optional[bool]  # None: not applicable

    @property
    def passed(self) -> bool:
        return self.transient_pass and self.quasistatic_pass is not False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "peak_force_N": self.peak_force,
            "peak_time_s": self.peak_time,
            "quasistatic_force_N": "none" if self.quasistatic_force is None else self.quasistatic_force,
            "phase_boundary_s": self.phase_boundary,
            "transient_pass": self.transient_pass,
            "quasistatic_pass": "n/a" if self.quasistatic_pass is None else self.quasistatic_pass,
            "passed": self.passed,
        }


def parse_trace(text: str, source: TraceSource = TraceSource.MEASURED) -> ForceTrace:
    """
    Parse a ``time_s,force_N`` CSV document.

    Errors name the 1-based data row (header excluded).
    """
    rows = list(csv.reader(text.lstrip("\ufeff").splitlines()))
    if not rows or tuple(cell.strip() for cell in rows[0]) != TRACE_HEADER:
        raise TraceParseError("header must be 'time_s,force_N'")

    times: List[float] = []
    forces: List[float] = []
    for index, row in enumerate(rows[1:], start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise TraceParseError(f"expected 2 columns, got {len(row)}", row=index)
        try:
            t, force = float(row[0]), float(row[1])
        except ValueError:
            raise TraceParseError(f"non-numeric cell in {row!r}", row=index) from None
        if not (math.isfinite(t) and math.isfinite(force)):
            raise TraceParseError("non-finite value", row=index)
        if times and t <= times[-1]:
            raise TraceParseError(f"time {t!r} does not increase (previous {times[-1]!r})", row=index)
        times.append(t)
        forces.append(force)

    if len(times) < 2:
        raise TraceParseError("a trace needs at least 2 samples")
    return ForceTrace(np.asarray(times), np.asarray(forces), source)


def format_trace(trace: ForceTrace) -> str:
    """Render a trace as CSV; floats are written losslessly."""
    lines = [",".join(TRACE_HEADER)]
    lines.extend(f"{t!r},{force!r}" for t, force in trace.samples)
    return "\n".join(lines) + "\n"


def _plateau(post: np.ndarray, contact_end: float) -> Optional[float]:
    size = max(1, int(math.ceil(PLATEAU_WINDOW_FRACTION * post.size)))
    while True:
        window = post[-size:]
        mean = float(window.mean())
        if mean < contact_end:
            return None
        spread = float(window.std(ddof=1)) if size > 1 else 0.0
        if spread < max(PLATEAU_RELATIVE_SPREAD * mean, PLATEAU_ABSOLUTE_SPREAD_N):
            return mean
        if size <= 2:
            return None
        size //= 2


def evaluate_trace(
    trace: ForceTrace,
    part: BodyPartParams,
    phase_boundary: Optional[float] = None,
    contact_end: Optional[float] = None,
) -> TraceVerdict:
    """Peak and plateau forces of ``trace`` checked against the limits of ``part``."""
    settings = get_settings()
    boundary = settings.phase_boundary_s if phase_boundary is None else phase_boundary
    end_threshold = settings.contact_end_n if contact_end is None else contact_end

    peak_index = int(np.argmax(trace.forces))
    peak_force = float(trace.forces[peak_index])
    post = trace.forces[trace.times > boundary]
    quasistatic = _plateau(post, end_threshold) if post.size else None
    logger.debug(
        "Trace of %d samples: peak %.6g N at %.6g s, plateau %s",
        len(trace),
        peak_force,
        trace.times[peak_index],
        quasistatic,
    )
    return TraceVerdict(
        peak_force=peak_force,
        peak_time=float(trace.times[peak_index]),
        quasistatic_force=quasistatic,
        phase_boundary=boundary,
        transient_pass=peak_force <= part.transient_force_limit,
        quasistatic_pass=None if quasistatic is None else quasistatic <= part.quasistatic_force_limit,
    )


__all__ = [
    "TraceSource",
    "ForceTrace",
    "TraceVerdict",
    "TRACE_HEADER",
    "parse_trace",
    "format_trace",
    "evaluate_trace",
]

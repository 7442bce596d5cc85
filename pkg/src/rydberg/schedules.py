"""
UCERT - Pulse schedules

Piecewise-constant (Ω, Δ) sequences for preparing the 1D graph state and for
rotating it into the three measurement bases. Durations:

    Δt1 = 1/(2√2 h)   global π rotation about (1, 0, 1)
    Δt2 = 1/2         interaction hold (nearest-neighbour CZ)
    Δt3 = 1/(4 h)     quarter turn
    Δt4 = 1/(8 h)     eighth turn

A measurement schedule is a Δ pulse (Rz(π/2)) followed by Ω pulses of total
rotation a, which maps Z onto cos(a)·Z + sin(a)·X: a = π/2 for x, π/4 for
(x+z)/√2 and 3π/4 for (x-z)/√2.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ..utils.errors import ArgumentError, ConfigurationError

PREPARE = "prepare"
MEASURE_X = "measure_x"
MEASURE_XZ_PLUS = "measure_xz_plus"
MEASURE_XZ_MINUS = "measure_xz_minus"
MEASUREMENT_LABELS = (MEASURE_X, MEASURE_XZ_PLUS, MEASURE_XZ_MINUS)

# basis label used by the estimators for each measurement schedule
BASIS_OF_SCHEDULE = {
    MEASURE_X: "x",
    MEASURE_XZ_PLUS: "xz_plus",
    MEASURE_XZ_MINUS: "xz_minus",
}

# [duration name, Ω / h, Δ / h] per segment
DEFAULT_MEASUREMENT_PULSES: Dict[str, List[Tuple[str, float, float]]] = {
    MEASURE_X: [("dt3", 0.0, 1.0), ("dt3", 1.0, 0.0)],
    MEASURE_XZ_PLUS: [("dt3", 0.0, 1.0), ("dt4", 1.0, 0.0)],
    MEASURE_XZ_MINUS: [("dt3", 0.0, 1.0), ("dt3", 1.0, 0.0), ("dt4", 1.0, 0.0)],
}

# total Ω rotation angle of each measurement schedule in the ideal limit
MEASUREMENT_ANGLES = {
    MEASURE_X: math.pi / 2,
    MEASURE_XZ_PLUS: math.pi / 4,
    MEASURE_XZ_MINUS: 3 * math.pi / 4,
}


@dataclass(frozen=True)
class PulseSegment:
    duration: float
    omega: float
    delta: float

    def __post_init__(self):
        if not self.duration > 0:
            raise ArgumentError(f"Segment duration must be positive, got {self.duration}")


@dataclass(frozen=True)
class PulseSchedule:
    label: str
    segments: Tuple[PulseSegment, ...] = ()

    @property
    def total_duration(self) -> float:
        return sum(s.duration for s in self.segments)

    def to_dict(self) -> Dict:
        return {
            "label": self.label,
            "segments": [
                {"duration": s.duration, "omega": s.omega, "delta": s.delta} for s in self.segments
            ],
        }


def durations(h: float) -> Dict[str, float]:
    if not h > 0:
        raise ArgumentError(f"h must be positive, got {h}")
    return {
        "dt1": 1.0 / (2.0 * math.sqrt(2.0) * h),
        "dt2": 0.5,
        "dt3": 1.0 / (4.0 * h),
        "dt4": 1.0 / (8.0 * h),
    }


def rotation_schedule(h: float) -> PulseSchedule:
    """Ω = Δ = h for Δt1: a π rotation about (1, 0, 1)/√2 on every site."""
    return PulseSchedule("rotate", (PulseSegment(durations(h)["dt1"], h, h),))


def hold_schedule(h: float) -> PulseSchedule:
    """Ω = Δ = 0 for Δt2; each nearest-neighbour pair picks up exp(-iπ n_i n_j) = CZ."""
    return PulseSchedule("hold", (PulseSegment(durations(h)["dt2"], 0.0, 0.0),))


def preparation_schedule(h: float) -> PulseSchedule:
    segments = rotation_schedule(h).segments + hold_schedule(h).segments
    return PulseSchedule(PREPARE, segments)


def measurement_schedule(
    label: str,
    h: float,
    pulse_table: Optional[Mapping[str, Sequence[Sequence]]] = None
) -> PulseSchedule:
    """
    Basis-change schedule from a pulse table of [duration name, Ω/h, Δ/h] rows.

    Raises:
        ConfigurationError: unknown label or duration name
    """
    table = pulse_table or DEFAULT_MEASUREMENT_PULSES
    if label not in table:
        raise ConfigurationError(f"No pulse table entry for {label!r}")
    dts = durations(h)
    segments = []
    for row in table[label]:
        name, omega_factor, delta_factor = row
        if name not in dts:
            raise ConfigurationError(f"Unknown duration {name!r} in pulse table for {label}")
        segments.append(PulseSegment(dts[name], float(omega_factor) * h, float(delta_factor) * h))
    return PulseSchedule(label, tuple(segments))


def ideal_rotation_angle(schedule: PulseSchedule) -> Tuple[float, float]:
    """
    (Δ angle, Ω angle) of a single-site schedule with interactions switched off.

    Only valid for schedules whose segments drive Ω or Δ, never both.
    """
    z_angle = 0.0
    x_angle = 0.0
    for s in schedule.segments:
        if s.omega and s.delta:
            raise ArgumentError("Segment drives Ω and Δ together; no single-axis angle")
        x_angle += 2 * math.pi * s.omega * s.duration
        z_angle += 2 * math.pi * s.delta * s.duration
    return z_angle, x_angle

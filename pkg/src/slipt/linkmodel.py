"""Interference aggregates, electrical SINR and the achievable-rate lower bound.

Everything here works on deterministic current/power quantities; no waveforms
are synthesized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .channel import LedOptics, LinkGeometry, ReceiverOptics, channel_gain

# Relative slack absorbing rounding noise in tight constraints.
FEASIBILITY_RTOL = 1e-9


@dataclass(frozen=True)
class NoiseModel:
    noise_power: float  # A^2

    def __post_init__(self):
        if not self.noise_power > 0:
            raise ValueError("noise_power must be positive")


@dataclass(frozen=True)
class InterferenceAggregate:
    electrical_power: float  # A^2, AC part seen by the decoder
    dc_current: float  # A, DC part seen by the harvester
    fov_index: int


@dataclass(frozen=True)
class OperatingPoint:
    peak_amplitude: float
    dc_bias: float
    time_fraction: float
    fov_phase1: int
    fov_phase2: int

    def __post_init__(self):
        if self.peak_amplitude < 0:
            raise ValueError("peak_amplitude must be non-negative")
        if not 0.0 <= self.time_fraction <= 1.0:
            raise ValueError(f"time_fraction {self.time_fraction} outside [0, 1]")


def within_clipping(amplitude: float, bias: float, bias_low: float, bias_high: float,
                    rtol: float = FEASIBILITY_RTOL) -> bool:
    """True when the drive current stays in the LED's linear region [I_L, I_H]."""
    slack = rtol * max(abs(bias_high), abs(bias_low), 1e-30)
    if bias < bias_low - slack or bias > bias_high + slack:
        return False
    return -slack <= amplitude <= min(bias - bias_low, bias_high - bias) + slack


def interference_power(interferers: Iterable[tuple[float, float]], rx: ReceiverOptics,
                       led: LedOptics) -> float:
    """Sum of (η h_n P_LED A_n)^2 over (gain, peak amplitude) pairs."""
    total = 0.0
    for gain, amplitude in interferers:
        if amplitude < 0:
            raise ValueError("interferer amplitude must be non-negative")
        total += (rx.responsivity * gain * led.conversion_gain * amplitude) ** 2
    return total


def interference_dc(interferers: Iterable[tuple[float, float]], rx: ReceiverOptics,
                    led: LedOptics) -> float:
    """Sum of η h_n P_LED B_n over (gain, DC bias) pairs."""
    total = 0.0
    for gain, bias in interferers:
        if bias < 0:
            raise ValueError("interferer bias must be non-negative")
        total += rx.responsivity * gain * led.conversion_gain * bias
    return total


def aggregate_interference(neighbors: Sequence[tuple[LinkGeometry, float, float]],
                           rx: ReceiverOptics, led: LedOptics, fov_index: int) -> InterferenceAggregate:
    """Interference from neighbor LEDs given as (geometry, peak amplitude, DC bias)."""
    gains = [channel_gain(geom, rx, led, fov_index) for geom, _, _ in neighbors]
    return InterferenceAggregate(
        electrical_power=interference_power(
            ((g, a) for g, (_, a, _) in zip(gains, neighbors)), rx, led),
        dc_current=interference_dc(
            ((g, b) for g, (_, _, b) in zip(gains, neighbors)), rx, led),
        fov_index=fov_index,
    )


def sinr(amplitude: float, h: float, led: LedOptics, rx: ReceiverOptics,
         interference: float, noise: NoiseModel) -> float:
    if amplitude < 0:
        raise ValueError("amplitude must be non-negative")
    return (rx.responsivity * h * led.conversion_gain * amplitude) ** 2 / (interference + noise.noise_power)


def rate_lower_bound(time_fraction: float, sinr: float) -> float:
    """Lower bound T·log2(1 + e·γ/(2π)) on the rate in bits/s/Hz."""
    if not 0.0 <= time_fraction <= 1.0:
        raise ValueError(f"time_fraction {time_fraction} outside [0, 1]")
    if sinr < 0:
        raise ValueError("sinr must be non-negative")
    if time_fraction == 0.0 or sinr == 0.0:
        return 0.0
    return time_fraction * math.log2(1.0 + math.e / (2.0 * math.pi) * sinr)

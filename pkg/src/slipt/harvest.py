"""Solar-cell harvesting model and per-frame energy for the time-splitting
strategies.

Frames have unit duration, so energies are numerically equal to average powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import LedOptics, ReceiverOptics

ROOM_THERMAL_VOLTAGE = 0.025  # V


@dataclass(frozen=True)
class HarvesterParams:
    fill_factor: float
    thermal_voltage: float
    dark_saturation_current: float
    bias_range: tuple[float, float]  # (I_L, I_H) of the LED drive, A

    def __post_init__(self):
        object.__setattr__(self, "bias_range", tuple(float(b) for b in self.bias_range))
        if not 0.0 < self.fill_factor <= 1.0:
            raise ValueError("fill_factor must lie in (0, 1]")
        if not self.thermal_voltage > 0:
            raise ValueError("thermal_voltage must be positive")
        if not self.dark_saturation_current > 0:
            raise ValueError("dark_saturation_current must be positive")
        low, high = self.bias_range
        if not 0.0 <= low < high:
            raise ValueError(f"bias_range must satisfy 0 <= I_L < I_H, got {self.bias_range}")

    @property
    def bias_low(self) -> float:
        return self.bias_range[0]

    @property
    def bias_high(self) -> float:
        return self.bias_range[1]

    @property
    def bias_mid(self) -> float:
        return 0.5 * (self.bias_range[0] + self.bias_range[1])

    @property
    def max_amplitude(self) -> float:
        return 0.5 * (self.bias_range[1] - self.bias_range[0])


@dataclass(frozen=True)
class EnergyReport:
    phase1_energy: float
    phase2_energy: float

    @property
    def total_energy(self) -> float:
        return self.phase1_energy + self.phase2_energy


def open_circuit_voltage(dc_current: float, cell: HarvesterParams) -> float:
    if dc_current < 0:
        raise ValueError(f"DC current must be non-negative, got {dc_current}")
    return cell.thermal_voltage * math.log1p(dc_current / cell.dark_saturation_current)


def dc_component(h: float, dc_bias: float, led: LedOptics, rx: ReceiverOptics,
                 interference_dc: float) -> float:
    """Photocurrent DC level: dedicated-LED part plus the neighbors' part."""
    if dc_bias < 0:
        raise ValueError("dc_bias must be non-negative")
    return rx.responsivity * h * led.conversion_gain * dc_bias + interference_dc


def harvested_power(dc_current: float, cell: HarvesterParams) -> float:
    return cell.fill_factor * dc_current * open_circuit_voltage(dc_current, cell)


def _check_fraction(T: float):
    if not 0.0 <= T <= 1.0:
        raise ValueError(f"time fraction {T} outside [0, 1]")


def energy_ts(T: float, phase1_dc: float, phase2_dc: float, cell: HarvesterParams) -> EnergyReport:
    _check_fraction(T)
    return EnergyReport(
        phase1_energy=T * harvested_power(phase1_dc, cell),
        phase2_energy=(1.0 - T) * harvested_power(phase2_dc, cell),
    )


def energy_tsbo(T: float, B1: float, phase1_interference_dc: float, h1: float, phase2_dc: float,
                led: LedOptics, rx: ReceiverOptics, cell: HarvesterParams) -> EnergyReport:
    """Frame energy when the phase-1 DC bias ``B1`` is free instead of pinned
    to the middle of the drive range."""
    _check_fraction(T)
    slack = 1e-9 * cell.bias_high
    if not cell.bias_low - slack <= B1 <= cell.bias_high + slack:
        raise ValueError(f"B1 = {B1} outside the drive range {cell.bias_range}")
    phase1_dc = dc_component(h1, B1, led, rx, phase1_interference_dc)
    return energy_ts(T, phase1_dc, phase2_dc, cell)

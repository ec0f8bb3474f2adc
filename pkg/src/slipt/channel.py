"""Line-of-sight Lambertian channel for one LED-to-receiver link.

All angles are radians. Transmitter and receiver planes are assumed parallel,
so the irradiance and incidence angles coincide for ceiling layouts.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass


@dataclass(frozen=True)
class LinkGeometry:
    distance: float
    irradiance_angle: float
    incidence_angle: float

    def __post_init__(self):
        if not self.distance > 0:
            raise ValueError(f"distance must be positive, got {self.distance}")
        for name in ("irradiance_angle", "incidence_angle"):
            angle = getattr(self, name)
            if not 0.0 <= angle < math.pi / 2:
                raise ValueError(f"{name} must lie in [0, pi/2), got {angle}")


@dataclass(frozen=True)
class ReceiverOptics:
    """Photodetector front end with a discrete set of selectable FOVs."""

    detector_area: float
    optical_filter_gain: float
    refractive_index: float
    fov_settings: tuple[float, ...]
    responsivity: float

    def __post_init__(self):
        object.__setattr__(self, "fov_settings", tuple(float(f) for f in self.fov_settings))
        if not self.detector_area > 0:
            raise ValueError("detector_area must be positive")
        if self.optical_filter_gain < 0:
            raise ValueError("optical_filter_gain must be non-negative")
        if self.refractive_index < 1:
            raise ValueError("refractive_index must be >= 1")
        if not self.responsivity > 0:
            raise ValueError("responsivity must be positive")
        if not self.fov_settings:
            raise ValueError("fov_settings must not be empty")
        for fov in self.fov_settings:
            if not 0.0 < fov <= math.pi / 2:
                raise ValueError(f"FOV setting {fov} outside (0, pi/2]")
        if any(b <= a for a, b in zip(self.fov_settings, self.fov_settings[1:])):
            raise ValueError("fov_settings must be strictly increasing")

    def fov(self, index: int) -> float:
        if not 0 <= index < len(self.fov_settings):
            raise IndexError(f"FOV index {index} out of range for {len(self.fov_settings)} settings")
        return self.fov_settings[index]


@dataclass(frozen=True)
class LedOptics:
    half_luminance_angle: float
    conversion_gain: float  # W/A

    def __post_init__(self):
        if not 0.0 < self.half_luminance_angle < math.pi / 2:
            raise ValueError("half_luminance_angle must lie in (0, pi/2)")
        if not self.conversion_gain > 0:
            raise ValueError("conversion_gain must be positive")

    @property
    def order(self) -> float:
        return lambertian_order(self.half_luminance_angle)


def lambertian_order(half_luminance_angle: float) -> float:
    if not 0.0 < half_luminance_angle < math.pi / 2:
        raise ValueError(f"half-luminance angle {half_luminance_angle} outside (0, pi/2)")
    c = math.cos(half_luminance_angle)
    # cos(pi/3) carries one ulp of error; the closed form there is exactly 1
    if abs(c - 0.5) <= 4 * sys.float_info.epsilon:
        return 1.0
    return -1.0 / math.log2(c)


def radiant_intensity(order: float, irradiance_angle: float) -> float:
    """Normalized Lambertian radiant intensity (ξ+1)/(2π)·cos^ξ(φ)."""
    return (order + 1.0) / (2.0 * math.pi) * math.cos(irradiance_angle) ** order


def concentrator_gain(fov: float, incidence_angle: float, refractive_index: float) -> float:
    # boundary psi == fov counts as inside
    if 0.0 <= incidence_angle <= fov:
        return refractive_index**2 / math.sin(fov) ** 2
    return 0.0


def channel_gain(geometry: LinkGeometry, rx: ReceiverOptics, led: LedOptics, fov_index: int) -> float:
    fov = rx.fov(fov_index)
    g = concentrator_gain(fov, geometry.incidence_angle, rx.refractive_index)
    if g == 0.0:
        return 0.0
    return (
        rx.detector_area
        / geometry.distance**2
        * radiant_intensity(led.order, geometry.irradiance_angle)
        * rx.optical_filter_gain
        * g
        * math.cos(geometry.incidence_angle)
    )


def geometry_from_ceiling_layout(vertical_drop: float, horizontal_offset: float) -> LinkGeometry:
    """Geometry of a ceiling LED seen by an upward-facing receiver.

    The receiver sits ``vertical_drop`` below the ceiling and ``horizontal_offset``
    away from the point under the LED.
    """
    if not vertical_drop > 0:
        raise ValueError("vertical_drop must be positive")
    if horizontal_offset < 0:
        raise ValueError("horizontal_offset must be non-negative")
    angle = math.atan2(horizontal_offset, vertical_drop)
    return LinkGeometry(math.hypot(vertical_drop, horizontal_offset), angle, angle)

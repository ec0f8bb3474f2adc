"""Scenario assembly and the parameter sweeps behind the rate-threshold and
neighbor-count experiments."""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .channel import (LedOptics, LinkGeometry, ReceiverOptics, channel_gain,
                      geometry_from_ceiling_layout)
from .config import ScenarioConfig
from .harvest import HarvesterParams, dc_component
from .linkmodel import InterferenceAggregate, NoiseModel, OperatingPoint, aggregate_interference
from .optimizer import (BASELINE, TS, TSBO, PolicySolution, QosConstraints, evaluate_baseline,
                        solve_ts, solve_tsbo)

Neighbor = tuple[LinkGeometry, float, float]  # geometry, peak amplitude, DC bias


@dataclass(frozen=True)
class Scenario:
    geometry: LinkGeometry
    led: LedOptics
    rx: ReceiverOptics
    neighbors: tuple[Neighbor, ...]
    noise: NoiseModel
    cell: HarvesterParams
    qos: QosConstraints
    _gains: tuple[float, ...] = field(init=False, repr=False, compare=False)
    _interference: tuple[InterferenceAggregate, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "neighbors", tuple(tuple(n) for n in self.neighbors))
        fovs = range(len(self.rx.fov_settings))
        object.__setattr__(self, "_gains", tuple(channel_gain(self.geometry, self.rx, self.led, k) for k in fovs))
        object.__setattr__(self, "_interference", tuple(
            aggregate_interference(self.neighbors, self.rx, self.led, k) for k in fovs))

    @property
    def num_neighbors(self) -> int:
        return len(self.neighbors)

    def gain(self, fov_index: int) -> float:
        self.rx.fov(fov_index)
        return self._gains[fov_index]

    def interference(self, fov_index: int) -> InterferenceAggregate:
        self.rx.fov(fov_index)
        return self._interference[fov_index]

    def phase2_dc(self, fov_index: int) -> float:
        """DC photocurrent of the harvesting-only phase (A=0, B=I_H)."""
        return dc_component(self.gain(fov_index), self.cell.bias_high, self.led, self.rx,
                            self.interference(fov_index).dc_current)

    def fov_index(self, angle: float) -> int:
        for k, fov in enumerate(self.rx.fov_settings):
            if math.isclose(fov, angle, rel_tol=1e-12, abs_tol=1e-12):
                return k
        raise ValueError(f"{math.degrees(angle):g} deg is not a FOV setting of this receiver")

    def with_qos(self, qos: QosConstraints) -> "Scenario":
        return dataclasses.replace(self, qos=qos)

    def to_dict(self) -> dict:
        def geom(g: LinkGeometry) -> dict:
            return dataclasses.asdict(g)

        return {
            "geometry": geom(self.geometry),
            "led": dataclasses.asdict(self.led),
            "rx": dataclasses.asdict(self.rx),
            "neighbors": [{"geometry": geom(g), "amplitude": a, "bias": b} for g, a, b in self.neighbors],
            "noise": dataclasses.asdict(self.noise),
            "cell": dataclasses.asdict(self.cell),
            "qos": dataclasses.asdict(self.qos),
        }

    def serialize(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def build_scenario(config: ScenarioConfig) -> Scenario:
    """Dedicated LED straight above the receiver; every neighbor sits at the
    same horizontal offset from it, so all neighbor links are identical."""
    rx = ReceiverOptics(
        detector_area=config.detector_area,
        optical_filter_gain=config.optical_filter_gain,
        refractive_index=config.refractive_index,
        fov_settings=config.fov_settings,
        responsivity=config.responsivity,
    )
    led = LedOptics(config.half_luminance_angle, config.led_conversion_gain)
    neighbor_geometry = geometry_from_ceiling_layout(config.distance, config.neighbor_offset)
    neighbors = tuple((neighbor_geometry, config.neighbor_amplitude, config.neighbor_bias)
                      for _ in range(config.num_neighbors))
    return Scenario(
        geometry=geometry_from_ceiling_layout(config.distance, 0.0),
        led=led,
        rx=rx,
        neighbors=neighbors,
        noise=NoiseModel(config.noise_power),
        cell=HarvesterParams(config.fill_factor, config.thermal_voltage, config.dark_saturation_current,
                             (config.bias_low, config.bias_high)),
        qos=QosConstraints(config.rate_threshold, config.sinr_threshold_linear),
    )


@dataclass(frozen=True)
class PolicySpec:
    """A named policy to run at each sweep point. ``baseline_fov`` (radians) is
    set only for fixed-point baselines."""

    name: str
    kind: str
    baseline_fov: float | None = None


def policy_specs(config: ScenarioConfig) -> list[PolicySpec]:
    specs = []
    for name in config.policies:
        if name == "baseline":
            specs.extend(PolicySpec(f"baseline-{math.degrees(f):g}", BASELINE, f) for f in config.baseline_fovs)
        else:
            specs.append(PolicySpec(name, TS if name == "ts" else TSBO))
    return specs


def baseline_point(config: ScenarioConfig, scenario: Scenario, fov: float) -> OperatingPoint:
    k = scenario.fov_index(fov)
    return OperatingPoint(config.baseline_amplitude, config.baseline_bias, config.baseline_time_fraction, k, k)


def run_policy(spec: PolicySpec, scenario: Scenario, config: ScenarioConfig) -> PolicySolution:
    if spec.kind == TS:
        return solve_ts(scenario)
    if spec.kind == TSBO:
        return solve_tsbo(scenario, config.tsbo_grid_points)
    return evaluate_baseline(scenario, baseline_point(config, scenario, spec.baseline_fov))


@dataclass(frozen=True)
class SweepRecord:
    policy: str
    axis_name: str
    axis_value: float
    feasible: bool
    energy_j: float | None = None
    T: float | None = None
    A1_a: float | None = None
    B1_a: float | None = None
    fov1_deg: float | None = None
    fov2_deg: float | None = None
    rate_bpshz: float | None = None
    sinr_linear: float | None = None

    @classmethod
    def from_solution(cls, policy: str, axis_name: str, axis_value: float, solution: PolicySolution,
                      scenario: Scenario) -> "SweepRecord":
        point = solution.operating_point
        kwargs = {}
        if point is not None:
            kwargs = dict(
                T=point.time_fraction,
                A1_a=point.peak_amplitude,
                B1_a=point.dc_bias,
                fov1_deg=math.degrees(scenario.rx.fov(point.fov_phase1)),
                fov2_deg=math.degrees(scenario.rx.fov(point.fov_phase2)),
            )
        return cls(
            policy=policy,
            axis_name=axis_name,
            axis_value=axis_value,
            feasible=solution.feasible,
            energy_j=solution.harvested_energy if solution.feasible else None,
            rate_bpshz=solution.achieved_rate,
            sinr_linear=solution.achieved_sinr,
            **kwargs,
        )


def _normalize_policies(policies: Iterable[PolicySpec | str]) -> list[PolicySpec]:
    out = []
    for p in policies:
        if isinstance(p, PolicySpec):
            out.append(p)
        elif p in ("ts", "tsbo"):
            out.append(PolicySpec(p, TS if p == "ts" else TSBO))
        else:
            raise ValueError(f"policy {p!r} needs a PolicySpec (baselines carry a FOV)")
    return out


def sweep_rate_threshold(template: ScenarioConfig, r_values: Sequence[float],
                         policies: Iterable[PolicySpec | str]) -> list[SweepRecord]:
    """One record per (policy, R_th), policy-major in the given order."""
    if not r_values:
        raise ValueError("r_values must not be empty")
    if any(r < 0 for r in r_values):
        raise ValueError("rate thresholds must be non-negative")
    specs = _normalize_policies(policies)
    base = build_scenario(template)
    records = []
    for spec in specs:
        for r in r_values:
            scenario = base.with_qos(QosConstraints(float(r), base.qos.sinr_threshold_linear))
            sol = run_policy(spec, scenario, template)
            records.append(SweepRecord.from_solution(spec.name, "rth", float(r), sol, scenario))
    return records


def sweep_neighbor_count(template: ScenarioConfig, n_values: Sequence[int],
                         policies: Iterable[PolicySpec | str]) -> list[SweepRecord]:
    """One record per (policy, N), policy-major in the given order."""
    if not n_values:
        raise ValueError("n_values must not be empty")
    if any(int(n) != n or n < 0 for n in n_values):
        raise ValueError("neighbor counts must be non-negative integers")
    specs = _normalize_policies(policies)
    scenarios = {n: build_scenario(dataclasses.replace(template, num_neighbors=int(n))) for n in n_values}
    records = []
    for spec in specs:
        for n in n_values:
            sol = run_policy(spec, scenarios[n], template)
            records.append(SweepRecord.from_solution(spec.name, "n", int(n), sol, scenarios[n]))
    return records


def crossover_neighbor_count(records: Sequence[SweepRecord], policy: str) -> int | None:
    """Smallest N at which ``policy`` stops harvesting with its narrowest phase-2 FOV."""
    rows = sorted((r for r in records if r.policy == policy and r.axis_name == "n" and r.feasible),
                  key=lambda r: r.axis_value)
    if not rows:
        return None
    narrowest = min(r.fov2_deg for r in rows)
    for r in rows:
        if r.fov2_deg != narrowest:
            return int(r.axis_value)
    return None

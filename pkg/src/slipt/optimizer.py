"""Harvested-energy maximization under rate and SINR targets.

Two policies are solved per phase-1 FOV candidate and the best candidate is
kept:

* ``TS``: phase 1 runs at the largest clipping-free amplitude and the shortest
  phase-1 duration that meets the rate target.
* ``TSBO``: the phase-1 DC bias is raised as far as the rate target allows; the
  remaining one-dimensional problem in T is maximized numerically.

Phase 2 always harvests with the AC part switched off and the bias at I_H,
using the FOV that maximizes phase-2 harvesting.

:func:`brute_force_oracle` grids the raw problem instead and is used to check
the closed-form solvers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .harvest import EnergyReport, dc_component, energy_ts, energy_tsbo, harvested_power
from .linkmodel import FEASIBILITY_RTOL, OperatingPoint, rate_lower_bound, sinr, within_clipping

if TYPE_CHECKING:
    from .scenario import Scenario

TS = "TS"
TSBO = "TSBO"
BASELINE = "BASELINE"

_RATE_GAIN = math.e / (2.0 * math.pi)


@dataclass(frozen=True)
class QosConstraints:
    rate_threshold: float  # bits/s/Hz
    sinr_threshold_linear: float

    def __post_init__(self):
        if self.rate_threshold < 0:
            raise ValueError("rate_threshold must be non-negative")
        if self.sinr_threshold_linear < 0:
            raise ValueError("sinr_threshold_linear must be non-negative")


@dataclass(frozen=True)
class TBounds:
    lower: float
    upper: float

    @property
    def feasible(self) -> bool:
        return self.lower <= self.upper * (1.0 + FEASIBILITY_RTOL)


@dataclass(frozen=True)
class PolicySolution:
    feasible: bool
    policy_tag: str
    operating_point: OperatingPoint | None = None
    harvested_energy: float | None = None
    achieved_rate: float | None = None
    achieved_sinr: float | None = None
    energy: EnergyReport | None = None
    reason: str | None = None


@dataclass(frozen=True)
class OracleGrid:
    t_points: int = 400
    amplitude_points: int = 400
    bias_points: int = 400

    def __post_init__(self):
        if min(self.t_points, self.amplitude_points, self.bias_points) < 2:
            raise ValueError("oracle grid needs at least 2 points per axis")

    @classmethod
    def uniform(cls, n: int) -> "OracleGrid":
        return cls(n, n, n)


def _is_at_least(value: float, threshold: float) -> bool:
    return value >= threshold * (1.0 - FEASIBILITY_RTOL)


def _fov_deg(scenario: Scenario, index: int) -> str:
    return f"{math.degrees(scenario.rx.fov(index)):g} deg"


def _link_factor(h: float, scenario: Scenario) -> float:
    # photocurrent per ampere of LED drive
    return scenario.rx.responsivity * h * scenario.led.conversion_gain


def ts_time_fraction(h: float, interference: float, scenario: Scenario, qos: QosConstraints | None = None) -> float:
    """Shortest phase-1 duration meeting the rate target at full swing.

    Returns ``inf`` when the dedicated link is dark.
    """
    qos = qos or scenario.qos
    if qos.rate_threshold == 0:
        return 0.0
    cell = scenario.cell
    swing = _link_factor(h, scenario) * (cell.bias_high - cell.bias_low)
    spectral = math.log2(1.0 + math.e * swing**2 / (8.0 * math.pi * (interference + scenario.noise.noise_power)))
    if spectral == 0.0:
        return math.inf
    return qos.rate_threshold / spectral


def t_bounds(h: float, interference: float, qos: QosConstraints, scenario: Scenario) -> TBounds:
    """Interval of phase-1 durations for which the TSBO reformulation is feasible.

    The lower end comes from the amplitude cap (A1 cannot exceed half the drive
    range), the upper end from the SINR target and the frame length.
    """
    if not h > 0:
        raise ValueError("dedicated channel gain must be positive")
    if qos.rate_threshold == 0:
        return TBounds(0.0, 0.0)
    lower = ts_time_fraction(h, interference, scenario, qos)
    if qos.sinr_threshold_linear == 0:
        upper = 1.0
    else:
        upper = min(qos.rate_threshold / math.log2(1.0 + _RATE_GAIN * qos.sinr_threshold_linear), 1.0)
    return TBounds(lower, upper)


def amplitude_for_rate(T: float, h: float, interference: float, qos: QosConstraints, scenario: Scenario) -> float:
    """Peak amplitude that meets the rate target with equality in time ``T``."""
    if qos.rate_threshold == 0:
        return 0.0
    if not T > 0:
        raise ValueError("a positive rate target needs a positive phase-1 duration")
    try:
        growth = math.expm1(qos.rate_threshold / T * math.log(2.0))
    except OverflowError:
        return math.inf
    noise = interference + scenario.noise.noise_power
    return math.sqrt(2.0 * math.pi * noise * growth / math.e) / _link_factor(h, scenario)


def select_phase2_fov(scenario: Scenario) -> int:
    """FOV index maximizing harvesting with A=0 and B=I_H; narrowest wins ties."""
    best, best_power = 0, -math.inf
    for k in range(len(scenario.rx.fov_settings)):
        power = harvested_power(scenario.phase2_dc(k), scenario.cell)
        if power > best_power:
            best, best_power = k, power
    return best


def _pure_harvest(scenario: Scenario, tag: str, fov2: int, fov1: int) -> PolicySolution:
    # zero rate target: phase 1 vanishes and the whole frame harvests
    cell = scenario.cell
    amplitude, bias = (cell.max_amplitude, cell.bias_mid) if tag == TS else (0.0, cell.bias_high)
    point = OperatingPoint(amplitude, bias, 0.0, fov1, fov2)
    report = energy_ts(0.0, 0.0, scenario.phase2_dc(fov2), cell)
    return PolicySolution(True, tag, point, report.total_energy, 0.0, 0.0, report)


def solve_ts(scenario: Scenario) -> PolicySolution:
    cell, qos = scenario.cell, scenario.qos
    fov2 = select_phase2_fov(scenario)
    if qos.rate_threshold == 0:
        return _pure_harvest(scenario, TS, fov2, fov2)

    phase2_dc = scenario.phase2_dc(fov2)
    best: PolicySolution | None = None
    reasons = []
    for k in range(len(scenario.rx.fov_settings)):
        h = scenario.gain(k)
        intf = scenario.interference(k)
        if h == 0:
            reasons.append(f"FOV {_fov_deg(scenario, k)}: dedicated LED outside the field of view")
            continue
        gamma = sinr(cell.max_amplitude, h, scenario.led, scenario.rx, intf.electrical_power, scenario.noise)
        if not _is_at_least(gamma, qos.sinr_threshold_linear):
            reasons.append(f"FOV {_fov_deg(scenario, k)}: SINR threshold unreachable "
                           f"(max SINR {gamma:.4g} < {qos.sinr_threshold_linear:.4g})")
            continue
        T = ts_time_fraction(h, intf.electrical_power, scenario)
        if T > 1.0 + FEASIBILITY_RTOL:
            reasons.append(f"FOV {_fov_deg(scenario, k)}: rate threshold needs T = {T:.4g} > 1")
            continue
        T = min(T, 1.0)
        phase1_dc = dc_component(h, cell.bias_mid, scenario.led, scenario.rx, intf.dc_current)
        report = energy_ts(T, phase1_dc, phase2_dc, cell)
        if best is None or report.total_energy > best.harvested_energy:
            best = PolicySolution(
                True, TS,
                OperatingPoint(cell.max_amplitude, cell.bias_mid, T, k, fov2),
                report.total_energy, rate_lower_bound(T, gamma), gamma, report,
            )
    if best is None:
        return PolicySolution(False, TS, reason="; ".join(reasons))
    return best


def _golden_refine(f: Callable[[float], float], grid: np.ndarray, values: np.ndarray,
                   xatol: float = 1e-9) -> tuple[float, float]:
    """Maximize ``f`` around the best point of a dense grid evaluation."""
    i = int(np.argmax(values))
    best_x, best_f = float(grid[i]), float(values[i])
    if len(grid) < 3:
        return best_x, best_f
    lo, hi = float(grid[max(i - 1, 0)]), float(grid[min(i + 1, len(grid) - 1)])
    res = minimize_scalar(lambda t: -f(t), bounds=(lo, hi), method="bounded",
                          options={"xatol": xatol})
    if res.success and -res.fun > best_f:
        return float(res.x), float(-res.fun)
    return best_x, best_f


def solve_tsbo(scenario: Scenario, grid_points: int = 2048) -> PolicySolution:
    cell, qos = scenario.cell, scenario.qos
    fov2 = select_phase2_fov(scenario)
    if qos.rate_threshold == 0:
        return _pure_harvest(scenario, TSBO, fov2, fov2)

    phase2_dc = scenario.phase2_dc(fov2)
    p2 = harvested_power(phase2_dc, cell)
    best: PolicySolution | None = None
    reasons = []
    for k in range(len(scenario.rx.fov_settings)):
        h = scenario.gain(k)
        intf = scenario.interference(k)
        if h == 0:
            reasons.append(f"FOV {_fov_deg(scenario, k)}: dedicated LED outside the field of view")
            continue
        bounds = t_bounds(h, intf.electrical_power, qos, scenario)
        if not bounds.feasible:
            if bounds.lower > 1.0:
                why = f"rate threshold needs T >= {bounds.lower:.4g} > 1"
            else:
                why = (f"SINR threshold caps T at {bounds.upper:.4g}, "
                       f"below the amplitude-limited minimum {bounds.lower:.4g}")
            reasons.append(f"FOV {_fov_deg(scenario, k)}: {why}")
            continue

        lower, upper = bounds.lower, max(bounds.lower, bounds.upper)

        def bias_of(T: float) -> float:
            a = min(amplitude_for_rate(T, h, intf.electrical_power, qos, scenario), cell.max_amplitude)
            return cell.bias_high - a

        def objective(T: float) -> float:
            dc = dc_component(h, bias_of(T), scenario.led, scenario.rx, intf.dc_current)
            return T * harvested_power(dc, cell) + (1.0 - T) * p2

        ts = np.linspace(lower, upper, grid_points) if upper > lower else np.array([lower])
        values = np.array([objective(t) for t in ts])
        T, _ = _golden_refine(objective, ts, values)
        T = min(max(T, lower), upper)

        amplitude = min(amplitude_for_rate(T, h, intf.electrical_power, qos, scenario), cell.max_amplitude)
        bias = cell.bias_high - amplitude
        report = energy_tsbo(T, bias, intf.dc_current, h, phase2_dc, scenario.led, scenario.rx, cell)
        if best is None or report.total_energy > best.harvested_energy:
            gamma = sinr(amplitude, h, scenario.led, scenario.rx, intf.electrical_power, scenario.noise)
            best = PolicySolution(
                True, TSBO, OperatingPoint(amplitude, bias, T, k, fov2),
                report.total_energy, rate_lower_bound(T, gamma), gamma, report,
            )
    if best is None:
        return PolicySolution(False, TSBO, reason="; ".join(reasons))
    return best


def evaluate_baseline(scenario: Scenario, fixed: OperatingPoint) -> PolicySolution:
    """Score a fixed operating point. Phase 2 harvests at B=I_H with the
    point's phase-2 FOV."""
    cell, qos = scenario.cell, scenario.qos
    if not within_clipping(fixed.peak_amplitude, fixed.dc_bias, cell.bias_low, cell.bias_high):
        raise ValueError(
            f"baseline point (A={fixed.peak_amplitude}, B={fixed.dc_bias}) violates the clipping constraint")
    h = scenario.gain(fixed.fov_phase1)
    intf = scenario.interference(fixed.fov_phase1)
    gamma = sinr(fixed.peak_amplitude, h, scenario.led, scenario.rx, intf.electrical_power, scenario.noise)
    rate = rate_lower_bound(fixed.time_fraction, gamma)

    reasons = []
    if not _is_at_least(rate, qos.rate_threshold):
        reasons.append(f"rate {rate:.4g} below threshold {qos.rate_threshold:.4g}")
    if fixed.time_fraction > 0 and not _is_at_least(gamma, qos.sinr_threshold_linear):
        reasons.append(f"SINR {gamma:.4g} below threshold {qos.sinr_threshold_linear:.4g}")
    if reasons:
        return PolicySolution(False, BASELINE, fixed, None, rate, gamma, reason="; ".join(reasons))

    phase1_dc = dc_component(h, fixed.dc_bias, scenario.led, scenario.rx, intf.dc_current)
    report = energy_ts(fixed.time_fraction, phase1_dc, scenario.phase2_dc(fixed.fov_phase2), cell)
    return PolicySolution(True, BASELINE, fixed, report.total_energy, rate, gamma, report)


# ---------------------------------------------------------------------------
# brute-force oracle


def _oracle_axes(scenario: Scenario, grid: OracleGrid):
    cell = scenario.cell
    ts = np.linspace(0.0, 1.0, grid.t_points)
    amps = np.linspace(0.0, cell.max_amplitude, grid.amplitude_points)
    biases = np.linspace(cell.bias_low, cell.bias_high, grid.bias_points)
    return ts, amps, biases


def _vec_power(dc: np.ndarray, scenario: Scenario) -> np.ndarray:
    cell = scenario.cell
    return cell.fill_factor * dc * cell.thermal_voltage * np.log1p(dc / cell.dark_saturation_current)


def _qos_mask(ts: np.ndarray, gamma: np.ndarray, qos: QosConstraints) -> np.ndarray:
    """C1/C2 on a (T, ...) grid; ``gamma`` broadcasts against ``ts[:, None]``."""
    t = ts.reshape((-1,) + (1,) * gamma.ndim)
    rate = t * np.log2(1.0 + _RATE_GAIN * gamma)
    ok_rate = rate >= qos.rate_threshold * (1.0 - FEASIBILITY_RTOL)
    # the SINR target only binds while phase 1 actually exists
    ok_sinr = (gamma >= qos.sinr_threshold_linear * (1.0 - FEASIBILITY_RTOL)) | (t == 0)
    return ok_rate & ok_sinr


def _clip_ok(amps: np.ndarray, biases: np.ndarray, scenario: Scenario) -> np.ndarray:
    """Clipping mask of shape (len(amps), len(biases))."""
    cell = scenario.cell
    slack = FEASIBILITY_RTOL * cell.bias_high
    cap = np.minimum(biases - cell.bias_low, cell.bias_high - biases)
    return amps[:, None] <= cap[None, :] + slack


def _best_on_grid(energy: np.ndarray) -> tuple[int, ...] | None:
    if not np.isfinite(energy).any():
        return None
    return np.unravel_index(int(np.argmax(energy)), energy.shape)


def _oracle_ts(scenario: Scenario, grid: OracleGrid) -> PolicySolution:
    cell, qos = scenario.cell, scenario.qos
    ts, _, _ = _oracle_axes(scenario, grid)
    m = len(scenario.rx.fov_settings)
    energy = np.full((m, m, len(ts)), -np.inf)
    for k1 in range(m):
        h = scenario.gain(k1)
        intf = scenario.interference(k1)
        gamma = np.array([sinr(cell.max_amplitude, h, scenario.led, scenario.rx,
                               intf.electrical_power, scenario.noise)])
        ok = _qos_mask(ts, gamma, qos)[:, 0]
        p1 = harvested_power(dc_component(h, cell.bias_mid, scenario.led, scenario.rx, intf.dc_current), cell)
        for k2 in range(m):
            p2 = harvested_power(scenario.phase2_dc(k2), cell)
            energy[k1, k2] = np.where(ok, ts * p1 + (1.0 - ts) * p2, -np.inf)
    best = _best_on_grid(energy)
    if best is None:
        return PolicySolution(False, TS, reason="no feasible grid point")
    k1, k2, i = best
    return _score_point(scenario, TS, OperatingPoint(cell.max_amplitude, cell.bias_mid, float(ts[i]), int(k1), int(k2)))


def _oracle_tsbo(scenario: Scenario, grid: OracleGrid, exhaustive: bool) -> PolicySolution:
    cell, qos = scenario.cell, scenario.qos
    ts, amps, biases = _oracle_axes(scenario, grid)
    m = len(scenario.rx.fov_settings)
    clip = _clip_ok(amps, biases, scenario)
    energy = np.full((m, m, len(ts), len(biases)), -np.inf)
    for k1 in range(m):
        h = scenario.gain(k1)
        intf = scenario.interference(k1)
        noise = intf.electrical_power + scenario.noise.noise_power
        if exhaustive:
            gamma = (_link_factor(h, scenario) * amps) ** 2 / noise
            ok3 = _qos_mask(ts, gamma, qos)[:, :, None] & clip[None, :, :]
            ok = ok3.any(axis=1)
        else:
            # C1 and C2 are monotone in A1 and the energy does not depend on A1,
            # so the largest clipping-free grid amplitude decides feasibility
            top = clip.shape[0] - 1 - np.argmax(clip[::-1, :], axis=0)
            gamma = (_link_factor(h, scenario) * amps[top]) ** 2 / noise
            ok = _qos_mask(ts, gamma, qos)
        dc1 = _link_factor(h, scenario) * biases + intf.dc_current
        p1 = _vec_power(dc1, scenario)
        for k2 in range(m):
            p2 = harvested_power(scenario.phase2_dc(k2), cell)
            e = ts[:, None] * p1[None, :] + (1.0 - ts[:, None]) * p2
            energy[k1, k2] = np.where(ok, e, -np.inf)
    best = _best_on_grid(energy)
    if best is None:
        return PolicySolution(False, TSBO, reason="no feasible grid point")
    k1, k2, i, j = (int(v) for v in best)

    # report the smallest grid amplitude that keeps the winning point feasible
    h = scenario.gain(k1)
    noise = scenario.interference(k1).electrical_power + scenario.noise.noise_power
    gamma = (_link_factor(h, scenario) * amps) ** 2 / noise
    ok_amp = _qos_mask(ts[i:i + 1], gamma, qos)[0] & clip[:, j]
    amplitude = float(amps[int(np.argmax(ok_amp))])
    return _score_point(scenario, TSBO, OperatingPoint(amplitude, float(biases[j]), float(ts[i]), k1, k2))


def _score_point(scenario: Scenario, tag: str, point: OperatingPoint) -> PolicySolution:
    cell = scenario.cell
    h = scenario.gain(point.fov_phase1)
    intf = scenario.interference(point.fov_phase1)
    gamma = sinr(point.peak_amplitude, h, scenario.led, scenario.rx, intf.electrical_power, scenario.noise)
    report = energy_tsbo(point.time_fraction, min(max(point.dc_bias, cell.bias_low), cell.bias_high),
                         intf.dc_current, h, scenario.phase2_dc(point.fov_phase2),
                         scenario.led, scenario.rx, cell)
    return PolicySolution(True, tag, point, report.total_energy,
                          rate_lower_bound(point.time_fraction, gamma), gamma, report)


def brute_force_oracle(scenario: Scenario, grid: OracleGrid | int = 400, shape: str = TSBO,
                       exhaustive: bool = False) -> PolicySolution:
    """Best feasible point of a uniform grid over the raw problem.

    ``shape=TS`` searches phase-1 durations with the phase-1 point pinned to
    full swing at mid bias; ``shape=TSBO`` searches (T, A1, B1). Every FOV
    pair is tried in both cases. With ``exhaustive=True`` the TSBO feasibility
    mask is built over the full 3-D grid instead of the amplitude-dominance
    shortcut; both give the same answer.
    """
    if isinstance(grid, int):
        grid = OracleGrid.uniform(grid)
    if shape == TS:
        return _oracle_ts(scenario, grid)
    if shape == TSBO:
        return _oracle_tsbo(scenario, grid, exhaustive)
    raise ValueError(f"unknown oracle shape {shape!r}")

"""Scenario configuration files: presets, schema validation, unit conversion.

Configs are JSON objects whose keys carry their unit as a suffix (``_deg``,
``_dB``, ``_mA``, ...). A config may name a ``preset`` and override any subset
of its fields. Conversion to SI units and radians happens once, in
:func:`parse_config`.
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

PRESET_DIR_ENV = "SLIPT_PRESET_DIR"
DEFAULT_PRESET = "paper-sec5"
POLICY_NAMES = ("ts", "tsbo", "baseline")


class ConfigError(ValueError):
    """Raised for unreadable or schema-invalid configs; ``path`` locates the field."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


_pos = {"type": "number", "exclusiveMinimum": 0}
_nonneg = {"type": "number", "minimum": 0}
_deg_list = {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0, "maximum": 90}, "minItems": 1}
_path = {"type": ["string", "null"]}

SCHEMA: dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "preset": {"type": "string"},
        "distance_m": _pos,
        "neighbor_offset_m": _nonneg,
        "num_neighbors": {"type": "integer", "minimum": 0},
        "half_luminance_angle_deg": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 90},
        "led_conversion_gain_w_per_a": _pos,
        "detector_area_m2": _pos,
        "optical_filter_gain": _nonneg,
        "refractive_index": {"type": "number", "minimum": 1},
        "fov_settings_deg": _deg_list,
        "responsivity_a_per_w": _pos,
        "noise_power_a2": _pos,
        "fill_factor": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "thermal_voltage_v": _pos,
        "dark_saturation_current_a": _pos,
        "bias_low_mA": _nonneg,
        "bias_high_mA": _pos,
        "neighbor_amplitude_mA": _nonneg,
        "neighbor_bias_mA": _nonneg,
        "rate_threshold_bpshz": _nonneg,
        # null means no SINR requirement
        "sinr_threshold_dB": {"type": ["number", "null"]},
        "baseline": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "amplitude_mA": _nonneg,
                "bias_mA": _nonneg,
                "time_fraction": {"type": "number", "minimum": 0, "maximum": 1},
                "fov_deg": _deg_list,
            },
            "required": ["amplitude_mA", "bias_mA", "time_fraction", "fov_deg"],
        },
        "policies": {"type": "array", "items": {"enum": list(POLICY_NAMES)}, "minItems": 1, "uniqueItems": True},
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "rth_values": {"type": "array", "items": _nonneg},
                "n_values": {"type": "array", "items": {"type": "integer", "minimum": 0}},
            },
            "required": ["rth_values", "n_values"],
        },
        "oracle_grid": {"type": "integer", "minimum": 2},
        "tsbo_grid_points": {"type": "integer", "minimum": 2},
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"csv": _path, "json": _path, "plot_data_dir": _path},
        },
    },
}
SCHEMA["required"] = sorted(set(SCHEMA["properties"]) - {"preset"})


@dataclass(frozen=True)
class ScenarioConfig:
    """A validated config in SI units and radians."""

    preset: str | None
    distance: float
    neighbor_offset: float
    num_neighbors: int
    half_luminance_angle: float
    led_conversion_gain: float
    detector_area: float
    optical_filter_gain: float
    refractive_index: float
    fov_settings: tuple[float, ...]
    responsivity: float
    noise_power: float
    fill_factor: float
    thermal_voltage: float
    dark_saturation_current: float
    bias_low: float
    bias_high: float
    neighbor_amplitude: float
    neighbor_bias: float
    rate_threshold: float
    sinr_threshold_linear: float
    baseline_amplitude: float
    baseline_bias: float
    baseline_time_fraction: float
    baseline_fovs: tuple[float, ...]
    policies: tuple[str, ...]
    rth_values: tuple[float, ...]
    n_values: tuple[int, ...]
    oracle_grid: int = 400
    tsbo_grid_points: int = 2048
    csv_path: str | None = None
    json_path: str | None = None
    plot_data_dir: str | None = None
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def digest(self) -> str:
        """SHA-256 of the merged human-unit config, independent of key order."""
        blob = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def preset_dirs() -> list[Path]:
    dirs = []
    env = os.environ.get(PRESET_DIR_ENV)
    if env:
        dirs.append(Path(env))
    dirs.append(Path(str(resources.files("slipt") / "presets")))
    return dirs


def available_presets() -> list[str]:
    names = set()
    for d in preset_dirs():
        if d.is_dir():
            names.update(p.stem for p in d.glob("*.json"))
    return sorted(names)


def load_preset(name: str) -> dict:
    for d in preset_dirs():
        path = d / f"{name}.json"
        if path.is_file():
            try:
                return json.loads(path.read_text(encoding="utf-8"))
            except json.JSONDecodeError as exc:
                raise ConfigError(f"preset {name!r} is not valid JSON: {exc}") from exc
    raise ConfigError(f"unknown preset {name!r} (available: {', '.join(available_presets()) or 'none'})",
                      "preset")


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def resolve(raw: dict, preset: str | None = None) -> dict:
    """Merge ``raw`` over its preset and validate against :data:`SCHEMA`.

    ``preset`` takes precedence over a ``preset`` key inside ``raw``.
    """
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    name = preset or raw.get("preset")
    merged = _merge(load_preset(name), raw) if name else copy.deepcopy(raw)
    if name:
        merged["preset"] = name
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(merged), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = ".".join(str(p) for p in err.absolute_path) or "<root>"
        raise ConfigError(err.message, path)
    return merged


def _mA(value: float) -> float:
    return value * 1e-3


def parse_config(raw: dict, preset: str | None = None) -> ScenarioConfig:
    merged = resolve(raw, preset)
    fovs = sorted(merged["fov_settings_deg"])
    if len(set(fovs)) != len(fovs):
        raise ConfigError("FOV settings must be distinct", "fov_settings_deg")
    for i, deg in enumerate(merged["baseline"]["fov_deg"]):
        if deg not in fovs:
            raise ConfigError(f"{deg} deg is not one of the receiver FOV settings", f"baseline.fov_deg.{i}")
    if merged["bias_low_mA"] >= merged["bias_high_mA"]:
        raise ConfigError("must be below bias_high_mA", "bias_low_mA")
    sinr_db = merged["sinr_threshold_dB"]
    out = merged["output"]
    return ScenarioConfig(
        preset=merged.get("preset"),
        distance=float(merged["distance_m"]),
        neighbor_offset=float(merged["neighbor_offset_m"]),
        num_neighbors=int(merged["num_neighbors"]),
        half_luminance_angle=math.radians(merged["half_luminance_angle_deg"]),
        led_conversion_gain=float(merged["led_conversion_gain_w_per_a"]),
        detector_area=float(merged["detector_area_m2"]),
        optical_filter_gain=float(merged["optical_filter_gain"]),
        refractive_index=float(merged["refractive_index"]),
        fov_settings=tuple(math.radians(d) for d in fovs),
        responsivity=float(merged["responsivity_a_per_w"]),
        noise_power=float(merged["noise_power_a2"]),
        fill_factor=float(merged["fill_factor"]),
        thermal_voltage=float(merged["thermal_voltage_v"]),
        dark_saturation_current=float(merged["dark_saturation_current_a"]),
        bias_low=_mA(merged["bias_low_mA"]),
        bias_high=_mA(merged["bias_high_mA"]),
        neighbor_amplitude=_mA(merged["neighbor_amplitude_mA"]),
        neighbor_bias=_mA(merged["neighbor_bias_mA"]),
        rate_threshold=float(merged["rate_threshold_bpshz"]),
        sinr_threshold_linear=0.0 if sinr_db is None else 10.0 ** (sinr_db / 10.0),
        baseline_amplitude=_mA(merged["baseline"]["amplitude_mA"]),
        baseline_bias=_mA(merged["baseline"]["bias_mA"]),
        baseline_time_fraction=float(merged["baseline"]["time_fraction"]),
        baseline_fovs=tuple(math.radians(d) for d in merged["baseline"]["fov_deg"]),
        policies=tuple(merged["policies"]),
        rth_values=tuple(float(r) for r in merged["sweep"]["rth_values"]),
        n_values=tuple(int(n) for n in merged["sweep"]["n_values"]),
        oracle_grid=int(merged["oracle_grid"]),
        tsbo_grid_points=int(merged["tsbo_grid_points"]),
        csv_path=out.get("csv"),
        json_path=out.get("json"),
        plot_data_dir=out.get("plot_data_dir"),
        raw=merged,
    )


def load_config(path: str | os.PathLike | None = None, preset: str | None = None) -> ScenarioConfig:
    """Read a config file, or just a preset when ``path`` is None."""
    if path is None:
        return parse_config({}, preset or DEFAULT_PRESET)
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc.strerror or exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {p} (line {exc.lineno}): {exc.msg}") from exc
    return parse_config(raw, preset)

import json

import pytest

from slipt.config import ConfigError, available_presets, load_config, parse_config


def test_preset_units(paper_config):
    c = paper_config
    assert c.preset == "paper-sec5"
    assert c.bias_high == pytest.approx(12e-3) and c.neighbor_amplitude == pytest.approx(6e-3)
    assert c.sinr_threshold_linear == pytest.approx(10.0)
    assert c.fov_settings == pytest.approx((0.5235987755982988, 0.8726646259971648))
    assert c.half_luminance_angle == pytest.approx(1.0471975511965976)


def test_partial_override():
    c = parse_config({"preset": "paper-sec5", "num_neighbors": 4, "baseline": {"time_fraction": 0.3}})
    assert c.num_neighbors == 4
    assert c.baseline_time_fraction == 0.3 and c.baseline_amplitude == pytest.approx(6e-3)


def test_null_sinr_threshold():
    assert parse_config({"sinr_threshold_dB": None}, "paper-sec5").sinr_threshold_linear == 0.0


@pytest.mark.parametrize("raw, path", [
    ({"num_neighbors": -1}, "num_neighbors"),
    ({"baseline": {"amplitude_mA": "six"}}, "baseline.amplitude_mA"),
    ({"unknown_field": 1}, "<root>"),
    ({"policies": ["ts", "magic"]}, "policies.1"),
    ({"baseline": {"fov_deg": [40]}}, "baseline.fov_deg.0"),
    ({"bias_low_mA": 13}, "bias_low_mA"),
])
def test_schema_errors_carry_field_path(raw, path):
    with pytest.raises(ConfigError) as err:
        parse_config(raw, "paper-sec5")
    assert err.value.path == path


def test_missing_fields_without_preset():
    with pytest.raises(ConfigError):
        parse_config({"distance_m": 1.5})


def test_unknown_preset():
    with pytest.raises(ConfigError, match="unknown preset"):
        parse_config({"preset": "nope"})


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(bad)


def test_preset_dir_env(tmp_path, monkeypatch):
    (tmp_path / "custom.json").write_text(json.dumps({
        **json.loads(json.dumps(load_config().raw)), "num_neighbors": 7}))
    monkeypatch.setenv("SLIPT_PRESET_DIR", str(tmp_path))
    assert "custom" in available_presets() and "paper-sec5" in available_presets()
    assert load_config(preset="custom").num_neighbors == 7


def test_digest_ignores_key_order():
    a = parse_config({"num_neighbors": 2, "rate_threshold_bpshz": 3}, "paper-sec5")
    b = parse_config({"rate_threshold_bpshz": 3, "num_neighbors": 2}, "paper-sec5")
    assert a.digest == b.digest
    assert a.digest != parse_config({}, "paper-sec5").digest

import math

import pytest
from hypothesis import given, strategies as st

from slipt.channel import geometry_from_ceiling_layout
from slipt.linkmodel import (NoiseModel, OperatingPoint, aggregate_interference, interference_dc,
                             interference_power, rate_lower_bound, sinr, within_clipping)


@pytest.fixture(scope="module")
def neighbor():
    return geometry_from_ceiling_layout(1.5, 1.5)


def test_interference_power_single_neighbor(rx, led, neighbor):
    agg = aggregate_interference([(neighbor, 6e-3, 6e-3)], rx, led, 1)
    assert agg.electrical_power == pytest.approx(6.78e-8, rel=0.01)
    assert agg.dc_current == pytest.approx(2.604e-4, rel=0.01)
    narrow = aggregate_interference([(neighbor, 6e-3, 6e-3)], rx, led, 0)
    assert narrow.electrical_power == 0.0 and narrow.dc_current == 0.0


def test_interference_empty(rx, led):
    assert interference_power([], rx, led) == 0.0
    assert interference_dc([], rx, led) == 0.0


def test_interference_dc_linear_in_count(rx, led, neighbor):
    one = aggregate_interference([(neighbor, 6e-3, 6e-3)], rx, led, 1).dc_current
    five = aggregate_interference([(neighbor, 6e-3, 6e-3)] * 5, rx, led, 1).dc_current
    assert five == pytest.approx(5 * one, rel=1e-12)


@given(n=st.integers(0, 20))
def test_interference_monotone_in_count(rx, led, n):
    pairs = [(5e-3, 6e-3)] * n
    assert interference_power(pairs + [(5e-3, 6e-3)], rx, led) >= interference_power(pairs, rx, led)
    assert interference_dc(pairs + [(5e-3, 6e-3)], rx, led) >= interference_dc(pairs, rx, led)


def test_sinr_paper_link(paper_scenario):
    s = paper_scenario
    g = sinr(6e-3, s.gain(0), s.led, s.rx, 0.0, s.noise)
    assert g == pytest.approx(5.976e9, rel=1e-3)
    assert sinr(0.0, s.gain(0), s.led, s.rx, 0.0, s.noise) == 0.0
    assert sinr(12e-3, s.gain(0), s.led, s.rx, 0.0, s.noise) == pytest.approx(4 * g, rel=1e-12)


def test_rate_lower_bound():
    assert rate_lower_bound(0.0, 1e9) == 0.0
    assert rate_lower_bound(1.0, 2 * math.pi / math.e) == pytest.approx(1.0, rel=1e-12)
    assert rate_lower_bound(0.2239, 5.976e9) == pytest.approx(7.00, abs=0.01)


@given(t=st.floats(0, 1), g1=st.floats(1e-6, 1e12), g2=st.floats(1e-6, 1e12))
def test_rate_linear_in_t_increasing_in_sinr(t, g1, g2):
    assert rate_lower_bound(t, g1) == pytest.approx(t * rate_lower_bound(1.0, g1), rel=1e-12, abs=1e-300)
    lo, hi = sorted((g1, g2))
    if hi > lo * (1 + 1e-9) and t > 1e-6:
        assert rate_lower_bound(t, hi) > rate_lower_bound(t, lo)


def test_fov_tradeoff(paper_scenario):
    s = paper_scenario
    assert s.gain(1) < s.gain(0)
    assert s.interference(1).electrical_power > s.interference(0).electrical_power
    assert s.interference(1).dc_current > s.interference(0).dc_current


def test_clipping_constraint():
    assert within_clipping(6e-3, 6e-3, 0.0, 12e-3)
    assert within_clipping(1e-3, 11e-3, 0.0, 12e-3)
    assert not within_clipping(2e-3, 11e-3, 0.0, 12e-3)
    assert not within_clipping(1e-3, 0.5e-3, 0.0, 12e-3)
    assert not within_clipping(0.0, 13e-3, 0.0, 12e-3)


def test_type_invariants():
    with pytest.raises(ValueError):
        NoiseModel(0.0)
    with pytest.raises(ValueError):
        OperatingPoint(1e-3, 6e-3, 1.5, 0, 0)
    with pytest.raises(ValueError):
        OperatingPoint(-1e-3, 6e-3, 0.5, 0, 0)

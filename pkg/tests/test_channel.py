import math

import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from slipt.channel import (LedOptics, LinkGeometry, ReceiverOptics, channel_gain, concentrator_gain,
                           geometry_from_ceiling_layout, lambertian_order, radiant_intensity)

from conftest import deg


def test_lambertian_order_closed_forms():
    assert lambertian_order(deg(60)) == 1.0
    assert lambertian_order(deg(45)) == pytest.approx(2.0, rel=1e-14)
    assert lambertian_order(deg(30)) == pytest.approx(4.8188, abs=1e-4)


@pytest.mark.parametrize("angle", [0.0, -0.1, math.pi / 2, 2.0])
def test_lambertian_order_rejects_out_of_range(angle):
    with pytest.raises(ValueError):
        lambertian_order(angle)


def test_radiant_intensity_values():
    assert radiant_intensity(1.0, 0.0) == pytest.approx(1 / math.pi)
    assert radiant_intensity(1.0, deg(45)) == pytest.approx(0.22508, abs=1e-5)
    assert radiant_intensity(1.0, math.pi / 2) == pytest.approx(0.0, abs=1e-16)


@pytest.mark.parametrize("order", [0.5, 1.0, 2.0, 4.8188, 20.0])
def test_radiant_intensity_integrates_to_unit_power(order):
    # independent check: the pattern is normalized over the hemisphere
    total, _ = integrate.quad(lambda t: radiant_intensity(order, t) * 2 * math.pi * math.sin(t), 0, math.pi / 2)
    assert total == pytest.approx(1.0, rel=1e-9)


def test_concentrator_gain():
    assert concentrator_gain(deg(30), 0.0, 1.5) == pytest.approx(9.0)
    assert concentrator_gain(deg(50), deg(45), 1.5) == pytest.approx(3.8342, abs=1e-4)
    assert concentrator_gain(deg(30), deg(45), 1.5) == 0.0
    # boundary counts as inside
    assert concentrator_gain(deg(30), deg(30), 1.5) == pytest.approx(9.0)


def test_channel_gain_paper_link(paper_scenario):
    s = paper_scenario
    assert s.gain(0) == pytest.approx(0.050930, abs=1e-5)
    assert s.gain(1) == pytest.approx(0.021697, abs=1e-5)
    # h = (L_r/d^2)(1/pi) rho^2/sin^2(fov) with xi = 1 at nadir
    assert s.gain(0) == pytest.approx(0.04 / 2.25 / math.pi * 9.0, rel=1e-12)


def test_channel_gain_zero_outside_fov(rx, led):
    geom = geometry_from_ceiling_layout(1.5, 1.5)
    assert channel_gain(geom, rx, led, 0) == 0.0
    assert channel_gain(geom, rx, led, 1) == pytest.approx(5.4243e-3, rel=1e-4)


def test_channel_gain_bad_index(rx, led):
    with pytest.raises(IndexError):
        channel_gain(LinkGeometry(1.5, 0, 0), rx, led, 2)


def test_geometry_from_ceiling_layout():
    g = geometry_from_ceiling_layout(1.5, 0.0)
    assert (g.distance, g.irradiance_angle, g.incidence_angle) == (1.5, 0.0, 0.0)
    g = geometry_from_ceiling_layout(1.5, 1.5)
    assert g.distance == pytest.approx(2.1213, abs=1e-4)
    assert g.incidence_angle == pytest.approx(deg(45)) and g.irradiance_angle == g.incidence_angle
    g = geometry_from_ceiling_layout(1.5, 1e-4)
    assert g.distance == pytest.approx(1.5, abs=1e-8) and g.incidence_angle == pytest.approx(0, abs=1e-4)


@pytest.mark.parametrize("kwargs", [
    dict(fov_settings=()),
    dict(fov_settings=(deg(50), deg(30))),
    dict(fov_settings=(deg(30), deg(30))),
    dict(refractive_index=0.9),
    dict(detector_area=0.0),
    dict(responsivity=-1.0),
])
def test_receiver_invariants(kwargs):
    base = dict(detector_area=0.04, optical_filter_gain=1.0, refractive_index=1.5,
                fov_settings=(deg(30), deg(50)), responsivity=0.4)
    base.update(kwargs)
    with pytest.raises(ValueError):
        ReceiverOptics(**base)


def test_geometry_invariants():
    with pytest.raises(ValueError):
        LinkGeometry(0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        LinkGeometry(1.0, math.pi / 2, 0.0)
    with pytest.raises(ValueError):
        LedOptics(math.pi / 2, 20.0)


@given(d1=st.floats(0.1, 10), d2=st.floats(0.1, 10), off=st.floats(0, 1.4))
def test_gain_non_increasing_in_distance(rx, led, d1, d2, off):
    near, far = sorted((d1, d2))
    angle = math.atan(off)
    g_near = channel_gain(LinkGeometry(near, angle, angle), rx, led, 1)
    g_far = channel_gain(LinkGeometry(far, angle, angle), rx, led, 1)
    assert g_far <= g_near
    assert g_far >= 0


@given(psi=st.floats(0, 1.5))
def test_gain_zero_exactly_outside_fov(rx, led, psi):
    g = channel_gain(LinkGeometry(2.0, psi, psi), rx, led, 0)
    assert (g == 0.0) == (psi > rx.fov_settings[0])


def test_wider_fov_lowers_nadir_gain(paper_scenario):
    assert paper_scenario.gain(0) > paper_scenario.gain(1)

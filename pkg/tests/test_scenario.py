import dataclasses
import math

import pytest

from slipt.harvest import energy_tsbo
from slipt.optimizer import TS
from slipt.results import quantize
from slipt.scenario import (PolicySpec, build_scenario, crossover_neighbor_count, policy_specs,
                            sweep_neighbor_count, sweep_rate_threshold)


def test_build_scenario_paper(paper_scenario):
    s = paper_scenario
    assert s.num_neighbors == 1
    g, a, b = s.neighbors[0]
    assert g.distance == pytest.approx(2.1213, abs=1e-4)
    assert math.degrees(g.incidence_angle) == pytest.approx(45.0)
    assert (a, b) == (6e-3, 6e-3)
    assert s.geometry.distance == 1.5 and s.geometry.incidence_angle == 0.0


def test_build_scenario_no_neighbors(paper_config):
    s = build_scenario(dataclasses.replace(paper_config, num_neighbors=0))
    assert s.neighbors == ()
    for k in range(2):
        assert s.interference(k).electrical_power == 0.0 and s.interference(k).dc_current == 0.0


def test_build_scenario_identical_neighbors(paper_config):
    s = build_scenario(dataclasses.replace(paper_config, num_neighbors=4))
    assert len(s.neighbors) == 4 and len(set(s.neighbors)) == 1


def test_build_scenario_deterministic(paper_config):
    assert build_scenario(paper_config).serialize() == build_scenario(paper_config).serialize()


def test_rate_sweep_shape_and_trends(paper_config):
    specs = policy_specs(paper_config)
    assert [p.name for p in specs] == ["ts", "tsbo", "baseline-30", "baseline-50"]
    records = sweep_rate_threshold(paper_config, list(range(1, 11)), specs)
    assert len(records) == 40
    by = {(r.policy, r.axis_value): r for r in records}
    for r in range(1, 11):
        ts, bo = by["ts", r], by["tsbo", r]
        assert ts.feasible and bo.feasible and bo.energy_j >= ts.energy_j
        for base in ("baseline-30", "baseline-50"):
            if by[base, r].feasible:
                assert ts.energy_j > by[base, r].energy_j
    wide_ok = [r for r in range(1, 11) if by["baseline-50", r].feasible]
    narrow_ok = [r for r in range(1, 11) if by["baseline-30", r].feasible]
    assert max(wide_ok) < max(narrow_ok)
    assert records == sweep_rate_threshold(paper_config, list(range(1, 11)), specs)


def test_neighbor_sweep(paper_config):
    records = sweep_neighbor_count(paper_config, list(range(16)), ["ts", "tsbo"])
    for policy in ("ts", "tsbo"):
        rows = [r for r in records if r.policy == policy]
        assert [r.axis_value for r in rows] == list(range(16))
        n_star = crossover_neighbor_count(records, policy)
        assert n_star == 11
        small = [r for r in rows if r.axis_value < n_star]
        large = [r for r in rows if r.axis_value >= n_star]
        assert all(r.fov2_deg == pytest.approx(30) for r in small)
        assert len({r.energy_j for r in small}) == 1
        assert all(r.fov2_deg == pytest.approx(50) for r in large)
        assert all(b.energy_j > a.energy_j for a, b in zip(large, large[1:]))


def test_neighbor_sweep_zero_is_interference_free(paper_config):
    rec = sweep_neighbor_count(paper_config, [0], [PolicySpec("ts", TS)])[0]
    assert rec.feasible and rec.sinr_linear == pytest.approx(5.976e9, rel=1e-3)


def test_sweep_validation(paper_config):
    with pytest.raises(ValueError):
        sweep_rate_threshold(paper_config, [], ["ts"])
    with pytest.raises(ValueError):
        sweep_rate_threshold(paper_config, [-1.0], ["ts"])
    with pytest.raises(ValueError):
        sweep_neighbor_count(paper_config, [1.5], ["ts"])
    with pytest.raises(ValueError):
        sweep_rate_threshold(paper_config, [1.0], ["baseline"])


def test_records_self_consistent(paper_config):
    records = sweep_rate_threshold(paper_config, [1, 4, 7, 10], policy_specs(paper_config))
    records += sweep_neighbor_count(paper_config, [0, 3, 12], policy_specs(paper_config))
    for r in records:
        if not r.feasible:
            assert r.energy_j is None
            continue
        cfg = paper_config
        if r.axis_name == "n":
            cfg = dataclasses.replace(cfg, num_neighbors=r.axis_value)
        else:
            cfg = dataclasses.replace(cfg, rate_threshold=r.axis_value)
        s = build_scenario(cfg)
        k1, k2 = s.fov_index(math.radians(r.fov1_deg)), s.fov_index(math.radians(r.fov2_deg))
        report = energy_tsbo(r.T, r.B1_a, s.interference(k1).dc_current, s.gain(k1), s.phase2_dc(k2),
                             s.led, s.rx, s.cell)
        assert report.total_energy == pytest.approx(r.energy_j, rel=1e-12)
        assert quantize(quantize(r)) == quantize(r)

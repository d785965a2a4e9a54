import json
import math

import numpy as np
import pytest

import syncnet

EXAMPLE4 = {"n": 3, "edges": [[3, 1, 1.0], [3, 2, 1.0]]}


def test_laplacian_and_tree():
    L = syncnet.laplacian(EXAMPLE4)
    assert L.shape == (3, 3)
    np.testing.assert_allclose(L @ np.ones(3), 0.0, atol=1e-15)
    assert L[2, 2] == 2.0
    assert not syncnet.has_spanning_tree(EXAMPLE4)
    assert syncnet.has_spanning_tree({"n": 2, "edges": [[2, 1, 1.0]]})


def test_analyze_graph_kernel_vectors():
    report = syncnet.analyze_graph(EXAMPLE4)
    assert [r["nodes"] for r in report["reaches"]] == [[1, 3], [2, 3]]
    np.testing.assert_allclose(report["reaches"][0]["gamma"], [1.0, 0.0, 0.5], atol=1e-9)
    assert report["zero_alg_mult"] == report["zero_geo_mult"] == 2


def test_linear_algebra_helpers():
    assert syncnet.rank(np.eye(3)) == 3
    np.testing.assert_allclose(syncnet.expm(np.zeros((2, 2))), np.eye(2))
    ups, xi = syncnet.exp_growth_bound(np.diag([-1.0, -2.0]))
    assert ups == pytest.approx(1.0)
    assert xi == pytest.approx(-1.0)
    assert syncnet.observability_rank(np.array([[1.0, 0.0]]), np.array([[0.0, 1.0], [0.0, 0.0]])) == 2


def test_presets_round_trip():
    names = syncnet.preset_names()
    assert "example5-positive" in names
    scenario = syncnet.preset("two-agent-integrator")
    assert scenario["expected"] == "sync"
    with pytest.raises(syncnet.InputError):
        syncnet.preset("nope")


def test_two_agent_rate():
    scenario = syncnet.preset("two-agent-integrator")
    scenario["x0"] = [1.0, -1.0]
    tr = syncnet.simulate(scenario, dt=0.01)
    assert not tr.diverged
    k = int(np.argmin(np.abs(tr.times - 1.0)))
    assert tr.pairwise_deviation()[k] == pytest.approx(2.0 * math.exp(-2.0), abs=1e-6)
    assert tr.switch_events == [(0.0, 1)]


def test_divergence_returns_partial_trajectory():
    tr = syncnet.simulate("example5-positive", seed=1)
    assert tr.diverged
    assert tr.times[-1] < 30.0


def test_check_condition():
    report = syncnet.check_condition("two-agent-integrator", gamma=0.2)
    assert report["satisfied"] is True
    bad = syncnet.check_condition("example4")
    assert bad["satisfied"] is False
    with pytest.raises(syncnet.InputError):
        syncnet.check_condition("example7-vanderpol")


def test_malformed_json_is_an_input_error():
    with pytest.raises(syncnet.InputError, match="malformed JSON"):
        syncnet.check_condition("{\"graphs\": [")
    with pytest.raises(syncnet.SyncnetError):
        syncnet.laplacian({"n": 2, "edges": [[1, 1, 1.0]]})


def test_render_svg():
    svg = syncnet.render_svg([("a", [0.0, 1.0], [1.0, 0.1])], [0.5], "t")
    assert svg.count("<polyline") == 1
    assert 'viewBox="0 0 960 540"' in svg
    json.dumps(svg)

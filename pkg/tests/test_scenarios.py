"""Built-in scenarios, YAML round-trips, result files."""
import json
import math

import numpy as np
import pytest

from fairband import (
    BUILTIN_NAMES,
    OptimizerPolicy,
    ScenarioError,
    builtin,
    load_scenario,
    run,
    save_result,
    save_scenario,
)
from fairband.scenarios import SCENARIO_FORMAT, Scenario


def test_all_builtins_compile():
    for name in BUILTIN_NAMES:
        net = builtin(name, seed=3).to_network()
        assert net.n_clients > 0 and net.n_vaps > 0
    with pytest.raises(ScenarioError):
        builtin("line9")


def test_micro_shape():
    net = builtin("micro").to_network()
    assert net.n_vaps == 2 and net.n_clients == 3 and net.n_channels == 2


def test_line3_shapes():
    net1 = builtin("line3-1ch").to_network()
    net2 = builtin("line3-2ch").to_network()
    assert net1.n_channels == 1 and net2.n_channels == 2
    assert net1.n_clients == 16 and net1.n_vaps == 3
    xs = [c.position[0] for c in net1.clients]
    assert xs == [40.0 + 5.0 * i for i in range(16)]


def test_grid16_shape_and_weights():
    net = builtin("grid16-weighted", seed=1).to_network()
    assert net.n_vaps == 32  # 16 dual-radio APs
    assert net.n_clients == 50
    assert net.n_channels == 7
    # west-side clients carry weight 1.5, east-side 0.5
    for cl in net.clients:
        assert cl.weight == (1.5 if cl.position[0] <= 300.0 else 0.5)


def test_grid16_positions_identical_across_weightings():
    a = builtin("grid16-unweighted", seed=42).to_network()
    b = builtin("grid16-weighted", seed=42).to_network()
    assert [c.position for c in a.clients] == [c.position for c in b.clients]
    assert [c.weight for c in a.clients] != [c.weight for c in b.clients]


def test_grid16_draws_depend_on_seed():
    a = builtin("grid16-unweighted", seed=1).to_network()
    b = builtin("grid16-unweighted", seed=2).to_network()
    assert [c.position for c in a.clients] != [c.position for c in b.clients]


def test_grid16_clients_always_reachable():
    # worst case is a region-center client 212 m from the nearest AP; every
    # channel in the sub-GHz plan reaches past 300 m
    for seed in range(5):
        net = builtin("grid16-unweighted", seed=seed).to_network()
        assert (net.rates.max(axis=(1, 2)) > 0).all()
        assert ((net.rates > 0).all(axis=2).any(axis=1)).all()


def test_region_scenario_requires_seed():
    s = builtin("grid16-unweighted")
    with pytest.raises(ScenarioError):
        Scenario(
            name="x", channels=s.channels, aps=s.aps, regions=s.regions, seed=None
        )
    with pytest.raises(ScenarioError):
        Scenario(name="x", channels=s.channels, aps=s.aps)  # neither clients nor regions


def test_reseeded_changes_only_region_draws():
    s = builtin("grid16-unweighted", seed=1)
    assert s.reseeded(2).seed == 2
    micro = builtin("micro")
    assert micro.reseeded(99) is micro  # explicit clients: no-op


def test_yaml_round_trip(tmp_path):
    path = tmp_path / "scn.yaml"
    original = builtin("micro")
    save_scenario(path, original)
    loaded = load_scenario(path)
    assert loaded.digest() == original.digest()
    a = original.to_network()
    b = loaded.to_network()
    assert (a.rates == b.rates).all()
    assert a.vap_ids == b.vap_ids


def test_yaml_round_trip_with_regions(tmp_path):
    path = tmp_path / "grid.yaml"
    original = builtin("grid16-weighted", seed=9)
    save_scenario(path, original)
    loaded = load_scenario(path)
    assert loaded.digest() == original.digest()
    assert [c.position for c in loaded.materialize_clients()] == [
        c.position for c in original.materialize_clients()
    ]


def test_yaml_error_diagnostics(tmp_path):
    p = tmp_path / "bad.yaml"

    p.write_text("name: x\n")
    with pytest.raises(ScenarioError, match="format"):
        load_scenario(p)

    p.write_text(f"format: {SCENARIO_FORMAT}\nname: x\nchannels:\n  - id: a\n")
    with pytest.raises(ScenarioError, match=r"channels\[0\]"):
        load_scenario(p)

    p.write_text(
        f"format: {SCENARIO_FORMAT}\nname: x\n"
        "channels:\n  - {id: a, center_frequency_mhz: 600, bandwidth_mhz: 6}\n"
        "aps:\n  - {id: ap0, position: [0, 0, 0]}\n"
    )
    with pytest.raises(ScenarioError, match=r"aps\[0\].position"):
        load_scenario(p)

    p.write_text(
        f"format: {SCENARIO_FORMAT}\nname: x\n"
        "channels:\n  - {id: a, center_frequency_mhz: 600, bandwidth_mhz: 6}\n"
        "aps:\n  - {id: ap0, position: [0, 0]}\n"
        "regions:\n  - {count: -3, rect: [0, 0, 1, 1]}\n"
    )
    with pytest.raises(ScenarioError, match=r"regions\[0\].count"):
        load_scenario(p)


def test_scenario_digest_tracks_content():
    a = builtin("grid16-unweighted", seed=1)
    b = builtin("grid16-unweighted", seed=2)
    c = builtin("grid16-weighted", seed=1)
    assert len({a.digest(), b.digest(), c.digest()}) == 3
    assert a.digest() == builtin("grid16-unweighted", seed=1).digest()


def test_save_result_json_is_finite(tmp_path):
    res = run(builtin("micro"), OptimizerPolicy(kind="greedy", iterations=50, seed=0))
    out = tmp_path / "res.json"
    save_result(out, res)
    payload = json.loads(out.read_text())
    assert payload["feasible"] is True
    assert isinstance(payload["final_energy"], float)
    assert set(payload["configuration"]) == {"association", "channel"}
    assert "Infinity" not in out.read_text()
    assert math.isfinite(payload["final_weighted_throughput"])

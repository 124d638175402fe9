import json
import math

import numpy as np
import pytest
from fastapi.testclient import TestClient

import qpd.cluster
from qpd import backends, cli, game, qsim, verify
from qpd.service import create_app


@pytest.fixture(scope="module")
def client(calibration):
    app = create_app(calibration=calibration)
    with TestClient(app, raise_server_exceptions=False) as c:
        yield c


# ---------------------------------------------------------------------------
# verification suite


def test_run_verify_passes_and_persists(tmp_path):
    out = tmp_path / "calibration.json"
    ok, report = verify.run_verify(calibration_out=out)
    assert ok
    assert all(c["ok"] for c in report["checks"])
    row_checks = [c for c in report["checks"] if c["name"].startswith("row ")]
    assert len(row_checks) == 10
    for c in row_checks:
        assert "postselection 0.25" in c["detail"]
    loaded = verify.load_calibration(out)
    assert loaded.selected == qpd.cluster.ConventionConfig.from_json_dict(
        json.loads(out.read_text())["selected"]
    )


def test_run_verify_names_failing_row_on_corrupted_box(monkeypatch):
    # fault injection: a box resource with one amplitude sign flipped
    good = qpd.cluster.box_cluster()

    def corrupted():
        amps = good.amplitudes.copy()
        amps[5] = -amps[5]
        return qsim.PureState(4, amps)

    monkeypatch.setattr(qpd.cluster, "box_cluster", corrupted)
    ok, report = verify.run_verify()
    assert not ok
    failing = [c["name"] for c in report["checks"] if not c["ok"]]
    assert any(name.startswith("row ") for name in failing) or "calibration" in failing
    assert cli.main(["verify", "--calibration-out", "/dev/null"]) == 1


# ---------------------------------------------------------------------------
# CLI


def test_cli_verify_and_play(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.main(["verify", "--calibration-out", "calibration.json"]) == 0
    out = capsys.readouterr().out
    assert out.count("[PASS]") >= 13
    assert (tmp_path / "calibration.json").exists()

    assert cli.main(["play", "--a", "d", "--b", "d"]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["payoffs"] == {"a": pytest.approx(3), "b": pytest.approx(3)}
    assert result["postselection_probability"] is None

    assert cli.main([
        "play", "--a", "d", "--b", "d", "--backend", "box",
        "--shots", "5", "--seed", "1",
        "--calibration", "calibration.json",
    ]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["postselection_probability"] == pytest.approx(0.25, abs=1e-9)
    assert result["sampled_outcomes"] == ["cc"] * 5


def test_cli_surface_csv(tmp_path):
    out = tmp_path / "surface.csv"
    assert cli.main(["surface", "--steps", "2", "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "p_a,p_b,payoff_a,payoff_b"
    assert len(lines) == 5


def test_cli_nash(capsys):
    assert cli.main(["nash", "--steps", "21"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["equilibria"] == [
        {"p_a": 1.0, "p_b": 1.0, "payoff_a": pytest.approx(3), "payoff_b": pytest.approx(3)}
    ]


def test_cli_noise_csv(capsys):
    assert cli.main([
        "noise", "--profile", "d,d", "--sigmas", "0:0.4:0.2",
        "--method", "quadrature", "--samples", "12",
    ]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "sigma,gap_a,stderr_a,negativity"
    assert len(lines) == 4
    first = [float(v) for v in lines[1].split(",")]
    assert first[0] == 0.0 and abs(first[1]) <= 1e-9


def test_cli_mixed(capsys):
    assert cli.main(["mixed", "--x", "0.35"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert lines[0] == "x,payoff_a,payoff_b,ppt"
    x, pa, pb, ppt = lines[1].split(",")
    assert float(x) == 0.35 and 1 < float(pa) < 3 and ppt == "true"

    assert cli.main(["mixed", "--threshold"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert 0.28 <= data["separability_threshold"] <= 0.30


def test_strategy_text_parsing():
    assert backends.parse_strategy_text("q").name == "q"
    s = backends.parse_strategy_text("p:0.5")
    assert s.coordinates() == (0.5 * math.pi, 0.0)
    s = backends.parse_strategy_text("theta:1.0,phi:0.25")
    assert s.coordinates() == (1.0, 0.25)
    with pytest.raises(backends.BackendError):
        backends.parse_strategy_text("z")


# ---------------------------------------------------------------------------
# HTTP service


def test_health_and_strategies(client):
    health = client.get("/api/health")
    assert health.status_code == 200
    assert health.json()["status"] == "ok"
    strategies = client.get("/api/strategies").json()
    assert strategies["named"] == ["c", "d", "q", "m"]
    assert strategies["theta_range"] == [0.0, pytest.approx(math.pi)]
    assert strategies["phi_range"] == [0.0, pytest.approx(math.pi / 2)]


def test_play_endpoint_matches_library(client):
    resp = client.post("/api/play", json={
        "strategy_a": "d", "strategy_b": "d",
        "variant": "entangled", "backend": "circuit",
    })
    assert resp.status_code == 200
    body = resp.json()
    direct = backends.play_round(
        game.Strategy.named("d"), game.Strategy.named("d"),
        game.GameVariant.ENTANGLED, "circuit",
    )
    assert body["payoffs"] == direct.payoffs.to_json_dict()
    assert body["distribution"] == direct.distribution.to_json_dict()


def test_play_box_backend(client):
    resp = client.post("/api/play", json={
        "strategy_a": "d", "strategy_b": "d", "backend": "box",
    })
    assert resp.status_code == 200
    body = resp.json()
    assert body["postselection_probability"] == pytest.approx(0.25, abs=1e-9)
    assert body["payoffs"]["a"] == pytest.approx(3, abs=1e-9)


def test_play_classical_exploitation(client):
    resp = client.post("/api/play", json={
        "strategy_a": "c", "strategy_b": "d", "variant": "classical_limit",
    })
    assert resp.json()["payoffs"] == {"a": pytest.approx(0), "b": pytest.approx(5)}


def test_play_seeded_outcomes_reproducible(client):
    req = {"strategy_a": {"p": 0.5}, "strategy_b": "c", "shots": 8, "seed": 42}
    first = client.post("/api/play", json=req).json()["sampled_outcomes"]
    second = client.post("/api/play", json=req).json()["sampled_outcomes"]
    assert first == second
    direct = backends.play_round(
        backends.parse_strategy({"p": 0.5}), game.Strategy.named("c"),
        game.GameVariant.ENTANGLED, "circuit", shots=8, seed=42,
    )
    assert first == direct.sampled_outcomes


def test_play_invalid_combination_is_400(client):
    resp = client.post("/api/play", json={
        "strategy_a": "m", "strategy_b": "c", "backend": "wafer",
    })
    assert resp.status_code == 400
    assert "error" in resp.json()
    resp = client.post("/api/play", json={
        "strategy_a": "d", "strategy_b": "d", "backend": "box",
        "variant": "separable",
    })
    assert resp.status_code == 400


def test_play_out_of_range_is_422(client):
    resp = client.post("/api/play", json={
        "strategy_a": {"theta": 9.0, "phi": 0.0}, "strategy_b": "c",
    })
    assert resp.status_code == 422
    assert "error" in resp.json()
    resp = client.post("/api/play", json={
        "strategy_a": {"p": 2.0}, "strategy_b": "c",
    })
    assert resp.status_code == 422


def test_surface_endpoint(client):
    resp = client.get("/api/surface", params={"steps": 3, "variant": "entangled"})
    body = resp.json()
    assert body["steps"] == 3
    assert len(body["rows"]) == 9
    corner = [r for r in body["rows"] if r[0] == 1.0 and r[1] == 1.0][0]
    assert corner[2] == pytest.approx(3, abs=1e-9)


def test_noise_endpoint_zero_gap(client):
    resp = client.post("/api/noise", json={
        "strategy_a": "d", "strategy_b": "d", "sigma": 0.0,
        "method": "quadrature", "num_samples": 8,
    })
    body = resp.json()
    assert body["ideal_payoff_a"] == pytest.approx(3)
    point = body["points"][0]
    assert point["sigma"] == 0.0
    assert abs(point["gap_a"]) <= 1e-9


def test_mixed_endpoint(client):
    resp = client.post("/api/mixed", json={"x": 0.35})
    body = resp.json()
    assert body["ppt"] is True
    assert 1 < body["payoffs"]["a"] < 3
    resp = client.post("/api/mixed", json={"x": 0.9})
    assert resp.status_code == 422


def test_statelessness_under_interleaving(client):
    play_req = {"strategy_a": "d", "strategy_b": "q"}
    baseline = client.post("/api/play", json=play_req).json()
    client.post("/api/mixed", json={"x": 0.4})
    client.get("/api/surface", params={"steps": 2})
    client.post("/api/play", json={"strategy_a": "c", "strategy_b": "c"})
    assert client.post("/api/play", json=play_req).json() == baseline

import json
import math

import numpy as np
import pytest

import busgate


def test_estimates():
    assert busgate.optimal_coupling_estimate(8) == pytest.approx(0.7424, abs=1e-4)
    assert busgate.transfer_time_estimate(100) == pytest.approx(27.41, abs=1e-2)


def test_three_site_transfer():
    t = math.pi / (2 * math.sqrt(2))
    assert abs(busgate.transfer_amplitude(1, 1.0, t)) == pytest.approx(1.0, abs=1e-9)


def test_gate_run_n8():
    opt = busgate.optimize(8)
    r = busgate.run_gate(8, opt.j0_opt, [0.0, opt.t_opt])
    g = busgate.ideal_gate(8, r["parity_p"])
    assert r["F_G"][0] == pytest.approx((abs(np.trace(g)) ** 2 + 4) / 20, abs=1e-12)
    assert r["F_G"][1] == pytest.approx(0.984, abs=0.005)
    assert r["F_M"][1] == pytest.approx(0.966, abs=0.005)
    assert busgate.average_gate_fidelity(r["maps"][1], g) == pytest.approx(r["F_G"][1], abs=1e-12)


def test_channel_formula():
    rng = np.random.default_rng(3)
    z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    u, _ = np.linalg.qr(z)
    g = busgate.ideal_gate(8, 4)
    expect = (abs(np.trace(g.conj().T @ u)) ** 2 + 4) / 20
    assert busgate.average_gate_fidelity(busgate.unitary_channel(u), g) == pytest.approx(expect, abs=1e-12)


def test_concurrence_bell():
    bell = np.zeros(4, complex)
    bell[0] = bell[3] = 1 / math.sqrt(2)
    assert busgate.concurrence(np.outer(bell, bell.conj())) == pytest.approx(1.0, abs=1e-7)


def test_scenario_roundtrip():
    r = busgate.run_scenario(json.dumps({"kind": "gate", "n_bus": 6, "t_end": 4.0, "dt": 1.0}))
    assert r["engine"] == "ffq"
    first = r["tables"][0]
    assert first["columns"] == ["t", "F_G", "F_M"]
    assert len(first["rows"]) >= 5


def test_errors():
    with pytest.raises(busgate.ConfigError, match="unknown key"):
        busgate.run_scenario(json.dumps({"kind": "gate", "n_bus": 6, "colour": 1}))
    with pytest.raises(busgate.ConfigError, match="ffq requires"):
        busgate.run_gate(6, 0.7, [1.0], lam=0.2, engine="ffq")

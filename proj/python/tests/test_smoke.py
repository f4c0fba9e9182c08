import pathlib

import numpy as np
import pytest

import dikin

PRESETS = pathlib.Path(__file__).resolve().parents[2] / "presets"

BOX = {
    "version": 1,
    "dimension": 2,
    "constraints": [
        {"type": "linear", "A": [[1, 0], [0, 1], [-1, 0], [0, -1]], "b": [0, 0, -1, -1]}
    ],
}


def test_sample_box_moments():
    xs, report = dikin.sample(BOX, 20000, seed=3)
    assert xs.shape == (20000, 2)
    assert np.all((xs > 0) & (xs < 1))
    assert abs(xs.mean() - 0.5) < 0.05
    assert report["nu"] == 4.0
    assert report["trace"][-1]["phase"] == 4


def test_sample_is_deterministic():
    a, _ = dikin.sample(BOX, 100, seed=5)
    b, _ = dikin.sample(BOX, 100, seed=5)
    assert np.array_equal(a, b)


def test_preset_file():
    xs, _ = dikin.sample(PRESETS / "psd_trace.json", 50)
    assert xs.shape == (50, 3)
    for x in xs:
        X = np.array([[x[0], x[1]], [x[1], x[2]]])
        assert np.linalg.eigvalsh(X).min() > 0
        assert np.trace(X) < 1


def test_parse_error():
    with pytest.raises(ValueError, match="/dimension"):
        dikin.sample({"version": 1}, 10)


def test_leverage_and_lewis():
    rng = np.random.default_rng(0)
    M = rng.standard_normal((20, 4))
    sigma = dikin.leverage_scores(M)
    expect = np.einsum("ij,jk,ik->i", M, np.linalg.inv(M.T @ M), M)
    assert np.allclose(sigma, expect, atol=1e-10)
    assert abs(dikin.lewis_weights(M, 4.0).sum() - 4) < 1e-8


def test_schedule_and_psd():
    assert dikin.sigma0_squared(2) == 1e-5 / 8
    sched = dikin.sigma_schedule(10.0, 2)
    assert sched[-1][1] > 10.0
    X = np.array([[2.0, 0.5], [0.5, 1.0]])
    H = np.array([[0.3, -0.1], [-0.1, 0.7]])
    h = dikin.svec(H)
    Xi = np.linalg.inv(X)
    assert np.isclose(h @ dikin.psd_hessian(X) @ h, np.trace(Xi @ H @ Xi @ H))


def test_certify_and_cli():
    rows = dikin.certify("log", points=5)
    assert rows and all(r["passed"] for r in rows)
    code, out, _ = dikin.run_cli(["certify", "--barrier", "ellipsoid", "--n", "5"])
    assert code == 0 and "ellipsoid,ssc" in out
    code, _, _ = dikin.run_cli(["sample", "--lazy", "0.7"])
    assert code == 2

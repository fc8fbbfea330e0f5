import math

import numpy as np
import pytest

import cod


def test_two_term_deviation():
    t = np.linspace(0.0, 1.0, 1001)
    run = cod.oscillator_solve(1.0 - 0.5 * np.sin(t), 0.0, 1.0, tol=1e-12)
    assert run["stop_reason"] == "converged"
    two_term = 1.0 - 0.5 * (t**2 - t + np.sin(t))
    assert np.max(np.abs(run["f"] - two_term)) <= 0.0273
    assert np.allclose(run["t"], t)


def test_unit_frequency_gives_cosine_and_matches_rk4():
    t = np.linspace(0.0, 1.0, 10001)
    run = cod.oscillator_solve(np.ones_like(t), 0.0, 1.0, tol=1e-10)
    assert run["terms_used"] <= 12
    assert np.max(np.abs(run["f"] - np.cos(t))) <= 1e-8
    ref = cod.rk4_oscillator(lambda s: 1.0, 1.0, 0.0, 0.0, 1.0, 101)
    assert ref["error_estimate"] <= 1e-9
    assert np.max(np.abs(ref["f"] - np.cos(ref["t"]))) <= 1e-9


def test_limits_off_grid_raise():
    with pytest.raises(ValueError):
        cod.oscillator_solve(np.ones(11), 0.0, 1.0, t_a=0.05)


def test_term_bound_and_power_series():
    assert cod.term_bound(1, 1.0, 1.0, 1.0) == pytest.approx(0.5)
    t = np.linspace(0.0, 1.0, 11)
    assert np.allclose(cod.power_series(0.0, 20, t), np.cosh(t), rtol=0, atol=1e-15)
    wide = np.linspace(0.01, 4.0, 50)
    for alpha in (0.0, 0.5, 1.0, 2.0):
        assert np.all(cod.power_series(alpha, 200, wide) < cod.upper_estimate(alpha, wide))
    assert cod.asymptotic_exponent(0.0, 3.0) == pytest.approx(3.0)


def test_exp_potential():
    m = 1.0
    lam = complex(1.0, m)
    assert abs(cod.resolvent_ratio(m, lam) - 1.0 / complex(1.0, 2.0 * m)) < 1e-15
    assert abs(cod.nested_inverse_partial(m, lam, 200) - cod.resolvent_ratio(m, lam)) < 1e-12
    assert cod.exp_residual() <= 1e-5
    x = np.array([-2.0, 0.0, 0.7])
    plane = cod.exp_potential(x, m=1.5, amplitude=0.0)
    assert np.allclose(plane, np.exp(1.5j * x), rtol=0, atol=1e-15)
    with pytest.raises(ValueError):
        cod.resolvent_ratio(1.0, 1j)


def test_stationary_resolvent_source():
    n, length = 64, 2.0 * math.pi
    x = np.arange(n) * length / n
    u = 0.1 * np.cos(x)
    src = np.exp(-4.0 * (x - math.pi) ** 2)
    run = cod.stationary_solve(u, length, energy=-1.0, variant="resolvent", source=src)
    assert run["stop_reason"] == "converged"
    assert run["defect_sup_norm"] <= 1e-10
    assert run["psi"].shape == (n,)


def test_stationary_2d_shape():
    n, length = 16, 2.0 * math.pi
    x = np.arange(n) * length / n
    u = 0.1 * np.cos(x)[:, None] * np.cos(x)[None, :]
    run = cod.stationary_solve(u, length)
    assert run["psi"].shape == (n, n)
    assert run["stop_reason"] == "converged"
    # G annihilates only the zero function here, so a source is required.
    with pytest.raises(ValueError):
        cod.stationary_solve(u, length, energy=-1.0, variant="resolvent")


def test_tdse_free_phase():
    n, length = 16, 2.0 * math.pi
    x = np.arange(n) * length / n
    psi0 = np.exp(1j * x)
    out = cod.tdse_propagate(psi0, length, dt=1e-2, t_final=1.0, terms=4)
    expected = psi0 / np.linalg.norm(psi0) * math.sqrt(n / length) * np.exp(-0.5j)
    expected *= np.abs(out["psi"][0]) / np.abs(expected[0])
    assert np.max(np.abs(out["psi"] - expected)) <= 1e-7
    assert out["max_drift"] <= 1e-10


def test_tdse_callables():
    n, length = 32, 2.0 * math.pi
    x = np.arange(n) * length / n
    out = cod.tdse_propagate(np.exp(-2.0 * (x - math.pi) ** 2), length, dt=1e-3, t_final=0.05,
                             potential=lambda x, t: 0.5 * math.cos(x), vector_potential=lambda t: 0.1 * t)
    assert len(out["norms"]) == 50
    assert out["max_drift"] <= 1e-8


def test_wave_standing_wave():
    n, length = 8, 2.0 * math.pi
    x = np.arange(n) * length / n
    out = cod.wave_solve(np.ones(n), np.sin(x), np.zeros(n), length, t_max=1.0, t_points=1001)
    assert out["stop_reason"] == "converged"
    t = out["t"][:, None]
    assert out["field"].shape == (1001, n)
    assert np.max(np.abs(out["field"] - np.sin(x)[None, :] * np.cos(t))) <= 1e-5


def test_format_double_round_trips():
    for v in (0.1, 1.0 / 3.0, 2.0**-1074, 1e300):
        assert float(cod.format_double(v)) == v
    assert cod.format_double(0.03) == "0.029999999999999999"


def test_quick_acceptance():
    results = cod.run_acceptance(quick=True, threads=2)
    assert [r["id"] for r in results] == list(range(1, 11))
    failed = [r for r in results if not r["passed"]]
    assert not failed, failed

import math

import pytest

import rindler_lab as rl


def test_frames_roundtrip_and_shift():
    f = rl.FrameSpec(1.0, 0.0, 1.0)
    T, X = rl.rindler_to_minkowski((math.asinh(1.0), 0.0), f)
    assert T == pytest.approx(1.0, rel=1e-14)
    assert X == pytest.approx(math.sqrt(2.0) - 1.0, rel=1e-14)
    t, x = rl.minkowski_to_rindler((T, X), f)
    assert t == pytest.approx(math.asinh(1.0), rel=1e-14)
    assert abs(x) < 1e-14

    shifted = rl.FrameSpec(1.0, 0.5, 1.0)
    assert rl.shift_rindler((2.0, 0.7), shifted) == pytest.approx((3.0, 0.2), rel=1e-14)
    assert rl.effective_acceleration(shifted) == pytest.approx(2.0 / 3.0)
    assert rl.proper_time_rate(shifted) == 1.5


def test_domain_errors_map_to_arithmetic_error():
    with pytest.raises(rl.NumericError):
        rl.FrameSpec(-1.0)
    with pytest.raises(ArithmeticError):
        rl.minkowski_to_rindler((2.0, 0.0), rl.FrameSpec(1.0))


def test_redshift():
    r = rl.run_redshift_experiment(1.0, 0.1, 1.0)
    assert abs(r.doppler_factor - 1.1) <= 2 * 0.1**2
    assert r.doppler_factor == pytest.approx(math.exp(r.detector_proper_time), rel=1e-10)


def test_hamiltonian_and_equilibrium():
    spec = rl.supported_clock([1.0], g=1.0, c=1.0, alpha=1.0, h_rel0=0.2)
    eq = rl.find_equilibrium(spec)
    assert eq.closed_form_X == pytest.approx(-1.2)
    assert eq.state.R == pytest.approx(-1.2, rel=1e-12)
    assert eq.residual < 1e-10

    state = rl.PhaseState(0.5, 0.0)
    assert rl.bracket_hamiltonian(rl.supported_clock([1.0], 1.0, 1.0, 0.0, 0.2), state) == pytest.approx(1.8)

    report = rl.check_expansion_consistency(spec.with_light_speed(10.0), rl.PhaseState(0.3, 0.5))
    assert report["passed"]
    assert report["fitted_exponent"] == pytest.approx(-4.0, abs=0.2)


def test_integrate_conserves_energy():
    spec = rl.supported_clock([0.6, 0.4], g=1.0, c=10.0, alpha=1.0, h_rel0=0.2)
    s0 = rl.PhaseState.constrained([0.6, 0.4], -0.5, 0.2, [0.05, -0.075], [0.02, -0.02])
    tr = rl.integrate(spec, s0, 0.01, 2000)
    assert len(tr["t"]) == 2001
    h0 = tr["H"][0]
    assert max(abs(h - h0) for h in tr["H"]) < 1e-9 * abs(h0)


def test_visibility():
    spectrum = rl.Spectrum([(0.0, 0.5), (1.0, 0.5)])
    cfg = rl.InterferometerConfig(duration=math.pi)
    assert rl.visibility(cfg, spectrum) <= 1e-15
    h = rl.harmonic_spectrum(8)
    cfg = rl.InterferometerConfig(duration=2.0)
    assert rl.visibility(cfg, h) == pytest.approx(rl.visibility_oracle(cfg, h), abs=1e-12)
    cfg.counter_coupling = 1.0
    assert rl.visibility(cfg, h) == 1.0
    with pytest.raises(rl.ConfigError):
        rl.Spectrum([(0.0, 0.7)])


def test_run_scenario_and_selfcheck():
    csv = rl.run_scenario("equilibrium", {"M": 1, "g": 1, "alpha": 1, "Hrel0": 0.2, "c": 1})
    assert csv.startswith("# rindler-lab ")
    assert "X_closed_form" in csv
    with pytest.raises(ValueError):
        rl.run_scenario("equilibrium", {"M": 1})
    results = rl.selfcheck()
    assert len(results) == 9
    assert all(passed for _, passed, _ in results)

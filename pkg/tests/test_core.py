import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spacswm import (
    ExperimentConfig,
    QubitState,
    abc_constants,
    config_for_weak_value,
    conventional_norm,
    final_meter_state,
    no_postselection_state,
    postselection_probability,
    weak_value_sigma_z,
)
from spacswm.core import postselected_amplitudes
from spacswm.errors import OrthogonalPostselection, PostselectionFailed
from spacswm.fock import FockVector, evolve_joint, inner, spacs

PI = math.pi
SEEDED = settings(max_examples=80, derandomize=True, deadline=None)
alphas = st.floats(0.0, 4.0)
lams = st.floats(0.0, 1.0)
angles = st.floats(0.0, 2 * PI)


def fig1(lam, theta_f, alpha=2.0):
    return ExperimentConfig(alpha, lam, PI / 2, theta_f, phi_i=PI, phi_f=0.0)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(-1.0, 0.1, 0, 0)
    with pytest.raises(ValueError):
        ExperimentConfig(1.0, -0.1, 0, 0)
    with pytest.raises(ValueError):
        ExperimentConfig(1.0, 0.1, math.nan, 0)


def test_phi0_is_difference():
    cfg = ExperimentConfig(1.0, 0.1, 1.0, 2.0, phi_i=0.9, phi_f=0.4)
    assert cfg.phi0 == pytest.approx(0.5)


def test_qubit_state_is_normalized():
    a = QubitState(1.3, 0.7).amplitudes()
    assert np.vdot(a, a).real == pytest.approx(1.0)


def test_weak_value_eigenstates():
    assert weak_value_sigma_z(QubitState(0), QubitState(0)) == pytest.approx(-1)
    assert weak_value_sigma_z(QubitState(PI), QubitState(PI)) == pytest.approx(1)


def test_weak_value_orthogonal_raises():
    with pytest.raises(OrthogonalPostselection):
        weak_value_sigma_z(QubitState(PI / 2, 0.0), QubitState(PI / 2, PI))


def test_equatorial_states_give_imaginary_weak_values():
    # theta_i = theta_f = pi/2 reach only w = i tan(phi0/2)
    for phi0 in (0.3, 1.0, 2.5):
        w = weak_value_sigma_z(QubitState(PI / 2, phi0), QubitState(PI / 2, 0.0))
        assert abs(w.real) < 1e-12
        assert w.imag == pytest.approx(math.tan(phi0 / 2))


@pytest.mark.parametrize("w", [1 + 1j, 1.0, 1j, -0.5 + 2j, 3.0, 0.0])
def test_config_for_weak_value_round_trip(w):
    cfg = config_for_weak_value(w, 2.0, 0.01)
    got = weak_value_sigma_z(cfg.psi_i, cfg.psi_f)
    assert abs(got - w) < 1e-12


def test_weak_value_one_plus_i_angles():
    cfg = config_for_weak_value(1 + 1j, 2.0, 0.01)
    assert cfg.theta_f == pytest.approx(2 * math.atan(math.sqrt(5)))
    assert cfg.phi0 == pytest.approx(cmath.phase(-1 + 2j))


def test_abc_bounds_example():
    k = abc_constants(ExperimentConfig(1.0, 0.1, PI / 2, 3 * PI / 2))
    assert (k.A, k.B, k.C, k.D, k.E) == pytest.approx((0.5, -0.5, 0.0, 0.5, 0.25))


@SEEDED
@given(angles, angles)
def test_abc_ranges(ti, tf):
    k = abc_constants(ExperimentConfig(1.0, 0.1, ti, tf))
    assert -1e-15 <= k.A <= 1 + 1e-15
    assert abs(k.B) <= 0.5 + 1e-15
    assert abs(k.C) <= 1 + 1e-15
    assert 0.5 - 1e-15 <= k.D <= 1 + 1e-15
    assert -1e-15 <= k.E <= 0.25 + 1e-15


def test_pf_identical_and_orthogonal_states():
    assert postselection_probability(ExperimentConfig(2.0, 0.0, PI / 2, PI / 2)) == pytest.approx(1.0)
    assert postselection_probability(ExperimentConfig(2.0, 0.0, PI / 2, PI / 2, phi_i=PI)) == pytest.approx(0.0, abs=1e-15)


def test_pf_fig1c_matches_oracle():
    cfg = fig1(0.1, 3 * PI / 2)
    assert postselection_probability(cfg) == pytest.approx(postselected_amplitudes(cfg).norm2(), abs=1e-10)
    assert postselection_probability(cfg) == pytest.approx(0.68596770542117569, rel=1e-12)


def test_pf_random_grid_matches_oracle():
    rng = np.random.Generator(np.random.Philox(11))
    for _ in range(1000):
        u = rng.random(7)
        cfg = ExperimentConfig(4 * u[0], u[1], 2 * PI * u[2], 2 * PI * u[3], 2 * PI * u[4],
                               2 * PI * u[5], 2 * PI * u[6])
        p = postselection_probability(cfg)
        assert 0.0 <= p <= 1.0
        assert abs(p - postselected_amplitudes(cfg).norm2()) < 1e-10


@SEEDED
@given(alphas, lams, angles, angles, angles)
def test_pf_periodic_in_theta_f(a, lam, ti, tf, phi0):
    cfg = ExperimentConfig(a, lam, ti, tf, phi_i=phi0)
    shifted = cfg.replace(theta_f=tf + 2 * PI)
    assert postselection_probability(cfg) == pytest.approx(postselection_probability(shifted), abs=1e-14)


@SEEDED
@given(alphas, lams, angles, angles, angles)
def test_pf_symmetric_under_polar_angle_swap(a, lam, ti, tf, phi0):
    cfg = ExperimentConfig(a, lam, ti, tf, phi_i=phi0)
    swapped = ExperimentConfig(a, lam, tf, ti, phi_i=phi0)
    assert postselection_probability(cfg) == pytest.approx(postselection_probability(swapped), abs=1e-14)
    assert postselected_amplitudes(swapped).norm2() == pytest.approx(
        postselected_amplitudes(cfg).norm2(), abs=1e-12)


@SEEDED
@given(alphas, angles, angles, angles)
def test_pf_phase_flip_symmetry_at_zero_coupling(a, ti, tf, phi0):
    cfg = ExperimentConfig(a, 0.0, ti, tf, phi_i=phi0)
    flipped = ExperimentConfig(a, 0.0, tf, ti, phi_i=-phi0)
    assert postselection_probability(cfg) == pytest.approx(postselection_probability(flipped), abs=1e-14)


def test_pf_phase_flip_is_not_a_symmetry_at_finite_coupling():
    cfg = ExperimentConfig(1.0, 0.5, 1.0, 2.0, phi_i=1.0)
    flipped = ExperimentConfig(1.0, 0.5, 2.0, 1.0, phi_i=-1.0)
    assert abs(postselection_probability(cfg) - postselection_probability(flipped)) > 1e-2


def test_final_state_at_zero_coupling_is_spacs():
    cfg = ExperimentConfig(2.0, 0.0, 1.0, 2.0, phi_i=0.4)
    v, p = final_meter_state(cfg)
    assert abs(inner(spacs(2.0, v.n_max), v)) == pytest.approx(1.0, abs=1e-12)


def test_final_state_matching_postselection():
    _, p = final_meter_state(ExperimentConfig(2.0, 0.0, 1.1, 1.1, phi_i=0.2, phi_f=0.2))
    assert p == pytest.approx(1.0, abs=1e-12)


def test_final_state_normalized_across_fig1_sweep():
    for tf in np.linspace(0, 2 * PI, 181):
        cfg = fig1(0.1, tf)
        if postselection_probability(cfg) <= 1e-9:
            continue
        v, p = final_meter_state(cfg)
        assert abs(v.norm2() - 1) < 1e-12
        assert abs(p - postselection_probability(cfg)) < 1e-10


def test_final_state_raises_when_postselection_impossible():
    with pytest.raises(PostselectionFailed):
        final_meter_state(ExperimentConfig(2.0, 0.0, PI / 2, PI / 2, phi_i=PI))


def test_conventional_norm_limits():
    assert conventional_norm(ExperimentConfig(2.0, 0.0, 1.2, 0.0)) == pytest.approx(1.0)
    assert conventional_norm(ExperimentConfig(2.0, 0.7, 0.0, 0.0)) == pytest.approx(1.0)


def test_no_postselection_state_limits():
    v, h = no_postselection_state(ExperimentConfig(2.0, 0.0, 1.2, 0.0))
    assert abs(inner(spacs(2.0, v.n_max), v)) == pytest.approx(1.0, abs=1e-12)
    cfg = ExperimentConfig(2.0, 0.3, 0.0, 0.0)
    v, h = no_postselection_state(cfg)
    g, _ = evolve_joint(cfg)
    assert abs(inner(g.normalized(), v)) == pytest.approx(1.0, abs=1e-12)


def _conventional_oracle(cfg):
    g, e = evolve_joint(cfg)
    wi = cfg.psi_i.amplitudes().conj()
    return FockVector(wi[0] * g.amps + wi[1] * e.amps).norm2()


def test_conventional_norm_matches_oracle_example():
    cfg = ExperimentConfig(2.0, 0.1, PI / 2, 0.0)
    assert conventional_norm(cfg) == pytest.approx(_conventional_oracle(cfg), abs=1e-10)


@SEEDED
@given(alphas, lams, angles, angles)
def test_conventional_norm_matches_oracle(a, lam, ti, phi_i):
    cfg = ExperimentConfig(a, lam, ti, 0.0, phi_i=phi_i)
    assert abs(conventional_norm(cfg) - _conventional_oracle(cfg)) < 1e-10


def test_printed_conventional_norm_deviates():
    cfg = ExperimentConfig(2.0, 0.1, PI / 2, 0.0)
    printed = conventional_norm(cfg, printed=True)
    assert abs(printed - _conventional_oracle(cfg)) > 1e-3
    # the two readings coincide when the coupling vanishes
    zero = cfg.replace(lam=0.0)
    assert conventional_norm(zero, printed=True) == pytest.approx(conventional_norm(zero))

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spacswm import ExperimentConfig
from spacswm.errors import DimensionMismatch, TruncationError
from spacswm.fock import (
    FockVector,
    apply_annihilation,
    apply_creation,
    coherent_state,
    default_n_max,
    evolve_joint,
    expect,
    inner,
    log_factorials,
    number_state,
    spacs,
)

SEEDED = settings(max_examples=60, derandomize=True, deadline=None)
alphas = st.floats(0.0, 4.0)
lams = st.floats(0.0, 1.0)
angles = st.floats(0.0, 2 * math.pi)


def test_default_truncation_rule():
    assert default_n_max(0.0) == 30
    assert default_n_max(2.0) == math.ceil(4 + 10 * math.sqrt(5) + 20)


def test_log_factorials_match_math():
    lf = log_factorials(200)
    assert lf[0] == 0.0
    for n in (1, 5, 50, 170, 200):
        assert lf[n] == pytest.approx(math.lgamma(n + 1), rel=1e-13)


def test_vacuum():
    v = coherent_state(0.0, 16)
    assert v.amps[0] == 1.0
    assert np.all(v.amps[1:] == 0.0)


def test_coherent_amplitudes_against_direct_poisson():
    v = coherent_state(2.0, 60)
    direct = np.array([math.exp(-2.0) * 2.0 ** n / math.sqrt(math.factorial(n))
                       for n in range(61)])
    np.testing.assert_allclose(v.amps.real, direct, rtol=0, atol=1e-12)
    assert expect(v, "n") == pytest.approx(4.0, abs=1e-10)


def test_coherent_large_amplitude_no_overflow():
    v = coherent_state(25.0)
    assert abs(v.norm2() - 1) < 1e-12
    assert expect(v, "n") == pytest.approx(625.0, rel=1e-10)


def test_truncation_too_small_raises():
    with pytest.raises(TruncationError):
        coherent_state(4.0, 20)


def test_creation_on_number_states():
    one = apply_creation(number_state(0, 10))
    assert one.amps[1] == 1.0
    two = apply_creation(number_state(1, 10))
    assert two.amps[2] == pytest.approx(math.sqrt(2))
    assert np.count_nonzero(two.amps) == 1


def test_creation_overflow_detected():
    with pytest.raises(TruncationError):
        apply_creation(number_state(10, 10))


def test_annihilation_inverts_creation_on_fock_states():
    v = number_state(3, 10)
    back = apply_annihilation(apply_creation(v))
    np.testing.assert_allclose(back.amps, 4 * v.amps)


def test_spacs_moments():
    v = spacs(2.0, 60)
    assert v.amps[0] == 0.0
    assert abs(v.norm2() - 1) < 1e-12
    assert expect(v, "n") == pytest.approx(29 / 5, abs=1e-10)
    assert expect(v, "n2") == pytest.approx(189 / 5, abs=1e-10)


def test_spacs_at_zero_is_single_photon():
    v = spacs(0.0)
    assert v.amps[1] == 1.0
    assert v.norm2() == 1.0


def test_coherent_moments():
    v = coherent_state(2.0, 60)
    assert expect(v, "n") == pytest.approx(4, abs=1e-10)
    assert expect(v, "n2") == pytest.approx(20, abs=1e-9)
    assert expect(v, "n3") == pytest.approx(116, abs=1e-8)


def test_vacuum_quadrature():
    v = number_state(0, 10)
    assert expect(v, "x") == 0.0
    assert expect(v, "x2") == pytest.approx(0.5, abs=1e-15)


def test_coherent_quadrature_mean():
    v = coherent_state(1.5 * cmath.exp(0.4j))
    assert expect(v, "x") == pytest.approx(math.sqrt(2) * 1.5 * math.cos(0.4), abs=1e-12)
    var = expect(v, "x2") - expect(v, "x") ** 2
    assert var == pytest.approx(0.5, abs=1e-12)


def test_unknown_operator_tag():
    with pytest.raises(ValueError):
        expect(number_state(0, 4), "p")


def test_inner_identities():
    v = spacs(2.0)
    assert inner(v, v) == pytest.approx(1.0, abs=1e-12)
    n = 60
    assert inner(coherent_state(1.0, n), coherent_state(2.0, n)) == pytest.approx(
        math.exp(-0.5), abs=1e-12)


def test_rotated_coherent_overlap():
    a, lam, n = 2.0, 0.1, 60
    got = inner(coherent_state(a * cmath.exp(-1j * lam), n), coherent_state(a * cmath.exp(1j * lam), n))
    want = math.exp(-2 * a * a * math.sin(lam) ** 2) * cmath.exp(1j * a * a * math.sin(2 * lam))
    assert abs(got - want) < 1e-12


def test_inner_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        inner(number_state(0, 4), number_state(0, 5))


def test_fock_vector_is_immutable():
    v = number_state(1, 4)
    with pytest.raises(ValueError):
        v.amps[0] = 1.0


def test_fock_vector_rejects_nonfinite():
    with pytest.raises(ValueError):
        FockVector(np.array([np.nan, 1.0]))


def test_evolve_at_zero_coupling():
    cfg = ExperimentConfig(2.0, 0.0, 0.7, 1.0, phi_i=0.3)
    g, e = evolve_joint(cfg)
    s = spacs(2.0, g.n_max).amps
    np.testing.assert_allclose(g.amps, math.cos(0.35) * s, atol=1e-15)
    np.testing.assert_allclose(e.amps, cmath.exp(0.3j) * math.sin(0.35) * s, atol=1e-15)


def test_evolve_ground_preselection_kills_excited_branch():
    g, e = evolve_joint(ExperimentConfig(2.0, 0.3, 0.0, 1.0))
    assert e.norm2() == 0.0
    assert g.norm2() == pytest.approx(1.0, abs=1e-12)


def test_evolve_unitarity_example():
    g, e = evolve_joint(ExperimentConfig(2.0, 0.1, math.pi / 2, 0.0))
    assert g.norm2() + e.norm2() == pytest.approx(1.0, abs=1e-12)


@SEEDED
@given(alphas, lams, angles, angles, angles)
def test_unitarity(a, lam, ti, phi_i, ph):
    cfg = ExperimentConfig(a, lam, ti, 0.0, phi_i=phi_i, alpha_phase=ph)
    g, e = evolve_joint(cfg)
    assert abs(g.norm2() + e.norm2() - 1) < 1e-10


@SEEDED
@given(alphas, lams, angles, angles, angles)
def test_diagonal_phase_equals_amplitude_substitution(a, lam, ti, phi_i, ph):
    cfg = ExperimentConfig(a, lam, ti, 0.0, phi_i=phi_i, alpha_phase=ph)
    g1, e1 = evolve_joint(cfg, method="diagonal")
    g2, e2 = evolve_joint(cfg, method="substitution")
    np.testing.assert_allclose(g1.amps, g2.amps, rtol=0, atol=1e-12)
    np.testing.assert_allclose(e1.amps, e2.amps, rtol=0, atol=1e-12)


@SEEDED
@given(alphas, angles)
def test_truncation_stability(a, ph):
    alpha = a * cmath.exp(1j * ph)
    n = default_n_max(a)
    small, big = spacs(alpha, n), spacs(alpha, 2 * n)
    for which in ("n", "n2", "x", "x2"):
        assert abs(expect(small, which) - expect(big, which)) < 1e-9
    assert small.tail_mass() <= 1e-10


@SEEDED
@given(alphas, angles)
def test_expectations_are_real_and_consistent(a, ph):
    v = spacs(a * cmath.exp(1j * ph))
    n, n2 = expect(v, "n"), expect(v, "n2")
    assert isinstance(n, float)
    assert n2 >= n * n - 1e-9
    assert expect(v, "x2") >= expect(v, "x") ** 2

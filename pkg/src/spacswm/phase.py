"""Photon-statistics pointer: weak-value shifts of photon number and Pegg-Barnett phase.

In the weak-coupling regime the postselected meter is approximately the SPACS
kappa a^dag |beta> with beta = alpha exp(-i lam w), w the sigma_z weak value.
Re(w) then shows up as a phase shift and Im(w) as a change of mean photon
number.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import ExperimentConfig, final_meter_state, weak_value_sigma_z
from .errors import DegenerateInversion, DivergentPhaseVariance
from .fock import FockVector, default_n_max, expect, spacs

__all__ = [
    "WeakMeterState",
    "PhaseGrid",
    "weak_meter_state",
    "photon_shift",
    "linear_response_state",
    "phase_distribution_exact",
    "phase_distribution_approx",
    "phase_shift",
    "exact_phase_shift",
    "number_phase_variances",
    "weak_value_readout",
]

DEFAULT_GRID = 4096
WEAK_REGIME_LIMIT = 0.3
APPROX_DEFICIT_LIMIT = 0.02


@dataclass(frozen=True)
class WeakMeterState:
    beta: complex
    kappa: float


@dataclass(frozen=True)
class PhaseGrid:
    """Phase density on the closed window [center - pi, center + pi].

    ``deficit`` is the mass missing before renormalization (zero for exact
    distributions).
    """

    phis: np.ndarray
    densities: np.ndarray
    center: float
    deficit: float = 0.0

    @property
    def spacing(self) -> float:
        return float(self.phis[1] - self.phis[0])

    def mass(self) -> float:
        return float(np.trapezoid(self.densities, self.phis))

    def mean(self) -> float:
        return float(np.trapezoid(self.phis * self.densities, self.phis))

    def second_moment(self) -> float:
        return float(np.trapezoid(self.phis ** 2 * self.densities, self.phis))

    def variance(self) -> float:
        return self.second_moment() - self.mean() ** 2


def _window(center: float, grid_size: int) -> np.ndarray:
    return center - math.pi + 2 * math.pi * np.arange(grid_size + 1) / grid_size


def weak_meter_state(config: ExperimentConfig) -> WeakMeterState:
    """beta = alpha exp(-i lam w), kappa = (1 + |beta|^2)^(-1/2)."""
    w = weak_value_sigma_z(config.psi_i, config.psi_f)
    if config.lam * abs(w) > WEAK_REGIME_LIMIT:
        warnings.warn(f"lam*|w| = {config.lam * abs(w):.3g} is outside the weak regime",
                      stacklevel=2)
    beta = config.alpha * cmath.exp(-1j * config.lam * w)
    return WeakMeterState(beta=beta, kappa=1.0 / math.sqrt(1.0 + abs(beta) ** 2))


def _n_max_for(config: ExperimentConfig, beta: complex) -> int:
    return default_n_max(max(config.alpha_mag, abs(beta)))


def photon_shift(config: ExperimentConfig, n_max: int | None = None) -> tuple[float, float]:
    """(printed approximation, <n>_SPACS(beta) - <n>_SPACS(alpha)) for the mean-photon shift."""
    w = weak_value_sigma_z(config.psi_i, config.psi_f)
    wm = weak_meter_state(config)
    if n_max is None:
        n_max = _n_max_for(config, wm.beta)
    oracle = expect(spacs(wm.beta, n_max), "n") - expect(spacs(config.alpha, n_max), "n")
    x, lam = config.alpha_mag ** 2, config.lam
    printed = (2 * lam * x * config.gamma2 * w.imag
             / (2 * lam * x * w.imag + x + 1) * (x * x + 2 * x + 2))
    return printed, oracle


def linear_response_state(config: ExperimentConfig, n_max: int | None = None) -> FockVector:
    """First-order pointer state (1 - i lam w n) |Phi_i>, normalized.

    This is the state that kappa a^dag |beta> exponentiates; its phase
    distribution differs from that of SPACS(beta) at O(lam^2).
    """
    w = weak_value_sigma_z(config.psi_i, config.psi_f)
    if n_max is None:
        n_max = config.default_n_max()
    c = spacs(config.alpha, n_max).amps
    n = np.arange(n_max + 1)
    return FockVector((1 - 1j * config.lam * w * n) * c).normalized()


def phase_distribution_exact(state: FockVector, grid_size: int = DEFAULT_GRID,
                             center: float = 0.0) -> PhaseGrid:
    """P(phi) = |sum_n exp(-i n phi) c_n|^2 / 2pi on the window centered at ``center``.

    Evaluated with one FFT; ``grid_size`` intervals must exceed n_max to avoid
    aliasing.
    """
    if grid_size <= state.n_max:
        raise ValueError(f"grid_size={grid_size} must exceed n_max={state.n_max}")
    phis = _window(center, grid_size)
    n = np.arange(state.n_max + 1)
    s = np.fft.fft(state.amps * np.exp(-1j * n * phis[0]), n=grid_size)
    s = np.append(s, s[0])
    return PhaseGrid(phis, np.abs(s) ** 2 / (2 * math.pi), center)


def phase_distribution_approx(config: ExperimentConfig, which: str = "initial",
                              grid_size: int = DEFAULT_GRID) -> PhaseGrid:
    """Gaussian-Poisson approximation of the phase density of Phi_i or Phi_w.

    P(phi) ~ k^2 sqrt(2/pi) |b|^3 [4 d^2 + 1] exp(-2 |b|^2 d^2), with d the
    offset from the peak.  The window mass deficit is recorded and removed.
    """
    theta = config.alpha_phase
    if which == "initial":
        b2, peak = config.alpha_mag ** 2, theta
    elif which == "final":
        w = weak_value_sigma_z(config.psi_i, config.psi_f)
        b2 = abs(weak_meter_state(config).beta) ** 2
        peak = theta - config.lam * w.real
    else:
        raise ValueError(f"which must be 'initial' or 'final', not {which!r}")
    if b2 < 4:
        warnings.warn(f"|beta|^2 = {b2:.3g}: Gaussian phase approximation is poor", stacklevel=2)
    phis = _window(theta, grid_size)
    d = peak - phis
    dens = (1.0 / (1.0 + b2)) * math.sqrt(2 / math.pi) * b2 ** 1.5 * (4 * d * d + 1) * np.exp(
        -2 * b2 * d * d)
    mass = float(np.trapezoid(dens, phis))
    deficit = 1.0 - mass
    if abs(deficit) > APPROX_DEFICIT_LIMIT:
        warnings.warn(f"approximate phase density misses {deficit:.3%} of its mass", stacklevel=2)
    return PhaseGrid(phis, dens / mass, theta, deficit)


def phase_shift(config: ExperimentConfig, grid_size: int = DEFAULT_GRID,
                n_max: int | None = None) -> tuple[float, float]:
    """(-lam Re w, mean-phase difference between the first-order pointer and Phi_i)."""
    w = weak_value_sigma_z(config.psi_i, config.psi_f)
    printed = -config.lam * w.real
    if config.lam == 0.0:
        return printed, 0.0
    if n_max is None:
        n_max = config.default_n_max()
    theta = config.alpha_phase
    p_w = phase_distribution_exact(linear_response_state(config, n_max), grid_size, theta)
    p_i = phase_distribution_exact(spacs(config.alpha, n_max), grid_size, theta)
    return printed, p_w.mean() - p_i.mean()


def exact_phase_shift(config: ExperimentConfig, grid_size: int = DEFAULT_GRID,
                      n_max: int | None = None) -> float:
    """Mean-phase difference between the exactly evolved postselected meter and Phi_i.

    Under exp(i lam sigma_z n) this tends to +lam Re w, the opposite sign of
    the first-order pointer used by :func:`phase_shift`.
    """
    if n_max is None:
        n_max = config.default_n_max()
    theta = config.alpha_phase
    v, _ = final_meter_state(config, n_max)
    p_f = phase_distribution_exact(v, grid_size, theta)
    p_i = phase_distribution_exact(spacs(config.alpha, n_max), grid_size, theta)
    return p_f.mean() - p_i.mean()


def number_phase_variances(config: ExperimentConfig) -> tuple[float, float, float]:
    """(Var n, Var phi, Delta n * Delta phi) of the weak-measurement pointer SPACS(beta)."""
    wm = weak_meter_state(config)
    b2 = abs(wm.beta) ** 2
    if b2 < 1e-9:
        raise DivergentPhaseVariance(f"|beta|^2 = {b2:.3e}")
    k2 = wm.kappa ** 2
    var_n = k2 * (b2 ** 3 + 6 * b2 ** 2 + 7 * b2 + 1) - (k2 * (b2 ** 2 + 3 * b2 + 1)) ** 2
    var_phi = 0.25 * k2 * (1 + 3 / b2)
    return var_n, var_phi, math.sqrt(var_n * var_phi)


def weak_value_readout(delta_n: float, delta_phi: float, alpha_mag: float, lam: float) -> complex:
    """Invert measured phase and photon-number shifts into a weak value."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    x = alpha_mag ** 2
    g2 = 1.0 / (1.0 + x)
    denom = 2 * lam * x * g2 * (1 - g2 * (x * x + 2 * x + 2))
    if abs(denom) < 1e-12:
        raise DegenerateInversion(f"Im-part denominator {denom:.3e}")
    return complex(-delta_phi / lam, -delta_n / denom)

"""State fidelity and the postselected/conventional SNR ratio."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .core import (
    PF_TOL,
    ExperimentConfig,
    final_meter_state,
    no_postselection_state,
    postselection_probability,
)
from .errors import DegenerateSignal, PostselectionFailed
from .fock import expect, inner, spacs

__all__ = ["SnrBundle", "fidelity", "fidelity_oracle", "snr_ratio"]

SIGNAL_TOL = 1e-15
SNR_UNDEFINED_TOL = 1e-12
VARIANCE_TOL = 1e-15


def fidelity(config: ExperimentConfig) -> float:
    """|<Phi_i|Phi_f>|^2 between the initial SPACS meter and the postselected meter, closed form."""
    p_f = postselection_probability(config)
    if p_f < PF_TOL:
        raise PostselectionFailed(f"p_f = {p_f:.3e}")
    x, lam = config.alpha_mag ** 2, config.lam
    ci, si = math.cos(config.theta_i / 2), math.sin(config.theta_i / 2)
    cf, sf = math.cos(config.theta_f / 2), math.sin(config.theta_f / 2)
    ep, em = cmath.exp(1j * lam), cmath.exp(-1j * lam)
    amp = (cf * ci * (1 + x * ep) * cmath.exp(-x + x * ep + 1j * lam)
           + sf * si * (1 + x * em) * cmath.exp(-x + x * em - 1j * (config.phi0 + lam)))
    return config.gamma2 ** 2 / p_f * abs(amp) ** 2


def fidelity_oracle(config: ExperimentConfig, n_max: int | None = None) -> float:
    v, _ = final_meter_state(config, n_max)
    return abs(inner(spacs(config.alpha, v.n_max), v)) ** 2


@dataclass(frozen=True)
class SnrBundle:
    """x-quadrature SNRs per unit sqrt(N) and their ratio eta = s_post / s_conv."""

    s_post: float
    s_conv: float
    eta: float
    defined: bool = True


def snr_ratio(config: ExperimentConfig, n_max: int | None = None) -> SnrBundle:
    """Compare the postselected x-shift SNR with the conventional (no postselection) one.

    Both SNRs are measured against the conventional-arm mean <x>_c and are
    reported per unit sqrt(N), so the ratio is N-free.  eta is flagged
    undefined (nan) when s_conv < 1e-12; an exactly vanishing conventional
    shift raises DegenerateSignal.
    """
    if n_max is None:
        n_max = config.default_n_max()
    phi_i = spacs(config.alpha, n_max)
    phi_c, _ = no_postselection_state(config, n_max)
    phi_f, p_f = final_meter_state(config, n_max)

    xi, x2i = expect(phi_i, "x"), expect(phi_i, "x2")
    xc = expect(phi_c, "x")
    xf, x2f = expect(phi_f, "x"), expect(phi_f, "x2")
    var_i, var_f = x2i - xi * xi, x2f - xf * xf
    if var_i < VARIANCE_TOL or var_f < VARIANCE_TOL:
        raise DegenerateSignal("quadrature variance vanishes")
    if abs(xi - xc) < SIGNAL_TOL:
        raise DegenerateSignal(f"conventional shift |<x>_i - <x>_c| = {abs(xi - xc):.3e}")

    s_conv = abs(xi - xc) / math.sqrt(var_i)
    s_post = math.sqrt(p_f) * abs(xf - xc) / math.sqrt(var_f)
    if s_conv < SNR_UNDEFINED_TOL:
        return SnrBundle(s_post, s_conv, math.nan, defined=False)
    return SnrBundle(s_post, s_conv, s_post / s_conv)

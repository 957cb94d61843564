"""Fisher information of the postselected SPACS meter.

Covers the quantum Fisher information of the postselected state (numeric and
the closed-form series), the classical Fisher information of photon counting
and of homodyne x-quadrature readout, and the conventional (no postselection)
baseline.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .core import (
    ExperimentConfig,
    abc_constants,
    final_meter_state,
    postselection_probability,
)
from .errors import PostselectionFailed, StepTooLarge, UnsupportedPhase
from .fock import default_n_max, expect, log_factorials, spacs

PF_MIN = 1e-9
P_SKIP = 1e-15

__all__ = [
    "DiscreteDistribution",
    "GridDistribution",
    "FisherReport",
    "qfi_numeric",
    "wva_qfi_series",
    "photon_distribution",
    "photon_distribution_derivative",
    "fisher_photon",
    "hermite_functions",
    "quadrature_density",
    "quadrature_density_oracle",
    "fisher_quadrature_grid",
    "fisher_quadrature_adaptive",
    "conventional_qfi",
    "fisher_report",
]


@dataclass(frozen=True)
class DiscreteDistribution:
    """Probabilities over n = 0..n_max."""

    probs: np.ndarray

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.probs.size)

    def total(self) -> float:
        return float(self.probs.sum())

    def mean(self) -> float:
        return float(self.support @ self.probs)


@dataclass(frozen=True)
class GridDistribution:
    points: np.ndarray
    densities: np.ndarray

    @property
    def spacing(self) -> float:
        return float(self.points[1] - self.points[0])

    def mass(self) -> float:
        return float(np.trapezoid(self.densities, self.points))


@dataclass(frozen=True)
class FisherReport:
    p_f: float
    q_f: float
    f_tot: float
    eff_fi_photon: float
    eff_fi_quad: float
    q_cm: float


def _require_pf(config: ExperimentConfig, lam: float | None = None) -> float:
    p_f = postselection_probability(config, lam=lam)
    if p_f < PF_MIN:
        raise PostselectionFailed(f"p_f = {p_f:.3e} below {PF_MIN:g}")
    return p_f


# -- quantum Fisher information ---------------------------------------------

def _aligned(config, n_max, lam, ref):
    v, _ = final_meter_state(config, n_max, lam=lam)
    c = v.amps
    return c * (abs(c[ref]) / c[ref])


def _qfi_central(config, n_max, d):
    v, _ = final_meter_state(config, n_max)
    ref = int(np.argmax(np.abs(v.amps)))
    c = v.amps * (abs(v.amps[ref]) / v.amps[ref])
    dc = (_aligned(config, n_max, config.lam + d, ref)
          - _aligned(config, n_max, config.lam - d, ref)) / (2 * d)
    return 4.0 * (np.vdot(dc, dc).real - abs(np.vdot(c, dc)) ** 2)


def qfi_numeric(config: ExperimentConfig, n_max: int | None = None,
                dlambda: float = 1e-4) -> float:
    """Q_f of the normalized postselected meter state by central differences.

    The global phase is pinned on the largest amplitude before differencing.
    Steps dlambda and dlambda/2 must agree to 1e-4 relative, otherwise
    StepTooLarge is raised; the two are then Richardson-combined.
    """
    for lam in (config.lam - dlambda, config.lam, config.lam + dlambda):
        _require_pf(config, lam)
    if n_max is None:
        n_max = config.default_n_max()
    q1 = _qfi_central(config, n_max, dlambda)
    q2 = _qfi_central(config, n_max, dlambda / 2)
    if abs(q1 - q2) > 1e-4 * abs(q2) + 1e-8:
        raise StepTooLarge(f"Q_f(d)={q1:.10g} vs Q_f(d/2)={q2:.10g}")
    return max((4.0 * q2 - q1) / 3.0, 0.0)


def _poisson_log_weights(x: float, n: np.ndarray) -> np.ndarray:
    if x == 0.0:
        return np.where(n == 0, 0.0, -np.inf)
    return n * math.log(x) - x - log_factorials(int(n[-1]))[n]


def wva_qfi_series(config: ExperimentConfig, tol: float = 1e-14) -> float:
    """Closed-form F_tot = p_f Q_f as a pair of Poisson-weighted series.

    Both series use the weight (|alpha|^2)^n/n! exp(-|alpha|^2) and are summed
    until the next term drops below tol*(1 + |partial sum|) past the Poisson
    bulk.
    """
    p_f = _require_pf(config)
    k = abc_constants(config)
    x, lam, phi0 = config.alpha_mag ** 2, config.lam, config.phi0
    g2 = config.gamma2
    n1, n2, n3 = x, x + x * x, x + 3 * x * x + x ** 3

    n_bulk = x + 10 * math.sqrt(x + 1)
    n_hi = int(math.ceil(n_bulk)) + 16
    while True:
        n = np.arange(n_hi + 1)
        w = np.exp(_poisson_log_weights(x, n))
        ang = 2 * lam + 2 * n * lam + phi0
        t1 = w * (1 + n) ** 3 * np.cos(ang)
        t2 = w * (1 + n) ** 2 * np.sin(ang)
        s1, s2 = t1.sum(), t2.sum()
        # the next (unsummed) term bounds the remainder once weights decay
        nxt = w[-1] * x / (n_hi + 1) * (n_hi + 2) ** 3
        if nxt < tol * (1 + abs(s1)) and nxt < tol * (1 + abs(s2)):
            break
        n_hi *= 2
    return 4 * (g2 * k.A * (1 + 3 * n1 + 3 * n2 + n3)
                - g2 ** 2 * k.C ** 2 * (1 + 2 * n1 + n2) ** 2 / p_f
                - g2 * k.B * s1
                - k.B ** 2 * g2 ** 2 * s2 ** 2 / p_f)


# -- photon counting ---------------------------------------------------------

def _photon_numerators(config, n_max, lam):
    """gamma^2 * n|a|^(2n-2) e^(-|a|^2)/(n-1)! * [A + B cos(2 n lam + phi0)] and its lam-derivative."""
    k = abc_constants(config)
    x = config.alpha_mag ** 2
    n = np.arange(n_max + 1)
    w = np.zeros(n_max + 1)
    w[1:] = n[1:] * np.exp(_poisson_log_weights(x, n[:-1]))
    ang = 2 * n * lam + config.phi0
    num = config.gamma2 * w * (k.A + k.B * np.cos(ang))
    dnum = config.gamma2 * w * (-2 * n * k.B * np.sin(ang))
    return np.clip(num, 0.0, None), dnum


def _dpf_dlambda(config: ExperimentConfig, lam: float) -> float:
    k = abc_constants(config)
    x = config.alpha_mag ** 2
    u = 2 * lam + config.phi0 + x * math.sin(2 * lam)
    du = 2 + 2 * x * math.cos(2 * lam)
    env = math.exp(-2 * x * math.sin(lam) ** 2)
    denv = -2 * x * math.sin(2 * lam) * env
    bracket = math.cos(u) + x * math.cos(u + 2 * lam)
    dbracket = -math.sin(u) * du - x * math.sin(u + 2 * lam) * (du + 2)
    return config.gamma2 * k.B * (denv * bracket + env * dbracket)


def photon_distribution(config: ExperimentConfig, n_max: int | None = None,
                        *, lam: float | None = None) -> DiscreteDistribution:
    """Closed-form photon-number distribution of the postselected meter."""
    lam = config.lam if lam is None else lam
    if n_max is None:
        n_max = config.default_n_max()
    p_f = _require_pf(config, lam)
    num, _ = _photon_numerators(config, n_max, lam)
    return DiscreteDistribution(num / p_f)


def photon_distribution_derivative(config: ExperimentConfig, n_max: int | None = None,
                                   *, method: str = "analytic",
                                   dlambda: float = 1e-5) -> np.ndarray:
    """d P_f(n) / d lambda, analytically or by central differences."""
    if n_max is None:
        n_max = config.default_n_max()
    lam = config.lam
    if method == "fd":
        up = photon_distribution(config, n_max, lam=lam + dlambda).probs
        dn = photon_distribution(config, n_max, lam=lam - dlambda).probs
        return (up - dn) / (2 * dlambda)
    if method != "analytic":
        raise ValueError(f"unknown method {method!r}")
    p_f = _require_pf(config)
    num, dnum = _photon_numerators(config, n_max, lam)
    return dnum / p_f - num * _dpf_dlambda(config, lam) / p_f ** 2


def fisher_photon(config: ExperimentConfig, n_max: int | None = None) -> float:
    """Classical Fisher information F^(n) of photon counting on the postselected meter."""
    P = photon_distribution(config, n_max).probs
    dP = photon_distribution_derivative(config, n_max)
    keep = P >= P_SKIP
    return float(np.sum(dP[keep] ** 2 / P[keep]))


# -- homodyne x-quadrature ---------------------------------------------------

def hermite_functions(n_max: int, x) -> np.ndarray:
    """Oscillator eigenfunctions psi_0..psi_n_max at x, by the normalized upward recurrence.

    Returns an array of shape (n_max + 1, len(x)).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    psi = np.empty((n_max + 1, x.size))
    psi[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n_max >= 1:
        psi[1] = math.sqrt(2.0) * x * psi[0]
    for n in range(2, n_max + 1):
        psi[n] = math.sqrt(2.0 / n) * x * psi[n - 1] - math.sqrt((n - 1) / n) * psi[n - 2]
    return psi


def _require_real_alpha(config: ExperimentConfig):
    if config.alpha_phase != 0.0:
        raise UnsupportedPhase("quadrature closed forms assume a real coherent amplitude")


def quadrature_density(config: ExperimentConfig, x, *, lam: float | None = None,
                       printed: bool = False):
    """Closed-form x-quadrature density P_f(x) of the postselected meter (real alpha).

    The interference term carries exp(+i phi0), which is what the Fock-basis
    projection gives.  ``printed=True`` evaluates the printed expression
    with exp(-i phi0) instead; the two agree only for phi0 in {0, pi}.
    """
    _require_real_alpha(config)
    lam = config.lam if lam is None else lam
    p_f = _require_pf(config, lam)
    k = abc_constants(config)
    a = config.alpha_mag
    x = np.asarray(x, dtype=float)
    r2 = math.sqrt(2.0)
    pre = config.gamma2 / math.sqrt(math.pi) / p_f

    diag = (2 * x * x - 2 * r2 * x * a * math.cos(lam) + a * a) * np.exp(
        -a * a - a * a * math.cos(2 * lam) + 2 * r2 * x * a * math.cos(lam) - x * x)
    e1 = np.exp(1j * lam)
    sign = -1.0 if printed else 1.0
    cross = np.real(
        np.exp(2j * lam + sign * 1j * config.phi0)
        * (2 * x * x - 2 * r2 * x * a * e1 + a * a * e1 * e1)
        * np.exp(-a * a - a * a * e1 * e1 + 2 * r2 * x * a * e1 - x * x))
    out = pre * (k.A * diag + k.B * cross)
    return np.clip(out, 0.0, None)


def quadrature_density_oracle(config: ExperimentConfig, x, n_max: int | None = None):
    """|<x|Phi_f>|^2 summed from Fock amplitudes and oscillator eigenfunctions."""
    v, _ = final_meter_state(config, n_max)
    psi = hermite_functions(v.n_max, x)
    amp = v.amps @ psi
    out = np.abs(amp) ** 2
    return out if np.ndim(x) else float(out[0])


def _quad_dP(config, x, dlambda, printed):
    lam = config.lam
    up = quadrature_density(config, x, lam=lam + dlambda, printed=printed)
    dn = quadrature_density(config, x, lam=lam - dlambda, printed=printed)
    return (up - dn) / (2 * dlambda)


def fisher_quadrature_grid(config: ExperimentConfig, dlambda: float = 1e-5,
                                 *, printed: bool = False) -> float:
    """F^(x) as a Riemann sum over x = y/100, y = -300..700."""
    x = np.arange(-300, 701) / 100.0
    P = quadrature_density(config, x, printed=printed)
    dP = _quad_dP(config, x, dlambda, printed)
    keep = P >= P_SKIP
    return float(np.sum(dP[keep] ** 2 / (100.0 * P[keep])))


def fisher_quadrature_adaptive(config: ExperimentConfig, dlambda: float = 1e-5,
                               half_width: float = 12.0) -> float:
    """F^(x) by adaptive quadrature around the wave-packet centre."""
    centre = math.sqrt(2.0) * config.alpha_mag * math.cos(config.lam)

    def integrand(x):
        P = float(quadrature_density(config, x))
        if P < P_SKIP:
            return 0.0
        return float(_quad_dP(config, x, dlambda, False)) ** 2 / P

    val, _ = integrate.quad(integrand, centre - half_width, centre + half_width,
                            epsabs=0.0, epsrel=1e-10, limit=500)
    return val


# -- conventional baseline ---------------------------------------------------

def conventional_qfi(alpha_mag: float, n_max: int | None = None) -> tuple[float, float]:
    """(4 Var(n) of SPACS(alpha), printed closed form with |xi| = |alpha|).

    The phase encoding exp(+-i lam n) on a fixed pure state has QFI 4 Var(n),
    independent of lam.  The printed closed form is returned alongside for
    comparison only.
    """
    v = spacs(alpha_mag, n_max if n_max is not None else default_n_max(alpha_mag))
    numeric = 4.0 * (expect(v, "n2") - expect(v, "n") ** 2)
    x = alpha_mag ** 2
    xi2 = x
    printed = 4 * xi2 * (2 * x + 4 * x ** 2 + x ** 3 - xi2 * (2 * x + x ** 2) ** 2)
    return max(numeric, 0.0), printed


def fisher_report(config: ExperimentConfig, n_max: int | None = None) -> FisherReport:
    p_f = postselection_probability(config)
    q_f = qfi_numeric(config, n_max)
    f_tot = p_f * q_f
    eff_n = p_f * fisher_photon(config, n_max)
    eff_x = p_f * fisher_quadrature_grid(config) if config.alpha_phase == 0.0 else math.nan
    q_cm, _ = conventional_qfi(config.alpha_mag, n_max)
    return FisherReport(p_f=p_f, q_f=q_f, f_tot=f_tot, eff_fi_photon=max(eff_n, 0.0),
                        eff_fi_quad=max(eff_x, 0.0) if math.isfinite(eff_x) else eff_x,
                        q_cm=q_cm)

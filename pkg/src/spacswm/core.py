"""Parameter model, qubit states, weak values and postselected meter states."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import OrthogonalPostselection, PostselectionFailed
from .fock import FockVector, default_n_max, evolve_joint

OVERLAP_TOL = 1e-12
PF_TOL = 1e-12

__all__ = [
    "ExperimentConfig",
    "QubitState",
    "ABCConstants",
    "abc_constants",
    "weak_value_sigma_z",
    "config_for_weak_value",
    "postselection_probability",
    "postselected_amplitudes",
    "final_meter_state",
    "conventional_norm",
    "no_postselection_state",
]


@dataclass(frozen=True)
class QubitState:
    """cos(theta/2)|g> + exp(i phi) sin(theta/2)|e>."""

    theta: float
    phi: float = 0.0

    def amplitudes(self) -> np.ndarray:
        return np.array([math.cos(self.theta / 2),
                         cmath.exp(1j * self.phi) * math.sin(self.theta / 2)])


@dataclass(frozen=True)
class ExperimentConfig:
    """Free parameters of the scheme.

    ``alpha_mag`` and ``alpha_phase`` give the coherent amplitude
    alpha = |alpha| exp(i theta); ``lam`` is the coupling lambda = g t.
    Angles are taken as given, without range reduction.
    """

    alpha_mag: float
    lam: float
    theta_i: float
    theta_f: float
    phi_i: float = 0.0
    phi_f: float = 0.0
    alpha_phase: float = 0.0

    def __post_init__(self):
        vals = (self.alpha_mag, self.lam, self.theta_i, self.theta_f,
                self.phi_i, self.phi_f, self.alpha_phase)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("ExperimentConfig fields must be finite")
        if self.alpha_mag < 0:
            raise ValueError("alpha_mag must be >= 0")
        if self.lam < 0:
            raise ValueError("lam must be >= 0")

    @property
    def alpha(self) -> complex:
        return self.alpha_mag * cmath.exp(1j * self.alpha_phase)

    @property
    def phi0(self) -> float:
        return self.phi_i - self.phi_f

    @property
    def gamma2(self) -> float:
        return 1.0 / (1.0 + self.alpha_mag ** 2)

    @property
    def psi_i(self) -> QubitState:
        return QubitState(self.theta_i, self.phi_i)

    @property
    def psi_f(self) -> QubitState:
        return QubitState(self.theta_f, self.phi_f)

    def default_n_max(self) -> int:
        return default_n_max(self.alpha_mag)

    def replace(self, **changes) -> "ExperimentConfig":
        from dataclasses import replace
        return replace(self, **changes)


@dataclass(frozen=True)
class ABCConstants:
    A: float
    B: float
    C: float
    D: float
    E: float


def abc_constants(config: ExperimentConfig) -> ABCConstants:
    ti, tf = config.theta_i, config.theta_f
    c2, s2 = math.cos(ti / 2) ** 2, math.sin(ti / 2) ** 2
    return ABCConstants(
        A=0.5 * (1 + math.cos(ti) * math.cos(tf)),
        B=0.5 * math.sin(ti) * math.sin(tf),
        C=0.5 * (math.cos(ti) + math.cos(tf)),
        D=c2 * c2 + s2 * s2,
        E=c2 * s2,
    )


def weak_value_sigma_z(psi_i: QubitState, psi_f: QubitState) -> complex:
    """<psi_f|sigma_z|psi_i> / <psi_f|psi_i> with sigma_z = |e><e| - |g><g|."""
    a, b = psi_i.amplitudes(), psi_f.amplitudes()
    overlap = np.vdot(b, a)
    if abs(overlap) < OVERLAP_TOL:
        raise OrthogonalPostselection(f"|<psi_f|psi_i>| = {abs(overlap):.3e}")
    return complex(np.vdot(b, np.array([-1.0, 1.0]) * a) / overlap)


def config_for_weak_value(
    weak_value: complex,
    alpha_mag: float,
    lam: float,
    theta_i: float = math.pi / 2,
    phi_i: float = 0.0,
    alpha_phase: float = 0.0,
) -> ExperimentConfig:
    """Choose the postselected state that realizes a given sigma_z weak value.

    With z = tan(theta_i/2) tan(theta_f/2) exp(i phi_0) the weak value is
    (z - 1)/(z + 1), so z = (1 + w)/(1 - w) fixes theta_f and phi_f.
    """
    w = complex(weak_value)
    if not 0 < theta_i < math.pi:
        raise ValueError("theta_i must lie strictly inside (0, pi) to reach arbitrary weak values")
    if w == 1:
        theta_f, phi0 = math.pi, 0.0
    else:
        z = (1 + w) / (1 - w)
        theta_f = 2 * math.atan2(abs(z), math.tan(theta_i / 2))
        phi0 = cmath.phase(z) if z != 0 else 0.0
    return ExperimentConfig(alpha_mag=alpha_mag, lam=lam, theta_i=theta_i, theta_f=theta_f,
                            phi_i=phi_i, phi_f=phi_i - phi0, alpha_phase=alpha_phase)


def postselection_probability(config: ExperimentConfig, *, lam: float | None = None) -> float:
    """Closed-form probability that the qubit is found in psi_f after the interaction."""
    lam = config.lam if lam is None else lam
    k = abc_constants(config)
    x = config.alpha_mag ** 2
    rot = config.phi0 + x * math.sin(2 * lam)
    p = k.A + config.gamma2 * k.B * math.exp(-2 * x * math.sin(lam) ** 2) * (
        math.cos(2 * lam + rot) + x * math.cos(4 * lam + rot))
    return float(np.clip(p, 0.0, 1.0 + 1e-12))


def postselected_amplitudes(config: ExperimentConfig, n_max: int | None = None,
                            *, lam: float | None = None) -> FockVector:
    """Unnormalized meter state <psi_f|Phi_J> in the Fock basis."""
    g, e = evolve_joint(config, n_max, lam=lam)
    wf = config.psi_f.amplitudes().conj()
    return FockVector(wf[0] * g.amps + wf[1] * e.amps)


def final_meter_state(config: ExperimentConfig, n_max: int | None = None,
                      *, lam: float | None = None) -> tuple[FockVector, float]:
    """Normalized postselected meter state and its success probability."""
    v = postselected_amplitudes(config, n_max, lam=lam)
    p_f = v.norm2()
    if p_f < PF_TOL:
        raise PostselectionFailed(f"p_f = {p_f:.3e}")
    return FockVector(v.amps / math.sqrt(p_f)), p_f


def conventional_norm(config: ExperimentConfig, *, printed: bool = False) -> float:
    """Closed-form norm h of the meter state projected back onto psi_i.

    The cross term is Re sum_n P(n) exp(2 i n lam) over the SPACS photon
    distribution, so every exponential carries the same sign.  The printed
    expression pairs exp(+2i lam) with exp(-2i lam) inside; ``printed=True``
    evaluates it as printed.
    """
    k = abc_constants(config)
    x, lam = config.alpha_mag ** 2, config.lam
    ep = cmath.exp(2j * lam)
    inner_phase = ep.conjugate() if printed else ep
    term = ep * (1 + x * inner_phase) * cmath.exp(-x + x * inner_phase)
    return k.D + 2 * k.E * config.gamma2 * term.real


def no_postselection_state(config: ExperimentConfig,
                           n_max: int | None = None) -> tuple[FockVector, float]:
    """Meter state <psi_i|Phi_J>/sqrt(h) of the conventional arm, with closed-form h."""
    g, e = evolve_joint(config, n_max)
    wi = config.psi_i.amplitudes().conj()
    v = FockVector(wi[0] * g.amps + wi[1] * e.amps)
    h = conventional_norm(config)
    assert h > 0, h
    return v.normalized(), h

"""Tabulated sweeps for the four figure families (fig1a-d, fig2, fig3, fig4).

Each builder returns a :class:`Table`: column names, rows of floats (nan marks
a point where postselection failed or the quantity is undefined) and a dict of
parameters for the sidecar file.  Rows come out sorted by the sweep variable.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .core import ExperimentConfig, config_for_weak_value, postselection_probability
from .errors import SpacsError
from .fisher import conventional_qfi, fisher_photon, fisher_quadrature_grid, qfi_numeric
from .metrics import fidelity, snr_ratio
from .phase import number_phase_variances

__all__ = ["Table", "FIGURES", "PANEL_LAMBDAS", "LAMBDAS", "build_figure", "default_points"]

ALPHA = 2.0
THETA_I = math.pi / 2
PHI_I = math.pi
PHI_F = 0.0  # phi0 = phi_i - phi_f = pi
THETA_F_FIG2 = 3 * math.pi / 2
WEAK_VALUE_FIG4 = 1 + 1j
LAMBDAS = (0.01, 0.05, 0.1, 1.0)
PANEL_LAMBDAS = dict(zip(("fig1a", "fig1b", "fig1c", "fig1d"), LAMBDAS))
FIGURES = ("fig1a", "fig1b", "fig1c", "fig1d", "fig2", "fig3", "fig4")

_DEFAULT_POINTS = {"fig1": 721, "fig2": 601, "fig3": 721, "fig4": 391}


@dataclass
class Table:
    columns: list[str]
    rows: list[list[float]]
    meta: dict[str, str] = field(default_factory=dict)


def default_points(fig_id: str) -> int:
    return _DEFAULT_POINTS[fig_id[:4]]


def _lam_label(lam: float) -> str:
    return f"lam_{lam:g}"


def _safe(fn, *args):
    try:
        val = fn(*args)
    except (SpacsError, ArithmeticError):
        return math.nan
    return val if math.isfinite(val) else math.nan


def _flag(values) -> float:
    return float(any(math.isnan(v) for v in values))


def _base_config(lam: float, theta_f: float = THETA_F_FIG2) -> ExperimentConfig:
    return ExperimentConfig(alpha_mag=ALPHA, lam=lam, theta_i=THETA_I, theta_f=theta_f,
                            phi_i=PHI_I, phi_f=PHI_F)


def _common_meta(fig_id: str, points: int) -> dict[str, str]:
    return {"figure": fig_id, "tool": "spacswm", "version": __version__,
            "points": str(points)}


def _fig1(fig_id: str, points: int) -> Table:
    lam = PANEL_LAMBDAS[fig_id]
    q_cm, _ = conventional_qfi(ALPHA)
    rows = []
    for tf in np.linspace(0.0, 2 * math.pi, points):
        cfg = _base_config(lam, float(tf))
        p_f = postselection_probability(cfg)
        vals = [p_f * _safe(fisher_photon, cfg),
                p_f * _safe(fisher_quadrature_grid, cfg),
                p_f * _safe(qfi_numeric, cfg),
                q_cm]
        rows.append([float(tf), *vals, _flag(vals)])
    meta = _common_meta(fig_id, points)
    meta.update(alpha_mag=repr(ALPHA), theta_i=repr(THETA_I), phi_i=repr(PHI_I),
                phi_f=repr(PHI_F), phi0=repr(PHI_I - PHI_F), **{"lambda": repr(lam)},
                sweep="theta_f in [0, 2pi]")
    return Table(["theta_f", "pf_fn", "pf_fx", "f_tot", "q_cm", "flag"], rows, meta)


def _fig2(points: int) -> Table:
    rows = []
    for a in np.linspace(0.0, 30.0, points):
        vals = [_safe(fidelity, ExperimentConfig(float(a), lam, THETA_I, THETA_F_FIG2,
                                                 phi_i=PHI_I, phi_f=PHI_F))
                for lam in LAMBDAS]
        rows.append([float(a), *vals, _flag(vals)])
    meta = _common_meta("fig2", points)
    meta.update(theta_i=repr(THETA_I), theta_f=repr(THETA_F_FIG2), phi_i=repr(PHI_I),
                phi_f=repr(PHI_F), phi0=repr(PHI_I - PHI_F),
                lambdas=",".join(repr(v) for v in LAMBDAS), sweep="alpha_mag in [0, 30]")
    cols = ["alpha"] + [f"fidelity_{_lam_label(v)}" for v in LAMBDAS] + ["flag"]
    return Table(cols, rows, meta)


def _eta(cfg: ExperimentConfig) -> float:
    return snr_ratio(cfg).eta


def _fig3(points: int) -> Table:
    rows = []
    for tf in np.linspace(0.0, 2 * math.pi, points):
        vals = [_safe(_eta, _base_config(lam, float(tf))) for lam in LAMBDAS]
        rows.append([float(tf), *vals, _flag(vals)])
    meta = _common_meta("fig3", points)
    meta.update(alpha_mag=repr(ALPHA), theta_i=repr(THETA_I), phi_i=repr(PHI_I),
                phi_f=repr(PHI_F), phi0=repr(PHI_I - PHI_F),
                lambdas=",".join(repr(v) for v in LAMBDAS), sweep="theta_f in [0, 2pi]")
    cols = ["theta_f"] + [f"eta_{_lam_label(v)}" for v in LAMBDAS] + ["flag"]
    return Table(cols, rows, meta)


def _product(cfg: ExperimentConfig) -> float:
    return number_phase_variances(cfg)[2]


def _fig4(points: int) -> Table:
    rows = []
    with warnings.catch_warnings():
        # lam*|w| > 0.3 at lam = 1 is part of the requested sweep
        warnings.simplefilter("ignore")
        for a in np.linspace(0.5, 20.0, points):
            vals = [_safe(_product, config_for_weak_value(WEAK_VALUE_FIG4, float(a), lam))
                    for lam in LAMBDAS]
            rows.append([float(a), *vals, 0.5, _flag(vals)])
    meta = _common_meta("fig4", points)
    meta.update(weak_value=repr(WEAK_VALUE_FIG4), theta_i=repr(THETA_I),
                lambdas=",".join(repr(v) for v in LAMBDAS), sweep="alpha_mag in [0.5, 20]",
                coherent="Delta n Delta phi of a coherent pointer")
    cols = (["alpha"] + [f"product_{_lam_label(v)}" for v in LAMBDAS]
            + ["coherent", "flag"])
    return Table(cols, rows, meta)


def build_figure(fig_id: str, points: int | None = None) -> Table:
    """Tabulate one figure; ``points`` defaults to the documented grid size."""
    if fig_id not in FIGURES:
        raise ValueError(f"unknown figure {fig_id!r}; choose from {', '.join(FIGURES)}")
    if points is None:
        points = default_points(fig_id)
    if points < 2:
        raise ValueError("points must be >= 2")
    if fig_id.startswith("fig1"):
        return _fig1(fig_id, points)
    return {"fig2": _fig2, "fig3": _fig3, "fig4": _fig4}[fig_id](points)

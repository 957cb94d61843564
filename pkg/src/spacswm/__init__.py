"""Postselected weak measurement with a single-photon-added coherent state meter."""
from .core import (
    ABCConstants,
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
from .errors import *  # noqa: F401,F403
from .fisher import (
    FisherReport,
    conventional_qfi,
    fisher_photon,
    fisher_quadrature_adaptive,
    fisher_quadrature_grid,
    fisher_report,
    photon_distribution,
    qfi_numeric,
    quadrature_density,
    quadrature_density_oracle,
    wva_qfi_series,
)
from .fock import FockVector, coherent_state, expect, inner, spacs
from .metrics import SnrBundle, fidelity, fidelity_oracle, snr_ratio
from .phase import (
    number_phase_variances,
    phase_distribution_approx,
    phase_distribution_exact,
    phase_shift,
    photon_shift,
    weak_meter_state,
    weak_value_readout,
)

__version__ = "0.1.0"

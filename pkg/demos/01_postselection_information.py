"""How much of the meter's information survives postselection?

Sweeps the postselection polar angle for a SPACS meter with |alpha| = 2 and
compares, at each coupling strength, the best success-weighted quantum Fisher
information with the best that photon counting and homodyne detection reach.

Run:  python3 demos/01_postselection_information.py
"""
# %%
import math
import warnings

import numpy as np

from spacswm import ExperimentConfig, conventional_qfi, fisher_report
from spacswm.errors import SpacsError

warnings.simplefilter("ignore")
THETA_F = np.linspace(0, 2 * math.pi, 721)
q_cm, _ = conventional_qfi(2.0)
print(f"conventional QFI (no postselection): {q_cm:.4f}\n")


def sweep(lam):
    out = []
    for tf in THETA_F:
        try:
            r = fisher_report(ExperimentConfig(2.0, lam, math.pi / 2, tf, phi_i=math.pi))
        except SpacsError:
            continue
        out.append((tf, r.f_tot, r.eff_fi_photon, r.eff_fi_quad))
    return np.array(out)


# %% best angle for each figure of merit
print(f"{'lambda':>7} {'max p_f Q_f':>12} {'at':>8} {'max photon':>11} {'at':>8} {'max homodyne':>13}")
for lam in (0.01, 0.05, 0.1, 1.0):
    a = sweep(lam)
    iq, ip = a[:, 1].argmax(), a[:, 2].argmax()
    print(f"{lam:>7} {a[iq, 1]:12.3f} {a[iq, 0] / math.pi:7.3f}pi {a[ip, 2]:11.3f} "
          f"{a[ip, 0] / math.pi:7.3f}pi {a[:, 3].max():13.3f}")

# %%
print("\nFor lambda >= 0.1 both detectors saturate the effective QFI at theta_f = 3pi/2 and "
      "beat the conventional value.  For weak coupling the QFI peak moves away from 3pi/2 "
      "and the photon-number statistics carry only part of it.")

"""Does maximum likelihood on photon counts reach the Cramer-Rao bound?

Simulates postselected photon counting at the optimal angle for lambda = 0.1,
estimates lambda by maximum likelihood in many independent runs, and compares
the spread of the estimates with 1 / (N p_f F).  Uses the bundled config.

Run:  python3 demos/04_cramer_rao_monte_carlo.py [n_runs]
"""
# %%
import sys
from pathlib import Path

from spacswm.cli import parse_config_file
from spacswm.estimation import crb_experiment

cfg = parse_config_file(Path(__file__).resolve().parents[1] / "configs" / "fig1c_mc.cfg")
if len(sys.argv) > 1:
    cfg = type(cfg)(**{**cfg.__dict__, "n_runs": int(sys.argv[1])})

# %%
r = crb_experiment(cfg)
print(f"true lambda        {cfg.true_lambda}")
print(f"mean estimate      {r.lambda_hat_mean:.6f}")
print(f"p_f                {r.p_f:.5f}  (accepted fraction {r.accepted_fraction:.5f})")
print(f"photon FI          {r.fisher_photon:.4f}")
print(f"variance           {r.lambda_hat_var:.4e}")
print(f"Cramer-Rao bound   {r.crb:.4e}")
print(f"efficiency         {r.efficiency:.4f}")
print("An efficiency near 1 means the estimator extracts essentially all the information "
      "that postselected photon counting provides.")

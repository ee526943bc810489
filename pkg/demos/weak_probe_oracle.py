"""Full steady-state solver against the analytic weak-probe formula.

At first order in the probe the coherence has a closed form; the full
Liouvillian solve must land on it once the probe is weak enough. The
residual panel shows the quadratic shrink of the gap as the probe weakens.
Writes demos/output/weak_probe_oracle.png.
"""

from dataclasses import replace
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from cascade_eit import DriveParams, LevelScheme, scan_probe, weak_probe_susceptibility

GAMMA = 0.97

scheme = LevelScheme()
drives = DriveParams(omega_p=1e-3 * GAMMA, omega_c=4 * GAMMA, delta_c=-9 * GAMMA)
spec = scan_probe(scheme, drives, -40 * GAMMA, 40 * GAMMA, 1001)
chi = np.array(
    [
        weak_probe_susceptibility(scheme, replace(drives, delta_p=dp))
        for dp in spec.grid
    ]
)

fig, (top, bottom) = plt.subplots(
    2, 1, figsize=(7, 5.5), sharex=True, height_ratios=[3, 1]
)
top.plot(spec.grid, spec.absorption / drives.omega_p, lw=1.8, label="full solver")
top.plot(
    spec.grid, chi.imag / drives.omega_p, "--", lw=1.0, label="first-order formula"
)
top.set_ylabel("Im $\\rho_{21} / \\Omega_p$")
top.legend()

for eps, color in ((1e-1, "tab:red"), (1e-2, "tab:orange"), (1e-3, "tab:green")):
    d = replace(drives, omega_p=eps * GAMMA)
    s = scan_probe(scheme, d, -40 * GAMMA, 40 * GAMMA, 1001)
    c = np.array(
        [
            weak_probe_susceptibility(scheme, replace(d, delta_p=dp))
            for dp in s.grid
        ]
    )
    gap = np.abs(s.absorption - c.imag) / np.abs(c.imag).max()
    print(f"omega_p = {eps:g} gamma: worst relative gap {gap.max():.2e}")
    bottom.semilogy(s.grid, gap, lw=0.9, color=color, label=f"$\\Omega_p = {eps:g}\\gamma$")

bottom.set_xlabel("$\\Delta_p$ (MHz)")
bottom.set_ylabel("relative gap")
bottom.legend(fontsize=8)
fig.tight_layout()
out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)
fig.savefig(out / "weak_probe_oracle.png", dpi=150)
print(f"wrote {out / 'weak_probe_oracle.png'}")

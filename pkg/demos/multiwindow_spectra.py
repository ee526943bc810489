"""Probe absorption and dispersion at three coupling strengths.

The upper triplet splits each dressed doublet into four peaks separated by
three transparency windows; raising the coupling pushes the outer windows
apart. Writes demos/output/multiwindow_spectra.png.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from cascade_eit import DriveParams, LevelScheme, find_peaks_dips, scan_probe

GAMMA = 0.97

scheme = LevelScheme()
ratios = (4, 7, 12)

fig, axes = plt.subplots(2, len(ratios), figsize=(12, 6), sharex=True)
for col, ratio in enumerate(ratios):
    drives = DriveParams(
        omega_p=0.01 * GAMMA, omega_c=ratio * GAMMA, delta_c=-9 * GAMMA
    )
    spec = scan_probe(scheme, drives, -40 * GAMMA, 40 * GAMMA, 2001)
    report = find_peaks_dips(spec)
    print(
        f"omega_c = {ratio:>2}g: {report.n_peaks} peaks at "
        + ", ".join(f"{p:7.2f}" for p in report.peak_positions)
        + " MHz"
    )

    ax = axes[0, col]
    ax.plot(spec.grid, spec.absorption, lw=0.9)
    ax.plot(report.dip_positions, report.dip_values, "v", ms=5, color="tab:red")
    ax.set_title(f"$\\Omega_c = {ratio}\\gamma$")
    ax.set_ylabel("Im $\\rho_{21}$" if col == 0 else "")

    ax = axes[1, col]
    ax.plot(spec.grid, spec.dispersion, lw=0.9, color="tab:green")
    ax.axhline(0.0, color="gray", lw=0.5)
    ax.set_xlabel("$\\Delta_p$ (MHz)")
    ax.set_ylabel("Re $\\rho_{21}$" if col == 0 else "")

fig.tight_layout()
out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)
fig.savefig(out / "multiwindow_spectra.png", dpi=150)
print(f"wrote {out / 'multiwindow_spectra.png'}")

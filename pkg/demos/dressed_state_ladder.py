"""Absorption peaks tracked by the dressed-state eigenvalues.

The eigenvalues of the coupling-dressed upper manifold predict where the
probe absorbs; sweeping the coupling strength traces four anticrossing
branches through the scanned peak positions. Writes
demos/output/dressed_state_ladder.png.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from cascade_eit import (
    DriveParams,
    LevelScheme,
    dressed_state_frequencies,
    find_peaks_dips,
    scan_probe,
)

GAMMA = 0.97

scheme = LevelScheme()
ratios = np.linspace(0.5, 14.0, 55)
branches = np.array(
    [
        dressed_state_frequencies(
            scheme, DriveParams(omega_c=r * GAMMA, delta_c=-9 * GAMMA)
        )
        for r in ratios
    ]
)

scan_ratios = (2, 4, 7, 10, 12)
peak_sets = []
for r in scan_ratios:
    drives = DriveParams(omega_p=0.01 * GAMMA, omega_c=r * GAMMA, delta_c=-9 * GAMMA)
    spec = scan_probe(scheme, drives, -40 * GAMMA, 40 * GAMMA, 2001)
    peaks = find_peaks_dips(spec).peak_positions
    peak_sets.append(peaks)
    print(f"omega_c = {r:>2}g: peaks " + ", ".join(f"{p:7.2f}" for p in peaks))

fig, ax = plt.subplots(figsize=(7, 4.5))
for k in range(branches.shape[1]):
    ax.plot(ratios, branches[:, k], lw=1.2, color="tab:blue")
for r, peaks in zip(scan_ratios, peak_sets):
    ax.plot([r] * len(peaks), peaks, "o", ms=4, color="tab:orange")
ax.set_xlabel("$\\Omega_c / \\gamma$")
ax.set_ylabel("frequency (MHz)")
ax.set_title("eigenvalue branches (lines) vs scanned peaks (dots)")
fig.tight_layout()
out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)
fig.savefig(out / "dressed_state_ladder.png", dpi=150)
print(f"wrote {out / 'dressed_state_ladder.png'}")

"""Approach of the driven atom to its steady state.

Propagates the master equation from the ground state in short segments,
feeding each segment's output back in as the next initial condition, and
watches the populations and probe coherence settle onto the values from the
direct linear solve. Writes demos/output/relaxation_dynamics.png.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from cascade_eit import (
    DriveParams,
    LevelScheme,
    build_liouvillian,
    default_timestep,
    steady_state,
    time_evolve,
)

GAMMA = 0.97

scheme = LevelScheme()
drives = DriveParams(omega_p=0.5 * GAMMA, omega_c=4 * GAMMA, delta_c=-9 * GAMMA)
lio = build_liouvillian(scheme, drives)
target = steady_state(lio).rho

dt = default_timestep(scheme, drives)
segment = 0.25
n_segments = 32

rho = np.zeros((5, 5), dtype=complex)
rho[0, 0] = 1.0
times = [0.0]
snapshots = [rho]
for k in range(n_segments):
    rho = time_evolve(lio, rho, t_final=segment, dt=dt).rho
    times.append((k + 1) * segment)
    snapshots.append(rho)

times = np.array(times)
ground = np.array([s[0, 0].real for s in snapshots])
excited = np.array([s[1, 1].real for s in snapshots])
upper = np.array([sum(s[k, k].real for k in (2, 3, 4)) for s in snapshots])
distance = np.array([np.abs(s - target).max() for s in snapshots])
print(f"final distance to steady state: {distance[-1]:.2e}")

fig, (top, bottom) = plt.subplots(2, 1, figsize=(7, 5.5), sharex=True)
top.plot(times, ground, label="$\\rho_{11}$")
top.plot(times, excited, label="$\\rho_{22}$")
top.plot(times, upper, label="upper triplet")
for level in (target[0, 0].real, target[1, 1].real):
    top.axhline(level, color="gray", lw=0.5, ls=":")
top.set_ylabel("population")
top.legend()

bottom.semilogy(times, np.maximum(distance, 1e-16), color="tab:red")
bottom.set_xlabel("time (1/MHz)")
bottom.set_ylabel("max $|\\rho - \\rho_\\infty|$")
fig.tight_layout()
out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)
fig.savefig(out / "relaxation_dynamics.png", dpi=150)
print(f"wrote {out / 'relaxation_dynamics.png'}")

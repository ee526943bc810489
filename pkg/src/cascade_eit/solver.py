"""Steady state and time propagation of the cascade master equation.

The generator L acts on vectorized density matrices, vec(rhodot) = L vec(rho).
The steady state is the one-dimensional kernel of L intersected with the
trace-one hyperplane; it is computed by replacing the redundant row of L with
the trace constraint and solving the dense linear system. A fixed-step
fourth-order propagator serves as an independent oracle: integrating from any
physical initial state long enough must land on the same fixed point.

Rates and frequencies are in MHz, so times are in microseconds (a rate of
1 MHz decays in 1 us up to the 2pi convention, which uniform rescaling makes
irrelevant for steady-state quantities).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .model import DriveParams, LevelScheme, Liouvillian, unvectorize, vectorize

__all__ = [
    "COND_LIMIT",
    "POSITIVITY_TOL",
    "DensityMatrix",
    "PositivityWarning",
    "SingularSystemError",
    "StepTooLargeError",
    "default_horizon",
    "default_timestep",
    "residual",
    "steady_state",
    "time_evolve",
]

# Condition number above which the trace-constrained solve is declared
# singular (no unique steady state, e.g. all decay rates zero).
COND_LIMIT = 1e14

# Steady-state eigenvalues below this raise a diagnostics warning, not an
# error: dense solves legitimately produce negative parts of order 1e-15.
POSITIVITY_TOL = -1e-8


class SingularSystemError(RuntimeError):
    """The trace-constrained linear system is numerically singular."""


class StepTooLargeError(RuntimeError):
    """A propagation step grew the state norm by more than 10x."""


class PositivityWarning(UserWarning):
    """A computed density matrix has an eigenvalue below the tolerance."""


@dataclass(frozen=True)
class DensityMatrix:
    """Solver output: the state plus how it was obtained.

    rho is the n x n complex density matrix. residual is the infinity norm
    of L vec(rho) under the generator the solver was given, and method tags
    the producing algorithm ("direct" or "rk4").
    """

    rho: np.ndarray
    residual: float
    method: str


def _as_matrix(rho: DensityMatrix | np.ndarray) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.rho
    return np.asarray(rho, dtype=complex)


def residual(liouvillian: Liouvillian, rho: DensityMatrix | np.ndarray) -> float:
    """Infinity norm of L vec(rho): zero exactly when rho is stationary."""
    vec = vectorize(_as_matrix(rho))
    return float(np.abs(liouvillian.matrix @ vec).max())


def _check_positivity(rho: np.ndarray) -> None:
    eigs = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if eigs.min() < POSITIVITY_TOL:
        warnings.warn(
            f"density matrix has eigenvalue {eigs.min():.3e} below tolerance",
            PositivityWarning,
            stacklevel=3,
        )


def steady_state(liouvillian: Liouvillian) -> DensityMatrix:
    """Unique stationary state of the generator, by direct linear solve.

    The row of L expressing d(rho_11)/dt (row 0 in column-major vectorization)
    is replaced by the trace constraint sum_k rho_kk = 1 and the resulting
    dense system is solved with partial pivoting. Requires gamma_21 > 0 and
    gamma_upper > 0 for uniqueness.

    Raises SingularSystemError when the constrained matrix has condition
    number above COND_LIMIT, which signals a scheme without a unique steady
    state (for example all decay rates zero).
    """
    lio = liouvillian.matrix
    dim = lio.shape[0]
    n = int(round(math.sqrt(dim)))
    a = lio.copy()
    a[0, :] = 0.0
    a[0, np.arange(n) * (n + 1)] = 1.0
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularSystemError(
            f"trace-constrained system is numerically singular "
            f"(condition number {cond:.3e}); the scheme has no unique steady "
            f"state (are all decay rates zero?)"
        )
    b = np.zeros(dim, dtype=complex)
    b[0] = 1.0
    vec = np.linalg.solve(a, b)
    rho = unvectorize(vec)
    _check_positivity(rho)
    return DensityMatrix(
        rho=rho,
        residual=float(np.abs(lio @ vec).max()),
        method="direct",
    )


def default_timestep(scheme: LevelScheme, drives: DriveParams) -> float:
    """Step size (us) resolving the fastest rate or detuning by factor 100."""
    scale = max(
        scheme.gamma_21,
        scheme.gamma_upper,
        drives.omega_c,
        abs(drives.delta_c) + scheme.delta1,
    )
    return 0.01 / scale


def default_horizon(scheme: LevelScheme) -> float:
    """Integration horizon (us): 50 lifetimes of the slowest decay channel."""
    slowest = min(scheme.gamma_21, scheme.gamma_upper)
    if slowest <= 0:
        raise ValueError("default horizon requires positive decay rates")
    return 50.0 / slowest


def time_evolve(
    liouvillian: Liouvillian,
    rho0: DensityMatrix | np.ndarray,
    t_final: float | None = None,
    dt: float | None = None,
) -> DensityMatrix:
    """Propagate rho0 to time t_final (us) with classical fixed-step RK4.

    For this linear autonomous system the four RK4 stages collapse exactly to
    the quartic Taylor polynomial in dt * L, so that matrix is built once and
    applied per step. dt is an upper bound on the actual step: the step is
    shrunk to land on t_final exactly. Defaults follow the generator's own
    scales (see default_timestep and default_horizon).

    Raises StepTooLargeError if any step grows the state 2-norm by more than
    10x, which indicates dt is outside the stability region.
    """
    scheme, drives = liouvillian.scheme, liouvillian.drives
    if t_final is None:
        t_final = default_horizon(scheme)
    if dt is None:
        dt = default_timestep(scheme, drives)
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t_final < dt:
        raise ValueError(f"t_final ({t_final}) must be at least dt ({dt})")

    rho0 = _as_matrix(rho0)
    if np.abs(rho0 - rho0.conj().T).max() > 1e-10:
        raise ValueError("rho0 must be Hermitian")
    trace0 = rho0.trace().real
    if abs(trace0 - 1.0) > 1e-10:
        raise ValueError(f"rho0 must have unit trace, got {trace0}")

    lio = liouvillian.matrix
    n_steps = int(math.ceil(t_final / dt))
    a = (t_final / n_steps) * lio
    eye = np.eye(lio.shape[0], dtype=complex)
    # Horner form of I + A + A^2/2 + A^3/6 + A^4/24 (classical RK4 for
    # vdot = A/dt v).
    step = eye + a @ (eye + (a / 2.0) @ (eye + (a / 3.0) @ (eye + a / 4.0)))

    vec = vectorize(rho0)
    norm_sq = np.vdot(vec, vec).real
    for _ in range(n_steps):
        vec = step @ vec
        new_norm_sq = np.vdot(vec, vec).real
        if new_norm_sq > 100.0 * norm_sq:
            raise StepTooLargeError(
                f"state norm grew more than 10x in one step (dt = {dt:g}); "
                f"reduce dt"
            )
        norm_sq = new_norm_sq

    rho = unvectorize(vec)
    drift = abs(rho.trace().real - trace0)
    if drift > 1e-8:
        warnings.warn(
            f"trace drifted by {drift:.3e} over the integration",
            RuntimeWarning,
            stacklevel=2,
        )
    _check_positivity(rho)
    return DensityMatrix(
        rho=rho,
        residual=float(np.abs(lio @ vec).max()),
        method="rk4",
    )

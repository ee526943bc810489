"""Five-level cascade atom: Hamiltonian, dissipators, Liouvillian.

The model is a ladder driven by two classical fields. A weak probe couples
the ground state |1> to the intermediate state |2>; a single coupling field
couples |2> to a triplet of closely spaced upper levels |3>, |4>, |5> with
relative transition strengths (a32, a42, a52). In the rotating frame, with
hbar = 1, the Hamiltonian is

    H = diag(0, -Dp, -(Dp+Dc), -(Dp+Dc+d1), -(Dp+Dc-d2))
        - Op |2><1| - Oc (a32 |3><2| + a42 |4><2| + a52 |5><2|) + h.c.

where Dp, Dc are the probe and coupling detunings, Op, Oc the Rabi
frequencies, and d1, d2 the splittings of the upper triplet relative to its
middle level. Spontaneous decay enters through Lindblad dissipators on the
channels 2 -> 1 (rate gamma_21) and k -> 2 for k = 3, 4, 5 (common rate
gamma_upper).

All frequencies, Rabi frequencies, and rates are stored in MHz and enter the
generator as-is. Uniformly rescaling every input only rescales time, so the
steady state and all spectra are invariant under the choice of angular versus
linear frequency convention.

Levels are labeled 1..5 in documentation and in public level-index arguments;
matrix storage is 0-based, so level k lives at row/column k - 1. Density
matrices are vectorized column-major: vec(rho) stacks the columns of rho.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "N_LEVELS",
    "DriveParams",
    "LevelScheme",
    "Liouvillian",
    "apply_lindblad",
    "build_hamiltonian",
    "build_liouvillian",
    "decay_channels",
    "unvectorize",
    "vectorize",
]

N_LEVELS = 5


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class LevelScheme:
    """Atomic structure of the cascade ladder.

    Parameters
    ----------
    n_levels:
        Number of levels. The ladder is hardwired to 5; the degenerate
        three-level limit is obtained by zeroing a42 and a52, not by
        shrinking the matrix.
    delta1:
        Splitting (MHz) between the middle upper level |3> and the higher
        one |4>.
    delta2:
        Splitting (MHz) between |3> and the lower upper level |5>.
    gamma_upper:
        Common decay rate (MHz) of each channel k -> 2, k = 3, 4, 5. Treated
        as the full population decay rate of each upper level.
    gamma_21:
        Decay rate (MHz) of the channel 2 -> 1. Defaults to the Rb 5P3/2
        natural linewidth 6.07 MHz.
    strengths:
        Relative transition strengths (a32, a42, a52), dimensionless. An
        all-zero triple with the coupling on just decouples the upper
        manifold (the two-level limit), so it is accepted.

    Rates are validated as nonnegative. A unique steady state additionally
    requires gamma_upper > 0 and gamma_21 > 0; schemes with zero rates
    construct fine and fail at solve time with a singular-system error.
    """

    n_levels: int = N_LEVELS
    delta1: float = 9.0
    delta2: float = 7.6
    gamma_upper: float = 0.97
    gamma_21: float = 6.07
    strengths: tuple[float, float, float] = (1.0, 1.46, 0.6)

    def __post_init__(self) -> None:
        strengths = tuple(_require_finite("strength", a) for a in self.strengths)
        if len(strengths) != 3:
            raise ValueError(f"strengths must have 3 entries, got {len(strengths)}")
        object.__setattr__(self, "strengths", strengths)
        for name in ("delta1", "delta2", "gamma_upper", "gamma_21"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))
        if self.n_levels != N_LEVELS:
            raise ValueError(f"n_levels must be {N_LEVELS}, got {self.n_levels}")
        if self.delta1 <= 0 or self.delta2 <= 0:
            raise ValueError("delta1 and delta2 must be positive")
        if self.gamma_upper < 0 or self.gamma_21 < 0:
            raise ValueError("decay rates must be nonnegative")
        if any(a < 0 for a in self.strengths):
            raise ValueError("transition strengths must be nonnegative")


@dataclass(frozen=True)
class DriveParams:
    """Probe and coupling field parameters, all in MHz.

    omega_p drives |1> -> |2>, omega_c drives |2> -> {|3>, |4>, |5>}.
    delta_p and delta_c are the detunings from the |1> -> |2> and
    |2> -> |3> resonances. Field phases are fixed to zero, so both Rabi
    frequencies are real and nonnegative; steady-state populations and
    |rho21| do not depend on a global field phase.
    """

    omega_p: float = 0.0
    omega_c: float = 0.0
    delta_p: float = 0.0
    delta_c: float = 0.0

    def __post_init__(self) -> None:
        for name in ("omega_p", "omega_c", "delta_p", "delta_c"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))
        if self.omega_p < 0 or self.omega_c < 0:
            raise ValueError("Rabi frequencies must be nonnegative")


@dataclass(frozen=True)
class Liouvillian:
    """Generator of the master equation on vectorized density matrices.

    matrix is the n^2 x n^2 complex array L such that
    vec(rhodot) = L @ vec(rho) with column-major vec. The scheme and drives
    it was built from are kept for provenance and for solver defaults.
    """

    matrix: np.ndarray
    scheme: LevelScheme
    drives: DriveParams

    @property
    def n_levels(self) -> int:
        return self.scheme.n_levels


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Stack the columns of a square matrix into a vector (column-major)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {rho.shape}")
    return rho.flatten(order="F")


def unvectorize(vec: np.ndarray) -> np.ndarray:
    """Inverse of vectorize: rebuild the square matrix from stacked columns."""
    vec = np.asarray(vec, dtype=complex).ravel()
    n = int(round(np.sqrt(vec.size)))
    if n * n != vec.size:
        raise ValueError(f"vector length {vec.size} is not a perfect square")
    return vec.reshape((n, n), order="F")


def _ketbra(i: int, j: int, n: int) -> np.ndarray:
    """|i><j| on an n-level space, 0-based indices."""
    m = np.zeros((n, n), dtype=complex)
    m[i, j] = 1.0
    return m


def build_hamiltonian(scheme: LevelScheme, drives: DriveParams) -> np.ndarray:
    """Rotating-frame Hamiltonian of the driven ladder, hbar = 1, in MHz.

    Returns the 5x5 Hermitian matrix with diagonal
    (0, -Dp, -(Dp+Dc), -(Dp+Dc+delta1), -(Dp+Dc-delta2)) and couplings
    H[2,1] = -omega_p, H[k,2] = -a_k * omega_c for k = 3, 4, 5 (1-based
    level labels) plus their Hermitian conjugates.
    """
    if scheme.n_levels != N_LEVELS:
        raise ValueError(f"scheme must have {N_LEVELS} levels, got {scheme.n_levels}")
    dp, dc = drives.delta_p, drives.delta_c
    a32, a42, a52 = scheme.strengths
    h = np.zeros((N_LEVELS, N_LEVELS), dtype=complex)
    h[1, 1] = -dp
    h[2, 2] = -(dp + dc)
    h[3, 3] = -(dp + dc + scheme.delta1)
    h[4, 4] = -(dp + dc - scheme.delta2)
    h[1, 0] = -drives.omega_p
    h[2, 1] = -a32 * drives.omega_c
    h[3, 1] = -a42 * drives.omega_c
    h[4, 1] = -a52 * drives.omega_c
    h += np.triu(h.conj().T, 1)
    return h


def apply_lindblad(i: int, j: int, rate: float, rho: np.ndarray) -> np.ndarray:
    """One decay channel i -> j applied to rho, levels 1-based.

    Returns rate * (s_ji rho s_ij - (s_ij s_ji rho + rho s_ij s_ji) / 2)
    with s_ij = |i><j|. The result is traceless: population leaving level i
    reappears in level j. Coherences involving level i decay at rate / 2.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"rho must be square, got shape {rho.shape}")
    n = rho.shape[0]
    if not (1 <= i <= n) or not (1 <= j <= n):
        raise IndexError(f"level index out of range: ({i}, {j}) for {n} levels")
    if i == j:
        raise ValueError("decay channel requires distinct levels")
    if rate < 0:
        raise ValueError(f"rate must be nonnegative, got {rate}")
    c = _ketbra(j - 1, i - 1, n)
    cdc = c.conj().T @ c
    return rate * (c @ rho @ c.conj().T - 0.5 * (cdc @ rho + rho @ cdc))


def decay_channels(scheme: LevelScheme) -> tuple[tuple[int, int, float], ...]:
    """Decay channels as (upper level, lower level, rate) triples, 1-based."""
    g = scheme.gamma_upper
    return (
        (2, 1, scheme.gamma_21),
        (3, 2, g),
        (4, 2, g),
        (5, 2, g),
    )


def build_liouvillian(scheme: LevelScheme, drives: DriveParams) -> Liouvillian:
    """Assemble the full generator L with vec(rhodot) = L vec(rho).

    The coherent part is -i (I kron H - H^T kron I); each decay channel
    i -> j with collapse operator C = |j><i| contributes
    rate * (conj(C) kron C - (I kron C'C + (C'C)^T kron I) / 2). Both follow
    from vec(A X B) = (B^T kron A) vec(X) for column-major vec.
    """
    h = build_hamiltonian(scheme, drives)
    n = h.shape[0]
    eye = np.eye(n)
    lio = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for upper, lower, rate in decay_channels(scheme):
        c = _ketbra(lower - 1, upper - 1, n)
        cdc = c.conj().T @ c
        lio += rate * (
            np.kron(c.conj(), c)
            - 0.5 * np.kron(eye, cdc)
            - 0.5 * np.kron(cdc.T, eye)
        )
    return Liouvillian(matrix=lio, scheme=scheme, drives=drives)

"""Probe spectra, dressed-state structure, and transparency-window metrics.

A spectrum is a sweep of the probe detuning at fixed coupling parameters:
each grid point gets its own steady-state solve, and the probe response is
read off the coherence rho21 (absorption is Im rho21, dispersion is
Re rho21, both dimensionless matrix elements). On top of that this module
provides the analytic weak-probe susceptibility as an independent oracle,
the dressed-state eigenfrequencies that locate the absorption peaks, peak
and dip extraction with prominence filtering, coupling-strength sweeps with
transparency-window metrics, and phenomenological Gaussian broadening.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .model import DriveParams, LevelScheme, build_liouvillian
from .solver import DensityMatrix, SingularSystemError, steady_state

__all__ = [
    "DipMetrics",
    "EmptyReportError",
    "GridTooCoarseError",
    "PeakReport",
    "Spectrum",
    "SpectrumMeta",
    "SweepEntry",
    "broaden",
    "deepest_dip_metrics",
    "dressed_state_frequencies",
    "find_peaks_dips",
    "scan_probe",
    "slope_profile",
    "sweep_coupling",
    "weak_probe_susceptibility",
]


class EmptyReportError(RuntimeError):
    """No absorption peak clears the prominence floor."""


class GridTooCoarseError(ValueError):
    """The broadening kernel is unresolvable on the spectrum grid."""


@dataclass(frozen=True)
class SpectrumMeta:
    """Provenance of a spectrum: inputs and any broadening applied.

    drives holds the sweep's base parameters with delta_p zeroed (the grid
    carries the actual probe detunings). broadening_fwhm_mhz is None for a
    raw spectrum and records the most recent kernel width otherwise.
    """

    scheme: LevelScheme
    drives: DriveParams
    broadening_fwhm_mhz: float | None = None


@dataclass(frozen=True)
class Spectrum:
    """Probe response on a uniform detuning grid.

    grid is strictly increasing with uniform spacing (MHz). absorption and
    dispersion are Im rho21 and Re rho21 sampled on that grid.
    """

    grid: np.ndarray
    absorption: np.ndarray
    dispersion: np.ndarray
    meta: SpectrumMeta

    def __post_init__(self) -> None:
        for name in ("grid", "absorption", "dispersion"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        n = self.grid.size
        if n < 2:
            raise ValueError("spectrum needs at least 2 grid points")
        if self.absorption.size != n or self.dispersion.size != n:
            raise ValueError("grid, absorption, and dispersion lengths differ")
        steps = np.diff(self.grid)
        if steps.min() <= 0:
            raise ValueError("grid must be strictly increasing")
        if not np.allclose(steps, steps[0], rtol=1e-6, atol=0.0):
            raise ValueError("grid spacing must be uniform")

    @property
    def spacing(self) -> float:
        return float(self.grid[1] - self.grid[0])


@dataclass(frozen=True)
class PeakReport:
    """Absorption peaks and the dips between them.

    Peaks are prominence-filtered local maxima; dips are the minima strictly
    between consecutive retained peaks, so positions interleave. separations
    lists the n_peaks - 1 gaps between neighboring peaks (MHz).
    """

    peak_indices: np.ndarray
    peak_positions: np.ndarray
    peak_values: np.ndarray
    dip_indices: np.ndarray
    dip_positions: np.ndarray
    dip_values: np.ndarray
    separations: np.ndarray

    @property
    def n_peaks(self) -> int:
        return int(self.peak_indices.size)

    @property
    def n_dips(self) -> int:
        return int(self.dip_indices.size)


@dataclass(frozen=True)
class DipMetrics:
    """Deepest transparency window of a spectrum.

    depth is the fractional contrast 1 - A_dip / min(adjacent peak A), so 0
    means no transparency and 1 means a fully dark window. width_mhz is
    measured at the half-contrast level A_dip + (min_adjacent - A_dip) / 2,
    with the crossings interpolated linearly between samples.
    """

    position_mhz: float
    value: float
    depth: float
    width_mhz: float


@dataclass(frozen=True)
class SweepEntry:
    """One coupling strength of a sweep plus its window metrics.

    Metrics that need structure the spectrum lacks are nan: max_separation
    needs at least two peaks, the dip metrics need at least one dip.
    """

    omega_c: float
    spectrum: Spectrum
    report: PeakReport
    max_separation_mhz: float
    deepest_dip_depth: float
    dip_width_mhz: float


def _thread_count() -> int:
    raw = os.environ.get("EIT_SIM_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        count = int(raw)
    except ValueError:
        raise ValueError(
            f"EIT_SIM_THREADS must be an integer >= 1, got {raw!r}"
        ) from None
    if count < 1:
        raise ValueError(f"EIT_SIM_THREADS must be an integer >= 1, got {count}")
    return count


def scan_probe(
    scheme: LevelScheme,
    drives_base: DriveParams,
    dp_min: float,
    dp_max: float,
    n_points: int,
    *,
    return_states: bool = False,
):
    """Sweep the probe detuning and record the steady-state rho21.

    drives_base supplies every field parameter except delta_p, which is
    replaced by each grid value in turn. Grid points are independent solves;
    they may be evaluated by a thread pool (capped by the EIT_SIM_THREADS
    environment variable, default all cores) and are merged back in grid
    order, so the output is identical to a sequential evaluation.

    With return_states=True, also returns the list of per-point
    DensityMatrix objects alongside the Spectrum.

    SingularSystemError from any point is re-raised annotated with the
    offending delta_p.
    """
    if not dp_min < dp_max:
        raise ValueError(f"need dp_min < dp_max, got [{dp_min}, {dp_max}]")
    n_points = int(n_points)
    if n_points < 2:
        raise ValueError(f"n_points must be at least 2, got {n_points}")
    grid = np.linspace(dp_min, dp_max, n_points)

    def solve_point(dp: float) -> DensityMatrix:
        drives = replace(drives_base, delta_p=float(dp))
        try:
            return steady_state(build_liouvillian(scheme, drives))
        except SingularSystemError as exc:
            raise SingularSystemError(f"at delta_p = {dp:g} MHz: {exc}") from exc

    threads = _thread_count()
    if threads == 1:
        states = [solve_point(dp) for dp in grid]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            states = list(pool.map(solve_point, grid))

    rho21 = np.array([state.rho[1, 0] for state in states])
    spectrum = Spectrum(
        grid=grid,
        absorption=rho21.imag,
        dispersion=rho21.real,
        meta=SpectrumMeta(
            scheme=scheme,
            drives=replace(drives_base, delta_p=0.0),
            broadening_fwhm_mhz=None,
        ),
    )
    if return_states:
        return spectrum, states
    return spectrum


def weak_probe_susceptibility(scheme: LevelScheme, drives: DriveParams) -> complex:
    """Analytic first-order rho21, the module's independent oracle.

    To first order in omega_p the ground state stays fully populated and the
    coherences rho21, rho31, rho41, rho51 close among themselves; eliminating
    the upper three gives

        rho21 = i omega_p / (gamma_21/2 - i delta_p
                + sum_k (a_k omega_c)^2 / (gamma/2 - i (delta_p + delta_c + s_k)))

    with s = 0 for level 3, +delta1 for level 4, -delta2 for level 5. Valid
    for positive decay rates; rho21 is proportional to omega_p, so the probe
    strength only sets the overall scale.
    """
    dp, dc = drives.delta_p, drives.delta_c
    denom = 0.5 * scheme.gamma_21 - 1j * dp
    offsets = (0.0, scheme.delta1, -scheme.delta2)
    for a_k, s_k in zip(scheme.strengths, offsets):
        denom += (a_k * drives.omega_c) ** 2 / (
            0.5 * scheme.gamma_upper - 1j * (dp + dc + s_k)
        )
    return complex(1j * drives.omega_p / denom)


def dressed_state_frequencies(
    scheme: LevelScheme, drives: DriveParams
) -> np.ndarray:
    """Eigenfrequencies of the coupling-dressed manifold, ascending (MHz).

    The coupling field mixes levels 2..5 into four dressed states. In the
    frame where the probe resonance sits at zero their Hamiltonian block is
    diag(0, -delta_c, -delta_c - delta1, -delta_c + delta2) with couplings
    -a_k omega_c between level 2 and each upper level. Absorption peaks
    appear where the probe hits a dressed state, at delta_p close to the
    returned eigenvalues; omega_c = 0 recovers the bare resonances.
    """
    dc = drives.delta_c
    block = np.zeros((4, 4))
    block[1, 1] = -dc
    block[2, 2] = -dc - scheme.delta1
    block[3, 3] = -dc + scheme.delta2
    for k, a_k in enumerate(scheme.strengths, start=1):
        block[k, 0] = block[0, k] = -a_k * drives.omega_c
    return np.linalg.eigvalsh(block)


def _local_maxima(values: np.ndarray) -> list[int]:
    """Interior local maxima; a flat-topped plateau reports its leftmost sample."""
    n = values.size
    maxima = []
    i = 1
    while i < n - 1:
        if values[i] > values[i - 1]:
            j = i
            while j + 1 < n and values[j + 1] == values[j]:
                j += 1
            if j + 1 < n and values[j + 1] < values[j]:
                maxima.append(i)
            i = j + 1
        else:
            i += 1
    return maxima


def _prominence(values: np.ndarray, peak: int) -> float:
    """Height of the peak above the higher of its two connecting saddles.

    On each side, walk away from the peak until a strictly higher sample (or
    the signal end) and take the minimum over that stretch; the prominence
    is the peak height minus the larger of the two minima. Matches the
    standard definition used by scipy.signal.peak_prominences.
    """
    height = values[peak]
    left_base = height
    i = peak - 1
    while i >= 0 and values[i] <= height:
        left_base = min(left_base, values[i])
        i -= 1
    right_base = height
    i = peak + 1
    while i < values.size and values[i] <= height:
        right_base = min(right_base, values[i])
        i += 1
    return float(height - max(left_base, right_base))


def find_peaks_dips(spectrum: Spectrum, prominence_floor: float = 0.05) -> PeakReport:
    """Extract absorption peaks and the dips between them.

    Local maxima are kept when their prominence reaches prominence_floor
    times the spectrum's full range (global max minus global min); the floor
    suppresses discretization ripples without hiding shallow transparency
    dips. Dips are the minima strictly between consecutive retained peaks.
    Grid endpoints never count as peaks.

    Raises EmptyReportError when nothing clears the floor.
    """
    if prominence_floor < 0:
        raise ValueError(f"prominence_floor must be >= 0, got {prominence_floor}")
    y = spectrum.absorption
    threshold = prominence_floor * float(y.max() - y.min())
    peaks = [p for p in _local_maxima(y) if _prominence(y, p) >= threshold]
    if not peaks:
        raise EmptyReportError(
            f"no absorption peak clears prominence floor {prominence_floor}"
        )
    dips = []
    for left, right in zip(peaks[:-1], peaks[1:]):
        segment = y[left + 1 : right]
        dips.append(left + 1 + int(np.argmin(segment)))
    peak_idx = np.asarray(peaks, dtype=int)
    dip_idx = np.asarray(dips, dtype=int)
    return PeakReport(
        peak_indices=peak_idx,
        peak_positions=spectrum.grid[peak_idx],
        peak_values=y[peak_idx],
        dip_indices=dip_idx,
        dip_positions=spectrum.grid[dip_idx],
        dip_values=y[dip_idx],
        separations=np.diff(spectrum.grid[peak_idx]),
    )


def _interp_crossing(
    grid: np.ndarray, y: np.ndarray, above: int, below: int, level: float
) -> float:
    """Linear interpolation of the level crossing between two samples."""
    g0, g1 = grid[above], grid[below]
    y0, y1 = y[above], y[below]
    return float(g0 + (g1 - g0) * (y0 - level) / (y0 - y1))


def deepest_dip_metrics(spectrum: Spectrum, report: PeakReport) -> DipMetrics:
    """Contrast and width of the deepest transparency window.

    The deepest dip is the one with the lowest absorption value. Its depth is
    the fractional contrast 1 - A_dip / min(adjacent peak A), a number in
    [0, 1) that grows as the window darkens relative to its shoulders; the
    absolute difference is not monotone in coupling strength because the
    shoulders themselves flatten as the peaks spread. The width is taken at
    the half-contrast level, walking from the dip toward each adjacent peak
    and interpolating the crossing.
    """
    if report.n_dips == 0:
        raise ValueError("report has no dips")
    y = spectrum.absorption
    k = int(np.argmin(report.dip_values))
    dip = int(report.dip_indices[k])
    left_peak = int(report.peak_indices[k])
    right_peak = int(report.peak_indices[k + 1])
    shoulder = float(min(y[left_peak], y[right_peak]))
    if shoulder <= 0:
        raise ValueError("adjacent peak absorption must be positive")
    depth = 1.0 - float(y[dip]) / shoulder
    level = float(y[dip]) + 0.5 * (shoulder - float(y[dip]))

    i = dip
    while i > left_peak and y[i] < level:
        i -= 1
    x_left = spectrum.grid[i] if i == dip else _interp_crossing(
        spectrum.grid, y, i, i + 1, level
    )
    i = dip
    while i < right_peak and y[i] < level:
        i += 1
    x_right = spectrum.grid[i] if i == dip else _interp_crossing(
        spectrum.grid, y, i, i - 1, level
    )
    return DipMetrics(
        position_mhz=float(spectrum.grid[dip]),
        value=float(y[dip]),
        depth=depth,
        width_mhz=float(x_right - x_left),
    )


def sweep_coupling(
    scheme: LevelScheme,
    drives_base: DriveParams,
    omega_c_list,
    dp_min: float,
    dp_max: float,
    n_points: int,
    *,
    prominence_floor: float = 0.05,
    broaden_fwhm: float | None = None,
) -> list[SweepEntry]:
    """One probe scan per coupling strength, with window metrics.

    omega_c_list must be non-empty and strictly ascending. When broaden_fwhm
    is given, each spectrum is broadened before peaks and dips are measured.
    Entries whose spectrum lacks the needed structure carry nan metrics (see
    SweepEntry).
    """
    omega_c_list = [float(oc) for oc in omega_c_list]
    if not omega_c_list:
        raise ValueError("omega_c_list must be non-empty")
    if any(b <= a for a, b in zip(omega_c_list[:-1], omega_c_list[1:])):
        raise ValueError("omega_c_list must be strictly ascending")

    entries = []
    for omega_c in omega_c_list:
        drives = replace(drives_base, omega_c=omega_c)
        spectrum = scan_probe(scheme, drives, dp_min, dp_max, n_points)
        if broaden_fwhm is not None and broaden_fwhm > 0:
            spectrum = broaden(spectrum, broaden_fwhm)
        report = find_peaks_dips(spectrum, prominence_floor)
        if report.n_peaks >= 2:
            max_separation = float(report.separations.max())
        else:
            max_separation = float("nan")
        if report.n_dips >= 1:
            metrics = deepest_dip_metrics(spectrum, report)
            depth, width = metrics.depth, metrics.width_mhz
        else:
            depth, width = float("nan"), float("nan")
        entries.append(
            SweepEntry(
                omega_c=omega_c,
                spectrum=spectrum,
                report=report,
                max_separation_mhz=max_separation,
                deepest_dip_depth=depth,
                dip_width_mhz=width,
            )
        )
    return entries


def broaden(spectrum: Spectrum, fwhm: float) -> Spectrum:
    """Convolve absorption and dispersion with a unit-area Gaussian kernel.

    The kernel is truncated at +/- 4 sigma and renormalized to unit sum, so
    the absorption integral is preserved away from the grid edges; edges are
    handled by nearest-value extension. fwhm = 0 returns the input spectrum
    unchanged.

    Raises GridTooCoarseError when 0 < fwhm < 2 grid spacings, where the
    kernel cannot be resolved.
    """
    fwhm = float(fwhm)
    if fwhm < 0:
        raise ValueError(f"fwhm must be >= 0, got {fwhm}")
    if fwhm == 0.0:
        return spectrum
    spacing = spectrum.spacing
    if fwhm < 2.0 * spacing:
        raise GridTooCoarseError(
            f"fwhm {fwhm:g} MHz is below 2 grid spacings ({2 * spacing:g} MHz)"
        )
    sigma = fwhm / (2.0 * np.sqrt(2.0 * np.log(2.0)))
    half_width = int(np.ceil(4.0 * sigma / spacing))
    offsets = np.arange(-half_width, half_width + 1) * spacing
    kernel = np.exp(-0.5 * (offsets / sigma) ** 2)
    kernel /= kernel.sum()

    def smooth(values: np.ndarray) -> np.ndarray:
        padded = np.pad(values, half_width, mode="edge")
        return np.convolve(padded, kernel, mode="valid")

    return Spectrum(
        grid=spectrum.grid,
        absorption=smooth(spectrum.absorption),
        dispersion=smooth(spectrum.dispersion),
        meta=replace(spectrum.meta, broadening_fwhm_mhz=fwhm),
    )


def slope_profile(spectrum: Spectrum) -> np.ndarray:
    """Derivative of dispersion with respect to probe detuning (1/MHz).

    Central differences in the interior, one-sided at the endpoints.
    Positive values mark normal-dispersion regions, the ones that support
    slow light; each transparency dip sits on such a region.
    """
    if spectrum.grid.size < 3:
        raise ValueError("slope profile needs at least 3 grid points")
    return np.gradient(spectrum.dispersion, spectrum.grid)

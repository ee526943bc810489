"""Top-level acceptance suite.

One test per criterion, run in order; each prints a single
"ACCEPTANCE nn PASS/FAIL" line with the measured numbers so a
pytest -v -s run doubles as the acceptance report.
"""

import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from cascade_eit import (
    DriveParams,
    LevelScheme,
    broaden,
    build_liouvillian,
    deepest_dip_metrics,
    dressed_state_frequencies,
    find_peaks_dips,
    scan_probe,
    steady_state,
    sweep_coupling,
    time_evolve,
    weak_probe_susceptibility,
)

GAMMA = 0.97
CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"

OMEGA_C_RATIOS = (4, 7, 12)


def _report(num: int, passed: bool, detail: str) -> None:
    status = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE {num:02d} {status}: {detail}")
    assert passed, f"criterion {num}: {detail}"


def _random_drives(rng):
    return DriveParams(
        omega_p=rng.uniform(0.001, 1.0) * GAMMA,
        omega_c=rng.uniform(0.0, 15.0) * GAMMA,
        delta_p=rng.uniform(-15.0, 15.0) * GAMMA,
        delta_c=rng.uniform(-15.0, 15.0) * GAMMA,
    )


@pytest.fixture(scope="module")
def fig2_scans():
    """Multiwindow scans for each coupling strength, with states and timing."""
    scheme = LevelScheme()
    out = {}
    for ratio in OMEGA_C_RATIOS:
        drives = DriveParams(
            omega_p=0.01 * GAMMA, omega_c=ratio * GAMMA, delta_c=-9 * GAMMA
        )
        start = time.perf_counter()
        spectrum, states = scan_probe(
            scheme, drives, -40 * GAMMA, 40 * GAMMA, 2001, return_states=True
        )
        elapsed = time.perf_counter() - start
        out[ratio] = (spectrum, states, elapsed)
    return out


@pytest.fixture(scope="module")
def fig2_reports(fig2_scans):
    return {
        ratio: find_peaks_dips(spectrum)
        for ratio, (spectrum, _, _) in fig2_scans.items()
    }


@pytest.fixture(scope="module")
def autler_townes_scan():
    """Three-level resonant coupling at omega_c = 10 gamma_21."""
    scheme = LevelScheme(strengths=(1.0, 0.0, 0.0))
    omega_c = 10 * scheme.gamma_21
    drives = DriveParams(omega_p=0.01 * GAMMA, omega_c=omega_c)
    spectrum, states = scan_probe(
        scheme, drives, -2.5 * omega_c, 2.5 * omega_c, 4001, return_states=True
    )
    return omega_c, spectrum, states


@pytest.fixture(scope="module")
def oracle_scan():
    """Fig 2(a) grid at a probe weak enough for the first-order formula."""
    scheme = LevelScheme()
    drives = DriveParams(
        omega_p=1e-3 * GAMMA, omega_c=4 * GAMMA, delta_c=-9 * GAMMA
    )
    spectrum, states = scan_probe(
        scheme, drives, -40 * GAMMA, 40 * GAMMA, 2001, return_states=True
    )
    return scheme, drives, spectrum, states


@pytest.fixture(scope="module")
def dip_growth_entries():
    """Raw coupling sweep at delta_c = -2 MHz over omega_c = 2, 4, 6, 9 MHz."""
    scheme = LevelScheme()
    base = DriveParams(omega_p=0.01 * GAMMA, delta_c=-2.0)
    return sweep_coupling(
        scheme, base, (2.0, 4.0, 6.0, 9.0), dp_min=-30.0, dp_max=30.0, n_points=2001
    )


def test_01_multiwindow_structure(fig2_scans, fig2_reports):
    details = []
    ok = True
    for ratio in OMEGA_C_RATIOS:
        _, _, elapsed = fig2_scans[ratio]
        report = fig2_reports[ratio]
        details.append(
            f"omega_c={ratio}g: {report.n_peaks}p/{report.n_dips}d in {elapsed:.2f}s"
        )
        ok = ok and report.n_peaks == 4 and report.n_dips == 3 and elapsed < 10.0
    dips = [fig2_reports[r].dip_positions for r in OMEGA_C_RATIOS]
    outer_left = all(b[0] < a[0] for a, b in zip(dips, dips[1:]))
    outer_right = all(b[-1] > a[-1] for a, b in zip(dips, dips[1:]))
    spreads = [d[-1] - d[0] for d in dips]
    widening = all(b > a for a, b in zip(spreads, spreads[1:]))
    ok = ok and outer_left and outer_right and widening
    details.append(f"dip spread {spreads[0]:.2f} -> {spreads[-1]:.2f} MHz")
    _report(1, ok, "; ".join(details))


def test_02_dressed_state_correspondence(fig2_reports):
    scheme = LevelScheme()
    worst = 0.0
    for ratio in OMEGA_C_RATIOS:
        drives = DriveParams(omega_c=ratio * GAMMA, delta_c=-9 * GAMMA)
        freqs = np.asarray(dressed_state_frequencies(scheme, drives))
        peaks = fig2_reports[ratio].peak_positions
        worst = max(worst, np.abs(freqs - peaks).max())
    _report(
        2,
        worst < 0.2 * GAMMA,
        f"peak vs eigenvalue offset {worst:.4f} MHz (limit {0.2 * GAMMA:.4f})",
    )


def test_03_autler_townes_separation(autler_townes_scan):
    omega_c, spectrum, _ = autler_townes_scan
    report = find_peaks_dips(spectrum)
    expected = 2 * omega_c
    ok = report.n_peaks == 2
    measured = report.separations[0] if report.n_peaks == 2 else float("nan")
    rel = abs(measured - expected) / expected
    _report(
        3,
        ok and rel < 0.02,
        f"separation {measured:.2f} MHz vs 2 a32 omega_c = {expected:.2f} "
        f"({100 * rel:.3f}% off)",
    )


def test_04_steady_state_matches_time_evolution():
    rng = np.random.default_rng(20260819)
    scheme = LevelScheme()
    rho0 = np.zeros((5, 5), dtype=complex)
    rho0[0, 0] = 1.0
    worst = 0.0
    for _ in range(20):
        lio = build_liouvillian(scheme, _random_drives(rng))
        evolved = time_evolve(lio, rho0)
        fixed = steady_state(lio)
        worst = max(worst, np.abs(evolved.rho - fixed.rho).max())
    _report(4, worst < 1e-8, f"worst element gap {worst:.2e} over 20 random sets")


def test_05_weak_probe_oracle_agreement(oracle_scan):
    scheme, drives, spectrum, _ = oracle_scan
    from dataclasses import replace

    chi = np.array(
        [
            weak_probe_susceptibility(scheme, replace(drives, delta_p=dp))
            for dp in spectrum.grid
        ]
    )
    scale = np.abs(chi.imag).max()
    worst = np.abs(spectrum.absorption - chi.imag).max() / scale
    _report(5, worst < 0.01, f"relative absorption error {worst:.2e} across grid")


def test_06_physicality_of_every_state(
    fig2_scans, autler_townes_scan, oracle_scan
):
    collections = [states for _, states, _ in fig2_scans.values()]
    collections.append(autler_townes_scan[2])
    collections.append(oracle_scan[3])
    rng = np.random.default_rng(20260819)
    scheme = LevelScheme()
    extra = [
        steady_state(build_liouvillian(scheme, _random_drives(rng))) for _ in range(20)
    ]
    collections.append(extra)
    n = 0
    herm = trace = negativity = 0.0
    for states in collections:
        for state in states:
            rho = state.rho
            herm = max(herm, np.abs(rho - rho.conj().T).max())
            trace = max(trace, abs(rho.trace() - 1.0))
            negativity = min(negativity, np.linalg.eigvalsh(rho).min())
            n += 1
    lio = build_liouvillian(
        LevelScheme(), DriveParams(omega_p=0.01, omega_c=4.0, delta_c=-8.73)
    )
    trace_rows = lio.matrix[np.arange(5) * 6, :].sum(axis=0)
    drift = 0.0
    for _ in range(100):
        vec = rng.normal(size=25) + 1j * rng.normal(size=25)
        drift = max(drift, abs(trace_rows @ vec) / np.linalg.norm(vec))
    ok = herm < 1e-10 and trace < 1e-10 and negativity > -1e-8 and drift < 1e-12
    _report(
        6,
        ok,
        f"{n} states: hermiticity {herm:.1e}, trace {trace:.1e}, "
        f"min eigenvalue {negativity:.1e}, trace drift {drift:.1e}",
    )


def test_07_scale_invariance():
    scheme = LevelScheme()
    drives = DriveParams(
        omega_p=0.01 * GAMMA, omega_c=4 * GAMMA, delta_p=1.5, delta_c=-9 * GAMMA
    )
    base = steady_state(build_liouvillian(scheme, drives)).rho
    worst = 0.0
    for s in (0.5, 3.0):
        scheme_s = LevelScheme(
            delta1=s * scheme.delta1,
            delta2=s * scheme.delta2,
            gamma_upper=s * scheme.gamma_upper,
            gamma_21=s * scheme.gamma_21,
            strengths=scheme.strengths,
        )
        drives_s = DriveParams(
            omega_p=s * drives.omega_p,
            omega_c=s * drives.omega_c,
            delta_p=s * drives.delta_p,
            delta_c=s * drives.delta_c,
        )
        scaled = steady_state(build_liouvillian(scheme_s, drives_s)).rho
        worst = max(worst, np.abs(scaled - base).max())
    _report(7, worst < 1e-10, f"steady-state change {worst:.2e} under s in {{0.5, 3}}")


def test_08_dip_growth_with_coupling(dip_growth_entries):
    raw_depths = [e.deepest_dip_depth for e in dip_growth_entries]
    raw_widths = [e.dip_width_mhz for e in dip_growth_entries]
    smooth_depths = []
    smooth_widths = []
    for entry in dip_growth_entries:
        blurred = broaden(entry.spectrum, 3.0)
        metrics = deepest_dip_metrics(blurred, find_peaks_dips(blurred))
        smooth_depths.append(metrics.depth)
        smooth_widths.append(metrics.width_mhz)

    def increasing(seq):
        return all(b > a for a, b in zip(seq, seq[1:]))

    ok = all(
        increasing(seq) for seq in (raw_depths, raw_widths, smooth_depths, smooth_widths)
    )
    _report(
        8,
        ok,
        "depth "
        + " -> ".join(f"{d:.3f}" for d in raw_depths)
        + " (broadened "
        + " -> ".join(f"{d:.3f}" for d in smooth_depths)
        + "); width "
        + " -> ".join(f"{w:.2f}" for w in raw_widths)
        + " (broadened "
        + " -> ".join(f"{w:.2f}" for w in smooth_widths)
        + ")",
    )


def test_09_broadening_conserves_area(fig2_scans):
    spectrum, _, _ = fig2_scans[4]
    raw_area = np.trapezoid(spectrum.absorption, spectrum.grid)
    worst = 0.0
    ok = True
    for fwhm in (1.0, 3.0, 5.0):
        blurred = broaden(spectrum, fwhm)
        area = np.trapezoid(blurred.absorption, blurred.grid)
        worst = max(worst, abs(area - raw_area) / raw_area)
        ok = ok and blurred.absorption.max() < spectrum.absorption.max()
    _report(
        9,
        ok and worst < 1e-3,
        f"area drift {worst:.2e} for fwhm in {{1, 3, 5}} MHz; peak height reduced",
    )


def test_10_cli_determinism_and_exit_codes(tmp_path):
    def scan(out_name, threads):
        out = tmp_path / out_name
        proc = subprocess.run(
            [
                sys.executable,
                "-m",
                "cascade_eit",
                "scan",
                "--config",
                str(CONFIG_DIR / "fig2a.cfg"),
                "--out",
                str(out),
                "--quiet",
            ],
            env={"PATH": "/usr/bin:/bin", "EIT_SIM_THREADS": str(threads)},
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        return out.read_bytes()

    identical = scan("first.csv", 1) == scan("second.csv", 2)

    malformed = tmp_path / "broken.cfg"
    malformed.write_text("omega_c_mhz == 4\n")
    code_malformed = subprocess.run(
        [sys.executable, "-m", "cascade_eit", "scan", "--config", str(malformed)],
        capture_output=True,
    ).returncode

    dead = tmp_path / "nodecay.cfg"
    dead.write_text(
        "gamma_upper_mhz = 0\ngamma_21_mhz = 0\nomega_c_mhz = 2\n"
        "dp_min_mhz = -5\ndp_max_mhz = 5\nn_points = 5\n"
    )
    code_singular = subprocess.run(
        [sys.executable, "-m", "cascade_eit", "scan", "--config", str(dead)],
        capture_output=True,
    ).returncode

    ok = identical and code_malformed == 1 and code_singular == 2
    _report(
        10,
        ok,
        f"byte-identical across thread counts: {identical}; "
        f"malformed exit {code_malformed}; zero-decay exit {code_singular}",
    )

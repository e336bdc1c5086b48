"""Acceptance criteria, one test per criterion (criterion 9 has one per property).

Each test records a PASS/FAIL line that pytest prints in an "acceptance
criteria" section at the end of the run.
"""

import math

import numpy as np
import pytest
from scipy import optimize

from afcmemory.atlas import DEFAULT_D0_RANGE, DEFAULT_F_RANGE, axis_from_range, center_map, generate_atlas
from afcmemory.bandwidth import delta_qm, optimize_delta0
from afcmemory.echosim import PulseSpec, echo_field, energy_efficiency_spectral, time_grid_for
from afcmemory.medium import GAUSSIAN_TOOTH_AREA, CombDesign, coarse_depth, envelope, period_average
from afcmemory.response import (
    analytic_backward,
    analytic_forward,
    efficiency_at,
    phase_profile,
    spectral_response,
    wing_dispersion,
)
from afcmemory.specfun import SampledProfile, gaussian_dispersion, hilbert_fft, hilbert_pv


def test_c1_analytic_backward(verdict):
    eta = analytic_backward(40, 10)
    verdict("1 analytic backward formula", abs(eta - 0.8986) <= 5e-4,
            f"eta(d0=40, f=10) = {eta:.6f}, target 0.8986 +- 0.0005")


def test_c2_forward_ceiling(verdict):
    worst, ratios = 0.0, []
    for f in (2.0, 5.0, 10.0, 15.0):
        res = optimize.minimize_scalar(lambda d: -analytic_forward(d, f, kappa=False), bounds=(0, 20 * f),
                                       method="bounded", options={"xatol": 1e-10})
        worst = max(worst, abs(-res.fun - 4 * math.exp(-2)))
        ratios.append(res.x / f)
    ok = worst <= 1e-6 and all(abs(r - 2) < 1e-3 for r in ratios)
    verdict("2 forward ceiling", ok, f"max |peak - 4e^-2| = {worst:.2e}; peak at d0/f = "
            + ", ".join(f"{r:.5f}" for r in ratios))


def test_c3_gaussian_dispersion_identity(verdict):
    d0 = 30.0
    w = np.linspace(-8, 8, 2**14)
    inner = np.abs(w) <= 4

    def line(t):
        return d0 * envelope(t)

    exact = d0 * gaussian_dispersion(w)
    fft_err = np.max(np.abs(hilbert_fft(SampledProfile(w, line(w))).values - exact)[inner])
    probe = np.linspace(-3, 3, 61)
    pv_err = max(abs(hilbert_pv(line, x, (-8, 8)) - d0 * gaussian_dispersion(x)) for x in probe)

    # truncated-Gaussian wings: comb edge between samples, probes at least 0.1 away from it;
    # the error next to a jump is O(h^2), so this part runs on 2**15 points
    w = np.linspace(-8, 8, 2**15)
    inner = np.abs(w) <= 4
    j = np.searchsorted(w, 0.4)
    b = 0.5 * (w[j - 1] + w[j])
    wings = np.where(np.abs(w) > b, envelope(w), 0.0)
    fft_wing = hilbert_fft(SampledProfile(w, wings)).values
    keep = np.nonzero(inner & (np.abs(np.abs(w) - b) >= 0.1))[0][::193]
    route_gap = max(abs(fft_wing[k] - hilbert_pv(envelope, w[k], (-8, 8), exclusion=(-b, b))) for k in keep)
    table_gap = np.max(np.abs(fft_wing[keep] - wing_dispersion(2 * b, w[keep], cache=False)))
    ok = max(fft_err, pv_err, route_gap, table_gap) <= 1e-6
    verdict("3 Gaussian dispersion identity", ok,
            f"FFT err {fft_err:.1e}, PV err {pv_err:.1e}, wing FFT-vs-PV {route_gap:.1e}, "
            f"wing FFT-vs-table {table_gap:.1e}")


def test_c4_anchor_property(verdict):
    base = CombDesign(d0=30, finesse=5, kappa=False)

    def width(d0_ext, tol=1e-4):
        design = base.replace(delta0=float(d0_ext))
        resp = spectral_response(design)
        return delta_qm(resp, 0.99, evaluator=lambda x: efficiency_at(design, x), tol=tol)

    ext = np.round(np.arange(0.05, 2.5001, 0.025), 6)
    widths = np.array([width(d) for d in ext])
    k = int(np.argmax(widths))
    tail_ext = np.round(np.arange(1.25, 2.5001, 0.05), 6)
    tail = np.array([width(d, tol=1e-9) for d in tail_ext])
    interior = 0 < k < len(ext) - 1
    ok = interior and 0.6 <= ext[k] <= 1.0 and widths[k] >= 0.3 and np.all(np.diff(tail) < 0)
    verdict("4 comb-extent anchor", ok, f"max delta_qm = {widths[k]:.4f} at delta0 = {ext[k]:.3f}; "
            f"beyond 1.2 falls {tail[0]:.4f} -> {tail[-1]:.4f}, largest step {np.diff(tail).max():.1e}")


@pytest.mark.parametrize("case,d0,f,eta,lo,hi,qm_min", [
    ("a", 20.0, 5.5, 0.7, 0.7, 1.1, 0.4),
    ("b", 8.0, 3.5, 0.2, 1.1, 1.5, 1.0),
    ("c", 43.5, 10.0, 0.9, 0.85, 1.15, 0.25),
])
def test_c5_map_spot_checks(verdict, case, d0, f, eta, lo, hi, qm_min):
    r = optimize_delta0(d0, f, eta)
    ok = lo <= r.delta0 <= hi and r.delta_qm >= qm_min and not r.flagged
    verdict(f"5{case} map spot check", ok, f"d0={d0:g}, f={f:g}, eta*={eta:g}: delta0* = {r.delta0:.4f} "
            f"(want [{lo}, {hi}]), delta_qm = {r.delta_qm:.4f} (want >= {qm_min})")


def _band_ratio(d0, f, band):
    design = CombDesign(d0=d0, finesse=f, delta0=0.1, kappa=False)
    eta = efficiency_at(design, band)
    plain = (-np.expm1(-coarse_depth(design, band))) ** 2
    return eta.mean() / plain.mean()


def test_c6_dispersion_penalty_inside_comb(verdict):
    # Read over the burned band |w| < delta0/2: at w = 0 itself phi vanishes by parity (see next test).
    band = np.linspace(-0.05, 0.05, 2001)[1:-1]
    ratios = np.array([_band_ratio(d0, 5.0, band) for d0 in range(1, 61)])
    ok = np.all(ratios < 1) and np.all(np.diff(ratios) < 0)
    verdict("6 dispersion penalty (comb band, f=5)", ok,
            f"band-mean eta_SRF / (1-e^-D)^2 = {ratios[0]:.6f} (d0=1) -> {ratios[-1]:.6f} (d0=60), "
            f"strictly decreasing: {bool(np.all(np.diff(ratios) < 0))}")


@pytest.mark.xfail(strict=True, reason="phi(0) = 0 for every even depth profile, so eta_SRF(0) equals "
                                       "(1 - e^-D(0))^2 exactly and the strict inequality cannot hold")
def test_c6_dispersion_penalty_at_line_centre(verdict):
    ratios = []
    for d0 in range(1, 61):
        design = CombDesign(d0=d0, finesse=5.0, delta0=0.1, kappa=False)
        ratios.append(efficiency_at(design, [0.0])[0] / (-math.expm1(-coarse_depth(design, 0.0))) ** 2)
    ratios = np.array(ratios)
    verdict("6 literal form at w=0 (expected to fail)", bool(np.all(ratios < 1)),
            f"ratio range [{ratios.min():.15f}, {ratios.max():.15f}]")


def test_c7_center_map(verdict):
    d0 = axis_from_range(*DEFAULT_D0_RANGE)
    f = axis_from_range(*DEFAULT_F_RANGE)
    cmap = center_map(d0, f, "analytic")

    def crossings(level):
        out = []
        for c in cmap.contours:
            if np.isclose(c.level, level):
                out.extend(p[0] for p in c.points if np.isclose(p[1], 10.0))
        return out

    x80, x90 = crossings(0.8), crossings(0.9)
    between = bool(x80 and x90 and max(x80) < 40 < min(x90))
    gaps = []
    for extent in (6.0, 8.0):
        srf = center_map(d0, f, "srf", CombDesign(delta0=extent))
        gaps.append(float(np.max(np.abs(srf.eta_center - cmap.eta_center))))
    ok = between and max(gaps) <= 0.02
    verdict("7 line-centre map", ok,
            f"at f=10 the 80% isoline sits at d0={min(x80, default=float('nan')):.2f} and the 90% isoline at "
            f"d0={min(x90, default=float('nan')):.2f}; max |srf - analytic| = {max(gaps):.1e} for delta0 = 6, 8")


def test_c8_echo_oracle(verdict):
    design = CombDesign(d0=20, finesse=5.5, delta0=0.92)
    parseval = 0.0
    for centre, bw in ((0.0, 0.01), (0.0, 0.3), (0.25, 0.1), (-0.4, 0.6)):
        pulse = PulseSpec(centre, bw)
        res = echo_field(design, pulse, time_grid_for(pulse))
        spectral = energy_efficiency_spectral(pulse, spectral_response(design, res.omega))
        parseval = max(parseval, abs(res.energy_efficiency - spectral))
    narrow = PulseSpec(0.0, 0.01)
    eff = echo_field(design, narrow, time_grid_for(narrow)).energy_efficiency
    eta0 = efficiency_at(design, [0.0])[0]
    rel = abs(eff / eta0 - 1)
    verdict("8 echo oracle", parseval <= 1e-10 and rel <= 0.01,
            f"max |FFT - Parseval| = {parseval:.1e}; bandwidth 0.01 echo {eff:.6f} vs eta(0) {eta0:.6f} "
            f"(rel {rel:.1e})")


def _random_designs(n, seed):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        yield CombDesign(d0=rng.uniform(0.5, 60), finesse=rng.uniform(1, 15), delta0=rng.uniform(0.05, 2.5),
                         dilution=bool(rng.integers(2)), kappa=bool(rng.integers(2)))


def test_c9_conjugate_symmetry_and_range(verdict):
    sym, lo, hi = 0.0, 1.0, 0.0
    for design in _random_designs(50, 11):
        r = spectral_response(design)
        sym = max(sym, float(np.max(np.abs(r.gamma[::-1] - np.conj(r.gamma)))))
        lo, hi = min(lo, float(r.eta.min())), max(hi, float(r.eta.max()))
    verdict("9 properties: Gamma(-w) = conj Gamma(w), eta in [0, 1]", sym <= 1e-9 and lo >= 0 and hi <= 1 + 1e-9,
            f"50 random designs: max asymmetry {sym:.1e}, eta range [{lo:.3g}, {hi:.6f}]")


def test_c9_monotone_in_target(verdict):
    worst = -np.inf
    for design in _random_designs(20, 12):
        r = spectral_response(design)
        widths = [delta_qm(r, t) for t in np.linspace(0.02, 0.98, 49)]
        worst = max(worst, float(np.max(np.diff(widths))))
    verdict("9 properties: delta_qm non-increasing in eta*", worst <= 0,
            f"20 designs x 49 targets, largest increase {worst:.1e}")


def test_c9_parallel_determinism(verdict):
    args = ([9.0, 20.0, 43.5], [3.5, 10.0], 0.5)
    serial = generate_atlas(*args, threads=1)
    parallel = generate_atlas(*args, threads=2)
    same = (np.array_equal(serial.delta_qm_max, parallel.delta_qm_max)
            and np.array_equal(serial.delta0_opt, parallel.delta0_opt)
            and [c.to_dict() for c in serial.contours] == [c.to_dict() for c in parallel.contours])
    verdict("9 properties: atlas independent of worker count", same, "3x2 atlas, 1 vs 2 workers, bitwise")


def test_c9_period_average(verdict):
    worst = 0.0
    for f in (5.0, 7.5, 10.0, 15.0):
        design = CombDesign(d0=30, finesse=f, delta0=0.8, delta=0.8 / 50, area_factor=GAUSSIAN_TOOTH_AREA)
        for w in np.linspace(-0.2, 0.2, 9):
            worst = max(worst, abs(period_average(design, w) / coarse_depth(design, w) - 1))
    verdict("9 properties: period average vs coarse model", worst <= 0.01,
            f"f in 5..15, |w| <= delta0/4: max relative gap {worst:.1e}")

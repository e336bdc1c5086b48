import numpy as np
import pytest

from afcmemory.bandwidth import (
    SCAN_STEP,
    bandwidth_of,
    comb_edge,
    delta_qm,
    golden_section_max,
    measure_bandwidth,
    optimize_delta0,
    scan_delta0,
)
from afcmemory.exceptions import ConfigurationError, DomainError
from afcmemory.medium import CombDesign
from afcmemory.response import SpectralResponse, efficiency_at, spectral_response


def _flat(value, omega):
    eta = np.full_like(omega, value)
    return SpectralResponse(omega, eta, 0 * eta, eta.astype(complex), eta, kappa_applied=False)


def test_constant_curve_is_grid_limited(grid):
    w, limited = bandwidth_of(grid, np.full_like(grid, 0.95), 0.9)
    assert w == pytest.approx(3.0) and limited
    assert delta_qm(_flat(0.95, grid), 0.9) == pytest.approx(3.0)


def test_centre_below_target(grid):
    assert delta_qm(_flat(0.5, grid), 0.9) == 0.0


def test_triangle_crossing_is_refined():
    omega = np.linspace(-1, 1, 201)
    eta = 1 - np.abs(omega)
    w, limited = bandwidth_of(omega, eta, 0.7)
    assert not limited
    assert w == pytest.approx(0.6, abs=1e-4)


def test_exact_evaluator_refines_between_samples():
    omega = np.linspace(-1, 1, 11)

    def ev(w):
        return 1 - w**2

    w, _ = bandwidth_of(omega, ev(omega), 0.75, evaluator=ev)
    assert w == pytest.approx(1.0, abs=1e-4)


def test_band_is_contiguous():
    omega = np.linspace(-1, 1, 401)
    eta = np.where(np.abs(np.abs(omega) - 0.3) < 0.02, 0.1, 0.95)
    assert bandwidth_of(omega, eta, 0.9)[0] < 0.6


def test_asymmetric_grid_rejected():
    omega = np.linspace(-1, 1.2, 101)
    with pytest.raises(DomainError):
        bandwidth_of(omega, np.ones_like(omega), 0.5)


def test_bad_target_rejected(grid):
    with pytest.raises(ConfigurationError):
        delta_qm(_flat(0.9, grid), 1.0)


def test_even_grid_uses_centre_value():
    omega = np.linspace(-1, 1, 100)
    assert bandwidth_of(omega, 1 - np.abs(omega), 0.5)[0] == pytest.approx(1.0, abs=1e-3)


def test_band_satisfies_target(grid):
    d = CombDesign(d0=30, finesse=5, delta0=0.8, kappa=False)
    r = spectral_response(d, grid)
    w = delta_qm(r, 0.99, evaluator=lambda x: efficiency_at(d, x))
    assert 0.3 <= w <= 0.9
    inside = np.abs(grid) <= w / 2
    assert np.all(r.eta[inside] >= 0.99)


def test_monotone_in_target(grid):
    r = spectral_response(CombDesign(d0=25, finesse=4, delta0=1.0), grid)
    widths = [delta_qm(r, t) for t in np.linspace(0.05, 0.95, 31)]
    assert all(a >= b for a, b in zip(widths, widths[1:]))


def test_golden_section_finds_peak():
    x, v = golden_section_max(lambda t: -(t - 0.37) ** 2, 0, 1, 1e-6)
    assert x == pytest.approx(0.37, abs=1e-5)


def test_golden_section_tie_prefers_small():
    seen = []

    def flat(t):
        seen.append(t)
        return 1.0

    x, _ = golden_section_max(flat, 0.2, 0.8, 1e-3)
    assert x == min(seen) and x - 0.2 < 1e-3


def test_optimize_unreachable_target_flagged():
    r = optimize_delta0(1, 5, 0.999999)
    assert r.flagged and r.delta_qm == 0.0 and r.delta0 == pytest.approx(SCAN_STEP)


def test_optimize_spot_value():
    r = optimize_delta0(20, 5.5, 0.7)
    assert 0.7 <= r.delta0 <= 1.1 and r.delta_qm >= 0.4
    assert not r.flagged
    assert r.design.delta0 == r.delta0
    again = optimize_delta0(20, 5.5, 0.7)
    assert again == r


def test_optimize_beats_scan():
    values = SCAN_STEP * np.arange(1, 201)
    scan = scan_delta0(8, 3.5, 0.2, values)
    r = optimize_delta0(8, 3.5, 0.2)
    assert r.delta_qm >= scan.max() - 2e-3


def test_optimize_search_validation():
    for search in [(0.5, 3.0), (-0.1, 1.0), (1.0, 0.5), (0.001, 0.002)]:
        with pytest.raises(ConfigurationError):
            optimize_delta0(10, 5, 0.5, search=search)


def test_measure_bandwidth_result_fields():
    d = CombDesign(d0=30, finesse=5, delta0=0.8, kappa=False)
    res = measure_bandwidth(d, 0.99)
    doc = res.to_dict()
    assert doc["design"]["d0"] == 30 and doc["eta_target"] == 0.99
    assert len(res.eta_curve_ref) == 16 and not res.grid_limited


def test_measure_bandwidth_grid_limited():
    d = CombDesign(d0=60, finesse=15, delta0=2.5)
    res = measure_bandwidth(d, 0.05, omega=np.linspace(-0.5, 0.5, 201))
    assert res.grid_limited and res.notes


def test_comb_edge_stops_the_band():
    # edge between samples of the default grid; found by the unbarred optimiser
    d = CombDesign(d0=25, finesse=4, delta0=1.591844052)
    assert comb_edge(d) == pytest.approx(0.795922026)
    assert comb_edge(d.replace(dilution=False)) is None
    assert comb_edge(CombDesign(finesse=1)) is None
    res = measure_bandwidth(d, 0.2)
    assert res.delta_qm <= d.delta0
    # the unbarred scan steps over the sub-grid notch at the edge
    r = spectral_response(d)
    assert bandwidth_of(r.omega, r.eta, 0.2)[0] > d.delta0
    assert efficiency_at(d, [0.795922026, -0.795922026]).tolist() == [0.0, 0.0]


def test_barrier_on_synthetic_curve():
    omega = np.linspace(-1, 1, 201)
    eta = np.ones_like(omega)
    assert bandwidth_of(omega, eta, 0.5, barrier=0.333)[0] == pytest.approx(0.666, abs=1e-4)

"""High-efficiency bandwidth of a spectral response and its optimisation over comb extent."""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ._validation import check_fraction, check_symmetric
from .exceptions import ConfigurationError
from .medium import CombDesign
from .response import efficiency_at, spectral_response

__all__ = [
    "BandwidthResult",
    "delta_qm",
    "bandwidth_of",
    "comb_edge",
    "measure_bandwidth",
    "scan_delta0",
    "optimize_delta0",
    "golden_section_max",
    "SCAN_STEP",
]

SCAN_STEP = 0.0125
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class BandwidthResult:
    """Outcome of a bandwidth evaluation or optimisation.

    ``grid_limited`` marks a band that reached the edge of the evaluation
    grid; ``flagged`` marks an optimisation in which no comb extent met the
    target.
    """

    eta_target: float
    delta0: float
    delta_qm: float
    eta_curve_ref: str
    grid_limited: bool = False
    flagged: bool = False
    design: CombDesign = None
    notes: tuple = field(default_factory=tuple)

    def to_dict(self):
        d = asdict(self)
        d["design"] = self.design.to_dict() if self.design else None
        d["notes"] = list(self.notes)
        return d


def _centre_pairs(n):
    # index pairs (right, left) walking outward from the grid centre
    if n % 2:
        c = n // 2
        return np.arange(c, n), np.arange(c, -1, -1)
    return np.arange(n // 2, n), np.arange(n // 2 - 1, -1, -1)


def comb_edge(design):
    """Radius at which eta vanishes exactly, or None.

    A depth jump at the comb edge makes the phase diverge there, so Gamma = 0
    at +-delta0/2. The notch is often far narrower than any grid step.
    """
    if design is None or not design.dilution or design.comb_fraction == 1.0:
        return None
    return design.half_extent


def bandwidth_of(omega, eta, eta_target, evaluator=None, tol=1e-4, barrier=None):
    """Half-width search on sampled data.

    Returns ``(width, grid_limited)``. ``evaluator`` maps an array of
    frequencies to efficiencies and is used for the crossing refinement;
    without it the samples are interpolated linearly. ``barrier`` is a
    radius the band may not reach, used for the comb-edge zeros of eta.
    """
    omega = np.asarray(omega, dtype=float)
    eta = np.asarray(eta, dtype=float)
    check_symmetric(omega)
    right, left = _centre_pairs(len(omega))
    paired = np.minimum(eta[right], eta[left])
    radii = omega[right]
    if barrier is not None:
        paired = np.where(radii >= barrier, -np.inf, paired)
    if len(omega) % 2 == 0:
        # w = 0 is not sampled on even grids
        if evaluator is not None:
            centre = float(evaluator(np.array([0.0]))[0])
        else:
            centre = paired[0]
        radii = np.concatenate([[0.0], radii])
        paired = np.concatenate([[centre], paired])
    bad = np.nonzero(paired < eta_target)[0]
    if len(bad) == 0:
        return float(omega[-1] - omega[0]), True
    k = bad[0]
    if k == 0:
        return 0.0, False
    lo, hi = radii[k - 1], radii[k]
    if barrier is not None and hi >= barrier:
        hi = barrier

    if evaluator is not None:
        def sample(r):
            v = evaluator(np.array([r, -r]))
            return min(v[0], v[1])
    else:
        def sample(r):
            return min(np.interp(r, omega, eta), np.interp(-r, omega, eta))

    def level(r):
        return -np.inf if barrier is not None and r >= barrier else sample(r)

    while hi - lo > 0.5 * tol:
        mid = 0.5 * (lo + hi)
        if level(mid) >= eta_target:
            lo = mid
        else:
            hi = mid
    return float(2.0 * lo), False


def delta_qm(response, eta_target, evaluator=None, tol=1e-4):
    """Width of the largest symmetric band about w = 0 with eta >= eta_target.

    The band is found by scanning outward from the centre and bisecting the
    first crossing to `tol`. It stops at the comb edges of the response's
    design, where eta is exactly zero. A band reaching the grid edge returns
    the full grid span.

    Raises
    ------
    DomainError
        If the response grid is not symmetric about zero.
    """
    check_fraction(eta_target, "eta_target")
    width, _ = bandwidth_of(response.omega, response.eta, eta_target, evaluator, tol,
                            barrier=comb_edge(response.design))
    return width


def measure_bandwidth(design, eta_target, omega=None, exact=True):
    """Bandwidth of a fixed design as a BandwidthResult."""
    check_fraction(eta_target, "eta_target")
    resp = spectral_response(design, omega)
    evaluator = (lambda w: efficiency_at(design, w)) if exact else None
    width, limited = bandwidth_of(resp.omega, resp.eta, eta_target, evaluator, barrier=comb_edge(design))
    notes = ("band reaches the evaluation-grid edge",) if limited else ()
    return BandwidthResult(eta_target, design.delta0, width, resp.ref, grid_limited=limited,
                           design=design, notes=notes)


def scan_delta0(d0, f, eta_target, delta0_values, base=None, omega=None):
    """Bandwidth (sampled, interpolated crossings) for each comb extent."""
    base = base or CombDesign()
    out = np.empty(len(delta0_values))
    for i, d in enumerate(delta0_values):
        design = base.replace(d0=d0, finesse=f, delta0=float(d))
        resp = spectral_response(design, omega)
        out[i] = bandwidth_of(resp.omega, resp.eta, eta_target, barrier=comb_edge(design))[0]
    return out


def golden_section_max(func, lo, hi, tol=1e-3):
    """Golden-section search for a maximum of `func` on [lo, hi].

    Returns ``(x, func(x))`` for the best point evaluated; ties keep the
    smaller abscissa.
    """
    a, b = float(lo), float(hi)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = func(c), func(d)
    best = (c, fc) if fc >= fd else (d, fd)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = func(c)
            cand = (c, fc)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = func(d)
            cand = (d, fd)
        if cand[1] > best[1] or (cand[1] == best[1] and cand[0] < best[0]):
            best = cand
    return best


def _scan_values(search, step):
    lo, hi = map(float, search)
    if not 0.0 <= lo < hi <= 2.5:
        raise ConfigurationError(f"delta0 search interval must lie in (0, 2.5], got {search!r}")
    k0 = max(1, math.ceil(lo / step - 1e-9))
    k1 = math.floor(hi / step + 1e-9)
    if k1 < k0:
        raise ConfigurationError(f"delta0 search interval {search!r} holds no scan point at step {step}")
    return step * np.arange(k0, k1 + 1)


def optimize_delta0(d0, f, eta_target, search=(0.0, 2.5), base=None, omega=None,
                    step=SCAN_STEP, tol=1e-3):
    """Comb extent maximising the high-efficiency bandwidth.

    The bandwidth is a non-smooth and sometimes multi-modal function of the
    comb extent, so every multiple of `step` inside `search` is evaluated
    first and golden-section search then refines within one step either side
    of the best scan point. The reported bandwidth is recomputed with exact
    crossing refinement at the chosen extent.

    Parameters
    ----------
    d0, f : float
        Peak optical depth and finesse.
    eta_target : float
        Efficiency threshold in (0, 1).
    search : (float, float)
        Interval of comb extents, inside (0, 2.5].
    base : CombDesign, optional
        Supplies the model toggles (kappa, dilution, area_factor, delta).
    omega : array_like, optional
        Symmetric evaluation grid; defaults to 4096 points on [-1.5, 1.5].

    Returns
    -------
    BandwidthResult
    """
    check_fraction(eta_target, "eta_target")
    base = (base or CombDesign()).replace(d0=float(d0), finesse=float(f))
    candidates = _scan_values(search, step)

    def objective(d):
        design = base.replace(delta0=float(d))
        resp = spectral_response(design, omega)
        return bandwidth_of(resp.omega, resp.eta, eta_target, barrier=comb_edge(design))[0]

    values = np.array([objective(d) for d in candidates])
    i = int(np.argmax(values))  # first maximum, i.e. the smallest extent on ties
    best_d, best_v = float(candidates[i]), float(values[i])
    if best_v == 0.0:
        design = base.replace(delta0=float(candidates[0]))
        resp = spectral_response(design, omega)
        return BandwidthResult(eta_target, float(candidates[0]), 0.0, resp.ref, flagged=True, design=design,
                               notes=("no comb extent in the search interval reaches eta_target",))

    lo = max(best_d - step, float(candidates[0]))
    hi = min(best_d + step, float(candidates[-1]))
    g_d, g_v = golden_section_max(objective, lo, hi, tol)
    if g_v > best_v:
        best_d = g_d
    design = base.replace(delta0=best_d)
    result = measure_bandwidth(design, eta_target, omega, exact=True)
    return BandwidthResult(eta_target, best_d, result.delta_qm, result.eta_curve_ref,
                           grid_limited=result.grid_limited, design=design, notes=result.notes)

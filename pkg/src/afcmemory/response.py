"""Spectral response and efficiency of backward echo retrieval.

The dispersion phase of the comb-plus-wings depth profile is split into two
pieces with known transforms::

    D = c * d0 * G + (1 - c) * d0 * G * [|w| > delta0/2]

where ``c`` is the depth ratio inside the burned region. The full Gaussian
transforms in closed form through Dawson's integral; the wing-only term is
obtained numerically once per comb extent and cached, because it does not
depend on depth or finesse.
"""

import csv
import hashlib
import json
import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import __version__
from ._validation import as_frequency_grid, uniform_grid
from .medium import CombDesign, coarse_depth, envelope
from .specfun import gaussian_dispersion, hilbert_interval

__all__ = [
    "SusceptibilityProfile",
    "SpectralResponse",
    "DEFAULT_GRID",
    "default_grid",
    "wing_dispersion",
    "phase_profile",
    "srf_gamma",
    "efficiency",
    "efficiency_at",
    "spectral_response",
    "analytic_backward",
    "analytic_forward",
    "export_response",
]

DEFAULT_GRID = (-1.5, 1.5, 4096)
# D below this is treated as "no absorbers": Gamma -> 0
_DEPTH_FLOOR = 1e-12


def default_grid():
    return uniform_grid(*DEFAULT_GRID)


def _readonly(arr):
    arr = np.array(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class SusceptibilityProfile:
    """Depth D(w) and dispersion phase phi(w) sampled on a frequency grid.

    ``phase`` is +-inf at a sample lying exactly on a comb edge, where the
    jump in depth makes the transform diverge.
    """

    omega: np.ndarray
    depth: np.ndarray
    phase: np.ndarray

    def __post_init__(self):
        for name in ("omega", "depth", "phase"):
            object.__setattr__(self, name, _readonly(np.asarray(getattr(self, name), dtype=float)))


@dataclass(frozen=True)
class SpectralResponse:
    """Complex response Gamma(w) and efficiency eta(w) on a frequency grid."""

    omega: np.ndarray
    depth: np.ndarray
    phase: np.ndarray
    gamma: np.ndarray
    eta: np.ndarray
    kappa_applied: bool
    design: CombDesign = None

    def __post_init__(self):
        for name in ("omega", "depth", "phase", "eta"):
            object.__setattr__(self, name, _readonly(np.asarray(getattr(self, name), dtype=float)))
        object.__setattr__(self, "gamma", _readonly(np.asarray(self.gamma, dtype=complex)))

    @property
    def ref(self):
        """Short content hash identifying this curve."""
        h = hashlib.sha256()
        for arr in (self.omega, self.eta):
            h.update(np.ascontiguousarray(arr).tobytes())
        return h.hexdigest()[:16]


@lru_cache(maxsize=512)
def _wing_cached(delta0, grid_bytes):
    omega = np.frombuffer(grid_bytes, dtype=float)
    return _readonly(_wing(delta0, omega))


@lru_cache(maxsize=32)
def _gauss_cached(grid_bytes):
    return _readonly(gaussian_dispersion(np.frombuffer(grid_bytes, dtype=float)))


def _gauss_phase(omega, cache):
    if cache:
        return _gauss_cached(np.ascontiguousarray(omega, dtype=float).tobytes())
    return gaussian_dispersion(omega)


def _wing(delta0, omega):
    b = 0.5 * delta0
    return gaussian_dispersion(omega) - hilbert_interval(envelope, omega, -b, b)


def wing_dispersion(delta0, omega, cache=True):
    """Transform of the unit Gaussian with the band |w| <= delta0/2 removed."""
    omega = np.ascontiguousarray(omega, dtype=float)
    if cache:
        return _wing_cached(float(delta0), omega.tobytes())
    return _wing(float(delta0), omega)


def phase_profile(design, omega=None, cache=True):
    """Depth and dispersion phase of the coarse comb model on a grid.

    Parameters
    ----------
    design : CombDesign
    omega : array_like, optional
        Strictly increasing frequencies; defaults to 4096 points on [-1.5, 1.5].
    cache : bool
        Reuse the wing transform across calls with the same extent and grid.
    """
    omega = default_grid() if omega is None else as_frequency_grid(omega, min_points=1)
    depth = coarse_depth(design, omega)
    c = design.comb_fraction
    phase = c * design.d0 * _gauss_phase(omega, cache)
    if c != 1.0:
        phase = phase + (1.0 - c) * design.d0 * wing_dispersion(design.delta0, omega, cache=cache)
    return SusceptibilityProfile(omega, depth, phase)


def srf_gamma(depth, phase):
    """Backward-retrieval response ``D (1 - exp(-D + i phi)) / (D - i phi)``.

    Equivalent to ``(1 - exp(-D + i phi)) / (1 - i phi / D)`` but finite as
    D -> 0. Returns 0 where D < 1e-12 or phi is infinite.
    """
    depth = np.asarray(depth, dtype=float)
    phase = np.asarray(phase, dtype=float)
    ok = (depth >= _DEPTH_FLOOR) & np.isfinite(phase)
    d = np.where(ok, depth, 1.0)
    p = np.where(ok, phase, 0.0)
    gamma = d * (-np.expm1(-d + 1j * p)) / (d - 1j * p)
    gamma = np.where(ok, gamma, 0.0 + 0.0j)
    return gamma if gamma.ndim else complex(gamma)


def efficiency(design, profile):
    """Spectral efficiency ``kappa**2 * |Gamma|**2`` from a susceptibility profile."""
    gamma = srf_gamma(profile.depth, profile.phase)
    eta = np.abs(gamma) ** 2
    if design.kappa:
        eta = eta * design.decoherence**2
    return SpectralResponse(
        omega=profile.omega,
        depth=profile.depth,
        phase=profile.phase,
        gamma=gamma,
        eta=eta,
        kappa_applied=design.kappa,
        design=design,
    )


def spectral_response(design, omega=None, cache=True):
    """Convenience: `phase_profile` followed by `efficiency`."""
    return efficiency(design, phase_profile(design, omega, cache=cache))


def efficiency_at(design, omega):
    """Efficiency at arbitrary frequencies, bypassing the grid cache."""
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    profile = SusceptibilityProfile(omega, coarse_depth(design, omega), _phase_uncached(design, omega))
    return efficiency(design, profile).eta


def _phase_uncached(design, omega):
    c = design.comb_fraction
    phase = c * design.d0 * gaussian_dispersion(omega)
    if c != 1.0:
        phase = phase + (1.0 - c) * design.d0 * _wing(design.delta0, omega)
    return phase


def analytic_backward(d0, f, kappa=True):
    """Closed-form line-centre efficiency ``(1 - exp(-d0/f))**2 * exp(-7/f**2)``."""
    if d0 < 0 or f < 1:
        raise ValueError("need d0 >= 0 and f >= 1")
    eta = (-math.expm1(-d0 / f)) ** 2
    return eta * math.exp(-7.0 / f**2) if kappa else eta


def analytic_forward(d0, f, kappa=True):
    """Closed-form forward-retrieval efficiency ``(d0/f)**2 exp(-d0/f) exp(-7/f**2)``."""
    if d0 < 0 or f < 1:
        raise ValueError("need d0 >= 0 and f >= 1")
    x = d0 / f
    eta = x * x * math.exp(-x)
    return eta * math.exp(-7.0 / f**2) if kappa else eta


def _fmt(x):
    return repr(float(x))


def export_response(response, out_dir, stem="response"):
    """Write ``<stem>.csv`` and a ``<stem>.json`` sidecar; return both paths."""
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"{stem}.csv")
    json_path = os.path.join(out_dir, f"{stem}.json")
    try:
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["omega", "D", "phi", "re_gamma", "im_gamma", "eta"])
            for row in zip(response.omega, response.depth, response.phase,
                           response.gamma.real, response.gamma.imag, response.eta):
                writer.writerow([_fmt(v) for v in row])
        meta = {
            "version": __version__,
            "design": response.design.to_dict() if response.design else None,
            "kappa_applied": response.kappa_applied,
            "grid": {"start": float(response.omega[0]), "stop": float(response.omega[-1]),
                     "points": int(len(response.omega))},
            "ref": response.ref,
        }
        with open(json_path, "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"failed writing response artifacts to {out_dir!r}: {exc}") from exc
    return csv_path, json_path
